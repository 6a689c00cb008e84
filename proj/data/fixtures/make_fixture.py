#!/usr/bin/env python3
"""Regenerates paper_runs.jsonl, the reference-results fixture.

The aggregate numbers (success/timeout/early-exit counts, token totals,
per-block mean plan lengths, hard-case partitions) are fixed targets; the
per-instance rows are a deterministic reconstruction consistent with them.
See README.md in this directory for which cells are exact and which are
reconstructed.
"""

import json
import os

APPROACHES = ["fd-lama-first", "fd-seq-sat-lama-2011", "direct-llm", "agentic-llm"]

# The 15 instances neither Fast Downward configuration solved in budget.
FD_TIMEOUTS = {72, 76, 78, 84, 86, 87, 92, 94, 96, 97, 98, 99, 100, 101, 102}

AGENTIC_EARLY_EXITS = {32, 88, 89, 96, 98, 100}

DIRECT_SOLVED = (
    set(range(1, 31))
    | {31, 32, 33, 34, 35, 36, 37}
    | set(range(41, 49))
    | set(range(51, 57))
    | {61, 62, 63}
    | {71, 73, 74, 75}
    | {81, 86, 88, 89, 90}
    | {95, 100}
)

AGENTIC_SOLVED = (
    set(range(1, 30))
    | {31, 33, 34, 35, 36, 37, 38, 39}
    | {41, 42, 43, 44, 45, 46, 47, 49, 50}
    | {51, 52, 53, 54, 57, 58, 59}
    | {64, 65, 66, 67, 68}
    | {71, 73, 74, 76, 78}
    | {83, 86}
    | {91, 93}
    | {101}
)

# Per-instance plan lengths, keyed (approach, instance). Only solved cells.
LENGTHS = {}


def set_lengths(approach, pairs):
    for inst, length in pairs:
        LENGTHS[(approach, inst)] = length


def const(instances, value):
    return [(i, value) for i in instances]


# Block 1-10.
set_lengths("fd-lama-first", const(range(1, 11), 14))
set_lengths("fd-seq-sat-lama-2011", const(range(1, 11), 14))
set_lengths("direct-llm", const(range(1, 11), 14))
set_lengths("agentic-llm", [(1, 14)] + const(range(2, 11), 16))

# Block 11-20.
set_lengths("fd-lama-first", [(11, 38)] + const(range(12, 21), 40))
set_lengths("fd-seq-sat-lama-2011", const([11, 12], 36) + const(range(13, 21), 38))
set_lengths("direct-llm", const([11, 12, 13, 14], 28) + const(range(15, 21), 27))
set_lengths("agentic-llm", const([11, 12, 13, 14], 30) + const(range(15, 21), 31))

# Block 21-30 (co-solved: 21-29).
set_lengths("fd-lama-first", const(range(21, 30), 60) + [(30, 76)])
set_lengths("fd-seq-sat-lama-2011", const(range(21, 29), 36) + [(29, 38), (30, 38)])
set_lengths("direct-llm", const(range(21, 29), 40) + [(29, 44), (30, 50)])
set_lengths("agentic-llm", const(range(21, 27), 45) + const([27, 28, 29], 44))

# Block 31-40 (co-solved: 31, 33-37).
set_lengths("fd-lama-first",
            const([31, 33, 34, 35], 164) + const([36, 37], 165)
            + const([32, 38, 39], 120) + [(40, 118)])
set_lengths("fd-seq-sat-lama-2011",
            const([31, 33, 34, 35], 63) + const([36, 37], 64)
            + const([32, 38, 39, 40], 67))
set_lengths("direct-llm",
            const([31, 33, 34, 35], 60) + const([36, 37], 59) + [(32, 70)])
set_lengths("agentic-llm",
            const([31, 33, 34, 35], 60) + const([36, 37], 61) + const([38, 39], 65))

# Block 41-50 (co-solved: 41-47).
set_lengths("fd-lama-first",
            const(range(41, 47), 197) + [(47, 198)] + const([48, 49, 50], 204))
set_lengths("fd-seq-sat-lama-2011",
            const([41, 42, 43], 92) + const([44, 45, 46, 47], 93)
            + const([48, 49, 50], 140))
set_lengths("direct-llm", const(range(41, 48), 78) + [(48, 90)])
set_lengths("agentic-llm",
            const(range(41, 47), 78) + [(47, 82)] + const([49, 50], 100))

# Block 51-60 (co-solved: 51-54).
set_lengths("fd-lama-first",
            const([51, 52], 215) + const([53, 54], 216) + const(range(55, 61), 227))
set_lengths("fd-seq-sat-lama-2011",
            const([51, 52], 144) + const([53, 54], 145)
            + const([55, 56, 57, 58], 129) + const([59, 60], 130))
set_lengths("direct-llm",
            const([51, 52], 99) + const([53, 54], 100) + const([55, 56], 120))
set_lengths("agentic-llm",
            const([51, 52], 124) + const([53, 54], 125) + const([57, 58, 59], 130))

# Block 61-70 (no co-solved instances).
set_lengths("fd-lama-first", const(range(61, 69), 254) + const([69, 70], 253))
set_lengths("fd-seq-sat-lama-2011", const(range(61, 69), 207) + const([69, 70], 208))
set_lengths("direct-llm", const([61, 62, 63], 200))
set_lengths("agentic-llm", const([64, 65, 66, 67, 68], 210))

# Block 71-80 (FD solves 71, 73, 74, 75, 77, 79, 80; co-solved: 71, 73, 74).
set_lengths("fd-lama-first", const([71, 73, 74], 142) + const([75, 77, 79, 80], 386))
set_lengths("fd-seq-sat-lama-2011",
            const([71, 73], 137) + [(74, 136)] + const([75, 77, 79, 80], 297))
set_lengths("direct-llm", const([71, 73], 139) + [(74, 140), (75, 150)])
set_lengths("agentic-llm", [(71, 139), (73, 140), (74, 139), (76, 200), (78, 210)])

# Block 81-90 (FD solves 81, 82, 83, 85, 88, 89, 90; no four-way co-solved).
set_lengths("fd-lama-first", const([81, 82, 83, 85, 88, 89, 90], 380))
set_lengths("fd-seq-sat-lama-2011", const([81, 82, 83, 85, 88, 89, 90], 328))
set_lengths("direct-llm", const([81, 86, 88, 89, 90], 400))
set_lengths("agentic-llm", const([83, 86], 420))

# Block 91-100 (FD solves 91, 93, 95).
set_lengths("fd-lama-first", const([91, 93, 95], 484))
set_lengths("fd-seq-sat-lama-2011", const([91, 93], 375) + [(95, 374)])
set_lengths("direct-llm", [(95, 500), (100, 520)])
set_lengths("agentic-llm", [(91, 510), (93, 505)])

# Block 101-102: only the agentic run closes 101.
set_lengths("agentic-llm", [(101, 186)])

TOKENS = {
    "fd-lama-first": (0, 0),
    "fd-seq-sat-lama-2011": (0, 0),
    "direct-llm": (20000, 8488),      # 28,488 per run
    "agentic-llm": (150000, 19864),   # 169,864 per run
}


def status_of(approach, inst):
    if approach in ("fd-lama-first", "fd-seq-sat-lama-2011"):
        return "solved" if inst not in FD_TIMEOUTS else "timeout"
    if approach == "direct-llm":
        return "solved" if inst in DIRECT_SOLVED else "timeout"
    if inst in AGENTIC_SOLVED:
        return "solved"
    return "early_exit" if inst in AGENTIC_EARLY_EXITS else "timeout"


def main():
    out_path = os.path.join(os.path.dirname(__file__), "paper_runs.jsonl")
    with open(out_path, "w") as out:
        for inst in range(1, 103):
            for approach in APPROACHES:
                status = status_of(approach, inst)
                tokens_in, tokens_out = TOKENS[approach]
                record = {
                    "instance": str(inst),
                    "approach": approach,
                    "status": status,
                    "wall_time_s": {
                        "solved": round(2.0 + inst * 0.9, 1),
                        "timeout": 180.0,
                        "early_exit": 100.0,
                    }[status],
                    "tokens_in": tokens_in,
                    "tokens_out": tokens_out,
                    "attempts": (2 if status == "solved" else 15)
                    if approach == "direct-llm" else 1,
                    "timestamp": "2025-11-01T00:00:00Z",
                }
                if status == "solved":
                    record["plan_length"] = LENGTHS[(approach, inst)]
                out.write(json.dumps(record) + "\n")
    print(f"wrote {out_path}")


if __name__ == "__main__":
    main()
