// Test-only helpers: random Blocksworld instances and independent
// brute-force oracles kept separate from the library implementation.
#pragma once

#include "pddlsim/grounding.hpp"
#include "pddlsim/sim_engine.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace bw {

inline std::string data_path(const std::string& relative) {
    return std::string(PDDLSIM_DATA_DIR) + "/" + relative;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline std::string blocksworld_domain_text() {
    return read_file(data_path("blocksworld/domain.pddl"));
}

// Splits blocks 0..n-1 into random towers; returns bottom-to-top towers.
inline std::vector<std::vector<std::string>> random_towers(int n_blocks, std::mt19937& rng) {
    std::vector<std::string> blocks;
    for (int i = 0; i < n_blocks; ++i) blocks.push_back(std::string(1, char('a' + i)));
    std::shuffle(blocks.begin(), blocks.end(), rng);

    std::vector<std::vector<std::string>> towers;
    for (const auto& block : blocks) {
        if (towers.empty() || std::uniform_int_distribution<int>(0, 1)(rng) == 0)
            towers.push_back({block});
        else
            towers[std::uniform_int_distribution<std::size_t>(0, towers.size() - 1)(rng)]
                .push_back(block);
    }
    return towers;
}

inline std::string towers_to_atoms(const std::vector<std::vector<std::string>>& towers) {
    std::string atoms;
    for (const auto& tower : towers) {
        atoms += " (ontable " + tower.front() + ")";
        for (std::size_t i = 1; i < tower.size(); ++i)
            atoms += " (on " + tower[i] + " " + tower[i - 1] + ")";
        atoms += " (clear " + tower.back() + ")";
    }
    return atoms;
}

// A random solvable instance: random init towers, random goal towers over
// the same blocks. The goal lists only the (on x y) facts.
inline std::string random_problem_text(int n_blocks, std::mt19937& rng) {
    auto init_towers = random_towers(n_blocks, rng);
    auto goal_towers = random_towers(n_blocks, rng);

    std::string objects;
    for (int i = 0; i < n_blocks; ++i) objects += std::string(i ? " " : "") + char('a' + i);

    std::string goal;
    for (const auto& tower : goal_towers)
        for (std::size_t i = 1; i < tower.size(); ++i)
            goal += " (on " + tower[i] + " " + tower[i - 1] + ")";
    if (goal.empty()) {
        // All-singleton goal: pin one block to the table so the goal is nonempty.
        goal = " (ontable " + goal_towers.front().front() + ")";
    }

    return "(define (problem bw-random)\n  (:domain blocksworld)\n  (:objects " + objects +
           ")\n  (:init" + towers_to_atoms(init_towers) + " (handempty))\n  (:goal (and" + goal +
           ")))\n";
}

// Independent applicability filter: re-derives the applicable set directly
// from precondition membership, without going through Session.
inline std::vector<std::string> brute_force_applicable(
    const pddlsim::State& state, const std::vector<pddlsim::GroundAction>& grounded) {
    std::vector<std::string> out;
    for (const auto& ga : grounded) {
        bool ok = true;
        for (const auto& atom : ga.pre_pos)
            if (state.find(atom) == state.end()) ok = false;
        for (const auto& atom : ga.pre_neg)
            if (state.find(atom) != state.end()) ok = false;
        if (ok) out.push_back(ga.signature);
    }
    std::sort(out.begin(), out.end());
    return out;
}

// Independent substitution oracle: rebuilds a ground action's atom sets by
// substituting its arguments into the schema literals.
inline bool matches_schema_substitution(const pddlsim::Domain& domain,
                                        const pddlsim::GroundAction& ga) {
    const pddlsim::ActionSchema* schema = nullptr;
    for (const auto& a : domain.actions)
        if (a.name == ga.name) schema = &a;
    if (!schema || schema->params.size() != ga.args.size()) return false;

    std::map<std::string, std::string> binding;
    for (std::size_t i = 0; i < schema->params.size(); ++i)
        binding[schema->params[i].name] = ga.args[i];
    auto subst = [&](const pddlsim::Literal& lit) {
        pddlsim::Atom atom{lit.pred, {}};
        for (const auto& term : lit.args) {
            auto it = binding.find(term);
            atom.args.push_back(it != binding.end() ? it->second : term);
        }
        return atom;
    };
    auto contains = [](const std::vector<pddlsim::Atom>& atoms, const pddlsim::Atom& atom) {
        return std::find(atoms.begin(), atoms.end(), atom) != atoms.end();
    };

    for (const auto& lit : schema->precondition) {
        if (lit.pred == "=") continue;
        if (!contains(lit.positive ? ga.pre_pos : ga.pre_neg, subst(lit))) return false;
    }
    for (const auto& lit : schema->add_effects)
        if (!contains(ga.adds, subst(lit))) return false;
    for (const auto& lit : schema->delete_effects)
        if (!contains(ga.dels, subst(lit))) return false;
    return true;
}

} // namespace bw
