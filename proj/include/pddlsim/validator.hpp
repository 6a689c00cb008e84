#pragma once

#include "pddlsim/sim_engine.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace pddlsim {

struct FailingStep {
    std::size_t index = 0; // 1-based position in the plan
    std::string signature;
    std::vector<std::string> unsatisfied;
};

struct ValidationReport {
    bool valid = false;
    std::size_t steps_applied = 0;
    std::optional<FailingStep> failing_step;
    State final_state;
    bool goal_satisfied = false;
    std::size_t plan_length = 0;
};

// Simulates `plan` from the initial state, stopping at the first
// inapplicable step. A plan that applies fully but misses the goal reports
// valid = false with failing_step absent. Throws UnknownActionError when a
// signature is not in the grounding.
ValidationReport validate_plan(const Domain& domain, const Problem& problem,
                               std::span<const std::string> plan);

// Same check against a pre-grounded action set (avoids re-grounding when a
// session is already live).
ValidationReport validate_plan(const Problem& problem, const std::vector<GroundAction>& grounded,
                               std::span<const std::string> plan);

} // namespace pddlsim
