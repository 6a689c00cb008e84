#pragma once

#include "pddlsim/pddl.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace pddlsim {

struct SearchResult {
    std::optional<std::vector<std::string>> plan;
    std::size_t nodes_expanded = 0;
    bool optimal = false;
    bool exhausted = false; // node budget hit before the space was closed
};

inline constexpr std::size_t kDefaultNodeBudget = 1'000'000;

// Breadth-first search over the grounded transition system. Returns a
// shortest plan when one exists within the budget; ties broken by the
// lexicographic ground-action order.
SearchResult solve_optimal(const Domain& domain, const Problem& problem,
                           std::size_t node_budget = kDefaultNodeBudget);

// Greedy best-first search with the goal-count heuristic (number of
// unsatisfied goal literals). Satisficing only.
SearchResult solve_greedy(const Domain& domain, const Problem& problem,
                          std::size_t node_budget = kDefaultNodeBudget);

} // namespace pddlsim
