#include "pddlsim/oracle.hpp"

#include "pddlsim/grounding.hpp"
#include "pddlsim/sim_engine.hpp"
#include "pddlsim/validator.hpp"

#include <deque>
#include <queue>
#include <stdexcept>
#include <unordered_map>

namespace pddlsim {
namespace {

std::string state_key(const State& state) {
    std::string key;
    for (const auto& atom : state) {
        key += atom.str();
        key += '|';
    }
    return key;
}

std::size_t goal_count(const State& state, const std::vector<Literal>& goal) {
    std::size_t unsatisfied = 0;
    for (const auto& lit : goal) {
        bool holds = state.count(Atom{lit.pred, lit.args}) > 0;
        if (holds != lit.positive) ++unsatisfied;
    }
    return unsatisfied;
}

struct Node {
    State state;
    std::vector<std::string> plan;
};

void check_result(const Problem& problem, const std::vector<GroundAction>& grounded,
                  const std::vector<std::string>& plan) {
    if (!validate_plan(problem, grounded, plan).valid)
        throw std::logic_error("search produced a plan that fails validation");
}

} // namespace

SearchResult solve_optimal(const Domain& domain, const Problem& problem, std::size_t node_budget) {
    const std::vector<GroundAction> grounded = ground(domain, problem);
    SearchResult result;
    result.optimal = true;

    std::deque<Node> frontier;
    std::unordered_map<std::string, bool> visited;
    frontier.push_back({problem.init, {}});
    visited[state_key(problem.init)] = true;

    while (!frontier.empty()) {
        if (result.nodes_expanded >= node_budget) {
            result.exhausted = true;
            return result;
        }
        Node node = std::move(frontier.front());
        frontier.pop_front();
        ++result.nodes_expanded;

        if (goal_satisfied(node.state, problem.goal)) {
            check_result(problem, grounded, node.plan);
            result.plan = std::move(node.plan);
            return result;
        }
        for (const auto& ga : grounded) {
            if (!applicable(node.state, ga)) continue;
            State next = pddlsim::apply(node.state, ga);
            auto [it, inserted] = visited.try_emplace(state_key(next), true);
            if (!inserted) continue;
            std::vector<std::string> plan = node.plan;
            plan.push_back(ga.signature);
            frontier.push_back({std::move(next), std::move(plan)});
        }
    }
    return result; // space closed, no plan
}

SearchResult solve_greedy(const Domain& domain, const Problem& problem, std::size_t node_budget) {
    const std::vector<GroundAction> grounded = ground(domain, problem);
    SearchResult result;

    // (h, insertion order) keeps expansion deterministic under heuristic ties.
    using Entry = std::pair<std::pair<std::size_t, std::size_t>, Node>;
    auto cmp = [](const Entry& a, const Entry& b) { return a.first > b.first; };
    std::priority_queue<Entry, std::vector<Entry>, decltype(cmp)> frontier(cmp);
    std::unordered_map<std::string, bool> visited;
    std::size_t tick = 0;

    frontier.push({{goal_count(problem.init, problem.goal), tick++}, {problem.init, {}}});
    visited[state_key(problem.init)] = true;

    while (!frontier.empty()) {
        if (result.nodes_expanded >= node_budget) {
            result.exhausted = true;
            return result;
        }
        Node node = std::move(const_cast<Entry&>(frontier.top()).second);
        frontier.pop();
        ++result.nodes_expanded;

        if (goal_satisfied(node.state, problem.goal)) {
            check_result(problem, grounded, node.plan);
            result.plan = std::move(node.plan);
            return result;
        }
        for (const auto& ga : grounded) {
            if (!applicable(node.state, ga)) continue;
            State next = pddlsim::apply(node.state, ga);
            auto [it, inserted] = visited.try_emplace(state_key(next), true);
            if (!inserted) continue;
            std::vector<std::string> plan = node.plan;
            plan.push_back(ga.signature);
            std::size_t h = goal_count(next, problem.goal);
            frontier.push({{h, tick++}, {std::move(next), std::move(plan)}});
        }
    }
    return result;
}

} // namespace pddlsim
