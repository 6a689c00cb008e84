#include "pddlsim/validator.hpp"

#include "pddlsim/errors.hpp"

#include <map>

namespace pddlsim {

ValidationReport validate_plan(const Problem& problem, const std::vector<GroundAction>& grounded,
                               std::span<const std::string> plan) {
    std::map<std::string, const GroundAction*> by_signature;
    for (const auto& ga : grounded) by_signature[ga.signature] = &ga;

    ValidationReport report;
    report.plan_length = plan.size();
    State state = problem.init;
    for (std::size_t i = 0; i < plan.size(); ++i) {
        auto it = by_signature.find(plan[i]);
        if (it == by_signature.end()) throw UnknownActionError(plan[i]);
        const GroundAction& action = *it->second;
        if (!applicable(state, action)) {
            report.failing_step =
                FailingStep{i + 1, plan[i], unsatisfied_preconditions(state, action)};
            break;
        }
        state = pddlsim::apply(state, action);
        ++report.steps_applied;
    }
    report.final_state = std::move(state);
    report.goal_satisfied = goal_satisfied(report.final_state, problem.goal);
    report.valid = !report.failing_step && report.goal_satisfied &&
                   report.steps_applied == report.plan_length;
    return report;
}

ValidationReport validate_plan(const Domain& domain, const Problem& problem,
                               std::span<const std::string> plan) {
    return validate_plan(problem, ground(domain, problem), plan);
}

} // namespace pddlsim
