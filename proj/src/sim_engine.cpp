#include "pddlsim/sim_engine.hpp"

#include "pddlsim/errors.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace pddlsim {

bool goal_satisfied(const State& state, const std::vector<Literal>& goal) {
    for (const auto& lit : goal) {
        bool holds = state.count(Atom{lit.pred, lit.args}) > 0;
        if (holds != lit.positive) return false;
    }
    return true;
}

bool applicable(const State& state, const GroundAction& action) {
    for (const auto& atom : action.pre_pos)
        if (!state.count(atom)) return false;
    for (const auto& atom : action.pre_neg)
        if (state.count(atom)) return false;
    return true;
}

std::vector<std::string> unsatisfied_preconditions(const State& state, const GroundAction& action) {
    std::vector<std::string> unsatisfied;
    for (const auto& atom : action.pre_pos)
        if (!state.count(atom)) unsatisfied.push_back(atom.str());
    for (const auto& atom : action.pre_neg)
        if (state.count(atom)) unsatisfied.push_back("(not " + atom.str() + ")");
    return unsatisfied;
}

State apply(const State& state, const GroundAction& action) {
    State next = state;
    for (const auto& atom : action.dels) next.erase(atom);
    for (const auto& atom : action.adds) next.insert(atom);
    return next;
}

Session::Session(std::string id, Domain domain, Problem problem)
    : id_(std::move(id)), domain_(std::move(domain)), problem_(std::move(problem)) {
    if (problem_.domain_name != domain_.name)
        throw IncompatiblePairError(domain_.name, problem_.domain_name);
    grounded_ = ground(domain_, problem_);
    for (std::size_t i = 0; i < grounded_.size(); ++i)
        by_signature_[grounded_[i].signature] = i;
    current_ = problem_.init;
    goal_reached_ = goal_satisfied(current_, problem_.goal);
}

SessionSummary Session::summary() const {
    return SessionSummary{id_, problem_.all_objects(domain_).size(), problem_.init.size(),
                          problem_.goal.size(), grounded_.size()};
}

std::vector<std::string> Session::applicable_actions() const {
    std::vector<std::string> out;
    for (const auto& ga : grounded_)
        if (applicable(current_, ga)) out.push_back(ga.signature);
    std::sort(out.begin(), out.end());
    return out;
}

const GroundAction& Session::find_action(const std::string& signature) const {
    auto it = by_signature_.find(signature);
    if (it == by_signature_.end()) throw UnknownActionError(signature);
    return grounded_[it->second];
}

StepResult Session::execute(const std::string& signature) {
    const GroundAction& action = find_action(signature);
    StepResult result;
    if (!applicable(current_, action)) {
        ++failed_attempts_;
        result.applied = false;
        result.state = current_;
        result.goal_reached = goal_reached_;
        std::string names;
        for (const auto& lit : unsatisfied_preconditions(current_, action)) {
            if (!names.empty()) names += ", ";
            names += lit;
        }
        result.message = "action " + signature + " is not applicable; unsatisfied: " + names;
        return result;
    }
    current_ = pddlsim::apply(current_, action);
    history_.emplace_back(static_cast<int>(history_.size()) + 1, signature);
    goal_reached_ = goal_satisfied(current_, problem_.goal);
    result.applied = true;
    result.state = current_;
    result.goal_reached = goal_reached_;
    result.message = "applied " + signature + (goal_reached_ ? "; goal reached" : "");
    return result;
}

void Session::reset() {
    current_ = problem_.init;
    history_.clear();
    failed_attempts_ = 0;
    goal_reached_ = goal_satisfied(current_, problem_.goal);
}

bool Session::replay_consistent() const {
    State state = problem_.init;
    for (const auto& [step, sig] : history_) {
        auto it = by_signature_.find(sig);
        if (it == by_signature_.end()) return false;
        state = pddlsim::apply(state, grounded_[it->second]);
    }
    return state == current_;
}

std::string load_source(const std::string& source) {
    if (source.find('(') != std::string::npos) return source;
    std::ifstream in(source);
    if (!in) throw PddlError("io_error", "cannot read file: " + source);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

SessionSummary SessionRegistry::initialise(const std::string& domain_source,
                                           const std::string& problem_source,
                                           std::optional<std::string> session_id) {
    Domain domain = parse_domain(load_source(domain_source));
    Problem problem = parse_problem(load_source(problem_source), domain);

    std::lock_guard lock(mutex_);
    std::string id = session_id ? *session_id : "session-" + std::to_string(next_id_++);
    Session session(id, std::move(domain), std::move(problem));
    SessionSummary summary = session.summary();
    sessions_.insert_or_assign(id, std::move(session));
    return summary;
}

const Session& SessionRegistry::find(const std::string& session_id) const {
    auto it = sessions_.find(session_id);
    if (it == sessions_.end()) throw UnknownSessionError(session_id);
    return it->second;
}

Session& SessionRegistry::find(const std::string& session_id) {
    auto it = sessions_.find(session_id);
    if (it == sessions_.end()) throw UnknownSessionError(session_id);
    return it->second;
}

std::pair<std::vector<Atom>, bool> SessionRegistry::query_current_state(
    const std::string& session_id) const {
    std::lock_guard lock(mutex_);
    const Session& s = find(session_id);
    return {{s.current().begin(), s.current().end()}, s.goal_reached()};
}

std::vector<std::string> SessionRegistry::query_applicable_actions(
    const std::string& session_id) const {
    std::lock_guard lock(mutex_);
    return find(session_id).applicable_actions();
}

StepResult SessionRegistry::execute_single_action(const std::string& session_id,
                                                  const std::string& signature) {
    std::lock_guard lock(mutex_);
    return find(session_id).execute(signature);
}

std::pair<std::vector<Atom>, bool> SessionRegistry::reset_to_initial_state(
    const std::string& session_id) {
    std::lock_guard lock(mutex_);
    Session& s = find(session_id);
    s.reset();
    return {{s.current().begin(), s.current().end()}, s.goal_reached()};
}

std::vector<std::pair<int, std::string>> SessionRegistry::query_action_history(
    const std::string& session_id) const {
    std::lock_guard lock(mutex_);
    return find(session_id).history();
}

std::optional<std::string> SessionRegistry::sole_session_id() const {
    std::lock_guard lock(mutex_);
    if (sessions_.size() == 1) return sessions_.begin()->first;
    return std::nullopt;
}

std::size_t SessionRegistry::session_count() const {
    std::lock_guard lock(mutex_);
    return sessions_.size();
}

const Session& SessionRegistry::session(const std::string& session_id) const {
    std::lock_guard lock(mutex_);
    return find(session_id);
}

} // namespace pddlsim
