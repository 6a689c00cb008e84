#include "pddlsim/sim_engine.hpp"
#include "pddlsim/errors.hpp"
#include "pddlsim/validator.hpp"

#include "bw_util.hpp"

#include <doctest.h>

#include <random>
#include <thread>

using namespace pddlsim;

namespace {

std::string domain_text() { return bw::blocksworld_domain_text(); }
std::string p2_text() { return bw::read_file(bw::data_path("blocksworld/p2.pddl")); }
std::string p3_text() { return bw::read_file(bw::data_path("blocksworld/p3.pddl")); }

std::vector<std::string> atom_strings(const std::vector<Atom>& atoms) {
    std::vector<std::string> out;
    for (const auto& a : atoms) out.push_back(a.str());
    return out;
}

} // namespace

TEST_CASE("initialise_session reports the session dimensions") {
    SessionRegistry registry;
    SessionSummary summary = registry.initialise(domain_text(), p3_text());
    CHECK(summary.object_count == 3);
    CHECK(summary.init_atom_count == 7);
    CHECK(summary.goal_literal_count == 2);
    CHECK(summary.ground_action_count == 24);
    CHECK(registry.session_count() == 1);
}

TEST_CASE("initialise accepts file paths as sources") {
    SessionRegistry registry;
    SessionSummary summary = registry.initialise(bw::data_path("blocksworld/domain.pddl"),
                                                 bw::data_path("blocksworld/p2.pddl"));
    CHECK(summary.ground_action_count == 12);
}

TEST_CASE("re-initialising an existing id replaces the session") {
    SessionRegistry registry;
    registry.initialise(domain_text(), p2_text(), "s");
    registry.execute_single_action("s", "(pick-up a)");
    registry.initialise(domain_text(), p2_text(), "s");
    CHECK(registry.query_action_history("s").empty());
    CHECK(registry.session_count() == 1);
}

TEST_CASE("a goal satisfied by init is flagged immediately") {
    SessionRegistry registry;
    registry.initialise(domain_text(),
                        "(define (problem done) (:domain blocksworld) (:objects a) "
                        "(:init (ontable a) (clear a) (handempty)) (:goal (and (ontable a))))",
                        "s");
    auto [atoms, goal_reached] = registry.query_current_state("s");
    CHECK(goal_reached);
}

TEST_CASE("mismatched pair is rejected") {
    SessionRegistry registry;
    CHECK_THROWS_AS(registry.initialise(domain_text(),
                                        "(define (problem p) (:domain gripper) (:objects a) "
                                        "(:init) (:goal (and)))"),
                    DomainMismatchError);
    Domain domain = parse_domain(domain_text());
    Problem problem = parse_problem(p2_text(), domain);
    problem.domain_name = "other";
    CHECK_THROWS_AS(Session("x", domain, problem), IncompatiblePairError);
}

TEST_CASE("query_current_state returns the sorted closed-world atom set") {
    SessionRegistry registry;
    registry.initialise(domain_text(), p2_text(), "s");
    auto [atoms, goal_reached] = registry.query_current_state("s");
    CHECK(atom_strings(atoms) == std::vector<std::string>{"(clear a)", "(clear b)", "(handempty)",
                                                          "(ontable a)", "(ontable b)"});
    CHECK(!goal_reached);

    registry.execute_single_action("s", "(pick-up a)");
    auto [after, _] = registry.query_current_state("s");
    CHECK(atom_strings(after) ==
          std::vector<std::string>{"(clear b)", "(holding a)", "(ontable b)"});

    CHECK_THROWS_AS(registry.query_current_state("nope"), UnknownSessionError);
}

TEST_CASE("query_applicable_actions matches the precondition semantics") {
    SessionRegistry registry;
    registry.initialise(domain_text(), p2_text(), "s");
    CHECK(registry.query_applicable_actions("s") ==
          std::vector<std::string>{"(pick-up a)", "(pick-up b)"});

    registry.execute_single_action("s", "(pick-up a)");
    // stack(a,a) is grounded but fails clear(a) once a is held.
    CHECK(registry.query_applicable_actions("s") ==
          std::vector<std::string>{"(put-down a)", "(stack a b)"});
}

TEST_CASE("an empty applicable set is a valid return") {
    SessionRegistry registry;
    // No handempty and nothing held: unreachable in play, constructible in PDDL.
    registry.initialise(domain_text(),
                        "(define (problem stuck) (:domain blocksworld) (:objects a) "
                        "(:init (ontable a) (clear a)) (:goal (and (on a a))))",
                        "s");
    CHECK(registry.query_applicable_actions("s").empty());
}

TEST_CASE("execute_single_action applies STRIPS semantics") {
    SessionRegistry registry;
    registry.initialise(domain_text(), p2_text(), "s");

    StepResult step = registry.execute_single_action("s", "(pick-up a)");
    CHECK(step.applied);
    CHECK(!step.goal_reached);
    CHECK(step.state.count(Atom{"holding", {"a"}}) == 1);
    CHECK(step.state.count(Atom{"handempty", {}}) == 0);

    StepResult done = registry.execute_single_action("s", "(stack a b)");
    CHECK(done.applied);
    CHECK(done.goal_reached);
    CHECK(registry.session("s").replay_consistent());
}

TEST_CASE("inapplicable actions leave the state bit-identical and name the blockers") {
    SessionRegistry registry;
    registry.initialise(domain_text(), p2_text(), "s");
    auto [before, _] = registry.query_current_state("s");

    StepResult step = registry.execute_single_action("s", "(stack a b)");
    CHECK(!step.applied);
    CHECK(step.message.find("(holding a)") != std::string::npos);
    auto [after, __] = registry.query_current_state("s");
    CHECK(atom_strings(before) == atom_strings(after));
    CHECK(registry.session("s").failed_attempts() == 1);

    CHECK_THROWS_AS(registry.execute_single_action("s", "(fly a b)"), UnknownActionError);
}

TEST_CASE("execute applies exactly the previously applicable actions") {
    std::mt19937 rng(5);
    SessionRegistry registry;
    registry.initialise(domain_text(), p3_text(), "s");
    for (int step = 0; step < 60; ++step) {
        auto applicable = registry.query_applicable_actions("s");
        const auto& grounded = registry.session("s").grounded();
        for (const auto& ga : grounded) {
            bool was_applicable = std::find(applicable.begin(), applicable.end(), ga.signature) !=
                                  applicable.end();
            // Probe on a scratch copy via the session execute contract.
            StepResult result = registry.execute_single_action("s", ga.signature);
            CHECK(result.applied == was_applicable);
            if (result.applied) break; // state changed; recompute applicable set
        }
        CHECK(registry.session("s").replay_consistent());
    }
}

TEST_CASE("reset restores the fresh session exactly") {
    SessionRegistry registry;
    registry.initialise(domain_text(), p2_text(), "s");
    auto [fresh, fresh_goal] = registry.query_current_state("s");

    registry.execute_single_action("s", "(pick-up a)");
    registry.execute_single_action("s", "(stack a b)");
    auto [reset_atoms, reset_goal] = registry.reset_to_initial_state("s");
    CHECK(atom_strings(reset_atoms) == atom_strings(fresh));
    CHECK(reset_goal == fresh_goal);
    CHECK(registry.query_action_history("s").empty());
    CHECK(registry.session("s").grounded().size() == 12);

    // Idempotent on a fresh session.
    auto [again, _] = registry.reset_to_initial_state("s");
    CHECK(atom_strings(again) == atom_strings(fresh));
}

TEST_CASE("history records applied actions only, consecutively from 1") {
    SessionRegistry registry;
    registry.initialise(domain_text(), p2_text(), "s");
    CHECK(registry.query_action_history("s").empty());

    registry.execute_single_action("s", "(pick-up a)");
    registry.execute_single_action("s", "(stack b a)"); // rejected
    auto history = registry.query_action_history("s");
    REQUIRE(history.size() == 1);
    CHECK(history[0] == std::pair<int, std::string>{1, "(pick-up a)"});

    registry.execute_single_action("s", "(stack a b)");
    history = registry.query_action_history("s");
    REQUIRE(history.size() == 2);
    CHECK(history[1] == std::pair<int, std::string>{2, "(stack a b)"});
}

TEST_CASE("goal_satisfied evaluates ground conjunctions") {
    State state{Atom{"on", {"a", "b"}}, Atom{"clear", {"a"}}};
    CHECK(goal_satisfied(state, {Literal{"on", {"a", "b"}, true}}));
    CHECK(goal_satisfied(state, {})); // vacuous conjunction
    CHECK(!goal_satisfied(state, {Literal{"on", {"a", "b"}, false}}));
    CHECK(goal_satisfied(state, {Literal{"on", {"b", "a"}, false}}));
}

TEST_CASE("delete-then-add order resolves collisions to true") {
    // Hand-built ground action with the same atom in dels and adds.
    GroundAction ga;
    ga.adds = {Atom{"p", {"a"}}};
    ga.dels = {Atom{"p", {"a"}}, Atom{"q", {"a"}}};
    State state{Atom{"p", {"a"}}, Atom{"q", {"a"}}};
    State next = pddlsim::apply(state, ga);
    CHECK(next.count(Atom{"p", {"a"}}) == 1);
    CHECK(next.count(Atom{"q", {"a"}}) == 0);
}

TEST_CASE("sessions are isolated") {
    SessionRegistry registry;
    registry.initialise(domain_text(), p2_text(), "left");
    registry.initialise(domain_text(), p2_text(), "right");
    registry.execute_single_action("left", "(pick-up a)");
    auto [right_atoms, _] = registry.query_current_state("right");
    CHECK(right_atoms.size() == 5);
    CHECK(!registry.sole_session_id().has_value());
}

TEST_CASE("distinct sessions progress under concurrent callers") {
    SessionRegistry registry;
    registry.initialise(domain_text(), p3_text(), "t0");
    registry.initialise(domain_text(), p3_text(), "t1");
    std::vector<std::thread> threads;
    for (int t = 0; t < 2; ++t)
        threads.emplace_back([&registry, t]() {
            std::string id = "t" + std::to_string(t);
            for (int i = 0; i < 50; ++i) {
                auto applicable = registry.query_applicable_actions(id);
                if (applicable.empty()) break;
                registry.execute_single_action(id, applicable.front());
                registry.reset_to_initial_state(id);
            }
        });
    for (auto& t : threads) t.join();
    CHECK(registry.session("t0").replay_consistent());
    CHECK(registry.session("t1").replay_consistent());
}

// --- validator ---

TEST_CASE("empty plan on an already-satisfied goal is valid") {
    Domain domain = parse_domain(domain_text());
    Problem problem = parse_problem(
        "(define (problem done) (:domain blocksworld) (:objects a) "
        "(:init (ontable a) (clear a) (handempty)) (:goal (and (ontable a))))",
        domain);
    ValidationReport report = validate_plan(domain, problem, std::vector<std::string>{});
    CHECK(report.valid);
    CHECK(report.plan_length == 0);
    CHECK(report.steps_applied == 0);
}

TEST_CASE("valid two-step plan validates with the right length") {
    Domain domain = parse_domain(domain_text());
    Problem problem = parse_problem(p2_text(), domain);
    std::vector<std::string> plan{"(pick-up a)", "(stack a b)"};
    ValidationReport report = validate_plan(domain, problem, plan);
    CHECK(report.valid);
    CHECK(report.plan_length == 2);
    CHECK(report.goal_satisfied);
    CHECK(!report.failing_step);
}

TEST_CASE("first failing step is reported with its unsatisfied literals") {
    Domain domain = parse_domain(domain_text());
    Problem problem = parse_problem(p2_text(), domain);
    std::vector<std::string> plan{"(stack a b)"};
    ValidationReport report = validate_plan(domain, problem, plan);
    CHECK(!report.valid);
    REQUIRE(report.failing_step.has_value());
    CHECK(report.failing_step->index == 1);
    CHECK(report.failing_step->signature == "(stack a b)");
    CHECK(report.failing_step->unsatisfied == std::vector<std::string>{"(holding a)"});
    CHECK(report.steps_applied == 0);
}

TEST_CASE("a legal plan that misses the goal is invalid without a failing step") {
    Domain domain = parse_domain(domain_text());
    Problem problem = parse_problem(p2_text(), domain);
    std::vector<std::string> plan{"(pick-up a)", "(put-down a)"};
    ValidationReport report = validate_plan(domain, problem, plan);
    CHECK(!report.valid);
    CHECK(!report.failing_step);
    CHECK(!report.goal_satisfied);
    CHECK(report.steps_applied == 2);
}

TEST_CASE("unknown signatures are an error, distinct from inapplicability") {
    Domain domain = parse_domain(domain_text());
    Problem problem = parse_problem(p2_text(), domain);
    CHECK_THROWS_AS(validate_plan(domain, problem, std::vector<std::string>{"(teleport a)"}),
                    UnknownActionError);
}

TEST_CASE("validator agrees with step-wise execution on random plans") {
    std::mt19937 rng(99);
    Domain domain = parse_domain(domain_text());
    for (int trial = 0; trial < 40; ++trial) {
        int n = std::uniform_int_distribution<int>(2, 4)(rng);
        Problem problem = parse_problem(bw::random_problem_text(n, rng), domain);
        auto grounded = ground(domain, problem);

        // Random walk builds a plan; corrupt half of them.
        std::vector<std::string> plan;
        State state = problem.init;
        for (int step = 0; step < 10; ++step) {
            auto applicable = bw::brute_force_applicable(state, grounded);
            if (applicable.empty()) break;
            const std::string& pick =
                applicable[std::uniform_int_distribution<std::size_t>(0, applicable.size() - 1)(rng)];
            plan.push_back(pick);
            for (const auto& ga : grounded)
                if (ga.signature == pick) state = pddlsim::apply(state, ga);
        }
        if (trial % 2 == 1 && plan.size() >= 2)
            std::swap(plan[0], plan[plan.size() - 1]);

        ValidationReport report = validate_plan(problem, grounded, plan);

        SessionRegistry registry;
        registry.initialise(print_domain(domain), print_problem(problem), "s");
        std::size_t applied = 0;
        for (const auto& sig : plan) {
            if (!registry.execute_single_action("s", sig).applied) break;
            ++applied;
        }
        CHECK(report.steps_applied == applied);
        auto [final_atoms, goal_reached] = registry.query_current_state("s");
        CHECK(State(final_atoms.begin(), final_atoms.end()) == report.final_state);
        CHECK(goal_reached == report.goal_satisfied);
    }
}

TEST_CASE("valid plans have valid prefixes") {
    Domain domain = parse_domain(domain_text());
    Problem problem = parse_problem(bw::read_file(bw::data_path("blocksworld/sussman.pddl")),
                                    domain);
    std::vector<std::string> plan{"(unstack c a)", "(put-down c)", "(pick-up b)",
                                  "(stack b c)",   "(pick-up a)",  "(stack a b)"};
    REQUIRE(validate_plan(domain, problem, plan).valid);
    for (std::size_t len = 0; len < plan.size(); ++len) {
        std::vector<std::string> prefix(plan.begin(), plan.begin() + len);
        ValidationReport report = validate_plan(domain, problem, prefix);
        CHECK(!report.failing_step);
        CHECK(report.steps_applied == len);
    }
}
