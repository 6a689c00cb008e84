#include "pddlsim/llm_transport.hpp"

#include <doctest.h>

using namespace pddlsim;

namespace {

std::chrono::steady_clock::time_point far_deadline() {
    return std::chrono::steady_clock::now() + std::chrono::hours(1);
}

std::vector<ChatMessage> msgs() { return {{"user", "hello"}}; }

} // namespace

TEST_CASE("scripted client serves responses in order") {
    ScriptedClient client;
    client.push_text("first", {10, 5, false});
    client.push_tool_call("query_current_state", json{{"session_id", "s"}}, {7, 3, true});

    ChatTurn a = client.complete(msgs(), nullptr, 0.2, far_deadline());
    CHECK(a.content == "first");
    CHECK(a.tool_calls.empty());
    CHECK(a.usage.input_tokens == 10);
    CHECK(a.usage.output_tokens == 5);

    ChatTurn b = client.complete(msgs(), nullptr, 0.2, far_deadline());
    REQUIRE(b.tool_calls.size() == 1);
    CHECK(b.tool_calls[0].name == "query_current_state");
    CHECK(b.tool_calls[0].arguments["session_id"] == "s");
    CHECK(b.usage.estimated);
    CHECK(client.calls_served() == 2);
}

TEST_CASE("an exhausted script is a test bug, not silence") {
    ScriptedClient client;
    client.push_text("only");
    client.complete(msgs(), nullptr, {}, far_deadline());
    CHECK_THROWS_AS(client.complete(msgs(), nullptr, {}, far_deadline()), std::logic_error);
}

TEST_CASE("loop_last repeats the final response") {
    ScriptedClient client;
    client.push_text("a");
    client.push_text("b");
    client.set_loop_last(true);
    client.complete(msgs(), nullptr, {}, far_deadline());
    for (int i = 0; i < 3; ++i)
        CHECK(client.complete(msgs(), nullptr, {}, far_deadline()).content == "b");
}

TEST_CASE("scripted client enforces the deadline") {
    ScriptedClient client;
    client.push_text("late");
    auto past = std::chrono::steady_clock::now() - std::chrono::seconds(1);
    CHECK_THROWS_AS(client.complete(msgs(), nullptr, {}, past), BudgetExceeded);
}

TEST_CASE("usage accumulates and the estimated flag is sticky") {
    UsageStats total;
    total.add({100, 50, false});
    total.add({200, 25, true});
    total.add({1, 1, false});
    CHECK(total.input_tokens == 301);
    CHECK(total.output_tokens == 76);
    CHECK(total.estimated);
}

TEST_CASE("http client refuses to start without credentials") {
    ::unsetenv("PDDLSIM_TEST_MISSING_KEY");
    HttpChatClient::Options options;
    options.endpoint = "https://localhost:1";
    options.model = "m";
    options.api_key_env = "PDDLSIM_TEST_MISSING_KEY";
    CHECK_THROWS_AS((HttpChatClient{options}), AuthError);
}
