#pragma once

#include <compare>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pddlsim {

// A name paired with its type ("object" when untyped). Used for type
// declarations (name/parent), predicate and action parameters, and objects.
struct TypedName {
    std::string name;
    std::string type = "object";

    auto operator<=>(const TypedName&) const = default;
};

struct PredicateDecl {
    std::string name;
    std::vector<TypedName> params;
};

// A ground atom: predicate over constants. Prints as "(pred a b)".
struct Atom {
    std::string pred;
    std::vector<std::string> args;

    auto operator<=>(const Atom&) const = default;
    std::string str() const;
};

// A possibly-negated, possibly-non-ground predicate application. Args are
// variables (leading '?') or constants.
struct Literal {
    std::string pred;
    std::vector<std::string> args;
    bool positive = true;

    auto operator<=>(const Literal&) const = default;
};

struct ActionSchema {
    std::string name;
    std::vector<TypedName> params;
    std::vector<Literal> precondition; // conjunction; may include "=" literals
    std::vector<Literal> add_effects;  // stored positive
    std::vector<Literal> delete_effects;
};

struct Domain {
    std::string name;
    std::set<std::string> requirements;
    std::vector<TypedName> types; // name/parent pairs, excluding "object"
    std::vector<TypedName> constants;
    std::vector<PredicateDecl> predicates;
    std::vector<ActionSchema> actions;

    const PredicateDecl* find_predicate(const std::string& name) const;

    // True iff `sub` equals `super` or `super` is an ancestor of `sub`.
    bool is_subtype(const std::string& sub, const std::string& super) const;
};

struct Problem {
    std::string name;
    std::string domain_name;
    std::vector<TypedName> objects; // problem objects only; see all_objects()
    std::set<Atom> init;
    std::vector<Literal> goal; // ground conjunction

    // Problem objects merged with the domain's constants.
    std::vector<TypedName> all_objects(const Domain& domain) const;
};

Domain parse_domain(std::string_view text);
Problem parse_problem(std::string_view text, const Domain& domain);

// Canonical re-printers; parse(print(parse(t))) is structurally equal to
// parse(t).
std::string print_domain(const Domain& domain);
std::string print_problem(const Problem& problem);

// Plan interchange format: one "(name arg1 ... argk)" per line, lowercase,
// newline-terminated. parse_plan skips blank lines and ';' comments.
std::string serialize_plan(std::span<const std::string> signatures);
std::vector<std::string> parse_plan(std::string_view text);

// Canonical action signature text, "(name arg1 ... argk)".
std::string make_signature(const std::string& name, std::span<const std::string> args);

} // namespace pddlsim
