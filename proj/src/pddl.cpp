#include "pddlsim/pddl.hpp"

#include "pddlsim/errors.hpp"
#include "pddlsim/sexpr.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace pddlsim {
namespace {

const std::set<std::string> kSupportedRequirements = {
    ":strips", ":typing", ":equality", ":negative-preconditions"};

bool is_variable(const std::string& term) { return !term.empty() && term.front() == '?'; }

const std::string& expect_atom(const Sexpr& node, const char* what) {
    if (!node.is_atom() || node.atom.empty())
        throw SyntaxError(node.line, node.column, what);
    return node.atom;
}

const Sexpr& expect_list(const Sexpr& node, const char* what) {
    if (!node.is_list) throw SyntaxError(node.line, node.column, what);
    return node;
}

// Parses a PDDL typed list "n1 n2 - t1 n3 - t2 n4" into TypedName pairs.
// Names without a trailing "- type" default to `object`.
std::vector<TypedName> parse_typed_list(const std::vector<Sexpr>& items, std::size_t begin = 0) {
    std::vector<TypedName> out;
    std::vector<std::string> pending;
    for (std::size_t i = begin; i < items.size(); ++i) {
        const Sexpr& node = items[i];
        if (node.is_list) {
            if (!node.items.empty() && node.items[0].is_atom() && node.items[0].atom == "either")
                throw UnsupportedFeatureError("either");
            throw SyntaxError(node.line, node.column, "a name");
        }
        if (node.atom == "-") {
            if (i + 1 >= items.size())
                throw SyntaxError(node.line, node.column, "a type after '-'");
            const Sexpr& type_node = items[++i];
            if (type_node.is_list) {
                if (!type_node.items.empty() && type_node.items[0].is_atom() &&
                    type_node.items[0].atom == "either")
                    throw UnsupportedFeatureError("either");
                throw SyntaxError(type_node.line, type_node.column, "a type name");
            }
            for (auto& name : pending) out.push_back({std::move(name), type_node.atom});
            pending.clear();
        } else {
            pending.push_back(node.atom);
        }
    }
    for (auto& name : pending) out.push_back({std::move(name), "object"});
    return out;
}

struct LiteralContext {
    const Domain* domain;                      // predicate declarations
    const std::set<std::string>* variables;    // allowed variables; null = ground only
    bool allow_equality = false;
};

void check_term(const std::string& term, const Sexpr& node, const LiteralContext& ctx) {
    if (is_variable(term)) {
        if (!ctx.variables) throw NonGroundGoalError(term);
        if (!ctx.variables->count(term))
            throw SyntaxError(node.line, node.column, "a declared parameter, got " + term);
    }
}

Literal parse_literal_atom(const Sexpr& node, const LiteralContext& ctx, bool positive) {
    const auto& list = expect_list(node, "a predicate application");
    if (list.items.empty())
        throw SyntaxError(node.line, node.column, "a predicate name");
    const std::string& head = expect_atom(list.items[0], "a predicate name");

    Literal lit;
    lit.pred = head;
    lit.positive = positive;
    for (std::size_t i = 1; i < list.items.size(); ++i) {
        const std::string& term = expect_atom(list.items[i], "a term");
        check_term(term, list.items[i], ctx);
        lit.args.push_back(term);
    }

    if (head == "=") {
        if (!ctx.allow_equality)
            throw UnsupportedFeatureError("= outside action preconditions");
        if (lit.args.size() != 2)
            throw ArityMismatchError("=", 2, lit.args.size());
        return lit;
    }
    const PredicateDecl* decl = ctx.domain->find_predicate(head);
    if (!decl)
        throw SyntaxError(node.line, node.column, "a declared predicate, got " + head);
    if (decl->params.size() != lit.args.size())
        throw ArityMismatchError(head, decl->params.size(), lit.args.size());
    return lit;
}

// Parses a goal-description: a literal, (not lit), or (and gd*). Anything
// richer is outside the supported fragment.
void parse_conjunction(const Sexpr& node, const LiteralContext& ctx, std::vector<Literal>& out) {
    const auto& list = expect_list(node, "a condition");
    if (list.items.empty()) return; // "(and)" and "()" are the empty conjunction
    const std::string& head = expect_atom(list.items[0], "a condition head");
    if (head == "and") {
        for (std::size_t i = 1; i < list.items.size(); ++i)
            parse_conjunction(list.items[i], ctx, out);
        return;
    }
    if (head == "not") {
        if (list.items.size() != 2)
            throw SyntaxError(node.line, node.column, "exactly one argument to not");
        out.push_back(parse_literal_atom(list.items[1], ctx, false));
        return;
    }
    if (head == "or" || head == "forall" || head == "exists" || head == "imply" || head == "when")
        throw UnsupportedFeatureError(head);
    out.push_back(parse_literal_atom(node, ctx, true));
}

void parse_effect(const Sexpr& node, const LiteralContext& ctx, ActionSchema& action) {
    const auto& list = expect_list(node, "an effect");
    if (list.items.empty()) return;
    const std::string& head = expect_atom(list.items[0], "an effect head");
    if (head == "and") {
        for (std::size_t i = 1; i < list.items.size(); ++i)
            parse_effect(list.items[i], ctx, action);
        return;
    }
    if (head == "not") {
        if (list.items.size() != 2)
            throw SyntaxError(node.line, node.column, "exactly one argument to not");
        Literal lit = parse_literal_atom(list.items[1], ctx, true);
        if (lit.pred == "=") throw UnsupportedFeatureError("= in effects");
        action.delete_effects.push_back(std::move(lit));
        return;
    }
    if (head == "when" || head == "forall")
        throw UnsupportedFeatureError(head);
    if (head == "increase" || head == "decrease" || head == "assign" || head == "scale-up" ||
        head == "scale-down")
        throw UnsupportedFeatureError("numeric fluents");
    Literal lit = parse_literal_atom(node, ctx, true);
    if (lit.pred == "=") throw UnsupportedFeatureError("= in effects");
    action.add_effects.push_back(std::move(lit));
}

ActionSchema parse_action(const Sexpr& node, const Domain& domain) {
    ActionSchema action;
    action.name = expect_atom(node.items[1], "an action name");

    std::optional<Sexpr> precondition;
    std::optional<Sexpr> effect;
    for (std::size_t i = 2; i < node.items.size(); i += 2) {
        const std::string& key = expect_atom(node.items[i], "an action section keyword");
        if (i + 1 >= node.items.size())
            throw SyntaxError(node.items[i].line, node.items[i].column, "a value after " + key);
        const Sexpr& value = node.items[i + 1];
        if (key == ":parameters") {
            action.params = parse_typed_list(expect_list(value, "a parameter list").items);
        } else if (key == ":precondition") {
            precondition = value;
        } else if (key == ":effect") {
            effect = value;
        } else {
            throw UnsupportedFeatureError(key);
        }
    }

    std::set<std::string> variables;
    for (const auto& p : action.params) {
        if (!is_variable(p.name))
            throw SyntaxError(node.line, node.column, "a '?'-prefixed parameter, got " + p.name);
        if (!variables.insert(p.name).second)
            throw SyntaxError(node.line, node.column, "distinct parameter names");
        if (p.type != "object" && !domain.is_subtype(p.type, "object"))
            throw UnknownTypeError(p.type);
    }

    LiteralContext pre_ctx{&domain, &variables, /*allow_equality=*/true};
    if (precondition) parse_conjunction(*precondition, pre_ctx, action.precondition);

    LiteralContext eff_ctx{&domain, &variables, /*allow_equality=*/false};
    if (effect) parse_effect(*effect, eff_ctx, action);

    for (const auto& add : action.add_effects) {
        for (const auto& del : action.delete_effects) {
            if (add.pred == del.pred && add.args == del.args)
                throw SyntaxError(node.line, node.column,
                                  "disjoint add and delete effects (both contain " + add.pred + ")");
        }
    }
    return action;
}

const Sexpr& expect_define(const Sexpr& doc, const char* kind) {
    if (!doc.is_list || doc.items.empty() || !doc.items[0].is_atom() || doc.items[0].atom != "define")
        throw SyntaxError(doc.line, doc.column, std::string("(define (") + kind + " ...) ...)");
    return doc;
}

} // namespace

std::string Atom::str() const {
    std::string s = "(" + pred;
    for (const auto& a : args) s += " " + a;
    s += ")";
    return s;
}

const PredicateDecl* Domain::find_predicate(const std::string& name) const {
    for (const auto& p : predicates)
        if (p.name == name) return &p;
    return nullptr;
}

bool Domain::is_subtype(const std::string& sub, const std::string& super) const {
    std::string current = sub;
    for (;;) {
        if (current == super) return true;
        if (current == "object") return false;
        auto it = std::find_if(types.begin(), types.end(),
                               [&](const TypedName& t) { return t.name == current; });
        if (it == types.end()) return false;
        current = it->type;
    }
}

std::vector<TypedName> Problem::all_objects(const Domain& domain) const {
    std::vector<TypedName> merged = domain.constants;
    merged.insert(merged.end(), objects.begin(), objects.end());
    return merged;
}

Domain parse_domain(std::string_view text) {
    const Sexpr doc = parse_single_sexpr(text);
    expect_define(doc, "domain");

    Domain domain;
    bool named = false;
    for (std::size_t i = 1; i < doc.items.size(); ++i) {
        const Sexpr& section = expect_list(doc.items[i], "a domain section");
        if (section.items.empty())
            throw SyntaxError(section.line, section.column, "a section keyword");
        const std::string& head = expect_atom(section.items[0], "a section keyword");

        if (head == "domain") {
            domain.name = expect_atom(section.items.at(1), "a domain name");
            named = true;
        } else if (head == ":requirements") {
            for (std::size_t j = 1; j < section.items.size(); ++j) {
                const std::string& req = expect_atom(section.items[j], "a requirement flag");
                if (!kSupportedRequirements.count(req)) throw UnsupportedFeatureError(req);
                domain.requirements.insert(req);
            }
        } else if (head == ":types") {
            domain.types = parse_typed_list(section.items, 1);
        } else if (head == ":constants") {
            domain.constants = parse_typed_list(section.items, 1);
        } else if (head == ":predicates") {
            for (std::size_t j = 1; j < section.items.size(); ++j) {
                const Sexpr& decl = expect_list(section.items[j], "a predicate declaration");
                if (decl.items.empty())
                    throw SyntaxError(decl.line, decl.column, "a predicate name");
                PredicateDecl pred;
                pred.name = expect_atom(decl.items[0], "a predicate name");
                pred.params = parse_typed_list(decl.items, 1);
                std::set<std::string> seen;
                for (const auto& p : pred.params)
                    if (!seen.insert(p.name).second)
                        throw SyntaxError(decl.line, decl.column, "distinct parameter variables");
                for (const auto& other : domain.predicates)
                    if (other.name == pred.name)
                        throw SyntaxError(decl.line, decl.column, "a unique predicate name");
                domain.predicates.push_back(std::move(pred));
            }
        } else if (head == ":action") {
            // Deferred below so every predicate declaration is visible first.
        } else if (head == ":durative-action" || head == ":derived" || head == ":functions" ||
                   head == ":axiom") {
            throw UnsupportedFeatureError(head.substr(1));
        } else {
            throw UnsupportedFeatureError(head);
        }
    }
    if (!named) throw SyntaxError(doc.line, doc.column, "(domain <name>)");

    // Validate the type forest: declared parents only, no cycles.
    for (const auto& t : domain.types) {
        if (t.type != "object" &&
            std::none_of(domain.types.begin(), domain.types.end(),
                         [&](const TypedName& o) { return o.name == t.type; }))
            throw UnknownTypeError(t.type);
        std::set<std::string> seen{t.name};
        std::string current = t.name;
        while (current != "object") {
            auto it = std::find_if(domain.types.begin(), domain.types.end(),
                                   [&](const TypedName& o) { return o.name == current; });
            if (it == domain.types.end()) break;
            current = it->type;
            if (!seen.insert(current).second)
                throw SyntaxError(doc.line, doc.column, "an acyclic type hierarchy");
        }
    }
    for (const auto& c : domain.constants)
        if (c.type != "object" && !domain.is_subtype(c.type, "object"))
            throw UnknownTypeError(c.type);

    for (std::size_t i = 1; i < doc.items.size(); ++i) {
        const Sexpr& section = doc.items[i];
        if (!section.items.empty() && section.items[0].is_atom() &&
            section.items[0].atom == ":action") {
            ActionSchema action = parse_action(section, domain);
            for (const auto& other : domain.actions)
                if (other.name == action.name)
                    throw SyntaxError(section.line, section.column, "a unique action name");
            domain.actions.push_back(std::move(action));
        }
    }
    return domain;
}

Problem parse_problem(std::string_view text, const Domain& domain) {
    const Sexpr doc = parse_single_sexpr(text);
    expect_define(doc, "problem");

    Problem problem;
    bool named = false;
    std::optional<Sexpr> goal_node;
    for (std::size_t i = 1; i < doc.items.size(); ++i) {
        const Sexpr& section = expect_list(doc.items[i], "a problem section");
        if (section.items.empty())
            throw SyntaxError(section.line, section.column, "a section keyword");
        const std::string& head = expect_atom(section.items[0], "a section keyword");

        if (head == "problem") {
            problem.name = expect_atom(section.items.at(1), "a problem name");
            named = true;
        } else if (head == ":domain") {
            problem.domain_name = expect_atom(section.items.at(1), "a domain name");
        } else if (head == ":objects") {
            problem.objects = parse_typed_list(section.items, 1);
        } else if (head == ":init") {
            // Handled after objects are known.
        } else if (head == ":goal") {
            goal_node = section.items.at(1);
        } else if (head == ":requirements") {
            for (std::size_t j = 1; j < section.items.size(); ++j) {
                const std::string& req = expect_atom(section.items[j], "a requirement flag");
                if (!kSupportedRequirements.count(req)) throw UnsupportedFeatureError(req);
            }
        } else if (head == ":metric" || head == ":constraints") {
            throw UnsupportedFeatureError(head.substr(1));
        } else {
            throw UnsupportedFeatureError(head);
        }
    }
    if (!named) throw SyntaxError(doc.line, doc.column, "(problem <name>)");
    if (problem.domain_name.empty()) throw SyntaxError(doc.line, doc.column, "(:domain <name>)");
    if (problem.domain_name != domain.name)
        throw DomainMismatchError(domain.name, problem.domain_name);

    std::set<std::string> known_objects;
    for (const auto& o : problem.all_objects(domain)) {
        known_objects.insert(o.name);
        if (o.type != "object" && !domain.is_subtype(o.type, "object"))
            throw UnknownTypeError(o.type);
    }

    LiteralContext ground_ctx{&domain, nullptr, /*allow_equality=*/false};
    for (std::size_t i = 1; i < doc.items.size(); ++i) {
        const Sexpr& section = doc.items[i];
        if (section.items.empty() || !section.items[0].is_atom() ||
            section.items[0].atom != ":init")
            continue;
        for (std::size_t j = 1; j < section.items.size(); ++j) {
            Literal lit = parse_literal_atom(section.items[j], ground_ctx, true);
            for (const auto& arg : lit.args)
                if (!known_objects.count(arg)) throw UndeclaredObjectError(arg);
            problem.init.insert(Atom{lit.pred, lit.args});
        }
    }

    if (goal_node) {
        parse_conjunction(*goal_node, ground_ctx, problem.goal);
        for (const auto& lit : problem.goal)
            for (const auto& arg : lit.args)
                if (!known_objects.count(arg)) throw UndeclaredObjectError(arg);
    }
    return problem;
}

namespace {

void print_typed_list(std::ostringstream& out, const std::vector<TypedName>& names) {
    // "- object" can only be dropped for the whole list: "a - object b - t"
    // printed as "a b - t" would retype a on re-parse.
    bool all_object = std::all_of(names.begin(), names.end(),
                                  [](const TypedName& n) { return n.type == "object"; });
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (i) out << " ";
        out << names[i].name;
        if (!all_object) out << " - " << names[i].type;
    }
}

void print_literal(std::ostringstream& out, const Literal& lit) {
    if (!lit.positive) out << "(not ";
    out << "(" << lit.pred;
    for (const auto& a : lit.args) out << " " << a;
    out << ")";
    if (!lit.positive) out << ")";
}

void print_conjunction(std::ostringstream& out, const std::vector<Literal>& lits) {
    out << "(and";
    for (const auto& lit : lits) {
        out << " ";
        print_literal(out, lit);
    }
    out << ")";
}

} // namespace

std::string print_domain(const Domain& domain) {
    std::ostringstream out;
    out << "(define (domain " << domain.name << ")\n";
    if (!domain.requirements.empty()) {
        out << "  (:requirements";
        for (const auto& r : domain.requirements) out << " " << r;
        out << ")\n";
    }
    if (!domain.types.empty()) {
        out << "  (:types ";
        print_typed_list(out, domain.types);
        out << ")\n";
    }
    if (!domain.constants.empty()) {
        out << "  (:constants ";
        print_typed_list(out, domain.constants);
        out << ")\n";
    }
    out << "  (:predicates";
    for (const auto& p : domain.predicates) {
        out << " (" << p.name;
        if (!p.params.empty()) {
            out << " ";
            print_typed_list(out, p.params);
        }
        out << ")";
    }
    out << ")\n";
    for (const auto& a : domain.actions) {
        out << "  (:action " << a.name << "\n    :parameters (";
        print_typed_list(out, a.params);
        out << ")\n    :precondition ";
        print_conjunction(out, a.precondition);
        out << "\n    :effect (and";
        for (const auto& add : a.add_effects) {
            out << " ";
            print_literal(out, add);
        }
        for (const auto& del : a.delete_effects) {
            out << " (not ";
            print_literal(out, del);
            out << ")";
        }
        out << "))\n";
    }
    out << ")\n";
    return out.str();
}

std::string print_problem(const Problem& problem) {
    std::ostringstream out;
    out << "(define (problem " << problem.name << ")\n  (:domain " << problem.domain_name << ")\n";
    if (!problem.objects.empty()) {
        out << "  (:objects ";
        print_typed_list(out, problem.objects);
        out << ")\n";
    }
    out << "  (:init";
    for (const auto& atom : problem.init) out << " " << atom.str();
    out << ")\n  (:goal ";
    print_conjunction(out, problem.goal);
    out << "))\n";
    return out.str();
}

std::string make_signature(const std::string& name, std::span<const std::string> args) {
    std::string sig = "(" + name;
    for (const auto& a : args) sig += " " + a;
    sig += ")";
    return sig;
}

std::string serialize_plan(std::span<const std::string> signatures) {
    std::string out;
    for (const auto& sig : signatures) {
        out += sig;
        out += "\n";
    }
    return out;
}

std::vector<std::string> parse_plan(std::string_view text) {
    std::vector<std::string> plan;
    std::istringstream in{std::string(text)};
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto comment = line.find(';');
        if (comment != std::string::npos) line.erase(comment);
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        auto last = line.find_last_not_of(" \t\r");
        std::string body = line.substr(first, last - first + 1);

        Sexpr form;
        try {
            form = parse_single_sexpr(body);
        } catch (const SyntaxError& e) {
            throw SyntaxError(line_no, e.column, e.expected);
        }
        if (!form.is_list || form.items.empty() || !form.items[0].is_atom())
            throw SyntaxError(line_no, 1, "(name arg ...)");
        std::vector<std::string> args;
        for (std::size_t i = 1; i < form.items.size(); ++i) {
            if (!form.items[i].is_atom()) throw SyntaxError(line_no, 1, "constant arguments");
            args.push_back(form.items[i].atom);
        }
        plan.push_back(make_signature(form.items[0].atom, args));
    }
    return plan;
}

} // namespace pddlsim
