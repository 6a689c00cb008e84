#pragma once

#include <stdexcept>
#include <string>

namespace pddlsim {

// Base for every domain-level failure. `code()` is the stable machine name
// carried across the MCP wire and the CLI exit paths.
class PddlError : public std::runtime_error {
public:
    PddlError(std::string code, const std::string& message)
        : std::runtime_error(message), code_(std::move(code)) {}

    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

class SyntaxError : public PddlError {
public:
    SyntaxError(int line, int column, const std::string& expected)
        : PddlError("syntax_error",
                    "syntax error at line " + std::to_string(line) + ", column " +
                        std::to_string(column) + ": expected " + expected),
          line(line), column(column), expected(expected) {}

    int line;
    int column;
    std::string expected;
};

class UnknownTypeError : public PddlError {
public:
    explicit UnknownTypeError(const std::string& name)
        : PddlError("unknown_type", "unknown type: " + name), name(name) {}
    std::string name;
};

class ArityMismatchError : public PddlError {
public:
    ArityMismatchError(const std::string& predicate, std::size_t expected, std::size_t got)
        : PddlError("arity_mismatch",
                    "predicate " + predicate + " expects " + std::to_string(expected) +
                        " arguments, got " + std::to_string(got)),
          predicate(predicate), expected(expected), got(got) {}

    std::string predicate;
    std::size_t expected;
    std::size_t got;
};

class UnsupportedFeatureError : public PddlError {
public:
    explicit UnsupportedFeatureError(const std::string& construct)
        : PddlError("unsupported_feature", "unsupported construct: " + construct),
          construct(construct) {}
    std::string construct;
};

class UndeclaredObjectError : public PddlError {
public:
    explicit UndeclaredObjectError(const std::string& name)
        : PddlError("undeclared_object", "undeclared object: " + name), name(name) {}
    std::string name;
};

class DomainMismatchError : public PddlError {
public:
    DomainMismatchError(const std::string& expected, const std::string& got)
        : PddlError("domain_mismatch",
                    "problem requires domain '" + got + "' but was paired with '" + expected + "'"),
          expected(expected), got(got) {}
    std::string expected;
    std::string got;
};

class NonGroundGoalError : public PddlError {
public:
    explicit NonGroundGoalError(const std::string& variable)
        : PddlError("non_ground_goal", "goal contains variable " + variable) {}
};

class UnknownSessionError : public PddlError {
public:
    explicit UnknownSessionError(const std::string& id)
        : PddlError("unknown_session", "no session with id '" + id + "'"), id(id) {}
    std::string id;
};

class UnknownActionError : public PddlError {
public:
    explicit UnknownActionError(const std::string& signature)
        : PddlError("unknown_action", "no ground action " + signature), signature(signature) {}
    std::string signature;
};

class IncompatiblePairError : public PddlError {
public:
    IncompatiblePairError(const std::string& domain_name, const std::string& wanted)
        : PddlError("incompatible_pair",
                    "problem requires domain '" + wanted + "', session has '" + domain_name + "'") {}
};

} // namespace pddlsim
