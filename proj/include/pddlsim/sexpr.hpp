#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace pddlsim {

// Node of an s-expression tree. Atoms are canonicalised to lowercase at
// read time; line/column refer to the start of the node in the source.
struct Sexpr {
    bool is_list = false;
    std::string atom;
    std::vector<Sexpr> items;
    int line = 0;
    int column = 0;

    bool is_atom() const { return !is_list; }
};

// Reads every top-level s-expression in `text`. `;` starts a comment that
// runs to end of line. Throws SyntaxError on unbalanced or stray input.
std::vector<Sexpr> parse_sexprs(std::string_view text);

// Convenience for documents expected to hold exactly one form.
Sexpr parse_single_sexpr(std::string_view text);

} // namespace pddlsim
