#include "pddlsim/sexpr.hpp"

#include "pddlsim/errors.hpp"

#include <cctype>

namespace pddlsim {
namespace {

struct Reader {
    std::string_view text;
    std::size_t pos = 0;
    int line = 1;
    int column = 1;

    bool eof() const { return pos >= text.size(); }
    char peek() const { return text[pos]; }

    char advance() {
        char c = text[pos++];
        if (c == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
        return c;
    }

    void skip_blank() {
        while (!eof()) {
            char c = peek();
            if (c == ';') {
                while (!eof() && peek() != '\n') advance();
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else {
                break;
            }
        }
    }

    static bool atom_char(char c) {
        return !std::isspace(static_cast<unsigned char>(c)) && c != '(' && c != ')' && c != ';';
    }

    Sexpr read() {
        skip_blank();
        if (eof()) throw SyntaxError(line, column, "an expression");
        Sexpr node;
        node.line = line;
        node.column = column;
        if (peek() == '(') {
            advance();
            node.is_list = true;
            for (;;) {
                skip_blank();
                if (eof()) throw SyntaxError(line, column, "')'");
                if (peek() == ')') {
                    advance();
                    break;
                }
                node.items.push_back(read());
            }
            return node;
        }
        if (peek() == ')') throw SyntaxError(line, column, "an expression, not ')'");
        while (!eof() && atom_char(peek()))
            node.atom.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(advance()))));
        return node;
    }
};

} // namespace

std::vector<Sexpr> parse_sexprs(std::string_view text) {
    Reader r{text};
    std::vector<Sexpr> forms;
    for (;;) {
        r.skip_blank();
        if (r.eof()) break;
        forms.push_back(r.read());
    }
    return forms;
}

Sexpr parse_single_sexpr(std::string_view text) {
    auto forms = parse_sexprs(text);
    if (forms.empty()) throw SyntaxError(1, 1, "an expression");
    if (forms.size() > 1)
        throw SyntaxError(forms[1].line, forms[1].column, "end of input");
    return std::move(forms.front());
}

} // namespace pddlsim
