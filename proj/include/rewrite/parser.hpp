#pragma once

#include <string>

#include "rewrite/program.hpp"

namespace rewrite {

// Syntax or static-check failure, carrying a 1-based source position.
struct ParseError : ConstraintError {
    int line, col;
    ParseError(int line, int col, const std::string& msg)
        : ConstraintError("line " + std::to_string(line) + ", column " + std::to_string(col) +
                          ": " + msg),
          line(line),
          col(col) {}
};

// Host graph text:  [ node* | edge* ]
//   node := ( id [(R)] , list [# mark] )
//   edge := ( id , src-id , tgt-id , list [# mark] )
//   list := empty | atom (: atom)*      atom := [-]digits | "chars"
// Whitespace and newlines are insignificant; // comments run to end of line.
HostGraph parse_host_graph(const std::string& text, bool legacy = false);

// Canonical form: nodes then edges, each sorted by id (numeric ids in value
// order before all symbolic ids). parse then print reaches a byte fixpoint.
std::string print_host_graph(const HostGraph& g);

// Program text: rule, procedure and Main declarations. The result is linked
// and compiled; errors surface as ParseError where a source position exists.
Program parse_program(const std::string& text);

// Flat rendering of a linked program; local declarations appear inlined under
// their scoped names. For programs without locals, print + parse + print is a
// byte fixpoint.
std::string print_program(const Program& p);

}  // namespace rewrite
