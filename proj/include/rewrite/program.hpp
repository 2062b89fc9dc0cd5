#pragma once

#include <memory>
#include <string>
#include <vector>

#include "rewrite/rule.hpp"

namespace rewrite {

// Command tree. Child layout by kind:
//   seq    all children in order
//   if_    kids[0] condition, kids[1] then (nullable), kids[2] else (nullable)
//   try_   same as if_
//   loop   kids[0] body
//   or_    kids[0] left, kids[1] right
struct Command {
    enum class Kind : std::uint8_t {
        rule_set,
        call,
        seq,
        if_,
        try_,
        loop,
        or_,
        break_,
        skip,
        fail
    };
    Kind kind = Kind::skip;
    std::vector<std::string> rule_names;  // rule_set (textual order)
    std::vector<int> rule_ids;            // filled by link_program
    std::string callee;                   // call
    int callee_id = -1;
    std::vector<std::unique_ptr<Command>> kids;
    int line = 0, col = 0;  // source position when parsed from text
};

struct Procedure {
    std::string name;
    std::unique_ptr<Command> body;
};

struct Program {
    std::vector<Rule> rules;
    std::vector<Procedure> procs;  // includes Main
    int main_index = -1;

    int rule_index(const std::string& name) const;
    int proc_index(const std::string& name) const;
};

// Resolves rule and procedure references, compiles every rule, and checks the
// static constraints: unique declaration names, a Main procedure, procedures
// non-recursive, break confined to loop bodies (reaching through procedure
// calls), and no break inside an if/try condition. Throws ConstraintError.
void link_program(Program& p);

}  // namespace rewrite
