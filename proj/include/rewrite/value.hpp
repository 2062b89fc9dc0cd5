#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace rewrite {

// Marks shared by nodes and edges. `grey` is node-only, `dashed` is edge-only,
// `any` is a rule-pattern wildcard and never appears in a host graph.
enum class Mark : std::uint8_t { none, red, green, blue, grey, dashed, any };

inline bool node_legal(Mark m) {
    return m == Mark::none || m == Mark::red || m == Mark::green ||
           m == Mark::blue || m == Mark::grey;
}

inline bool edge_legal(Mark m) {
    return m == Mark::none || m == Mark::red || m == Mark::green ||
           m == Mark::blue || m == Mark::dashed;
}

// Bucket layout: none, grey, red, green, blue.
inline int node_bucket(Mark m) {
    switch (m) {
    case Mark::none: return 0;
    case Mark::grey: return 1;
    case Mark::red: return 2;
    case Mark::green: return 3;
    case Mark::blue: return 4;
    default: return -1;
    }
}

// Edge-row layout: none, dashed, red, green, blue.
inline int edge_row(Mark m) {
    switch (m) {
    case Mark::none: return 0;
    case Mark::dashed: return 1;
    case Mark::red: return 2;
    case Mark::green: return 3;
    case Mark::blue: return 4;
    default: return -1;
    }
}

inline const char* mark_name(Mark m) {
    switch (m) {
    case Mark::none: return "none";
    case Mark::red: return "red";
    case Mark::green: return "green";
    case Mark::blue: return "blue";
    case Mark::grey: return "grey";
    case Mark::dashed: return "dashed";
    default: return "any";
    }
}

// A host atom is a 64-bit signed integer or a printable-ASCII string without
// double quotes. A host value is a list of atoms; the empty list is `empty`
// and a one-element list is interchangeable with its atom.
using HostAtom = std::variant<long long, std::string>;
using HostList = std::vector<HostAtom>;

inline bool is_int(const HostAtom& a) { return a.index() == 0; }
inline long long as_int(const HostAtom& a) { return std::get<long long>(a); }
inline const std::string& as_string(const HostAtom& a) { return std::get<std::string>(a); }

inline void print_atom(std::string& out, const HostAtom& a) {
    if (is_int(a)) {
        out += std::to_string(as_int(a));
    } else {
        out += '"';
        out += as_string(a);
        out += '"';
    }
}

inline std::string print_list(const HostList& v) {
    if (v.empty()) return "empty";
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ':';
        print_atom(out, v[i]);
    }
    return out;
}

// Misuse of the store or an ill-formed rule/program: caller bug, not a
// program-level outcome.
struct ConstraintError : std::logic_error {
    using std::logic_error::logic_error;
};

struct NotFoundError : std::logic_error {
    using std::logic_error::logic_error;
};

// A runtime error in the sense of program execution outcomes (division by
// zero, arithmetic overflow). Aborts the running program.
struct ExecError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace rewrite
