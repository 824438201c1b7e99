#pragma once

#include <stdexcept>
#include <string>

namespace ricciflow {

// Invalid user input (bad files, bad graphs, bad parameters). The CLI maps
// these to exit code 2.
struct input_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Violated internal contract. The CLI maps these to exit code 3.
struct internal_error : std::logic_error {
    using std::logic_error::logic_error;
};

struct self_loop_error : input_error {
    explicit self_loop_error(const std::string& what) : input_error(what) {}
};

struct duplicate_edge_error : input_error {
    explicit duplicate_edge_error(const std::string& what) : input_error(what) {}
};

struct non_positive_weight_error : input_error {
    explicit non_positive_weight_error(const std::string& what) : input_error(what) {}
};

struct disconnected_error : input_error {
    explicit disconnected_error(const std::string& what) : input_error(what) {}
};

struct edge_not_in_graph_error : input_error {
    explicit edge_not_in_graph_error(const std::string& what) : input_error(what) {}
};

struct unbalanced_masses_error : input_error {
    explicit unbalanced_masses_error(const std::string& what) : input_error(what) {}
};

struct vertex_set_mismatch_error : input_error {
    explicit vertex_set_mismatch_error(const std::string& what) : input_error(what) {}
};

struct alpha_outside_branch_error : input_error {
    explicit alpha_outside_branch_error(const std::string& what) : input_error(what) {}
};

struct zero_total_weight_error : internal_error {
    explicit zero_total_weight_error(const std::string& what) : internal_error(what) {}
};

// Parse failure in an input file; carries the 1-based line number.
struct parse_error : input_error {
    parse_error(const std::string& file, long line, const std::string& msg)
        : input_error(file + ":" + std::to_string(line) + ": " + msg), line_number(line) {}
    long line_number;
};

} // namespace ricciflow
