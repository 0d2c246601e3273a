#pragma once

#include "simpledb/violations.hpp"

#include <optional>
#include <string>
#include <vector>

namespace sdb {

enum class Decision { BranchTrue, BranchFalse, LoopEnter, LoopExit, Ok, Exn };

inline const char* decision_label(Decision d) {
    switch (d) {
        case Decision::BranchTrue: return "T";
        case Decision::BranchFalse: return "F";
        case Decision::LoopEnter: return "enter";
        case Decision::LoopExit: return "exit";
        case Decision::Ok: return "ok";
        case Decision::Exn: return "exn";
    }
    return "?";
}

struct PathStep {
    int stmt_id = -1;
    Decision d = Decision::Ok;
    std::optional<Violation> violation;  // set only for db-write exceptions

    bool operator==(const PathStep&) const = default;
};

/// One finite control-flow route: every branch, loop evaluation and
/// exception outcome pinned. `aborted` marks termination by an uncaught
/// exception at `abort_stmt` (which is then the statement of the last step).
struct Path {
    std::vector<PathStep> steps;
    bool aborted = false;
    int abort_stmt = -1;

    bool operator==(const Path&) const = default;
};

struct PathBounds {
    int max_loop_iterations = 1;
    bool include_exception_paths = true;
    int max_paths = 100000;
};

}  // namespace sdb
