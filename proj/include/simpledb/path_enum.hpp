#pragma once

#include "simpledb/cfg.hpp"

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace sdb {

struct PathEnumeration {
    std::vector<Path> paths;
    bool truncated = false;
};

namespace detail {

enum class CursorPhase { Fresh, Advanced, Exhausted };

struct EnumState {
    std::map<std::string, CursorPhase> cursors;
    std::map<int, int> loop_counts;
};

class PathEnumerator {
public:
    PathEnumerator(const Cfg& cfg, const PathBounds& bounds) : cfg_(cfg), b_(bounds) {}

    PathEnumeration run() {
        std::vector<PathStep> steps;
        visit(cfg_.entry(), EnumState{}, steps);
        return std::move(result_);
    }

private:
    const Cfg& cfg_;
    PathBounds b_;
    PathEnumeration result_;
    bool done_ = false;

    void record(const std::vector<PathStep>& steps, bool aborted) {
        if (done_) return;
        if (static_cast<int>(result_.paths.size()) >= b_.max_paths) {
            result_.truncated = true;
            done_ = true;
            return;
        }
        Path p;
        p.steps = steps;
        p.aborted = aborted;
        if (aborted) p.abort_stmt = p.steps.back().stmt_id;
        result_.paths.push_back(std::move(p));
    }

    void follow(int target, EnumState st, std::vector<PathStep>& steps) {
        if (done_) return;
        if (target == Cfg::kExit) {
            record(steps, false);
            return;
        }
        if (target == Cfg::kAbort) {
            record(steps, true);
            return;
        }
        visit(target, std::move(st), steps);
    }

    void take(const CfgEdge& e, PathStep step, EnumState st, std::vector<PathStep>& steps) {
        steps.push_back(step);
        follow(e.target, std::move(st), steps);
        steps.pop_back();
    }

    void visit(int cur, EnumState st, std::vector<PathStep>& steps) {
        if (done_) return;
        const CfgNode& n = cfg_.node(cur);
        const Stmt& s = *n.stmt;
        switch (s.kind) {
            case Stmt::Kind::SelectAssign:
                st.cursors[s.var] = CursorPhase::Fresh;
                follow(n.out.front().target, std::move(st), steps);
                return;
            case Stmt::Kind::Next:
            case Stmt::Kind::CatchNext: {
                const std::string& cvar = s.kind == Stmt::Kind::Next ? s.var : s.cursor_var;
                auto it = st.cursors.find(cvar);
                CursorPhase phase = it == st.cursors.end() ? CursorPhase::Fresh : it->second;
                for (const CfgEdge& e : n.out) {
                    if (e.label == CfgEdge::Label::Ok) {
                        if (phase == CursorPhase::Exhausted) continue;
                        EnumState st2 = st;
                        st2.cursors[cvar] = CursorPhase::Advanced;
                        take(e, PathStep{cur, Decision::Ok, std::nullopt}, std::move(st2), steps);
                    } else {
                        if (!b_.include_exception_paths) continue;
                        EnumState st2 = st;
                        st2.cursors[cvar] = CursorPhase::Exhausted;
                        take(e, PathStep{cur, Decision::Exn, std::nullopt}, std::move(st2), steps);
                    }
                }
                return;
            }
            case Stmt::Kind::While: {
                for (const CfgEdge& e : n.out) {
                    if (e.label == CfgEdge::Label::LoopExit) {
                        EnumState st2 = st;
                        st2.loop_counts[cur] = 0;
                        take(e, PathStep{cur, Decision::LoopExit, std::nullopt}, std::move(st2),
                             steps);
                    } else {
                        auto it = st.loop_counts.find(cur);
                        int count = it == st.loop_counts.end() ? 0 : it->second;
                        if (count + 1 > b_.max_loop_iterations) continue;
                        EnumState st2 = st;
                        st2.loop_counts[cur] = count + 1;
                        take(e, PathStep{cur, Decision::LoopEnter, std::nullopt}, std::move(st2),
                             steps);
                    }
                }
                return;
            }
            case Stmt::Kind::If:
                for (const CfgEdge& e : n.out)
                    take(e,
                         PathStep{cur,
                                  e.label == CfgEdge::Label::Then ? Decision::BranchTrue
                                                                  : Decision::BranchFalse,
                                  std::nullopt},
                         st, steps);
                return;
            case Stmt::Kind::Write:
            case Stmt::Kind::CatchWrite:
                for (const CfgEdge& e : n.out) {
                    if (e.label == CfgEdge::Label::Ok) {
                        take(e, PathStep{cur, Decision::Ok, std::nullopt}, st, steps);
                    } else {
                        if (!b_.include_exception_paths) continue;
                        take(e, PathStep{cur, Decision::Exn, e.violation}, st, steps);
                    }
                }
                return;
            default:
                follow(n.out.front().target, std::move(st), steps);
                return;
        }
    }
};

}  // namespace detail

/// Depth-first enumeration of all decision sequences within the bounds.
/// Deterministic order: then before else, exit before enter, ok before
/// exceptions, violations in declaration order. Cursor semantics prune
/// impossible NEXT outcomes (a NEXT after a throwing NEXT can only throw).
inline PathEnumeration enumerate_paths(const Cfg& cfg, const PathBounds& bounds) {
    detail::PathEnumerator e(cfg, bounds);
    return e.run();
}

}  // namespace sdb
