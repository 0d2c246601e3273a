#pragma once

#include "simpledb/checker.hpp"
#include "simpledb/path.hpp"
#include "simpledb/violations.hpp"

#include <optional>
#include <string>
#include <vector>

namespace sdb {

struct CfgEdge {
    enum class Label { Then, Else, LoopEnter, LoopExit, Ok, Exn, Fall };
    Label label = Label::Fall;
    std::optional<Violation> violation;  // Exn edges of db-write nodes
    int target = 0;                      // stmt id, Cfg::kExit or Cfg::kAbort
};

struct CfgNode {
    const Stmt* stmt = nullptr;
    std::vector<CfgEdge> out;  // alternatives in canonical enumeration order

    /// Decision nodes consume one PathStep: IF, WHILE, NEXT and db-writes.
    bool is_decision() const {
        switch (stmt->kind) {
            case Stmt::Kind::If:
            case Stmt::Kind::While:
            case Stmt::Kind::Next:
            case Stmt::Kind::CatchNext:
            case Stmt::Kind::Write:
            case Stmt::Kind::CatchWrite:
                return true;
            default:
                return false;
        }
    }
};

/// Control-flow graph over statement ids, with two virtual terminals.
class Cfg {
public:
    static constexpr int kExit = -1;
    static constexpr int kAbort = -2;

    Cfg() = default;
    Cfg(CheckedModel model, std::vector<CfgNode> nodes)
        : model_(std::move(model)), nodes_(std::move(nodes)) {}

    int entry() const { return 0; }
    const CheckedModel& model() const { return model_; }
    const CfgNode& node(int stmt_id) const { return nodes_[static_cast<std::size_t>(stmt_id)]; }
    std::size_t size() const { return nodes_.size(); }

private:
    CheckedModel model_;
    std::vector<CfgNode> nodes_;
};

namespace detail {

class CfgBuilder {
public:
    explicit CfgBuilder(const CheckedModel& model)
        : model_(model), nodes_(static_cast<std::size_t>(model.stmt_count())) {}

    std::vector<CfgNode> build() {
        const ModelDecl& m = model_.model();
        int closing = m.stmt_count - 1;
        nodes_[static_cast<std::size_t>(closing)].stmt = &model_.closing_commit();
        nodes_[static_cast<std::size_t>(closing)].out.push_back(
            {CfgEdge::Label::Fall, std::nullopt, Cfg::kExit});
        int first = wire_block(m.program, closing);
        nodes_[0].stmt = &model_.opening_commit();
        nodes_[0].out.push_back({CfgEdge::Label::Fall, std::nullopt, first});
        return std::move(nodes_);
    }

private:
    const CheckedModel& model_;
    std::vector<CfgNode> nodes_;

    int wire_block(const std::vector<Stmt>& block, int cont) {
        int next = cont;
        for (auto it = block.rbegin(); it != block.rend(); ++it) next = wire_stmt(*it, next);
        return next;
    }

    int wire_stmt(const Stmt& s, int cont) {
        CfgNode& n = nodes_[static_cast<std::size_t>(s.stmt_id)];
        n.stmt = &s;
        switch (s.kind) {
            case Stmt::Kind::If:
                n.out.push_back({CfgEdge::Label::Then, std::nullopt,
                                 wire_block(s.then_branch, cont)});
                n.out.push_back({CfgEdge::Label::Else, std::nullopt,
                                 wire_block(s.else_branch, cont)});
                break;
            case Stmt::Kind::While:
                // exit precedes enter: paths leaving the loop enumerate first
                n.out.push_back({CfgEdge::Label::LoopExit, std::nullopt, cont});
                n.out.push_back({CfgEdge::Label::LoopEnter, std::nullopt,
                                 wire_block(s.body, s.stmt_id)});
                break;
            case Stmt::Kind::Next:
                n.out.push_back({CfgEdge::Label::Ok, std::nullopt, cont});
                n.out.push_back({CfgEdge::Label::Exn, std::nullopt, Cfg::kAbort});
                break;
            case Stmt::Kind::CatchNext:
                n.out.push_back({CfgEdge::Label::Ok, std::nullopt, cont});
                n.out.push_back({CfgEdge::Label::Exn, std::nullopt, cont});
                break;
            case Stmt::Kind::Write:
            case Stmt::Kind::CatchWrite: {
                const bool caught = s.kind == Stmt::Kind::CatchWrite;
                n.out.push_back({CfgEdge::Label::Ok, std::nullopt, cont});
                for (const Violation& v : applicable_violations(model_.model(), s.write))
                    n.out.push_back({CfgEdge::Label::Exn, v, caught ? cont : Cfg::kAbort});
                break;
            }
            default:
                n.out.push_back({CfgEdge::Label::Fall, std::nullopt, cont});
                break;
        }
        return s.stmt_id;
    }
};

inline bool edge_matches_step(const CfgEdge& e, const PathStep& st) {
    switch (st.d) {
        case Decision::BranchTrue: return e.label == CfgEdge::Label::Then;
        case Decision::BranchFalse: return e.label == CfgEdge::Label::Else;
        case Decision::LoopEnter: return e.label == CfgEdge::Label::LoopEnter;
        case Decision::LoopExit: return e.label == CfgEdge::Label::LoopExit;
        case Decision::Ok: return e.label == CfgEdge::Label::Ok;
        case Decision::Exn:
            return e.label == CfgEdge::Label::Exn && e.violation == st.violation;
    }
    return false;
}

}  // namespace detail

/// Builds the CFG of a checked model: one node per statement id (sentinels
/// included), edges labeled per decision alternative.
inline Cfg build_cfg(CheckedModel model) {
    detail::CfgBuilder builder(model);
    auto nodes = builder.build();
    return Cfg(std::move(model), std::move(nodes));
}

struct InvalidStep {
    int index = -1;  // offending step index (steps.size() for terminal problems)
    std::string reason;
};

namespace detail {

/// Walks the CFG along a path; reports the executed statements in order.
inline std::optional<InvalidStep> walk_path(const Cfg& cfg, const Path& path,
                                            std::vector<int>* visited) {
    int cur = cfg.entry();
    std::size_t i = 0;
    while (cur >= 0) {
        const CfgNode& n = cfg.node(cur);
        if (visited) visited->push_back(cur);
        if (n.is_decision()) {
            if (i >= path.steps.size())
                return InvalidStep{static_cast<int>(i),
                                   "path ends at a decision statement (stmt " +
                                       std::to_string(cur) + ")"};
            const PathStep& st = path.steps[i];
            if (st.stmt_id != cur)
                return InvalidStep{static_cast<int>(i),
                                   "step names stmt " + std::to_string(st.stmt_id) +
                                       " but control is at stmt " + std::to_string(cur)};
            const CfgEdge* match = nullptr;
            for (const CfgEdge& e : n.out)
                if (detail::edge_matches_step(e, st)) {
                    match = &e;
                    break;
                }
            if (!match)
                return InvalidStep{static_cast<int>(i),
                                   "decision '" + std::string(decision_label(st.d)) +
                                       "' does not label an edge of stmt " + std::to_string(cur)};
            ++i;
            cur = match->target;
        } else {
            cur = n.out.front().target;
        }
    }
    if (i != path.steps.size())
        return InvalidStep{static_cast<int>(i), "unconsumed steps after reaching the terminal"};
    if (cur == Cfg::kExit && path.aborted)
        return InvalidStep{static_cast<int>(i), "path claims abort but control reaches exit"};
    if (cur == Cfg::kAbort) {
        if (!path.aborted)
            return InvalidStep{static_cast<int>(i), "path reaches abort but claims normal exit"};
        if (path.steps.empty() || path.abort_stmt != path.steps.back().stmt_id)
            return InvalidStep{static_cast<int>(i), "abort statement does not match last step"};
    }
    return std::nullopt;
}

}  // namespace detail

/// Accepts iff the steps follow CFG edges from the entry and the terminal
/// matches the last edge.
inline std::optional<InvalidStep> validate_path(const Cfg& cfg, const Path& path) {
    return detail::walk_path(cfg, path, nullptr);
}

/// The statements executed along a valid path, in execution order.
inline std::vector<const Stmt*> path_statements(const Cfg& cfg, const Path& path) {
    std::vector<int> ids;
    if (detail::walk_path(cfg, path, &ids)) return {};
    std::vector<const Stmt*> out;
    out.reserve(ids.size());
    for (int id : ids) out.push_back(cfg.node(id).stmt);
    return out;
}

}  // namespace sdb
