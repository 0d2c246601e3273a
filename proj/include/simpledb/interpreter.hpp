#pragma once

#include "simpledb/checker.hpp"
#include "simpledb/path.hpp"
#include "simpledb/value.hpp"
#include "simpledb/violations.hpp"

#include <algorithm>
#include <exception>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace sdb {

enum class RunErrorKind { InvalidInput, InputUnderflow, HeadOfNil, TailOfNil, CursorNotReadable };

/// Tool-level execution failure. Distinct from SimpleDB exceptions, which are
/// part of the language semantics and appear as trace outcomes instead.
class RunError : public std::exception {
public:
    RunError(RunErrorKind kind, int stmt_id, std::string message)
        : kind_(kind), stmt_id_(stmt_id), message_(std::move(message)) {}
    RunErrorKind kind() const { return kind_; }
    int stmt_id() const { return stmt_id_; }
    const char* what() const noexcept override { return message_.c_str(); }

private:
    RunErrorKind kind_;
    int stmt_id_;
    std::string message_;
};

/// The decision trace of one run; same vocabulary as Path.
using Trace = Path;

struct ExecResult {
    Trace trace;
    std::map<std::string, TableRows> db;  // final committed state
    bool aborted = false;
    int abort_stmt = -1;
    std::optional<Violation> abort_violation;
};

/// Projects the recorded decisions of a run into a Path accepted by
/// validate_path.
inline Path path_of_trace(const Trace& t) { return t; }

using Env = std::map<std::string, Value>;

namespace detail {

struct EvalCtx {
    const CheckedModel& model;
    const Env& env;
    int bitwidth;
    int stmt_id;  // for error reporting
};

/// Row context for db-conditions and UPDATE SET expressions, where attribute
/// names shadow program variables.
struct RowCtx {
    const TableDecl* table;
    const Row* row;
};

inline Int eval_int(const EvalCtx& c, const Expr& e, const RowCtx* row);

inline const std::vector<Int>& eval_list_var(const EvalCtx& c, const std::string& name) {
    return c.env.at(name).as_list();
}

inline std::vector<Int> eval_list(const EvalCtx& c, const Expr& e) {
    switch (e.kind) {
        case Expr::Kind::Var: return c.env.at(e.name).as_list();
        case Expr::Kind::Nil: return {};
        case Expr::Kind::Prepend: {
            std::vector<Int> rest = eval_list(c, e.args[1]);
            std::vector<Int> out;
            out.reserve(rest.size() + 1);
            out.push_back(eval_int(c, e.args[0], nullptr));
            out.insert(out.end(), rest.begin(), rest.end());
            return out;
        }
        case Expr::Kind::Tail: {
            const auto& l = eval_list_var(c, e.name);
            if (l.empty())
                throw RunError(RunErrorKind::TailOfNil, c.stmt_id, "TAIL of empty list");
            return std::vector<Int>(l.begin() + 1, l.end());
        }
        default:
            throw RunError(RunErrorKind::InvalidInput, c.stmt_id, "not a list expression");
    }
}

inline Int eval_int(const EvalCtx& c, const Expr& e, const RowCtx* row) {
    switch (e.kind) {
        case Expr::Kind::Var: {
            if (row && row->table->has_attribute(e.name))
                return (*row->row)[static_cast<std::size_t>(row->table->attr_index(e.name))];
            return c.env.at(e.name).as_int();
        }
        case Expr::Kind::Nat:
            return wrap_int(static_cast<Int>(e.nat), c.bitwidth);
        case Expr::Kind::Binary: {
            Int a = eval_int(c, e.args[0], row);
            Int b = eval_int(c, e.args[1], row);
            switch (e.op) {
                case ArithOp::Add: return wrap_int(a + b, c.bitwidth);
                case ArithOp::Sub: return wrap_int(a - b, c.bitwidth);
                case ArithOp::Mul: return wrap_int(a * b, c.bitwidth);
                case ArithOp::Div: return wrap_int(div_total(a, b), c.bitwidth);
            }
            return 0;
        }
        case Expr::Kind::Neg:
            return wrap_int(-eval_int(c, e.args[0], row), c.bitwidth);
        case Expr::Kind::Head: {
            const auto& l = eval_list_var(c, e.name);
            if (l.empty())
                throw RunError(RunErrorKind::HeadOfNil, c.stmt_id, "HEAD of empty list");
            return l.front();
        }
        case Expr::Kind::CursorRead: {
            const TableVal& tv = c.env.at(e.name).as_table();
            if (tv.advanced == 0)
                throw RunError(RunErrorKind::CursorNotReadable, c.stmt_id,
                               "cursor of '" + e.name + "' does not point at a row");
            const Row& r = tv.rows[static_cast<std::size_t>(tv.advanced - 1)];
            const TableDecl* t = c.model.table(tv.table);
            return r[static_cast<std::size_t>(t->attr_index(e.attr))];
        }
        default:
            throw RunError(RunErrorKind::InvalidInput, c.stmt_id, "not an integer expression");
    }
}

inline bool compare(Int a, CmpOp op, Int b) {
    switch (op) {
        case CmpOp::Less: return a < b;
        case CmpOp::Equal: return a == b;
        case CmpOp::Greater: return a > b;
    }
    return false;
}

inline bool eval_cond(const EvalCtx& c, const Cond& cond, const RowCtx* row) {
    switch (cond.kind) {
        case Cond::Kind::True: return true;
        case Cond::Kind::False: return false;
        case Cond::Kind::And: return eval_cond(c, cond.sub[0], row) && eval_cond(c, cond.sub[1], row);
        case Cond::Kind::Or: return eval_cond(c, cond.sub[0], row) || eval_cond(c, cond.sub[1], row);
        case Cond::Kind::Not: return !eval_cond(c, cond.sub[0], row);
        case Cond::Kind::Cmp:
            return compare(eval_int(c, cond.operands[0], row), cond.cmp,
                           eval_int(c, cond.operands[1], row));
        case Cond::Kind::NilTest: return eval_list_var(c, cond.var).empty();
    }
    return false;
}

inline void sort_rows(TableRows& rows, int pk_index) {
    std::sort(rows.begin(), rows.end(), [pk_index](const Row& a, const Row& b) {
        return a[static_cast<std::size_t>(pk_index)] < b[static_cast<std::size_t>(pk_index)];
    });
}

}  // namespace detail

/// Rows of the working state matching the db-condition, ascending by primary
/// key, with the attribute-shadowing rule applied inside the condition.
inline TableRows exec_select(const DbState& db, const CheckedModel& model,
                             const std::string& table, const Cond& where, const Env& env,
                             int bitwidth, int stmt_id = -1) {
    const TableDecl* t = model.table(table);
    detail::EvalCtx c{model, env, bitwidth, stmt_id};
    TableRows out;
    auto it = db.working.find(table);
    if (it == db.working.end()) return out;
    for (const Row& r : it->second) {
        detail::RowCtx rc{t, &r};
        if (detail::eval_cond(c, where, &rc)) out.push_back(r);
    }
    // working rows are kept sorted by primary key, so `out` already is
    return out;
}

/// Applies an INSERT/UPDATE/DELETE to the working state, all-or-nothing.
/// Returns the first violated constraint in canonical order (PK, FKs in
/// declaration order, arithmetic constraints in declaration order,
/// referenced-row) and leaves the state untouched, or the new state.
inline std::variant<DbState, Violation> apply_db_write(const DbState& db,
                                                       const CheckedModel& model,
                                                       const DbWrite& w, const Env& env,
                                                       int bitwidth, int stmt_id = -1) {
    const TableDecl& t = *model.table(w.table);
    const std::size_t pk = static_cast<std::size_t>(t.pk_index());
    detail::EvalCtx c{model, env, bitwidth, stmt_id};
    const TableRows& cur = db.working.at(w.table);

    auto fk_satisfied = [&](const ForeignKey& fk, Int value) {
        const TableDecl& rt = *model.table(fk.references);
        const TableRows& rows = db.working.at(fk.references);
        const std::size_t rpk = static_cast<std::size_t>(rt.pk_index());
        for (const Row& b : rows)
            if (b[rpk] == value) return true;
        return false;
    };
    auto arith_satisfied = [&](const ArithConstraint& a, Int value) {
        return detail::compare(value, a.op, wrap_int(static_cast<Int>(a.bound), bitwidth));
    };
    auto referenced_by_some_row = [&](Int pk_value) {
        for (const TableDecl& s : model.model().tables) {
            for (const auto& fk : s.foreign_keys) {
                if (fk.references != t.name) continue;
                const std::size_t fi = static_cast<std::size_t>(s.attr_index(fk.attribute));
                for (const Row& r : db.working.at(s.name))
                    if (r[fi] == pk_value) return true;
            }
        }
        return false;
    };

    switch (w.kind) {
        case DbWrite::Kind::Insert: {
            Row r;
            r.reserve(w.values.size());
            for (const Expr& v : w.values) r.push_back(detail::eval_int(c, v, nullptr));
            for (const Row& existing : cur)
                if (existing[pk] == r[pk]) return Violation{Violation::Kind::Pk, -1};
            for (int i = 0; i < static_cast<int>(t.foreign_keys.size()); ++i) {
                const auto& fk = t.foreign_keys[static_cast<std::size_t>(i)];
                Int value = r[static_cast<std::size_t>(t.attr_index(fk.attribute))];
                if (!fk_satisfied(fk, value)) return Violation{Violation::Kind::Fk, i};
            }
            for (int i = 0; i < static_cast<int>(t.arith_constraints.size()); ++i) {
                const auto& a = t.arith_constraints[static_cast<std::size_t>(i)];
                Int value = r[static_cast<std::size_t>(t.attr_index(a.attribute))];
                if (!arith_satisfied(a, value)) return Violation{Violation::Kind::Arith, i};
            }
            DbState out = db;
            out.working[w.table].push_back(std::move(r));
            detail::sort_rows(out.working[w.table], t.pk_index());
            return out;
        }
        case DbWrite::Kind::Update: {
            const std::size_t set_idx = static_cast<std::size_t>(t.attr_index(w.set_attr));
            std::vector<bool> matched(cur.size());
            TableRows intended = cur;
            for (std::size_t i = 0; i < cur.size(); ++i) {
                detail::RowCtx rc{&t, &cur[i]};
                matched[i] = detail::eval_cond(c, w.where, &rc);
                if (matched[i])
                    intended[i][set_idx] = detail::eval_int(c, w.set_expr[0], &rc);
            }
            if (w.set_attr == t.primary_key) {
                for (std::size_t i = 0; i < intended.size(); ++i)
                    for (std::size_t j = i + 1; j < intended.size(); ++j)
                        if (intended[i][pk] == intended[j][pk])
                            return Violation{Violation::Kind::Pk, -1};
            }
            for (int i = 0; i < static_cast<int>(t.foreign_keys.size()); ++i) {
                const auto& fk = t.foreign_keys[static_cast<std::size_t>(i)];
                if (fk.attribute != w.set_attr) continue;
                for (std::size_t r = 0; r < intended.size(); ++r)
                    if (matched[r] && !fk_satisfied(fk, intended[r][set_idx]))
                        return Violation{Violation::Kind::Fk, i};
            }
            for (int i = 0; i < static_cast<int>(t.arith_constraints.size()); ++i) {
                const auto& a = t.arith_constraints[static_cast<std::size_t>(i)];
                if (a.attribute != w.set_attr) continue;
                for (std::size_t r = 0; r < intended.size(); ++r)
                    if (matched[r] && !arith_satisfied(a, intended[r][set_idx]))
                        return Violation{Violation::Kind::Arith, i};
            }
            if (w.set_attr == t.primary_key && table_is_referenced(model.model(), t.name)) {
                // a referenced row may not see its primary key value changed
                for (std::size_t r = 0; r < cur.size(); ++r)
                    if (matched[r] && intended[r][pk] != cur[r][pk] &&
                        referenced_by_some_row(cur[r][pk]))
                        return Violation{Violation::Kind::RefRow, -1};
            }
            DbState out = db;
            out.working[w.table] = std::move(intended);
            detail::sort_rows(out.working[w.table], t.pk_index());
            return out;
        }
        case DbWrite::Kind::Delete: {
            std::vector<bool> matched(cur.size());
            for (std::size_t i = 0; i < cur.size(); ++i) {
                detail::RowCtx rc{&t, &cur[i]};
                matched[i] = detail::eval_cond(c, w.where, &rc);
            }
            if (table_is_referenced(model.model(), t.name)) {
                for (std::size_t i = 0; i < cur.size(); ++i)
                    if (matched[i] && referenced_by_some_row(cur[i][pk]))
                        return Violation{Violation::Kind::RefRow, -1};
            }
            DbState out = db;
            TableRows rest;
            for (std::size_t i = 0; i < cur.size(); ++i)
                if (!matched[i]) rest.push_back(cur[i]);
            out.working[w.table] = std::move(rest);
            return out;
        }
    }
    return Violation{};
}

/// Rejects inputs that name unknown tables, carry malformed or out-of-range
/// rows/values, or violate the schema. Declared tables absent from the input
/// start empty.
inline void validate_input(const CheckedModel& model, const TestInput& input, int bitwidth) {
    const Int lo = int_min_value(bitwidth), hi = int_max_value(bitwidth);
    auto in_range = [&](Int v) { return v >= lo && v <= hi; };
    for (const auto& [name, rows] : input.tables) {
        const TableDecl* t = model.table(name);
        if (!t) throw RunError(RunErrorKind::InvalidInput, -1, "input for unknown table " + name);
        for (const Row& r : rows) {
            if (r.size() != t->attributes.size())
                throw RunError(RunErrorKind::InvalidInput, -1,
                               "row width mismatch for table " + name);
            for (Int v : r)
                if (!in_range(v))
                    throw RunError(RunErrorKind::InvalidInput, -1,
                                   "table value outside bitwidth range");
        }
        const std::size_t pk = static_cast<std::size_t>(t->pk_index());
        for (std::size_t i = 0; i < rows.size(); ++i)
            for (std::size_t j = i + 1; j < rows.size(); ++j)
                if (rows[i][pk] == rows[j][pk])
                    throw RunError(RunErrorKind::InvalidInput, -1,
                                   "duplicate primary key in table " + name);
        for (const auto& a : t->arith_constraints) {
            const std::size_t idx = static_cast<std::size_t>(t->attr_index(a.attribute));
            for (const Row& r : rows)
                if (!detail::compare(r[idx], a.op, wrap_int(static_cast<Int>(a.bound), bitwidth)))
                    throw RunError(RunErrorKind::InvalidInput, -1,
                                   "arithmetic constraint violated in table " + name);
        }
    }
    for (const TableDecl& t : model.model().tables) {
        auto it = input.tables.find(t.name);
        if (it == input.tables.end()) continue;
        for (const auto& fk : t.foreign_keys) {
            const TableDecl& rt = *model.table(fk.references);
            const std::size_t fi = static_cast<std::size_t>(t.attr_index(fk.attribute));
            const std::size_t rpk = static_cast<std::size_t>(rt.pk_index());
            auto rit = input.tables.find(fk.references);
            for (const Row& r : it->second) {
                bool found = false;
                if (rit != input.tables.end())
                    for (const Row& b : rit->second)
                        if (b[rpk] == r[fi]) { found = true; break; }
                if (!found)
                    throw RunError(RunErrorKind::InvalidInput, -1,
                                   "foreign key violated in input table " + t.name);
            }
        }
    }
    for (Int v : input.reads)
        if (!in_range(v))
            throw RunError(RunErrorKind::InvalidInput, -1, "READ value outside bitwidth range");
    for (const auto& l : input.loads)
        for (Int v : l)
            if (!in_range(v))
                throw RunError(RunErrorKind::InvalidInput, -1,
                               "LOAD value outside bitwidth range");
}

namespace detail {

class Interp {
public:
    Interp(const CheckedModel& model, const TestInput& input, int bitwidth)
        : m_(model), in_(input), w_(bitwidth) {}

    ExecResult run() {
        validate_input(m_, in_, w_);
        for (const TableDecl& t : m_.model().tables) {
            TableRows rows;
            auto it = in_.tables.find(t.name);
            if (it != in_.tables.end()) rows = it->second;
            sort_rows(rows, t.pk_index());
            db_.working[t.name] = rows;
        }
        db_.committed = db_.working;  // the opening COMMIT
        bool aborted = !exec_block(m_.model().program);
        if (!aborted) db_.committed = db_.working;  // the closing COMMIT
        ExecResult res;
        res.aborted = aborted;
        if (aborted) {
            res.abort_stmt = trace_.abort_stmt;
            res.abort_violation = abort_violation_;
        }
        res.trace = std::move(trace_);
        res.db = db_.committed;
        return res;
    }

private:
    const CheckedModel& m_;
    const TestInput& in_;
    int w_;
    DbState db_;
    Env env_;
    std::size_t read_pos_ = 0, load_pos_ = 0;
    Trace trace_;
    std::optional<Violation> abort_violation_;

    EvalCtx ctx(int stmt_id) const { return EvalCtx{m_, env_, w_, stmt_id}; }

    void step(int stmt_id, Decision d, std::optional<Violation> v = std::nullopt) {
        trace_.steps.push_back(PathStep{stmt_id, d, std::move(v)});
    }

    void abort_at(int stmt_id, std::optional<Violation> v) {
        trace_.aborted = true;
        trace_.abort_stmt = stmt_id;
        abort_violation_ = std::move(v);
    }

    // Returns false when an uncaught exception terminated the program.
    bool exec_block(const std::vector<Stmt>& block) {
        for (const Stmt& s : block)
            if (!exec_stmt(s)) return false;
        return true;
    }

    bool exec_stmt(const Stmt& s) {
        switch (s.kind) {
            case Stmt::Kind::If: {
                bool b = eval_cond(ctx(s.stmt_id), s.cond, nullptr);
                step(s.stmt_id, b ? Decision::BranchTrue : Decision::BranchFalse);
                return exec_block(b ? s.then_branch : s.else_branch);
            }
            case Stmt::Kind::While: {
                while (true) {
                    bool b = eval_cond(ctx(s.stmt_id), s.cond, nullptr);
                    step(s.stmt_id, b ? Decision::LoopEnter : Decision::LoopExit);
                    if (!b) return true;
                    if (!exec_block(s.body)) return false;
                }
            }
            case Stmt::Kind::Assign: {
                const Expr& e = s.expr[0];
                if (m_.var_type(s.var)->kind == TypeKind::List)
                    env_[s.var] = Value{eval_list(ctx(s.stmt_id), e)};
                else
                    env_[s.var] = Value{eval_int(ctx(s.stmt_id), e, nullptr)};
                return true;
            }
            case Stmt::Kind::Read: {
                if (read_pos_ >= in_.reads.size())
                    throw RunError(RunErrorKind::InputUnderflow, s.stmt_id,
                                   "READ exhausted the input values");
                env_[s.var] = Value{in_.reads[read_pos_++]};
                return true;
            }
            case Stmt::Kind::Load: {
                if (load_pos_ >= in_.loads.size())
                    throw RunError(RunErrorKind::InputUnderflow, s.stmt_id,
                                   "LOAD exhausted the input lists");
                env_[s.var] = Value{in_.loads[load_pos_++]};
                return true;
            }
            case Stmt::Kind::SelectAssign: {
                TableRows rows = exec_select(db_, m_, s.select_table, s.select_where, env_, w_,
                                             s.stmt_id);
                const TableDecl* t = m_.table(s.select_table);
                env_[s.var] = Value{TableVal{s.select_table, std::move(rows), t->pk_index(), 0,
                                             false}};
                return true;
            }
            case Stmt::Kind::Next:
            case Stmt::Kind::CatchNext: {
                const std::string& cvar = s.kind == Stmt::Kind::Next ? s.var : s.cursor_var;
                TableVal& tv = env_.at(cvar).as_table();
                bool thrown;
                if (tv.exhausted || tv.advanced >= static_cast<int>(tv.rows.size())) {
                    tv.exhausted = true;
                    thrown = true;
                } else {
                    tv.advanced++;
                    thrown = false;
                }
                step(s.stmt_id, thrown ? Decision::Exn : Decision::Ok);
                if (s.kind == Stmt::Kind::CatchNext) {
                    env_[s.var] = Value{Int{thrown ? 1 : 0}};
                    return true;
                }
                if (thrown) {
                    abort_at(s.stmt_id, std::nullopt);
                    return false;
                }
                return true;
            }
            case Stmt::Kind::Write:
            case Stmt::Kind::CatchWrite: {
                auto result = apply_db_write(db_, m_, s.write, env_, w_, s.stmt_id);
                const bool thrown = std::holds_alternative<Violation>(result);
                if (thrown) {
                    step(s.stmt_id, Decision::Exn, std::get<Violation>(result));
                } else {
                    db_ = std::move(std::get<DbState>(result));
                    step(s.stmt_id, Decision::Ok);
                }
                if (s.kind == Stmt::Kind::CatchWrite) {
                    env_[s.var] = Value{Int{thrown ? 1 : 0}};
                    return true;
                }
                if (thrown) {
                    abort_at(s.stmt_id, std::get<Violation>(result));
                    return false;
                }
                return true;
            }
            case Stmt::Kind::Commit:
                db_.committed = db_.working;
                return true;
            case Stmt::Kind::Rollback:
                db_.working = db_.committed;
                return true;
        }
        return true;
    }
};

}  // namespace detail

/// Executes a checked model on a test input under w-bit two's-complement
/// arithmetic. Uncaught exceptions terminate the run with no final commit;
/// tool-level failures (input underflow, HEAD/TAIL of NIL, unreadable
/// cursor, invalid input) throw RunError.
inline ExecResult run(const CheckedModel& model, const TestInput& input, int bitwidth = 4) {
    detail::Interp interp(model, input, bitwidth);
    return interp.run();
}

}  // namespace sdb
