#pragma once

#include "simpledb/ast.hpp"
#include "simpledb/numeric.hpp"
#include "simpledb/parser.hpp"

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace sdb {

enum class TypeKind { Int, List, Table };

struct VarType {
    TypeKind kind = TypeKind::Int;
    std::string table;  // when kind == Table

    bool operator==(const VarType&) const = default;
};

inline std::string type_name(const VarType& t) {
    switch (t.kind) {
        case TypeKind::Int: return "int";
        case TypeKind::List: return "list";
        case TypeKind::Table: return "table(" + t.table + ")";
    }
    return "?";
}

/// A statically validated model. Owns the AST; copies share it.
class CheckedModel {
public:
    CheckedModel() = default;

    const ModelDecl& model() const { return holder_->model; }
    int stmt_count() const { return holder_->model.stmt_count; }

    /// Statement by id; ids 0 and stmt_count-1 resolve to the synthesized
    /// boundary COMMIT statements.
    const Stmt* stmt_by_id(int id) const {
        if (id < 0 || id >= static_cast<int>(holder_->by_id.size())) return nullptr;
        return holder_->by_id[static_cast<std::size_t>(id)];
    }
    const Stmt& opening_commit() const { return holder_->open_sentinel; }
    const Stmt& closing_commit() const { return holder_->close_sentinel; }

    const TableDecl* table(std::string_view name) const { return holder_->model.find_table(name); }

    std::optional<VarType> var_type(const std::string& name) const {
        auto it = holder_->var_types.find(name);
        if (it == holder_->var_types.end()) return std::nullopt;
        return it->second;
    }
    const std::map<std::string, VarType>& var_types() const { return holder_->var_types; }
    const std::vector<Diagnostic>& warnings() const { return holder_->warnings; }

private:
    struct Holder {
        ModelDecl model;
        Stmt open_sentinel;
        Stmt close_sentinel;
        std::vector<const Stmt*> by_id;
        std::map<std::string, VarType> var_types;
        std::vector<Diagnostic> warnings;
    };
    std::shared_ptr<const Holder> holder_;

    friend CheckedModel check(ModelDecl m);
    explicit CheckedModel(std::shared_ptr<const Holder> h) : holder_(std::move(h)) {}
};

namespace detail {

class Checker {
public:
    explicit Checker(const ModelDecl& m) : m_(m) {}

    void run(std::map<std::string, VarType>& var_types, std::vector<Diagnostic>& warnings) {
        check_schema();
        scopes_.emplace_back();
        check_block(m_.program);
        scopes_.pop_back();
        if (!errors_.empty()) throw CompileError(std::move(errors_));
        var_types = std::move(global_types_);
        warnings = std::move(warnings_);
    }

private:
    const ModelDecl& m_;
    std::vector<Diagnostic> errors_;
    std::vector<Diagnostic> warnings_;
    std::vector<std::map<std::string, VarType>> scopes_;
    std::map<std::string, VarType> global_types_;

    void error(SourcePos pos, std::string msg, int stmt_id = -1) {
        errors_.push_back(Diagnostic{pos, std::move(msg), stmt_id});
    }
    void warn(SourcePos pos, std::string msg, int stmt_id = -1) {
        warnings_.push_back(Diagnostic{pos, std::move(msg), stmt_id});
    }

    // ---- schema ----

    void check_schema() {
        std::set<std::string> names;
        for (const TableDecl& t : m_.tables) {
            if (!names.insert(t.name).second)
                error(t.pos, "duplicate table name '" + t.name + "'");
            std::set<std::string> attrs;
            for (const auto& a : t.attributes)
                if (!attrs.insert(a).second)
                    error(t.pos, "duplicate attribute '" + a + "' in table '" + t.name + "'");
            if (!t.has_attribute(t.primary_key))
                error(t.pos, "primary key '" + t.primary_key + "' is not an attribute of table '" +
                                 t.name + "'");
            std::set<std::string> fk_targets;
            for (const auto& fk : t.foreign_keys) {
                if (!t.has_attribute(fk.attribute))
                    error(t.pos, "foreign key attribute '" + fk.attribute +
                                     "' is not an attribute of table '" + t.name + "'");
                if (!m_.find_table(fk.references))
                    error(t.pos, "foreign key of table '" + t.name +
                                     "' references unknown table '" + fk.references + "'");
                if (!fk_targets.insert(fk.references).second)
                    warn(t.pos, "table '" + t.name + "' declares several foreign keys into '" +
                                    fk.references + "'; FK violation labels are ambiguous");
            }
            for (const auto& c : t.arith_constraints) {
                if (!t.has_attribute(c.attribute))
                    error(t.pos, "constrained attribute '" + c.attribute +
                                     "' is not an attribute of table '" + t.name + "'");
                check_literal_width(c.bound, t.pos);
            }
        }
        check_fk_cycles();
    }

    void check_fk_cycles() {
        // 0 = unvisited, 1 = on stack, 2 = done
        std::map<std::string, int> state;
        for (const TableDecl& t : m_.tables)
            if (state[t.name] == 0 && dfs_cycle(t.name, state))
                error(t.pos, "cycle in table references involving '" + t.name + "'");
    }

    bool dfs_cycle(const std::string& name, std::map<std::string, int>& state) {
        state[name] = 1;
        const TableDecl* t = m_.find_table(name);
        if (t) {
            for (const auto& fk : t->foreign_keys) {
                if (!m_.find_table(fk.references)) continue;
                int s = state[fk.references];
                if (s == 1) return true;
                if (s == 0 && dfs_cycle(fk.references, state)) return true;
            }
        }
        state[name] = 2;
        return false;
    }

    void check_literal_width(std::uint64_t v, SourcePos pos) {
        if (v > static_cast<std::uint64_t>(int_max_value(kDefaultBitwidth)))
            warn(pos, "literal " + std::to_string(v) + " exceeds the default solver bitwidth (" +
                          std::to_string(kDefaultBitwidth) + " bits) and will wrap");
    }

    // ---- scoping and typing ----

    static constexpr int kDefaultBitwidth = 4;

    std::optional<VarType> lookup(const std::string& name) const {
        for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it) {
            auto f = it->find(name);
            if (f != it->end()) return f->second;
        }
        return std::nullopt;
    }

    void bind(const std::string& name, VarType type, SourcePos pos, int stmt_id) {
        if (auto existing = lookup(name)) {
            if (!(*existing == type))
                error(pos, "variable '" + name + "' changes type from " + type_name(*existing) +
                               " to " + type_name(type),
                      stmt_id);
            return;  // re-assignment of an already visible variable
        }
        auto g = global_types_.find(name);
        if (g != global_types_.end() && !(g->second == type)) {
            error(pos, "variable '" + name + "' changes type from " + type_name(g->second) +
                           " to " + type_name(type),
                  stmt_id);
            return;
        }
        global_types_.emplace(name, type);
        scopes_.back().emplace(name, type);
    }

    std::optional<VarType> use(const std::string& name, SourcePos pos, int stmt_id) {
        auto t = lookup(name);
        if (!t)
            error(pos, "variable '" + name + "' used before initialization or outside the block "
                       "where it was initialized",
                  stmt_id);
        return t;
    }

    // ---- expressions ----

    // row_table != nullptr inside db-conditions and UPDATE SET expressions,
    // where attribute names shadow program variables.
    void check_int_expr(const Expr& e, const TableDecl* row_table, int stmt_id) {
        switch (e.kind) {
            case Expr::Kind::Var: {
                if (row_table && row_table->has_attribute(e.name)) return;
                auto t = use(e.name, e.pos, stmt_id);
                if (t && t->kind != TypeKind::Int)
                    error(e.pos, "variable '" + e.name + "' has type " + type_name(*t) +
                                     " but an int is required",
                          stmt_id);
                return;
            }
            case Expr::Kind::Nat:
                check_literal_width(e.nat, e.pos);
                return;
            case Expr::Kind::Binary:
                check_int_expr(e.args[0], row_table, stmt_id);
                check_int_expr(e.args[1], row_table, stmt_id);
                return;
            case Expr::Kind::Neg:
                check_int_expr(e.args[0], row_table, stmt_id);
                return;
            case Expr::Kind::Head: {
                auto t = use(e.name, e.pos, stmt_id);
                if (t && t->kind != TypeKind::List)
                    error(e.pos, "HEAD applies to a list variable, but '" + e.name + "' has type " +
                                     type_name(*t),
                          stmt_id);
                return;
            }
            case Expr::Kind::CursorRead: {
                auto t = use(e.name, e.pos, stmt_id);
                if (t) {
                    if (t->kind != TypeKind::Table) {
                        error(e.pos, "cursor read applies to a table variable, but '" + e.name +
                                         "' has type " + type_name(*t),
                              stmt_id);
                    } else if (const TableDecl* tab = m_.find_table(t->table);
                               tab && !tab->has_attribute(e.attr)) {
                        error(e.pos, "table '" + t->table + "' has no attribute '" + e.attr + "'",
                              stmt_id);
                    }
                }
                return;
            }
            default:
                error(e.pos, "expected an integer expression", stmt_id);
                return;
        }
    }

    void check_list_expr(const Expr& e, int stmt_id) {
        switch (e.kind) {
            case Expr::Kind::Var: {
                auto t = use(e.name, e.pos, stmt_id);
                if (t && t->kind != TypeKind::List)
                    error(e.pos, "variable '" + e.name + "' has type " + type_name(*t) +
                                     " but a list is required",
                          stmt_id);
                return;
            }
            case Expr::Kind::Nil: return;
            case Expr::Kind::Prepend:
                check_int_expr(e.args[0], nullptr, stmt_id);
                check_list_expr(e.args[1], stmt_id);
                return;
            case Expr::Kind::Tail: {
                auto t = use(e.name, e.pos, stmt_id);
                if (t && t->kind != TypeKind::List)
                    error(e.pos, "TAIL applies to a list variable, but '" + e.name + "' has type " +
                                     type_name(*t),
                          stmt_id);
                return;
            }
            default:
                error(e.pos, "expected a list expression", stmt_id);
                return;
        }
    }

    /// Infers the type of an assignment RHS while checking it.
    std::optional<VarType> check_expr(const Expr& e, int stmt_id) {
        switch (e.kind) {
            case Expr::Kind::Var: {
                auto t = use(e.name, e.pos, stmt_id);
                if (t && t->kind == TypeKind::Table)
                    error(e.pos, "table variable '" + e.name + "' cannot be assigned", stmt_id);
                return t;
            }
            case Expr::Kind::Nil:
            case Expr::Kind::Prepend:
            case Expr::Kind::Tail:
                check_list_expr(e, stmt_id);
                return VarType{TypeKind::List, ""};
            default:
                check_int_expr(e, nullptr, stmt_id);
                return VarType{TypeKind::Int, ""};
        }
    }

    void check_cond(const Cond& c, int stmt_id) {
        switch (c.kind) {
            case Cond::Kind::True:
            case Cond::Kind::False: return;
            case Cond::Kind::And:
            case Cond::Kind::Or:
                check_cond(c.sub[0], stmt_id);
                check_cond(c.sub[1], stmt_id);
                return;
            case Cond::Kind::Not:
                check_cond(c.sub[0], stmt_id);
                return;
            case Cond::Kind::Cmp:
                check_int_expr(c.operands[0], nullptr, stmt_id);
                check_int_expr(c.operands[1], nullptr, stmt_id);
                return;
            case Cond::Kind::NilTest: {
                auto t = use(c.var, c.pos, stmt_id);
                if (t && t->kind != TypeKind::List)
                    error(c.pos, "emptiness test applies to a list variable, but '" + c.var +
                                     "' has type " + type_name(*t),
                          stmt_id);
                return;
            }
        }
    }

    void check_db_cond(const Cond& c, const TableDecl& table, int stmt_id) {
        switch (c.kind) {
            case Cond::Kind::True:
            case Cond::Kind::False: return;
            case Cond::Kind::And:
            case Cond::Kind::Or:
                check_db_cond(c.sub[0], table, stmt_id);
                check_db_cond(c.sub[1], table, stmt_id);
                return;
            case Cond::Kind::Not:
                check_db_cond(c.sub[0], table, stmt_id);
                return;
            case Cond::Kind::Cmp:
                // The LHS names an attribute of the table being read/modified.
                if (!table.has_attribute(c.operands[0].name))
                    error(c.operands[0].pos, "db-condition compares '" + c.operands[0].name +
                                                 "', which is not an attribute of table '" +
                                                 table.name + "'",
                          stmt_id);
                check_int_expr(c.operands[1], &table, stmt_id);
                return;
            case Cond::Kind::NilTest:
                error(c.pos, "list emptiness test is not allowed in a db-condition", stmt_id);
                return;
        }
    }

    const TableDecl* require_table(const std::string& name, SourcePos pos, int stmt_id) {
        const TableDecl* t = m_.find_table(name);
        if (!t) error(pos, "unknown table '" + name + "'", stmt_id);
        return t;
    }

    void check_db_write(const DbWrite& w, int stmt_id) {
        const TableDecl* t = require_table(w.table, w.pos, stmt_id);
        if (!t) return;
        switch (w.kind) {
            case DbWrite::Kind::Insert:
                if (w.values.size() != t->attributes.size())
                    error(w.pos, "INSERT into '" + t->name + "' supplies " +
                                     std::to_string(w.values.size()) + " values for " +
                                     std::to_string(t->attributes.size()) + " attributes",
                          stmt_id);
                for (const Expr& v : w.values) check_int_expr(v, nullptr, stmt_id);
                return;
            case DbWrite::Kind::Update:
                if (!t->has_attribute(w.set_attr))
                    error(w.pos, "UPDATE sets '" + w.set_attr +
                                     "', which is not an attribute of table '" + t->name + "'",
                          stmt_id);
                check_int_expr(w.set_expr[0], t, stmt_id);
                check_db_cond(w.where, *t, stmt_id);
                return;
            case DbWrite::Kind::Delete:
                check_db_cond(w.where, *t, stmt_id);
                return;
        }
    }

    // ---- statements ----

    void check_block(const std::vector<Stmt>& block) {
        for (const Stmt& s : block) check_stmt(s);
    }

    void check_stmt(const Stmt& s) {
        switch (s.kind) {
            case Stmt::Kind::If:
                check_cond(s.cond, s.stmt_id);
                scopes_.emplace_back();
                check_block(s.then_branch);
                scopes_.pop_back();
                scopes_.emplace_back();
                check_block(s.else_branch);
                scopes_.pop_back();
                return;
            case Stmt::Kind::While:
                check_cond(s.cond, s.stmt_id);
                scopes_.emplace_back();
                check_block(s.body);
                scopes_.pop_back();
                return;
            case Stmt::Kind::Assign: {
                auto t = check_expr(s.expr[0], s.stmt_id);
                if (t) bind(s.var, *t, s.pos, s.stmt_id);
                return;
            }
            case Stmt::Kind::Read:
                bind(s.var, VarType{TypeKind::Int, ""}, s.pos, s.stmt_id);
                return;
            case Stmt::Kind::Load:
                bind(s.var, VarType{TypeKind::List, ""}, s.pos, s.stmt_id);
                return;
            case Stmt::Kind::SelectAssign: {
                const TableDecl* t = require_table(s.select_table, s.pos, s.stmt_id);
                if (!t) return;
                for (const auto& a : s.select_attrs)
                    if (!t->has_attribute(a))
                        error(s.pos, "SELECT projects '" + a +
                                         "', which is not an attribute of table '" + t->name + "'",
                              s.stmt_id);
                check_db_cond(s.select_where, *t, s.stmt_id);
                bind(s.var, VarType{TypeKind::Table, t->name}, s.pos, s.stmt_id);
                return;
            }
            case Stmt::Kind::Next: {
                auto t = use(s.var, s.pos, s.stmt_id);
                if (t && t->kind != TypeKind::Table)
                    error(s.pos, "NEXT applies to a table variable assigned by SELECT, but '" +
                                     s.var + "' has type " + type_name(*t),
                          s.stmt_id);
                return;
            }
            case Stmt::Kind::CatchNext: {
                auto t = use(s.cursor_var, s.pos, s.stmt_id);
                if (t && t->kind != TypeKind::Table)
                    error(s.pos, "NEXT applies to a table variable assigned by SELECT, but '" +
                                     s.cursor_var + "' has type " + type_name(*t),
                          s.stmt_id);
                bind(s.var, VarType{TypeKind::Int, ""}, s.pos, s.stmt_id);
                return;
            }
            case Stmt::Kind::Write:
                check_db_write(s.write, s.stmt_id);
                return;
            case Stmt::Kind::CatchWrite:
                check_db_write(s.write, s.stmt_id);
                bind(s.var, VarType{TypeKind::Int, ""}, s.pos, s.stmt_id);
                return;
            case Stmt::Kind::Commit:
            case Stmt::Kind::Rollback:
                return;
        }
    }
};

inline void index_stmts(const std::vector<Stmt>& block, std::vector<const Stmt*>& by_id) {
    for (const Stmt& s : block) {
        by_id[static_cast<std::size_t>(s.stmt_id)] = &s;
        index_stmts(s.then_branch, by_id);
        index_stmts(s.else_branch, by_id);
        index_stmts(s.body, by_id);
    }
}

}  // namespace detail

/// Statically validates a parsed model: schema well-formedness, FK acyclicity,
/// block scoping, and type consistency. Throws CompileError listing every
/// violation; the result carries non-fatal warnings.
inline CheckedModel check(ModelDecl m) {
    auto holder = std::make_shared<CheckedModel::Holder>();
    holder->model = std::move(m);
    detail::Checker checker(holder->model);
    checker.run(holder->var_types, holder->warnings);

    holder->open_sentinel.kind = Stmt::Kind::Commit;
    holder->open_sentinel.stmt_id = 0;
    holder->close_sentinel.kind = Stmt::Kind::Commit;
    holder->close_sentinel.stmt_id = holder->model.stmt_count - 1;
    holder->by_id.assign(static_cast<std::size_t>(holder->model.stmt_count), nullptr);
    holder->by_id.front() = &holder->open_sentinel;
    holder->by_id.back() = &holder->close_sentinel;
    detail::index_stmts(holder->model.program, holder->by_id);
    return CheckedModel(std::move(holder));
}

/// Full frontend: tokenize, parse, check.
inline CheckedModel check_source(std::string_view source) {
    return check(parse_source(source));
}

}  // namespace sdb
