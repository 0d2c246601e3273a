#pragma once

#include "simpledb/diagnostics.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace sdb {

enum class CmpOp { Less, Equal, Greater };
enum class ArithOp { Add, Sub, Mul, Div };

inline char cmp_op_char(CmpOp op) {
    switch (op) {
        case CmpOp::Less: return '<';
        case CmpOp::Equal: return '=';
        case CmpOp::Greater: return '>';
    }
    return '?';
}

inline char arith_op_char(ArithOp op) {
    switch (op) {
        case ArithOp::Add: return '+';
        case ArithOp::Sub: return '-';
        case ArithOp::Mul: return '*';
        case ArithOp::Div: return '/';
    }
    return '?';
}

struct ForeignKey {
    std::string attribute;
    std::string references;  // the referenced table; values must match its primary key
    bool operator==(const ForeignKey& o) const {
        return attribute == o.attribute && references == o.references;
    }
};

struct ArithConstraint {
    std::string attribute;
    CmpOp op = CmpOp::Equal;
    std::uint64_t bound = 0;
    bool operator==(const ArithConstraint& o) const {
        return attribute == o.attribute && op == o.op && bound == o.bound;
    }
};

struct TableDecl {
    std::string name;
    std::vector<std::string> attributes;  // declaration order; at least one
    std::string primary_key;
    std::vector<ForeignKey> foreign_keys;
    std::vector<ArithConstraint> arith_constraints;
    SourcePos pos;

    int attr_index(std::string_view a) const {
        for (std::size_t i = 0; i < attributes.size(); ++i)
            if (attributes[i] == a) return static_cast<int>(i);
        return -1;
    }
    int pk_index() const { return attr_index(primary_key); }
    bool has_attribute(std::string_view a) const { return attr_index(a) >= 0; }

    bool operator==(const TableDecl& o) const {
        return name == o.name && attributes == o.attributes && primary_key == o.primary_key &&
               foreign_keys == o.foreign_keys && arith_constraints == o.arith_constraints;
    }
};

/// Integer- or list-valued expression. A bare identifier is stored as Var and
/// resolved to its int/list meaning by the checker.
struct Expr {
    enum class Kind {
        Var,         // name
        Nat,         // nat
        Binary,      // op, args[0], args[1]
        Neg,         // args[0]
        Head,        // name.HEAD (list variable)
        CursorRead,  // name(attr) - attribute under the cursor of a table variable
        Nil,
        Prepend,     // [args[0], args[1]]
        Tail,        // name.TAIL
    };
    Kind kind = Kind::Nil;
    std::string name;
    std::string attr;
    std::uint64_t nat = 0;
    ArithOp op = ArithOp::Add;
    std::vector<Expr> args;
    SourcePos pos;

    bool operator==(const Expr& o) const {
        return kind == o.kind && name == o.name && attr == o.attr && nat == o.nat &&
               op == o.op && args == o.args;
    }
};

/// Program condition or db-condition. In db-conditions the comparison LHS is
/// restricted to a bare identifier naming an attribute; NilTest never appears.
struct Cond {
    enum class Kind { True, False, And, Or, Not, Cmp, NilTest };
    Kind kind = Kind::True;
    CmpOp cmp = CmpOp::Equal;
    std::vector<Cond> sub;       // And/Or: 2 children, Not: 1
    std::vector<Expr> operands;  // Cmp: 2 int-exprs (db-cond LHS is Expr::Var)
    std::string var;             // NilTest target
    SourcePos pos;

    bool operator==(const Cond& o) const {
        return kind == o.kind && cmp == o.cmp && sub == o.sub && operands == o.operands &&
               var == o.var;
    }
};

struct DbWrite {
    enum class Kind { Insert, Update, Delete };
    Kind kind = Kind::Insert;
    std::string table;
    std::vector<Expr> values;  // Insert: one value per attribute, declaration order
    std::string set_attr;      // Update
    std::vector<Expr> set_expr;  // Update: single element when present
    Cond where;                // Update/Delete
    SourcePos pos;

    bool operator==(const DbWrite& o) const {
        return kind == o.kind && table == o.table && values == o.values &&
               set_attr == o.set_attr && set_expr == o.set_expr && where == o.where;
    }
};

struct Stmt {
    enum class Kind {
        If, While, Assign, Read, Load, SelectAssign, Next, CatchNext,
        Write, CatchWrite, Commit, Rollback,
    };
    Kind kind = Kind::Commit;
    int stmt_id = -1;  // dense preorder index; 0 is the opening commit sentinel
    std::string var;         // Assign/Read/Load/SelectAssign target; Next cursor; Catch* flag
    std::string cursor_var;  // CatchNext: the NEXT-ed variable
    std::vector<Expr> expr;  // Assign RHS: single element
    Cond cond;               // If/While condition; SelectAssign/write WHERE lives elsewhere
    std::vector<Stmt> then_branch;
    std::vector<Stmt> else_branch;
    std::vector<Stmt> body;  // While
    std::vector<std::string> select_attrs;
    std::string select_table;
    Cond select_where;
    DbWrite write;  // Write / CatchWrite
    SourcePos pos;

    bool operator==(const Stmt& o) const {
        return kind == o.kind && var == o.var && cursor_var == o.cursor_var && expr == o.expr &&
               cond == o.cond && then_branch == o.then_branch && else_branch == o.else_branch &&
               body == o.body && select_attrs == o.select_attrs &&
               select_table == o.select_table && select_where == o.select_where &&
               write == o.write;
    }
};

/// One parsed SimpleDB model. The program stores only the statements strictly
/// between the two mandatory COMMIT sentinels; the sentinels themselves carry
/// stmt_id 0 and stmt_count-1.
struct ModelDecl {
    std::string name;
    std::vector<TableDecl> tables;
    std::vector<Stmt> program;
    int stmt_count = 0;  // total statement ids, both sentinels included

    const TableDecl* find_table(std::string_view t) const {
        for (const auto& tab : tables)
            if (tab.name == t) return &tab;
        return nullptr;
    }

    bool operator==(const ModelDecl& o) const {
        return name == o.name && tables == o.tables && program == o.program;
    }
};

namespace detail {
inline void assign_stmt_ids_block(std::vector<Stmt>& block, int& next) {
    for (Stmt& s : block) {
        s.stmt_id = next++;
        assign_stmt_ids_block(s.then_branch, next);
        assign_stmt_ids_block(s.else_branch, next);
        assign_stmt_ids_block(s.body, next);
    }
}
}  // namespace detail

/// Assigns dense statement ids in preorder: 0 for the opening COMMIT
/// sentinel, interior statements next, the closing sentinel last.
inline void assign_stmt_ids(ModelDecl& m) {
    int next = 1;
    detail::assign_stmt_ids_block(m.program, next);
    m.stmt_count = next + 1;
}

/// True when some other table declares a foreign key referencing `table`.
inline bool table_is_referenced(const ModelDecl& m, std::string_view table) {
    for (const auto& t : m.tables)
        for (const auto& fk : t.foreign_keys)
            if (fk.references == table) return true;
    return false;
}

}  // namespace sdb
