#pragma once

#include "simpledb/ast.hpp"

#include <sstream>
#include <string>

namespace sdb {

namespace detail {

inline void print_expr(std::ostream& os, const Expr& e) {
    switch (e.kind) {
        case Expr::Kind::Var: os << e.name; break;
        case Expr::Kind::Nat: os << e.nat; break;
        case Expr::Kind::Binary:
            os << '(';
            print_expr(os, e.args[0]);
            os << ' ' << arith_op_char(e.op) << ' ';
            print_expr(os, e.args[1]);
            os << ')';
            break;
        case Expr::Kind::Neg:
            os << "(- ";
            print_expr(os, e.args[0]);
            os << ')';
            break;
        case Expr::Kind::Head: os << e.name << ".HEAD"; break;
        case Expr::Kind::CursorRead: os << e.name << '(' << e.attr << ')'; break;
        case Expr::Kind::Nil: os << "NIL"; break;
        case Expr::Kind::Prepend:
            os << '[';
            print_expr(os, e.args[0]);
            os << ", ";
            print_expr(os, e.args[1]);
            os << ']';
            break;
        case Expr::Kind::Tail: os << e.name << ".TAIL"; break;
    }
}

inline void print_cond(std::ostream& os, const Cond& c) {
    switch (c.kind) {
        case Cond::Kind::True: os << "TRUE"; break;
        case Cond::Kind::False: os << "FALSE"; break;
        case Cond::Kind::And:
        case Cond::Kind::Or:
            os << '(';
            print_cond(os, c.sub[0]);
            os << (c.kind == Cond::Kind::And ? " && " : " || ");
            print_cond(os, c.sub[1]);
            os << ')';
            break;
        case Cond::Kind::Not:
            os << "(!";
            print_cond(os, c.sub[0]);
            os << ')';
            break;
        case Cond::Kind::Cmp:
            os << '(';
            print_expr(os, c.operands[0]);
            os << ' ' << cmp_op_char(c.cmp) << ' ';
            print_expr(os, c.operands[1]);
            os << ')';
            break;
        case Cond::Kind::NilTest: os << '(' << c.var << " = NIL)"; break;
    }
}

inline void print_db_write(std::ostream& os, const DbWrite& w) {
    switch (w.kind) {
        case DbWrite::Kind::Insert:
            os << "INSERT INTO " << w.table << " VALUES (";
            for (std::size_t i = 0; i < w.values.size(); ++i) {
                if (i) os << ',';
                print_expr(os, w.values[i]);
            }
            os << ')';
            break;
        case DbWrite::Kind::Update:
            os << "UPDATE " << w.table << " SET " << w.set_attr << " = ";
            print_expr(os, w.set_expr[0]);
            os << " WHERE ";
            print_cond(os, w.where);
            break;
        case DbWrite::Kind::Delete:
            os << "DELETE FROM " << w.table << " WHERE ";
            print_cond(os, w.where);
            break;
    }
}

inline void print_block(std::ostream& os, const std::vector<Stmt>& stmts, int indent);

inline void print_stmt(std::ostream& os, const Stmt& s, int indent) {
    std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
    os << pad;
    switch (s.kind) {
        case Stmt::Kind::If:
            os << "IF ";
            print_cond(os, s.cond);
            os << " THEN\n";
            print_block(os, s.then_branch, indent + 1);
            os << pad << "ELSE\n";
            print_block(os, s.else_branch, indent + 1);
            os << pad << "ENDIF;\n";
            break;
        case Stmt::Kind::While:
            os << "WHILE ";
            print_cond(os, s.cond);
            os << " DO\n";
            print_block(os, s.body, indent + 1);
            os << pad << "ENDWHILE;\n";
            break;
        case Stmt::Kind::Assign:
            os << s.var << " = ";
            print_expr(os, s.expr[0]);
            os << ";\n";
            break;
        case Stmt::Kind::Read: os << "READ(" << s.var << ");\n"; break;
        case Stmt::Kind::Load: os << "LOAD(" << s.var << ");\n"; break;
        case Stmt::Kind::SelectAssign:
            os << s.var << " = SELECT ";
            for (std::size_t i = 0; i < s.select_attrs.size(); ++i) {
                if (i) os << ',';
                os << s.select_attrs[i];
            }
            os << " FROM " << s.select_table << " WHERE ";
            print_cond(os, s.select_where);
            os << ";\n";
            break;
        case Stmt::Kind::Next: os << "NEXT(" << s.var << ");\n"; break;
        case Stmt::Kind::CatchNext:
            os << s.var << " = CATCH(NEXT(" << s.cursor_var << "));\n";
            break;
        case Stmt::Kind::Write:
            print_db_write(os, s.write);
            os << ";\n";
            break;
        case Stmt::Kind::CatchWrite:
            os << s.var << " = CATCH(";
            print_db_write(os, s.write);
            os << ");\n";
            break;
        case Stmt::Kind::Commit: os << "COMMIT();\n"; break;
        case Stmt::Kind::Rollback: os << "ROLLBACK();\n"; break;
    }
}

inline void print_block(std::ostream& os, const std::vector<Stmt>& stmts, int indent) {
    for (const Stmt& s : stmts) print_stmt(os, s, indent);
}

}  // namespace detail

/// Emits grammar-conformant source for a model; parsing the result yields a
/// structurally equal ModelDecl.
inline std::string pretty_print(const ModelDecl& m) {
    std::ostringstream os;
    os << "MODEL " << m.name << '\n';
    for (const TableDecl& t : m.tables) {
        os << "TABLE " << t.name << " (";
        for (const auto& a : t.attributes) os << a << ',';
        os << "PRIMARY KEY(" << t.primary_key << ')';
        for (const auto& fk : t.foreign_keys)
            os << ",FOREIGN KEY(" << fk.attribute << ") REFERENCES " << fk.references;
        for (const auto& c : t.arith_constraints)
            os << ',' << c.attribute << ' ' << cmp_op_char(c.op) << ' ' << c.bound;
        os << ");\n";
    }
    os << "COMMIT();\n";
    detail::print_block(os, m.program, 0);
    os << "COMMIT();\n";
    os << "ENDMODEL\n";
    return os.str();
}

}  // namespace sdb
