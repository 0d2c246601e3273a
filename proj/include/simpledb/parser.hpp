#pragma once

#include "simpledb/ast.hpp"
#include "simpledb/lexer.hpp"

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace sdb {

namespace detail {

// Internal signal for backtracking; the furthest failure is reported.
struct ParseFail {};

class Parser {
public:
    explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

    ModelDecl parse_model() {
        ModelDecl m;
        expect(Tok::KwModel, "MODEL");
        m.name = expect(Tok::Ident, "model name").text;
        while (at(Tok::KwTable)) m.tables.push_back(parse_table());
        parse_program(m.program);
        expect(Tok::KwEndModel, "ENDMODEL");
        expect(Tok::End, "end of input");
        assign_stmt_ids(m);
        return m;
    }

    Diagnostic furthest_error() const { return furthest_; }

private:
    std::vector<Token> toks_;
    std::size_t p_ = 0;
    Diagnostic furthest_{SourcePos{0, 0}, "unexpected input"};

    const Token& peek(std::size_t ahead = 0) const {
        std::size_t i = p_ + ahead;
        return i < toks_.size() ? toks_[i] : toks_.back();
    }
    bool at(Tok k, std::size_t ahead = 0) const { return peek(ahead).kind == k; }

    [[noreturn]] void fail(const std::string& expected) {
        const Token& t = peek();
        if (t.pos.line > furthest_.pos.line ||
            (t.pos.line == furthest_.pos.line && t.pos.col >= furthest_.pos.col)) {
            furthest_ = Diagnostic{t.pos, "expected " + expected + ", found " +
                                              std::string(token_name(t.kind))};
        }
        throw ParseFail{};
    }

    Token expect(Tok k, const std::string& what) {
        if (!at(k)) fail(what);
        Token t = peek();
        ++p_;
        return t;
    }
    bool accept(Tok k) {
        if (!at(k)) return false;
        ++p_;
        return true;
    }

    // ---- schema ----

    TableDecl parse_table() {
        TableDecl t;
        t.pos = peek().pos;
        expect(Tok::KwTable, "TABLE");
        t.name = expect(Tok::Ident, "table name").text;
        expect(Tok::LParen, "'('");
        // <attrib>+ : each attribute name is followed by a comma.
        do {
            t.attributes.push_back(expect(Tok::Ident, "attribute name").text);
            expect(Tok::Comma, "','");
        } while (at(Tok::Ident));
        expect(Tok::KwPrimary, "PRIMARY");
        expect(Tok::KwKey, "KEY");
        expect(Tok::LParen, "'('");
        t.primary_key = expect(Tok::Ident, "primary key attribute").text;
        expect(Tok::RParen, "')'");
        bool seen_constraint = false;
        while (accept(Tok::Comma)) {
            if (at(Tok::KwForeign)) {
                if (seen_constraint) fail("arithmetic constraint (foreign keys precede constraints)");
                ++p_;
                expect(Tok::KwKey, "KEY");
                expect(Tok::LParen, "'('");
                ForeignKey fk;
                fk.attribute = expect(Tok::Ident, "foreign key attribute").text;
                expect(Tok::RParen, "')'");
                expect(Tok::KwReferences, "REFERENCES");
                fk.references = expect(Tok::Ident, "referenced table").text;
                t.foreign_keys.push_back(std::move(fk));
            } else {
                seen_constraint = true;
                ArithConstraint c;
                c.attribute = expect(Tok::Ident, "constrained attribute").text;
                c.op = parse_cmp_op();
                c.bound = expect(Tok::Natural, "natural number").value;
                t.arith_constraints.push_back(std::move(c));
            }
        }
        expect(Tok::RParen, "')'");
        expect(Tok::Semicolon, "';'");
        return t;
    }

    CmpOp parse_cmp_op() {
        if (accept(Tok::Less)) return CmpOp::Less;
        if (accept(Tok::Equal)) return CmpOp::Equal;
        if (accept(Tok::Greater)) return CmpOp::Greater;
        fail("'<', '=' or '>'");
    }

    // ---- program ----

    void parse_commit_sentinel() {
        expect(Tok::KwCommit, "COMMIT");
        expect(Tok::LParen, "'('");
        expect(Tok::RParen, "')'");
        expect(Tok::Semicolon, "';'");
    }

    bool at_closing_commit() const {
        return at(Tok::KwCommit) && at(Tok::LParen, 1) && at(Tok::RParen, 2) &&
               at(Tok::Semicolon, 3) && at(Tok::KwEndModel, 4);
    }

    void parse_program(std::vector<Stmt>& out) {
        parse_commit_sentinel();
        while (!at_closing_commit()) {
            if (at(Tok::KwEndModel) || at(Tok::End)) fail("closing COMMIT();");
            out.push_back(parse_stmt());
        }
        parse_commit_sentinel();
    }

    std::vector<Stmt> parse_block(Tok stop1, Tok stop2 = Tok::End) {
        std::vector<Stmt> out;
        while (!at(stop1) && !at(stop2)) {
            if (at(Tok::KwEndModel) || at(Tok::End)) fail("end of block");
            out.push_back(parse_stmt());
        }
        return out;
    }

    Stmt parse_stmt() {
        Stmt s;
        s.pos = peek().pos;
        switch (peek().kind) {
            case Tok::KwIf: {
                ++p_;
                s.kind = Stmt::Kind::If;
                s.cond = parse_cond();
                expect(Tok::KwThen, "THEN");
                s.then_branch = parse_block(Tok::KwElse);
                expect(Tok::KwElse, "ELSE");
                s.else_branch = parse_block(Tok::KwEndIf);
                expect(Tok::KwEndIf, "ENDIF");
                expect(Tok::Semicolon, "';'");
                return s;
            }
            case Tok::KwWhile: {
                ++p_;
                s.kind = Stmt::Kind::While;
                s.cond = parse_cond();
                expect(Tok::KwDo, "DO");
                s.body = parse_block(Tok::KwEndWhile);
                expect(Tok::KwEndWhile, "ENDWHILE");
                expect(Tok::Semicolon, "';'");
                return s;
            }
            case Tok::KwRead:
            case Tok::KwLoad: {
                s.kind = at(Tok::KwRead) ? Stmt::Kind::Read : Stmt::Kind::Load;
                ++p_;
                expect(Tok::LParen, "'('");
                s.var = expect(Tok::Ident, "variable").text;
                expect(Tok::RParen, "')'");
                expect(Tok::Semicolon, "';'");
                return s;
            }
            case Tok::KwNext: {
                ++p_;
                s.kind = Stmt::Kind::Next;
                expect(Tok::LParen, "'('");
                s.var = expect(Tok::Ident, "table variable").text;
                expect(Tok::RParen, "')'");
                expect(Tok::Semicolon, "';'");
                return s;
            }
            case Tok::KwCommit:
            case Tok::KwRollback: {
                s.kind = at(Tok::KwCommit) ? Stmt::Kind::Commit : Stmt::Kind::Rollback;
                ++p_;
                expect(Tok::LParen, "'('");
                expect(Tok::RParen, "')'");
                expect(Tok::Semicolon, "';'");
                return s;
            }
            case Tok::KwInsert:
            case Tok::KwUpdate:
            case Tok::KwDelete: {
                s.kind = Stmt::Kind::Write;
                s.write = parse_db_write();
                expect(Tok::Semicolon, "';'");
                return s;
            }
            case Tok::Ident: {
                s.var = peek().text;
                ++p_;
                expect(Tok::Equal, "'='");
                if (at(Tok::KwCatch)) {
                    ++p_;
                    expect(Tok::LParen, "'('");
                    if (at(Tok::KwNext)) {
                        ++p_;
                        s.kind = Stmt::Kind::CatchNext;
                        expect(Tok::LParen, "'('");
                        s.cursor_var = expect(Tok::Ident, "table variable").text;
                        expect(Tok::RParen, "')'");
                    } else {
                        s.kind = Stmt::Kind::CatchWrite;
                        s.write = parse_db_write();
                    }
                    expect(Tok::RParen, "')'");
                    expect(Tok::Semicolon, "';'");
                    return s;
                }
                if (at(Tok::KwSelect)) {
                    ++p_;
                    s.kind = Stmt::Kind::SelectAssign;
                    s.select_attrs.push_back(expect(Tok::Ident, "attribute").text);
                    while (accept(Tok::Comma))
                        s.select_attrs.push_back(expect(Tok::Ident, "attribute").text);
                    expect(Tok::KwFrom, "FROM");
                    s.select_table = expect(Tok::Ident, "table name").text;
                    expect(Tok::KwWhere, "WHERE");
                    s.select_where = parse_db_cond();
                    expect(Tok::Semicolon, "';'");
                    return s;
                }
                s.kind = Stmt::Kind::Assign;
                s.expr.push_back(parse_expr());
                expect(Tok::Semicolon, "';'");
                return s;
            }
            default:
                fail("statement");
        }
    }

    DbWrite parse_db_write() {
        DbWrite w;
        w.pos = peek().pos;
        if (accept(Tok::KwInsert)) {
            w.kind = DbWrite::Kind::Insert;
            expect(Tok::KwInto, "INTO");
            w.table = expect(Tok::Ident, "table name").text;
            expect(Tok::KwValues, "VALUES");
            expect(Tok::LParen, "'('");
            w.values.push_back(parse_int_expr());
            while (accept(Tok::Comma)) w.values.push_back(parse_int_expr());
            expect(Tok::RParen, "')'");
            return w;
        }
        if (accept(Tok::KwUpdate)) {
            w.kind = DbWrite::Kind::Update;
            w.table = expect(Tok::Ident, "table name").text;
            expect(Tok::KwSet, "SET");
            w.set_attr = expect(Tok::Ident, "attribute").text;
            expect(Tok::Equal, "'='");
            w.set_expr.push_back(parse_int_expr());
            expect(Tok::KwWhere, "WHERE");
            w.where = parse_db_cond();
            return w;
        }
        expect(Tok::KwDelete, "INSERT, UPDATE or DELETE");
        w.kind = DbWrite::Kind::Delete;
        expect(Tok::KwFrom, "FROM");
        w.table = expect(Tok::Ident, "table name").text;
        expect(Tok::KwWhere, "WHERE");
        w.where = parse_db_cond();
        return w;
    }

    // ---- expressions and conditions ----

    Expr parse_expr() {
        std::size_t save = p_;
        try {
            Expr e = parse_int_expr();
            if (!at(Tok::Semicolon)) fail("';'");
            return e;
        } catch (ParseFail&) {
            p_ = save;
        }
        Expr e = parse_list_expr();
        if (!at(Tok::Semicolon)) fail("';'");
        return e;
    }

    Expr parse_int_expr() {
        Expr e;
        e.pos = peek().pos;
        if (at(Tok::Natural)) {
            e.kind = Expr::Kind::Nat;
            e.nat = peek().value;
            ++p_;
            return e;
        }
        if (at(Tok::Ident)) {
            if (at(Tok::Dot, 1) && at(Tok::KwHead, 2)) {
                e.kind = Expr::Kind::Head;
                e.name = peek().text;
                p_ += 3;
                return e;
            }
            if (at(Tok::LParen, 1)) {
                e.kind = Expr::Kind::CursorRead;
                e.name = peek().text;
                p_ += 2;
                e.attr = expect(Tok::Ident, "attribute").text;
                expect(Tok::RParen, "')'");
                return e;
            }
            e.kind = Expr::Kind::Var;
            e.name = peek().text;
            ++p_;
            return e;
        }
        if (at(Tok::LParen)) {
            ++p_;
            if (accept(Tok::Minus)) {
                e.kind = Expr::Kind::Neg;
                e.args.push_back(parse_int_expr());
                expect(Tok::RParen, "')'");
                return e;
            }
            e.kind = Expr::Kind::Binary;
            e.args.push_back(parse_int_expr());
            if (accept(Tok::Plus)) e.op = ArithOp::Add;
            else if (accept(Tok::Minus)) e.op = ArithOp::Sub;
            else if (accept(Tok::Star)) e.op = ArithOp::Mul;
            else if (accept(Tok::Slash)) e.op = ArithOp::Div;
            else fail("'+', '-', '*' or '/'");
            e.args.push_back(parse_int_expr());
            expect(Tok::RParen, "')'");
            return e;
        }
        fail("integer expression");
    }

    Expr parse_list_expr() {
        Expr e;
        e.pos = peek().pos;
        if (accept(Tok::KwNil)) {
            e.kind = Expr::Kind::Nil;
            return e;
        }
        if (at(Tok::LBracket)) {
            ++p_;
            e.kind = Expr::Kind::Prepend;
            e.args.push_back(parse_int_expr());
            expect(Tok::Comma, "','");
            e.args.push_back(parse_list_expr());
            expect(Tok::RBracket, "']'");
            return e;
        }
        if (at(Tok::Ident)) {
            if (at(Tok::Dot, 1) && at(Tok::KwTail, 2)) {
                e.kind = Expr::Kind::Tail;
                e.name = peek().text;
                p_ += 3;
                return e;
            }
            e.kind = Expr::Kind::Var;
            e.name = peek().text;
            ++p_;
            return e;
        }
        fail("list expression");
    }

    Cond parse_cond() { return parse_cond_impl(false); }
    Cond parse_db_cond() { return parse_cond_impl(true); }

    Cond parse_cond_impl(bool db) {
        Cond c;
        c.pos = peek().pos;
        if (accept(Tok::KwTrue)) {
            c.kind = Cond::Kind::True;
            return c;
        }
        if (accept(Tok::KwFalse)) {
            c.kind = Cond::Kind::False;
            return c;
        }
        expect(Tok::LParen, db ? "db-condition" : "condition");
        if (accept(Tok::Bang)) {
            c.kind = Cond::Kind::Not;
            c.sub.push_back(parse_cond_impl(db));
            expect(Tok::RParen, "')'");
            return c;
        }
        std::size_t save = p_;
        try {
            Cond lhs = parse_cond_impl(db);
            bool is_and = at(Tok::AndAnd);
            if (!is_and && !at(Tok::OrOr)) fail("'&&' or '||'");
            ++p_;
            Cond rhs = parse_cond_impl(db);
            expect(Tok::RParen, "')'");
            c.kind = is_and ? Cond::Kind::And : Cond::Kind::Or;
            c.sub.push_back(std::move(lhs));
            c.sub.push_back(std::move(rhs));
            return c;
        } catch (ParseFail&) {
            p_ = save;
        }
        if (db) {
            // "(" <id> {<|=|>} <int-expr> ")" - the LHS names an attribute.
            c.kind = Cond::Kind::Cmp;
            Expr lhs;
            lhs.pos = peek().pos;
            lhs.kind = Expr::Kind::Var;
            lhs.name = expect(Tok::Ident, "attribute").text;
            c.cmp = parse_cmp_op();
            Expr rhs = parse_int_expr();
            expect(Tok::RParen, "')'");
            c.operands.push_back(std::move(lhs));
            c.operands.push_back(std::move(rhs));
            return c;
        }
        try {
            Expr lhs = parse_int_expr();
            c.cmp = parse_cmp_op();
            Expr rhs = parse_int_expr();
            expect(Tok::RParen, "')'");
            c.kind = Cond::Kind::Cmp;
            c.operands.push_back(std::move(lhs));
            c.operands.push_back(std::move(rhs));
            return c;
        } catch (ParseFail&) {
            p_ = save;
        }
        c.kind = Cond::Kind::NilTest;
        c.var = expect(Tok::Ident, "variable").text;
        expect(Tok::Equal, "'='");
        expect(Tok::KwNil, "NIL");
        expect(Tok::RParen, "')'");
        return c;
    }

};

}  // namespace detail

/// Parses a token sequence into a ModelDecl. Statement ids are assigned in
/// preorder: 0 for the opening COMMIT sentinel, interior statements next,
/// and the highest id for the closing sentinel.
inline ModelDecl parse(std::vector<Token> tokens) {
    detail::Parser parser(std::move(tokens));
    try {
        return parser.parse_model();
    } catch (detail::ParseFail&) {
        throw CompileError(parser.furthest_error());
    }
}

/// Convenience wrapper: tokenize + parse.
inline ModelDecl parse_source(std::string_view source) { return parse(tokenize(source)); }

}  // namespace sdb
