#include <catch2/catch_amalgamated.hpp>

#include "simpledb/interpreter.hpp"

#include "support/fig1.hpp"

using namespace sdb;

namespace {

TestInput fig1_published_input() {
    TestInput in;
    in.tables["author"] = {};
    in.tables["play"] = {};
    in.loads = {{7}};
    in.reads = {7};
    return in;
}

}  // namespace

TEST_CASE("plays model runs the worked path on the published input") {
    auto model = tests::fig1_model();
    auto res = run(model, fig1_published_input());

    CHECK_FALSE(res.aborted);
    CHECK(path_of_trace(res.trace) == tests::fig1_worked_path());
    // Hand execution: the loop runs once, SELECT over the empty author table
    // makes NEXT throw, so (7,1) is inserted into author and the play row
    // gets title = HEAD [7] = 7 and theAuthor = 7.
    CHECK(res.db.at("author") == TableRows{{7, 1}});
    CHECK(res.db.at("play") == TableRows{{7, 7}});
}

TEST_CASE("plays model with an empty load never enters the loop") {
    auto model = tests::fig1_model();
    TestInput in;
    in.loads = {{}};
    auto res = run(model, in);
    CHECK_FALSE(res.aborted);
    REQUIRE(res.trace.steps.size() == 1);
    CHECK(res.trace.steps[0] == PathStep{2, Decision::LoopExit, std::nullopt});
    CHECK(res.db.at("author").empty());
    CHECK(res.db.at("play").empty());
}

TEST_CASE("uncaught insert violation aborts and keeps the committed state") {
    auto model = check_source(
        "MODEL m TABLE t (a,PRIMARY KEY(a)); COMMIT(); "
        "INSERT INTO t VALUES (1); "
        "INSERT INTO t VALUES (1); "
        "COMMIT(); ENDMODEL");
    auto res = run(model, TestInput{});
    CHECK(res.aborted);
    CHECK(res.abort_stmt == 2);
    CHECK(res.abort_violation == Violation{Violation::Kind::Pk, -1});
    REQUIRE(res.trace.steps.size() == 2);
    CHECK(res.trace.steps[0].d == Decision::Ok);
    CHECK(res.trace.steps[1].d == Decision::Exn);
    // nothing was committed after the opening commit
    CHECK(res.db.at("t").empty());
}

TEST_CASE("exec_select sorts by primary key and applies the condition") {
    auto model = check_source(
        "MODEL m TABLE author (name,numberOfPlays,PRIMARY KEY(name)); "
        "COMMIT(); COMMIT(); ENDMODEL");
    DbState db;
    db.working["author"] = {{1, 2}, {3, 1}};
    db.committed = db.working;

    Cond where_true;
    where_true.kind = Cond::Kind::True;
    auto rows = exec_select(db, model, "author", where_true, {}, 4);
    CHECK(rows == TableRows{{1, 2}, {3, 1}});

    Cond where_false;
    where_false.kind = Cond::Kind::False;
    CHECK(exec_select(db, model, "author", where_false, {}, 4).empty());

    // WHERE (numberOfPlays > 1)
    Cond cmp;
    cmp.kind = Cond::Kind::Cmp;
    cmp.cmp = CmpOp::Greater;
    Expr lhs;
    lhs.kind = Expr::Kind::Var;
    lhs.name = "numberOfPlays";
    Expr rhs;
    rhs.kind = Expr::Kind::Nat;
    rhs.nat = 1;
    cmp.operands = {lhs, rhs};
    CHECK(exec_select(db, model, "author", cmp, {}, 4) == TableRows{{1, 2}});
}

TEST_CASE("apply_db_write checks constraints in canonical order") {
    auto model = tests::fig1_model();
    DbState db;
    db.working["author"] = {};
    db.working["play"] = {};
    db.committed = db.working;

    DbWrite ins;
    ins.kind = DbWrite::Kind::Insert;
    ins.table = "author";
    Expr seven;
    seven.kind = Expr::Kind::Nat;
    seven.nat = 7;
    Expr one;
    one.kind = Expr::Kind::Nat;
    one.nat = 1;
    ins.values = {seven, one};

    auto ok = apply_db_write(db, model, ins, {}, 4);
    REQUIRE(std::holds_alternative<DbState>(ok));
    CHECK(std::get<DbState>(ok).working.at("author") == TableRows{{7, 1}});

    Expr zero;
    zero.kind = Expr::Kind::Nat;
    zero.nat = 0;
    ins.values = {seven, zero};  // numberOfPlays > 0 violated
    auto arith = apply_db_write(db, model, ins, {}, 4);
    REQUIRE(std::holds_alternative<Violation>(arith));
    CHECK(std::get<Violation>(arith) == Violation{Violation::Kind::Arith, 0});

    // duplicate PK wins over the arithmetic violation: canonical order
    DbState db2 = db;
    db2.working["author"] = {{7, 1}};
    auto pk_first = apply_db_write(db2, model, ins, {}, 4);
    REQUIRE(std::holds_alternative<Violation>(pk_first));
    CHECK(std::get<Violation>(pk_first) == Violation{Violation::Kind::Pk, -1});

    // deleting a referenced author row
    DbState db3 = db;
    db3.working["author"] = {{7, 1}};
    db3.working["play"] = {{2, 7}};
    DbWrite del;
    del.kind = DbWrite::Kind::Delete;
    del.table = "author";
    del.where.kind = Cond::Kind::True;
    auto refrow = apply_db_write(db3, model, del, {}, 4);
    REQUIRE(std::holds_alternative<Violation>(refrow));
    CHECK(std::get<Violation>(refrow) == Violation{Violation::Kind::RefRow, -1});

    // the same delete with no referencing row removes the author
    db3.working["play"] = {};
    auto del_ok = apply_db_write(db3, model, del, {}, 4);
    REQUIRE(std::holds_alternative<DbState>(del_ok));
    CHECK(std::get<DbState>(del_ok).working.at("author").empty());
}

TEST_CASE("update semantics: row context, zero-row updates, pk rules") {
    auto model = check_source(
        "MODEL m "
        "TABLE a (x,PRIMARY KEY(x)); "
        "TABLE b (y,z,PRIMARY KEY(y),FOREIGN KEY(z) REFERENCES a,z > 0); "
        "COMMIT(); COMMIT(); ENDMODEL");
    DbState db;
    db.working["a"] = {{1}, {2}};
    db.working["b"] = {{1, 1}, {4, 2}};
    db.committed = db.working;

    // UPDATE b SET z = (z + 1) WHERE (y = 1): row-dependent RHS
    DbWrite upd;
    upd.kind = DbWrite::Kind::Update;
    upd.table = "b";
    upd.set_attr = "z";
    Expr zplus;
    zplus.kind = Expr::Kind::Binary;
    zplus.op = ArithOp::Add;
    Expr zvar;
    zvar.kind = Expr::Kind::Var;
    zvar.name = "z";
    Expr lit1;
    lit1.kind = Expr::Kind::Nat;
    lit1.nat = 1;
    zplus.args = {zvar, lit1};
    upd.set_expr = {zplus};
    upd.where.kind = Cond::Kind::Cmp;
    upd.where.cmp = CmpOp::Equal;
    Expr yvar;
    yvar.kind = Expr::Kind::Var;
    yvar.name = "y";
    upd.where.operands = {yvar, lit1};

    auto ok = apply_db_write(db, model, upd, {}, 4);
    REQUIRE(std::holds_alternative<DbState>(ok));
    CHECK(std::get<DbState>(ok).working.at("b") == TableRows{{1, 2}, {4, 2}});

    // UPDATE b SET z = 3 WHERE FALSE: never violates, even though 3 has no
    // referent in table a
    DbWrite upd_none = upd;
    Expr lit3;
    lit3.kind = Expr::Kind::Nat;
    lit3.nat = 3;
    upd_none.set_expr = {lit3};
    upd_none.where = Cond{};
    upd_none.where.kind = Cond::Kind::False;
    auto none = apply_db_write(db, model, upd_none, {}, 4);
    REQUIRE(std::holds_alternative<DbState>(none));
    CHECK(std::get<DbState>(none).working.at("b") == db.working.at("b"));

    // UPDATE b SET z = 3 WHERE TRUE: FK violated
    DbWrite upd_fk = upd_none;
    upd_fk.where.kind = Cond::Kind::True;
    auto fk = apply_db_write(db, model, upd_fk, {}, 4);
    REQUIRE(std::holds_alternative<Violation>(fk));
    CHECK(std::get<Violation>(fk) == Violation{Violation::Kind::Fk, 0});

    // UPDATE a SET x = 5 WHERE (x = 2): row (2) is referenced by (4,2)
    DbWrite upd_pk;
    upd_pk.kind = DbWrite::Kind::Update;
    upd_pk.table = "a";
    upd_pk.set_attr = "x";
    Expr lit5;
    lit5.kind = Expr::Kind::Nat;
    lit5.nat = 5;
    upd_pk.set_expr = {lit5};
    upd_pk.where.kind = Cond::Kind::Cmp;
    upd_pk.where.cmp = CmpOp::Equal;
    Expr xvar;
    xvar.kind = Expr::Kind::Var;
    xvar.name = "x";
    Expr lit2;
    lit2.kind = Expr::Kind::Nat;
    lit2.nat = 2;
    upd_pk.where.operands = {xvar, lit2};
    auto refrow = apply_db_write(db, model, upd_pk, {}, 4);
    REQUIRE(std::holds_alternative<Violation>(refrow));
    CHECK(std::get<Violation>(refrow) == Violation{Violation::Kind::RefRow, -1});

    // updating the PK to its current value is not a referenced-row violation
    DbWrite upd_same = upd_pk;
    upd_same.set_expr = {lit2};
    auto same = apply_db_write(db, model, upd_same, {}, 4);
    CHECK(std::holds_alternative<DbState>(same));

    // UPDATE a SET x = 1 WHERE (x = 2): collides with the existing key 1
    DbWrite upd_dup = upd_pk;
    upd_dup.set_expr = {lit1};
    auto dup = apply_db_write(db, model, upd_dup, {}, 4);
    REQUIRE(std::holds_alternative<Violation>(dup));
    CHECK(std::get<Violation>(dup) == Violation{Violation::Kind::Pk, -1});
}

TEST_CASE("violating writes leave the database bitwise unchanged") {
    auto model = tests::fig1_model();
    DbState db;
    db.working["author"] = {{3, 2}};
    db.working["play"] = {{1, 3}};
    db.committed = db.working;
    DbState before = db;

    DbWrite del;
    del.kind = DbWrite::Kind::Delete;
    del.table = "author";
    del.where.kind = Cond::Kind::True;
    auto res = apply_db_write(db, model, del, {}, 4);
    REQUIRE(std::holds_alternative<Violation>(res));
    CHECK(db == before);
}

TEST_CASE("rollback restores the last committed state") {
    auto model = check_source(
        "MODEL m TABLE t (a,PRIMARY KEY(a)); COMMIT(); "
        "INSERT INTO t VALUES (1); "
        "COMMIT(); "
        "INSERT INTO t VALUES (2); "
        "ROLLBACK(); "
        "COMMIT(); ENDMODEL");
    auto res = run(model, TestInput{});
    CHECK_FALSE(res.aborted);
    CHECK(res.db.at("t") == TableRows{{1}});
}

TEST_CASE("abort discards uncommitted changes") {
    auto model = check_source(
        "MODEL m TABLE t (a,PRIMARY KEY(a)); COMMIT(); "
        "INSERT INTO t VALUES (1); "
        "COMMIT(); "
        "INSERT INTO t VALUES (2); "
        "INSERT INTO t VALUES (2); "
        "COMMIT(); ENDMODEL");
    auto res = run(model, TestInput{});
    CHECK(res.aborted);
    CHECK(res.db.at("t") == TableRows{{1}});  // the (2) insert was never committed
}

TEST_CASE("cursor semantics") {
    // Two rows: NEXT succeeds twice, the third call throws; reads follow the
    // ascending-PK order, and the throwing NEXT leaves the cursor on the last
    // row, so z reads 5.
    auto model = check_source(
        "MODEL m TABLE t (a,PRIMARY KEY(a)); COMMIT(); "
        "s = SELECT a FROM t WHERE TRUE; "
        "e1 = CATCH(NEXT(s)); x = s(a); "
        "e2 = CATCH(NEXT(s)); y = s(a); "
        "e3 = CATCH(NEXT(s)); z = s(a); "
        "IF ((x = 2) && ((y = 5) && (z = 5))) THEN q = 1; ELSE q = 0; ENDIF; "
        "COMMIT(); ENDMODEL");
    TestInput in;
    in.tables["t"] = {{5}, {2}};
    auto res = run(model, in, 4);
    CHECK_FALSE(res.aborted);
    REQUIRE(res.trace.steps.size() == 4);
    CHECK(res.trace.steps[0].d == Decision::Ok);
    CHECK(res.trace.steps[1].d == Decision::Ok);
    CHECK(res.trace.steps[2].d == Decision::Exn);
    CHECK(res.trace.steps[3].d == Decision::BranchTrue);
}

TEST_CASE("cursor read before any next is a runtime error") {
    auto model = check_source(
        "MODEL m TABLE t (a,PRIMARY KEY(a)); COMMIT(); "
        "s = SELECT a FROM t WHERE TRUE; "
        "x = s(a); "
        "COMMIT(); ENDMODEL");
    CHECK_THROWS_AS(run(model, TestInput{}), RunError);
}

TEST_CASE("head and tail of empty lists are runtime errors") {
    auto model = check_source(
        "MODEL m COMMIT(); x = NIL; y = x.HEAD; COMMIT(); ENDMODEL");
    CHECK_THROWS_AS(run(model, TestInput{}), RunError);

    auto model2 = check_source(
        "MODEL m COMMIT(); x = NIL; y = x.TAIL; COMMIT(); ENDMODEL");
    CHECK_THROWS_AS(run(model2, TestInput{}), RunError);
}

TEST_CASE("input underflow and invalid inputs are rejected") {
    auto model = check_source("MODEL m COMMIT(); READ(x); COMMIT(); ENDMODEL");
    CHECK_THROWS_AS(run(model, TestInput{}), RunError);

    auto m2 = tests::fig1_model();
    TestInput bad;
    bad.tables["author"] = {{1, 0}};  // numberOfPlays > 0 violated
    CHECK_THROWS_AS(run(m2, bad), RunError);

    TestInput dup;
    dup.tables["author"] = {{1, 1}, {1, 2}};
    CHECK_THROWS_AS(run(m2, dup), RunError);

    TestInput fk;
    fk.tables["play"] = {{1, 3}};  // no author 3
    CHECK_THROWS_AS(run(m2, fk), RunError);

    TestInput range;
    range.reads = {99};
    CHECK_THROWS_AS(run(m2, range), RunError);
}

TEST_CASE("arithmetic wraps at the configured bitwidth and x/0 = 0") {
    auto model = check_source(
        "MODEL m COMMIT(); "
        "a = (7 + 1); "
        "b = (5 / 0); "
        "c = (- (0 - 8)); "
        "IF ((a = (- 8)) && (b = 0)) THEN x = 1; ELSE x = 0; ENDIF; "
        "COMMIT(); ENDMODEL");
    auto res = run(model, TestInput{}, 4);
    REQUIRE(res.trace.steps.size() == 1);
    CHECK(res.trace.steps[0].d == Decision::BranchTrue);
}

TEST_CASE("identical runs are identical") {
    auto model = tests::fig1_model();
    auto r1 = run(model, fig1_published_input());
    auto r2 = run(model, fig1_published_input());
    CHECK(r1.trace == r2.trace);
    CHECK(r1.db == r2.db);
}
