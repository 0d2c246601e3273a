#include <catch2/catch_amalgamated.hpp>

#include "simpledb/cfg.hpp"
#include "simpledb/path_enum.hpp"
#include "simpledb/printer.hpp"

#include "support/fig1.hpp"
#include "support/model_gen.hpp"
#include "support/path_oracle.hpp"

#include <random>

using namespace sdb;

namespace {

Cfg cfg_of(const std::string& src) { return build_cfg(check_source(src)); }

}  // namespace

TEST_CASE("straight-line program yields a two-commit chain and one path") {
    auto cfg = cfg_of("MODEL m COMMIT(); COMMIT(); ENDMODEL");
    REQUIRE(cfg.size() == 2);
    CHECK(cfg.node(0).out.size() == 1);
    CHECK(cfg.node(0).out[0].target == 1);
    CHECK(cfg.node(1).out[0].target == Cfg::kExit);

    auto paths = enumerate_paths(cfg, PathBounds{});
    REQUIRE(paths.paths.size() == 1);
    CHECK(paths.paths[0].steps.empty());
    CHECK_FALSE(paths.paths[0].aborted);
    CHECK_FALSE(paths.truncated);
}

TEST_CASE("plays model CFG has the expected decision structure") {
    auto cfg = build_cfg(tests::fig1_model());

    const CfgNode& loop = cfg.node(2);
    REQUIRE(loop.out.size() == 2);
    CHECK(loop.out[0].label == CfgEdge::Label::LoopExit);
    CHECK(loop.out[1].label == CfgEdge::Label::LoopEnter);

    // isEmpty = CATCH(NEXT(authors)): both outcomes continue into the IF.
    const CfgNode& next = cfg.node(6);
    REQUIRE(next.out.size() == 2);
    CHECK(next.out[0].label == CfgEdge::Label::Ok);
    CHECK(next.out[1].label == CfgEdge::Label::Exn);
    CHECK(next.out[0].target == 7);
    CHECK(next.out[1].target == 7);

    // INSERT INTO author: uncaught, ok + PK + arithmetic violation edges.
    const CfgNode& ins_author = cfg.node(8);
    REQUIRE(ins_author.out.size() == 3);
    CHECK(ins_author.out[0].label == CfgEdge::Label::Ok);
    CHECK(ins_author.out[1].violation == Violation{Violation::Kind::Pk, -1});
    CHECK(ins_author.out[1].target == Cfg::kAbort);
    CHECK(ins_author.out[2].violation == Violation{Violation::Kind::Arith, 0});

    // CATCH(INSERT INTO play): ok + PK + FK edges, all continuing.
    const CfgNode& ins_play = cfg.node(10);
    REQUIRE(ins_play.out.size() == 3);
    CHECK(ins_play.out[1].violation == Violation{Violation::Kind::Pk, -1});
    CHECK(ins_play.out[2].violation == Violation{Violation::Kind::Fk, 0});
    CHECK(ins_play.out[1].target == 11);
    CHECK(ins_play.out[2].target == 11);
}

TEST_CASE("update and delete expose violation edges per schema") {
    auto cfg = cfg_of(
        "MODEL m "
        "TABLE a (x,PRIMARY KEY(x)); "
        "TABLE b (y,z,PRIMARY KEY(y),FOREIGN KEY(z) REFERENCES a,z > 1); "
        "COMMIT(); "
        "UPDATE a SET x = 1 WHERE TRUE; "
        "UPDATE b SET z = 2 WHERE TRUE; "
        "DELETE FROM a WHERE TRUE; "
        "DELETE FROM b WHERE TRUE; "
        "COMMIT(); ENDMODEL");

    const auto& upd_a = cfg.node(1).out;  // PK + REFROW: a is referenced
    REQUIRE(upd_a.size() == 3);
    CHECK(upd_a[1].violation == Violation{Violation::Kind::Pk, -1});
    CHECK(upd_a[2].violation == Violation{Violation::Kind::RefRow, -1});

    const auto& upd_b = cfg.node(2).out;  // FK + ARITH on the z attribute
    REQUIRE(upd_b.size() == 3);
    CHECK(upd_b[1].violation == Violation{Violation::Kind::Fk, 0});
    CHECK(upd_b[2].violation == Violation{Violation::Kind::Arith, 0});

    CHECK(cfg.node(3).out.size() == 2);  // DELETE a: REFROW
    CHECK(cfg.node(3).out[1].violation == Violation{Violation::Kind::RefRow, -1});
    CHECK(cfg.node(4).out.size() == 1);  // DELETE b: nothing can go wrong
}

TEST_CASE("single while loop enumerates zero to bound iterations") {
    auto cfg = cfg_of(
        "MODEL m COMMIT(); LOAD(x); WHILE (!(x=NIL)) DO x = x.TAIL; ENDWHILE; "
        "COMMIT(); ENDMODEL");
    PathBounds b;
    b.max_loop_iterations = 2;
    auto res = enumerate_paths(cfg, b);
    CHECK(res.paths.size() == 3);
    for (const auto& p : res.paths) CHECK_FALSE(validate_path(cfg, p).has_value());
}

TEST_CASE("worked path on the plays model validates") {
    auto cfg = build_cfg(tests::fig1_model());
    auto path = tests::fig1_worked_path();
    auto err = validate_path(cfg, path);
    if (err) INFO(err->reason);
    CHECK_FALSE(err.has_value());

    auto stmts = path_statements(cfg, path);
    int reads = 0, loads = 0;
    for (const Stmt* s : stmts) {
        if (s->kind == Stmt::Kind::Read) ++reads;
        if (s->kind == Stmt::Kind::Load) ++loads;
    }
    CHECK(reads == 1);
    CHECK(loads == 1);
}

TEST_CASE("validate rejects mismatched decisions") {
    auto cfg = cfg_of("MODEL m COMMIT(); IF TRUE THEN ELSE ENDIF; COMMIT(); ENDMODEL");
    Path p;
    p.steps = {{1, Decision::LoopEnter, std::nullopt}};
    auto err = validate_path(cfg, p);
    REQUIRE(err.has_value());
    CHECK(err->index == 0);

    Path wrong_stmt;
    wrong_stmt.steps = {{0, Decision::BranchTrue, std::nullopt}};
    CHECK(validate_path(cfg, wrong_stmt).has_value());

    Path missing;
    CHECK(validate_path(cfg, missing).has_value());

    Path extra;
    extra.steps = {{1, Decision::BranchTrue, std::nullopt},
                   {1, Decision::BranchTrue, std::nullopt}};
    CHECK(validate_path(cfg, extra).has_value());
}

TEST_CASE("validate checks the abort terminal") {
    auto cfg = cfg_of(
        "MODEL m TABLE t (a,PRIMARY KEY(a)); COMMIT(); "
        "INSERT INTO t VALUES (1); COMMIT(); ENDMODEL");
    Path ok;
    ok.steps = {{1, Decision::Ok, std::nullopt}};
    CHECK_FALSE(validate_path(cfg, ok).has_value());

    Path abort_pk;
    abort_pk.steps = {{1, Decision::Exn, Violation{Violation::Kind::Pk, -1}}};
    abort_pk.aborted = true;
    abort_pk.abort_stmt = 1;
    CHECK_FALSE(validate_path(cfg, abort_pk).has_value());

    Path claims_exit = abort_pk;
    claims_exit.aborted = false;
    CHECK(validate_path(cfg, claims_exit).has_value());

    Path claims_abort = ok;
    claims_abort.aborted = true;
    claims_abort.abort_stmt = 1;
    CHECK(validate_path(cfg, claims_abort).has_value());
}

TEST_CASE("next after a throwing next can only throw") {
    auto cfg = cfg_of(
        "MODEL m TABLE t (a,PRIMARY KEY(a)); COMMIT(); "
        "s = SELECT a FROM t WHERE TRUE; "
        "x = CATCH(NEXT(s)); "
        "y = CATCH(NEXT(s)); "
        "COMMIT(); ENDMODEL");
    auto res = enumerate_paths(cfg, PathBounds{});
    // (ok,ok), (ok,exn), (exn,exn) - never (exn,ok)
    REQUIRE(res.paths.size() == 3);
    for (const auto& p : res.paths) {
        REQUIRE(p.steps.size() == 2);
        if (p.steps[0].d == Decision::Exn) CHECK(p.steps[1].d == Decision::Exn);
    }
}

TEST_CASE("enumeration count matches the independent oracle") {
    auto model = tests::fig1_model();
    auto cfg = build_cfg(model);

    for (int loop_bound : {1, 2}) {
        for (bool exceptions : {true, false}) {
            PathBounds b;
            b.max_loop_iterations = loop_bound;
            b.include_exception_paths = exceptions;
            auto res = enumerate_paths(cfg, b);
            REQUIRE_FALSE(res.truncated);
            long expected = tests::count_paths_oracle(model, b);
            INFO("loop_bound=" << loop_bound << " exceptions=" << exceptions);
            CHECK(static_cast<long>(res.paths.size()) == expected);
            for (const auto& p : res.paths) CHECK_FALSE(validate_path(cfg, p).has_value());
        }
    }
}

TEST_CASE("enumeration matches the oracle on random models") {
    std::mt19937 rng(7);
    for (int i = 0; i < 60; ++i) {
        auto model = tests::random_checked_model(rng);
        auto cfg = build_cfg(model);
        PathBounds b;
        b.max_loop_iterations = 1 + (i % 2);
        b.include_exception_paths = (i % 3) != 0;
        b.max_paths = 100000;
        auto res = enumerate_paths(cfg, b);
        if (res.truncated) continue;
        long expected = tests::count_paths_oracle(model, b);
        INFO(pretty_print(model.model()));
        REQUIRE(static_cast<long>(res.paths.size()) == expected);
        for (const auto& p : res.paths) REQUIRE_FALSE(validate_path(cfg, p).has_value());
    }
}

TEST_CASE("max_paths truncates with a flag") {
    auto cfg = build_cfg(tests::fig1_model());
    PathBounds b;
    b.max_loop_iterations = 2;
    b.max_paths = 5;
    auto res = enumerate_paths(cfg, b);
    CHECK(res.paths.size() == 5);
    CHECK(res.truncated);
}
