#pragma once

// Independent path counter used to cross-check enumerate_paths: walks the AST
// directly with explicit continuations, never touching the Cfg machinery.

#include "simpledb/checker.hpp"
#include "simpledb/path.hpp"

#include <functional>
#include <map>
#include <string>
#include <vector>

namespace tests {

class PathOracle {
public:
    PathOracle(const sdb::CheckedModel& m, const sdb::PathBounds& b) : m_(m), b_(b) {}

    long count() {
        Cont done = [](State) { return 1L; };
        return block(m_.model().program, 0, State{}, done);
    }

private:
    struct State {
        std::map<std::string, int> cursor;  // 0 fresh, 1 advanced, 2 exhausted
        std::map<int, int> loops;
    };
    using Cont = std::function<long(State)>;

    const sdb::CheckedModel& m_;
    sdb::PathBounds b_;

    long block(const std::vector<sdb::Stmt>& blk, std::size_t i, State st, const Cont& k) {
        if (i == blk.size()) return k(std::move(st));
        const sdb::Stmt& s = blk[i];
        Cont rest = [this, &blk, i, &k](State st2) { return block(blk, i + 1, std::move(st2), k); };
        switch (s.kind) {
            case sdb::Stmt::Kind::If:
                return block(s.then_branch, 0, st, rest) + block(s.else_branch, 0, st, rest);
            case sdb::Stmt::Kind::While:
                return loop(s, std::move(st), rest);
            case sdb::Stmt::Kind::SelectAssign:
                st.cursor[s.var] = 0;
                return rest(std::move(st));
            case sdb::Stmt::Kind::Next:
            case sdb::Stmt::Kind::CatchNext: {
                const std::string& cvar =
                    s.kind == sdb::Stmt::Kind::Next ? s.var : s.cursor_var;
                const bool caught = s.kind == sdb::Stmt::Kind::CatchNext;
                long total = 0;
                int phase = st.cursor.count(cvar) ? st.cursor.at(cvar) : 0;
                if (phase != 2) {
                    State ok = st;
                    ok.cursor[cvar] = 1;
                    total += rest(std::move(ok));
                }
                if (b_.include_exception_paths) {
                    if (caught) {
                        State ex = st;
                        ex.cursor[cvar] = 2;
                        total += rest(std::move(ex));
                    } else {
                        total += 1;  // uncaught exception: terminal
                    }
                }
                return total;
            }
            case sdb::Stmt::Kind::Write:
            case sdb::Stmt::Kind::CatchWrite: {
                const bool caught = s.kind == sdb::Stmt::Kind::CatchWrite;
                long total = rest(st);
                if (b_.include_exception_paths) {
                    auto violations = sdb::applicable_violations(m_.model(), s.write);
                    for (std::size_t v = 0; v < violations.size(); ++v)
                        total += caught ? rest(st) : 1;
                }
                return total;
            }
            default:
                return rest(std::move(st));
        }
    }

    long loop(const sdb::Stmt& s, State st, const Cont& rest) {
        long total = 0;
        State st_exit = st;
        st_exit.loops[s.stmt_id] = 0;
        total += rest(std::move(st_exit));
        int count = st.loops.count(s.stmt_id) ? st.loops.at(s.stmt_id) : 0;
        if (count + 1 <= b_.max_loop_iterations) {
            State st_enter = st;
            st_enter.loops[s.stmt_id] = count + 1;
            Cont again = [this, &s, &rest](State t) { return loop(s, std::move(t), rest); };
            total += block(s.body, 0, std::move(st_enter), again);
        }
        return total;
    }
};

inline long count_paths_oracle(const sdb::CheckedModel& m, const sdb::PathBounds& b) {
    return PathOracle(m, b).count();
}

}  // namespace tests
