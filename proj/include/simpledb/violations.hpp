#pragma once

#include "simpledb/ast.hpp"

#include <string>
#include <vector>

namespace sdb {

/// Names one schema constraint of a written table. The canonical check order
/// is: primary key, foreign keys in declaration order, arithmetic constraints
/// in declaration order, referenced-row.
struct Violation {
    enum class Kind { Pk, Fk, Arith, RefRow };
    Kind kind = Kind::Pk;
    int index = -1;  // foreign-key / arithmetic-constraint declaration index

    bool operator==(const Violation& o) const = default;
};

inline std::string violation_label(const Violation& v, const TableDecl& t) {
    switch (v.kind) {
        case Violation::Kind::Pk: return "PK";
        case Violation::Kind::Fk: return "FK:" + t.foreign_keys[v.index].references;
        case Violation::Kind::Arith: return "ARITH:" + std::to_string(v.index);
        case Violation::Kind::RefRow: return "REFROW";
    }
    return "?";
}

/// The violations a given db-write statement can raise, in canonical order.
/// These become the exception edges of the statement's CFG node.
inline std::vector<Violation> applicable_violations(const ModelDecl& m, const DbWrite& w) {
    std::vector<Violation> out;
    const TableDecl* t = m.find_table(w.table);
    if (!t) return out;
    switch (w.kind) {
        case DbWrite::Kind::Insert:
            out.push_back({Violation::Kind::Pk, -1});
            for (int i = 0; i < static_cast<int>(t->foreign_keys.size()); ++i)
                out.push_back({Violation::Kind::Fk, i});
            for (int i = 0; i < static_cast<int>(t->arith_constraints.size()); ++i)
                out.push_back({Violation::Kind::Arith, i});
            break;
        case DbWrite::Kind::Update: {
            const bool sets_pk = w.set_attr == t->primary_key;
            if (sets_pk) out.push_back({Violation::Kind::Pk, -1});
            for (int i = 0; i < static_cast<int>(t->foreign_keys.size()); ++i)
                if (t->foreign_keys[i].attribute == w.set_attr)
                    out.push_back({Violation::Kind::Fk, i});
            for (int i = 0; i < static_cast<int>(t->arith_constraints.size()); ++i)
                if (t->arith_constraints[i].attribute == w.set_attr)
                    out.push_back({Violation::Kind::Arith, i});
            if (sets_pk && table_is_referenced(m, t->name))
                out.push_back({Violation::Kind::RefRow, -1});
            break;
        }
        case DbWrite::Kind::Delete:
            if (table_is_referenced(m, t->name)) out.push_back({Violation::Kind::RefRow, -1});
            break;
    }
    return out;
}

}  // namespace sdb
