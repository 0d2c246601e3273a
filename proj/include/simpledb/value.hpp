#pragma once

#include "simpledb/numeric.hpp"

#include <map>
#include <string>
#include <variant>
#include <vector>

namespace sdb {

using Row = std::vector<Int>;
using TableRows = std::vector<Row>;  // kept sorted ascending by primary key

/// A SELECT snapshot with its cursor. The snapshot is immutable; NEXT only
/// moves the cursor. `advanced` counts successful NEXT calls, so the row
/// under the cursor is rows[advanced-1]; a throwing NEXT sets `exhausted`
/// and leaves the cursor where it was.
struct TableVal {
    std::string table;
    TableRows rows;
    int pk_index = 0;
    int advanced = 0;
    bool exhausted = false;
};

struct Value {
    std::variant<Int, std::vector<Int>, TableVal> v;

    Int as_int() const { return std::get<Int>(v); }
    const std::vector<Int>& as_list() const { return std::get<std::vector<Int>>(v); }
    TableVal& as_table() { return std::get<TableVal>(v); }
    const TableVal& as_table() const { return std::get<TableVal>(v); }
};

/// Committed snapshot plus the working copy of every table.
struct DbState {
    std::map<std::string, TableRows> committed;
    std::map<std::string, TableRows> working;

    bool operator==(const DbState&) const = default;
};

/// One complete program input: initial table contents, the integers consumed
/// by READ and the lists consumed by LOAD, in statement execution order.
struct TestInput {
    std::map<std::string, TableRows> tables;
    std::vector<Int> reads;
    std::vector<std::vector<Int>> loads;

    bool operator==(const TestInput&) const = default;
};

}  // namespace sdb
