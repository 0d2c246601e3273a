#pragma once

#include "simpledb/ast.hpp"
#include "simpledb/checker.hpp"
#include "simpledb/cli.hpp"
#include "simpledb/lexer.hpp"
#include "simpledb/parser.hpp"
#include "simpledb/printer.hpp"
