#include "simpledb/simpledb.hpp"

int main(int argc, char** argv) { return sdb::cli::run(argc, argv); }
