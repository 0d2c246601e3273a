#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace tests {

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

inline std::string corpus_path(const std::string& name) {
    return std::string(SDB_CORPUS_DIR) + "/" + name;
}

inline std::string read_corpus_file(const std::string& name) {
    return read_file(corpus_path(name));
}

inline std::string golden_path(const std::string& name) {
    return std::string(SDB_GOLDEN_DIR) + "/" + name;
}

}  // namespace tests
