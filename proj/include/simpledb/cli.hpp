#pragma once

#include <cstdio>

namespace sdb::cli {

// Placeholder while the pipeline is under construction.
inline int run(int, char**) {
    std::fputs("sdb: not yet wired\n", stderr);
    return 1;
}

}  // namespace sdb::cli
