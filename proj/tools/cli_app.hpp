#pragma once

#include <ostream>

namespace optomw::cli {

/// Exit codes: 0 success, 1 numerical failure, 2 usage / configuration error.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace optomw::cli
