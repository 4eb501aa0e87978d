#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace liftscale::cli {

/// Runs one command line. Returns 0 on success, 1 on a library error (its
/// name goes to `err`), 2 on a usage error (the grammar goes to `err`).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run(int argc, const char* const* argv);

}  // namespace liftscale::cli
