#pragma once

#include <iosfwd>
#include <map>
#include <string>

namespace polariton::cli {

// Entry point used by main() and by the tests. `env` supplies the
// POLARITON_* variables; results go to files, progress to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err,
        const std::map<std::string, std::string>& env);

}  // namespace polariton::cli
