#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace dendro {

// Runs one command; args excludes the program name. Returns 0 on success,
// 1 on a verification failure (with a witness) and 2 on malformed input.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dendro
