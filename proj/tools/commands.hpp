#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace ququart::cli {

/// Entry point shared by the executable and the tests. args excludes argv[0].
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ququart::cli
