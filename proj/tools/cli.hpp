#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace nbhd::cli {

/// Exit codes: 0 success, 1 false / countermodel / not found, 2 usage or
/// input errors. Diagnostics go to `err` as "error[<code>]: <message>".
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace nbhd::cli
