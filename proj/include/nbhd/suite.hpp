#pragma once

#include <string>
#include <vector>

#include "nbhd/search.hpp"

namespace nbhd {

struct SuiteRow {
  std::string key;  // proposition number the row replays
  std::string check;
  bool pass = false;
  std::string detail;
};

/// Replays every shipped fixture under `fixture_dir` (moore.json and the
/// base / .perturb / -perturbed triples). A row whose check throws fails
/// with the message as detail.
std::vector<SuiteRow> run_paper_suite(const std::string& fixture_dir,
                                      const SearchOptions& options = {});

/// One line per row: "PASS  Prop 3.2  <check>[: detail]".
std::string format_suite(const std::vector<SuiteRow>& rows);

}  // namespace nbhd
