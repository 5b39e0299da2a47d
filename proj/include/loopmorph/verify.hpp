#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "loopmorph/loop.hpp"

namespace loopmorph {

struct CheckResult {
  std::string name;
  int criterion = 0;    // acceptance criterion the check belongs to
  std::string anchor;   // what the check compares against
  double residual = 0.0;
  double tolerance = 0.0;
  bool expect_above = false;  // pass when residual > tolerance
  bool pass = false;
  double seconds = 0.0;
  std::string note;
};

struct VerificationReport {
  std::string suite;
  std::vector<CheckResult> checks;
  bool pass = true;
  double wall_seconds = 0.0;

  std::string to_text() const;
  std::string to_json() const;
};

struct VerifyOptions {
  int band = kDefaultBand;
  int random_loop_band = 16;
  int random_loops = 50;
  unsigned seed = 20240611u;
  std::ostream* progress = nullptr;  // one line per finished check when set
};

std::vector<std::string> suite_names();
// Criteria covered by a suite; InvalidParams for unknown names.
std::vector<int> suite_criteria(const std::string& name);

VerificationReport run_verification_suite(const std::string& name, const VerifyOptions& opt = {});

}  // namespace loopmorph
