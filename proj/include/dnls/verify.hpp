#pragma once

// Cross-method consistency battery behind `dnls verify`.  Each check compares
// two independent routes to the same quantity (closed form against solver,
// map against Newton, fast solve against elimination, and so on).

#include <ostream>
#include <string>
#include <vector>

#include "dnls/perturbation.hpp"

namespace dnls {

struct CheckResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
};

struct VerifyOptions {
  double two_site_tol = 1e-12;
  // Closed-form table under test; the standard one when null.
  const A1Table* a1_table = nullptr;
  unsigned long seed = 20240601;
};

std::vector<CheckResult> verify_suite(const VerifyOptions& opt = {});

// The two-site check on its own (used with tightened tolerances).
CheckResult verify_two_site(double tol);

// The closed-form table against the linear solve on isolated-spot seeds.
CheckResult verify_a1(const A1Table& table);

void print_table(std::ostream& os, const std::vector<CheckResult>& results);
bool all_passed(const std::vector<CheckResult>& results);

}  // namespace dnls
