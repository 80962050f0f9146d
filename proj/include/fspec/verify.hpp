#pragma once

// Property battery: every check compares two independent routes to the same
// quantity, or a sampled quantity against its exact model value.

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "fspec/povm.hpp"

namespace fspec::verify {

struct CheckResult {
  std::string check_id;
  std::string property;  // serialized as "paper_ref"
  bool passed = false;
  double metric = 0.0;
  double tolerance = 0.0;
  std::string detail;
};

struct SuiteOptions {
  std::uint64_t seed = 20240601;
  unsigned threads = 0;
};

[[nodiscard]] CheckResult herglotz_round_trip(const SuiteOptions& options);
[[nodiscard]] CheckResult positive_type_certification(const SuiteOptions& options);
[[nodiscard]] CheckResult gramian_isometry(const SuiteOptions& options);
[[nodiscard]] CheckResult filter_composition(const SuiteOptions& options);
[[nodiscard]] CheckResult filter_inversion(const SuiteOptions& options);
[[nodiscard]] CheckResult fir_spectral_equivalence(const SuiteOptions& options);
[[nodiscard]] CheckResult ckl_orthogonality(const SuiteOptions& options);
[[nodiscard]] CheckResult hfpca_optimality(const SuiteOptions& options);
[[nodiscard]] CheckResult increment_correspondence(const SuiteOptions& options);
[[nodiscard]] CheckResult determinism(const SuiteOptions& options);

/// All ten acceptance checks, in order.
[[nodiscard]] std::vector<CheckResult> acceptance_suite(const SuiteOptions& options);

/// Invariant checks on a user-supplied measure.
[[nodiscard]] std::vector<CheckResult> povm_invariants(const AtomicTracePovm& nu, const SuiteOptions& options);

/// JSON array of {check_id, paper_ref, status, metric, tolerance}.
[[nodiscard]] nlohmann::json report_json(const std::vector<CheckResult>& results);
[[nodiscard]] std::string summary_line(const CheckResult& result);

}  // namespace fspec::verify
