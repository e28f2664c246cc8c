#pragma once

// Seeded randomized checks of the library's invariants. Every check draws
// from its own generator derived from the seed, so reports are reproducible
// byte for byte and independent of thread count.

#include "tmep/model.hpp"
#include "tmep/transfer.hpp"

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

namespace tmep {

/// t_1 = 1, t_2..t_n uniform in [-1, 1], redrawn until |t_n| >= 0.1.
LatticeModel random_model(std::mt19937_64& rng, int n);

/// `count` models with n uniform in 1..max_n, reproducible from `seed`.
std::vector<LatticeModel> random_models(std::uint64_t seed, int count, int max_n);

using TransferBuilder = std::function<TransferMatrix(const LatticeModel&, double)>;

struct VerifyOptions {
  std::uint64_t seed = 42;
  int models = 200;
  int max_n = 5;
  int spectral_samples = 500;
  int spectral_max_n = 6;
  int scan_samples = 100000;
  /// The scan keeps k0 within [margin, pi - margin].
  double scan_margin = 0.1;
  double scan_threshold = 1e-3;
  double det_tol = 1e-10;
  double closure_tol = 1e-10;
  double route_tol = 1e-7;
  double eigenrelation_tol = 1e-10;
  unsigned threads = 1;
  /// Replaces build_transfer in the spectral checks (negative-control hook).
  TransferBuilder transfer_builder;
};

struct CheckResult {
  std::string name;
  bool passed = true;
  long long cases = 0;
  long long failures = 0;
  long long skipped = 0;
  /// Largest error seen, or the scan minimum for the impossibility scan.
  double worst = 0.0;
  double tolerance = 0.0;
  /// Supporting evidence rather than a proof of the property.
  bool evidence = false;
  std::string detail;
};

struct VerifyReport {
  VerifyOptions options;
  std::vector<CheckResult> checks;

  bool passed() const;
};

CheckResult check_ep_order_equivalence(const VerifyOptions& options);
CheckResult check_noncritical_has_no_real_ep(const VerifyOptions& options);
CheckResult check_high_order_at_zone_boundary(const VerifyOptions& options);
CheckResult check_index_consistency(const VerifyOptions& options);
CheckResult check_determinant(const VerifyOptions& options);
CheckResult check_closure(const VerifyOptions& options);
CheckResult check_route_agreement(const VerifyOptions& options);
CheckResult check_eigenrelation(const VerifyOptions& options);
CheckResult check_unit_count_parity(const VerifyOptions& options);

/// n = 3: Gauss-Newton on max(|a_1|..|a_4|) over (k0, t_2, t_3) from
/// scan_samples seeded starts in [margin, pi - margin] x [-2, 2]^2. Passes when
/// the smallest residual stays above scan_threshold.
CheckResult impossibility_scan(const VerifyOptions& options);

VerifyReport run_verify(const VerifyOptions& options);

std::string verify_report_json(const VerifyReport& report);

/// A builder whose T(omega) has determinant 1.001 instead of 1.
TransferBuilder corrupted_transfer_builder();

} // namespace tmep
