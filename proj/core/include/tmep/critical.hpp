#pragma once

// Real critical points of the band and exceptional points (EPs) of the
// transfer matrix.
//
// A real momentum k0 is a critical point of order p when a_1..a_{p-1} vanish
// at k0 and a_p does not. T(eps(k0)) then has an EP of order p at z = k0:
// p of the 2n solutions of omega = eps(z) coalesce there. The same holds at
// complex z0, which this module reports but does not classify.

#include "tmep/model.hpp"

#include <optional>
#include <string_view>
#include <vector>

namespace tmep {

enum class CriticalClass { minimum, maximum, saddle };

std::string_view to_string(CriticalClass c);

struct CriticalPoint {
  double k0 = 0.0;
  double omega0 = 0.0;
  int order = 2;
  /// a_p(k0), the first non-vanishing derivative.
  double leading = 0.0;
  /// [1 + (-1)^p] sign(a_p) / 2
  int index = 0;
  CriticalClass kind = CriticalClass::minimum;
};

struct ClassifyOptions {
  /// |a_r(k0)| <= tol_rel * 2 sum_m |t_m| m^r counts as zero.
  double tol_rel = 1e-9;
};

/// Order, index and class of the critical point at k0. Throws DomainError if
/// a_1(k0) does not vanish, or if no order p <= 2n qualifies.
CriticalPoint classify(const LatticeModel& model, double k0, const ClassifyOptions& options = {});

/// All real critical points in (-pi, pi], sorted by k0. Interior points come
/// from the roots in [-1, 1] of Q, where a_1(k) = 2 sin(k) Q(cos k); k = 0
/// and k = pi are always present.
std::vector<CriticalPoint> find_critical_points(const LatticeModel& model, const ClassifyOptions& options = {});

/// Distinct critical energies, ascending, merged within 1e-12 * bandwidth.
std::vector<double> critical_energies(const LatticeModel& model);

struct ExceptionalPoint {
  ComplexMomentum z0;
  int order = 2;
};

/// Every EP of T(omega0), real or complex z0, from x-root multiplicities of
/// the dispersion polynomial. Non-coalescing roots are omitted.
std::vector<ExceptionalPoint> ep_orders_at(const LatticeModel& model, double omega0, double multiplicity_tol = 1e-10);

struct IndexReport {
  int index = 0;
  int count_above = 0;
  int count_below = 0;
  double delta = 0.0;
  /// Another critical energy lies inside (omega0 - delta, omega0 + delta).
  bool intruder = false;
};

/// sign[c(omega0 + delta) - c(omega0 - delta)]. With no delta given, starts
/// from 1e-6 * bandwidth and halves (up to 40 times) while another critical
/// energy intrudes. An explicit delta is used as is and only flagged.
IndexReport index_from_counts(const LatticeModel& model, double omega0, std::optional<double> delta = std::nullopt);

struct EpSplitting {
  double k0 = 0.0;
  int order = 2;
  double delta = 0.0;
  /// (p! delta / |a_p|)^(1/p)
  double radius = 0.0;
  std::vector<Complex> roots_above;
  std::vector<Complex> roots_below;
  int real_count_above = 0;
  int real_count_below = 0;
};

/// Leading-order momenta solving eps(z) = omega0 +- delta near a critical k0:
/// k0 + B e^{i 2 m pi/p} on the side where delta/a_p > 0 and
/// k0 + B e^{i (2m+1) pi/p} on the other, m = 0..p-1.
EpSplitting ep_splitting(const LatticeModel& model, double k0, double delta, const ClassifyOptions& options = {});

/// The `count` exact solutions z of eps(z) = omega nearest to k0 (real parts
/// shifted by multiples of 2 pi toward k0), from the dispersion route.
std::vector<Complex> roots_near(const LatticeModel& model, double omega, double k0, int count);

/// Solutions of eps(z) - eps(k0) = delta nearest to k0, with delta signed.
/// Starts from roots_near and polishes with Newton on the difference
/// 4 sum t_m sin(m(z+k0)/2) sin(m(z-k0)/2), which avoids forming
/// eps(k0) + delta in floating point; small delta keeps full relative accuracy.
/// Starts that roots_near has already merged into one cluster (delta below
/// its multiplicity tolerance) are not separated.
std::vector<Complex> roots_at_offset(const LatticeModel& model, double k0, double delta, int count);

} // namespace tmep
