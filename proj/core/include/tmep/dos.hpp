#pragma once

// Density of states nu(omega) = int dk/2pi delta(omega - eps(k)).
//
// Numerically: count k-grid points with eps(k) < E to get the integrated
// DOS D(E), then take a fourth-order central difference in E. Analytically,
// near an order-p critical point nu ~ A_p delta^{-(p-1)/p} on the side(s)
// where real momenta exist.

#include "tmep/critical.hpp"
#include "tmep/model.hpp"

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace tmep {

inline constexpr double kDefaultKStep = 2.0 * kPi * 1e-6;

enum class Side { above, below };

std::string_view to_string(Side s);

/// eps(k) sampled on the uniform grid k_i = -pi + i * 2pi/N, i = 1..N, and
/// sorted. Immutable once built; share it freely between threads.
class DispersionSamples {
public:
  DispersionSamples(const LatticeModel& model, double k_step = kDefaultKStep);

  /// D(E): fraction of grid points with eps(k) < E (strict).
  double integrated(double energy) const;

  /// (-D(mu+2h) + 8 D(mu+h) - 8 D(mu-h) + D(mu-2h)) / (12 h)
  double density(double mu, double e_step) const;

  double k_step() const noexcept { return k_step_; }
  std::size_t size() const noexcept { return energies_.size(); }
  std::span<const double> sorted_energies() const noexcept { return energies_; }

private:
  std::vector<double> energies_;
  double k_step_;
};

double integrated_dos(const LatticeModel& model, double energy, double k_step = kDefaultKStep);

struct DosSample {
  double nu = 0.0;
  /// The stencil [mu - 2h, mu + 2h] contains a critical energy.
  bool straddles_critical = false;
};

DosSample dos_numeric(const LatticeModel& model, double mu, double k_step, double e_step);

/// A_p(k0) = (p-1)! / (pi |a_p|) * (|a_p| / p!)^{(p-1)/p}
double dos_prefactor(int order, double leading);

/// Leading-order DOS at omega0 +- delta next to the critical point `cp`,
/// plus 1/(2 pi |a_1|) for every other simple real root at omega0. Counts
/// the partner at -k0 for interior points, so the value is the full DOS.
/// Throws DomainError when `side` is the non-divergent side of an extremum.
double dos_analytic_near_ep(const LatticeModel& model, const CriticalPoint& cp, double delta, Side side);

/// Finite-difference step as a function of the distance to the nearest
/// critical energy: clamp(fraction * delta, min_rel * W, max_rel * W), with
/// W the bandwidth.
struct EStepPolicy {
  double min_rel = 1e-8;
  double max_rel = 1e-3;
  double fraction = 0.1;

  double step(double delta, double bandwidth) const;
};

struct DosGrid {
  double k_step = kDefaultKStep;
  std::size_t k_points = 0;
  int fd_order = 4;
  /// Smallest and largest finite-difference step actually used.
  double e_step_min = 0.0;
  double e_step_max = 0.0;
  EStepPolicy policy;
};

/// Divergence exponents (p-1)/p on each side of a critical energy; zero on a
/// side with no divergence.
struct Singularity {
  double omega = 0.0;
  double alpha_below = 0.0;
  double alpha_above = 0.0;
};

std::vector<Singularity> singularities(std::span<const CriticalPoint> points);

struct DosCurve {
  std::vector<double> energies;
  std::vector<double> values;
  DosGrid grid;
  std::vector<Singularity> critical;
};

/// Log-spaced samples at omega0 +- delta, delta in [delta_min, delta_max].
DosCurve near_ep_curve(const LatticeModel& model, const DispersionSamples& samples, double omega0, Side side,
                       double delta_min, double delta_max, int count, const EStepPolicy& policy = {});

struct BandCurveOptions {
  /// Closest approach to a critical energy, relative to the bandwidth.
  double delta_min_rel = 1e-6;
  int per_decade = 12;
  int uniform_per_segment = 200;
  EStepPolicy policy;
};

/// Whole-band curve, graded geometrically toward every critical energy.
DosCurve band_curve(const LatticeModel& model, const DispersionSamples& samples, const BandCurveOptions& options = {});

/// Integral of nu over the band. Panels use power-law interpolation in the
/// distance to the nearest critical energy; the piece between a critical
/// energy and its closest sample is integrated in closed form with the known
/// exponent.
double integrate_band(const DosCurve& curve);

struct ExponentFit {
  double exponent = 0.0;
  double prefactor = 0.0;
  double r2 = 0.0;
  int samples = 0;
};

/// Least-squares slope of log nu against log delta over the window. Throws
/// DomainError for fewer than 8 usable samples or when another critical
/// energy falls inside the window.
ExponentFit fit_exponent(const DosCurve& curve, double omega0, Side side, std::pair<double, double> window);

/// CSV with header omega,nu.
void write_dos_csv(std::ostream& os, const DosCurve& curve);

} // namespace tmep
