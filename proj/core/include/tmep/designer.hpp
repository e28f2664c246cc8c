#pragma once

// Hopping parameters that put an EP of a prescribed order at a prescribed
// momentum. With t_1 = 1, the conditions a_r(k0) = 0 are linear in t_2..t_n
// at k0 = 0 or pi (only even r matter there) and nonlinear elsewhere.

#include "tmep/model.hpp"

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace tmep {

enum class Location { zone_center, zone_edge, interior };

std::string_view to_string(Location l);
/// Accepts "zone_center", "zone_edge", "interior" (also "center", "edge").
std::optional<Location> parse_location(std::string_view s);

/// {2..n} together with the even p in (n, 2n].
std::vector<int> allowed_orders(int n);

struct DesignRequest {
  int n = 1;
  int order = 2;
  Location location = Location::zone_center;
  /// Fixed hoppings, keyed by m (2..n). t_1 is always 1.
  std::map<int, double> free_params;
};

enum class DesignStatus { ok, no_solution, order_mismatch, singular_system, degenerate_model };

std::string_view to_string(DesignStatus s);

struct DesignResult {
  DesignStatus status = DesignStatus::no_solution;
  /// t_1..t_n; meaningful only when status is ok or order_mismatch.
  std::vector<double> hoppings;
  double k0 = 0.0;
  double omega0 = 0.0;
  /// Order found by classify at k0 (0 when nothing was solved).
  int order = 0;
  /// |a_r(k0)| for r = 1..p-1.
  std::vector<double> residuals;
  /// Final max_r |a_r| of every Newton start, in start order (interior only).
  std::vector<double> trace;
  std::string message;

  bool ok() const noexcept { return status == DesignStatus::ok; }
  LatticeModel model() const { return LatticeModel(hoppings); }
};

/// Default value of hoppings left unconstrained by an even-order design.
inline constexpr double kDefaultFreeHopping = 0.1;

struct NewtonOptions {
  double tolerance = 1e-12;
  int max_iterations = 100;
  int starts = 64;
};

/// Linear solve of a_r(k0) = 0, r = 2, 4, .., p-2, at k0 = 0 or pi. Unknowns
/// are the p/2 - 1 lowest-index hoppings not fixed by free_params; the rest
/// default to kDefaultFreeHopping. Throws DomainError for odd p, p outside
/// allowed_orders(n), an interior location, or too many fixed hoppings.
DesignResult design_even_ep(const DesignRequest& request);

/// Every distinct interior solution found by damped Newton on
/// a_1(k0) = .. = a_{p-1}(k0) = 0 over (k0, unfixed hoppings), from Halton
/// multi-starts with k0 in (0, pi) and hoppings in [-1, 1]. Solutions with
/// k0 at 0 or pi are discarded; k0 is reported in (0, pi), the partner sits
/// at -k0. Sorted by hoppings in descending lexicographic order.
std::vector<DesignResult> design_odd_ep_all(const DesignRequest& request, const NewtonOptions& options = {});

/// First entry of design_odd_ep_all, or a no_solution result carrying the
/// residual trace. Throws DomainError for an interior p > n.
DesignResult design_odd_ep(const DesignRequest& request, const NewtonOptions& options = {});

/// Dispatches on request.location.
DesignResult design(const DesignRequest& request, const NewtonOptions& options = {});

struct HypersurfaceOptions {
  /// Range swept by the hoppings left free by the constraints.
  double free_min = 0.05;
  double free_max = 0.55;
  NewtonOptions newton;
};

/// `count` points on the order-p EP hypersurface: the free hoppings are swept
/// over [free_min, free_max] (uniform grid for one, Halton points for more)
/// and the constrained ones solved for. Points that fail keep their status.
/// With no free hoppings (p = 2n at the zone boundary) a single point is
/// returned.
std::vector<DesignResult> hypersurface_sample(int n, int order, Location location, int count,
                                              const HypersurfaceOptions& options = {});

/// Radical-inverse (Halton) coordinate `index` in prime base `base`.
double halton(unsigned index, unsigned base);

} // namespace tmep
