#include "tmep/critical.hpp"

#include "tmep/chebyshev.hpp"
#include "tmep/errors.hpp"
#include "tmep/transfer.hpp"

#include <algorithm>
#include <cmath>

namespace tmep {

std::string_view to_string(CriticalClass c) {
  switch (c) {
  case CriticalClass::minimum:
    return "minimum";
  case CriticalClass::maximum:
    return "maximum";
  case CriticalClass::saddle:
    return "saddle";
  }
  return "unknown";
}

CriticalPoint classify(const LatticeModel& model, double k0, const ClassifyOptions& options) {
  const double a1 = dispersion_derivative(model, k0, 1);
  if (std::abs(a1) > options.tol_rel * derivative_scale(model, 1)) {
    throw DomainError("classify: a_1(k0) does not vanish; k0 is not a critical point");
  }
  const int max_order = 2 * model.range();
  for (int p = 2; p <= max_order; ++p) {
    const double ap = dispersion_derivative(model, k0, p);
    if (std::abs(ap) <= options.tol_rel * derivative_scale(model, p)) {
      continue;
    }
    CriticalPoint cp;
    cp.k0 = reduce_to_zone(k0);
    cp.omega0 = dispersion(model, k0);
    cp.order = p;
    cp.leading = ap;
    const int sign = ap > 0.0 ? 1 : -1;
    cp.index = p % 2 == 0 ? sign : 0;
    if (p % 2 == 1) {
      cp.kind = CriticalClass::saddle;
    } else {
      cp.kind = sign > 0 ? CriticalClass::minimum : CriticalClass::maximum;
    }
    return cp;
  }
  throw DomainError("classify: all derivatives up to order 2n vanish at k0");
}

std::vector<CriticalPoint> find_critical_points(const LatticeModel& model, const ClassifyOptions& options) {
  std::vector<CriticalPoint> points{classify(model, 0.0, options), classify(model, kPi, options)};

  std::vector<double> u(static_cast<std::size_t>(model.range()), 0.0);
  for (int m = 1; m <= model.range(); ++m) {
    u[static_cast<std::size_t>(m - 1)] = m * model.t(m);
  }
  const auto q = cheb::from_second_kind(u);
  cheb::MultiplicityOptions opts;
  opts.check_endpoints = true;
  for (const auto& cluster : cheb::cluster_roots(q, cheb::colleague_roots(q), opts)) {
    const Complex x = cluster.center;
    if (x.imag() != 0.0 || std::abs(x.real()) >= 1.0) {
      continue;
    }
    const double k = std::acos(x.real());
    points.push_back(classify(model, k, options));
    points.push_back(classify(model, -k, options));
  }
  std::sort(points.begin(), points.end(), [](const CriticalPoint& a, const CriticalPoint& b) { return a.k0 < b.k0; });
  return points;
}

std::vector<double> critical_energies(const LatticeModel& model) {
  std::vector<double> energies;
  for (const auto& cp : find_critical_points(model)) {
    energies.push_back(cp.omega0);
  }
  std::sort(energies.begin(), energies.end());
  const double width = energies.back() - energies.front();
  const double merge = 1e-12 * std::max(width, 1e-300);
  std::vector<double> unique;
  for (const double e : energies) {
    if (unique.empty() || e - unique.back() > merge) {
      unique.push_back(e);
    }
  }
  return unique;
}

std::vector<ExceptionalPoint> ep_orders_at(const LatticeModel& model, double omega0, double multiplicity_tol) {
  DispersionRootOptions opts;
  opts.multiplicity_tol = multiplicity_tol;
  std::vector<ExceptionalPoint> eps;
  for (const auto& e : spectrum_via_dispersion(model, omega0, opts).entries) {
    if (e.multiplicity >= 2) {
      eps.push_back({e.z, e.multiplicity});
    }
  }
  return eps;
}

IndexReport index_from_counts(const LatticeModel& model, double omega0, std::optional<double> delta) {
  if (delta && !(*delta > 0.0)) {
    throw DomainError("index_from_counts: delta must be positive");
  }
  const auto energies = critical_energies(model);
  const double width = energies.back() - energies.front();
  const double same = 1e-12 * std::max(width, 1.0);
  auto intrudes = [&](double d) {
    return std::any_of(energies.begin(), energies.end(), [&](double e) {
      const double gap = std::abs(e - omega0);
      return gap > same && gap < d;
    });
  };

  IndexReport report;
  report.delta = delta.value_or(1e-6 * width);
  if (!delta) {
    for (int i = 0; i < 40 && intrudes(report.delta); ++i) {
      report.delta *= 0.5;
    }
  }
  report.intruder = intrudes(report.delta);
  report.count_above = unit_modulus_count(model, omega0 + report.delta);
  report.count_below = unit_modulus_count(model, omega0 - report.delta);
  const int diff = report.count_above - report.count_below;
  report.index = (diff > 0) - (diff < 0);
  return report;
}

EpSplitting ep_splitting(const LatticeModel& model, double k0, double delta, const ClassifyOptions& options) {
  if (!(delta > 0.0)) {
    throw DomainError("ep_splitting: delta must be positive");
  }
  const CriticalPoint cp = classify(model, k0, options);
  const int p = cp.order;
  double factorial = 1.0;
  for (int i = 2; i <= p; ++i) {
    factorial *= i;
  }
  EpSplitting out;
  out.k0 = cp.k0;
  out.order = p;
  out.delta = delta;
  out.radius = std::pow(factorial * delta / std::abs(cp.leading), 1.0 / p);

  // Even multiples of pi/p on the side where delta / a_p > 0, odd ones on the other.
  auto branch = [&](bool even) {
    std::vector<Complex> roots;
    for (int m = 0; m < p; ++m) {
      const double angle = (even ? 2.0 * m : 2.0 * m + 1.0) * kPi / p;
      roots.push_back(cp.k0 + std::polar(out.radius, angle));
    }
    return roots;
  };
  // Real members: angle 0 (m = 0) and angle pi (2m = p or 2m + 1 = p).
  auto real_count = [p](bool even) { return even ? (p % 2 == 0 ? 2 : 1) : (p % 2 == 1 ? 1 : 0); };

  const bool above_even = cp.leading > 0.0;
  out.roots_above = branch(above_even);
  out.roots_below = branch(!above_even);
  out.real_count_above = real_count(above_even);
  out.real_count_below = real_count(!above_even);
  return out;
}

std::vector<Complex> roots_near(const LatticeModel& model, double omega, double k0, int count) {
  std::vector<Complex> zs;
  for (const auto& e : spectrum_via_dispersion(model, omega).entries) {
    Complex z = e.z.value();
    const double shift = 2.0 * kPi * std::round((k0 - z.real()) / (2.0 * kPi));
    z += shift;
    zs.insert(zs.end(), static_cast<std::size_t>(e.multiplicity), z);
  }
  std::sort(zs.begin(), zs.end(), [k0](Complex a, Complex b) { return std::abs(a - k0) < std::abs(b - k0); });
  zs.resize(std::min<std::size_t>(zs.size(), static_cast<std::size_t>(std::max(count, 0))));
  return zs;
}

std::vector<Complex> roots_at_offset(const LatticeModel& model, double k0, double delta, int count) {
  auto zs = roots_near(model, dispersion(model, k0) + delta, k0, count);
  const int n = model.range();
  auto residual = [&](Complex z, Complex* slope) {
    Complex g = -delta;
    Complex dg = 0.0;
    for (int m = 1; m <= n; ++m) {
      g += 4.0 * model.t(m) * std::sin(0.5 * m * (z + k0)) * std::sin(0.5 * m * (z - k0));
      dg += 2.0 * m * model.t(m) * std::sin(static_cast<double>(m) * z);
    }
    *slope = dg;
    return g;
  };
  // Newton from each start; the iterate with the smallest residual within 0.5
  // of k0 is kept, so a poor start is never made worse or sent to a periodic image.
  for (auto& z : zs) {
    Complex cur = z;
    Complex dg;
    double best = std::abs(residual(cur, &dg));
    for (int it = 0; it < 50 && dg != 0.0; ++it) {
      cur -= residual(cur, &dg) / dg;
      Complex next_dg;
      const double r = std::abs(residual(cur, &next_dg));
      if (r < best && std::abs(cur - k0) <= 0.5) {
        best = r;
        z = cur;
      }
      dg = next_dg;
      if (r == 0.0) {
        break;
      }
    }
  }
  return zs;
}

} // namespace tmep
