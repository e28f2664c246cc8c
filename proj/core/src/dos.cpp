#include "tmep/dos.hpp"

#include "tmep/errors.hpp"
#include "tmep/transfer.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

namespace tmep {

std::string_view to_string(Side s) { return s == Side::above ? "above" : "below"; }

DispersionSamples::DispersionSamples(const LatticeModel& model, double k_step) {
  if (!(k_step > 0.0) || !(k_step <= 2.0 * kPi)) {
    throw DomainError("k_step must lie in (0, 2 pi]");
  }
  const auto n = static_cast<std::size_t>(std::max(1.0, std::round(2.0 * kPi / k_step)));
  k_step_ = 2.0 * kPi / static_cast<double>(n);
  energies_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    energies_[i] = dispersion(model, -kPi + static_cast<double>(i + 1) * k_step_);
  }
  std::sort(energies_.begin(), energies_.end());
}

double DispersionSamples::integrated(double energy) const {
  const auto below = std::lower_bound(energies_.begin(), energies_.end(), energy) - energies_.begin();
  return static_cast<double>(below) / static_cast<double>(energies_.size());
}

double DispersionSamples::density(double mu, double h) const {
  if (!(h > 0.0)) {
    throw DomainError("e_step must be positive");
  }
  return (-integrated(mu + 2.0 * h) + 8.0 * integrated(mu + h) - 8.0 * integrated(mu - h) +
          integrated(mu - 2.0 * h)) /
         (12.0 * h);
}

double integrated_dos(const LatticeModel& model, double energy, double k_step) {
  return DispersionSamples(model, k_step).integrated(energy);
}

DosSample dos_numeric(const LatticeModel& model, double mu, double k_step, double e_step) {
  if (!(e_step > 0.0)) {
    throw DomainError("dos_numeric: e_step must be positive");
  }
  DosSample s;
  s.nu = DispersionSamples(model, k_step).density(mu, e_step);
  for (const double e : critical_energies(model)) {
    s.straddles_critical = s.straddles_critical || std::abs(e - mu) <= 2.0 * e_step;
  }
  return s;
}

double dos_prefactor(int order, double leading) {
  double fact_pm1 = 1.0;
  for (int i = 2; i < order; ++i) {
    fact_pm1 *= i;
  }
  const double fact_p = fact_pm1 * order;
  const double a = std::abs(leading);
  return fact_pm1 / (kPi * a) * std::pow(a / fact_p, (order - 1.0) / order);
}

double dos_analytic_near_ep(const LatticeModel& model, const CriticalPoint& cp, double delta, Side side) {
  if (!(delta > 0.0)) {
    throw DomainError("dos_analytic_near_ep: delta must be positive");
  }
  if ((cp.kind == CriticalClass::minimum && side == Side::below) ||
      (cp.kind == CriticalClass::maximum && side == Side::above)) {
    throw DomainError("dos_analytic_near_ep: no divergence on this side of an extremum");
  }
  const int p = cp.order;
  // Each real branch k0 +- B contributes (1/2pi)|dk/domega| = A_p/2 delta^{-(p-1)/p};
  // extrema have two real branches, saddles one; interior points come in +-k0 pairs.
  const bool zone_symmetric = std::abs(std::sin(cp.k0)) < 1e-12;
  const int clusters = zone_symmetric ? 1 : 2;
  const int branches = p % 2 == 0 ? 2 : 1;
  const double leading =
      clusters * branches * 0.5 * dos_prefactor(p, cp.leading) * std::pow(delta, -(p - 1.0) / p);

  double background = 0.0;
  for (const auto& e : spectrum_via_dispersion(model, cp.omega0).entries) {
    if (e.multiplicity == 1 && e.unit_modulus && e.z.is_real()) {
      background += 1.0 / (2.0 * kPi * std::abs(dispersion_derivative(model, e.z.real(), 1)));
    }
  }
  return leading + background;
}

double EStepPolicy::step(double delta, double bandwidth) const {
  return std::clamp(fraction * delta, min_rel * bandwidth, max_rel * bandwidth);
}

std::vector<Singularity> singularities(std::span<const CriticalPoint> points) {
  std::vector<Singularity> out;
  double lo = points.empty() ? 0.0 : points.front().omega0;
  double hi = lo;
  for (const auto& cp : points) {
    lo = std::min(lo, cp.omega0);
    hi = std::max(hi, cp.omega0);
  }
  const double merge = 1e-12 * std::max(hi - lo, 1.0);
  for (const auto& cp : points) {
    const double alpha = (cp.order - 1.0) / cp.order;
    const double below = cp.kind == CriticalClass::minimum ? 0.0 : alpha;
    const double above = cp.kind == CriticalClass::maximum ? 0.0 : alpha;
    auto it = std::find_if(out.begin(), out.end(), [&](const Singularity& s) { return std::abs(s.omega - cp.omega0) <= merge; });
    if (it == out.end()) {
      out.push_back({cp.omega0, below, above});
    } else {
      it->alpha_below = std::max(it->alpha_below, below);
      it->alpha_above = std::max(it->alpha_above, above);
    }
  }
  std::sort(out.begin(), out.end(), [](const Singularity& a, const Singularity& b) { return a.omega < b.omega; });
  return out;
}

namespace {

double bandwidth_of(const std::vector<Singularity>& s) {
  return s.empty() ? 1.0 : std::max(s.back().omega - s.front().omega, 1e-300);
}

void record_step(DosGrid& grid, double h) {
  grid.e_step_min = grid.e_step_min == 0.0 ? h : std::min(grid.e_step_min, h);
  grid.e_step_max = std::max(grid.e_step_max, h);
}

} // namespace

DosCurve near_ep_curve(const LatticeModel& model, const DispersionSamples& samples, double omega0, Side side,
                       double delta_min, double delta_max, int count, const EStepPolicy& policy) {
  if (!(delta_min > 0.0) || !(delta_max > delta_min) || count < 2) {
    throw DomainError("near_ep_curve: need 0 < delta_min < delta_max and count >= 2");
  }
  DosCurve curve;
  curve.critical = singularities(find_critical_points(model));
  curve.grid.k_step = samples.k_step();
  curve.grid.k_points = samples.size();
  curve.grid.policy = policy;
  const double width = bandwidth_of(curve.critical);
  const double sign = side == Side::above ? 1.0 : -1.0;
  const double ratio = std::log(delta_max / delta_min) / (count - 1);
  for (int i = 0; i < count; ++i) {
    const double delta = delta_min * std::exp(ratio * i);
    const double h = policy.step(delta, width);
    record_step(curve.grid, h);
    curve.energies.push_back(omega0 + sign * delta);
    curve.values.push_back(samples.density(omega0 + sign * delta, h));
  }
  if (side == Side::below) {
    std::reverse(curve.energies.begin(), curve.energies.end());
    std::reverse(curve.values.begin(), curve.values.end());
  }
  return curve;
}

DosCurve band_curve(const LatticeModel& model, const DispersionSamples& samples, const BandCurveOptions& options) {
  DosCurve curve;
  curve.critical = singularities(find_critical_points(model));
  curve.grid.k_step = samples.k_step();
  curve.grid.k_points = samples.size();
  curve.grid.policy = options.policy;
  const double width = bandwidth_of(curve.critical);
  const double ratio = std::pow(10.0, 1.0 / options.per_decade);

  std::vector<double> omegas;
  for (std::size_t s = 0; s + 1 < curve.critical.size(); ++s) {
    const double a = curve.critical[s].omega;
    const double b = curve.critical[s + 1].omega;
    const double half = 0.5 * (b - a);
    for (double d = std::min(options.delta_min_rel * width, 0.25 * half); d < half; d *= ratio) {
      omegas.push_back(a + d);
      omegas.push_back(b - d);
    }
    for (int i = 1; i < options.uniform_per_segment; ++i) {
      omegas.push_back(a + (b - a) * i / options.uniform_per_segment);
    }
  }
  std::sort(omegas.begin(), omegas.end());
  omegas.erase(std::unique(omegas.begin(), omegas.end()), omegas.end());

  for (const double w : omegas) {
    double delta = width;
    for (const auto& c : curve.critical) {
      delta = std::min(delta, std::abs(w - c.omega));
    }
    const double h = options.policy.step(delta, width);
    record_step(curve.grid, h);
    curve.energies.push_back(w);
    curve.values.push_back(samples.density(w, h));
  }
  return curve;
}

double integrate_band(const DosCurve& curve) {
  const auto& crit = curve.critical;
  const auto& w = curve.energies;
  const auto& nu = curve.values;
  if (w.size() < 2 || crit.size() < 2) {
    throw DomainError("integrate_band: curve needs samples and at least two critical energies");
  }
  auto nearest = [&crit](double x) {
    const Singularity* best = &crit.front();
    for (const auto& c : crit) {
      if (std::abs(x - c.omega) < std::abs(x - best->omega)) {
        best = &c;
      }
    }
    return best;
  };

  double total = 0.0;
  for (std::size_t i = 0; i + 1 < w.size(); ++i) {
    const double wa = w[i];
    const double wb = w[i + 1];
    // A critical energy strictly between two samples: the tails below handle it.
    const bool split = std::any_of(crit.begin(), crit.end(), [&](const Singularity& c) { return c.omega > wa && c.omega < wb; });
    if (split) {
      continue;
    }
    const Singularity* ra = nearest(wa);
    const Singularity* rb = nearest(wb);
    const double da = std::abs(wa - ra->omega);
    const double db = std::abs(wb - rb->omega);
    if (ra == rb && nu[i] > 0.0 && nu[i + 1] > 0.0 && da > 0.0 && db > 0.0 && std::abs(std::log(db / da)) > 1e-12) {
      // nu ~ C delta^beta across the panel
      const double beta = std::log(nu[i + 1] / nu[i]) / std::log(db / da);
      const double q = db / da;
      const double piece = std::abs(beta + 1.0) < 1e-9 ? nu[i] * da * std::log(q)
                                                        : nu[i] * da / (beta + 1.0) * (std::pow(q, beta + 1.0) - 1.0);
      total += std::abs(piece);
    } else {
      total += 0.5 * (nu[i] + nu[i + 1]) * (wb - wa);
    }
  }
  // Closed-form tails between each critical energy and its nearest sample.
  for (const auto& c : crit) {
    const auto above = std::upper_bound(w.begin(), w.end(), c.omega);
    if (above != w.end() && (&c != &crit.back())) {
      const auto i = static_cast<std::size_t>(above - w.begin());
      const double d = w[i] - c.omega;
      total += nu[i] * d / (1.0 - c.alpha_above);
    }
    if (above != w.begin() && (&c != &crit.front())) {
      const auto i = static_cast<std::size_t>(above - w.begin()) - 1;
      const double d = c.omega - w[i];
      if (d > 0.0) {
        total += nu[i] * d / (1.0 - c.alpha_below);
      }
    }
  }
  return total;
}

ExponentFit fit_exponent(const DosCurve& curve, double omega0, Side side, std::pair<double, double> window) {
  const auto [dmin, dmax] = window;
  if (!(dmin > 0.0) || !(dmax > dmin)) {
    throw DomainError("fit_exponent: window must satisfy 0 < delta_min < delta_max");
  }
  const double sign = side == Side::above ? 1.0 : -1.0;
  const double width = bandwidth_of(curve.critical);
  for (const auto& c : curve.critical) {
    const double d = sign * (c.omega - omega0);
    if (d > 1e-12 * width && d <= dmax) {
      throw DomainError("fit_exponent: another critical energy lies inside the window");
    }
  }
  std::vector<double> xs;
  std::vector<double> ys;
  const double slack = 1e-9;
  for (std::size_t i = 0; i < curve.energies.size(); ++i) {
    const double d = sign * (curve.energies[i] - omega0);
    if (d >= dmin * (1.0 - slack) && d <= dmax * (1.0 + slack) && curve.values[i] > 0.0) {
      xs.push_back(std::log(d));
      ys.push_back(std::log(curve.values[i]));
    }
  }
  if (xs.size() < 8) {
    throw DomainError("fit_exponent: fewer than 8 samples inside the window");
  }
  const double m = static_cast<double>(xs.size());
  double sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
  }
  const double mx = sx / m;
  const double my = sy / m;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  ExponentFit fit;
  fit.exponent = sxy / sxx;
  fit.prefactor = std::exp(my - fit.exponent * mx);
  double ss_res = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - (my + fit.exponent * (xs[i] - mx));
    ss_res += r * r;
  }
  fit.r2 = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
  fit.samples = static_cast<int>(xs.size());
  return fit;
}

void write_dos_csv(std::ostream& os, const DosCurve& curve) {
  const auto old = os.precision(17);
  os << "omega,nu\n";
  for (std::size_t i = 0; i < curve.energies.size(); ++i) {
    os << curve.energies[i] << ',' << curve.values[i] << '\n';
  }
  os.precision(old);
}

} // namespace tmep
