#include "tmep/designer.hpp"

#include "tmep/critical.hpp"
#include "tmep/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace tmep {

std::string_view to_string(Location l) {
  switch (l) {
  case Location::zone_center:
    return "zone_center";
  case Location::zone_edge:
    return "zone_edge";
  case Location::interior:
    return "interior";
  }
  return "unknown";
}

std::optional<Location> parse_location(std::string_view s) {
  if (s == "zone_center" || s == "center") {
    return Location::zone_center;
  }
  if (s == "zone_edge" || s == "edge") {
    return Location::zone_edge;
  }
  if (s == "interior") {
    return Location::interior;
  }
  return std::nullopt;
}

std::string_view to_string(DesignStatus s) {
  switch (s) {
  case DesignStatus::ok:
    return "ok";
  case DesignStatus::no_solution:
    return "no_solution";
  case DesignStatus::order_mismatch:
    return "order_mismatch";
  case DesignStatus::singular_system:
    return "singular_system";
  case DesignStatus::degenerate_model:
    return "degenerate_model";
  }
  return "unknown";
}

std::vector<int> allowed_orders(int n) {
  if (n < 1) {
    throw DomainError("allowed_orders: n must be >= 1");
  }
  std::vector<int> orders;
  for (int p = 2; p <= 2 * n; ++p) {
    if (p <= n || p % 2 == 0) {
      orders.push_back(p);
    }
  }
  return orders;
}

double halton(unsigned index, unsigned base) {
  double f = 1.0;
  double r = 0.0;
  while (index > 0) {
    f /= base;
    r += f * (index % base);
    index /= base;
  }
  return r;
}

namespace {

unsigned nth_prime(std::size_t i) {
  static constexpr unsigned primes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71};
  if (i >= std::size(primes)) {
    throw DomainError("too many free hoppings for the Halton sequence");
  }
  return primes[i];
}

void check_order(const DesignRequest& req) {
  if (req.n < 1) {
    throw DomainError("design: n must be >= 1");
  }
  const auto allowed = allowed_orders(req.n);
  if (std::find(allowed.begin(), allowed.end(), req.order) == allowed.end()) {
    throw DomainError("design: order " + std::to_string(req.order) + " is not allowed for n = " + std::to_string(req.n));
  }
  for (const auto& [m, t] : req.free_params) {
    if (m < 2 || m > req.n) {
      throw DomainError("design: free hopping index must lie in 2..n");
    }
    if (!std::isfinite(t)) {
      throw DomainError("design: free hopping values must be finite");
    }
  }
}

/// Hopping indices 2..n not fixed by the request, ascending.
std::vector<int> unfixed(const DesignRequest& req) {
  std::vector<int> out;
  for (int m = 2; m <= req.n; ++m) {
    if (!req.free_params.contains(m)) {
      out.push_back(m);
    }
  }
  return out;
}

bool has_ep(const LatticeModel& model, double omega0, double k0, int order) {
  for (const auto& ep : ep_orders_at(model, omega0)) {
    const Complex z = ep.z0.value();
    const double dk = std::remainder(std::abs(z.real()) - std::abs(k0), 2.0 * kPi);
    if (ep.order == order && std::abs(z.imag()) < 1e-6 && std::abs(dk) < 1e-6) {
      return true;
    }
  }
  return false;
}

/// Fills omega0, residuals, order and status for a solved hopping vector.
void finish(DesignResult& res, int p) {
  const double tn = res.hoppings.back();
  double tmax = 0.0;
  for (const double t : res.hoppings) {
    tmax = std::max(tmax, std::abs(t));
  }
  if (!std::isfinite(tmax) || std::abs(tn) <= 1e-12 * tmax) {
    res.status = DesignStatus::degenerate_model;
    res.message = "solution has t_n = 0";
    return;
  }
  const LatticeModel model(res.hoppings);
  res.omega0 = dispersion(model, res.k0);
  res.residuals.clear();
  for (int r = 1; r < p; ++r) {
    res.residuals.push_back(std::abs(dispersion_derivative(model, res.k0, r)));
  }
  try {
    res.order = classify(model, res.k0).order;
  } catch (const DomainError& e) {
    res.order = 0;
    res.status = DesignStatus::order_mismatch;
    res.message = e.what();
    return;
  }
  if (res.order != p) {
    res.status = DesignStatus::order_mismatch;
    res.message = "classify finds order " + std::to_string(res.order);
  } else if (!has_ep(model, res.omega0, res.k0, p)) {
    res.status = DesignStatus::order_mismatch;
    res.message = "dispersion-root multiplicities disagree with classify";
  } else {
    res.status = DesignStatus::ok;
  }
}

} // namespace

DesignResult design_even_ep(const DesignRequest& req) {
  check_order(req);
  if (req.location == Location::interior) {
    throw DomainError("design_even_ep: location must be zone_center or zone_edge");
  }
  if (req.order % 2 != 0) {
    throw DomainError("design_even_ep: odd orders cannot sit at k = 0 or pi");
  }
  const int p = req.order;
  const int constraints = p / 2 - 1;
  auto candidates = unfixed(req);
  if (static_cast<int>(candidates.size()) < constraints) {
    throw DomainError("design_even_ep: too many fixed hoppings for order " + std::to_string(p));
  }
  const std::vector<int> unknowns(candidates.begin(), candidates.begin() + constraints);

  DesignResult res;
  res.k0 = req.location == Location::zone_center ? 0.0 : kPi;
  res.hoppings.assign(static_cast<std::size_t>(req.n), kDefaultFreeHopping);
  res.hoppings[0] = 1.0;
  for (const auto& [m, t] : req.free_params) {
    res.hoppings[static_cast<std::size_t>(m - 1)] = t;
  }

  // sum_m s_m m^r t_m = 0 with s_m = 1 at k = 0 and (-1)^m at pi.
  auto sign = [&](int m) { return req.location == Location::zone_center || m % 2 == 0 ? 1.0 : -1.0; };
  if (constraints > 0) {
    Eigen::MatrixXd a(constraints, constraints);
    Eigen::VectorXd b(constraints);
    for (int i = 0; i < constraints; ++i) {
      const int r = 2 * (i + 1);
      double rhs = 0.0;
      for (int m = 1; m <= req.n; ++m) {
        if (std::find(unknowns.begin(), unknowns.end(), m) == unknowns.end()) {
          rhs -= sign(m) * std::pow(m, r) * res.hoppings[static_cast<std::size_t>(m - 1)];
        }
      }
      double row_scale = 0.0;
      for (int j = 0; j < constraints; ++j) {
        const int m = unknowns[static_cast<std::size_t>(j)];
        a(i, j) = sign(m) * std::pow(m, r);
        row_scale = std::max(row_scale, std::abs(a(i, j)));
      }
      a.row(i) /= row_scale;
      b(i) = rhs / row_scale;
    }
    const Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
    if (lu.rank() < constraints) {
      res.status = DesignStatus::singular_system;
      res.message = "constraint matrix is singular";
      return res;
    }
    Eigen::VectorXd x = lu.solve(b);
    x += lu.solve(b - a * x);
    for (int j = 0; j < constraints; ++j) {
      res.hoppings[static_cast<std::size_t>(unknowns[static_cast<std::size_t>(j)] - 1)] = x(j);
    }
  }
  finish(res, p);
  return res;
}

namespace {

std::vector<DesignResult> solve_interior(const DesignRequest& req, const NewtonOptions& options, std::vector<double>& trace) {
  check_order(req);
  if (req.location != Location::interior) {
    throw DomainError("design_odd_ep: location must be interior");
  }
  const int p = req.order;
  if (p > req.n) {
    throw DomainError("design_odd_ep: interior EPs need p <= n");
  }
  const auto unknowns = unfixed(req);
  const int equations = p - 1;
  const int vars = 1 + static_cast<int>(unknowns.size());
  if (vars < equations) {
    throw DomainError("design_odd_ep: too many fixed hoppings for order " + std::to_string(p));
  }

  std::vector<double> base(static_cast<std::size_t>(req.n), 0.0);
  base[0] = 1.0;
  for (const auto& [m, t] : req.free_params) {
    base[static_cast<std::size_t>(m - 1)] = t;
  }
  auto unpack = [&](const Eigen::VectorXd& u) {
    auto t = base;
    for (std::size_t j = 0; j < unknowns.size(); ++j) {
      t[static_cast<std::size_t>(unknowns[j] - 1)] = u(static_cast<Eigen::Index>(j + 1));
    }
    return t;
  };
  // a_r(k) = -2 sum_m t_m m^r cos(r pi/2 + m k), r = 1..p-1
  auto basis = [](int m, int r, double k) { return -2.0 * std::pow(m, r) * std::cos(r * kPi / 2.0 + m * k); };
  auto residual = [&](const Eigen::VectorXd& u) {
    const auto t = unpack(u);
    Eigen::VectorXd f(equations);
    for (int r = 1; r <= equations; ++r) {
      double s = 0.0;
      for (int m = 1; m <= req.n; ++m) {
        s += t[static_cast<std::size_t>(m - 1)] * basis(m, r, u(0));
      }
      f(r - 1) = s;
    }
    return f;
  };
  auto jacobian = [&](const Eigen::VectorXd& u) {
    const auto t = unpack(u);
    Eigen::MatrixXd j(equations, vars);
    for (int r = 1; r <= equations; ++r) {
      double dk = 0.0;
      for (int m = 1; m <= req.n; ++m) {
        dk += t[static_cast<std::size_t>(m - 1)] * basis(m, r + 1, u(0));
      }
      j(r - 1, 0) = dk;
      for (std::size_t c = 0; c < unknowns.size(); ++c) {
        j(r - 1, static_cast<Eigen::Index>(c + 1)) = basis(unknowns[c], r, u(0));
      }
    }
    return j;
  };

  std::vector<DesignResult> found;
  trace.clear();
  for (int s = 1; s <= options.starts; ++s) {
    Eigen::VectorXd u(vars);
    u(0) = kPi * halton(static_cast<unsigned>(s), 2);
    for (std::size_t c = 0; c < unknowns.size(); ++c) {
      u(static_cast<Eigen::Index>(c + 1)) = -1.0 + 2.0 * halton(static_cast<unsigned>(s), nth_prime(c + 1));
    }
    Eigen::VectorXd f = residual(u);
    bool converged = false;
    for (int it = 0; it < options.max_iterations; ++it) {
      const double tol = options.tolerance * std::max(1.0, derivative_scale(LatticeModel(unpack(u)), equations));
      if (f.lpNorm<Eigen::Infinity>() <= tol) {
        converged = true;
        break;
      }
      const Eigen::VectorXd step = jacobian(u).completeOrthogonalDecomposition().solve(-f);
      double lambda = 1.0;
      bool moved = false;
      while (lambda > 1e-6) {
        const Eigen::VectorXd trial = u + lambda * step;
        const Eigen::VectorXd ft = residual(trial);
        if (ft.allFinite() && ft.norm() < f.norm()) {
          u = trial;
          f = ft;
          moved = true;
          break;
        }
        lambda *= 0.5;
      }
      if (!moved || u.lpNorm<Eigen::Infinity>() > 1e3 - kPi) {
        break;
      }
    }
    trace.push_back(f.lpNorm<Eigen::Infinity>());
    if (!converged) {
      continue;
    }
    DesignResult res;
    res.hoppings = unpack(u);
    res.k0 = std::abs(reduce_to_zone(u(0)));
    if (std::abs(std::sin(res.k0)) < 1e-6) {
      continue;
    }
    finish(res, p);
    if (!res.ok()) {
      continue;
    }
    const bool duplicate = std::any_of(found.begin(), found.end(), [&](const DesignResult& o) {
      double d = std::abs(o.k0 - res.k0);
      for (std::size_t m = 0; m < o.hoppings.size(); ++m) {
        d = std::max(d, std::abs(o.hoppings[m] - res.hoppings[m]));
      }
      return d < 1e-8;
    });
    if (!duplicate) {
      found.push_back(std::move(res));
    }
  }
  std::sort(found.begin(), found.end(), [](const DesignResult& a, const DesignResult& b) {
    if (a.hoppings != b.hoppings) {
      return std::lexicographical_compare(b.hoppings.begin(), b.hoppings.end(), a.hoppings.begin(), a.hoppings.end());
    }
    return a.k0 < b.k0;
  });
  for (auto& r : found) {
    r.trace = trace;
  }
  return found;
}

} // namespace

std::vector<DesignResult> design_odd_ep_all(const DesignRequest& req, const NewtonOptions& options) {
  std::vector<double> trace;
  return solve_interior(req, options, trace);
}

DesignResult design_odd_ep(const DesignRequest& req, const NewtonOptions& options) {
  std::vector<double> trace;
  auto all = solve_interior(req, options, trace);
  if (!all.empty()) {
    return all.front();
  }
  DesignResult res;
  res.status = DesignStatus::no_solution;
  res.message = "no interior solution after " + std::to_string(options.starts) + " starts";
  res.trace = std::move(trace);
  return res;
}

DesignResult design(const DesignRequest& request, const NewtonOptions& options) {
  return request.location == Location::interior ? design_odd_ep(request, options) : design_even_ep(request);
}

std::vector<DesignResult> hypersurface_sample(int n, int order, Location location, int count,
                                              const HypersurfaceOptions& options) {
  if (count < 1) {
    throw DomainError("hypersurface_sample: count must be >= 1");
  }
  DesignRequest req;
  req.n = n;
  req.order = order;
  req.location = location;
  check_order(req);
  if (location != Location::interior && order % 2 != 0) {
    throw DomainError("hypersurface_sample: odd orders need an interior location");
  }
  if (location == Location::interior && order > n) {
    throw DomainError("hypersurface_sample: interior EPs need p <= n");
  }
  const int free_count = location == Location::interior ? n - order + 1 : n - order / 2;
  if (free_count == 0) {
    return {design(req, options.newton)};
  }
  std::vector<DesignResult> out;
  for (int i = 0; i < count; ++i) {
    req.free_params.clear();
    for (int j = 0; j < free_count; ++j) {
      double u = 0.5;
      if (free_count == 1) {
        u = count == 1 ? 0.5 : static_cast<double>(i) / (count - 1);
      } else {
        u = halton(static_cast<unsigned>(i + 1), nth_prime(static_cast<std::size_t>(j)));
      }
      req.free_params[n - j] = options.free_min + (options.free_max - options.free_min) * u;
    }
    DesignResult res;
    try {
      res = design(req, options.newton);
    } catch (const DomainError& e) {
      res.status = DesignStatus::no_solution;
      res.message = e.what();
    }
    if (res.hoppings.empty()) {
      res.hoppings.assign(static_cast<std::size_t>(n), 0.0);
      res.hoppings[0] = 1.0;
      for (const auto& [m, t] : req.free_params) {
        res.hoppings[static_cast<std::size_t>(m - 1)] = t;
      }
    }
    out.push_back(std::move(res));
  }
  return out;
}

} // namespace tmep
