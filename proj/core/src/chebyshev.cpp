#include "tmep/chebyshev.hpp"

#include "tmep/errors.hpp"
#include "tmep/hessenberg_qr.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace tmep::cheb {

std::vector<std::int64_t> first_kind_monomial(int m) {
  if (m < 0 || m > 62) {
    throw DomainError("first_kind_monomial: degree out of range");
  }
  std::vector<std::int64_t> prev{1};
  if (m == 0) {
    return prev;
  }
  std::vector<std::int64_t> cur{0, 1};
  for (int k = 1; k < m; ++k) {
    std::vector<std::int64_t> next(cur.size() + 1, 0);
    for (std::size_t i = 0; i < cur.size(); ++i) {
      next[i + 1] += 2 * cur[i];
    }
    for (std::size_t i = 0; i < prev.size(); ++i) {
      next[i] -= prev[i];
    }
    prev = std::move(cur);
    cur = std::move(next);
  }
  return cur;
}

std::vector<double> to_monomial(std::span<const double> c) {
  std::vector<double> out(c.size(), 0.0);
  for (std::size_t m = 0; m < c.size(); ++m) {
    if (c[m] == 0.0) {
      continue;
    }
    const auto tm = first_kind_monomial(static_cast<int>(m));
    for (std::size_t i = 0; i < tm.size(); ++i) {
      out[i] += c[m] * static_cast<double>(tm[i]);
    }
  }
  return out;
}

template <class T>
static T clenshaw(std::span<const double> c, T x) {
  if (c.empty()) {
    return T{0.0};
  }
  T b1{0.0};
  T b2{0.0};
  for (std::size_t k = c.size() - 1; k >= 1; --k) {
    const T b0 = c[k] + 2.0 * x * b1 - b2;
    b2 = b1;
    b1 = b0;
  }
  return c[0] + x * b1 - b2;
}

Complex evaluate(std::span<const double> c, Complex x) { return clenshaw<Complex>(c, x); }
double evaluate(std::span<const double> c, double x) { return clenshaw<double>(c, x); }

std::vector<double> derivative(std::span<const double> c) {
  const int n = static_cast<int>(c.size()) - 1;
  if (n <= 0) {
    return {0.0};
  }
  std::vector<double> d(static_cast<std::size_t>(n) + 2, 0.0);
  for (int k = n; k >= 1; --k) {
    d[static_cast<std::size_t>(k - 1)] = d[static_cast<std::size_t>(k + 1)] + 2.0 * k * c[static_cast<std::size_t>(k)];
  }
  d[0] *= 0.5;
  d.resize(static_cast<std::size_t>(n));
  return d;
}

std::vector<double> from_second_kind(std::span<const double> u) {
  // U_j = 2 (T_j + T_{j-2} + ...), minus T_0 once when j is even.
  std::vector<double> c(std::max<std::size_t>(u.size(), 1), 0.0);
  for (std::size_t j = 0; j < u.size(); ++j) {
    for (std::size_t k = j % 2; k <= j; k += 2) {
      c[k] += 2.0 * u[j];
    }
    if (j % 2 == 0) {
      c[0] -= u[j];
    }
  }
  return c;
}

double first_kind_derivative_bound(int m, int j, double r) {
  std::vector<double> e(static_cast<std::size_t>(m) + 1, 0.0);
  e.back() = 1.0;
  for (int i = 0; i < j; ++i) {
    e = derivative(e);
  }
  return std::abs(evaluate(e, std::max(r, 1.0)));
}

std::vector<Complex> colleague_roots(std::span<const double> c, int max_iterations) {
  // Strip exact zeros at the top so the leading coefficient is nonzero.
  std::size_t size = c.size();
  while (size > 0 && c[size - 1] == 0.0) {
    --size;
  }
  if (size <= 1) {
    return {};
  }
  const int n = static_cast<int>(size) - 1;
  const double lead = c[size - 1];
  if (n == 1) {
    return {Complex{-c[0] / lead, 0.0}};
  }
  // Rows act on (T_0, ..., T_{n-1}): x T_0 = T_1, x T_k = (T_{k+1} + T_{k-1})/2,
  // and T_n is eliminated through the polynomial itself.
  Eigen::MatrixXd colleague = Eigen::MatrixXd::Zero(n, n);
  colleague(0, 1) = 1.0;
  for (int k = 1; k < n - 1; ++k) {
    colleague(k, k - 1) = 0.5;
    colleague(k, k + 1) = 0.5;
  }
  colleague(n - 1, n - 2) += 0.5;
  for (int j = 0; j < n; ++j) {
    colleague(n - 1, j) -= c[static_cast<std::size_t>(j)] / (2.0 * lead);
  }
  Eigen::MatrixXd hess = colleague.transpose();
  balance(hess);
  return hessenberg_eigenvalues(std::move(hess), max_iterations);
}

double taylor_scale(std::span<const double> c, int j, double radius) {
  double factorial = 1.0;
  for (int i = 2; i <= j; ++i) {
    factorial *= i;
  }
  double s = 0.0;
  for (std::size_t m = static_cast<std::size_t>(j); m < c.size(); ++m) {
    s += std::abs(c[m]) * first_kind_derivative_bound(static_cast<int>(m), j, radius);
  }
  return s / factorial;
}

namespace {

struct Poly {
  std::vector<double> c;
  Complex operator()(Complex x) const { return evaluate(c, x); }
};

bool newton(const Poly& f, const Poly& df, Complex& x, int iterations) {
  for (int it = 0; it < iterations; ++it) {
    const Complex d = df(x);
    if (d == Complex{0.0, 0.0}) {
      return std::abs(f(x)) == 0.0;
    }
    const Complex step = f(x) / d;
    x -= step;
    if (!std::isfinite(x.real()) || !std::isfinite(x.imag())) {
      return false;
    }
    if (std::abs(step) <= 4.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(x))) {
      return true;
    }
  }
  return true;
}

// Number of leading Taylor coefficients of c that vanish at x.
int vanishing_order(std::span<const std::vector<double>> derivs, std::span<const double> scales_source, Complex x,
                    double tol, int limit) {
  int s = 0;
  double factorial = 1.0;
  const double radius = std::max(1.0, std::abs(x));
  for (int j = 0; j < limit && j < static_cast<int>(derivs.size()); ++j) {
    if (j >= 2) {
      factorial *= j;
    }
    const double value = std::abs(evaluate(derivs[static_cast<std::size_t>(j)], x)) / factorial;
    if (value > tol * taylor_scale(scales_source, j, radius)) {
      break;
    }
    ++s;
  }
  return s;
}

Complex snap_real(Complex x) {
  if (std::abs(x.imag()) <= 1e-14 * (1.0 + std::abs(x.real()))) {
    return {x.real(), 0.0};
  }
  return x;
}

} // namespace

std::vector<RootCluster> cluster_roots(std::span<const double> c, std::span<const Complex> roots,
                                       const MultiplicityOptions& options) {
  std::vector<std::vector<double>> derivs{std::vector<double>(c.begin(), c.end())};
  for (std::size_t j = 1; j < c.size(); ++j) {
    derivs.push_back(derivative(derivs.back()));
  }
  const Poly p{derivs[0]};

  std::vector<Complex> pending(roots.begin(), roots.end());
  std::sort(pending.begin(), pending.end(), [](Complex a, Complex b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });

  auto min_separation = [](const std::vector<Complex>& members) {
    double d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < members.size(); ++i) {
      for (std::size_t j = i + 1; j < members.size(); ++j) {
        d = std::min(d, std::abs(members[i] - members[j]));
      }
    }
    return d;
  };
  auto nearest_other = [&roots](Complex x) {
    double d = std::numeric_limits<double>::infinity();
    bool skipped_self = false;
    for (const Complex r : roots) {
      if (!skipped_self && r == x) {
        skipped_self = true;
        continue;
      }
      d = std::min(d, std::abs(r - x));
    }
    return d;
  };

  std::vector<RootCluster> clusters;
  auto take_nearest = [&pending](Complex target, std::size_t count) {
    std::sort(pending.begin(), pending.end(),
              [target](Complex a, Complex b) { return std::abs(a - target) < std::abs(b - target); });
    std::vector<Complex> members(pending.begin(), pending.begin() + static_cast<std::ptrdiff_t>(count));
    pending.erase(pending.begin(), pending.begin() + static_cast<std::ptrdiff_t>(count));
    return members;
  };

  if (options.check_endpoints) {
    for (const double b : {1.0, -1.0}) {
      const int s = std::min<int>(vanishing_order(derivs, c, Complex{b, 0.0}, options.taylor_tol,
                                                  static_cast<int>(pending.size())),
                                  static_cast<int>(pending.size()));
      if (s > 0) {
        const auto members = take_nearest(Complex{b, 0.0}, static_cast<std::size_t>(s));
        clusters.push_back({Complex{b, 0.0}, s, s > 1 && min_separation(members) < 1e-10});
      }
    }
  }

  while (!pending.empty()) {
    std::sort(pending.begin(), pending.end(), [](Complex a, Complex b) {
      return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
    const Complex anchor = pending.front();
    std::vector<Complex> by_distance = pending;
    std::sort(by_distance.begin(), by_distance.end(),
              [anchor](Complex a, Complex b) { return std::abs(a - anchor) < std::abs(b - anchor); });

    bool accepted = false;
    const int max_s = std::min<int>(static_cast<int>(by_distance.size()), static_cast<int>(c.size()) - 1);
    for (int s = max_s; s >= 2 && !accepted; --s) {
      Complex centroid{0.0, 0.0};
      for (int i = 0; i < s; ++i) {
        centroid += by_distance[static_cast<std::size_t>(i)];
      }
      centroid /= static_cast<double>(s);
      const double radius = options.merge_radius * (1.0 + std::abs(centroid));
      bool compact = true;
      for (int i = 0; i < s; ++i) {
        compact = compact && std::abs(by_distance[static_cast<std::size_t>(i)] - centroid) <= radius;
      }
      if (!compact) {
        continue;
      }
      Complex center = centroid;
      const Poly f{derivs[static_cast<std::size_t>(s - 1)]};
      const Poly df{derivs[static_cast<std::size_t>(s)]};
      if (!newton(f, df, center, 50) || std::abs(center - centroid) > radius) {
        continue;
      }
      center = snap_real(center);
      if (vanishing_order(derivs, c, center, options.taylor_tol, s) < s) {
        continue;
      }
      const auto members = take_nearest(anchor, static_cast<std::size_t>(s));
      clusters.push_back({center, s, min_separation(members) < 1e-10});
      accepted = true;
    }
    if (!accepted) {
      Complex x = pending.front();
      pending.erase(pending.begin());
      const bool crowded = nearest_other(x) < 1e-10;
      const Poly dp{derivs.size() > 1 ? derivs[1] : std::vector<double>{0.0}};
      Complex polished = x;
      if (newton(p, dp, polished, 8) && std::abs(p(polished)) <= std::abs(p(x))) {
        x = polished;
      }
      clusters.push_back({snap_real(x), 1, crowded});
    }
  }
  // Conjugate pairs: make them exact mirror images.
  for (auto& a : clusters) {
    if (a.center.imag() <= 0.0) {
      continue;
    }
    for (auto& b : clusters) {
      if (b.center.imag() < 0.0 && b.multiplicity == a.multiplicity &&
          std::abs(b.center - std::conj(a.center)) <= 1e-8 * (1.0 + std::abs(a.center))) {
        b.center = std::conj(a.center);
        break;
      }
    }
  }
  std::sort(clusters.begin(), clusters.end(), [](const RootCluster& a, const RootCluster& b) {
    return a.center.real() != b.center.real() ? a.center.real() < b.center.real() : a.center.imag() < b.center.imag();
  });
  return clusters;
}

} // namespace tmep::cheb
