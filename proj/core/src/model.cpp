#include "tmep/model.hpp"

#include "tmep/chebyshev.hpp"
#include "tmep/errors.hpp"

#include <algorithm>
#include <cmath>

namespace tmep {

LatticeModel::LatticeModel(std::vector<double> hoppings) : hoppings_(std::move(hoppings)) {
  if (hoppings_.empty()) {
    throw ModelError("lattice model needs at least one hopping (n >= 1)");
  }
  for (const double t : hoppings_) {
    if (!std::isfinite(t)) {
      throw ModelError("lattice model hoppings must be finite");
    }
  }
  if (hoppings_.back() == 0.0) {
    throw ModelError("lattice model requires t_n != 0");
  }
}

double reduce_to_zone(double k) {
  constexpr double two_pi = 2.0 * kPi;
  double r = std::fmod(k, two_pi);
  if (r > kPi) {
    r -= two_pi;
  } else if (r <= -kPi) {
    r += two_pi;
  }
  return r;
}

ComplexMomentum::ComplexMomentum(Complex z) : z_{reduce_to_zone(z.real()), z.imag()} {}

Complex dispersion(const LatticeModel& model, Complex z) {
  Complex sum{0.0, 0.0};
  for (int m = 1; m <= model.range(); ++m) {
    sum += model.t(m) * std::cos(static_cast<double>(m) * z);
  }
  return -2.0 * sum;
}

double dispersion(const LatticeModel& model, double k) {
  double sum = 0.0;
  for (int m = 1; m <= model.range(); ++m) {
    sum += model.t(m) * std::cos(m * k);
  }
  return -2.0 * sum;
}

namespace {

// cos(r pi/2 + theta) without rounding pi/2.
template <class T>
T shifted_cos(int r, T theta) {
  switch (((r % 4) + 4) % 4) {
  case 0:
    return std::cos(theta);
  case 1:
    return -std::sin(theta);
  case 2:
    return -std::cos(theta);
  default:
    return std::sin(theta);
  }
}

} // namespace

Complex dispersion_derivative(const LatticeModel& model, Complex z0, int r) {
  if (r < 1) {
    throw DomainError("dispersion_derivative: order r must be >= 1");
  }
  Complex sum{0.0, 0.0};
  for (int m = 1; m <= model.range(); ++m) {
    sum += model.t(m) * std::pow(static_cast<double>(m), r) * shifted_cos(r, static_cast<double>(m) * z0);
  }
  return -2.0 * sum;
}

double dispersion_derivative(const LatticeModel& model, double k0, int r) {
  if (r < 1) {
    throw DomainError("dispersion_derivative: order r must be >= 1");
  }
  double sum = 0.0;
  for (int m = 1; m <= model.range(); ++m) {
    sum += model.t(m) * std::pow(static_cast<double>(m), r) * shifted_cos(r, m * k0);
  }
  return -2.0 * sum;
}

double derivative_scale(const LatticeModel& model, int r) {
  double s = 0.0;
  for (int m = 1; m <= model.range(); ++m) {
    s += std::abs(model.t(m)) * std::pow(static_cast<double>(m), r);
  }
  return 2.0 * s;
}

DispersionPolynomial::DispersionPolynomial(const LatticeModel& model, double omega) {
  cheb_.assign(static_cast<std::size_t>(model.range()) + 1, 0.0);
  cheb_[0] = omega;
  for (int m = 1; m <= model.range(); ++m) {
    cheb_[static_cast<std::size_t>(m)] = 2.0 * model.t(m);
  }
}

DispersionPolynomial::DispersionPolynomial(std::vector<double> chebyshev_coefficients)
    : cheb_(std::move(chebyshev_coefficients)) {
  if (cheb_.empty()) {
    cheb_.push_back(0.0);
  }
}

std::vector<double> DispersionPolynomial::monomial() const { return cheb::to_monomial(cheb_); }

Complex DispersionPolynomial::operator()(Complex x) const { return cheb::evaluate(cheb_, x); }
double DispersionPolynomial::operator()(double x) const { return cheb::evaluate(cheb_, x); }

DispersionPolynomial DispersionPolynomial::derivative(int j) const {
  std::vector<double> c = cheb_;
  for (int i = 0; i < j; ++i) {
    c = cheb::derivative(c);
  }
  return DispersionPolynomial(std::move(c));
}

double DispersionPolynomial::taylor_scale(int j, double radius) const { return cheb::taylor_scale(cheb_, j, radius); }

DispersionPolynomial dispersion_polynomial(const LatticeModel& model, double omega) {
  return DispersionPolynomial(model, omega);
}

BandExtent band_extent(const LatticeModel& model) {
  // a_1(k) = 2 sin k * Q(cos k) with Q(x) = sum_m m t_m U_{m-1}(x).
  std::vector<double> u(static_cast<std::size_t>(model.range()), 0.0);
  for (int m = 1; m <= model.range(); ++m) {
    u[static_cast<std::size_t>(m - 1)] = m * model.t(m);
  }
  const auto q = cheb::from_second_kind(u);
  std::vector<double> candidates{dispersion(model, 0.0), dispersion(model, kPi)};
  for (const auto& root : cheb::colleague_roots(q)) {
    if (std::abs(root.imag()) <= 1e-6 && std::abs(root.real()) <= 1.0 + 1e-12) {
      candidates.push_back(dispersion(model, std::acos(std::clamp(root.real(), -1.0, 1.0))));
    }
  }
  const auto [lo, hi] = std::minmax_element(candidates.begin(), candidates.end());
  return {*lo, *hi};
}

} // namespace tmep
