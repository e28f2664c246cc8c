#pragma once

// Lattice model with finite-range hopping and its band dispersion
//
//   eps(z) = -2 * sum_{m=1..n} t_m cos(m z)
//
// evaluated at real or complex momentum, together with its derivatives
// and the reduction of omega = eps(z) to a degree-n polynomial in x = cos z.
//
// Every function in this header (and in the rest of the library) is a pure
// function of its arguments. Nothing caches or mutates shared state, so all
// of it may be called concurrently from any number of threads.

#include <complex>
#include <span>
#include <utility>
#include <vector>

namespace tmep {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

/// Range-n chain with real hoppings t_1..t_n. Construction validates n >= 1,
/// finite entries and t_n != 0; a constructed model is always valid.
class LatticeModel {
public:
  explicit LatticeModel(std::vector<double> hoppings);

  int range() const noexcept { return static_cast<int>(hoppings_.size()); }

  /// t_m with 1-based m, as in the hopping sum.
  double t(int m) const { return hoppings_.at(static_cast<std::size_t>(m - 1)); }

  std::span<const double> hoppings() const noexcept { return hoppings_; }

  bool operator==(const LatticeModel&) const = default;

private:
  std::vector<double> hoppings_;
};

/// Momentum z, possibly complex. Real parts are kept in the Brillouin zone
/// (-pi, pi]; pi is preferred over -pi on the boundary.
class ComplexMomentum {
public:
  ComplexMomentum() = default;
  explicit ComplexMomentum(Complex z);
  explicit ComplexMomentum(double k) : ComplexMomentum(Complex{k, 0.0}) {}

  Complex value() const noexcept { return z_; }
  double real() const noexcept { return z_.real(); }
  double imag() const noexcept { return z_.imag(); }
  bool is_real(double tol = 0.0) const noexcept { return std::abs(z_.imag()) <= tol; }

private:
  Complex z_{};
};

/// Maps a real momentum into (-pi, pi].
double reduce_to_zone(double k);

Complex dispersion(const LatticeModel& model, Complex z);
double dispersion(const LatticeModel& model, double k);

/// r-th derivative a_r(z0) = -2 sum_m t_m m^r cos(r pi/2 + m z0), r >= 1.
Complex dispersion_derivative(const LatticeModel& model, Complex z0, int r);
double dispersion_derivative(const LatticeModel& model, double k0, int r);

/// 2 * sum_m |t_m| m^r: the natural magnitude of a_r, used to make
/// vanishing tests scale-free.
double derivative_scale(const LatticeModel& model, int r);

/// P(x) = omega + 2 sum_m t_m T_m(x), so that P(cos z) = omega - eps(z).
///
/// The Chebyshev-basis coefficients are the primary representation; the
/// monomial form is derived through exact integer recurrences for T_m and is
/// only well conditioned for small degree.
class DispersionPolynomial {
public:
  DispersionPolynomial(const LatticeModel& model, double omega);

  /// Polynomial given directly in the Chebyshev basis, c[0] + sum c[k] T_k(x).
  explicit DispersionPolynomial(std::vector<double> chebyshev_coefficients);

  int degree() const noexcept { return static_cast<int>(cheb_.size()) - 1; }
  std::span<const double> chebyshev() const noexcept { return cheb_; }
  std::vector<double> monomial() const;

  Complex operator()(Complex x) const;
  double operator()(double x) const;

  /// j-th derivative as a new polynomial (degree drops by j, floor at 0).
  DispersionPolynomial derivative(int j = 1) const;

  /// Sum over |c_k| * max_{|x|<=radius} |T_k^(j)(x)| / j!: a bound on the
  /// size of the j-th Taylor coefficient near the interval.
  double taylor_scale(int j, double radius = 1.0) const;

private:
  std::vector<double> cheb_;
};

DispersionPolynomial dispersion_polynomial(const LatticeModel& model, double omega);

struct BandExtent {
  double omega_min;
  double omega_max;
  double width() const noexcept { return omega_max - omega_min; }
};

/// Extremes of eps(k) over the zone, from the real critical points.
BandExtent band_extent(const LatticeModel& model);

} // namespace tmep
