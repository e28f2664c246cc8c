#pragma once

// Polynomials in the Chebyshev basis: c[0] T_0(x) + c[1] T_1(x) + ... + c[n] T_n(x).

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

namespace tmep::cheb {

using Complex = std::complex<double>;

/// Monomial coefficients of T_m, lowest power first, from the exact
/// recurrence T_{m+1} = 2x T_m - T_{m-1}. Exact for m <= 62.
std::vector<std::int64_t> first_kind_monomial(int m);

std::vector<double> to_monomial(std::span<const double> c);

/// Clenshaw evaluation.
Complex evaluate(std::span<const double> c, Complex x);
double evaluate(std::span<const double> c, double x);

/// Chebyshev coefficients of the derivative d/dx.
std::vector<double> derivative(std::span<const double> c);

/// Converts sum u[j] U_j(x) (second kind) to the first-kind basis.
std::vector<double> from_second_kind(std::span<const double> u);

/// |T_m^(j)(r)| for r >= 1, the maximum of |T_m^(j)| over |x| <= r.
double first_kind_derivative_bound(int m, int j, double r);

/// Sum_m |c_m| |T_m^(j)(radius)| / j!, the size the j-th Taylor coefficient
/// takes at a generic point with |x| <= radius.
double taylor_scale(std::span<const double> c, int j, double radius = 1.0);

/// Colleague matrix (transposed to upper Hessenberg form) whose eigenvalues
/// are the roots of the polynomial. Requires a nonzero leading coefficient.
std::vector<Complex> colleague_roots(std::span<const double> c, int max_iterations = 60);

/// A root of multiplicity `multiplicity` at `center`.
struct RootCluster {
  Complex center;
  int multiplicity = 1;
  /// Two members of the raw eigenvalue cluster were closer than 1e-10.
  bool ill_conditioned = false;
};

struct MultiplicityOptions {
  /// Relative tolerance on the Taylor coefficients p^(j)(c)/j! at a cluster
  /// center; the scale is the size those coefficients would have for a
  /// generic point of the interval.
  double taylor_tol = 1e-10;
  /// Raw roots further than this (times 1 + |c|) from a candidate center are
  /// never merged into it.
  double merge_radius = 1e-2;
  /// Also test the interval endpoints x = +1 and x = -1 directly.
  bool check_endpoints = false;
};

/// Groups raw roots into clusters with multiplicities. A cluster of size s
/// is accepted when a point c exists (a simple root of p^(s-1) near the
/// members) at which p, p', ..., p^(s-1) all vanish to tolerance; the
/// scattered eigenvalues are replaced by c. Singletons are Newton-polished.
/// Real-coefficient symmetry is restored: centers within rounding of the
/// real axis are made real.
std::vector<RootCluster> cluster_roots(std::span<const double> c, std::span<const Complex> roots,
                                       const MultiplicityOptions& options = {});

} // namespace tmep::cheb
