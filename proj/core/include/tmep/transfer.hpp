#pragma once

// Transfer matrix T(omega) of the range-n chain and its spectrum.
//
// T is the 2n x 2n real companion-like matrix with ones on the subdiagonal
// and first row
//   T[1][j] = -t_{n-j}/t_n   (j < n),   T[1][n] = -omega/t_n,
//   T[1][j] = -t_{j-n}/t_n   (j > n).
// Its eigenvalues are lambda = exp(-i z) for the 2n solutions z of
// omega = eps(z). Two independent routes compute them: a dense eigensolve of
// T, and the roots of the degree-n dispersion polynomial in x = cos z.

#include "tmep/model.hpp"

#include <Eigen/Dense>

#include <iosfwd>
#include <vector>

namespace tmep {

struct TransferMatrix {
  double omega = 0.0;
  Eigen::MatrixXd entries;

  int dimension() const noexcept { return static_cast<int>(entries.rows()); }
};

TransferMatrix build_transfer(const LatticeModel& model, double omega);

struct EigenEntry {
  Complex lambda;
  ComplexMomentum z;
  /// Number of coalesced eigenvalues represented by this entry.
  int multiplicity = 1;
  bool unit_modulus = false;
};

/// Spectrum of T(omega). One entry per distinct eigenvalue; multiplicities
/// add up to 2n.
struct EigenSet {
  double omega = 0.0;
  std::vector<EigenEntry> entries;
  /// Raw root clusters closer than 1e-10 were found (dispersion route only).
  bool ill_conditioned = false;

  int total_multiplicity() const;
  /// All 2n eigenvalues, each repeated by its multiplicity.
  std::vector<Complex> eigenvalues() const;
};

inline constexpr double kDefaultUnitModulusTol = 1e-9;

/// Dense eigensolve of T. z = i log(lambda) on the principal branch. Every
/// entry has multiplicity 1. Throws ConvergenceError when the solver fails or
/// an eigenpair misses the residual bound 1e-8 * ||T||.
EigenSet spectrum_direct(const TransferMatrix& t, double unit_tol = kDefaultUnitModulusTol);

struct DispersionRootOptions {
  /// Relative tolerance on vanishing Taylor coefficients of P when deciding
  /// root multiplicities.
  double multiplicity_tol = 1e-10;
  double unit_tol = kDefaultUnitModulusTol;
};

/// x-roots of P(x) = omega - eps(z) from the colleague matrix, grouped by
/// multiplicity. A root of multiplicity s with |x| < 1 (or off the real
/// segment) gives two entries z = +-arccos(x) of multiplicity s; a root of
/// multiplicity s at x = +1 or -1 gives one entry z = 0 or pi of
/// multiplicity 2s.
EigenSet spectrum_via_dispersion(const LatticeModel& model, double omega, const DispersionRootOptions& options = {});

/// x-root clusters of the dispersion polynomial (with endpoint detection).
struct XRoot {
  Complex x;
  int multiplicity = 1;
  bool at_endpoint = false;
};
std::vector<XRoot> dispersion_roots(const LatticeModel& model, double omega, double multiplicity_tol = 1e-10,
                                    bool* ill_conditioned = nullptr);

/// phi(z) with element j = exp(-i z (n - j + 1)), j = 1..2n.
Eigen::VectorXcd eigenvector(const LatticeModel& model, Complex z);

/// c(omega): number of unit-modulus eigenvalues counted with multiplicity,
/// taken from the dispersion route so that real roots count exactly.
int unit_modulus_count(const LatticeModel& model, double omega, double tol = kDefaultUnitModulusTol);

/// CSV rows: omega,re_lambda,im_lambda,re_z,im_z,multiplicity,unit_modulus.
/// One row per eigenvalue (entries are expanded by multiplicity).
void write_eigenset_csv_header(std::ostream& os);
void write_eigenset_csv_rows(std::ostream& os, const EigenSet& set);

} // namespace tmep
