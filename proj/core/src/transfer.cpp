#include "tmep/transfer.hpp"

#include "tmep/chebyshev.hpp"
#include "tmep/errors.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <iomanip>
#include <ostream>

namespace tmep {

int EigenSet::total_multiplicity() const {
  int total = 0;
  for (const auto& e : entries) {
    total += e.multiplicity;
  }
  return total;
}

std::vector<Complex> EigenSet::eigenvalues() const {
  std::vector<Complex> out;
  for (const auto& e : entries) {
    out.insert(out.end(), static_cast<std::size_t>(e.multiplicity), e.lambda);
  }
  return out;
}

TransferMatrix build_transfer(const LatticeModel& model, double omega) {
  const int n = model.range();
  const double tn = model.t(n);
  TransferMatrix tm{omega, Eigen::MatrixXd::Zero(2 * n, 2 * n)};
  auto& a = tm.entries;
  for (int j = 1; j <= 2 * n - 1; ++j) {
    a(j, j - 1) = 1.0;
  }
  for (int j = 1; j <= n - 1; ++j) {
    a(0, j - 1) = -model.t(n - j) / tn;
  }
  a(0, n - 1) = -omega / tn;
  for (int j = n + 1; j <= 2 * n; ++j) {
    a(0, j - 1) = -model.t(j - n) / tn;
  }
  return tm;
}

namespace {

// Eigen's RealSchur default budget.
constexpr int kEigenIterationsPerRow = 40;

bool is_unit(Complex lambda, double tol) { return std::abs(std::abs(lambda) - 1.0) <= tol; }

} // namespace

EigenSet spectrum_direct(const TransferMatrix& t, double unit_tol) {
  Eigen::EigenSolver<Eigen::MatrixXd> solver;
  solver.compute(t.entries, true);
  if (solver.info() != Eigen::Success) {
    throw ConvergenceError("dense eigensolve of the transfer matrix failed",
                           kEigenIterationsPerRow * t.dimension());
  }
  const Eigen::VectorXcd values = solver.eigenvalues();
  const Eigen::MatrixXcd vectors = solver.eigenvectors();
  const Eigen::MatrixXcd tc = t.entries.cast<Complex>();
  const double bound = 1e-8 * t.entries.norm();

  EigenSet set;
  set.omega = t.omega;
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    const Complex lambda = values(i);
    const Eigen::VectorXcd v = vectors.col(i);
    const double residual = (tc * v - lambda * v).norm() / v.norm();
    if (!(residual <= bound)) {
      throw ConvergenceError("transfer-matrix eigenpair residual above 1e-8 * ||T||",
                             kEigenIterationsPerRow * t.dimension());
    }
    const Complex z = Complex{0.0, 1.0} * std::log(lambda);
    set.entries.push_back({lambda, ComplexMomentum(z), 1, is_unit(lambda, unit_tol)});
  }
  return set;
}

std::vector<XRoot> dispersion_roots(const LatticeModel& model, double omega, double multiplicity_tol,
                                    bool* ill_conditioned) {
  const DispersionPolynomial poly(model, omega);
  const auto raw = cheb::colleague_roots(poly.chebyshev());
  cheb::MultiplicityOptions opts;
  opts.taylor_tol = multiplicity_tol;
  opts.check_endpoints = true;
  const auto clusters = cheb::cluster_roots(poly.chebyshev(), raw, opts);
  std::vector<XRoot> out;
  bool crowded = false;
  for (const auto& c : clusters) {
    const bool endpoint = c.center.imag() == 0.0 && std::abs(c.center.real()) == 1.0;
    out.push_back({c.center, c.multiplicity, endpoint});
    crowded = crowded || c.ill_conditioned;
  }
  if (ill_conditioned != nullptr) {
    *ill_conditioned = crowded;
  }
  return out;
}

EigenSet spectrum_via_dispersion(const LatticeModel& model, double omega, const DispersionRootOptions& options) {
  EigenSet set;
  set.omega = omega;
  const auto roots = dispersion_roots(model, omega, options.multiplicity_tol, &set.ill_conditioned);
  const Complex minus_i{0.0, -1.0};
  for (const auto& root : roots) {
    if (root.at_endpoint) {
      const double k = root.x.real() > 0.0 ? 0.0 : kPi;
      const Complex lambda = root.x.real() > 0.0 ? Complex{1.0, 0.0} : Complex{-1.0, 0.0};
      set.entries.push_back({lambda, ComplexMomentum(k), 2 * root.multiplicity, true});
      continue;
    }
    Complex z;
    if (root.x.imag() == 0.0 && std::abs(root.x.real()) < 1.0) {
      z = Complex{std::acos(root.x.real()), 0.0};
    } else {
      z = std::acos(root.x);
    }
    for (const Complex zz : {z, -z}) {
      const Complex lambda = std::exp(minus_i * zz);
      set.entries.push_back({lambda, ComplexMomentum(zz), root.multiplicity, is_unit(lambda, options.unit_tol)});
    }
  }
  return set;
}

Eigen::VectorXcd eigenvector(const LatticeModel& model, Complex z) {
  const int n = model.range();
  Eigen::VectorXcd phi(2 * n);
  const Complex minus_i{0.0, -1.0};
  for (int j = 1; j <= 2 * n; ++j) {
    phi(j - 1) = std::exp(minus_i * z * static_cast<double>(n - j + 1));
  }
  return phi;
}

int unit_modulus_count(const LatticeModel& model, double omega, double tol) {
  if (!(tol > 0.0)) {
    throw DomainError("unit_modulus_count: tol must be positive");
  }
  DispersionRootOptions opts;
  opts.unit_tol = tol;
  int count = 0;
  for (const auto& e : spectrum_via_dispersion(model, omega, opts).entries) {
    if (e.unit_modulus) {
      count += e.multiplicity;
    }
  }
  return count;
}

void write_eigenset_csv_header(std::ostream& os) {
  os << "omega,re_lambda,im_lambda,re_z,im_z,multiplicity,unit_modulus\n";
}

void write_eigenset_csv_rows(std::ostream& os, const EigenSet& set) {
  const auto old = os.precision(17);
  for (const auto& e : set.entries) {
    for (int i = 0; i < e.multiplicity; ++i) {
      os << set.omega << ',' << e.lambda.real() << ',' << e.lambda.imag() << ',' << e.z.real() << ',' << e.z.imag()
         << ',' << e.multiplicity << ',' << (e.unit_modulus ? 1 : 0) << '\n';
    }
  }
  os.precision(old);
}

} // namespace tmep
