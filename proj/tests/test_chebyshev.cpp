#include "oracles.hpp"

#include "tmep/chebyshev.hpp"
#include "tmep/errors.hpp"
#include "tmep/hessenberg_qr.hpp"

#include <doctest.h>

#include <random>

using namespace tmep;

TEST_CASE("first-kind monomial coefficients") {
  CHECK(cheb::first_kind_monomial(0) == std::vector<std::int64_t>{1});
  CHECK(cheb::first_kind_monomial(1) == std::vector<std::int64_t>{0, 1});
  CHECK(cheb::first_kind_monomial(4) == std::vector<std::int64_t>{1, 0, -8, 0, 8});
  for (int m = 1; m <= 10; ++m) {
    std::vector<double> t(static_cast<std::size_t>(m), 0.0);
    t.back() = 0.5; // 2 * 0.5 * T_m
    const auto ref = oracle::dispersion_monomial(t, 0.0);
    const auto got = cheb::first_kind_monomial(m);
    for (int j = 0; j <= m; ++j) {
      CHECK(static_cast<double>(got[static_cast<std::size_t>(j)]) == doctest::Approx(ref[static_cast<std::size_t>(j)]));
    }
  }
}

TEST_CASE("Clenshaw evaluation matches cos(m z)") {
  const std::vector<double> c{0.3, -1.0, 0.25, 2.0};
  for (double z : {0.1, 1.3, 2.9}) {
    const double ref = 0.3 - std::cos(z) + 0.25 * std::cos(2 * z) + 2.0 * std::cos(3 * z);
    CHECK(cheb::evaluate(c, std::cos(z)) == doctest::Approx(ref).epsilon(1e-14));
  }
}

TEST_CASE("second kind conversion") {
  // sum u_j U_j(cos k) = sum u_j sin((j+1)k)/sin k
  const std::vector<double> u{1.0, -0.4, 0.7};
  const auto c = cheb::from_second_kind(u);
  for (double k : {0.2, 1.1, 2.7}) {
    double ref = 0.0;
    for (std::size_t j = 0; j < u.size(); ++j) {
      ref += u[j] * std::sin((j + 1.0) * k) / std::sin(k);
    }
    CHECK(cheb::evaluate(c, std::cos(k)) == doctest::Approx(ref).epsilon(1e-13));
  }
}

TEST_CASE("Hessenberg QR agrees with a reference eigensolver") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  double worst = 0.0;
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 1 + trial % 12;
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = std::max(0, i - 1); j < n; ++j) {
        h(i, j) = u(rng);
      }
    }
    const auto ours = hessenberg_eigenvalues(h);
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> ref(h.cast<std::complex<double>>(), false);
    std::vector<std::complex<double>> theirs(ref.eigenvalues().data(), ref.eigenvalues().data() + n);
    worst = std::max(worst, oracle::match_distance(ours, theirs) / std::max(1.0, h.norm()));
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("Hessenberg QR reports an exhausted budget") {
  Eigen::MatrixXd h(2, 2);
  h << 0.0, 1.0, -1.0, 0.0;
  CHECK_NOTHROW(hessenberg_eigenvalues(h));
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(6, 6);
  for (int i = 0; i < 6; ++i) {
    g(i, (i + 1) % 6) = 1.0;
    if (i > 0) {
      g(i, i - 1) = 1e-3;
    }
  }
  CHECK_THROWS_AS(hessenberg_eigenvalues(g, 0), ConvergenceError);
  try {
    hessenberg_eigenvalues(g, 1);
  } catch (const ConvergenceError& e) {
    CHECK(e.iteration_budget() == 1);
  }
}

TEST_CASE("colleague roots agree with companion roots") {
  std::mt19937_64 rng(22);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + trial % 8;
    std::vector<double> c(static_cast<std::size_t>(n + 1));
    for (auto& v : c) {
      v = u(rng);
    }
    c.back() = c.back() >= 0 ? c.back() + 0.2 : c.back() - 0.2;
    const auto ours = cheb::colleague_roots(c);
    const auto theirs = oracle::companion_roots(cheb::to_monomial(c));
    double scale = 1.0;
    for (const auto r : theirs) {
      scale = std::max(scale, std::abs(r));
    }
    CHECK(oracle::match_distance(ours, theirs) <= 1e-7 * scale);
  }
}

TEST_CASE("cluster multiplicities") {
  // (x - 0.3)^3 (x + 0.5) in the Chebyshev basis via monomials.
  const std::vector<double> mono{-0.0135, 0.108, -0.18, -0.4, 1.0};
  // monomial -> Chebyshev by solving against first-kind coefficients
  std::vector<double> cheb_c(5, 0.0);
  std::vector<double> rest = mono;
  for (int m = 4; m >= 0; --m) {
    const auto tm = cheb::first_kind_monomial(m);
    const double a = rest[static_cast<std::size_t>(m)] / static_cast<double>(tm.back());
    cheb_c[static_cast<std::size_t>(m)] = a;
    for (int j = 0; j <= m; ++j) {
      rest[static_cast<std::size_t>(j)] -= a * static_cast<double>(tm[static_cast<std::size_t>(j)]);
    }
  }
  const auto clusters = cheb::cluster_roots(cheb_c, cheb::colleague_roots(cheb_c));
  REQUIRE(clusters.size() == 2);
  int total = 0;
  for (const auto& cl : clusters) {
    total += cl.multiplicity;
    if (std::abs(cl.center - 0.3) < 1e-6) {
      CHECK(cl.multiplicity == 3);
      CHECK(std::abs(cl.center - 0.3) < 1e-12);
    } else {
      CHECK(cl.multiplicity == 1);
      CHECK(std::abs(cl.center + 0.5) < 1e-12);
    }
  }
  CHECK(total == 4);
}
