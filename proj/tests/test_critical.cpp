#include "fixtures.hpp"
#include "oracles.hpp"

#include "tmep/critical.hpp"
#include "tmep/designer.hpp"
#include "tmep/errors.hpp"
#include "tmep/transfer.hpp"
#include "tmep/verify.hpp"

#include <doctest.h>

#include <random>

using namespace tmep;

namespace {

LatticeModel negated(const std::vector<double>& t) {
  std::vector<double> m(t);
  for (auto& v : m) {
    v = -v;
  }
  return LatticeModel(m);
}

const CriticalPoint* at(const std::vector<CriticalPoint>& cps, double k) {
  for (const auto& cp : cps) {
    if (std::abs(cp.k0 - k) < 1e-9) {
      return &cp;
    }
  }
  return nullptr;
}

} // namespace

TEST_CASE("critical points of the reference models") {
  const auto c1 = find_critical_points(fx::cosine());
  REQUIRE(c1.size() == 2);
  CHECK(c1[0].k0 == 0.0);
  CHECK(c1[0].order == 2);
  CHECK(c1[0].kind == CriticalClass::minimum);
  CHECK(c1[0].index == 1);
  CHECK(c1[1].k0 == doctest::Approx(kPi));
  CHECK(c1[1].kind == CriticalClass::maximum);
  CHECK(c1[1].index == -1);

  const auto cs = find_critical_points(fx::saddle());
  for (double k : {fx::kStar, -fx::kStar}) {
    const auto* cp = at(cs, k);
    REQUIRE(cp != nullptr);
    CHECK(cp->order == 3);
    CHECK(cp->kind == CriticalClass::saddle);
    CHECK(cp->index == 0);
  }

  const auto c6 = find_critical_points(fx::sextic());
  REQUIRE(c6.size() == 2);
  CHECK(c6[0].order == 2);
  CHECK(c6[0].kind == CriticalClass::minimum);
  CHECK(c6[1].order == 6);
  CHECK(c6[1].kind == CriticalClass::maximum);
  CHECK(c6[1].leading == doctest::Approx(-48.0).epsilon(1e-12));
}

TEST_CASE("classify examples") {
  const auto q = classify(fx::quartic(), kPi);
  CHECK(q.order == 4);
  CHECK(std::abs(q.leading - 21.0) < 1e-8);
  CHECK(q.kind == CriticalClass::minimum);
  CHECK(q.index == 1);
  CHECK(q.omega0 == doctest::Approx(0.75));
  const auto s = classify(fx::sextic(), kPi);
  CHECK(s.order == 6);
  CHECK(std::abs(s.leading + 48.0) < 1e-6);
  CHECK(s.index == -1);
  const auto c = classify(fx::cosine(), 0.0);
  CHECK(c.order == 2);
  CHECK(c.leading == doctest::Approx(2.0));
  CHECK(c.index == 1);
  CHECK_THROWS_AS(classify(fx::cosine(), 1.0), DomainError);
}

TEST_CASE("EP orders at an energy") {
  const auto q = ep_orders_at(fx::quartic(), 0.75);
  REQUIRE(q.size() == 1);
  CHECK(q[0].order == 4);
  CHECK(q[0].z0.real() == doctest::Approx(kPi));

  const auto s = ep_orders_at(fx::saddle(), dispersion(fx::saddle(), fx::kStar));
  REQUIRE(s.size() == 2);
  for (const auto& ep : s) {
    CHECK(ep.order == 3);
    CHECK(std::abs(std::abs(ep.z0.real()) - fx::kStar) < 1e-7);
    CHECK(std::abs(ep.z0.imag()) < 1e-7);
  }
  CHECK(ep_orders_at(fx::cosine(), 1.0).empty());
}

TEST_CASE("index from unit-modulus counts") {
  CHECK(index_from_counts(fx::quartic(), 0.75, 1e-4).index == 1);
  CHECK(index_from_counts(fx::saddle(), dispersion(fx::saddle(), fx::kStar), 1e-4).index == 0);
  CHECK(index_from_counts(fx::sextic(), 4.0 / 3.0, 1e-4).index == -1);
  const auto r = index_from_counts(fx::saddle(), dispersion(fx::saddle(), fx::kStar), 1e-4);
  CHECK(r.count_above == r.count_below);
  CHECK_THROWS_AS(index_from_counts(fx::cosine(), 0.0, -1.0), DomainError);
  const auto d = index_from_counts(fx::quartic(), 0.75);
  CHECK_FALSE(d.intruder);
  CHECK(d.delta > 0.0);
}

TEST_CASE("splitting examples") {
  const double delta = 1e-6;
  const auto c = ep_splitting(fx::cosine(), 0.0, delta);
  CHECK(c.radius == doctest::Approx(std::sqrt(delta)));
  CHECK(c.real_count_above == 2);
  CHECK(c.real_count_below == 0);
  for (const auto z : c.roots_above) {
    CHECK(std::abs(z.imag()) < 1e-15);
    CHECK(std::abs(std::abs(z.real()) - std::sqrt(delta)) < 1e-15);
  }
  for (const auto z : c.roots_below) {
    CHECK(std::abs(z.real()) < 1e-15);
    CHECK(std::abs(std::abs(z.imag()) - std::sqrt(delta)) < 1e-15);
  }

  const auto s = ep_splitting(fx::saddle(), fx::kStar, delta);
  CHECK(s.real_count_above == 1);
  CHECK(s.real_count_below == 1);
  const auto q = ep_splitting(fx::quartic(), kPi, delta);
  CHECK(q.real_count_above == 2);
  CHECK(q.real_count_below == 0);
  const auto x = ep_splitting(fx::sextic(), kPi, delta);
  CHECK(x.real_count_above == 0);
  CHECK(x.real_count_below == 2);
  CHECK_THROWS_AS(ep_splitting(fx::cosine(), 0.0, 0.0), DomainError);
}

TEST_CASE("property: splitting converges to the exact roots") {
  struct Case {
    LatticeModel model;
    double k0;
  };
  const std::vector<Case> cases{{fx::saddle(), fx::kStar}, {fx::quartic(), kPi}, {fx::sextic(), kPi}, {fx::sextic(), 0.0}};
  for (const auto& c : cases) {
    double prev = INFINITY;
    for (double delta : {1e-4, 1e-6, 1e-8}) {
      const auto sp = ep_splitting(c.model, c.k0, delta);
      double worst = 0.0;
      for (const auto& [pred, offset] : {std::pair{sp.roots_above, delta}, std::pair{sp.roots_below, -delta}}) {
        const auto exact = roots_at_offset(c.model, c.k0, offset, sp.order);
        worst = std::max(worst, oracle::match_distance(pred, exact) / sp.radius);
      }
      CAPTURE(c.k0);
      CAPTURE(delta);
      CHECK(worst < prev);
      CHECK(worst < 10.0 * sp.radius + 0.5);
      prev = worst;
    }
  }
}

TEST_CASE("offset roots solve the shifted dispersion relation") {
  // Nearest-neighbour chain: eps(z) + 2 = delta at z = acos(1 - delta/2).
  for (double delta : {1e-4, 1e-6, 1e-8}) {
    const auto z = roots_at_offset(fx::cosine(), 0.0, delta, 2);
    REQUIRE(z.size() == 2);
    const double exact = 2.0 * std::asin(std::sqrt(delta) / 2.0);
    for (const auto r : z) {
      CHECK(std::abs(std::abs(r) - exact) <= 1e-14 * exact);
    }
  }
  const auto far = roots_at_offset(fx::saddle(), fx::kStar, 1e-12, 3);
  for (const auto r : far) {
    CHECK(std::abs(r - fx::kStar) < 0.5);
  }
}

TEST_CASE("odd order with a negative leading derivative") {
  // Negating every hopping flips eps, so the saddle keeps p = 3 with a_3 of the
  // opposite sign. Both sign cases must give a saddle with zero index.
  const auto m = negated(fx::kSaddle);
  const auto cp = classify(m, fx::kStar);
  CHECK(cp.order == 3);
  CHECK(cp.kind == CriticalClass::saddle);
  CHECK(cp.index == 0);
  const auto pos = classify(fx::saddle(), fx::kStar);
  CHECK(cp.leading * pos.leading < 0.0);
  const auto cpm = classify(fx::saddle(), -fx::kStar);
  CHECK(cpm.leading * pos.leading < 0.0);

  CHECK(index_from_counts(m, cp.omega0, 1e-4).index == 0);
  const auto sp = ep_splitting(m, fx::kStar, 1e-6);
  CHECK(sp.real_count_above == 1);
  CHECK(sp.real_count_below == 1);
  for (const auto& [pred, omega] : {std::pair{sp.roots_above, cp.omega0 + 1e-6}, std::pair{sp.roots_below, cp.omega0 - 1e-6}}) {
    const auto exact = roots_near(m, omega, fx::kStar, 3);
    CHECK(oracle::match_distance(pred, exact) < 0.1 * sp.radius);
    // One real root on each side, both in predicted and exact sets.
    const auto real = std::count_if(exact.begin(), exact.end(), [](Complex z) { return std::abs(z.imag()) < 1e-9; });
    CHECK(real == 1);
  }
  const auto eps = ep_orders_at(m, cp.omega0);
  REQUIRE(eps.size() == 2);
  CHECK(eps[0].order == 3);
}

TEST_CASE("property: critical momenta match a brute-force oracle") {
  std::mt19937_64 rng(41);
  for (int i = 0; i < 100; ++i) {
    const auto m = random_model(rng, 1 + i % 5);
    const std::vector<double> t(m.hoppings().begin(), m.hoppings().end());
    const auto ref = oracle::critical_momenta(t);
    const auto got = find_critical_points(m);
    // Every sign change of eps' is a detected critical point.
    for (const double k : ref) {
      CAPTURE(k);
      CHECK(at(got, reduce_to_zone(k)) != nullptr);
    }
    for (const auto& cp : got) {
      CHECK(std::abs(dispersion_derivative(m, cp.k0, 1)) <= 1e-9 * derivative_scale(m, 1));
      CHECK(std::abs(cp.leading) > 0.0);
      const int expected = cp.order % 2 == 0 ? (cp.leading > 0 ? 1 : -1) : 0;
      CHECK(cp.index == expected);
    }
  }
}

TEST_CASE("property: EP order equals critical order, high orders sit at 0 or pi") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const auto m = random_model(rng, 1 + i % 5);
    for (const auto& cp : find_critical_points(m)) {
      const auto eps = ep_orders_at(m, cp.omega0);
      const bool found = std::any_of(eps.begin(), eps.end(), [&](const ExceptionalPoint& e) {
        return std::abs(e.z0.real() - cp.k0) < 1e-6 && std::abs(e.z0.imag()) < 1e-6 && e.order == cp.order;
      });
      CAPTURE(cp.k0);
      CHECK(found);
    }
    const auto band = band_extent(m);
    const auto energies = critical_energies(m);
    const double omega = band.omega_min + band.width() * u(rng);
    const bool near = std::any_of(energies.begin(), energies.end(),
                                  [&](double e) { return std::abs(e - omega) < 1e-6 * band.width(); });
    if (!near) {
      for (const auto& e : ep_orders_at(m, omega)) {
        CHECK_FALSE(e.z0.is_real(1e-9));
      }
    }
  }

  // High orders from designed models sit at the zone centre or edge.
  for (int n = 2; n <= 5; ++n) {
    for (const int p : allowed_orders(n)) {
      if (p <= n) {
        continue;
      }
      for (const auto loc : {Location::zone_center, Location::zone_edge}) {
        const auto r = design(DesignRequest{n, p, loc, {}});
        REQUIRE(r.ok());
        for (const auto& cp : find_critical_points(r.model())) {
          if (cp.order > n) {
            CHECK((std::abs(cp.k0) < 1e-12 || std::abs(cp.k0 - kPi) < 1e-12));
          }
        }
      }
    }
  }
}

TEST_CASE("property: index consistency") {
  std::mt19937_64 rng(43);
  int checked = 0;
  for (int i = 0; i < 100; ++i) {
    const auto m = random_model(rng, 1 + i % 5);
    const auto band = band_extent(m);
    const auto energies = critical_energies(m);
    for (const auto& cp : find_critical_points(m)) {
      const double delta = 1e-4 * band.width();
      const bool crowded = std::any_of(energies.begin(), energies.end(), [&](double e) {
        const double g = std::abs(e - cp.omega0);
        return g > 1e-12 * band.width() && g < 2.0 * delta;
      });
      if (crowded) {
        continue;
      }
      CHECK(index_from_counts(m, cp.omega0, delta).index == cp.index);
      ++checked;
    }
  }
  CHECK(checked > 300);
}
