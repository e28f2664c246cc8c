#include "tmep/verify.hpp"

#include "parallel.hpp"
#include "tmep/critical.hpp"
#include "tmep/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>
#include <tuple>

namespace tmep {

LatticeModel random_model(std::mt19937_64& rng, int n) {
  if (n < 1) {
    throw DomainError("random_model: n must be >= 1");
  }
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> t(static_cast<std::size_t>(n), 1.0);
  for (int m = 2; m <= n; ++m) {
    t[static_cast<std::size_t>(m - 1)] = u(rng);
  }
  if (n > 1) {
    while (std::abs(t.back()) < 0.1) {
      t.back() = u(rng);
    }
  }
  return LatticeModel(std::move(t));
}

std::vector<LatticeModel> random_models(std::uint64_t seed, int count, int max_n) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick(1, max_n);
  std::vector<LatticeModel> out;
  out.reserve(static_cast<std::size_t>(std::max(count, 0)));
  for (int i = 0; i < count; ++i) {
    const int n = pick(rng);
    out.push_back(random_model(rng, n));
  }
  return out;
}

bool VerifyReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

namespace {

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream)};
  std::uint32_t words[2];
  seq.generate(words, words + 2);
  return (static_cast<std::uint64_t>(words[0]) << 32) | words[1];
}

/// One random energy per model, spanning the band +- 20% of its width.
struct SpectralCase {
  LatticeModel model;
  double omega;
};

std::vector<SpectralCase> spectral_cases(const VerifyOptions& o, std::uint64_t stream) {
  const auto models = random_models(derive_seed(o.seed, stream), o.spectral_samples, o.spectral_max_n);
  std::mt19937_64 rng(derive_seed(o.seed, stream + 1000));
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<SpectralCase> out;
  for (const auto& m : models) {
    const auto band = band_extent(m);
    const double w = band.width();
    out.push_back({m, band.omega_min - 0.2 * w + 1.4 * w * u(rng)});
  }
  return out;
}

TransferMatrix make_transfer(const VerifyOptions& o, const LatticeModel& m, double omega) {
  return o.transfer_builder ? o.transfer_builder(m, omega) : build_transfer(m, omega);
}

/// Per-case outcome, merged in index order.
struct Outcome {
  bool failed = false;
  bool skipped = false;
  long long cases = 1;
  double error = 0.0;
  std::string note;
};

CheckResult merge(std::string name, double tolerance, const std::vector<Outcome>& outcomes) {
  CheckResult r;
  r.name = std::move(name);
  r.tolerance = tolerance;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    const auto& o = outcomes[i];
    r.cases += o.cases;
    r.skipped += o.skipped ? 1 : 0;
    r.worst = std::max(r.worst, o.error);
    if (o.failed) {
      ++r.failures;
      if (r.detail.empty()) {
        r.detail = "first failure at case " + std::to_string(i) + (o.note.empty() ? "" : ": " + o.note);
      }
    }
  }
  r.passed = r.failures == 0;
  return r;
}

double circular_gap(double a, double b) { return std::abs(std::remainder(a - b, 2.0 * kPi)); }

/// Greedy pairing: repeatedly match the closest remaining pair. Returns the
/// distance of every matched pair, measured by dist(a, b).
template <class Dist>
std::vector<double> pair_up(const std::vector<Complex>& a, const std::vector<Complex>& b, Dist dist) {
  std::vector<std::tuple<double, std::size_t, std::size_t>> all;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      all.emplace_back(dist(a[i], b[j]), i, j);
    }
  }
  std::sort(all.begin(), all.end());
  std::vector<bool> ua(a.size()), ub(b.size());
  std::vector<double> out(a.size(), std::numeric_limits<double>::infinity());
  for (const auto& [d, i, j] : all) {
    if (!ua[i] && !ub[j]) {
      ua[i] = ub[j] = true;
      out[i] = d;
    }
  }
  return out;
}

double relative_distance(Complex a, Complex b) { return std::abs(a - b) / std::max(1.0, std::abs(a)); }

} // namespace

CheckResult check_ep_order_equivalence(const VerifyOptions& o) {
  const auto models = random_models(derive_seed(o.seed, 1), o.models, o.max_n);
  std::vector<Outcome> out(models.size());
  detail::parallel_for(models.size(), o.threads, [&](std::size_t i) {
    auto& res = out[i];
    try {
      const auto points = find_critical_points(models[i]);
      res.cases = static_cast<long long>(points.size());
      for (const auto& cp : points) {
        const auto eps = ep_orders_at(models[i], cp.omega0);
        const bool match = std::any_of(eps.begin(), eps.end(), [&](const ExceptionalPoint& e) {
          return e.order == cp.order && std::abs(e.z0.imag()) < 1e-6 && circular_gap(e.z0.real(), cp.k0) < 1e-6;
        });
        if (!match) {
          res.failed = true;
          std::ostringstream ss;
          ss << "k0=" << cp.k0 << " order " << cp.order << " has no matching EP";
          res.note = ss.str();
        }
      }
    } catch (const std::exception& e) {
      res.failed = true;
      res.note = e.what();
    }
  });
  return merge("ep_order_equivalence", 0.0, out);
}

CheckResult check_noncritical_has_no_real_ep(const VerifyOptions& o) {
  const auto models = random_models(derive_seed(o.seed, 2), o.models, o.max_n);
  std::vector<double> draws(models.size() * 10);
  std::mt19937_64 rng(derive_seed(o.seed, 1002));
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (auto& d : draws) {
    d = u(rng);
  }
  std::vector<Outcome> out(models.size());
  detail::parallel_for(models.size(), o.threads, [&](std::size_t i) {
    auto& res = out[i];
    try {
      const auto band = band_extent(models[i]);
      const auto energies = critical_energies(models[i]);
      double omega = 0.0;
      bool found = false;
      for (int a = 0; a < 10 && !found; ++a) {
        omega = band.omega_min + band.width() * draws[i * 10 + static_cast<std::size_t>(a)];
        found = std::none_of(energies.begin(), energies.end(),
                             [&](double e) { return std::abs(e - omega) < 1e-6 * band.width(); });
      }
      if (!found) {
        res.skipped = true;
        return;
      }
      for (const auto& e : ep_orders_at(models[i], omega)) {
        if (e.z0.is_real(1e-9)) {
          res.failed = true;
          res.note = "real EP at a non-critical energy";
        }
      }
    } catch (const std::exception& e) {
      res.failed = true;
      res.note = e.what();
    }
  });
  return merge("noncritical_no_real_ep", 0.0, out);
}

CheckResult check_high_order_at_zone_boundary(const VerifyOptions& o) {
  const auto models = random_models(derive_seed(o.seed, 1), o.models, o.max_n);
  std::vector<Outcome> out(models.size());
  detail::parallel_for(models.size(), o.threads, [&](std::size_t i) {
    auto& res = out[i];
    try {
      for (const auto& cp : find_critical_points(models[i])) {
        if (cp.order > models[i].range() && std::abs(std::sin(cp.k0)) > 1e-9) {
          res.failed = true;
          res.note = "order " + std::to_string(cp.order) + " > n away from k = 0, pi";
        }
      }
    } catch (const std::exception& e) {
      res.failed = true;
      res.note = e.what();
    }
  });
  return merge("order_above_n_only_at_zone_boundary", 0.0, out);
}

CheckResult check_index_consistency(const VerifyOptions& o) {
  const auto models = random_models(derive_seed(o.seed, 1), o.models, o.max_n);
  std::vector<Outcome> out(models.size());
  detail::parallel_for(models.size(), o.threads, [&](std::size_t i) {
    auto& res = out[i];
    try {
      const auto band = band_extent(models[i]);
      const double delta = 1e-4 * band.width();
      const auto points = find_critical_points(models[i]);
      res.cases = static_cast<long long>(points.size());
      for (const auto& cp : points) {
        const auto report = index_from_counts(models[i], cp.omega0, delta);
        if (report.intruder) {
          res.skipped = true;
          continue;
        }
        if (report.index != cp.index) {
          res.failed = true;
          res.note = "index " + std::to_string(report.index) + " vs formula " + std::to_string(cp.index);
        }
      }
    } catch (const std::exception& e) {
      res.failed = true;
      res.note = e.what();
    }
  });
  return merge("index_consistency", 0.0, out);
}

CheckResult check_determinant(const VerifyOptions& o) {
  const auto cases = spectral_cases(o, 10);
  std::vector<Outcome> out(cases.size());
  detail::parallel_for(cases.size(), o.threads, [&](std::size_t i) {
    auto& res = out[i];
    const double det = make_transfer(o, cases[i].model, cases[i].omega).entries.determinant();
    res.error = std::abs(det - 1.0);
    res.failed = !(res.error <= o.det_tol);
    if (res.failed) {
      std::ostringstream ss;
      ss.precision(17);
      ss << "det = " << det;
      res.note = ss.str();
    }
  });
  return merge("determinant_is_one", o.det_tol, out);
}

CheckResult check_closure(const VerifyOptions& o) {
  const auto cases = spectral_cases(o, 10);
  std::vector<Outcome> out(cases.size());
  detail::parallel_for(cases.size(), o.threads, [&](std::size_t i) {
    auto& res = out[i];
    try {
      const auto lambdas = spectrum_direct(make_transfer(o, cases[i].model, cases[i].omega)).eigenvalues();
      std::vector<Complex> conj, recip;
      for (const auto l : lambdas) {
        conj.push_back(std::conj(l));
        recip.push_back(1.0 / l);
      }
      for (const auto& image : {conj, recip}) {
        for (const double d : pair_up(image, lambdas, relative_distance)) {
          res.error = std::max(res.error, d);
        }
      }
      res.failed = !(res.error <= o.closure_tol);
    } catch (const std::exception& e) {
      res.failed = true;
      res.note = e.what();
    }
  });
  return merge("conjugate_reciprocal_closure", o.closure_tol, out);
}

CheckResult check_route_agreement(const VerifyOptions& o) {
  const auto cases = spectral_cases(o, 10);
  std::vector<Outcome> out(cases.size());
  detail::parallel_for(cases.size(), o.threads, [&](std::size_t i) {
    auto& res = out[i];
    try {
      const auto& [model, omega] = cases[i];
      const auto via = spectrum_via_dispersion(model, omega);
      const auto lam_via = via.eigenvalues();
      const auto lam_direct = spectrum_direct(make_transfer(o, model, omega)).eigenvalues();
      // Eigenvalues sitting in a near-coalescence are excluded; their spread
      // grows like delta^(1/p) and is covered by the splitting tests.
      std::vector<bool> clustered(lam_via.size(), false);
      for (std::size_t a = 0; a < lam_via.size(); ++a) {
        for (std::size_t b = 0; b < lam_via.size(); ++b) {
          if (a != b && relative_distance(lam_via[a], lam_via[b]) < 1e-3) {
            clustered[a] = true;
          }
        }
      }
      const auto d = pair_up(lam_via, lam_direct, relative_distance);
      bool any_clustered = false;
      for (std::size_t a = 0; a < d.size(); ++a) {
        if (clustered[a]) {
          any_clustered = true;
          continue;
        }
        res.error = std::max(res.error, d[a]);
      }
      res.skipped = any_clustered;
      res.failed = !(res.error <= o.route_tol) || lam_via.size() != lam_direct.size();
    } catch (const std::exception& e) {
      res.failed = true;
      res.note = e.what();
    }
  });
  return merge("dual_route_agreement", o.route_tol, out);
}

CheckResult check_eigenrelation(const VerifyOptions& o) {
  const int per_model = 100;
  const int model_count = std::max(1, o.models / 10);
  const auto models = random_models(derive_seed(o.seed, 20), model_count, o.spectral_max_n);
  std::mt19937_64 rng(derive_seed(o.seed, 1020));
  std::uniform_real_distribution<double> re(-kPi, kPi), im(-1.0, 1.0);
  std::vector<Complex> zs(static_cast<std::size_t>(model_count * per_model));
  for (auto& z : zs) {
    const double a = re(rng);
    z = Complex(a, im(rng));
  }
  std::vector<Outcome> out(models.size());
  detail::parallel_for(models.size(), o.threads, [&](std::size_t i) {
    auto& res = out[i];
    res.cases = per_model;
    const auto& m = models[i];
    const int n = m.range();
    const Eigen::MatrixXcd base = make_transfer(o, m, 0.0).entries.cast<Complex>();
    for (int s = 0; s < per_model; ++s) {
      const Complex z = zs[i * per_model + static_cast<std::size_t>(s)];
      Eigen::MatrixXcd t = base;
      t(0, n - 1) = -dispersion(m, z) / m.t(n);
      const Eigen::VectorXcd phi = eigenvector(m, z);
      const double r = (t * phi - std::exp(Complex(0.0, -1.0) * z) * phi).norm() / (t.norm() * phi.norm());
      res.error = std::max(res.error, r);
    }
    res.failed = !(res.error <= o.eigenrelation_tol);
  });
  return merge("eigenrelation_residual", o.eigenrelation_tol, out);
}

CheckResult check_unit_count_parity(const VerifyOptions& o) {
  const auto cases = spectral_cases(o, 10);
  std::vector<Outcome> out(cases.size());
  detail::parallel_for(cases.size(), o.threads, [&](std::size_t i) {
    const int c = unit_modulus_count(cases[i].model, cases[i].omega);
    out[i].failed = c % 2 != 0;
    out[i].note = "c = " + std::to_string(c);
  });
  return merge("unit_count_even", 0.0, out);
}

CheckResult impossibility_scan(const VerifyOptions& o) {
  const double lo = o.scan_margin;
  const double hi = kPi - o.scan_margin;
  std::mt19937_64 rng(derive_seed(o.seed, 30));
  std::uniform_real_distribution<double> uk(lo, hi), ut(-2.0, 2.0);
  std::vector<std::array<double, 3>> starts(static_cast<std::size_t>(std::max(o.scan_samples, 0)));
  for (auto& s : starts) {
    s[0] = uk(rng);
    s[1] = ut(rng);
    s[2] = ut(rng);
  }
  // a_r(k) for t = (1, t2, t3), r = 1..4, and its Jacobian in (k, t2, t3).
  auto basis = [](int m, int r, double k) { return -2.0 * std::pow(m, r) * std::cos(r * kPi / 2.0 + m * k); };
  auto eval = [&](const Eigen::Vector3d& u, Eigen::Vector4d& f, Eigen::Matrix<double, 4, 3>* j) {
    for (int r = 1; r <= 4; ++r) {
      f(r - 1) = basis(1, r, u(0)) + u(1) * basis(2, r, u(0)) + u(2) * basis(3, r, u(0));
      if (j) {
        (*j)(r - 1, 0) = basis(1, r + 1, u(0)) + u(1) * basis(2, r + 1, u(0)) + u(2) * basis(3, r + 1, u(0));
        (*j)(r - 1, 1) = basis(2, r, u(0));
        (*j)(r - 1, 2) = basis(3, r, u(0));
      }
    }
  };
  auto clamp = [&](Eigen::Vector3d u) {
    u(0) = std::clamp(u(0), lo, hi);
    u(1) = std::clamp(u(1), -2.0, 2.0);
    u(2) = std::clamp(u(2), -2.0, 2.0);
    return u;
  };

  std::vector<double> best(starts.size());
  std::vector<Eigen::Vector3d> where(starts.size());
  detail::parallel_for(starts.size(), o.threads, [&](std::size_t i) {
    Eigen::Vector3d u(starts[i][0], starts[i][1], starts[i][2]);
    Eigen::Vector4d f;
    Eigen::Matrix<double, 4, 3> j;
    eval(u, f, &j);
    for (int it = 0; it < 30; ++it) {
      const Eigen::Vector3d step = j.colPivHouseholderQr().solve(-f);
      double lambda = 1.0;
      bool moved = false;
      while (lambda > 1e-4) {
        const Eigen::Vector3d trial = clamp(u + lambda * step);
        Eigen::Vector4d ft;
        eval(trial, ft, nullptr);
        if (ft.norm() < f.norm()) {
          u = trial;
          moved = true;
          break;
        }
        lambda *= 0.5;
      }
      if (!moved) {
        break;
      }
      eval(u, f, &j);
    }
    best[i] = f.lpNorm<Eigen::Infinity>();
    where[i] = u;
  });

  CheckResult r;
  r.name = "order5_impossibility_scan_n3";
  r.evidence = true;
  r.tolerance = o.scan_threshold;
  r.cases = static_cast<long long>(starts.size());
  const auto it = std::min_element(best.begin(), best.end());
  if (it == best.end()) {
    r.passed = false;
    r.detail = "no samples";
    return r;
  }
  const auto at = where[static_cast<std::size_t>(it - best.begin())];
  r.worst = *it;
  r.passed = *it > o.scan_threshold;
  r.failures = r.passed ? 0 : 1;
  std::ostringstream ss;
  ss.precision(6);
  ss << "evidence, not proof: min max_r|a_r| over r=1..4 is " << *it << " at k0=" << at(0) << " t2=" << at(1)
     << " t3=" << at(2) << " (k0 kept within [" << lo << ", " << hi << "])";
  r.detail = ss.str();
  return r;
}

VerifyReport run_verify(const VerifyOptions& options) {
  VerifyReport report;
  report.options = options;
  report.checks.push_back(check_ep_order_equivalence(options));
  report.checks.push_back(check_noncritical_has_no_real_ep(options));
  report.checks.push_back(check_high_order_at_zone_boundary(options));
  report.checks.push_back(check_index_consistency(options));
  report.checks.push_back(check_determinant(options));
  report.checks.push_back(check_closure(options));
  report.checks.push_back(check_route_agreement(options));
  report.checks.push_back(check_eigenrelation(options));
  report.checks.push_back(check_unit_count_parity(options));
  report.checks.push_back(impossibility_scan(options));
  return report;
}

std::string verify_report_json(const VerifyReport& report) {
  using nlohmann::ordered_json;
  const auto& o = report.options;
  ordered_json j;
  j["passed"] = report.passed();
  j["settings"] = {{"seed", o.seed},
                   {"models", o.models},
                   {"max_n", o.max_n},
                   {"spectral_samples", o.spectral_samples},
                   {"spectral_max_n", o.spectral_max_n},
                   {"scan_samples", o.scan_samples},
                   {"scan_margin", o.scan_margin},
                   {"scan_threshold", o.scan_threshold},
                   {"det_tol", o.det_tol},
                   {"closure_tol", o.closure_tol},
                   {"route_tol", o.route_tol},
                   {"eigenrelation_tol", o.eigenrelation_tol},
                   {"custom_transfer_builder", static_cast<bool>(o.transfer_builder)}};
  ordered_json checks = ordered_json::array();
  for (const auto& c : report.checks) {
    checks.push_back({{"name", c.name},
                      {"passed", c.passed},
                      {"evidence", c.evidence},
                      {"cases", c.cases},
                      {"failures", c.failures},
                      {"skipped", c.skipped},
                      {"worst", c.worst},
                      {"tolerance", c.tolerance},
                      {"detail", c.detail}});
  }
  j["checks"] = std::move(checks);
  return j.dump(2);
}

TransferBuilder corrupted_transfer_builder() {
  return [](const LatticeModel& model, double omega) {
    auto t = build_transfer(model, omega);
    t.entries(0, t.dimension() - 1) *= 1.001;
    return t;
  };
}

} // namespace tmep
