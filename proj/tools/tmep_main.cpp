// tmep: command-line front end.
//
//   tmep analyze --model m.json --out dir
//   tmep dos     --model m.json --out dir [--k-step .. --e-step .. --delta ..]
//   tmep design  --n 3 --order 4 --location zone_edge --free t3=0.3
//   tmep sweep   --model m.json --out dir
//   tmep verify  --seed 42
//
// Exit codes: 0 ok, 1 verify or design failure, 2 invalid input, 3 solver
// did not converge. Nothing is written unless every input validates and all
// computations finish.

#include "tmep/critical.hpp"
#include "tmep/designer.hpp"
#include "tmep/dos.hpp"
#include "tmep/errors.hpp"
#include "tmep/io.hpp"
#include "tmep/model.hpp"
#include "tmep/transfer.hpp"
#include "tmep/verify.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using namespace tmep;

namespace {

enum Exit { kOk = 0, kFailed = 1, kInvalid = 2, kNoConvergence = 3 };

struct Files {
  std::vector<std::pair<std::string, std::string>> items;
  void add(std::string name, std::string content) { items.emplace_back(std::move(name), std::move(content)); }
};

void write_all(const fs::path& dir, const Files& files) {
  fs::create_directories(dir);
  for (const auto& [name, content] : files.items) {
    std::ofstream out(dir / name, std::ios::binary);
    out << content;
    if (!out) {
      throw std::runtime_error("cannot write " + (dir / name).string());
    }
  }
}

LatticeModel load_model(const std::string& arg) {
  if (arg.empty()) {
    throw ModelError("--model is required");
  }
  if (arg.front() == '{') {
    return parse_model_json(arg);
  }
  return read_model_file(arg);
}

std::string fmt17(double v) {
  std::ostringstream ss;
  ss.precision(17);
  ss << v;
  return ss.str();
}

ordered_json model_value(const LatticeModel& m) { return ordered_json::parse(model_json(m)); }

struct Common {
  std::string model;
  std::string out = "tmep_out";
};

// ---- analyze / sweep ----

struct SweepOptions {
  int points = 2000;
  double margin = 0.05;
  double unit_tol = kDefaultUnitModulusTol;
  std::string route = "dispersion";
};

std::vector<double> sweep_grid(const LatticeModel& m, const SweepOptions& o) {
  const auto band = band_extent(m);
  const double lo = band.omega_min - o.margin * band.width();
  const double hi = band.omega_max + o.margin * band.width();
  std::vector<double> w(static_cast<std::size_t>(o.points));
  for (int i = 0; i < o.points; ++i) {
    w[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (o.points - 1);
  }
  return w;
}

void validate(const SweepOptions& o) {
  if (o.points < 2) {
    throw DomainError("--points must be >= 2");
  }
  if (!(o.margin >= 0.0)) {
    throw DomainError("--margin must be >= 0");
  }
  if (!(o.unit_tol > 0.0)) {
    throw DomainError("--unit-tol must be positive");
  }
  if (o.route != "dispersion" && o.route != "direct") {
    throw DomainError("--route must be 'dispersion' or 'direct'");
  }
}

std::string eigen_csv(const LatticeModel& m, const std::vector<double>& grid, const SweepOptions& o) {
  std::ostringstream csv;
  write_eigenset_csv_header(csv);
  DispersionRootOptions ro;
  ro.unit_tol = o.unit_tol;
  for (const double w : grid) {
    const auto set = o.route == "direct" ? spectrum_direct(build_transfer(m, w), o.unit_tol) : spectrum_via_dispersion(m, w, ro);
    write_eigenset_csv_rows(csv, set);
  }
  return csv.str();
}

int run_analyze(const Common& c, const SweepOptions& o) {
  validate(o);
  const auto model = load_model(c.model);
  const auto points = find_critical_points(model);
  const auto grid = sweep_grid(model, o);
  const auto band = band_extent(model);

  Files files;
  files.add("critical_points.json", critical_report_json(points) + "\n");

  std::ostringstream disp;
  disp << "k,epsilon\n";
  for (int i = 0; i < o.points; ++i) {
    const double k = -kPi + 2.0 * kPi * (i + 1) / o.points;
    disp << fmt17(k) << ',' << fmt17(dispersion(model, k)) << '\n';
  }
  files.add("dispersion.csv", disp.str());

  std::ostringstream count;
  count << "omega,c\n";
  for (const double w : grid) {
    count << fmt17(w) << ',' << unit_modulus_count(model, w, o.unit_tol) << '\n';
  }
  files.add("unit_count.csv", count.str());
  files.add("eigenvalues.csv", eigen_csv(model, grid, o));

  ordered_json meta;
  meta["model"] = model_value(model);
  meta["band"] = {band.omega_min, band.omega_max};
  meta["critical_energies"] = critical_energies(model);
  ordered_json eps = ordered_json::array();
  for (const double e : critical_energies(model)) {
    for (const auto& ep : ep_orders_at(model, e)) {
      eps.push_back({{"omega0", e}, {"re_z0", ep.z0.real()}, {"im_z0", ep.z0.imag()}, {"order", ep.order}});
    }
    const auto idx = index_from_counts(model, e);
    eps.push_back({{"omega0", e}, {"index_from_counts", idx.index}, {"count_below", idx.count_below},
                   {"count_above", idx.count_above}, {"delta", idx.delta}});
  }
  meta["exceptional_points"] = std::move(eps);
  meta["settings"] = {{"omega_points", o.points},       {"omega_margin", o.margin},
                      {"unit_tol", o.unit_tol},         {"route", o.route},
                      {"classify_tol_rel", ClassifyOptions{}.tol_rel},
                      {"multiplicity_tol", DispersionRootOptions{}.multiplicity_tol}};
  files.add("analyze.json", meta.dump(2) + "\n");

  write_all(c.out, files);
  std::cout << critical_report_json(points) << '\n';
  return kOk;
}

int run_sweep(const Common& c, const SweepOptions& o) {
  validate(o);
  const auto model = load_model(c.model);
  const auto grid = sweep_grid(model, o);
  Files files;
  files.add("eigenvalues.csv", eigen_csv(model, grid, o));
  ordered_json meta;
  meta["model"] = model_value(model);
  meta["settings"] = {{"omega_points", o.points}, {"omega_min", grid.front()}, {"omega_max", grid.back()},
                      {"unit_tol", o.unit_tol},   {"route", o.route}};
  files.add("sweep.json", meta.dump(2) + "\n");
  write_all(c.out, files);
  return kOk;
}

// ---- dos ----

struct DosOptions {
  double k_step = kDefaultKStep;
  double e_step = 0.0;
  double delta = 1e-6;
  double decades = 3.0;
  int samples = 31;
};

int run_dos(const Common& c, const DosOptions& o) {
  if (!(o.k_step > 0.0) || !(o.k_step <= 2.0 * kPi)) {
    throw DomainError("--k-step must lie in (0, 2 pi]");
  }
  if (!(o.e_step >= 0.0)) {
    throw DomainError("--e-step must be positive (0 selects the adaptive rule)");
  }
  if (!(o.delta > 0.0) || !(o.decades > 0.0) || o.samples < 8) {
    throw DomainError("--delta and --decades must be positive and --samples >= 8");
  }
  const auto model = load_model(c.model);
  const auto band = band_extent(model);
  if (!(o.delta * std::pow(10.0, o.decades) < band.width())) {
    throw DomainError("fit window exceeds the bandwidth");
  }

  EStepPolicy policy;
  if (o.e_step > 0.0) {
    policy.min_rel = policy.max_rel = o.e_step / band.width();
  }
  const DispersionSamples samples(model, o.k_step);
  BandCurveOptions bo;
  bo.policy = policy;
  const auto curve = band_curve(model, samples, bo);
  const double total = integrate_band(curve);
  const auto points = find_critical_points(model);

  Files files;
  std::ostringstream csv;
  write_dos_csv(csv, curve);
  files.add("dos.csv", csv.str());

  ordered_json fits = ordered_json::array();
  int index = 0;
  for (const auto& s : curve.critical) {
    for (const Side side : {Side::below, Side::above}) {
      const double alpha = side == Side::below ? s.alpha_below : s.alpha_above;
      const bool edge = (side == Side::below && s.omega <= band.omega_min) || (side == Side::above && s.omega >= band.omega_max);
      if (edge) {
        continue;
      }
      const double dmax = o.delta * std::pow(10.0, o.decades);
      ordered_json f;
      f["omega0"] = s.omega;
      f["side"] = std::string(to_string(side));
      f["expected_exponent"] = -alpha;
      f["window"] = {o.delta, dmax};
      ordered_json orders = ordered_json::array();
      for (const auto& cp : points) {
        if (std::abs(cp.omega0 - s.omega) <= 1e-12 * band.width()) {
          orders.push_back({{"k0", cp.k0}, {"order", cp.order}, {"class", std::string(to_string(cp.kind))}});
        }
      }
      f["critical_points"] = std::move(orders);
      const auto near = near_ep_curve(model, samples, s.omega, side, o.delta, dmax, o.samples, policy);
      const std::string name = "near_" + std::to_string(index) + "_" + std::string(to_string(side)) + ".csv";
      std::ostringstream ncsv;
      write_dos_csv(ncsv, near);
      files.add(name, ncsv.str());
      f["samples_file"] = name;
      try {
        const auto fit = fit_exponent(near, s.omega, side, {o.delta, dmax});
        f["exponent"] = fit.exponent;
        f["prefactor"] = fit.prefactor;
        f["r2"] = fit.r2;
        f["samples"] = fit.samples;
      } catch (const DomainError& e) {
        f["error"] = e.what();
      }
      fits.push_back(std::move(f));
    }
    ++index;
  }

  ordered_json meta;
  meta["model"] = model_value(model);
  meta["grid"] = {{"k_step", curve.grid.k_step},
                  {"k_points", curve.grid.k_points},
                  {"fd_order", curve.grid.fd_order},
                  {"e_step_min", curve.grid.e_step_min},
                  {"e_step_max", curve.grid.e_step_max},
                  {"e_step_rule", o.e_step > 0.0 ? "fixed" : "clamp(fraction*delta, min_rel*W, max_rel*W)"},
                  {"e_step_fraction", policy.fraction},
                  {"e_step_min_rel", policy.min_rel},
                  {"e_step_max_rel", policy.max_rel},
                  {"delta_min_rel", bo.delta_min_rel},
                  {"per_decade", bo.per_decade},
                  {"uniform_per_segment", bo.uniform_per_segment}};
  meta["band"] = {band.omega_min, band.omega_max};
  meta["normalization"] = total;
  meta["fits"] = std::move(fits);
  files.add("dos.json", meta.dump(2) + "\n");

  write_all(c.out, files);
  std::cout << meta["fits"].dump(2) << '\n';
  return kOk;
}

// ---- design ----

struct DesignOptions {
  int n = 3;
  int order = 2;
  std::string location = "zone_center";
  std::vector<std::string> free;
  int count = 0;
  bool all = false;
  bool to_file = false;
};

std::map<int, double> parse_free(const std::vector<std::string>& items) {
  std::map<int, double> out;
  for (const auto& s : items) {
    const auto eq = s.find('=');
    if (eq == std::string::npos || eq < 2 || s[0] != 't') {
      throw DomainError("--free expects tM=value, got '" + s + "'");
    }
    std::size_t used = 0;
    int m = 0;
    double v = 0.0;
    try {
      m = std::stoi(s.substr(1, eq - 1), &used);
      if (used != eq - 1) {
        throw std::invalid_argument(s);
      }
      const std::string value = s.substr(eq + 1);
      v = std::stod(value, &used);
      if (used != value.size()) {
        throw std::invalid_argument(s);
      }
    } catch (const std::logic_error&) {
      throw DomainError("--free expects tM=value, got '" + s + "'");
    }
    out[m] = v;
  }
  return out;
}

int run_design(const Common& c, const DesignOptions& o) {
  const auto loc = parse_location(o.location);
  if (!loc) {
    throw DomainError("--location must be zone_center, zone_edge or interior");
  }
  DesignRequest req;
  req.n = o.n;
  req.order = o.order;
  req.location = *loc;
  req.free_params = parse_free(o.free);

  std::string doc;
  bool ok = true;
  if (o.count > 0) {
    ordered_json arr = ordered_json::array();
    for (const auto& r : hypersurface_sample(o.n, o.order, *loc, o.count)) {
      arr.push_back(ordered_json::parse(design_result_json(r)));
    }
    doc = arr.dump(2);
  } else if (o.all && *loc == Location::interior) {
    ordered_json arr = ordered_json::array();
    for (const auto& r : design_odd_ep_all(req)) {
      arr.push_back(ordered_json::parse(design_result_json(r)));
    }
    ok = !arr.empty();
    doc = arr.dump(2);
  } else {
    const auto r = design(req);
    ok = r.ok();
    doc = design_result_json(r);
  }
  if (o.to_file) {
    Files files;
    files.add("design.json", doc + "\n");
    write_all(c.out, files);
  }
  std::cout << doc << '\n';
  return ok ? kOk : kFailed;
}

// ---- verify ----

struct VerifyCli {
  std::uint64_t seed = 42;
  int models = 200;
  int max_n = 5;
  int spectral = 500;
  int scan = 100000;
  unsigned threads = 1;
  bool corrupt = false;
  bool to_file = false;
};

int run_verify_cmd(const Common& c, const VerifyCli& v) {
  if (v.models < 1 || v.max_n < 1 || v.spectral < 1 || v.scan < 1 || v.threads < 1) {
    throw DomainError("verify sizes must be positive");
  }
  VerifyOptions o;
  o.seed = v.seed;
  o.models = v.models;
  o.max_n = v.max_n;
  o.spectral_samples = v.spectral;
  o.scan_samples = v.scan;
  o.threads = v.threads;
  if (v.corrupt) {
    o.transfer_builder = corrupted_transfer_builder();
  }
  const auto report = run_verify(o);
  const auto doc = verify_report_json(report);
  if (v.to_file) {
    Files files;
    files.add("verify.json", doc + "\n");
    write_all(c.out, files);
  }
  std::cout << doc << '\n';
  for (const auto& chk : report.checks) {
    if (!chk.passed) {
      std::cerr << "FAILED: " << chk.name << " " << chk.detail << '\n';
    }
  }
  return report.passed() ? kOk : kFailed;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Transfer-matrix exceptional points and van Hove singularities of 1D chains"};
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();

  Common common;
  auto add_common = [&](CLI::App* sub, bool model) {
    if (model) {
      sub->add_option("--model", common.model, "Model JSON file, or inline JSON {\"n\":..,\"t\":[..]}")->required();
    }
    sub->add_option("--out", common.out, "Output directory");
  };

  SweepOptions sweep_opts;
  auto add_sweep = [&](CLI::App* sub) {
    sub->add_option("--points", sweep_opts.points, "Number of omega samples");
    sub->add_option("--margin", sweep_opts.margin, "Sweep extends this fraction of the bandwidth past each band edge");
    sub->add_option("--unit-tol", sweep_opts.unit_tol, "Tolerance on ||lambda| - 1|");
  };

  auto* analyze = app.add_subcommand("analyze", "Critical points, EP orders, c(omega) and eigenvalue traces");
  add_common(analyze, true);
  add_sweep(analyze);

  auto* sweep = app.add_subcommand("sweep", "Eigenvalue CSV over an omega sweep");
  add_common(sweep, true);
  add_sweep(sweep);
  sweep->add_option("--route", sweep_opts.route, "dispersion (colleague matrix) or direct (dense eigensolve)");

  DosOptions dos_opts;
  auto* dos = app.add_subcommand("dos", "Density of states, normalization and exponent fits");
  add_common(dos, true);
  dos->add_option("--k-step", dos_opts.k_step, "Momentum grid spacing");
  dos->add_option("--e-step", dos_opts.e_step, "Fixed finite-difference step; 0 uses the adaptive rule");
  dos->add_option("--delta", dos_opts.delta, "Smallest distance to a critical energy in the fit window");
  dos->add_option("--decades", dos_opts.decades, "Fit window width in decades");
  dos->add_option("--samples", dos_opts.samples, "Log-spaced samples per fit window");

  DesignOptions design_opts;
  auto* des = app.add_subcommand("design", "Hoppings (t_1 = 1) with an EP of the requested order");
  add_common(des, false);
  des->add_option("--n", design_opts.n, "Hopping range n");
  des->add_option("--order", design_opts.order, "Target EP order p");
  des->add_option("--location", design_opts.location, "zone_center, zone_edge or interior");
  des->add_option("--free", design_opts.free, "Fix a hopping, e.g. --free t3=0.3 (repeatable)");
  des->add_option("--count", design_opts.count, "Sample this many hypersurface points instead of one design");
  des->add_flag("--all", design_opts.all, "Interior: emit every distinct solution");
  des->add_flag("--write", design_opts.to_file, "Also write design.json into --out");

  VerifyCli verify_opts;
  auto* ver = app.add_subcommand("verify", "Seeded randomized invariant checks");
  add_common(ver, false);
  ver->add_option("--seed", verify_opts.seed, "Random seed");
  ver->add_option("--models", verify_opts.models, "Random models per check");
  ver->add_option("--max-n", verify_opts.max_n, "Largest hopping range of random models");
  ver->add_option("--spectral", verify_opts.spectral, "Random (model, omega) pairs for spectral checks");
  ver->add_option("--scan-samples", verify_opts.scan, "Starts of the order-5 impossibility scan");
  ver->add_option("--threads", verify_opts.threads, "Worker threads (results do not depend on it)");
  ver->add_flag("--write", verify_opts.to_file, "Also write verify.json into --out");
  ver->add_flag("--corrupt-transfer", verify_opts.corrupt, "Test hook: use a transfer matrix with det != 1")->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInvalid;
  }

  try {
    if (analyze->parsed()) {
      return run_analyze(common, sweep_opts);
    }
    if (sweep->parsed()) {
      return run_sweep(common, sweep_opts);
    }
    if (dos->parsed()) {
      return run_dos(common, dos_opts);
    }
    if (des->parsed()) {
      return run_design(common, design_opts);
    }
    if (ver->parsed()) {
      return run_verify_cmd(common, verify_opts);
    }
  } catch (const ModelError& e) {
    std::cerr << "invalid model: " << e.what() << '\n';
    return kInvalid;
  } catch (const DomainError& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kInvalid;
  } catch (const ConvergenceError& e) {
    std::cerr << "no convergence: " << e.what() << '\n';
    return kNoConvergence;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailed;
  }
  return kInvalid;
}
