#include "nearres/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "nearres/counting.hpp"
#include "nearres/csv.hpp"
#include "nearres/rng.hpp"
#include "nearres/solver.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace nearres {

namespace {

constexpr const char* kVersion = "0.1.0";

std::string iso_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

Vec3i parse_vec3(const std::string& s) {
  Vec3i v{};
  char c1, c2;
  std::istringstream in(s);
  if (!(in >> v[0] >> c1 >> v[1] >> c2 >> v[2]) || c1 != ',' || c2 != ',')
    throw std::invalid_argument("--n: expected three comma-separated integers");
  return v;
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream in(s);
  std::string tok;
  while (std::getline(in, tok, ',')) out.push_back(std::strtod(tok.c_str(), nullptr));
  return out;
}

BandwidthMode parse_mode(const std::string& s) {
  if (s == "theorem") return BandwidthMode::theorem;
  if (s == "constant") return BandwidthMode::constant;
  if (s == "zero") return BandwidthMode::zero;
  if (s == "all_pass" || s == "all-pass") return BandwidthMode::all_pass;
  throw std::invalid_argument("--mode: unknown bandwidth mode " + s);
}

// every output carries a manifest with a fixed key order
void write_manifest(const std::string& out_path, const std::string& subcommand,
                    const nlohmann::ordered_json& flags, std::uint64_t seed,
                    const TorusGeometry& geom) {
  nlohmann::ordered_json m;
  m["tool"] = "nearres";
  m["version"] = kVersion;
  m["subcommand"] = subcommand;
  m["flags"] = flags;
  m["seed"] = seed;
  m["geometry"] = {{"l1", geom.l1}, {"l2", geom.l2}};
  m["timestamp"] = iso_timestamp();
  std::ofstream f(out_path + ".manifest.json");
  f << m.dump(2) << "\n";
}

struct CommonFlags {
  std::string l1 = "1";
  std::string l2 = "1";
  int threads = 0;
  std::string config;
};

void add_common(CLI::App* cmd, CommonFlags& cf) {
  cmd->add_option("--l1", cf.l1, "aspect ratio L1 (decimal string)");
  cmd->add_option("--l2", cf.l2, "aspect ratio L2 (decimal string)");
  cmd->add_option("--threads", cf.threads, "worker threads (default: all)");
  cmd->add_option("--config", cf.config, "JSON config mirroring flags (flags win)");
}

void apply_threads(int threads) {
#ifdef _OPENMP
  if (threads > 0) omp_set_num_threads(threads);
#else
  (void)threads;
#endif
}

// Prescan for --config and splice its key/value pairs in front of the
// remaining flags, so explicitly passed flags win.
std::vector<std::string> splice_config(const std::vector<std::string>& args) {
  std::string cfg_path;
  for (std::size_t i = 0; i + 1 < args.size(); ++i)
    if (args[i] == "--config") cfg_path = args[i + 1];
  if (cfg_path.empty()) return args;
  std::ifstream f(cfg_path);
  if (!f) throw std::invalid_argument("config file not found: " + cfg_path);
  nlohmann::json j;
  f >> j;
  std::vector<std::string> out;
  out.push_back(args.empty() ? "" : args[0]);  // subcommand first
  for (auto it = j.begin(); it != j.end(); ++it) {
    out.push_back("--" + it.key());
    if (it->is_string())
      out.push_back(it->get<std::string>());
    else
      out.push_back(it->dump());
  }
  for (std::size_t i = 1; i < args.size(); ++i) out.push_back(args[i]);
  return out;
}

int run_triads(const std::vector<Vec3i>& ns, const CommonFlags& cf, const BandwidthSpec& spec,
               const std::string& mode_str, const std::string& csv_path) {
  const TorusGeometry geom = TorusGeometry::from_strings(cf.l1, cf.l2);
  const auto rows = count_report(ns, geom, spec);
  CsvWriter csv(csv_path, {"n1", "n2", "n3", "norm", "count", "bound", "ratio"});
  for (const auto& r : rows)
    csv.row().col(r.n[0]).col(r.n[1]).col(r.n[2]).col(r.norm).col(r.count).col(r.bound).col(
        r.ratio);
  nlohmann::ordered_json flags;
  flags["mode"] = mode_str;
  flags["c-hat"] = spec.c_hat;
  flags["cap"] = spec.cap;
  flags["const-delta"] = spec.const_delta;
  flags["l1"] = cf.l1;
  flags["l2"] = cf.l2;
  write_manifest(csv_path, "triads", flags, 0, geom);
  return 0;
}

}  // namespace

int dispatch(const std::vector<std::string>& raw_args) {
  CLI::App app{"near-resonance rotating Navier-Stokes toolkit"};
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  // ---- triads ----
  auto* triads = app.add_subcommand("triads", "near-resonant triad counts per wavevector");
  CommonFlags cf_triads;
  add_common(triads, cf_triads);
  std::vector<std::string> triads_n;
  std::string triads_mode = "theorem";
  double triads_chat = 1.0, triads_cap = 0.49, triads_const = 0.0;
  std::string triads_csv = "triads.csv";
  triads->add_option("--n", triads_n, "wavevector n1,n2,n3 (repeatable)")
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll)
      ->required();
  triads->add_option("--mode", triads_mode, "theorem|constant|zero|all_pass");
  triads->add_option("--c-hat", triads_chat, "bandwidth constant");
  triads->add_option("--cap", triads_cap, "bandwidth cap");
  triads->add_option("--const-delta", triads_const, "constant-mode delta");
  triads->add_option("--csv", triads_csv, "output CSV path");

  // ---- count-lower ----
  auto* lower = app.add_subcommand("count-lower", "lower-bound counting families");
  CommonFlags cf_lower;
  add_common(lower, cf_lower);
  std::string lower_variant = "slow-fast";
  long long lower_nmax = 64;
  double lower_delta = 0.01;
  std::string lower_csv = "count_lower.csv";
  lower->add_option("--variant", lower_variant, "slow-fast|fast-fast");
  lower->add_option("--n-max", lower_nmax, "largest N (doubling from 4 or 8)");
  lower->add_option("--delta", lower_delta, "bandwidth");
  lower->add_option("--csv", lower_csv, "output CSV path");

  // ---- volume ----
  auto* vol = app.add_subcommand("volume", "Monte-Carlo sublevel-set volume");
  CommonFlags cf_vol;
  add_common(vol, cf_vol);
  std::string vol_n = "0,0,64";
  double vol_delta = 0.01;
  double vol_samples = 1e7;
  std::uint64_t vol_seed = 3;
  int vol_s1 = 1, vol_s2 = 1;
  std::string vol_csv = "volume.csv";
  vol->add_option("--n", vol_n, "wavevector n1,n2,n3");
  vol->add_option("--delta", vol_delta, "bandwidth");
  vol->add_option("--samples", vol_samples, "sample count (scientific ok)");
  vol->add_option("--seed", vol_seed, "RNG seed");
  vol->add_option("--sigma1", vol_s1, "+1 or -1");
  vol->add_option("--sigma2", vol_s2, "+1 or -1");
  vol->add_option("--csv", vol_csv, "output CSV path");

  // ---- elliptic-check ----
  auto* ell = app.add_subcommand("elliptic-check", "correspondence and elliptic identities");
  CommonFlags cf_ell;
  add_common(ell, cf_ell);
  long long ell_trials = 1000;
  std::uint64_t ell_seed = 1;
  std::string ell_csv = "elliptic_check.csv";
  ell->add_option("--trials", ell_trials, "random angle triples");
  ell->add_option("--seed", ell_seed, "RNG seed");
  ell->add_option("--csv", ell_csv, "output CSV path");

  // ---- jordan-check ----
  auto* jord = app.add_subcommand("jordan-check", "lattice counting vs area+length+|E|");
  CommonFlags cf_jord;
  add_common(jord, cf_jord);
  long long jord_trials = 1000;
  long long jord_adversarial = 50;
  std::uint64_t jord_seed = 5;
  std::string jord_csv = "jordan_check.csv";
  jord->add_option("--trials", jord_trials, "random families");
  jord->add_option("--adversarial", jord_adversarial, "tiny-curve families");
  jord->add_option("--seed", jord_seed, "RNG seed");
  jord->add_option("--csv", jord_csv, "output CSV path");

  // ---- simulate ----
  auto* sim = app.add_subcommand("simulate", "integrate the full or NR system");
  CommonFlags cf_sim;
  add_common(sim, cf_sim);
  std::string sim_system = "nr";
  SimConfig sim_cfg;
  std::string sim_mode = "theorem";
  std::string sim_out = "traj.csv";
  std::string sim_hs = "";
  std::string sim_save_field, sim_load_field;
  sim->add_option("--system", sim_system, "full|nr");
  sim->add_option("--radius", sim_cfg.radius, "truncation radius");
  sim->add_option("--omega", sim_cfg.omega, "rotation rate");
  sim->add_option("--mu", sim_cfg.mu, "viscosity");
  sim->add_option("--dt", sim_cfg.dt, "time step");
  sim->add_option("--t-end", sim_cfg.t_end, "final time");
  sim->add_option("--seed", sim_cfg.seed, "initial-data seed");
  sim->add_option("--record-stride", sim_cfg.record_stride, "steps between records");
  sim->add_option("--mode", sim_mode, "bandwidth mode for the NR system");
  sim->add_option("--c-hat", sim_cfg.spec.c_hat, "bandwidth constant");
  sim->add_option("--cap", sim_cfg.spec.cap, "bandwidth cap");
  sim->add_option("--const-delta", sim_cfg.spec.const_delta, "constant-mode delta");
  sim->add_option("--field-s", sim_cfg.field_s, "initial-data smoothness");
  sim->add_option("--amplitude", sim_cfg.amplitude, "initial-data H^s norm");
  sim->add_option("--hs-list", sim_hs, "extra H^s diagnostics, comma list");
  sim->add_option("--save-field", sim_save_field, "write initial field snapshot");
  sim->add_option("--load-field", sim_load_field, "read initial field snapshot");
  sim->add_option("--out", sim_out, "output CSV path");

  // ---- error-scan ----
  auto* scan = app.add_subcommand("error-scan", "full-vs-NR error over rotation rates");
  CommonFlags cf_scan;
  add_common(scan, cf_scan);
  SimConfig scan_cfg;
  scan_cfg.t_end = 0.5;
  scan_cfg.dt = 5e-4;
  std::string scan_omegas = "10,100,1000";
  double scan_sprime = 0.0;
  std::string scan_out = "error_scan.csv";
  scan->add_option("--omegas", scan_omegas, "comma-separated rotation rates");
  scan->add_option("--radius", scan_cfg.radius, "truncation radius");
  scan->add_option("--mu", scan_cfg.mu, "viscosity");
  scan->add_option("--dt", scan_cfg.dt, "time step");
  scan->add_option("--t-end", scan_cfg.t_end, "final time");
  scan->add_option("--seed", scan_cfg.seed, "initial-data seed");
  scan->add_option("--c-hat", scan_cfg.spec.c_hat, "bandwidth constant");
  scan->add_option("--s-prime", scan_sprime, "error norm order");
  scan->add_option("--field-s", scan_cfg.field_s, "initial-data smoothness");
  scan->add_option("--out", scan_out, "output CSV path");

  // ---- planar-check ----
  auto* planar = app.add_subcommand("planar-check", "planar slice counting bound");
  CommonFlags cf_planar;
  add_common(planar, cf_planar);
  std::string planar_n = "0,312,25";
  double planar_delta = 0.01;
  std::string planar_k3 = "0.5,1.5,2.5";
  double planar_samples = 2e6;
  std::uint64_t planar_seed = 11;
  int planar_s1 = 1, planar_s2 = 1;
  std::string planar_csv = "planar_check.csv";
  planar->add_option("--n", planar_n, "wavevector n1,n2,n3");
  planar->add_option("--delta", planar_delta, "bandwidth");
  planar->add_option("--k3", planar_k3, "comma-separated slice heights");
  planar->add_option("--samples", planar_samples, "area samples per slice");
  planar->add_option("--seed", planar_seed, "RNG seed");
  planar->add_option("--sigma1", planar_s1, "+1 or -1");
  planar->add_option("--sigma2", planar_s2, "+1 or -1");
  planar->add_option("--csv", planar_csv, "output CSV path");

  try {
    std::vector<std::string> args = splice_config(raw_args);
    // CLI11 parses argv-style reversed vectors
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;  // usage problems exit 1, --help exits 0
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }

  try {
    if (triads->parsed()) {
      apply_threads(cf_triads.threads);
      BandwidthSpec spec;
      spec.mode = parse_mode(triads_mode);
      spec.c_hat = triads_chat;
      spec.cap = triads_cap;
      spec.const_delta = triads_const;
      std::vector<Vec3i> ns;
      for (const auto& s : triads_n) ns.push_back(parse_vec3(s));
      return run_triads(ns, cf_triads, spec, triads_mode, triads_csv);
    }

    if (lower->parsed()) {
      apply_threads(cf_lower.threads);
      const bool slow = lower_variant == "slow-fast";
      if (!slow && lower_variant != "fast-fast")
        throw std::invalid_argument("unknown variant " + lower_variant);
      CsvWriter csv(lower_csv, {"variant", "N", "delta", "exact_count", "formula_count",
                                "scaling_expr", "all_members"});
      for (long long N = slow ? 4 : 8; N <= lower_nmax; N *= 2) {
        const LowerBoundResult r = slow ? lower_bound_slow_fast(N, lower_delta)
                                        : lower_bound_fast_fast(N, lower_delta);
        csv.row()
            .col(lower_variant)
            .col(N)
            .col(lower_delta)
            .col(r.exact_count)
            .col(r.formula_count)
            .col(r.scaling_expr)
            .col(static_cast<long long>(r.all_members ? 1 : 0));
      }
      nlohmann::ordered_json flags;
      flags["variant"] = lower_variant;
      flags["n-max"] = lower_nmax;
      flags["delta"] = lower_delta;
      write_manifest(lower_csv, "count-lower", flags, 0, TorusGeometry::unit());
      return 0;
    }

    if (vol->parsed()) {
      apply_threads(cf_vol.threads);
      SublevelProblem prob;
      prob.geom = TorusGeometry::from_strings(cf_vol.l1, cf_vol.l2);
      prob.n = parse_vec3(vol_n);
      prob.sigma1 = vol_s1;
      prob.sigma2 = vol_s2;
      prob.delta = vol_delta;
      const long long samples = static_cast<long long>(vol_samples);
      const McResult r = volume_mc(prob, samples, vol_seed);
      const double bound = theorem_volume_bound(prob);
      CsvWriter csv(vol_csv, {"n1", "n2", "n3", "sigma1", "sigma2", "delta", "samples",
                              "estimate", "std_error", "bound", "ratio"});
      csv.row()
          .col(prob.n[0])
          .col(prob.n[1])
          .col(prob.n[2])
          .col(prob.sigma1)
          .col(prob.sigma2)
          .col(prob.delta)
          .col(r.samples)
          .col(r.estimate)
          .col(r.std_error)
          .col(bound)
          .col(bound > 0.0 ? r.estimate / bound : 0.0);
      nlohmann::ordered_json flags;
      flags["n"] = vol_n;
      flags["delta"] = vol_delta;
      flags["samples"] = vol_samples;
      flags["sigma1"] = vol_s1;
      flags["sigma2"] = vol_s2;
      flags["l1"] = cf_vol.l1;
      flags["l2"] = cf_vol.l2;
      write_manifest(vol_csv, "volume", flags, vol_seed, prob.geom);
      return 0;
    }

    if (ell->parsed()) {
      apply_threads(cf_ell.threads);
      Rng rng(ell_seed);
      double max_first = 0.0, max_second = 0.0, max_root = 0.0, max_b1 = 0.0;
      long long coset_fail = 0;
      for (long long t = 0; t < ell_trials; ++t) {
        const double tn = rng.uniform_in(0.05, M_PI - 0.05);
        const double tk = rng.uniform_in(0.05, M_PI - 0.05);
        const double tm = rng.uniform_in(0.05, M_PI - 0.05);
        const auto res = correspondence_check(tn, tk, tm);
        max_first = std::max(max_first, res.res_first);
        max_second = std::max(max_second, res.res_second);
        if (!res.coset_ok) ++coset_fail;
        // root residuals on admissible triples
        try {
          const double cn = std::cos(tn), ck = std::cos(tk), cm = std::cos(tm);
          const auto roots = lambda_roots(cn, ck, cm, tn, tk, tm);
          for (double lam : roots) {
            const double t1 = 2.0 * lam * std::sin(tk) * std::sin(tn) * cm * cm;
            const double t2 = (lam * lam + 1.0 + 2.0 * lam * cn * ck) * cm * cm -
                              (lam * ck + cn) * (lam * ck + cn);
            const double scale = t1 * t1 + t2 * t2 + 1.0;
            max_root = std::max(max_root, std::abs(t1 * t1 - t2 * t2) / scale);
          }
        } catch (const std::domain_error&) {
          // skipped degenerate draw
        }
      }
      const long long b1_trials = std::min<long long>(ell_trials, 100);
      for (long long t = 0; t < b1_trials; ++t) {
        double v[4];
        for (double& x : v) x = rng.uniform_in(-3.0, 3.0);
        std::sort(v, v + 4, std::greater<double>());
        if (v[0] - v[1] < 0.05 || v[1] - v[2] < 0.05 || v[2] - v[3] < 0.05) {
          --t;
          continue;
        }
        const double y = rng.uniform_in(v[1] + 0.05 * (v[0] - v[1]),
                                        v[1] + 0.95 * (v[0] - v[1]));
        const double lhs = quartic_edge_integral(v[0], v[1], v[2], v[3], y);
        const PiProducts pp = pi_products(v[0], v[1], v[2], v[3]);
        const double g = 2.0 / std::sqrt(pp.il);
        const double ksq = pp.sp / pp.il;
        const double y0 = std::sqrt((v[0] - v[2]) * (y - v[1]) / ((v[0] - v[1]) * (y - v[2])));
        const double rhs = g * elliptic_f(std::asin(y0), std::sqrt(ksq));
        max_b1 = std::max(max_b1, std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)));
      }
      CsvWriter csv(ell_csv, {"check", "trials", "max_residual", "failures"});
      csv.row().col(std::string("first_correspondence")).col(ell_trials).col(max_first).col(0LL);
      csv.row().col(std::string("second_correspondence")).col(ell_trials).col(max_second).col(0LL);
      csv.row().col(std::string("sorting_coset")).col(ell_trials).col(0.0).col(coset_fail);
      csv.row().col(std::string("lambda_root_residual")).col(ell_trials).col(max_root).col(0LL);
      csv.row().col(std::string("edge_substitution")).col(b1_trials).col(max_b1).col(0LL);
      nlohmann::ordered_json flags;
      flags["trials"] = ell_trials;
      write_manifest(ell_csv, "elliptic-check", flags, ell_seed, TorusGeometry::unit());
      return 0;
    }

    if (jord->parsed()) {
      apply_threads(cf_jord.threads);
      CsvWriter csv(jord_csv, {"trial", "kind", "curves", "count", "area", "length",
                               "exceptional", "holds"});
      long long failures = 0;
      for (long long t = 0; t < jord_trials; ++t) {
        const CurveFamily fam = random_curve_family(Rng::mix(jord_seed, t));
        const JordanReport r = jordan_count_check(fam);
        if (!r.holds) ++failures;
        csv.row()
            .col(t)
            .col(std::string("random"))
            .col(static_cast<long long>(fam.curves.size()))
            .col(r.count)
            .col(r.area)
            .col(r.length)
            .col(r.exceptional)
            .col(static_cast<long long>(r.holds ? 1 : 0));
      }
      for (long long t = 0; t < jord_adversarial; ++t) {
        const CurveFamily fam = adversarial_curve_family(Rng::mix(jord_seed ^ 0xadull, t));
        const JordanReport r = jordan_count_check(fam);
        if (!r.holds) ++failures;
        csv.row()
            .col(jord_trials + t)
            .col(std::string("adversarial"))
            .col(static_cast<long long>(fam.curves.size()))
            .col(r.count)
            .col(r.area)
            .col(r.length)
            .col(r.exceptional)
            .col(static_cast<long long>(r.holds ? 1 : 0));
      }
      nlohmann::ordered_json flags;
      flags["trials"] = jord_trials;
      flags["adversarial"] = jord_adversarial;
      write_manifest(jord_csv, "jordan-check", flags, jord_seed, TorusGeometry::unit());
      return failures == 0 ? 0 : 2;
    }

    if (sim->parsed()) {
      apply_threads(cf_sim.threads);
      sim_cfg.geom = TorusGeometry::from_strings(cf_sim.l1, cf_sim.l2);
      sim_cfg.spec.mode = parse_mode(sim_mode);
      if (!sim_hs.empty()) sim_cfg.hs_list = parse_list(sim_hs);
      const SystemKind kind = (sim_system == "full") ? SystemKind::full : SystemKind::nr;
      auto basis = ModeSet::create(sim_cfg.geom, BallRadius::from_double(sim_cfg.radius),
                                   sim_cfg.mode_cap);
      SpectralField U0 = sim_load_field.empty()
                             ? random_field(basis, sim_cfg.field_s, sim_cfg.amplitude,
                                            sim_cfg.seed)
                             : load_field(basis, sim_load_field);
      if (!sim_save_field.empty()) save_field(U0, sim_save_field);
      const Trajectory traj = run(sim_cfg, U0, kind);
      std::vector<std::string> cols = {"t", "l2_sq", "grad_sq"};
      for (double s : sim_cfg.hs_list) cols.push_back("hs_sq_" + format_g17(s));
      cols.push_back("energy_residual");
      CsvWriter csv(sim_out, cols);
      for (const DiagRow& d : traj.diag) {
        auto row = csv.row();
        row.col(d.t).col(d.l2_sq).col(d.grad_sq);
        for (double h : d.hs_sq) row.col(h);
        row.col(d.energy_residual);
      }
      nlohmann::ordered_json flags;
      flags["system"] = sim_system;
      flags["radius"] = sim_cfg.radius;
      flags["omega"] = sim_cfg.omega;
      flags["mu"] = sim_cfg.mu;
      flags["dt"] = sim_cfg.dt;
      flags["t-end"] = sim_cfg.t_end;
      flags["mode"] = sim_mode;
      flags["c-hat"] = sim_cfg.spec.c_hat;
      flags["field-s"] = sim_cfg.field_s;
      flags["amplitude"] = sim_cfg.amplitude;
      flags["record-stride"] = sim_cfg.record_stride;
      flags["l1"] = cf_sim.l1;
      flags["l2"] = cf_sim.l2;
      write_manifest(sim_out, "simulate", flags, sim_cfg.seed, sim_cfg.geom);
      if (traj.blew_up) {
        std::fprintf(stderr, "blow-up detected at t=%.6g (norm exceeded %g x initial)\n",
                     traj.blowup_time, sim_cfg.blowup_factor);
        return 2;
      }
      return 0;
    }

    if (scan->parsed()) {
      apply_threads(cf_scan.threads);
      scan_cfg.geom = TorusGeometry::from_strings(cf_scan.l1, cf_scan.l2);
      scan_cfg.spec.mode = BandwidthMode::theorem;
      const std::vector<double> omegas = parse_list(scan_omegas);
      const ErrorScanResult res = error_scan(scan_cfg, omegas, scan_sprime);
      CsvWriter csv(scan_out, {"omega", "sup_error", "blew_up", "slope"});
      for (const auto& r : res.rows)
        csv.row()
            .col(r.omega)
            .col(r.sup_error)
            .col(static_cast<long long>(r.blew_up ? 1 : 0))
            .col(res.slope);
      nlohmann::ordered_json flags;
      flags["omegas"] = scan_omegas;
      flags["radius"] = scan_cfg.radius;
      flags["mu"] = scan_cfg.mu;
      flags["dt"] = scan_cfg.dt;
      flags["t-end"] = scan_cfg.t_end;
      flags["s-prime"] = scan_sprime;
      flags["c-hat"] = scan_cfg.spec.c_hat;
      write_manifest(scan_out, "error-scan", flags, scan_cfg.seed, scan_cfg.geom);
      return 0;
    }

    if (planar->parsed()) {
      apply_threads(cf_planar.threads);
      SublevelProblem prob;
      prob.geom = TorusGeometry::from_strings(cf_planar.l1, cf_planar.l2);
      prob.n = parse_vec3(planar_n);
      prob.sigma1 = planar_s1;
      prob.sigma2 = planar_s2;
      prob.delta = planar_delta;
      CsvWriter csv(planar_csv, {"k3", "count", "area", "area_se", "bound_term"});
      for (double k3 : parse_list(planar_k3)) {
        const PlanarSliceReport r = planar_slice_check(
            prob, k3, static_cast<long long>(planar_samples), planar_seed);
        csv.row().col(r.k3).col(r.count).col(r.area).col(r.area_se).col(r.bound_term);
      }
      nlohmann::ordered_json flags;
      flags["n"] = planar_n;
      flags["delta"] = planar_delta;
      flags["k3"] = planar_k3;
      flags["samples"] = planar_samples;
      write_manifest(planar_csv, "planar-check", flags, planar_seed, prob.geom);
      return 0;
    }
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::domain_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::out_of_range& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "numeric failure: %s\n", e.what());
    return 2;
  }
  return 1;
}

}  // namespace nearres
