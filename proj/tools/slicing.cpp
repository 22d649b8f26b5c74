// slicing: command-line front end for outage tables, single allocations and sweeps.

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "slicing/alloc.hpp"
#include "slicing/exper.hpp"
#include "slicing/outage_table.hpp"
#include "verify.hpp"

using namespace slicing;

namespace {

struct ConfigFlags {
  std::string config;
  std::vector<std::string> sets;
};

void add_config_flags(CLI::App* app, ConfigFlags& flags) {
  app->add_option("--config", flags.config, "key = value scenario file");
  app->add_option("--set", flags.sets, "override one config key (key=value), repeatable");
}

ScenarioConfig resolve_config(const ConfigFlags& flags) {
  ScenarioConfig cfg = flags.config.empty() ? ScenarioConfig{} : load_config(flags.config);
  for (const auto& kv : flags.sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw Error(ErrorKind::invalid_argument, "--set expects key=value, got '" + kv + "'");
    cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
  }
  return cfg;
}

std::vector<double> parse_axis(const std::string& text) {
  return detail::parse_numbers("axis", text);
}

std::string dbm(double mw) { return detail::format_double(mw_to_dbm(mw)); }

void print_powers(const char* name, const PowerVector& p) {
  std::printf("%s_mw", name);
  for (double v : p) std::printf(" %.17g", v);
  std::printf("\n");
}

void print_result(const AllocationResult& r, const ChannelState& ch, double d_u, double d_e) {
  std::printf("algorithm %s\n", std::string(to_string(r.algorithm)).c_str());
  std::printf("scheme %s\n", std::string(to_string(r.sets.scheme)).c_str());
  std::printf("d_u %.17g\nd_e %.17g\n", d_u, d_e);
  std::printf("Gamma_u_db %.17g\nGamma_e_db %.17g\n", snr_per_mw_to_db(ch.Gamma_u),
              snr_per_mw_to_db(ch.Gamma_e));
  std::printf("F_u");
  for (auto f : r.sets.F_u) std::printf(" %zu", f);
  std::printf("\nM_u");
  for (auto m : r.sets.M_u) std::printf(" %zu", m);
  std::printf("\nr_u %.17g\nr_e %.17g\n", r.r_u, r.r_e);
  print_powers("P_e", r.P_e);
  print_powers("P_u", r.P_u);
  print_powers("P_u_sic", r.P_u_sic);
  std::printf("table_pu_dbm %.17g\n", r.table_pu_dbm);
  std::printf("embb_power_dbm %s\n", dbm(r.embb_power_mw).c_str());
  std::printf("urllc_power_dbm %s\n", dbm(r.urllc_power_mw).c_str());
  std::printf("total_power_dbm %s\n", dbm(r.total_power_mw).c_str());
  std::printf("p_u_hat %.17g\np_u_ci %.17g\np_u_trials %llu\n", r.p_u_hat.p_hat,
              r.p_u_hat.ci_halfwidth, static_cast<unsigned long long>(r.p_u_hat.trials));
  std::printf("sic_satisfied %s\n", r.sic_satisfied ? "true" : "false");
  std::printf("bcd_iterations %zu\n", r.iterations);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"URLLC/eMBB slicing: outage tables, power allocation and sweeps"};
  app.require_subcommand(1);

  // table build / table query
  auto* table = app.add_subcommand("table", "build or query outage tables");
  table->require_subcommand(1);

  struct TableFlags {
    double gamma_u_db = 30.0;
    std::size_t F_u = 12;
    std::size_t M_u = 1;
    double r_u = 0.0;  // 0: derived from the default traffic and grid
    std::uint64_t trials = 10'000'000;
    std::uint64_t seed = 1;
    std::string pu_range = "-30:30:1";
    std::string pe_range = "none,-30:30:1";
    unsigned threads = default_threads();
  } tf;
  auto add_table_flags = [&](CLI::App* sub) {
    sub->add_option("--gamma-u-db", tf.gamma_u_db, "mean URLLC SNR [dB]");
    sub->add_option("--fu", tf.F_u, "URLLC frequencies");
    sub->add_option("--mu", tf.M_u, "URLLC mini-slots");
    sub->add_option("--ru", tf.r_u, "URLLC spectral efficiency (default from N_u, F_u, M_u)");
    sub->add_option("--trials", tf.trials, "Monte Carlo trials per cell");
    sub->add_option("--seed", tf.seed, "table seed");
    sub->add_option("--pu-range", tf.pu_range, "P_u axis in dBm, list or lo:hi:step");
    sub->add_option("--pe-range", tf.pe_range, "P_e axis in dBm; 'none' adds the no-interference row");
    sub->add_option("--threads", tf.threads, "worker threads");
  };
  auto table_spec = [&] {
    const double r_u = tf.r_u > 0.0 ? tf.r_u
                                     : spectral_efficiency(TrafficSpec{}.N_u, ResourceGrid{12, 7, 180e3, 1e-3},
                                                           tf.F_u, tf.M_u);
    TableAxes axes{parse_axis(tf.pu_range), parse_axis(tf.pe_range)};
    std::sort(axes.pe_dbm.begin(), axes.pe_dbm.end());
    return std::pair{r_u, axes};
  };

  auto* build = table->add_subcommand("build", "tabulate p_u(P_u, P_e) and save it");
  add_table_flags(build);
  std::string out_path;
  bool binary = false;
  build->add_option("--out", out_path, "output file")->required();
  build->add_flag("--binary", binary, "write the compact binary encoding");

  auto* query = table->add_subcommand("query", "smallest tabulated P_u meeting the outage target");
  add_table_flags(query);
  std::string table_path, pe_text = "none";
  double eps = 1e-5;
  query->add_option("--table", table_path, "table file (default: build the needed row in memory)");
  query->add_option("--pe", pe_text, "interference in dBm or 'none'");
  query->add_option("--eps", eps, "outage target");

  // allocate
  auto* alloc = app.add_subcommand("allocate", "allocate one drop and print the result");
  ConfigFlags alloc_cfg;
  add_config_flags(alloc, alloc_cfg);
  std::string scheme_text = "noma", algo_text = "bcd";
  double d_u = 100.0, d_e = 146.9;
  std::uint64_t alloc_seed = 0;
  std::size_t drop = 0;
  alloc->add_option("--scheme", scheme_text, "noma or oN (OMA with N URLLC frequencies)");
  alloc->add_option("--algo", algo_text, "fea or bcd");
  alloc->add_option("--du", d_u, "URLLC distance [m]");
  alloc->add_option("--de", d_e, "eMBB distance [m]");
  alloc->add_option("--seed", alloc_seed, "seed for all random streams")->required();
  alloc->add_option("--drop", drop, "drop index within the seed");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "run the experiments of a config and write CSVs");
  ConfigFlags sweep_cfg;
  add_config_flags(sweep, sweep_cfg);
  std::string sweep_out;
  std::uint64_t sweep_seed = 0;
  sweep->add_option("--out", sweep_out, "output directory (overrides output_dir)");
  auto* sweep_seed_opt = sweep->add_option("--seed", sweep_seed, "seed (overrides seed)");

  // verify
  auto* ver = app.add_subcommand("verify", "run built-in self-checks");
  std::string suite = "all";
  std::uint64_t verify_seed = 1;
  ver->add_option("--suite", suite, "waterfill, outage or all")
      ->check(CLI::IsMember({"waterfill", "outage", "all"}));
  ver->add_option("--seed", verify_seed, "seed for the random instances");

  CLI11_PARSE(app, argc, argv);

  try {
    if (build->parsed()) {
      const auto [r_u, axes] = table_spec();
      const auto t = build_table(snr_db_to_per_mw(tf.gamma_u_db), tf.F_u, r_u, tf.M_u, axes,
                                 tf.trials, tf.seed, tf.threads);
      save_table(out_path, t, binary ? TableEncoding::binary : TableEncoding::text);
      std::printf("wrote %s (%zu x %zu cells, %llu trials each)\n", out_path.c_str(),
                  t.axis_pe_dbm.size(), t.axis_pu_dbm.size(),
                  static_cast<unsigned long long>(t.trials));
      return 0;
    }
    if (query->parsed()) {
      const double pe_dbm = detail::parse_number("--pe", pe_text);
      const double pe_mw = pe_dbm == kNoInterference ? 0.0 : dbm_to_mw(pe_dbm);
      OutageTable t;
      if (!table_path.empty()) {
        t = load_table(table_path);
      } else {
        auto [r_u, axes] = table_spec();
        OutageTable probe;
        probe.axis_pe_dbm = axes.pe_dbm;
        axes.pe_dbm = {axes.pe_dbm[table_row_for(probe, pe_mw)]};
        t = build_table(snr_db_to_per_mw(tf.gamma_u_db), tf.F_u, r_u, tf.M_u, axes, tf.trials,
                        tf.seed, tf.threads);
      }
      const auto q = min_feasible_power(t, pe_mw, eps);
      std::printf("pu_dbm %s\npe_row_dbm %s\np_hat %.17g\n", detail::format_double(q.pu_dbm).c_str(),
                  detail::format_double(q.pe_row_dbm).c_str(), q.p_hat);
      return 0;
    }
    if (alloc->parsed()) {
      auto cfg = resolve_config(alloc_cfg);
      cfg.seed = alloc_seed;
      cfg.algorithms = {parse_algorithm(algo_text)};
      const auto spec = parse_scheme_spec(scheme_text, cfg.F);
      cfg.validate();
      auto tables = make_table_cache(cfg);
      const auto out = run_drop(cfg, spec, d_u, d_e, drop, tables);
      if (!out.feasible)
        throw Error(ErrorKind::table_exhausted,
                    "no tabulated URLLC power meets epsilon_u for this drop; extend the P_u axis");
      const auto& r = cfg.algorithms.front() == Algorithm::nbcd ? *out.nbcd : *out.nfea;
      print_result(r, drop_channel(cfg, d_u, d_e, drop), d_u, d_e);
      return 0;
    }
    if (sweep->parsed()) {
      auto cfg = resolve_config(sweep_cfg);
      if (!sweep_out.empty()) cfg.output_dir = sweep_out;
      if (*sweep_seed_opt) cfg.seed = sweep_seed;
      const auto summary = run_sweep(cfg);
      for (const auto& f : summary.files) std::printf("wrote %s\n", f.c_str());
      return 0;
    }
    if (ver->parsed()) {
      bool ok = true;
      if (suite == "waterfill" || suite == "all") ok &= verify::waterfill_suite(verify_seed);
      if (suite == "outage" || suite == "all") ok &= verify::outage_suite(verify_seed);
      return ok ? 0 : 1;
    }
  } catch (const Error& e) {
    std::fprintf(stderr, "error %s\n", e.what());
    return 2;
  }
  return 0;
}
