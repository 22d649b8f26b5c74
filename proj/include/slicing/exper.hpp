#pragma once

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "alloc.hpp"
#include "channel.hpp"
#include "error.hpp"
#include "grid.hpp"
#include "outage_table.hpp"
#include "parallel.hpp"
#include "rng.hpp"
#include "units.hpp"

namespace slicing {

/// An access configuration compared in the sweeps: NOMA over the whole band
/// or OMA with F_u reserved frequencies ("o3", "o6", ...). For NOMA, F_u
/// always follows the grid width.
struct SchemeSpec {
  Scheme scheme = Scheme::noma;
  std::size_t F_u = 12;

  std::string label() const {
    return scheme == Scheme::noma ? "NOMA" : "O-" + std::to_string(F_u);
  }
  bool operator==(const SchemeSpec&) const = default;
};

inline SchemeSpec parse_scheme_spec(const std::string& text, std::size_t F) {
  if (text == "noma" || text == "NOMA") return {Scheme::noma, F};
  std::string digits;
  if (text.size() > 1 && (text[0] == 'o' || text[0] == 'O')) digits = text.substr(1);
  if (digits.size() > 1 && digits[0] == '-') digits = digits.substr(1);
  if (!digits.empty() && std::all_of(digits.begin(), digits.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
    const auto n = static_cast<std::size_t>(std::stoul(digits));
    if (n >= 1 && n < F) return {Scheme::oma, n};
  }
  throw Error(ErrorKind::invalid_argument,
              "unknown scheme '" + text + "' (use noma or oN with 1 <= N < F)");
}

// ---------------------------------------------------------------------------
// Configuration

struct ScenarioConfig {
  std::size_t F = 12;
  std::size_t M = 7;
  double T = 1e-3;
  double delta_f = 180e3;
  TrafficSpec traffic{};
  std::size_t M_u = 1;
  Geometry geometry{};

  std::vector<SchemeSpec> schemes{{Scheme::noma, 12}, {Scheme::oma, 3}, {Scheme::oma, 6},
                                  {Scheme::oma, 9}};
  std::vector<Algorithm> algorithms{Algorithm::nfea, Algorithm::nbcd};
  std::vector<std::string> experiments{"du_sweep", "table1", "sic_vs_de", "outage_curves"};

  std::vector<double> d_u = dbm_axis(10.0, 250.0, 10.0);  // [m]
  std::vector<double> d_e{146.9, 261.2, 26.1};             // [m]
  std::vector<double> table1_gamma_e_db{30, 40, 50, 60, 70, 80};
  std::vector<double> sic_d_e = dbm_axis(20.0, 460.0, 20.0);
  double curve_gamma_u_db = 30.0;
  std::vector<std::size_t> curve_M_u{1, 2, 4, 7};
  std::vector<double> curve_pe_dbm{kNoInterference, 0.0};

  std::size_t drops = 2000;
  std::uint64_t seed = 1;
  std::uint64_t table_trials = 10'000'000;
  std::uint64_t table_seed = 1;
  std::size_t crn_trials = 1'000'000;
  std::uint64_t evidence_trials = 1'000'000;
  double bcd_tau_mw = 1e-7;
  double bcd_mu0_fraction = 0.1;
  std::vector<std::string> tables;
  bool auto_build_tables = true;
  std::string output_dir = ".";
  unsigned threads = default_threads();

  ResourceGrid grid() const { return {F, M, delta_f, T}; }

  Scenario scenario(const SchemeSpec& s) const {
    Scenario sc{grid(), traffic, s.scheme, s.scheme == Scheme::noma ? F : s.F_u, M_u};
    sc.validate();
    return sc;
  }

  void validate() const {
    traffic.validate(grid());
    geometry.validate();
    require(M_u >= 1, "M_u must be at least 1");
    for (const auto& s : schemes) require(s.F_u >= 1 && s.F_u <= F, "F_u must lie in [1, F]");
    for (double d : d_u) require(d >= geometry.d0_m, "d_u entries must be at least d0");
    for (double d : d_e) require(d >= geometry.d0_m, "d_e entries must be at least d0");
    for (double d : sic_d_e) require(d >= geometry.d0_m, "sic_d_e entries must be at least d0");
    require(drops >= 1, "drops must be at least 1");
    require(table_trials >= 1 && crn_trials >= 1 && evidence_trials >= 1, "trial counts must be positive");
  }

  void set(const std::string& key, const std::string& value);
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

/// Number, "a/b" fraction, or "none" (no interference).
inline double parse_number(const std::string& key, const std::string& text) {
  if (text == "none" || text == "-inf") return kNoInterference;
  const auto slash = text.find('/');
  if (slash != std::string::npos)
    return parse_number(key, text.substr(0, slash)) / parse_number(key, text.substr(slash + 1));
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size())
    throw Error(ErrorKind::invalid_argument, "bad number '" + text + "' for " + key);
  return v;
}

inline std::uint64_t parse_count(const std::string& key, const std::string& text) {
  const double v = parse_number(key, text);
  if (!(v >= 0.0) || v != std::floor(v) || v > 1.8e19)
    throw Error(ErrorKind::invalid_argument, key + " must be a nonnegative integer");
  return static_cast<std::uint64_t>(v);
}

/// Comma list; each entry may be a range lo:hi:step.
inline std::vector<double> parse_numbers(const std::string& key, const std::string& text) {
  std::vector<double> out;
  for (const auto& item : split(text, ',')) {
    const auto parts = split(item, ':');
    if (parts.size() == 3) {
      const auto r = dbm_axis(parse_number(key, parts[0]), parse_number(key, parts[1]),
                              parse_number(key, parts[2]));
      out.insert(out.end(), r.begin(), r.end());
    } else if (parts.size() == 1) {
      out.push_back(parse_number(key, parts[0]));
    } else {
      throw Error(ErrorKind::invalid_argument, "bad list entry '" + item + "' for " + key);
    }
  }
  return out;
}

inline bool parse_bool(const std::string& key, const std::string& text) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw Error(ErrorKind::invalid_argument, key + " must be true or false");
}

}  // namespace detail

inline void ScenarioConfig::set(const std::string& key, const std::string& raw) {
  using namespace detail;
  const std::string value = trim(raw);
  auto distances_from_gamma = [&](const std::string& k) {
    std::vector<double> out;
    for (double db : parse_numbers(k, value))
      out.push_back(distance_from_mean_snr(snr_db_to_per_mw(db), geometry, geometry.sigma2_mw()));
    return out;
  };

  if (key == "F") F = parse_count(key, value);
  else if (key == "M") M = parse_count(key, value);
  else if (key == "T") T = parse_number(key, value);
  else if (key == "delta_f") delta_f = parse_number(key, value);
  else if (key == "N_e") traffic.N_e = parse_number(key, value);
  else if (key == "N_u") traffic.N_u = parse_number(key, value);
  else if (key == "epsilon_u") traffic.epsilon_u = parse_number(key, value);
  else if (key == "M_u") M_u = parse_count(key, value);
  else if (key == "M_u_max") traffic.M_u_max = parse_count(key, value);
  else if (key == "W_u") traffic.W_u = parse_count(key, value);
  else if (key == "gain_db") geometry.gain_db = parse_number(key, value);
  else if (key == "f0") geometry.f0_hz = parse_number(key, value);
  else if (key == "d0") geometry.d0_m = parse_number(key, value);
  else if (key == "alpha") geometry.alpha = parse_number(key, value);
  else if (key == "cell_radius") geometry.cell_radius_m = parse_number(key, value);
  else if (key == "sigma2_dbm") geometry.sigma2_dbm = parse_number(key, value);
  else if (key == "schemes") {
    schemes.clear();
    for (const auto& s : split(value, ',')) schemes.push_back(parse_scheme_spec(s, F));
  } else if (key == "algorithms") {
    algorithms.clear();
    for (const auto& a : split(value, ',')) algorithms.push_back(parse_algorithm(a));
  } else if (key == "experiments") {
    experiments = split(value, ',');
    for (const auto& e : experiments)
      if (e != "du_sweep" && e != "table1" && e != "sic_vs_de" && e != "outage_curves")
        throw Error(ErrorKind::invalid_argument, "unknown experiment '" + e + "'");
  } else if (key == "d_u") d_u = parse_numbers(key, value);
  else if (key == "gamma_u_db") d_u = distances_from_gamma(key);
  else if (key == "d_e") d_e = parse_numbers(key, value);
  else if (key == "gamma_e_db") d_e = distances_from_gamma(key);
  else if (key == "table1_gamma_e_db") table1_gamma_e_db = parse_numbers(key, value);
  else if (key == "sic_d_e") sic_d_e = parse_numbers(key, value);
  else if (key == "curve_gamma_u_db") curve_gamma_u_db = parse_number(key, value);
  else if (key == "curve_M_u") {
    curve_M_u.clear();
    for (const auto& s : split(value, ',')) curve_M_u.push_back(parse_count(key, s));
  } else if (key == "curve_pe_dbm") curve_pe_dbm = parse_numbers(key, value);
  else if (key == "drops") drops = parse_count(key, value);
  else if (key == "seed") seed = parse_count(key, value);
  else if (key == "table_trials") table_trials = parse_count(key, value);
  else if (key == "table_seed") table_seed = parse_count(key, value);
  else if (key == "crn_trials") crn_trials = parse_count(key, value);
  else if (key == "evidence_trials") evidence_trials = parse_count(key, value);
  else if (key == "bcd_tau") bcd_tau_mw = parse_number(key, value);
  else if (key == "bcd_mu0_fraction") bcd_mu0_fraction = parse_number(key, value);
  else if (key == "tables") tables = split(value, ',');
  else if (key == "auto_build_tables") auto_build_tables = parse_bool(key, value);
  else if (key == "output_dir") output_dir = value;
  else if (key == "threads") threads = static_cast<unsigned>(std::max<std::uint64_t>(1, parse_count(key, value)));
  else throw Error(ErrorKind::invalid_argument, "unknown config key '" + key + "'");
}

/// Applies "key = value" lines; '#' starts a comment. Later lines win.
inline void apply_config_text(ScenarioConfig& cfg, std::istream& is) {
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw Error(ErrorKind::invalid_argument,
                  "config line " + std::to_string(lineno) + ": expected key = value");
    cfg.set(detail::trim(line.substr(0, eq)), line.substr(eq + 1));
  }
}

inline ScenarioConfig load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw Error(ErrorKind::io, "cannot open config '" + path + "'");
  ScenarioConfig cfg;
  apply_config_text(cfg, is);
  return cfg;
}

// ---------------------------------------------------------------------------
// Drops

/// Per-drop eMBB channel; depends on (seed, d_e, drop) only, so every scheme
/// and every d_u sees the same eMBB realization.
inline std::vector<double> drop_gamma_e(const ScenarioConfig& cfg, double d_e, std::size_t drop) {
  const double Gamma_e = mean_snr_from_distance(d_e, cfg.geometry, cfg.geometry.sigma2_mw());
  return sample_snr(Gamma_e, cfg.F,
                    derive_seed(cfg.seed, {stream_tag("gamma-e"), std::bit_cast<std::uint64_t>(d_e),
                                           static_cast<std::uint64_t>(drop)}));
}

inline ChannelState drop_channel(const ScenarioConfig& cfg, double d_u, double d_e,
                                 std::size_t drop) {
  ChannelState ch;
  ch.sigma2_mw = cfg.geometry.sigma2_mw();
  ch.Gamma_e = mean_snr_from_distance(d_e, cfg.geometry, ch.sigma2_mw);
  ch.Gamma_u = mean_snr_from_distance(d_u, cfg.geometry, ch.sigma2_mw);
  ch.gamma_e = drop_gamma_e(cfg, d_e, drop);
  return ch;
}

inline TableSettings table_settings(const ScenarioConfig& cfg) {
  TableSettings s;
  s.trials = cfg.table_trials;
  s.seed = cfg.table_seed;
  s.auto_build = cfg.auto_build_tables;
  return s;
}

inline TableCache make_table_cache(const ScenarioConfig& cfg) {
  std::vector<OutageTable> loaded;
  for (const auto& path : cfg.tables) loaded.push_back(load_table(path));
  return TableCache(table_settings(cfg), std::move(loaded));
}

struct DropOutcome {
  bool feasible = false;      // false when the table cannot reach epsilon_u
  double embb_mw = 0.0;
  double sic_mw = 0.0;        // sum of P_u^SIC over F_u
  std::optional<double> il_mw;  // undefined when no URLLC frequency is interfered
  std::optional<AllocationResult> nfea;
  std::optional<AllocationResult> nbcd;
};

inline DropOutcome run_drop(const ScenarioConfig& cfg, const SchemeSpec& spec, double d_u,
                            double d_e, std::size_t drop, TableCache& tables) {
  const auto sc = cfg.scenario(spec);
  const auto ch = drop_channel(cfg, d_u, d_e, drop);
  const auto st = solve_embb_stage(sc, ch.gamma_e);
  DropOutcome out;
  out.embb_mw = static_cast<double>(sc.grid.minislots()) * st.P_e.total();
  out.sic_mw = st.P_u_sic.total_on(st.sets.F_u);
  try {
    out.il_mw = il_power(st.P_e, st.r_u, st.sets.F_u).total_on(st.sets.F_u);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::undefined_interference_limited) throw;
  }

  const bool with_bcd =
      std::find(cfg.algorithms.begin(), cfg.algorithms.end(), Algorithm::nbcd) != cfg.algorithms.end();
  const auto key = [&](const char* tag) {
    return derive_seed(cfg.seed, {stream_tag(tag), std::bit_cast<std::uint64_t>(d_u),
                                  std::bit_cast<std::uint64_t>(d_e), static_cast<std::uint64_t>(drop)});
  };
  AllocateOptions opt;
  opt.bcd.tau_mw = cfg.bcd_tau_mw;
  opt.bcd.mu0_fraction = cfg.bcd_mu0_fraction;
  opt.bcd.crn_trials = cfg.crn_trials;
  opt.bcd.crn_seed = key("crn");
  opt.evidence_trials = cfg.evidence_trials;
  opt.evidence_seed = key("evidence");
  try {
    auto both = allocate_both(sc, ch, tables, with_bcd, opt);
    out.nfea = std::move(both.nfea);
    out.nbcd = std::move(both.nbcd);
    out.feasible = true;
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::table_exhausted) throw;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Sweeps

/// Averages for one (scheme, algorithm, d_u, d_e) point. Powers are linear
/// means reported in dBm.
struct SweepRecord {
  std::string scheme;
  std::string algorithm;
  double d_u = 0.0;
  double d_e = 0.0;
  double mean_total_dbm = 0.0;
  double mean_urllc_dbm = 0.0;
  double mean_embb_dbm = 0.0;
  double mean_p_u = 0.0;
  double mean_sic_dbm = 0.0;
  double mean_il_dbm = 0.0;  // NaN when undefined on every drop
  std::size_t drops = 0;
  std::size_t infeasible_drops = 0;
};

inline constexpr const char* kSweepHeader =
    "scheme,algorithm,d_u,d_e,mean_total_dbm,mean_urllc_dbm,mean_embb_dbm,mean_p_u,"
    "mean_sic_dbm,mean_il_dbm,drops,infeasible_drops";

namespace detail {

inline std::string fmt(double v) {
  if (std::isnan(v)) return "";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

}  // namespace detail

inline std::string to_csv_row(const SweepRecord& r) {
  using detail::fmt;
  return r.scheme + "," + r.algorithm + "," + fmt(r.d_u) + "," + fmt(r.d_e) + "," +
         fmt(r.mean_total_dbm) + "," + fmt(r.mean_urllc_dbm) + "," + fmt(r.mean_embb_dbm) + "," +
         fmt(r.mean_p_u) + "," + fmt(r.mean_sic_dbm) + "," + fmt(r.mean_il_dbm) + "," +
         std::to_string(r.drops) + "," + std::to_string(r.infeasible_drops);
}

/// All drops of one point, one record per requested algorithm.
inline std::vector<SweepRecord> run_point(const ScenarioConfig& cfg, const SchemeSpec& spec,
                                          double d_u, double d_e, TableCache& tables) {
  std::vector<DropOutcome> drops(cfg.drops);
  parallel_for(
      cfg.drops, [&](std::size_t i) { drops[i] = run_drop(cfg, spec, d_u, d_e, i, tables); },
      cfg.threads);

  double embb = 0.0, sic = 0.0, il = 0.0;
  std::size_t il_count = 0, feasible = 0;
  for (const auto& d : drops) {
    embb += d.embb_mw;
    sic += d.sic_mw;
    if (d.il_mw) {
      il += *d.il_mw;
      ++il_count;
    }
    if (d.feasible) ++feasible;
  }
  const double n = static_cast<double>(drops.size());

  std::vector<SweepRecord> out;
  for (Algorithm a : cfg.algorithms) {
    SweepRecord r;
    r.scheme = spec.label();
    r.algorithm = std::string(to_string(a));
    r.d_u = d_u;
    r.d_e = d_e;
    r.drops = drops.size();
    r.infeasible_drops = drops.size() - feasible;
    r.mean_embb_dbm = mw_to_dbm(embb / n);
    r.mean_sic_dbm = mw_to_dbm(sic / n);
    r.mean_il_dbm = il_count ? mw_to_dbm(il / static_cast<double>(il_count)) : std::nan("");
    double total = 0.0, urllc = 0.0, p = 0.0;
    for (const auto& d : drops) {
      if (!d.feasible) continue;
      const auto& res = a == Algorithm::nbcd ? *d.nbcd : *d.nfea;
      total += res.total_power_mw;
      urllc += res.urllc_power_mw;
      p += res.p_u_hat.p_hat;
    }
    const double m = static_cast<double>(std::max<std::size_t>(feasible, 1));
    r.mean_total_dbm = feasible ? mw_to_dbm(total / m) : std::nan("");
    r.mean_urllc_dbm = feasible ? mw_to_dbm(urllc / m) : std::nan("");
    r.mean_p_u = feasible ? p / m : std::nan("");
    out.push_back(std::move(r));
  }
  return out;
}

struct Table1Record {
  double gamma_e_db = 0.0;
  double d_e = 0.0;
  std::string scheme;
  double mean_embb_dbm = 0.0;
  std::size_t drops = 0;
};

/// Mean eMBB power per scheme at one mean eMBB SNR.
inline std::vector<Table1Record> run_table1_row(const ScenarioConfig& cfg, double gamma_e_db) {
  const double Gamma_e = snr_db_to_per_mw(gamma_e_db);
  const double d_e = distance_from_mean_snr(Gamma_e, cfg.geometry, cfg.geometry.sigma2_mw());
  std::vector<Table1Record> out;
  for (const auto& spec : cfg.schemes) {
    const auto sc = cfg.scenario(spec);
    std::vector<double> power(cfg.drops);
    parallel_for(
        cfg.drops,
        [&](std::size_t i) {
          const auto st = solve_embb_stage(sc, drop_gamma_e(cfg, d_e, i));
          power[i] = static_cast<double>(sc.grid.minislots()) * st.P_e.total();
        },
        cfg.threads);
    double sum = 0.0;
    for (double p : power) sum += p;
    out.push_back({gamma_e_db, d_e, spec.label(), mw_to_dbm(sum / static_cast<double>(cfg.drops)),
                   cfg.drops});
  }
  return out;
}

struct SweepSummary {
  std::vector<std::string> files;
  std::vector<SweepRecord> records;
};

namespace detail {

inline std::string distance_tag(double d) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", d);
  return buf;
}

inline void write_lines(const std::filesystem::path& path, const std::string& header,
                        const std::vector<std::string>& rows, SweepSummary& summary) {
  std::ofstream os(path);
  if (!os) throw Error(ErrorKind::io, "cannot write '" + path.string() + "'");
  os << header << '\n';
  for (const auto& r : rows) os << r << '\n';
  if (!os) throw Error(ErrorKind::io, "failed writing '" + path.string() + "'");
  summary.files.push_back(path.string());
}

inline bool wants(const ScenarioConfig& cfg, const char* name) {
  return std::find(cfg.experiments.begin(), cfg.experiments.end(), name) != cfg.experiments.end();
}

}  // namespace detail

/// Runs every requested experiment and writes its CSV into cfg.output_dir.
/// Experiments whose sweep axis is empty are skipped without output.
inline SweepSummary run_sweep(const ScenarioConfig& cfg) {
  cfg.validate();
  SweepSummary summary;
  const std::filesystem::path dir(cfg.output_dir);
  auto ensure_dir = [&] { std::filesystem::create_directories(dir); };

  if (detail::wants(cfg, "du_sweep") && !cfg.d_u.empty() && !cfg.d_e.empty() &&
      !cfg.schemes.empty() && !cfg.algorithms.empty()) {
    auto tables = make_table_cache(cfg);
    ensure_dir();
    for (double d_e : cfg.d_e) {
      std::vector<std::string> rows;
      for (const auto& spec : cfg.schemes)
        for (double d_u : cfg.d_u)
          for (auto& r : run_point(cfg, spec, d_u, d_e, tables)) {
            rows.push_back(to_csv_row(r));
            summary.records.push_back(std::move(r));
          }
      detail::write_lines(dir / ("du_sweep_de" + detail::distance_tag(d_e) + ".csv"), kSweepHeader,
                          rows, summary);
    }
  }

  if (detail::wants(cfg, "table1") && !cfg.table1_gamma_e_db.empty() && !cfg.schemes.empty()) {
    ensure_dir();
    std::vector<std::string> rows;
    for (double g : cfg.table1_gamma_e_db)
      for (const auto& r : run_table1_row(cfg, g))
        rows.push_back(detail::fmt(r.gamma_e_db) + "," + detail::fmt(r.d_e) + "," + r.scheme + "," +
                       detail::fmt(r.mean_embb_dbm) + "," + std::to_string(r.drops));
    detail::write_lines(dir / "table1.csv", "gamma_e_db,d_e,scheme,mean_embb_dbm,drops", rows,
                        summary);
  }

  if (detail::wants(cfg, "sic_vs_de") && !cfg.sic_d_e.empty()) {
    ensure_dir();
    const auto sc = cfg.scenario({Scheme::noma, cfg.F});
    std::vector<std::string> rows;
    for (double d_e : cfg.sic_d_e) {
      std::vector<double> sic(cfg.drops);
      parallel_for(
          cfg.drops,
          [&](std::size_t i) {
            const auto st = solve_embb_stage(sc, drop_gamma_e(cfg, d_e, i));
            sic[i] = st.P_u_sic.total_on(st.sets.F_u);
          },
          cfg.threads);
      double sum = 0.0;
      for (double p : sic) sum += p;
      rows.push_back(detail::fmt(d_e) + "," + detail::fmt(sc.r_u()) + "," +
                     detail::fmt(mw_to_dbm(sum / static_cast<double>(cfg.drops))) + "," +
                     std::to_string(cfg.drops));
    }
    detail::write_lines(dir / "sic_vs_de.csv", "d_e,r_u,mean_sic_dbm,drops", rows, summary);
  }

  if (detail::wants(cfg, "outage_curves") && !cfg.curve_M_u.empty() && !cfg.curve_pe_dbm.empty()) {
    ensure_dir();
    const auto settings = table_settings(cfg);
    TableAxes axes{settings.pu_dbm, cfg.curve_pe_dbm};
    std::sort(axes.pe_dbm.begin(), axes.pe_dbm.end());
    std::vector<std::string> rows;
    for (std::size_t M_u : cfg.curve_M_u) {
      const double r_u = spectral_efficiency(cfg.traffic.N_u, cfg.grid(), cfg.F, M_u);
      const auto t = build_table(snr_db_to_per_mw(cfg.curve_gamma_u_db), cfg.F, r_u, M_u, axes,
                                 cfg.table_trials, cfg.table_seed, cfg.threads);
      for (std::size_t row = 0; row < t.axis_pe_dbm.size(); ++row)
        for (std::size_t col = 0; col < t.axis_pu_dbm.size(); ++col)
          rows.push_back(std::to_string(M_u) + "," + detail::fmt(r_u) + "," +
                         detail::format_double(t.axis_pe_dbm[row]) + "," +
                         detail::fmt(t.axis_pu_dbm[col]) + "," + detail::fmt(t.at(row, col)));
    }
    detail::write_lines(dir / "outage_curves.csv", "M_u,r_u,pe_dbm,pu_dbm,p_u", rows, summary);
  }
  return summary;
}

}  // namespace slicing
