#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "channel.hpp"
#include "error.hpp"
#include "grid.hpp"
#include "outage.hpp"
#include "outage_table.hpp"
#include "waterfill.hpp"

namespace slicing {

enum class Algorithm { nfea, nbcd };

inline std::string_view to_string(Algorithm a) { return a == Algorithm::nfea ? "N-fea" : "N-BCD"; }

inline Algorithm parse_algorithm(std::string_view text) {
  if (text == "fea" || text == "nfea" || text == "N-fea") return Algorithm::nfea;
  if (text == "bcd" || text == "nbcd" || text == "N-BCD") return Algorithm::nbcd;
  throw Error(ErrorKind::invalid_argument, "unknown algorithm '" + std::string(text) + "'");
}

/// One allocation problem: grid, traffic, access scheme and URLLC footprint.
struct Scenario {
  ResourceGrid grid{12, 7, 180e3, 1e-3};
  TrafficSpec traffic{};
  Scheme scheme = Scheme::noma;
  std::size_t F_u_count = 12;
  std::size_t M_u_count = 1;

  std::size_t F_e_count() const {
    return scheme == Scheme::noma ? grid.frequencies() : grid.frequencies() - F_u_count;
  }
  double r_u() const { return spectral_efficiency(traffic.N_u, grid, F_u_count, M_u_count); }
  double r_e() const {
    require(F_e_count() >= 1, "OMA leaves no frequency for the eMBB user");
    return spectral_efficiency(traffic.N_e, grid, F_e_count(), grid.minislots());
  }

  void validate() const {
    traffic.validate(grid);
    require(F_u_count >= 1 && F_u_count <= grid.frequencies(), "F_u must lie in [1, F]");
    require(M_u_count >= 1, "M_u must be at least 1");
  }
};

struct BcdOptions {
  double mu0_fraction = 0.1;  // initial step as a fraction of the largest N-fea power
  double tau_mw = 1e-7;       // stop once the step is at or below this
  std::size_t crn_trials = 1'000'000;
  std::uint64_t crn_seed = 0;
};

struct BcdStep {
  double mu = 0.0;
  double urllc_sum_mw = 0.0;  // sum of P_u over F_u after the sweep
};

struct AllocationResult {
  Algorithm algorithm = Algorithm::nfea;
  ResourceSets sets;
  double r_u = 0.0;
  double r_e = 0.0;
  PowerVector P_e;
  PowerVector P_u;
  PowerVector P_u_sic;
  double table_pu_dbm = 0.0;  // tabulated uniform power chosen by N-fea
  double embb_power_mw = 0.0;   // over all mini-slots
  double urllc_power_mw = 0.0;  // over the URLLC mini-slots
  double total_power_mw = 0.0;
  OutageEstimate p_u_hat;
  bool sic_satisfied = false;
  std::size_t iterations = 0;
  std::vector<BcdStep> trace;
};

/// eMBB side of the decomposition: frequency sets, eMBB power and SIC floor.
struct EmbbStage {
  ResourceSets sets;
  double r_u = 0.0;
  double r_e = 0.0;
  PowerVector P_e;
  PowerVector P_u_sic;
};

inline EmbbStage solve_embb_stage(const Scenario& sc, std::span<const double> gamma_e) {
  sc.validate();
  require(gamma_e.size() == sc.grid.frequencies(), "gamma_e must have one entry per frequency");
  EmbbStage st;
  st.sets = build_resource_sets(sc.scheme, sc.grid, gamma_e, sc.F_u_count, sc.M_u_count, sc.traffic);
  st.r_u = sc.r_u();
  st.r_e = sc.r_e();
  st.P_e = embb_power(gamma_e, st.sets.F_e, st.r_e);
  st.P_u_sic = sic_power(st.P_e, gamma_e, st.r_u, st.sets.F_u, sc.scheme);
  return st;
}

/// Largest interference seen by the URLLC frequencies.
inline double worst_interference(const EmbbStage& st) {
  double worst = 0.0;
  for (std::size_t f : st.sets.F_u) worst = std::max(worst, st.P_e[f]);
  return worst;
}

namespace detail {

inline bool close_rel(double a, double b, double tol = 1e-9) {
  return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b));
}

inline void check_table(const OutageTable& table, const EmbbStage& st, double Gamma_u) {
  if (table.F_u != st.sets.F_u.size() || !close_rel(table.r_u, st.r_u) ||
      !close_rel(table.gamma_u, Gamma_u))
    throw Error(ErrorKind::invalid_argument, "outage table does not match (Gamma_u, F_u, r_u)");
}

inline void finish(AllocationResult& res, const Scenario& sc, std::span<const double> gamma_e) {
  res.embb_power_mw = static_cast<double>(sc.grid.minislots()) * res.P_e.total();
  res.urllc_power_mw = static_cast<double>(res.sets.M_u.size()) * res.P_u.total();
  res.total_power_mw = res.embb_power_mw + res.urllc_power_mw;
  if (sc.scheme == Scheme::oma) {
    res.sic_satisfied = true;
  } else {
    const double info = mutual_info_sic(res.P_u, res.P_e, gamma_e, res.sets.F_u);
    res.sic_satisfied = info >= res.r_u * (1.0 - 1e-9);
  }
}

}  // namespace detail

/// Table-based feasible allocation: every URLLC frequency is provisioned as if
/// it saw the strongest interference, then lifted to the SIC floor.
inline AllocationResult nfea_from_stage(const EmbbStage& st, const OutageTable& table,
                                        double Gamma_u, double epsilon_u) {
  detail::check_table(table, st, Gamma_u);
  const auto q = min_feasible_power(table, worst_interference(st), epsilon_u);
  AllocationResult res;
  res.algorithm = Algorithm::nfea;
  res.sets = st.sets;
  res.r_u = st.r_u;
  res.r_e = st.r_e;
  res.P_e = st.P_e;
  res.P_u_sic = st.P_u_sic;
  res.table_pu_dbm = q.pu_dbm;
  res.P_u = PowerVector(st.P_e.size());
  for (std::size_t f : st.sets.F_u) res.P_u[f] = std::max(q.pu_mw(), st.P_u_sic[f]);
  return res;
}

/// Largest outage count on n draws whose 3-sigma upper bound stays within epsilon.
inline std::uint64_t max_accepted_outages(std::uint64_t n, double epsilon) {
  auto upper = [&](std::uint64_t k) {
    const double p = static_cast<double>(k) / static_cast<double>(n);
    return p + 3.0 * std::sqrt(p * (1.0 - p) / static_cast<double>(n));
  };
  if (upper(0) > epsilon) return 0;  // unreachable: upper(0) == 0
  std::uint64_t k = 0;
  while (k < n && upper(k + 1) <= epsilon) ++k;
  return k;
}

/// Constrained block coordinate descent on the URLLC powers, started from `start`.
/// A coordinate is lowered by the step only if the CRN outage stays certified;
/// coordinates that reach their SIC floor leave the sweep; the step halves after
/// a sweep that changes nothing.
inline AllocationResult nbcd_from(const AllocationResult& start, double Gamma_u, double epsilon_u,
                                  const BcdOptions& opt) {
  require(opt.tau_mw > 0.0 && opt.mu0_fraction > 0.0, "BCD step parameters must be positive");
  const auto& F_u = start.sets.F_u;
  std::vector<double> power, floor, interference;
  for (std::size_t f : F_u) {
    power.push_back(start.P_u[f]);
    floor.push_back(start.P_u_sic[f]);
    interference.push_back(start.P_e[f]);
  }

  AllocationResult res = start;
  res.algorithm = Algorithm::nbcd;
  double mu = opt.mu0_fraction * *std::max_element(power.begin(), power.end());

  const CrnDraws draws(opt.crn_trials, F_u.size(), opt.crn_seed);
  CrnOutageEvaluator eval(draws, power, interference, Gamma_u, start.r_u);
  const std::uint64_t limit = max_accepted_outages(draws.trials(), epsilon_u);

  std::vector<std::size_t> active;
  for (std::size_t i = 0; i < power.size(); ++i)
    if (power[i] > floor[i]) active.push_back(i);

  auto urllc_sum = [&] {
    double s = 0.0;
    for (double p : power) s += p;
    return s;
  };

  while (mu > opt.tau_mw && !active.empty()) {
    bool changed = false;
    std::vector<std::size_t> still_active;
    for (std::size_t i : active) {
      const double candidate = std::max(floor[i], power[i] - mu);
      if (candidate < power[i] && eval.count_with(i, candidate, limit) <= limit) {
        eval.set(i, candidate);
        power[i] = candidate;
        changed = true;
      }
      if (power[i] > floor[i]) still_active.push_back(i);
    }
    active.swap(still_active);
    ++res.iterations;
    res.trace.push_back({mu, urllc_sum()});
    if (!changed) mu /= 2.0;
  }

  for (std::size_t i = 0; i < F_u.size(); ++i) res.P_u[F_u[i]] = power[i];
  return res;
}

// ---------------------------------------------------------------------------
// Outage-table supply for allocation runs

struct TableSettings {
  std::vector<double> pu_dbm = dbm_axis(-30.0, 30.0);
  std::vector<double> pe_dbm = TableAxes::with_sentinel(dbm_axis(-30.0, 30.0));
  std::uint64_t trials = 10'000'000;
  std::uint64_t seed = 1;
  bool auto_build = true;
};

/// Serves outage tables keyed by (Gamma_u, F_u, r_u). Preloaded tables win;
/// otherwise only the interference row a query needs is built, and since row
/// seeds depend on the row value alone the result equals that row of a full table.
class TableCache {
 public:
  explicit TableCache(TableSettings settings = {}, std::vector<OutageTable> preloaded = {})
      : settings_(std::move(settings)), loaded_(std::move(preloaded)) {}

  const TableSettings& settings() const { return settings_; }

  void add(OutageTable table) {
    std::lock_guard lock(mutex_);
    loaded_.push_back(std::move(table));
  }

  /// Table holding the conservative row for interference pe_mw.
  OutageTable table_for(double Gamma_u, std::size_t F_u, double r_u, std::size_t M_u,
                        double pe_mw) {
    {
      std::lock_guard lock(mutex_);
      for (const auto& t : loaded_)
        if (t.F_u == F_u && detail::close_rel(t.r_u, r_u) && detail::close_rel(t.gamma_u, Gamma_u))
          return t;
    }
    if (!settings_.auto_build)
      throw Error(ErrorKind::missing_table,
                  "no outage table for Gamma_u = " + std::to_string(snr_per_mw_to_db(Gamma_u)) +
                      " dB, F_u = " + std::to_string(F_u) + ", r_u = " + std::to_string(r_u) +
                      "; run `slicing table build` for it or enable auto_build_tables");

    OutageTable probe;
    probe.axis_pe_dbm = settings_.pe_dbm;
    const std::size_t row = table_row_for(probe, pe_mw);
    const double pe_dbm = settings_.pe_dbm[row];
    const Key key{std::bit_cast<std::uint64_t>(Gamma_u), F_u, std::bit_cast<std::uint64_t>(r_u),
                  std::bit_cast<std::uint64_t>(pe_dbm)};
    std::vector<double> values;
    {
      std::lock_guard lock(mutex_);
      if (auto it = rows_.find(key); it != rows_.end()) values = it->second;
    }
    if (values.empty()) {
      TableAxes axes{settings_.pu_dbm, {pe_dbm}};
      values = build_table(Gamma_u, F_u, r_u, M_u, axes, settings_.trials, settings_.seed, 1).values;
      std::lock_guard lock(mutex_);
      rows_.emplace(key, values);
    }
    OutageTable t;
    t.axis_pu_dbm = settings_.pu_dbm;
    t.axis_pe_dbm = {pe_dbm};
    t.gamma_u = Gamma_u;
    t.F_u = F_u;
    t.r_u = r_u;
    t.M_u = M_u;
    t.trials = settings_.trials;
    t.seed = settings_.seed;
    t.values = std::move(values);
    return t;
  }

 private:
  using Key = std::tuple<std::uint64_t, std::size_t, std::uint64_t, std::uint64_t>;
  TableSettings settings_;
  std::vector<OutageTable> loaded_;
  std::mutex mutex_;
  std::map<Key, std::vector<double>> rows_;
};

// ---------------------------------------------------------------------------
// Entry points

inline AllocationResult allocate_nfea(const Scenario& sc, const ChannelState& ch,
                                      const OutageTable& table) {
  ch.validate();
  const auto st = solve_embb_stage(sc, ch.gamma_e);
  auto res = nfea_from_stage(st, table, ch.Gamma_u, sc.traffic.epsilon_u);
  detail::finish(res, sc, ch.gamma_e);
  return res;
}

inline AllocationResult allocate_nbcd(const Scenario& sc, const ChannelState& ch,
                                      const OutageTable& table, const BcdOptions& opt) {
  ch.validate();
  const auto st = solve_embb_stage(sc, ch.gamma_e);
  const auto start = nfea_from_stage(st, table, ch.Gamma_u, sc.traffic.epsilon_u);
  auto res = nbcd_from(start, ch.Gamma_u, sc.traffic.epsilon_u, opt);
  detail::finish(res, sc, ch.gamma_e);
  return res;
}

struct AllocateOptions {
  BcdOptions bcd{};
  std::uint64_t evidence_trials = 1'000'000;
  std::uint64_t evidence_seed = 0;
};

/// Runs the whole decomposition for one drop and attaches a fresh outage estimate.
/// Returns the N-fea result and, when requested, the N-BCD refinement of it.
struct AllocationPair {
  AllocationResult nfea;
  std::optional<AllocationResult> nbcd;
};

inline AllocationPair allocate_both(const Scenario& sc, const ChannelState& ch, TableCache& tables,
                                    bool with_bcd, const AllocateOptions& opt) {
  ch.validate();
  const auto st = solve_embb_stage(sc, ch.gamma_e);
  const auto table =
      tables.table_for(ch.Gamma_u, st.sets.F_u.size(), st.r_u, sc.M_u_count, worst_interference(st));
  AllocationPair out;
  out.nfea = nfea_from_stage(st, table, ch.Gamma_u, sc.traffic.epsilon_u);
  if (with_bcd) out.nbcd = nbcd_from(out.nfea, ch.Gamma_u, sc.traffic.epsilon_u, opt.bcd);

  auto evidence = [&](AllocationResult& r) {
    detail::finish(r, sc, ch.gamma_e);
    r.p_u_hat = estimate_outage(r.P_u, r.P_e, r.sets.F_u, ch.Gamma_u, r.r_u, opt.evidence_trials,
                                opt.evidence_seed, 1);
  };
  evidence(out.nfea);
  if (out.nbcd) evidence(*out.nbcd);
  return out;
}

inline AllocationResult allocate(const Scenario& sc, const ChannelState& ch, Algorithm algorithm,
                                 TableCache& tables, const AllocateOptions& opt = {}) {
  auto both = allocate_both(sc, ch, tables, algorithm == Algorithm::nbcd, opt);
  return algorithm == Algorithm::nbcd ? std::move(*both.nbcd) : std::move(both.nfea);
}

}  // namespace slicing
