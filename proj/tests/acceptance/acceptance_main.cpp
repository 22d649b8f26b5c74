// Acceptance run: one PASS/FAIL line per criterion. Pass criterion numbers as
// arguments to run a subset.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "../oracles.hpp"
#include "slicing/alloc.hpp"
#include "slicing/exper.hpp"

using namespace slicing;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

IndexSet all(std::size_t n) {
  IndexSet s(n);
  for (std::size_t i = 0; i < n; ++i) s[i] = i;
  return s;
}

// 1. mean SNR to distance, Table 1 column.
Outcome distance_inversion() {
  const Geometry geom;
  const double db[] = {30, 40, 50, 60, 70, 80};
  const double paper[] = {464.56, 261.2, 146.9, 82.6, 46.5, 26.1};
  Outcome o{true, ""};
  for (int i = 0; i < 6; ++i) {
    const double d = distance_from_mean_snr(snr_db_to_per_mw(db[i]), geom, geom.sigma2_mw());
    o.pass &= std::abs(d - paper[i]) <= 0.5;
    o.detail += fmt("%.2f ", d);
  }
  o.detail += "m";
  return o;
}

// 2. closed forms against exhaustive grid search on F <= 3.
Outcome waterfill_oracle() {
  std::mt19937_64 rng(2);
  std::lognormal_distribution<double> gain(0.0, 1.0);
  std::uniform_real_distribution<double> rate(0.2, 3.0), power(0.1, 3.0);
  int grid_fail = 0, tight_fail = 0;
  for (int rep = 0; rep < 200; ++rep) {
    const std::size_t F = 1 + rng() % 3;
    std::vector<double> gamma(F), pe(F);
    for (auto& g : gamma) g = gain(rng);
    for (auto& p : pe) p = power(rng);
    const double r = rate(rng);
    const PowerVector P_e(pe);
    const IndexSet set = all(F);

    std::vector<double> g_sic(F), g_il(F);
    for (std::size_t f = 0; f < F; ++f) {
      g_sic[f] = gamma[f] / (1.0 + gamma[f] * pe[f]);
      g_il[f] = 1.0 / pe[f];
    }
    const PowerVector results[] = {embb_power(gamma, set, r),
                                   sic_power(P_e, gamma, r, set, Scheme::noma),
                                   il_power(P_e, r, set)};
    const std::vector<double>* gains[] = {&gamma, &g_sic, &g_il};
    for (int k = 0; k < 3; ++k) {
      const auto& g = *gains[k];
      const auto& p = results[k];
      double bits = 0.0;
      for (std::size_t f = 0; f < F; ++f) bits += std::log2(1.0 + g[f] * p[f]);
      if (std::abs(bits - F * r) > 1e-9 * F * r) ++tight_fail;
      const double level = std::exp2(waterfill_solve(g, F * r).log2_level);
      const double step = 1e-3 * level;
      const auto grid = oracle::grid_search(g, F * r, step, level);
      const double total = p.total();
      if (total > grid.total + 1e-9 * level || grid.total - total > step) ++grid_fail;
    }
  }
  return {grid_fail == 0 && tight_fail == 0,
          std::to_string(grid_fail) + " grid mismatches, " + std::to_string(tight_fail) +
              " tightness failures over 600 solves"};
}

constexpr double kGamma30 = 1.0;  // 30 dB referenced to 1 W, per mW
constexpr std::uint64_t kTableTrials = 10'000'000;

double fig5_rate() { return spectral_efficiency(2160.0 / 7.0, ResourceGrid{12, 7, 180e3, 1e-3}, 12, 1); }

// 3. two tabulated points of the outage curve.
Outcome fig5_anchors() {
  const double r_u = fig5_rate();
  auto cell = [&](double pu_dbm, double pe_dbm) {
    const double pe = pe_dbm == kNoInterference ? 0.0 : dbm_to_mw(pe_dbm);
    return estimate_outage(std::vector<double>(12, dbm_to_mw(pu_dbm)), std::vector<double>(12, pe),
                           kGamma30, r_u, kTableTrials, table_row_seed(1, pe_dbm));
  };
  const auto a = cell(9.0, 0.0);
  const auto b = cell(8.0, kNoInterference);
  const double sa = 3.0 * std::sqrt(2.38e-5 / kTableTrials);
  const double sb = 3.0 * std::sqrt(9.3e-6 / kTableTrials);
  const bool pa = std::abs(a.p_hat - 2.38e-5) <= sa;
  const bool pb = std::abs(b.p_hat - 9.3e-6) <= sb;
  return {pa && pb, "p(9 dBm, 0 dBm) = " + fmt("%.3e", a.p_hat) + (pa ? " ok" : " outside") +
                        " [2.38e-5 +- " + fmt("%.1e", sa) + "], p(8 dBm, none) = " +
                        fmt("%.3e", b.p_hat) + (pb ? " ok" : " outside") + " [9.3e-6 +- " +
                        fmt("%.1e", sb) + "]"};
}

// 4. table lookups at epsilon_u = 1e-5.
Outcome fig5_min_power() {
  const TableAxes axes{dbm_axis(-30.0, 30.0), {kNoInterference, 0.0}};
  const auto t = build_table(kGamma30, 12, fig5_rate(), 1, axes, kTableTrials, 1);
  const auto q0 = min_feasible_power(t, dbm_to_mw(0.0), 1e-5);
  const auto qn = min_feasible_power(t, 0.0, 1e-5);
  const auto col8 = static_cast<std::size_t>(8 + 30);
  return {q0.pu_dbm == 10.0 && qn.pu_dbm == 8.0,
          fmt("P_e = 0 dBm -> %.0f dBm (expect 10)", q0.pu_dbm) +
              fmt(", none -> %.0f dBm (expect 8)", qn.pu_dbm) +
              fmt("; p(8 dBm, none) = %.3e", t.at(0, col8))};
}

// 5. closed-form single-frequency power hits the target.
Outcome single_freq() {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> db(20.0, 60.0), rate(0.1, 3.0), pe(0.0, 2.0);
  int misses = 0;
  double worst = 0.0;
  const double sigma = std::sqrt(1e-2 * 0.99 / 1e5);
  for (int i = 0; i < 20; ++i) {
    const double G = snr_db_to_per_mw(db(rng)), r = rate(rng), e = pe(rng);
    const double p = single_freq_power(r, G, 1e-2, e);
    const auto est = estimate_outage(std::vector<double>{p}, std::vector<double>{e}, G, r, 100'000,
                                     1000 + i);
    const double z = std::abs(est.p_hat - 1e-2) / sigma;
    worst = std::max(worst, z);
    if (z > 3.0) ++misses;
  }
  return {misses == 0, std::to_string(misses) + "/20 outside 3 sigma, worst " + fmt("%.2f sigma", worst)};
}

// 6. mean eMBB power, Table 1 rows 30, 50 and 80 dB.
Outcome table1() {
  ScenarioConfig cfg;
  cfg.drops = 2000;
  const double db[] = {30, 50, 80};
  const double paper[3][4] = {{33.21, 34.18, 38.89, 58.27},
                              {14.21, 14.44, 19.23, 38.74},
                              {-9.67, -9.67, -9.67, 8.65}};
  Outcome o{true, ""};
  int fails = 0;
  for (int i = 0; i < 3; ++i) {
    const auto rows = run_table1_row(cfg, db[i]);
    o.detail += fmt("%.0f dB:", db[i]);
    for (int s = 0; s < 4; ++s) {
      const bool ok = std::abs(rows[s].mean_embb_dbm - paper[i][s]) <= 0.5;
      if (!ok) ++fails;
      o.detail += " " + rows[s].scheme + fmt(" %.2f", rows[s].mean_embb_dbm) +
                  fmt("(%.2f)", paper[i][s]) + (ok ? "" : "*");
    }
    o.detail += "; ";
  }
  o.pass = fails == 0;
  o.detail += std::to_string(fails) + "/12 cells off by more than 0.5 dB (marked *)";
  return o;
}

// 7. Proposition 1 on common random numbers.
Outcome proposition1() {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> pu(0.0, 10.0), pe(0.0, 2.0);
  const CrnDraws draws(100'000, 6, 77);
  int violations = 0, checks = 0;
  for (int rep = 0; rep < 100; ++rep) {
    std::vector<double> u(6), e(6);
    for (auto& v : u) v = pu(rng);
    for (auto& v : e) v = pe(rng);
    const double base = estimate_outage_crn(draws, u, e, 1.0, 0.5).p_hat;
    for (std::size_t f = 0; f < 6; ++f) {
      auto lower = u;
      lower[f] *= 0.9;
      ++checks;
      if (estimate_outage_crn(draws, lower, e, 1.0, 0.5).p_hat < base) ++violations;
    }
  }
  return {violations == 0, std::to_string(violations) + " violations in " + std::to_string(checks) + " checks"};
}

// 8. N-BCD dominance, feasibility and SIC on random NOMA drops (epsilon_u = 1e-2).
Outcome dominance() {
  ScenarioConfig cfg;
  cfg.traffic.epsilon_u = 1e-2;
  cfg.table_trials = 200'000;
  cfg.crn_trials = 20'000;
  cfg.evidence_trials = 100'000;
  cfg.seed = 8;
  auto tables = make_table_cache(cfg);
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> du(20.0, 200.0), de(26.1, 261.2);
  int dom = 0, feas = 0, sic = 0, skipped = 0;
  for (std::size_t drop = 0; drop < 100; ++drop) {
    const double d_u = std::round(du(rng)), d_e = std::round(de(rng) * 10.0) / 10.0;
    const auto out = run_drop(cfg, {Scheme::noma, 12}, d_u, d_e, drop, tables);
    if (!out.feasible) {
      ++skipped;
      continue;
    }
    const auto& f = *out.nfea;
    const auto& b = *out.nbcd;
    if (b.urllc_power_mw > f.urllc_power_mw) ++dom;
    for (const auto* r : {&f, &b})
      if (r->p_u_hat.p_hat > cfg.traffic.epsilon_u + r->p_u_hat.ci_halfwidth) ++feas;
    const auto ch = drop_channel(cfg, d_u, d_e, drop);
    for (const auto* r : {&f, &b})
      if (mutual_info_sic(r->P_u, r->P_e, ch.gamma_e, r->sets.F_u) < r->r_u * (1.0 - 1e-9)) ++sic;
  }
  return {dom == 0 && feas == 0 && sic == 0 && skipped == 0,
          std::to_string(dom) + " dominance, " + std::to_string(feas) + " outage, " +
              std::to_string(sic) + " SIC violations; " + std::to_string(skipped) +
              " drops beyond the table"};
}

// 9. SIC floor dominates close URLLC users when the eMBB user is far.
Outcome sic_floor() {
  ScenarioConfig cfg;
  cfg.algorithms = {Algorithm::nbcd};
  cfg.crn_trials = 1'000'000;
  cfg.evidence_trials = 10'000;
  cfg.seed = 9;
  auto tables = make_table_cache(cfg);
  const double d_us[] = {20.0, 35.0, 50.0};
  int close = 0, total = 0;
  for (double d_u : d_us) {
    for (std::size_t drop = 0; drop < 20; ++drop) {
      const auto out = run_drop(cfg, {Scheme::noma, 12}, d_u, 261.2, drop, tables);
      ++total;
      if (!out.feasible) continue;
      const double bcd = out.nbcd->P_u.total_on(out.nbcd->sets.F_u);
      if (std::abs(mw_to_dbm(bcd) - mw_to_dbm(out.sic_mw)) <= 0.5) ++close;
    }
  }
  const double share = static_cast<double>(close) / total;
  return {share >= 0.9, std::to_string(close) + "/" + std::to_string(total) +
                            fmt(" drops within 0.5 dB of the SIC power (%.0f%%)", 100.0 * share)};
}

// 10 (substitute). Scheme ordering at d_e = 146.9 m, epsilon_u = 1e-5, few drops.
Outcome scheme_ordering() {
  ScenarioConfig cfg;
  cfg.drops = 10;
  cfg.crn_trials = 200'000;
  cfg.evidence_trials = 10'000;
  cfg.seed = 10;
  cfg.algorithms = {Algorithm::nbcd};
  auto tables = make_table_cache(cfg);
  auto total = [&](const SchemeSpec& s, double d_u) {
    return run_point(cfg, s, d_u, 146.9, tables).front().mean_total_dbm;
  };
  const double near_noma = total({Scheme::noma, 12}, 50.0), near_o3 = total({Scheme::oma, 3}, 50.0);
  const double far_noma = total({Scheme::noma, 12}, 100.0), far_o3 = total({Scheme::oma, 3}, 100.0);
  const bool near_ok = near_o3 <= near_noma && near_noma - near_o3 < 1.0;
  const bool far_ok = far_noma < far_o3;
  return {near_ok && far_ok,
          fmt("d_u = 50 m: NOMA %.2f", near_noma) + fmt(" vs O-3 %.2f dBm", near_o3) +
              (near_ok ? " ok" : " wrong order") + fmt("; d_u = 100 m: NOMA %.2f", far_noma) +
              fmt(" vs O-3 %.2f dBm", far_o3) + (far_ok ? " ok" : " wrong order")};
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));

  struct Criterion {
    int id;
    const char* name;
    Outcome (*run)();
  };
  const Criterion criteria[] = {
      {1, "distance inversion", distance_inversion},
      {2, "water-filling oracle", waterfill_oracle},
      {3, "outage curve anchors", fig5_anchors},
      {4, "table minimum power", fig5_min_power},
      {5, "single-frequency closed form", single_freq},
      {6, "mean eMBB power table", table1},
      {7, "monotonicity under CRN", proposition1},
      {8, "N-BCD dominance and feasibility", dominance},
      {9, "SIC floor at far eMBB user", sic_floor},
      {10, "scheme ordering (desk substitute for full-scale curves)", scheme_ordering},
  };

  int failed = 0;
  for (const auto& c : criteria) {
    if (!only.empty() && !only.count(c.id)) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("[%s] %d %s: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", c.id, c.name,
                o.detail.c_str(), secs);
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  if (only.empty() || only.count(10))
    std::printf("[NOTE] 10 full-scale figure curves at epsilon_u = 1e-5 are a long sweep job "
                "(slicing sweep), not part of this run\n");
  return failed == 0 ? 0 : 1;
}
