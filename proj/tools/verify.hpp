#pragma once

#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "slicing/outage.hpp"
#include "slicing/units.hpp"
#include "slicing/waterfill.hpp"

// Self-checks runnable from the CLI. Each suite prints one line per check and
// returns true when all pass.
namespace verify {

using namespace slicing;

inline bool report(const char* name, bool ok, const std::string& detail) {
  std::printf("%s %-28s %s\n", ok ? "PASS" : "FAIL", name, detail.c_str());
  return ok;
}

// Tightness plus the KKT certificate: active channels share one water level,
// inactive ones have an inverse gain at or above it.
inline bool kkt_holds(const std::vector<double>& gains, const std::vector<double>& p, double target) {
  double bits = 0.0, level = -1.0;
  for (std::size_t f = 0; f < gains.size(); ++f) {
    if (gains[f] <= 0.0) {
      if (p[f] != 0.0) return false;
      continue;
    }
    bits += std::log2(1.0 + gains[f] * p[f]);
    if (p[f] > 0.0) {
      const double l = p[f] + 1.0 / gains[f];
      if (level < 0.0) level = l;
      else if (std::abs(l - level) > 1e-9 * level) return false;
    }
  }
  if (std::abs(bits - target) > 1e-9 * std::max(1.0, target)) return false;
  for (std::size_t f = 0; f < gains.size(); ++f)
    if (gains[f] > 0.0 && p[f] == 0.0 && target > 0.0 && 1.0 / gains[f] < level * (1.0 - 1e-9))
      return false;
  return true;
}

inline bool waterfill_suite(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> log_gain(-4.0, 4.0), rate(0.0, 4.0), power(0.0, 3.0);
  std::uniform_int_distribution<int> width(1, 12);
  int bad_embb = 0, bad_sic = 0, bad_il = 0;
  const int n = 500;
  for (int i = 0; i < n; ++i) {
    const auto F = static_cast<std::size_t>(width(rng));
    std::vector<double> gamma(F), pe(F);
    IndexSet all(F);
    for (std::size_t f = 0; f < F; ++f) {
      gamma[f] = std::pow(10.0, log_gain(rng));
      pe[f] = power(rng);
      all[f] = f;
    }
    const double r = rate(rng);
    const auto e = embb_power(gamma, all, r);
    if (!kkt_holds(gamma, {e.begin(), e.end()}, F * r)) ++bad_embb;

    const PowerVector P_e(pe);
    std::vector<double> g_sic(F), g_il(F);
    for (std::size_t f = 0; f < F; ++f) {
      g_sic[f] = gamma[f] / (1.0 + gamma[f] * pe[f]);
      g_il[f] = 1.0 / pe[f];
    }
    const auto s = sic_power(P_e, gamma, r, all, Scheme::noma);
    if (!kkt_holds(g_sic, {s.begin(), s.end()}, F * r)) ++bad_sic;
    const auto il = il_power(P_e, r, all);
    if (!kkt_holds(g_il, {il.begin(), il.end()}, F * r)) ++bad_il;
  }
  bool ok = true;
  ok &= report("waterfill.embb_kkt", bad_embb == 0, std::to_string(bad_embb) + "/500 violations");
  ok &= report("waterfill.sic_kkt", bad_sic == 0, std::to_string(bad_sic) + "/500 violations");
  ok &= report("waterfill.il_kkt", bad_il == 0, std::to_string(bad_il) + "/500 violations");
  return ok;
}

inline bool outage_suite(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  bool ok = true;

  // Lowering one coordinate never lowers the CRN outage estimate.
  const CrnDraws draws(20'000, 4, seed);
  int violations = 0;
  for (int i = 0; i < 50; ++i) {
    std::vector<double> pu(4), pe(4);
    for (auto& v : pu) v = 5.0 * unit(rng);
    for (auto& v : pe) v = unit(rng);
    const double base = estimate_outage_crn(draws, pu, pe, 2.0, 0.8).p_hat;
    for (std::size_t f = 0; f < 4; ++f) {
      auto lower = pu;
      lower[f] *= 0.9;
      if (estimate_outage_crn(draws, lower, pe, 2.0, 0.8).p_hat < base) ++violations;
    }
  }
  ok &= report("outage.crn_monotone", violations == 0, std::to_string(violations) + " violations");

  // Closed-form single-frequency power meets the target.
  int misses = 0;
  for (int i = 0; i < 10; ++i) {
    const double Gamma = snr_db_to_per_mw(20.0 + 40.0 * unit(rng));
    const double r = 0.2 + 2.0 * unit(rng);
    const double pe = unit(rng);
    const double p = single_freq_power(r, Gamma, 1e-2, pe);
    const auto e = estimate_outage(std::vector<double>{p}, std::vector<double>{pe}, Gamma, r,
                                   100'000, seed + i, 1);
    if (std::abs(e.p_hat - 1e-2) > 3.0 * std::sqrt(1e-2 * 0.99 / 1e5)) ++misses;
  }
  ok &= report("outage.single_freq", misses == 0, std::to_string(misses) + "/10 outside 3 sigma");
  return ok;
}

}  // namespace verify
