#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <span>
#include <vector>

#include "error.hpp"
#include "grid.hpp"

namespace slicing {

/// Per-frequency transmit power in linear mW over the whole grid width.
/// Entries outside the owning frequency set stay exactly zero.
class PowerVector {
 public:
  PowerVector() = default;
  explicit PowerVector(std::size_t frequencies) : mw_(frequencies, 0.0) {}
  explicit PowerVector(std::vector<double> mw) : mw_(std::move(mw)) {}

  std::size_t size() const { return mw_.size(); }
  double& operator[](std::size_t f) { return mw_[f]; }
  double operator[](std::size_t f) const { return mw_[f]; }
  auto begin() const { return mw_.begin(); }
  auto end() const { return mw_.end(); }
  std::span<const double> values() const { return mw_; }

  double total() const { return std::accumulate(mw_.begin(), mw_.end(), 0.0); }

  double total_on(const IndexSet& set) const {
    double s = 0.0;
    for (std::size_t f : set) s += mw_[f];
    return s;
  }

  bool operator==(const PowerVector&) const = default;

 private:
  std::vector<double> mw_;
};

struct ParallelChannels {
  std::vector<double> gains;  // effective gain per channel
  double rate_target = 0.0;   // total bits per channel use summed over channels
};

struct WaterfillSolution {
  std::vector<double> power;  // aligned with the offered gains
  double log2_level = 0.0;    // log2 of the common water level
  std::size_t active = 0;     // size of the positive set
};

/// Minimum-power allocation meeting sum_f log2(1 + g_f P_f) = rate_target.
/// Channels with nonpositive gain are never used. The water level is kept in
/// the log domain; gains may span many orders of magnitude.
inline WaterfillSolution waterfill_solve(std::span<const double> gains, double rate_target) {
  require(!gains.empty(), "water-filling needs at least one channel");
  require(rate_target >= 0.0, "rate target must be nonnegative");

  std::vector<char> active(gains.size(), 0);
  for (std::size_t f = 0; f < gains.size(); ++f) active[f] = gains[f] > 0.0 ? 1 : 0;
  if (std::none_of(active.begin(), active.end(), [](char a) { return a != 0; }))
    throw Error(ErrorKind::infeasible, "every offered channel has zero gain");

  WaterfillSolution sol;
  sol.power.assign(gains.size(), 0.0);
  if (rate_target == 0.0) return sol;

  for (;;) {
    std::size_t n = 0;
    double sum_log_inv = 0.0;
    for (std::size_t f = 0; f < gains.size(); ++f) {
      if (!active[f]) continue;
      ++n;
      sum_log_inv -= std::log2(gains[f]);
    }
    const double log2_level = (rate_target + sum_log_inv) / static_cast<double>(n);

    // Drop every channel whose inverse gain sits above the level, then re-solve.
    bool dropped = false;
    for (std::size_t f = 0; f < gains.size(); ++f) {
      if (active[f] && -std::log2(gains[f]) >= log2_level) {
        active[f] = 0;
        dropped = true;
      }
    }
    if (dropped) continue;

    sol.log2_level = log2_level;
    sol.active = n;
    for (std::size_t f = 0; f < gains.size(); ++f) {
      if (!active[f]) continue;
      // level - 1/g computed as (2^(L + log2 g) - 1) / g to keep precision
      const double x = std::exp2(log2_level + std::log2(gains[f]));
      sol.power[f] = (x - 1.0) / gains[f];
    }
    return sol;
  }
}

inline std::vector<double> waterfill(const ParallelChannels& channels) {
  return waterfill_solve(channels.gains, channels.rate_target).power;
}

namespace detail {

inline PowerVector scatter(std::size_t width, const IndexSet& set, const std::vector<double>& p) {
  PowerVector out(width);
  for (std::size_t i = 0; i < set.size(); ++i) out[set[i]] = p[i];
  return out;
}

}  // namespace detail

/// eMBB power over F_e meeting F_e * r_e bits (p_e = 0). gamma_e is full-width, per mW.
inline PowerVector embb_power(std::span<const double> gamma_e, const IndexSet& F_e, double r_e) {
  require(!F_e.empty(), "eMBB has no frequencies");
  std::vector<double> gains;
  gains.reserve(F_e.size());
  for (std::size_t f : F_e) {
    require(f < gamma_e.size(), "frequency index out of range");
    gains.push_back(gamma_e[f]);
  }
  const auto sol = waterfill_solve(gains, static_cast<double>(F_e.size()) * r_e);
  return detail::scatter(gamma_e.size(), F_e, sol.power);
}

/// Minimum URLLC power letting the eMBB receiver decode (and cancel) the URLLC stream.
inline PowerVector sic_power(const PowerVector& P_e, std::span<const double> gamma_e, double r_u,
                             const IndexSet& F_u, Scheme scheme) {
  PowerVector zero(gamma_e.size());
  if (scheme == Scheme::oma) return zero;
  require(!F_u.empty(), "URLLC has no frequencies");
  require(P_e.size() == gamma_e.size(), "power and SNR vectors must align");
  std::vector<double> gains;
  gains.reserve(F_u.size());
  for (std::size_t f : F_u) gains.push_back(gamma_e[f] / (1.0 + gamma_e[f] * P_e[f]));
  const auto sol = waterfill_solve(gains, static_cast<double>(F_u.size()) * r_u);
  return detail::scatter(gamma_e.size(), F_u, sol.power);
}

/// Interference used by the interference-limited bound: P_e(f) where the eMBB
/// is active, P_e(f_min) elsewhere, with f_min the weakest nonzero interferer.
inline std::vector<double> il_interference(const PowerVector& P_e, const IndexSet& F_u) {
  double p_min = std::numeric_limits<double>::infinity();
  for (std::size_t f : F_u)
    if (P_e[f] > 0.0) p_min = std::min(p_min, P_e[f]);
  if (!std::isfinite(p_min))
    throw Error(ErrorKind::undefined_interference_limited,
                "no URLLC frequency carries eMBB interference");
  std::vector<double> out;
  out.reserve(F_u.size());
  for (std::size_t f : F_u) out.push_back(P_e[f] > 0.0 ? P_e[f] : p_min);
  return out;
}

/// Interference-limited URLLC power: water-filling over gains 1 / P_e(f).
inline PowerVector il_power(const PowerVector& P_e, double r_u, const IndexSet& F_u) {
  require(!F_u.empty(), "URLLC has no frequencies");
  const auto interference = il_interference(P_e, F_u);
  std::vector<double> gains;
  gains.reserve(interference.size());
  for (double p : interference) gains.push_back(1.0 / p);
  const auto sol = waterfill_solve(gains, static_cast<double>(F_u.size()) * r_u);
  return detail::scatter(P_e.size(), F_u, sol.power);
}

}  // namespace slicing
