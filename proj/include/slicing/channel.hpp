#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <vector>

#include "error.hpp"
#include "rng.hpp"
#include "units.hpp"

namespace slicing {

/// Per-slot channel knowledge at the base station. All SNRs are per mW.
struct ChannelState {
  std::vector<double> gamma_e;  // known instantaneous eMBB SNR per frequency
  double Gamma_e = 0.0;         // mean eMBB SNR
  double Gamma_u = 0.0;         // mean URLLC SNR (only statistics are known)
  double sigma2_mw = 0.0;       // receiver noise

  void validate() const {
    for (double g : gamma_e) require(g >= 0.0, "instantaneous SNR must be nonnegative");
    require(Gamma_e > 0.0 && Gamma_u > 0.0, "mean SNRs must be positive");
    require(sigma2_mw > 0.0, "noise power must be positive");
  }
};

/// Link-budget constants used to map distances to mean SNRs.
struct Geometry {
  double gain_db = 17.15;
  double f0_hz = 2e9;
  double d0_m = 10.0;
  double alpha = 4.0;
  double cell_radius_m = 500.0;
  double sigma2_dbm = -108.0;

  void validate() const {
    require(alpha > 2.0, "path-loss exponent must exceed 2");
    require(d0_m > 0.0, "reference distance must be positive");
    require(cell_radius_m >= d0_m, "cell radius must be at least d0");
    require(f0_hz > 0.0, "carrier frequency must be positive");
  }

  double sigma2_mw() const { return dbm_to_mw(sigma2_dbm); }

  /// Distance-independent part of the received-SNR budget, in mW.
  double budget_mw() const {
    const double lambda_term = kSpeedOfLight / (4.0 * std::numbers::pi * f0_hz);
    return db_to_linear(gain_db) * lambda_term * lambda_term * std::pow(d0_m, alpha - 2.0);
  }
};

/// i.i.d. Exp(mean) draws, one per frequency; stream (seed, ids...) fixes the values.
inline std::vector<double> sample_snr(double mean, std::size_t count, std::uint64_t seed) {
  require(mean > 0.0, "mean SNR must be positive");
  require(count >= 1, "need at least one draw");
  Stream rng(seed);
  std::vector<double> out(count);
  for (auto& x : out) x = rng.exponential(mean);
  return out;
}

/// Distance at which the mean normalized SNR (per mW) equals Gamma.
inline double distance_from_mean_snr(double Gamma, const Geometry& geom, double sigma2_mw) {
  require(Gamma > 0.0, "mean SNR must be positive");
  require(sigma2_mw > 0.0, "noise power must be positive");
  return std::pow(geom.budget_mw() / (Gamma * sigma2_mw), 1.0 / geom.alpha);
}

inline double mean_snr_from_distance(double d, const Geometry& geom, double sigma2_mw) {
  if (!(d >= geom.d0_m))
    throw Error(ErrorKind::out_of_model, "distance below the free-space region d0");
  require(sigma2_mw > 0.0, "noise power must be positive");
  return geom.budget_mw() / (std::pow(d, geom.alpha) * sigma2_mw);
}

}  // namespace slicing
