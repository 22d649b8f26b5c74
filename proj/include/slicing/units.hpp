#pragma once

#include <cmath>
#include <limits>

namespace slicing {

// Powers are linear milliwatts everywhere inside the library; dBm only at I/O.
// Normalized SNRs (|h|^2 / sigma^2) are kept per milliwatt so that
// gamma * P is dimensionless. Quoted SNR figures in dB are referenced to 1 W.

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

inline double dbm_to_mw(double dbm) { return db_to_linear(dbm); }

/// -inf for zero power.
inline double mw_to_dbm(double mw) {
  if (mw <= 0.0) return -std::numeric_limits<double>::infinity();
  return linear_to_db(mw);
}

inline constexpr double kMilliwattsPerWatt = 1e3;

/// Mean SNR quoted in dB re 1/W -> linear per-mW normalized SNR.
inline double snr_db_to_per_mw(double db) { return db_to_linear(db) / kMilliwattsPerWatt; }
inline double snr_per_mw_to_db(double per_mw) { return linear_to_db(per_mw * kMilliwattsPerWatt); }

inline constexpr double kSpeedOfLight = 299792458.0;  // m/s

}  // namespace slicing
