#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "error.hpp"
#include "grid.hpp"
#include "parallel.hpp"
#include "rng.hpp"
#include "units.hpp"
#include "waterfill.hpp"

namespace slicing {

// ---------------------------------------------------------------------------
// Mutual information evaluators [bit/s/Hz]. Vectors are full grid width.

/// URLLC stream at the URLLC receiver for one channel realization gamma_u.
inline double mutual_info_u(const PowerVector& P_u, const PowerVector& P_e,
                            std::span<const double> gamma_u, const IndexSet& F_u) {
  if (F_u.empty()) return 0.0;
  double bits = 0.0;
  for (std::size_t f : F_u)
    bits += std::log2(1.0 + gamma_u[f] * P_u[f] / (1.0 + gamma_u[f] * P_e[f]));
  return bits / static_cast<double>(F_u.size());
}

/// URLLC stream decoded at the eMBB receiver (the SIC step). Zero under OMA.
inline double mutual_info_sic(const PowerVector& P_u, const PowerVector& P_e,
                              std::span<const double> gamma_e, const IndexSet& F_u,
                              Scheme scheme = Scheme::noma) {
  if (scheme == Scheme::oma) return 0.0;
  return mutual_info_u(P_u, P_e, gamma_e, F_u);
}

/// eMBB stream after a successful SIC.
inline double mutual_info_e(const PowerVector& P_e, std::span<const double> gamma_e,
                            const IndexSet& F_e) {
  if (F_e.empty()) return 0.0;
  double bits = 0.0;
  for (std::size_t f : F_e) bits += std::log2(1.0 + gamma_e[f] * P_e[f]);
  return bits / static_cast<double>(F_e.size());
}

/// High-SNR lower bound of the URLLC information with zero-interference
/// frequencies charged the weakest nonzero interference.
inline double mutual_info_il(const PowerVector& P_u, const PowerVector& P_e, const IndexSet& F_u) {
  if (F_u.empty()) return 0.0;
  const auto interference = il_interference(P_e, F_u);
  double bits = 0.0;
  for (std::size_t i = 0; i < F_u.size(); ++i)
    bits += std::log2(1.0 + P_u[F_u[i]] / interference[i]);
  return bits / static_cast<double>(F_u.size());
}

// ---------------------------------------------------------------------------
// Monte Carlo outage estimation

struct OutageEstimate {
  double p_hat = 0.0;
  std::uint64_t trials = 0;
  double ci_halfwidth = 0.0;  // 3-sigma binomial

  static OutageEstimate from_count(std::uint64_t outages, std::uint64_t trials) {
    OutageEstimate e;
    e.trials = trials;
    e.p_hat = trials ? static_cast<double>(outages) / static_cast<double>(trials) : 0.0;
    e.ci_halfwidth = trials ? 3.0 * std::sqrt(e.p_hat * (1.0 - e.p_hat) / static_cast<double>(trials))
                            : 0.0;
    return e;
  }
};

/// Trials are generated in fixed-size blocks, each with its own sub-stream, so
/// the estimate does not depend on how blocks are spread over threads.
inline constexpr std::uint64_t kTrialBlock = 1u << 16;

namespace detail {

inline std::uint64_t block_seed(std::uint64_t seed, std::uint64_t block) {
  return derive_seed(seed, {stream_tag("trial-block"), block});
}

inline std::uint64_t block_count(std::uint64_t trials) {
  return (trials + kTrialBlock - 1) / kTrialBlock;
}

/// Accumulated information over one trial: sum_f log2(1 + x P_u / (1 + x P_e)).
inline double trial_bits(std::span<const double> x, std::span<const double> P_u,
                         std::span<const double> P_e) {
  double bits = 0.0;
  for (std::size_t f = 0; f < x.size(); ++f)
    bits += std::log2(1.0 + x[f] * P_u[f] / (1.0 + x[f] * P_e[f]));
  return bits;
}

}  // namespace detail

/// Fraction of i.i.d. Exp(Gamma_u) channel draws for which the URLLC packet is
/// in outage. P_u and P_e are aligned with the URLLC frequencies.
inline OutageEstimate estimate_outage(std::span<const double> P_u, std::span<const double> P_e,
                                      double Gamma_u, double r_u, std::uint64_t trials,
                                      std::uint64_t seed, unsigned threads = default_threads()) {
  require(trials >= 1, "need at least one trial");
  require(P_u.size() == P_e.size() && !P_u.empty(), "power vectors must align and be nonempty");
  require(Gamma_u > 0.0, "mean SNR must be positive");
  const std::size_t F_u = P_u.size();
  const double target = static_cast<double>(F_u) * r_u;
  const std::uint64_t blocks = detail::block_count(trials);
  std::vector<std::uint64_t> outages(blocks, 0);

  parallel_for(
      blocks,
      [&](std::size_t b) {
        Stream rng(detail::block_seed(seed, b));
        const std::uint64_t begin = b * kTrialBlock;
        const std::uint64_t end = std::min<std::uint64_t>(trials, begin + kTrialBlock);
        std::vector<double> x(F_u);
        std::uint64_t count = 0;
        for (std::uint64_t t = begin; t < end; ++t) {
          for (auto& v : x) v = rng.exponential(Gamma_u);
          if (detail::trial_bits(x, P_u, P_e) <= target) ++count;
        }
        outages[b] = count;
      },
      threads);

  std::uint64_t total = 0;
  for (auto c : outages) total += c;
  return OutageEstimate::from_count(total, trials);
}

/// Full-width overload: restricts both vectors to F_u.
inline OutageEstimate estimate_outage(const PowerVector& P_u, const PowerVector& P_e,
                                      const IndexSet& F_u, double Gamma_u, double r_u,
                                      std::uint64_t trials, std::uint64_t seed,
                                      unsigned threads = default_threads()) {
  std::vector<double> pu, pe;
  for (std::size_t f : F_u) {
    pu.push_back(P_u[f]);
    pe.push_back(P_e[f]);
  }
  return estimate_outage(pu, pe, Gamma_u, r_u, trials, seed, threads);
}

/// Closed-form single-frequency URLLC power for Rayleigh fading [mW].
inline double single_freq_power(double r_u, double Gamma_u, double epsilon_u, double P_e_mw) {
  require(epsilon_u > 0.0 && epsilon_u < 1.0, "epsilon_u must lie in (0, 1)");
  require(Gamma_u > 0.0, "mean SNR must be positive");
  return (std::exp2(r_u) - 1.0) * (P_e_mw - 1.0 / (Gamma_u * std::log1p(-epsilon_u)));
}

// ---------------------------------------------------------------------------
// Common-random-number evaluation

/// Fixed matrix of unit-mean exponential draws (trials x F_u), reused across
/// candidate power vectors so comparisons between them are deterministic.
class CrnDraws {
 public:
  CrnDraws(std::size_t trials, std::size_t F_u, std::uint64_t seed) : trials_(trials), F_u_(F_u) {
    require(trials >= 1 && F_u >= 1, "CRN matrix needs trials and frequencies");
    unit_.resize(trials * F_u);
    const std::uint64_t blocks = detail::block_count(trials);
    for (std::uint64_t b = 0; b < blocks; ++b) {
      Stream rng(detail::block_seed(seed, b));
      const std::uint64_t begin = b * kTrialBlock;
      const std::uint64_t end = std::min<std::uint64_t>(trials, begin + kTrialBlock);
      for (std::uint64_t t = begin; t < end; ++t)
        for (std::size_t f = 0; f < F_u; ++f) unit_[f * trials_ + t] = rng.exponential(1.0);
    }
  }

  std::size_t trials() const { return trials_; }
  std::size_t frequencies() const { return F_u_; }
  /// Column of draws for URLLC frequency slot f (position within F_u).
  std::span<const double> column(std::size_t f) const {
    return {unit_.data() + f * trials_, trials_};
  }

 private:
  std::size_t trials_;
  std::size_t F_u_;
  std::vector<double> unit_;
};

/// Outage estimate over a fixed draw matrix. P_u and P_e are aligned with F_u.
inline OutageEstimate estimate_outage_crn(const CrnDraws& draws, std::span<const double> P_u,
                                          std::span<const double> P_e, double Gamma_u,
                                          double r_u) {
  require(P_u.size() == draws.frequencies() && P_e.size() == draws.frequencies(),
          "power vectors must match the CRN matrix width");
  const double target = static_cast<double>(P_u.size()) * r_u;
  std::vector<double> bits(draws.trials(), 0.0);
  for (std::size_t f = 0; f < P_u.size(); ++f) {
    const auto col = draws.column(f);
    for (std::size_t t = 0; t < col.size(); ++t) {
      const double x = Gamma_u * col[t];
      bits[t] += std::log2(1.0 + x * P_u[f] / (1.0 + x * P_e[f]));
    }
  }
  std::uint64_t count = 0;
  for (double b : bits)
    if (b <= target) ++count;
  return OutageEstimate::from_count(count, draws.trials());
}

/// Incremental CRN evaluator for coordinate-wise search: caches per-frequency
/// terms so a single-coordinate change costs one column of logarithms.
class CrnOutageEvaluator {
 public:
  CrnOutageEvaluator(const CrnDraws& draws, std::vector<double> P_u, std::vector<double> P_e,
                     double Gamma_u, double r_u)
      : draws_(&draws),
        P_u_(std::move(P_u)),
        P_e_(std::move(P_e)),
        Gamma_u_(Gamma_u),
        target_(static_cast<double>(draws.frequencies()) * r_u),
        terms_(draws.frequencies() * draws.trials()) {
    require(P_u_.size() == draws.frequencies() && P_e_.size() == draws.frequencies(),
            "power vectors must match the CRN matrix width");
    for (std::size_t f = 0; f < P_u_.size(); ++f) fill_column(f, P_u_[f], column_terms(f));
  }

  std::size_t trials() const { return draws_->trials(); }
  std::span<const double> powers() const { return P_u_; }

  /// Outage count with coordinate f set to p; stops early once `limit` is exceeded.
  std::uint64_t count_with(std::size_t f, double p, std::uint64_t limit) const {
    scratch_.resize(trials());
    fill_column(f, p, scratch_);
    return count(f, scratch_, limit);
  }

  std::uint64_t count_current() const {
    return count(P_u_.size(), {}, std::numeric_limits<std::uint64_t>::max());
  }

  void set(std::size_t f, double p) {
    P_u_[f] = p;
    fill_column(f, p, column_terms(f));
  }

 private:
  std::span<double> column_terms(std::size_t f) {
    return {terms_.data() + f * trials(), trials()};
  }
  std::span<const double> column_terms(std::size_t f) const {
    return {terms_.data() + f * trials(), trials()};
  }

  void fill_column(std::size_t f, double p, std::span<double> out) const {
    const auto col = draws_->column(f);
    const double pe = P_e_[f];
    for (std::size_t t = 0; t < col.size(); ++t) {
      const double x = Gamma_u_ * col[t];
      out[t] = std::log2(1.0 + x * p / (1.0 + x * pe));
    }
  }

  // Sums terms in frequency order, substituting `replacement` for column `which`.
  std::uint64_t count(std::size_t which, std::span<const double> replacement,
                      std::uint64_t limit) const {
    const std::size_t n = trials();
    const std::size_t width = P_u_.size();
    std::uint64_t outages = 0;
    for (std::size_t t = 0; t < n; ++t) {
      double bits = 0.0;
      for (std::size_t f = 0; f < width; ++f)
        bits += f == which ? replacement[t] : terms_[f * n + t];
      if (bits <= target_ && ++outages > limit) return outages;
    }
    return outages;
  }

  const CrnDraws* draws_;
  std::vector<double> P_u_;
  std::vector<double> P_e_;
  double Gamma_u_;
  double target_;
  std::vector<double> terms_;
  mutable std::vector<double> scratch_;
};

}  // namespace slicing
