#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "error.hpp"

namespace slicing {

enum class Scheme { oma, noma };

inline std::string_view to_string(Scheme s) { return s == Scheme::oma ? "oma" : "noma"; }

inline Scheme parse_scheme(std::string_view text) {
  if (text == "oma" || text == "OMA") return Scheme::oma;
  if (text == "noma" || text == "NOMA") return Scheme::noma;
  throw Error(ErrorKind::invalid_argument, "unknown scheme '" + std::string(text) + "'");
}

/// Time-frequency canvas of one slot: F frequencies by M mini-slots.
class ResourceGrid {
 public:
  ResourceGrid(std::size_t frequencies, std::size_t minislots, double delta_f_hz, double slot_s)
      : F_(frequencies), M_(minislots), delta_f_(delta_f_hz), T_(slot_s) {
    require(F_ >= 1, "grid needs at least one frequency");
    require(M_ >= 1, "grid needs at least one mini-slot");
    require(delta_f_ > 0.0, "bandwidth per resource must be positive");
    require(T_ > 0.0, "slot duration must be positive");
  }

  std::size_t frequencies() const { return F_; }
  std::size_t minislots() const { return M_; }
  double delta_f() const { return delta_f_; }
  double slot_duration() const { return T_; }
  double minislot_duration() const { return T_ / static_cast<double>(M_); }

  bool operator==(const ResourceGrid&) const = default;

 private:
  std::size_t F_;
  std::size_t M_;
  double delta_f_;
  double T_;
};

struct TrafficSpec {
  double N_e = 8640.0;           // eMBB bits per slot
  double N_u = 2160.0 / 7.0;     // URLLC bits per packet
  double epsilon_u = 1e-5;       // target outage
  std::size_t M_u_max = 1;       // latency budget [mini-slots]
  std::size_t W_u = 0;           // mini-slots already waited

  void validate(const ResourceGrid& grid) const {
    require(N_e > 0.0, "N_e must be positive");
    require(N_u > 0.0, "N_u must be positive");
    require(epsilon_u > 0.0 && epsilon_u < 1.0, "epsilon_u must lie in (0, 1)");
    require(M_u_max >= 1 && M_u_max <= grid.minislots(), "M_u_max must lie in [1, M]");
    require(W_u < M_u_max, "W_u must be below M_u_max");
  }
};

using IndexSet = std::vector<std::size_t>;

struct ResourceSets {
  IndexSet F_u;
  IndexSet F_e;
  IndexSet M_u;
  IndexSet M_e;
  Scheme scheme = Scheme::noma;
};

/// Average spectral efficiency per resource [bit/s/Hz].
inline double spectral_efficiency(double bits, const ResourceGrid& grid, std::size_t F_i,
                                  std::size_t M_i) {
  require(bits > 0.0, "bit count must be positive");
  require(F_i >= 1 && M_i >= 1, "resource counts must be at least 1");
  return bits / (grid.minislot_duration() * grid.delta_f() * static_cast<double>(F_i) *
                 static_cast<double>(M_i));
}

/// Indices of the F_u weakest eMBB frequencies, ascending. Ties go to the lower index.
inline IndexSet select_urllc_frequencies(std::span<const double> gamma_e, std::size_t F_u) {
  require(F_u <= gamma_e.size(), "F_u exceeds the number of frequencies");
  IndexSet order(gamma_e.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return gamma_e[a] < gamma_e[b]; });
  order.resize(F_u);
  std::sort(order.begin(), order.end());
  return order;
}

/// Builds the URLLC/eMBB resource sets for an explicit URLLC frequency set.
/// The URLLC window is the earliest contiguous one starting at mini-slot W_u.
inline ResourceSets build_resource_sets(Scheme scheme, const ResourceGrid& grid, IndexSet F_u,
                                        std::size_t M_u_count, const TrafficSpec& traffic) {
  const std::size_t F = grid.frequencies();
  require(!F_u.empty(), "URLLC needs at least one frequency");
  std::sort(F_u.begin(), F_u.end());
  require(std::adjacent_find(F_u.begin(), F_u.end()) == F_u.end(), "duplicate URLLC frequency");
  require(F_u.back() < F, "URLLC frequency index out of range");
  require(M_u_count >= 1, "URLLC needs at least one mini-slot");
  require(traffic.M_u_max <= grid.minislots(), "latency budget exceeds the slot");

  if (traffic.W_u >= traffic.M_u_max || M_u_count > traffic.M_u_max - traffic.W_u) {
    throw Error(ErrorKind::infeasible_latency,
                "M_u = " + std::to_string(M_u_count) + " exceeds M_u_max - W_u = " +
                    std::to_string(traffic.M_u_max > traffic.W_u ? traffic.M_u_max - traffic.W_u
                                                                 : 0));
  }

  ResourceSets sets;
  sets.scheme = scheme;
  if (scheme == Scheme::noma) {
    sets.F_e.resize(F);
    std::iota(sets.F_e.begin(), sets.F_e.end(), std::size_t{0});
  } else {
    for (std::size_t f = 0; f < F; ++f)
      if (!std::binary_search(F_u.begin(), F_u.end(), f)) sets.F_e.push_back(f);
  }
  sets.F_u = std::move(F_u);
  for (std::size_t t = 0; t < M_u_count; ++t) sets.M_u.push_back(traffic.W_u + t);
  sets.M_e.resize(grid.minislots());
  std::iota(sets.M_e.begin(), sets.M_e.end(), std::size_t{0});
  return sets;
}

/// Same, selecting the URLLC frequencies from the eMBB channel.
inline ResourceSets build_resource_sets(Scheme scheme, const ResourceGrid& grid,
                                        std::span<const double> gamma_e, std::size_t F_u_count,
                                        std::size_t M_u_count, const TrafficSpec& traffic) {
  require(gamma_e.size() == grid.frequencies(), "gamma_e must have one entry per frequency");
  require(F_u_count >= 1, "URLLC needs at least one frequency");
  return build_resource_sets(scheme, grid, select_urllc_frequencies(gamma_e, F_u_count),
                             M_u_count, traffic);
}

}  // namespace slicing
