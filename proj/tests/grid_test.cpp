#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "slicing/grid.hpp"

using namespace slicing;

namespace {

ResourceGrid paper_grid() { return ResourceGrid(12, 7, 180e3, 1e-3); }

}  // namespace

TEST(ResourceGrid, RejectsDegenerateDimensions) {
  EXPECT_THROW(ResourceGrid(0, 7, 180e3, 1e-3), Error);
  EXPECT_THROW(ResourceGrid(12, 0, 180e3, 1e-3), Error);
  EXPECT_THROW(ResourceGrid(12, 7, 0.0, 1e-3), Error);
  EXPECT_THROW(ResourceGrid(12, 7, 180e3, -1.0), Error);
}

TEST(ResourceGrid, MinislotDurationTilesTheSlot) {
  const auto g = paper_grid();
  EXPECT_DOUBLE_EQ(g.minislot_duration() * 7.0, g.slot_duration());
}

TEST(SpectralEfficiency, UrllcPacketOnFullNomaGrid) {
  EXPECT_NEAR(spectral_efficiency(2160.0 / 7.0, paper_grid(), 12, 1), 1.0, 1e-12);
}

TEST(SpectralEfficiency, EmbbPayloadOnFullSlot) {
  EXPECT_NEAR(spectral_efficiency(8640.0, paper_grid(), 12, 7), 4.0, 1e-12);
}

TEST(SpectralEfficiency, DoublingMinislotsHalvesRate) {
  const auto g = paper_grid();
  EXPECT_NEAR(spectral_efficiency(1000.0, g, 3, 4), spectral_efficiency(1000.0, g, 3, 2) / 2.0, 1e-12);
}

TEST(SpectralEfficiency, RejectsZeroCounts) {
  EXPECT_THROW(spectral_efficiency(100.0, paper_grid(), 0, 1), Error);
  EXPECT_THROW(spectral_efficiency(100.0, paper_grid(), 1, 0), Error);
  EXPECT_THROW(spectral_efficiency(-1.0, paper_grid(), 1, 1), Error);
}

TEST(SpectralEfficiency, BitConservation) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<std::size_t> count(1, 12);
  std::uniform_real_distribution<double> bits(1.0, 1e5);
  for (int i = 0; i < 500; ++i) {
    const ResourceGrid g(12, 1 + rng() % 14, 15e3 * (1 + rng() % 16), 1e-3 * (1 + rng() % 4));
    const double n = bits(rng);
    const std::size_t F = count(rng), M = 1 + rng() % g.minislots();
    const double back = spectral_efficiency(n, g, F, M) * g.minislot_duration() * g.delta_f() *
                        static_cast<double>(F) * static_cast<double>(M);
    EXPECT_NEAR(back, n, 1e-12 * n);
  }
}

TEST(SelectUrllcFrequencies, PicksWeakest) {
  const std::vector<double> g{3, 1, 2};
  EXPECT_EQ(select_urllc_frequencies(g, 1), (IndexSet{1}));
  EXPECT_EQ(select_urllc_frequencies(g, 2), (IndexSet{1, 2}));
  EXPECT_EQ(select_urllc_frequencies(g, 0), IndexSet{});
}

TEST(SelectUrllcFrequencies, TiesGoToLowestIndex) {
  EXPECT_EQ(select_urllc_frequencies(std::vector<double>{5, 5, 5}, 2), (IndexSet{0, 1}));
}

TEST(SelectUrllcFrequencies, RejectsTooMany) {
  EXPECT_THROW(select_urllc_frequencies(std::vector<double>{1, 2}, 3), Error);
}

// Exhaustive subset enumeration as the oracle.
TEST(SelectUrllcFrequencies, MinimizesSumOverAllSubsets) {
  std::mt19937_64 rng(11);
  std::exponential_distribution<double> draw(1.0);
  for (int rep = 0; rep < 40; ++rep) {
    const std::size_t F = 1 + rng() % 12;
    std::vector<double> g(F);
    for (auto& x : g) x = draw(rng);
    const std::size_t k = rng() % (F + 1);
    const auto chosen = select_urllc_frequencies(g, k);
    double chosen_sum = 0.0;
    for (auto f : chosen) chosen_sum += g[f];
    double best = std::numeric_limits<double>::infinity();
    for (unsigned mask = 0; mask < (1u << F); ++mask) {
      if (static_cast<std::size_t>(std::popcount(mask)) != k) continue;
      double s = 0.0;
      for (std::size_t f = 0; f < F; ++f)
        if (mask >> f & 1u) s += g[f];
      best = std::min(best, s);
    }
    EXPECT_NEAR(chosen_sum, best, 1e-12);
  }
}

TEST(BuildResourceSets, NomaSharesEverything) {
  TrafficSpec tr;
  tr.M_u_max = 7;
  const std::vector<double> gamma(12, 1.0);
  const auto sets = build_resource_sets(Scheme::noma, paper_grid(), gamma, 12, 1, tr);
  IndexSet all(12);
  std::iota(all.begin(), all.end(), std::size_t{0});
  EXPECT_EQ(sets.F_u, all);
  EXPECT_EQ(sets.F_e, all);
  EXPECT_EQ(sets.M_e.size(), 7u);
}

TEST(BuildResourceSets, OmaPartitionsFrequencies) {
  TrafficSpec tr;
  tr.M_u_max = 4;
  const ResourceGrid toy(6, 4, 180e3, 1e-3);
  const auto sets = build_resource_sets(Scheme::oma, toy, IndexSet{1, 3, 5}, 1, tr);
  EXPECT_EQ(sets.F_e, (IndexSet{0, 2, 4}));
  EXPECT_EQ(sets.F_u, (IndexSet{1, 3, 5}));
}

TEST(BuildResourceSets, OmaPartitionProperty) {
  std::mt19937_64 rng(5);
  std::exponential_distribution<double> draw(1.0);
  TrafficSpec tr;
  tr.M_u_max = 7;
  for (int rep = 0; rep < 50; ++rep) {
    std::vector<double> g(12);
    for (auto& x : g) x = draw(rng);
    const std::size_t k = 1 + rng() % 11;
    const auto sets = build_resource_sets(Scheme::oma, paper_grid(), g, k, 1, tr);
    IndexSet merged;
    std::set_union(sets.F_u.begin(), sets.F_u.end(), sets.F_e.begin(), sets.F_e.end(),
                   std::back_inserter(merged));
    IndexSet common;
    std::set_intersection(sets.F_u.begin(), sets.F_u.end(), sets.F_e.begin(), sets.F_e.end(),
                          std::back_inserter(common));
    EXPECT_EQ(merged.size(), 12u);
    EXPECT_TRUE(common.empty());
  }
}

TEST(BuildResourceSets, WindowStartsAfterWaitAndIsContiguous) {
  TrafficSpec tr;
  tr.M_u_max = 7;
  tr.W_u = 2;
  const auto sets = build_resource_sets(Scheme::noma, paper_grid(), IndexSet{0}, 3, tr);
  EXPECT_EQ(sets.M_u, (IndexSet{2, 3, 4}));
}

TEST(BuildResourceSets, LatencyBudgetExhausted) {
  TrafficSpec tr;
  tr.M_u_max = 7;
  tr.W_u = 7;
  try {
    build_resource_sets(Scheme::noma, paper_grid(), IndexSet{0}, 1, tr);
    FAIL() << "expected infeasible-latency";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::infeasible_latency);
  }
  tr.W_u = 5;
  EXPECT_THROW(build_resource_sets(Scheme::noma, paper_grid(), IndexSet{0}, 3, tr), Error);
  EXPECT_NO_THROW(build_resource_sets(Scheme::noma, paper_grid(), IndexSet{0}, 2, tr));
}
