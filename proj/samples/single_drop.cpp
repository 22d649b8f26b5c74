// One NOMA drop at reduced Monte Carlo sizes: eMBB water-filling, table-based
// URLLC power, then the constrained descent.

#include <cstdio>

#include "slicing/alloc.hpp"

int main() {
  using namespace slicing;

  Scenario sc;  // 12 x 7 grid, NOMA, F_u = 12
  sc.traffic.epsilon_u = 1e-3;

  const Geometry geom;
  ChannelState ch;
  ch.sigma2_mw = geom.sigma2_mw();
  ch.Gamma_e = mean_snr_from_distance(146.9, geom, ch.sigma2_mw);
  ch.Gamma_u = mean_snr_from_distance(80.0, geom, ch.sigma2_mw);
  ch.gamma_e = sample_snr(ch.Gamma_e, sc.grid.frequencies(), 42);

  TableSettings ts;
  ts.trials = 200'000;
  TableCache tables(ts);

  AllocateOptions opt;
  opt.bcd.crn_trials = 100'000;
  opt.evidence_trials = 200'000;
  const auto both = allocate_both(sc, ch, tables, true, opt);

  for (const auto* r : {&both.nfea, &*both.nbcd}) {
    std::printf("%-6s total %6.2f dBm  urllc %6.2f dBm  embb %6.2f dBm  p_u %.2e\n",
                std::string(to_string(r->algorithm)).c_str(), mw_to_dbm(r->total_power_mw),
                mw_to_dbm(r->urllc_power_mw), mw_to_dbm(r->embb_power_mw), r->p_u_hat.p_hat);
  }
}
