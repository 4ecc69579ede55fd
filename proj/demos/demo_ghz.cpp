// Generates a shared GHZ state with both cavity schemes and prints the
// reports: one sequential single-cavity run and one parallel multi-cavity run.
#include <cstdio>
#include <string>

#include "qtnet/qtnet.hpp"

using namespace qtnet;

int main(int argc, char** argv) {
  std::uint64_t seed = argc > 1 ? std::stoull(argv[1]) : 11;
  cavity::CavityParams params;  // alpha = 2, cutoff = 48

  {
    OutcomeSource src = OutcomeSource::seeded(seed);
    cavity::SingleCavityResult r = cavity::generate_ghz_single_cavity(4, params, src);
    reports::GhzReport rep;
    rep.method = "single";
    rep.N = 4;
    rep.alpha = params.alpha;
    rep.cutoff = params.cutoff;
    rep.seeded = true;
    rep.seed = seed;
    rep.branch = r.branch == 0 ? "zero" : "nonzero";
    rep.branch_probability = r.branch_probability;
    rep.fidelity = r.fidelity;
    rep.threshold = 1e-6;
    rep.pass = r.fidelity >= 1.0 - rep.threshold;
    std::printf("%s\n", rep.to_json().c_str());
  }

  {
    OutcomeSource src = OutcomeSource::seeded(seed);
    cavity::MultiCavityResult r = cavity::generate_ghz_multi_cavity(3, params, src);
    reports::GhzReport rep;
    rep.method = "multi";
    rep.N = 3;
    rep.alpha = params.alpha;
    rep.cutoff = params.cutoff;
    rep.seeded = true;
    rep.seed = seed;
    rep.atom_outcomes = r.atom_outcomes;
    rep.pcm_pattern = r.pcm_pattern;
    rep.zero_count = r.zero_count;
    rep.parity = r.zero_count % 2 == 0 ? "even" : "odd";
    rep.state_form = (r.zero_count + 3) % 2 == 0 ? "plus" : "minus";
    rep.x_mask = r.x_mask;
    rep.fidelity = r.fidelity;
    rep.threshold = 1e-5;
    rep.pass = r.fidelity >= 1.0 - rep.threshold;
    std::printf("%s\n", rep.to_json().c_str());
  }
  return 0;
}
