// Runs one teleportation session over a three-receiver network and prints the
// report followed by the full event transcript.
#include <cstdio>
#include <string>

#include "qtnet/qtnet.hpp"

using namespace qtnet;

int main(int argc, char** argv) {
  std::uint64_t seed = argc > 1 ? std::stoull(argv[1]) : 7;

  teleport::NetworkConfig cfg(3, 2, 1);
  teleport::InfoState info = teleport::InfoState::random(cfg.m, seed);
  netsim::SessionOptions opt;
  opt.seed = seed;
  netsim::SessionResult r = netsim::run_session(teleport::Scheme::b, cfg, info, opt);

  teleport::CorrectionOp corr = teleport::correction_for(teleport::Scheme::b, r.p, &r.parity);
  std::string bits;
  for (int b : corr.to_bits()) bits += static_cast<char>('0' + b);

  reports::TeleportReport rep;
  rep.scheme = "b";
  rep.n = cfg.n;
  rep.i = cfg.i;
  rep.m = cfg.m;
  rep.trials = 1;
  rep.seeded = true;
  rep.seed = seed;
  rep.threshold = 1e-9;
  rep.rows.push_back({0, r.p.p, r.p.digits(), r.parity.r, corr.to_string(), bits, r.fidelity});
  rep.min_fidelity = r.fidelity;
  rep.mean_fidelity = r.fidelity;
  rep.pass = r.fidelity >= 1.0 - rep.threshold;
  std::printf("%s\n", rep.to_json().c_str());

  std::printf("\ntranscript (%zu events):\n%s", r.transcript.events.size(),
              r.transcript.to_jsonl().c_str());

  netsim::VerifyResult v = netsim::verify_transcript(r.transcript);
  std::printf("\ncausality check: %s\n", v.ok ? "ok" : v.violation.c_str());
  return v.ok ? 0 : 1;
}
