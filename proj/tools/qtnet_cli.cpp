#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qtnet/qtnet.hpp"

namespace {

using namespace qtnet;

// Deterministic per-trial stream: distinct trials draw from distinct seeds,
// all derived from the one base seed.
std::uint64_t mix_seed(std::uint64_t base, std::uint64_t k) {
  return base + 0x9E3779B97F4A7C15ULL * (k + 1);
}

std::uint64_t parse_seed_text(const std::string& text, const std::string& what) {
  std::uint64_t value = 0;
  const char* first = text.data();
  const char* last = first + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (text.empty() || ec != std::errc{} || ptr != last)
    throw std::invalid_argument(what + " must be a non-negative integer, got '" + text + "'");
  return value;
}

// Flag wins over the environment; with neither, the seed is 1.
std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("QTNET_SEED")) return parse_seed_text(env, "QTNET_SEED");
  return 1;
}

// One token per measurement event.  Named tokens map to the binary outcomes
// (plus/minus for the report round, zero/nonzero for photon counts); plain
// integers cover everything, including Bell outcome indices.
std::size_t parse_outcome_token(const std::string& tok) {
  if (tok == "plus" || tok == "+" || tok == "zero") return 0;
  if (tok == "minus" || tok == "-" || tok == "nonzero") return 1;
  std::size_t v = 0;
  const char* first = tok.data();
  const char* last = first + tok.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last)
    throw std::invalid_argument("unrecognized outcome token '" + tok + "'");
  return v;
}

std::vector<std::size_t> read_forced_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open forced-outcome file " + path);
  std::vector<std::size_t> out;
  std::string line;
  while (std::getline(in, line)) {
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::string tok;
    while (ls >> tok) out.push_back(parse_outcome_token(tok));
  }
  if (out.empty())
    throw std::invalid_argument("forced-outcome file " + path + " holds no outcomes");
  return out;
}

void print_report(const std::string& format, const std::string& json, const std::string& csv) {
  if (format == "csv") std::cout << csv;
  else std::cout << json << "\n";
}

struct TeleportArgs {
  std::string scheme;
  std::size_t n = 0, i = 0, m = 1;
  std::size_t trials = 1;
  std::optional<std::uint64_t> seed;
  std::string force;  // empty, "all", or a file path
  std::string format = "json";
};

int cmd_teleport(const TeleportArgs& a) {
  using teleport::Scheme;
  const Scheme scheme = a.scheme == "a" ? Scheme::a : Scheme::b;
  const teleport::NetworkConfig cfg(a.n, a.i, a.m);
  const std::uint64_t base_seed = resolve_seed(a.seed);

  reports::TeleportReport rep;
  rep.scheme = a.scheme;
  rep.n = a.n;
  rep.i = a.i;
  rep.m = a.m;
  rep.threshold = 1e-9;

  auto add_row = [&](long long trial, double fid, const teleport::GenBellIndex& p,
                     const teleport::ParityRecord& parity) {
    teleport::CorrectionOp corr =
        teleport::correction_for(scheme, p, scheme == Scheme::b ? &parity : nullptr);
    std::string bits;
    for (int b : corr.to_bits()) bits += static_cast<char>('0' + b);
    rep.rows.push_back({trial, p.p, p.digits(), parity.r, corr.to_string(), bits, fid});
  };

  if (a.force == "all") {
    // Exhaustive branch table: every Bell outcome crossed with every
    // report-round pattern (one pattern for the disentangling scheme).
    rep.seeded = false;
    rep.forced = "all";
    const std::size_t outcomes = std::size_t{1} << (2 * a.m);
    const std::size_t pattern_bits = scheme == Scheme::b ? (a.n - 1) * a.m : 0;
    const std::size_t patterns = std::size_t{1} << pattern_bits;
    long long trial = 0;
    for (std::size_t p = 0; p < outcomes; ++p) {
      for (std::size_t pat = 0; pat < patterns; ++pat) {
        std::vector<std::size_t> forced;
        for (std::size_t b = 0; b < pattern_bits; ++b)
          forced.push_back((pat >> (pattern_bits - 1 - b)) & 1);
        forced.push_back(p);
        teleport::InfoState info = teleport::InfoState::random(
            a.m, mix_seed(base_seed, static_cast<std::uint64_t>(trial)));
        netsim::SessionOptions opt;
        opt.forced_outcomes = std::move(forced);
        netsim::SessionResult r = netsim::run_session(scheme, cfg, info, opt);
        add_row(trial++, r.fidelity, r.p, r.parity);
      }
    }
  } else if (!a.force.empty()) {
    // One shared token stream across all trials, in session order.
    rep.seeded = false;
    rep.forced = "file";
    OutcomeSource source = OutcomeSource::forced(read_forced_file(a.force));
    for (std::size_t trial = 0; trial < a.trials; ++trial) {
      teleport::InfoState info = teleport::InfoState::random(a.m, mix_seed(base_seed, trial));
      teleport::TeleportResult r = teleport::run_teleport(scheme, cfg, info, source);
      netsim::VerifyResult v = netsim::verify_transcript(r.transcript);
      if (!v.ok) throw std::logic_error("session transcript failed verification: " + v.violation);
      add_row(static_cast<long long>(trial), r.fidelity, r.p, r.parity);
    }
  } else {
    rep.seeded = true;
    rep.seed = base_seed;
    for (std::size_t trial = 0; trial < a.trials; ++trial) {
      teleport::InfoState info = teleport::InfoState::random(a.m, mix_seed(base_seed, trial));
      netsim::SessionOptions opt;
      opt.seed = mix_seed(base_seed, trial) ^ 0xA5A5A5A5A5A5A5A5ULL;
      netsim::SessionResult r = netsim::run_session(scheme, cfg, info, opt);
      add_row(static_cast<long long>(trial), r.fidelity, r.p, r.parity);
    }
  }

  rep.trials = rep.rows.size();
  double min_fid = 1.0, sum = 0.0;
  for (const reports::TeleportTrialRow& r : rep.rows) {
    min_fid = std::min(min_fid, r.fidelity);
    sum += r.fidelity;
  }
  rep.min_fidelity = min_fid;
  rep.mean_fidelity = rep.rows.empty() ? 0.0 : sum / static_cast<double>(rep.rows.size());
  rep.pass = rep.min_fidelity >= 1.0 - rep.threshold;
  print_report(a.format, rep.to_json(), rep.to_csv());
  return rep.pass ? 0 : 1;
}

struct GhzArgs {
  std::string method;
  std::size_t N = 0;
  double alpha = 2.0;
  std::size_t cutoff = 48;
  std::optional<std::uint64_t> seed;
  std::string force;  // optional file path
  std::string format = "json";
};

int cmd_ghz(const GhzArgs& a) {
  reports::GhzReport rep;
  rep.method = a.method;
  rep.N = a.N;
  rep.alpha = a.alpha;
  rep.cutoff = a.cutoff;

  if (a.alpha == 0.0) {
    rep.warning = "discrimination impossible (p_error = 1)";
    print_report(a.format, rep.to_json(), rep.to_csv());
    return 1;
  }
  if (a.force == "all")
    throw std::invalid_argument("ghz --force-outcomes takes a file path, not 'all'");

  cavity::CavityParams params(a.alpha, a.cutoff);
  OutcomeSource source = a.force.empty()
                             ? OutcomeSource::seeded(resolve_seed(a.seed))
                             : OutcomeSource::forced(read_forced_file(a.force));
  rep.seeded = !source.forced_mode();
  rep.seed = source.seed();

  if (a.method == "single") {
    cavity::SingleCavityResult r = cavity::generate_ghz_single_cavity(a.N, params, source);
    rep.branch = r.branch == 0 ? "zero" : "nonzero";
    rep.branch_probability = r.branch_probability;
    rep.fidelity = r.fidelity;
    rep.threshold = 1e-6;
  } else {
    cavity::MultiCavityResult r = cavity::generate_ghz_multi_cavity(a.N, params, source);
    rep.atom_outcomes = r.atom_outcomes;
    rep.pcm_pattern = r.pcm_pattern;
    rep.zero_count = r.zero_count;
    rep.parity = r.zero_count % 2 == 0 ? "even" : "odd";
    rep.state_form = (r.zero_count + a.N) % 2 == 0 ? "plus" : "minus";
    rep.x_mask = r.x_mask;
    rep.fidelity = r.fidelity;
    rep.threshold = 1e-5;
  }
  rep.pass = rep.fidelity >= 1.0 - rep.threshold;
  print_report(a.format, rep.to_json(), rep.to_csv());
  return rep.pass ? 0 : 1;
}

struct FeasibilityArgs {
  cavity::TimingParams timing;
  std::string format = "json";
};

int cmd_feasibility(const FeasibilityArgs& a) {
  cavity::FeasibilityResult r = cavity::feasibility_max_atoms(a.timing);
  reports::FeasibilityReport rep{a.timing.t,    a.timing.T, a.timing.T_D, a.timing.budget,
                                 r.n_max,       r.limited,  3.0 * a.timing.T};
  print_report(a.format, rep.to_json(), rep.to_csv());
  return 0;
}

struct SweepArgs {
  std::string alphas = "1,1.5,2";
  std::size_t N = 2;
  std::size_t cutoff = 48;
  std::string format = "json";
};

std::vector<double> parse_alpha_list(const std::string& text) {
  std::vector<double> out;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) throw std::invalid_argument("empty entry in --alphas");
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("bad amplitude '" + item + "' in --alphas");
    }
    if (used != item.size())
      throw std::invalid_argument("bad amplitude '" + item + "' in --alphas");
    out.push_back(v);
  }
  if (out.empty()) throw std::invalid_argument("--alphas holds no amplitudes");
  return out;
}

int cmd_sweep(const SweepArgs& a) {
  std::vector<double> alphas = parse_alpha_list(a.alphas);
  std::vector<cavity::SweepRow> rows = cavity::pcm_error_sweep(alphas, a.N, a.cutoff);
  reports::SweepReport rep;
  rep.N = a.N;
  rep.cutoff = a.cutoff;
  rep.tolerance = 1e-9;
  rep.max_abs_diff = 0.0;
  for (const cavity::SweepRow& r : rows) {
    rep.rows.push_back({r.alpha, r.p_error, r.p_error_sim, r.infidelity});
    if (r.alpha > 0.0)
      rep.max_abs_diff = std::max(rep.max_abs_diff, std::abs(r.p_error - r.p_error_sim));
  }
  rep.pass = rep.max_abs_diff <= rep.tolerance;
  print_report(a.format, rep.to_json(), rep.to_csv());
  return rep.pass ? 0 : 1;
}

void add_format_option(CLI::App* sub, std::string& format) {
  sub->add_option("--format", format, "output format")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"deterministic simulator for networked teleportation and cavity-built shared states"};
  app.require_subcommand(1);

  TeleportArgs ta;
  std::uint64_t ta_seed = 0;
  CLI::App* tele = app.add_subcommand("teleport", "run teleportation sessions");
  tele->add_option("--scheme", ta.scheme, "protocol variant")
      ->required()
      ->check(CLI::IsMember({"a", "b"}));
  tele->add_option("--n", ta.n, "receiver count")->required();
  tele->add_option("--i", ta.i, "target receiver (1-based)")->required();
  tele->add_option("--m", ta.m, "payload qubits")->capture_default_str();
  tele->add_option("--trials", ta.trials, "session count")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  CLI::Option* ta_seed_opt = tele->add_option("--seed", ta_seed, "base seed");
  tele->add_option("--force-outcomes", ta.force, "outcome file, or 'all' for every branch");
  add_format_option(tele, ta.format);

  GhzArgs ga;
  std::uint64_t ga_seed = 0;
  CLI::App* ghz = app.add_subcommand("ghz", "generate a shared entangled state");
  ghz->add_option("--method", ga.method, "cavity pipeline")
      ->required()
      ->check(CLI::IsMember({"single", "multi"}));
  ghz->add_option("--N", ga.N, "party count")->required();
  ghz->add_option("--alpha", ga.alpha, "coherent amplitude")->capture_default_str();
  ghz->add_option("--cutoff", ga.cutoff, "Fock cutoff")->capture_default_str();
  CLI::Option* ga_seed_opt = ghz->add_option("--seed", ga_seed, "seed");
  ghz->add_option("--force-outcomes", ga.force, "outcome file");
  add_format_option(ghz, ga.format);

  FeasibilityArgs fa;
  CLI::App* feas = app.add_subcommand("feasibility", "atom budget under flight-time limits");
  feas->add_option("--t", fa.timing.t, "atom-cavity interaction time")->capture_default_str();
  feas->add_option("--T", fa.timing.T, "cavity transit time")->capture_default_str();
  feas->add_option("--Td", fa.timing.T_D, "cavity damping time")->capture_default_str();
  feas->add_option("--budget", fa.timing.budget, "allowed total flight time")
      ->capture_default_str();
  add_format_option(feas, fa.format);

  SweepArgs sa;
  CLI::App* sweep = app.add_subcommand("sweep", "photon-count discrimination error sweep");
  sweep->add_option("--alphas", sa.alphas, "comma-separated amplitudes")->capture_default_str();
  sweep->add_option("--N", sa.N, "atom count for the infidelity column")->capture_default_str();
  sweep->add_option("--cutoff", sa.cutoff, "Fock cutoff")->capture_default_str();
  add_format_option(sweep, sa.format);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (ta_seed_opt->count() > 0) ta.seed = ta_seed;
    if (ga_seed_opt->count() > 0) ga.seed = ga_seed;
    if (tele->parsed()) return cmd_teleport(ta);
    if (ghz->parsed()) return cmd_ghz(ga);
    if (feas->parsed()) return cmd_feasibility(fa);
    if (sweep->parsed()) return cmd_sweep(sa);
  } catch (const guard_error& e) {
    std::cerr << "numerical guard: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
  return 2;
}
