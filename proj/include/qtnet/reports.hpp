#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qtnet/json_writer.hpp"

namespace qtnet::reports {

// Report schema rule: fixed field order, floats at 12 significant digits, so
// identical inputs serialize to identical bytes in both formats.

inline std::string csv_escape(const std::string& s) {
  bool needs_quotes = s.find_first_of(",\"\n") != std::string::npos;
  if (!needs_quotes) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += '"';
  return out;
}

inline std::string join_ints(const std::vector<int>& v, char sep = ';') {
  std::string s;
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (k) s += sep;
    s += std::to_string(v[k]);
  }
  return s;
}

struct TeleportTrialRow {
  long long trial;
  std::size_t p;              // measurement outcome index
  std::vector<int> digits;    // quaternary digits of p
  std::vector<int> parity;    // scheme B minus counts, empty for scheme A
  std::string code;           // correction as I/Z/X/ZX per qubit
  std::string bits;           // transmitted 2m-bit string
  double fidelity;
};

struct TeleportReport {
  std::string scheme;  // "a" | "b"
  std::size_t n, i, m;
  std::size_t trials;
  bool seeded;
  std::uint64_t seed;          // meaningful when seeded
  std::string forced;          // "", "file", or "all"
  std::vector<TeleportTrialRow> rows;
  double min_fidelity;
  double mean_fidelity;
  double threshold;  // pass iff min_fidelity >= 1 - threshold
  bool pass;

  std::string to_json() const {
    JsonWriter w;
    w.begin_object();
    w.kv("command", "teleport").kv("scheme", scheme).kv("n", n).kv("i", i).kv("m", m);
    w.kv("trials", trials).kv("seeded", seeded);
    if (seeded) w.kv("seed", static_cast<unsigned long long>(seed));
    if (!forced.empty()) w.kv("forced", forced);
    w.key("rows").begin_array();
    for (const TeleportTrialRow& r : rows) {
      w.begin_object();
      w.kv("trial", r.trial).kv("p", r.p);
      w.int_array("digits", r.digits);
      if (scheme == "b") w.int_array("parity", r.parity);
      w.kv("code", r.code).kv("bits", r.bits).kv("fidelity", r.fidelity);
      w.end_object();
    }
    w.end_array();
    w.kv("min_fidelity", min_fidelity).kv("mean_fidelity", mean_fidelity);
    w.kv("threshold", threshold).kv("pass", pass);
    w.end_object();
    return w.str();
  }

  std::string to_csv() const {
    std::string out = "trial,p,digits,parity,code,bits,fidelity\n";
    for (const TeleportTrialRow& r : rows) {
      out += std::to_string(r.trial) + ',' + std::to_string(r.p) + ',' + join_ints(r.digits) +
             ',' + join_ints(r.parity) + ',' + csv_escape(r.code) + ',' + r.bits + ',' +
             format_double(r.fidelity) + '\n';
    }
    out += "min_fidelity," + format_double(min_fidelity) + '\n';
    out += "mean_fidelity," + format_double(mean_fidelity) + '\n';
    out += std::string("pass,") + (pass ? "true" : "false") + '\n';
    return out;
  }
};

struct GhzReport {
  std::string method;  // "single" | "multi"
  std::size_t N;
  double alpha;
  std::size_t cutoff;
  bool seeded;
  std::uint64_t seed;
  std::string warning;  // degenerate-amplitude note, empty otherwise
  // single-cavity fields
  std::string branch;  // "zero" | "nonzero"
  double branch_probability = 0.0;
  // multi-cavity fields
  std::vector<int> atom_outcomes;
  std::vector<int> pcm_pattern;
  std::size_t zero_count = 0;
  std::string parity;      // "even" | "odd"
  std::string state_form;  // relative sign before fixup: "plus" | "minus"
  std::vector<int> x_mask;
  double fidelity = 0.0;
  double threshold = 0.0;
  bool pass = false;

  std::string to_json() const {
    JsonWriter w;
    w.begin_object();
    w.kv("command", "ghz").kv("method", method).kv("N", N).kv("alpha", alpha).kv("cutoff", cutoff);
    if (!warning.empty()) {
      w.kv("warning", warning).kv("pass", false);
      w.end_object();
      return w.str();
    }
    w.kv("seeded", seeded);
    if (seeded) w.kv("seed", static_cast<unsigned long long>(seed));
    if (method == "single") {
      w.kv("branch", branch).kv("branch_probability", branch_probability);
    } else {
      w.int_array("atom_outcomes", atom_outcomes);
      w.int_array("pcm_pattern", pcm_pattern);
      w.kv("zero_count", zero_count).kv("parity", parity).kv("state_form", state_form);
      w.int_array("x_mask", x_mask);
    }
    w.kv("fidelity", fidelity).kv("threshold", threshold).kv("pass", pass);
    w.end_object();
    return w.str();
  }

  std::string to_csv() const {
    std::string out = "field,value\n";
    auto kv = [&out](const std::string& k, const std::string& v) { out += k + ',' + v + '\n'; };
    kv("command", "ghz");
    kv("method", method);
    kv("N", std::to_string(N));
    kv("alpha", format_double(alpha));
    kv("cutoff", std::to_string(cutoff));
    if (!warning.empty()) {
      kv("warning", csv_escape(warning));
      kv("pass", "false");
      return out;
    }
    kv("seeded", seeded ? "true" : "false");
    if (seeded) kv("seed", std::to_string(seed));
    if (method == "single") {
      kv("branch", branch);
      kv("branch_probability", format_double(branch_probability));
    } else {
      kv("atom_outcomes", join_ints(atom_outcomes));
      kv("pcm_pattern", join_ints(pcm_pattern));
      kv("zero_count", std::to_string(zero_count));
      kv("parity", parity);
      kv("state_form", state_form);
      kv("x_mask", join_ints(x_mask));
    }
    kv("fidelity", format_double(fidelity));
    kv("threshold", format_double(threshold));
    kv("pass", pass ? "true" : "false");
    return out;
  }
};

struct FeasibilityReport {
  double t, T, T_D, budget;
  long long n_max;
  bool limited;
  double multi_cavity_interaction_time;  // 3T, the parallel scheme's total

  std::string to_json() const {
    JsonWriter w;
    w.begin_object();
    w.kv("command", "feasibility");
    w.kv("t", t).kv("T", T).kv("T_D", T_D).kv("budget", budget);
    w.kv("n_max", n_max).kv("limited", limited);
    w.kv("multi_cavity_interaction_time", multi_cavity_interaction_time);
    w.end_object();
    return w.str();
  }

  std::string to_csv() const {
    std::string out = "t,T,T_D,budget,n_max,limited,multi_cavity_interaction_time\n";
    out += format_double(t) + ',' + format_double(T) + ',' + format_double(T_D) + ',' +
           format_double(budget) + ',' + std::to_string(n_max) + ',' +
           (limited ? "true" : "false") + ',' + format_double(multi_cavity_interaction_time) +
           '\n';
    return out;
  }
};

struct SweepReport {
  std::size_t N;
  std::size_t cutoff;
  struct Row {
    double alpha, p_error, p_error_sim, infidelity;
  };
  std::vector<Row> rows;
  double max_abs_diff;  // largest |p_error - p_error_sim| over positive alphas
  double tolerance;
  bool pass;

  std::string to_json() const {
    JsonWriter w;
    w.begin_object();
    w.kv("command", "sweep").kv("N", N).kv("cutoff", cutoff);
    w.key("rows").begin_array();
    for (const Row& r : rows) {
      w.begin_object();
      w.kv("alpha", r.alpha).kv("p_error", r.p_error).kv("p_error_sim", r.p_error_sim);
      w.kv("infidelity", r.infidelity);
      w.end_object();
    }
    w.end_array();
    w.kv("max_abs_diff", max_abs_diff).kv("tolerance", tolerance).kv("pass", pass);
    w.end_object();
    return w.str();
  }

  std::string to_csv() const {
    std::string out = "alpha,p_error,p_error_sim,infidelity\n";
    for (const Row& r : rows) {
      out += format_double(r.alpha) + ',' + format_double(r.p_error) + ',' +
             format_double(r.p_error_sim) + ',' + format_double(r.infidelity) + '\n';
    }
    out += "max_abs_diff," + format_double(max_abs_diff) + '\n';
    out += std::string("pass,") + (pass ? "true" : "false") + '\n';
    return out;
  }
};

}  // namespace qtnet::reports
