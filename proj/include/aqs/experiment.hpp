// Copyright 2026 The aqsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Seeded experiment batches over the protocol and its attacks, with table,
// json, and csv reporting. Trial t draws from a stream derived from
// (seed, t), so reports are reproducible and order-independent.

#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "aqs/attacks.hpp"
#include "aqs/protocol.hpp"
#include "aqs/qotp.hpp"
#include "aqs/random.hpp"

namespace aqs {

/// Configuration problem: carries the offending key so the CLI can name it.
struct ConfigError : std::runtime_error {
  std::string key;

  ConfigError(std::string key_, const std::string& message)
      : std::runtime_error(key_ + ": " + message), key(std::move(key_)) {}
};

struct ExperimentConfig {
  std::size_t n = 4;
  std::size_t trials = 100;
  std::uint64_t seed = 1;
  std::string scheme = "pauli";  // pauli | ih | uv:<U>,<V>
  Variant variant = Variant::A;
  TestMode test_mode = TestMode::Projective;
  std::string attack = "none";
  bool per_trial = false;
  bool with_transcript = false;  // record the first trial's transcript
};

struct TrialRecord {
  std::size_t trial = 0;
  bool accepted = false;
  bool success = false;
  bool detected = false;
  double fidelity = 0.0;
};

struct ExperimentReport {
  ExperimentConfig config;
  double accept_rate = 0.0;
  double success_rate = 0.0;
  double mean_detection = 0.0;
  std::vector<TrialRecord> trials;  // filled when config.per_trial
  std::vector<std::string> transcript;
  double duration_seconds = 0.0;  // table output only, not machine formats
};

enum class ReportFormat { Table, Json, Csv };

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

inline Gate gate_by_name(const std::string& name) {
  if (name == "I") return gates::identity();
  if (name == "H") return gates::hadamard();
  if (name == "X") return gates::pauli_x();
  if (name == "Y") return gates::pauli_y();
  if (name == "Z") return gates::pauli_z();
  if (name == "S") return gates::phase_s();
  if (name == "T") return gates::phase_t();
  throw ConfigError("scheme", "unknown gate '" + name + "' (expected I, H, X, Y, Z, S, or T)");
}

inline EncryptionScheme parse_scheme(const std::string& spec) {
  if (spec == "pauli") return EncryptionScheme::pauli_type();
  if (spec == "ih") return EncryptionScheme::ih_type();
  if (spec.rfind("uv:", 0) == 0) {
    const std::string body = spec.substr(3);
    const std::size_t comma = body.find(',');
    if (comma == std::string::npos || comma == 0 || comma + 1 >= body.size()) {
      throw ConfigError("scheme", "uv scheme needs two gates, e.g. uv:H,S");
    }
    const Gate u = gate_by_name(body.substr(0, comma));
    const Gate v = gate_by_name(body.substr(comma + 1));
    return EncryptionScheme::uv_type(u, v, spec);
  }
  throw ConfigError("scheme", "unknown value '" + spec +
                                  "' (expected pauli, ih, or uv:<U>,<V>)");
}

inline Variant parse_variant(const std::string& s) {
  if (s == "A" || s == "a") return Variant::A;
  if (s == "B" || s == "b") return Variant::B;
  throw ConfigError("variant", "unknown value '" + s + "' (expected A or B)");
}

inline TestMode parse_test_mode(const std::string& s) {
  if (s == "projective") return TestMode::Projective;
  if (s == "swap") return TestMode::Swap;
  throw ConfigError("test-mode",
                    "unknown value '" + s + "' (expected projective or swap)");
}

namespace detail {

inline std::vector<std::size_t> parse_index_list(const std::string& body,
                                                 const char* key) {
  std::vector<std::size_t> out;
  if (body.empty()) return out;
  std::stringstream ss(body);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t pos = 0;
      const unsigned long long v = std::stoull(item, &pos);
      if (pos != item.size()) throw std::invalid_argument(item);
      out.push_back(static_cast<std::size_t>(v));
    } catch (const std::exception&) {
      throw ConfigError(key, "'" + item + "' is not a qubit index");
    }
  }
  return out;
}

}  // namespace detail

inline AttackPlan parse_attack(const std::string& spec, std::size_t n) {
  if (spec == "none") return AttackPlan::none();
  if (spec == "symmetric-demo") {
    AttackPlan plan;
    plan.kind = AttackPlan::Kind::SymmetricDemo;
    return plan;
  }
  if (spec.rfind("pauli:", 0) == 0) {
    const std::string letters = spec.substr(6);
    if (letters.size() != n) {
      throw ConfigError("attack", "pauli forgery needs exactly " +
                                      std::to_string(n) + " letters, got '" +
                                      letters + "'");
    }
    try {
      return AttackPlan::pauli_forgery(PauliString::parse(letters));
    } catch (const std::exception& e) {
      throw ConfigError("attack", e.what());
    }
  }
  if (spec.rfind("ma-exchange", 0) == 0) {
    std::string body;
    if (spec.size() > 11) {
      if (spec[11] != ':') {
        throw ConfigError("attack", "unknown value '" + spec + "'");
      }
      body = spec.substr(12);
    }
    std::vector<std::size_t> targets = detail::parse_index_list(body, "attack");
    for (std::size_t t : targets) {
      if (t >= n) {
        throw ConfigError("attack", "target qubit " + std::to_string(t) +
                                        " out of range for n=" + std::to_string(n));
      }
    }
    return AttackPlan::ma_exchange(std::move(targets));
  }
  if (spec.rfind("permutation:", 0) == 0) {
    std::vector<std::size_t> perm =
        detail::parse_index_list(spec.substr(12), "attack");
    if (perm.size() != n) {
      throw ConfigError("attack", "permutation needs exactly " +
                                      std::to_string(n) + " indices");
    }
    std::vector<bool> seen(n, false);
    for (std::size_t p : perm) {
      if (p >= n || seen[p]) {
        throw ConfigError("attack", "not a valid permutation of 0.." +
                                        std::to_string(n - 1));
      }
      seen[p] = true;
    }
    return AttackPlan::permutation(std::move(perm));
  }
  throw ConfigError("attack",
                    "unknown value '" + spec +
                        "' (expected none, pauli:<letters>, ma-exchange:<i,...>, "
                        "permutation:<p,...>, or symmetric-demo)");
}

inline ReportFormat parse_format(const std::string& s) {
  if (s == "table") return ReportFormat::Table;
  if (s == "json") return ReportFormat::Json;
  if (s == "csv") return ReportFormat::Csv;
  throw ConfigError("format",
                    "unknown value '" + s + "' (expected table, json, or csv)");
}

/// Reads a flat key=value config file ('#' starts a comment). Returns the
/// pairs in file order; key validation is the caller's job.
inline std::vector<std::pair<std::string, std::string>> load_flat_config(
    const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("config", "cannot read config file: " + path);
  std::vector<std::pair<std::string, std::string>> entries;
  std::string line;
  std::size_t lineno = 0;
  auto trim = [](std::string s) {
    const char* ws = " \t\r";
    const std::size_t b = s.find_first_not_of(ws);
    if (b == std::string::npos) return std::string();
    const std::size_t e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
  };
  while (std::getline(f, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string trimmed = trim(line);
    if (trimmed.empty()) continue;
    const std::size_t eq = trimmed.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw ConfigError("config", "malformed line " + std::to_string(lineno) +
                                      " in " + path + " (expected key=value)");
    }
    entries.emplace_back(trim(trimmed.substr(0, eq)),
                         trim(trimmed.substr(eq + 1)));
  }
  return entries;
}

/// Full validation; throws ConfigError naming the offending key.
inline void validate_config(const ExperimentConfig& config) {
  if (config.n < 1) throw ConfigError("n", "need at least one qubit");
  if (config.n > 10) throw ConfigError("n", "register too large (max 10 qubits)");
  if (config.trials < 1) throw ConfigError("trials", "need at least one trial");
  parse_scheme(config.scheme);
  parse_attack(config.attack, config.n);
}

// ---------------------------------------------------------------------------
// Running
// ---------------------------------------------------------------------------

inline ExperimentReport run_experiment(const ExperimentConfig& config) {
  validate_config(config);
  const EncryptionScheme scheme = parse_scheme(config.scheme);
  const AttackPlan plan = parse_attack(config.attack, config.n);
  const auto start = std::chrono::steady_clock::now();

  ExperimentReport report;
  report.config = config;
  std::size_t accepted = 0;
  std::size_t succeeded = 0;
  std::size_t detected = 0;
  if (config.per_trial) report.trials.reserve(config.trials);

  const StateVector symmetric = symmetric_joint_state();
  for (std::size_t t = 0; t < config.trials; ++t) {
    Rng rng = make_trial_rng(config.seed, t);
    Transcript transcript;
    Transcript* tr =
        (config.with_transcript && t == 0) ? &transcript : nullptr;
    TrialRecord rec;
    rec.trial = t;

    if (plan.kind == AttackPlan::Kind::SymmetricDemo) {
      const bool pass = swap_test_joint(symmetric, rng);
      rec.accepted = pass;
      rec.success = pass;
      rec.detected = !pass;
      rec.fidelity = 1.0;
    } else if (plan.kind == AttackPlan::Kind::None) {
      const VerificationResult res = run_honest_session(
          config.n, scheme, config.variant, config.test_mode, rng, tr);
      rec.accepted = res.accepted;
      rec.success = res.accepted && std::abs(res.recovered_fidelity - 1.0) <= 1e-9;
      rec.detected = !res.trent_test_passed;
      rec.fidelity = res.recovered_fidelity;
    } else {
      const AttackOutcome out = attack_session(
          config.n, scheme, config.variant, config.test_mode, plan, rng, tr);
      rec.accepted = out.accepted;
      rec.success = out.success;
      rec.detected = !out.accepted;
      rec.fidelity = fidelity(out.intended_target, out.delivered);
    }

    accepted += rec.accepted ? 1 : 0;
    succeeded += rec.success ? 1 : 0;
    detected += rec.detected ? 1 : 0;
    if (config.per_trial) report.trials.push_back(rec);
    if (tr) report.transcript = transcript.lines;
  }

  const double trials = static_cast<double>(config.trials);
  report.accept_rate = static_cast<double>(accepted) / trials;
  report.success_rate = static_cast<double>(succeeded) / trials;
  report.mean_detection = static_cast<double>(detected) / trials;
  report.duration_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return report;
}

// ---------------------------------------------------------------------------
// Emission
// ---------------------------------------------------------------------------

/// Stable key order; wall-clock duration is deliberately absent so reports
/// from identical (config, seed) pairs are byte-identical.
inline nlohmann::ordered_json report_to_json(const ExperimentReport& r) {
  nlohmann::ordered_json j;
  j["config"] = {
      {"n", r.config.n},
      {"trials", r.config.trials},
      {"seed", r.config.seed},
      {"scheme", r.config.scheme},
      {"variant", variant_name(r.config.variant)},
      {"test_mode", test_mode_name(r.config.test_mode)},
      {"attack", r.config.attack},
      {"per_trial", r.config.per_trial},
  };
  j["accept_rate"] = r.accept_rate;
  j["success_rate"] = r.success_rate;
  j["mean_detection"] = r.mean_detection;
  if (r.config.per_trial) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const TrialRecord& t : r.trials) {
      arr.push_back({{"trial", t.trial},
                     {"accepted", t.accepted},
                     {"success", t.success},
                     {"detected", t.detected},
                     {"fidelity", t.fidelity}});
    }
    j["trials"] = arr;
  }
  if (!r.transcript.empty()) j["transcript"] = r.transcript;
  return j;
}

namespace detail {

inline std::string double_str(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline std::string double_str_short(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

}  // namespace detail

/// Header plus one row per trial when per-trial records are enabled,
/// otherwise header plus a single summary row.
inline std::string report_to_csv(const ExperimentReport& r) {
  std::string out;
  if (r.config.per_trial) {
    out = "trial,accepted,success,detected,fidelity\n";
    for (const TrialRecord& t : r.trials) {
      out += std::to_string(t.trial);
      out += t.accepted ? ",1" : ",0";
      out += t.success ? ",1" : ",0";
      out += t.detected ? ",1" : ",0";
      out += ',';
      out += detail::double_str(t.fidelity);
      out += '\n';
    }
    return out;
  }
  out = "n,trials,seed,scheme,variant,test_mode,attack,accept_rate,success_rate,mean_detection\n";
  out += std::to_string(r.config.n) + ',' + std::to_string(r.config.trials) +
         ',' + std::to_string(r.config.seed) + ',' + r.config.scheme + ',' +
         variant_name(r.config.variant) + ',' +
         test_mode_name(r.config.test_mode) + ',' + r.config.attack + ',' +
         detail::double_str(r.accept_rate) + ',' +
         detail::double_str(r.success_rate) + ',' +
         detail::double_str(r.mean_detection) + '\n';
  return out;
}

inline std::string report_to_table(const ExperimentReport& r) {
  std::ostringstream os;
  auto row = [&os](const std::string& k, const std::string& v) {
    os << "  " << k;
    for (std::size_t i = k.size(); i < 16; ++i) os << ' ';
    os << v << '\n';
  };
  os << "experiment\n";
  row("n", std::to_string(r.config.n));
  row("trials", std::to_string(r.config.trials));
  row("seed", std::to_string(r.config.seed));
  row("scheme", r.config.scheme);
  row("variant", variant_name(r.config.variant));
  row("test_mode", test_mode_name(r.config.test_mode));
  row("attack", r.config.attack);
  os << "results\n";
  row("accept_rate", detail::double_str_short(r.accept_rate));
  row("success_rate", detail::double_str_short(r.success_rate));
  row("mean_detection", detail::double_str_short(r.mean_detection));
  row("duration_s", detail::double_str_short(r.duration_seconds));
  if (!r.transcript.empty()) {
    os << "transcript (trial 0)\n";
    for (const std::string& line : r.transcript) os << "  " << line << '\n';
  }
  return os.str();
}

inline std::string render_report(const ExperimentReport& r, ReportFormat f) {
  switch (f) {
    case ReportFormat::Table: return report_to_table(r);
    case ReportFormat::Json: return report_to_json(r).dump(2) + "\n";
    case ReportFormat::Csv: return report_to_csv(r);
  }
  return "";
}

/// Writes to the path, or to stdout when the path is empty.
inline void emit_text(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(out_path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open output file: " + out_path);
  f << text;
  if (!f) throw std::runtime_error("failed writing output file: " + out_path);
}

inline void emit_report(const ExperimentReport& r, ReportFormat f,
                        const std::string& out_path) {
  emit_text(render_report(r, f), out_path);
}

// ---------------------------------------------------------------------------
// Headline demo
// ---------------------------------------------------------------------------

inline constexpr std::uint64_t kDemoDefaultSeed = 7;

struct DemoResult {
  std::vector<std::pair<std::string, ExperimentReport>> reports;
};

/// The four headline experiments: an honest baseline, the two forgeries that
/// defeat Pauli-only encryption, and the (I,H)-type defense that catches the
/// first forgery again.
inline DemoResult run_demo(std::uint64_t seed = kDemoDefaultSeed) {
  DemoResult demo;
  auto add = [&demo](const std::string& name, ExperimentConfig cfg) {
    demo.reports.emplace_back(name, run_experiment(cfg));
  };

  ExperimentConfig honest;
  honest.n = 4;
  honest.trials = 500;
  honest.seed = mix64(seed ^ 1);
  honest.scheme = "pauli";
  honest.variant = Variant::A;
  honest.test_mode = TestMode::Swap;
  honest.attack = "none";
  add("honest", honest);

  ExperimentConfig forgery;
  forgery.n = 4;
  forgery.trials = 500;
  forgery.seed = mix64(seed ^ 2);
  forgery.scheme = "pauli";
  forgery.variant = Variant::A;
  forgery.test_mode = TestMode::Projective;
  forgery.attack = "pauli:XXXX";
  add("pauli_forgery", forgery);

  ExperimentConfig record;
  record.n = 4;
  record.trials = 500;
  record.seed = mix64(seed ^ 3);
  record.scheme = "pauli";
  record.variant = Variant::B;
  record.test_mode = TestMode::Projective;
  record.attack = "ma-exchange:0,1,2,3";
  add("ma_exchange", record);

  ExperimentConfig defense;
  defense.n = 4;
  defense.trials = 2000;
  defense.seed = mix64(seed ^ 4);
  defense.scheme = "ih";
  defense.variant = Variant::A;
  defense.test_mode = TestMode::Projective;
  defense.attack = "pauli:XXXX";
  add("ih_defense", defense);

  return demo;
}

inline nlohmann::ordered_json demo_to_json(const DemoResult& demo,
                                           std::uint64_t seed) {
  nlohmann::ordered_json j;
  j["demo_seed"] = seed;
  for (const auto& [name, report] : demo.reports) {
    j[name] = report_to_json(report);
  }
  return j;
}

inline std::string demo_to_table(const DemoResult& demo) {
  std::string out;
  for (const auto& [name, report] : demo.reports) {
    out += "[" + name + "]\n";
    out += report_to_table(report);
    out += '\n';
  }
  return out;
}

}  // namespace aqs
