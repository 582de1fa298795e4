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

// aqsim: arbitrated quantum signature protocol simulator.
//
// Subcommands:
//   run              one configured experiment batch
//   demo             the four headline experiments with fixed sub-seeds
//   validate-scheme  orthonormal-basis check for an encryption scheme
//
// Exit codes: 0 success, 2 configuration error, 1 runtime error.

#include <cstdint>
#include <iomanip>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "aqs/aqs.hpp"

namespace {

std::uint64_t config_u64(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const unsigned long long v = std::stoull(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw aqs::ConfigError(key, "'" + value + "' is not a non-negative integer");
  }
}

bool config_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw aqs::ConfigError(key, "'" + value + "' is not a boolean");
}

// Applies a flat key=value file before flag parsing, so command-line flags
// override file values. Unknown keys are rejected by name.
void apply_config_file(const std::string& path, aqs::ExperimentConfig& config,
                       std::string& variant, std::string& test_mode,
                       std::string& format, std::string& out_path) {
  for (const auto& [key, value] : aqs::load_flat_config(path)) {
    if (key == "n") {
      config.n = static_cast<std::size_t>(config_u64(key, value));
    } else if (key == "trials") {
      config.trials = static_cast<std::size_t>(config_u64(key, value));
    } else if (key == "seed") {
      config.seed = config_u64(key, value);
    } else if (key == "scheme") {
      config.scheme = value;
    } else if (key == "variant") {
      variant = value;
    } else if (key == "test-mode") {
      test_mode = value;
    } else if (key == "attack") {
      config.attack = value;
    } else if (key == "format") {
      format = value;
    } else if (key == "out") {
      out_path = value;
    } else if (key == "per-trial") {
      config.per_trial = config_bool(key, value);
    } else if (key == "transcript") {
      config.with_transcript = config_bool(key, value);
    } else {
      throw aqs::ConfigError(key, "unknown config file key '" + key + "'");
    }
  }
}

// The config file has to be located before CLI11 runs so that explicit
// flags can take precedence over file values.
std::string find_config_argument(int argc, char** argv) {
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--config" && i + 1 < argc) return argv[i + 1];
    if (arg.rfind("--config=", 0) == 0) return arg.substr(9);
  }
  return "";
}

int run_command(const aqs::ExperimentConfig& base, const std::string& variant,
                const std::string& test_mode, const std::string& format,
                const std::string& out_path) {
  aqs::ExperimentConfig config = base;
  config.variant = aqs::parse_variant(variant);
  config.test_mode = aqs::parse_test_mode(test_mode);
  const aqs::ReportFormat fmt = aqs::parse_format(format);
  aqs::validate_config(config);
  const aqs::ExperimentReport report = aqs::run_experiment(config);
  aqs::emit_report(report, fmt, out_path);
  return 0;
}

int demo_command(std::uint64_t seed, const std::string& format,
                 const std::string& out_path) {
  const aqs::ReportFormat fmt = aqs::parse_format(format);
  if (fmt == aqs::ReportFormat::Csv) {
    throw aqs::ConfigError("format", "demo supports table or json output");
  }
  const aqs::DemoResult demo = aqs::run_demo(seed);
  const std::string text = fmt == aqs::ReportFormat::Json
                               ? aqs::demo_to_json(demo, seed).dump(2) + "\n"
                               : aqs::demo_to_table(demo);
  aqs::emit_text(text, out_path);
  return 0;
}

int validate_scheme_command(const std::string& scheme_spec) {
  const aqs::EncryptionScheme scheme = aqs::parse_scheme(scheme_spec);
  const std::vector<aqs::ComplexMatrix> ops = aqs::scheme_operator_set(scheme);
  const std::vector<double> probs(ops.size(), 1.0 / static_cast<double>(ops.size()));
  const aqs::SetValidation check = aqs::validate_encryption_set(ops, probs);

  std::cout << "scheme: " << scheme.name << "\n";
  std::cout << "operators: " << ops.size() << " (dimension "
            << ops.front().dim() << "), probability "
            << probs.front() << " each\n";
  std::cout << "|Tr(Uj' Uk)| matrix:\n";
  for (std::size_t j = 0; j < ops.size(); ++j) {
    std::cout << " ";
    for (std::size_t k = 0; k < ops.size(); ++k) {
      const double t = std::abs(aqs::hilbert_schmidt_inner(ops[j], ops[k]));
      std::cout << ' ' << std::fixed << std::setprecision(3) << t;
    }
    std::cout << "\n";
  }
  if (check.valid) {
    std::cout << "result: VALID (orthonormal basis, uniform probabilities)\n";
    return 0;
  }
  std::cout << "result: INVALID (" << check.reason << ")\n";
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"arbitrated quantum signature protocol simulator"};
  app.require_subcommand(1);

  aqs::ExperimentConfig config;
  std::string variant = "A";
  std::string test_mode = "projective";
  std::string format = "table";
  std::string out_path;

  std::string config_path;
  CLI::App* run = app.add_subcommand("run", "run a configured experiment batch");
  run->add_option("--config", config_path,
                  "flat key=value config file; explicit flags override it");
  run->add_option("--n", config.n, "message qubits per trial")
      ->capture_default_str();
  run->add_option("--trials", config.trials, "number of trials")
      ->capture_default_str();
  run->add_option("--seed", config.seed, "master seed; trial t uses a stream derived from (seed, t)")
      ->capture_default_str();
  run->add_option("--scheme", config.scheme, "pauli | ih | uv:<U>,<V>")
      ->capture_default_str();
  run->add_option("--variant", variant, "arbiter check: A (signature test) | B (plus GHZ reconstruction)")
      ->capture_default_str();
  run->add_option("--test-mode", test_mode, "projective | swap")
      ->capture_default_str();
  run->add_option("--attack", config.attack,
                  "none | pauli:<letters> | ma-exchange:<i,...> | "
                  "permutation:<p,...> | symmetric-demo")
      ->capture_default_str();
  run->add_option("--format", format, "table | json | csv")
      ->capture_default_str();
  run->add_option("--out", out_path, "output path (default stdout)");
  run->add_flag("--per-trial", config.per_trial, "include per-trial records");
  run->add_flag("--transcript", config.with_transcript,
                "include the first trial's protocol transcript");

  std::uint64_t demo_seed = aqs::kDemoDefaultSeed;
  std::string demo_format = "table";
  std::string demo_out;
  CLI::App* demo = app.add_subcommand(
      "demo", "honest baseline, both forgeries, and the hardened scheme");
  demo->add_option("--seed", demo_seed, "demo master seed")
      ->capture_default_str();
  demo->add_option("--format", demo_format, "table | json")
      ->capture_default_str();
  demo->add_option("--out", demo_out, "output path (default stdout)");

  std::string scheme_spec = "ih";
  CLI::App* validate = app.add_subcommand(
      "validate-scheme", "check that a scheme's operators form an orthonormal basis");
  validate->add_option("--scheme", scheme_spec, "pauli | ih | uv:<U>,<V>")
      ->capture_default_str();

  try {
    const std::string file = find_config_argument(argc, argv);
    if (!file.empty()) {
      apply_config_file(file, config, variant, test_mode, format, out_path);
    }
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const aqs::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (run->parsed()) {
      return run_command(config, variant, test_mode, format, out_path);
    }
    if (demo->parsed()) {
      return demo_command(demo_seed, demo_format, demo_out);
    }
    return validate_scheme_command(scheme_spec);
  } catch (const aqs::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
