// Copyright 2026 The kwprune Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "kwprune/cli.hpp"

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>

#include "kwprune/config.hpp"
#include "kwprune/csv.hpp"
#include "kwprune/report.hpp"

namespace kwprune {
namespace {

namespace fs = std::filesystem;

// Missing files, unwritable outputs and similar startup problems.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path, std::string_view what) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open " + std::string(what) + " '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << content)) throw UsageError("cannot write '" + path.string() + "'");
}

fs::path ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw UsageError("cannot create output directory '" + dir + "': " + ec.message());
  return fs::path(dir);
}

int exit_code_for(std::exception_ptr e) {
  try {
    std::rethrow_exception(e);
  } catch (const SimulationAborted& a) {
    return a.cause() ? exit_code_for(a.cause()) : kExitData;
  } catch (const ConfigError&) {
    return kExitUsage;
  } catch (const InvalidConfig&) {
    return kExitUsage;
  } catch (const UsageError&) {
    return kExitUsage;
  } catch (const GatewayError&) {
    return kExitGateway;
  } catch (const DataError&) {
    return kExitData;
  } catch (const csv::ParseError&) {
    return kExitData;
  } catch (const CorruptStore&) {
    return kExitData;
  } catch (const NonMonotonicInsert&) {
    return kExitData;
  } catch (...) {
    return kExitUsage;
  }
}

struct Loaded {
  ExperimentLog log;
  std::string log_hash;
  MemoryStore memory;
  std::unique_ptr<ChatBackend> gateway;
  std::optional<std::string> script_hash;
};

bool uses_agent(const SimulationConfig& c) {
  return std::find(c.policies.begin(), c.policies.end(), PolicyKind::KpAgent) !=
         c.policies.end();
}

Loaded load_inputs(const RunConfig& config) {
  if (config.log_path.empty()) throw ConfigError("config", "data.log", "no input log given");
  Loaded in;
  const std::string bytes = read_file(config.log_path, "input log");
  in.log_hash = content_hash(bytes);
  std::istringstream log_stream(bytes);
  in.log = ingest_log(log_stream);

  if (!config.memory_path.empty()) {
    std::istringstream mem(read_file(config.memory_path, "memory store"));
    in.memory = load_store(mem);
  }
  if (uses_agent(config.simulation)) {
    if (config.backend == "live") {
      LiveBackendConfig live = config.live;
      live.api_key = api_key_from_env();
      in.gateway = std::make_unique<HttpBackend>(std::move(live));
    } else {
      if (config.script_path.empty()) {
        throw ConfigError("config", "llm.script", "the scripted backend needs a script file");
      }
      const std::string script = read_file(config.script_path, "script file");
      in.script_hash = content_hash(script);
      std::istringstream s(script);
      auto backend = std::make_unique<ScriptedBackend>(ScriptedBackend::load(s));
      backend->set_cycle(config.script_cycle);
      in.gateway = std::move(backend);
    }
  }
  return in;
}

ManifestInfo manifest_for(const RunConfig& config, const Loaded& in,
                          const SimulationTrace& trace) {
  ManifestInfo m;
  m.config = config.simulation;
  m.log_path = config.log_path;
  m.log_hash = in.log_hash;
  if (!config.memory_path.empty()) m.memory_path = config.memory_path;
  if (uses_agent(config.simulation)) {
    m.backend = config.backend;
    if (config.backend == "scripted") {
      m.script_path = config.script_path;
      m.script_hash = in.script_hash;
    }
  } else {
    m.backend = "none";
  }
  m.sweep = config.sweep;
  m.flagged_campaigns = trace.flagged_campaigns;
  return m;
}

template <typename Fn>
std::string render(Fn&& fn) {
  std::ostringstream ss;
  fn(ss);
  return ss.str();
}

SimulationTrace run_or_dump(const ExperimentLog& log, const SimulationConfig& sim,
                            SimulationEnv env, const fs::path& partial_path) {
  try {
    return run_experiment(log, sim, env);
  } catch (const SimulationAborted& a) {
    // Best effort: the partial trace is diagnostic output only.
    std::ofstream out(partial_path, std::ios::binary);
    write_trace_csv(out, a.partial());
    throw;
  }
}

int cmd_simulate(const RunConfig& config, std::ostream& out) {
  validate_run_config(config);
  Loaded in = load_inputs(config);
  config.simulation.validate(in.log);
  const fs::path dir = ensure_dir(config.out_dir);

  SimulationEnv env{&in.memory, in.gateway.get()};
  SimulationTrace trace =
      run_or_dump(in.log, config.simulation, env, dir / "trace.partial.csv");

  write_file(dir / "trace.csv", render([&](std::ostream& s) { write_trace_csv(s, trace); }));
  write_file(dir / "summary.csv",
             render([&](std::ostream& s) { write_summary_csv(s, summarize(trace)); }));
  write_file(dir / "manifest.json", render_manifest(manifest_for(config, in, trace)));
  if (uses_agent(config.simulation)) {
    write_file(dir / "memory.ndjson", render([&](std::ostream& s) { persist(in.memory, s); }));
  }
  out << "wrote " << trace.rows.size() << " trace rows to " << dir.string() << "\n";
  for (const auto& id : trace.flagged_campaigns) {
    out << "campaign " << id << " has fewer than " << config.simulation.n_min
        << " keywords; pruning disabled\n";
  }
  return kExitOk;
}

int cmd_compare(RunConfig config, std::ostream& out) {
  if (config.simulation.policies.size() < 2) {
    throw ConfigError("config", "simulation.policies", "compare needs at least two policies");
  }
  if (config.sweep.empty()) config.sweep = {config.simulation.n_min};
  validate_run_config(config);
  Loaded in = load_inputs(config);
  const fs::path dir = ensure_dir(config.out_dir);

  const MemoryStore initial_memory = in.memory;
  std::vector<SummaryRow> summary;
  SimulationTrace last;
  for (std::size_t n_min : config.sweep) {
    SimulationConfig sim = config.simulation;
    sim.n_min = n_min;
    sim.validate(in.log);
    MemoryStore memory = initial_memory;
    SimulationEnv env{&memory, in.gateway.get()};
    const std::string tag = "n_min" + std::to_string(n_min);
    SimulationTrace trace =
        run_or_dump(in.log, sim, env, dir / ("trace_" + tag + ".partial.csv"));
    write_file(dir / ("trace_" + tag + ".csv"),
               render([&](std::ostream& s) { write_trace_csv(s, trace); }));
    auto rows = summarize(trace);
    summary.insert(summary.end(), rows.begin(), rows.end());
    last = std::move(trace);
  }

  const std::string reference =
      uses_agent(config.simulation)
          ? std::string(policy_name(PolicyKind::KpAgent))
          : std::string(policy_name(config.simulation.policies.front()));
  write_file(dir / "plot_data.csv",
             render([&](std::ostream& s) { write_summary_csv(s, summary); }));
  write_file(dir / "uplift.csv", render([&](std::ostream& s) {
               write_uplift_csv(s, uplift_table(summary, reference));
             }));
  write_file(dir / "manifest.json", render_manifest(manifest_for(config, in, last)));
  out << "compared " << config.simulation.policies.size() << " policies over "
      << config.sweep.size() << " n_min values; wrote " << dir.string() << "\n";
  return kExitOk;
}

int cmd_gen_synthetic(const RunConfig& config, const std::string& output, std::ostream& out) {
  ExperimentLog log = generate_synthetic_log(config.synthetic);
  fs::path path = output;
  if (path.empty()) path = ensure_dir(config.out_dir) / "synthetic_log.csv";
  write_file(path, render([&](std::ostream& s) { write_log(s, log); }));
  out << "wrote " << log.records().size() << " records for " << log.campaigns().size()
      << " campaigns to " << path.string() << "\n";
  return kExitOk;
}

int cmd_validate(const std::string& path, std::ostream& out) {
  std::istringstream in(read_file(path, "input log"));
  ValidationReport report = validate_log(in);
  out << report.record_count << " records\n";
  out << report.campaign_count << " campaigns, " << report.keyword_count << " keywords\n";
  if (report.record_count > 0) {
    out << "days " << report.horizon.first << ".." << report.horizon.last << "\n";
  }
  out << report.violations.size() << " violations\n";
  for (const auto& v : report.violations) out << "line " << v.line << ": " << v.reason << "\n";
  return report.violations.empty() ? kExitOk : kExitData;
}

// Pulls "--section.key value" and "--section.key=value" out of argv; CLI11
// sees the rest.
std::vector<std::pair<std::string, std::string>> take_key_overrides(
    std::vector<std::string>& args) {
  std::vector<std::pair<std::string, std::string>> found;
  std::vector<std::string> rest;
  for (std::size_t i = 0; i < args.size(); ++i) {
    const std::string& a = args[i];
    if (a.rfind("--", 0) == 0 && a.size() > 2) {
      std::string name = a.substr(2);
      std::optional<std::string> value;
      if (auto eq = name.find('='); eq != std::string::npos) {
        value = name.substr(eq + 1);
        name = name.substr(0, eq);
      }
      if (name.find('.') != std::string::npos) {
        if (!value) {
          if (i + 1 >= args.size()) {
            throw ConfigError("command line", name, "missing value");
          }
          value = args[++i];
        }
        found.emplace_back(name, *value);
        continue;
      }
    }
    rest.push_back(a);
  }
  args = std::move(rest);
  return found;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  try {
    std::vector<std::string> args(argv + (argc > 0 ? 1 : 0), argv + argc);
    auto key_overrides = take_key_overrides(args);

    CLI::App app{"Keyword pruning agent and backtesting harness", "kwprune"};
    app.require_subcommand(1);
    app.footer(
        "Any config key can be set with --section.key VALUE, e.g. --simulation.n_min 5.\n"
        "Exit codes: 0 ok, 1 usage/config, 2 data invariant failure, 3 gateway failure.");

    // Flags that map onto config keys; applied after the config file.
    std::string config_path;
    std::map<std::string, std::string> flag_values;
    app.add_option("--config", config_path, "Config file (INI style)");
    struct FlagKey {
      const char* flag;
      const char* key;
      const char* help;
    };
    static constexpr FlagKey kFlags[] = {
        {"--out", "output.dir", "Output directory"},
        {"--jobs", "simulation.jobs", "Concurrent campaign decisions per day"},
        {"--seed", "simulation.seed", "Random seed"},
        {"--n-min", "simulation.n_min", "Minimum keywords kept per campaign"},
        {"--policies", "simulation.policies", "Comma-separated policy names"},
        {"--response", "simulation.response", "identity, linear or concave"},
        {"--log", "data.log", "Input experiment log (CSV)"},
        {"--memory", "memory.path", "Initial memory store (NDJSON)"},
        {"--script", "llm.script", "Scripted LLM responses (NDJSON)"},
        {"--backend", "llm.backend", "scripted or live"},
        {"--sweep", "compare.sweep", "Comma-separated n_min values"},
    };
    for (const auto& f : kFlags) {
      app.add_option(f.flag, flag_values[f.key], f.help);
    }

    auto* simulate = app.add_subcommand("simulate", "Replay policies over a log");
    auto* compare = app.add_subcommand("compare", "Compare policies across an n_min sweep");
    auto* gen = app.add_subcommand("gen-synthetic", "Write a synthetic experiment log");
    std::string gen_output;
    gen->add_option("output", gen_output, "Output CSV path");
    auto* validate = app.add_subcommand("validate", "Check a log and report violations");
    std::string validate_path;
    validate->add_option("log", validate_path, "Log to validate");
    for (auto* sub : {simulate, compare, gen, validate}) sub->fallthrough();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
      app.parse(reversed);
    } catch (const CLI::ParseError& e) {
      const int code = app.exit(e, out, err);
      return code == 0 ? kExitOk : kExitUsage;
    }

    RunConfig config;
    if (!config_path.empty()) {
      if (!fs::exists(config_path)) {
        throw UsageError("cannot open config file '" + config_path + "'");
      }
      load_config_file(config, config_path);
    }
    for (const auto& f : kFlags) {
      const auto& v = flag_values[f.key];
      if (app.count(f.flag) > 0) set_config_value(config, f.key, v, "command line");
    }
    for (const auto& [k, v] : key_overrides) set_config_value(config, k, v, "command line");

    if (*simulate) return cmd_simulate(config, out);
    if (*compare) return cmd_compare(config, out);
    if (*gen) return cmd_gen_synthetic(config, gen_output, out);
    if (*validate) {
      const std::string path = validate_path.empty() ? config.log_path : validate_path;
      if (path.empty()) throw UsageError("validate needs a log path");
      return cmd_validate(path, out);
    }
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "kwprune: " << e.what() << "\n";
    return exit_code_for(std::current_exception());
  }
}

}  // namespace kwprune
