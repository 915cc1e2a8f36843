#include "lmg/config.hpp"

#include <CLI11.hpp>

#include <array>
#include <cmath>
#include <fstream>
#include <iostream>

#include "lmg/errors.hpp"

namespace lmg {
namespace {

using nlohmann::json;

constexpr std::array<std::pair<Command, std::string_view>, 7> kCommands{{
    {Command::spectrum, "spectrum"},
    {Command::eigvec, "eigvec"},
    {Command::classical, "classical"},
    {Command::wkb, "wkb"},
    {Command::scaling, "scaling"},
    {Command::localize, "localize"},
    {Command::dos, "dos"},
}};

constexpr std::array<std::string_view, 6> kPresets{"fig1", "fig2", "gap13", "doublet", "scar", "weyl"};

const std::array<std::string_view, 17> kKnownKeys{
    "command", "lambda", "n", "lambda_list", "n_list", "sector", "level", "bins", "n_components",
    "count", "action_samples", "resolution", "preset", "density", "out", "threads", "config"};

double get_real(const json& j, const char* key) {
  const auto& v = j.at(key);
  if (!v.is_number()) throw ConfigError(key, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError(key, "must be finite");
  return x;
}

long long get_integer(const json& j, const char* key) {
  const auto& v = j.at(key);
  if (v.is_number_integer()) return v.get<long long>();
  if (v.is_number_float()) {
    const double x = v.get<double>();
    if (std::isfinite(x) && x == std::floor(x)) return static_cast<long long>(x);
  }
  throw ConfigError(key, "expected an integer");
}

std::size_t get_count(const json& j, const char* key, long long min_value) {
  const long long x = get_integer(j, key);
  if (x < min_value) throw ConfigError(key, "must be >= " + std::to_string(min_value));
  return static_cast<std::size_t>(x);
}

bool is_power_of_two(std::size_t x) { return x != 0 && (x & (x - 1)) == 0; }

}  // namespace

std::string_view to_string(Command command) noexcept {
  for (const auto& [c, name] : kCommands) {
    if (c == command) return name;
  }
  return "?";
}

json RunConfig::echo() const {
  json j;
  j["command"] = std::string(to_string(command));
  if (lambda) j["lambda"] = *lambda;
  if (n) j["n"] = *n;
  if (!lambda_list.empty()) j["lambda_list"] = lambda_list;
  if (!n_list.empty()) j["n_list"] = n_list;
  j["sector"] = sector;
  if (level) j["level"] = *level;
  j["bins"] = bins;
  j["n_components"] = n_components;
  j["count"] = count;
  j["action_samples"] = action_samples;
  j["resolution"] = resolution;
  if (!preset.empty()) j["preset"] = preset;
  j["density"] = density;
  return j;
}

RunConfig config_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("config", "expected a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (std::find(kKnownKeys.begin(), kKnownKeys.end(), key) == kKnownKeys.end()) {
      throw ConfigError(key, "unknown key");
    }
  }

  RunConfig cfg;
  if (!j.contains("command") || !j["command"].is_string()) {
    throw ConfigError("command", "missing or not a string");
  }
  {
    const auto name = j["command"].get<std::string>();
    bool found = false;
    for (const auto& [c, cname] : kCommands) {
      if (cname == name) {
        cfg.command = c;
        found = true;
      }
    }
    if (!found) throw ConfigError("command", "unknown command '" + name + "'");
  }

  if (j.contains("lambda")) {
    const double x = get_real(j, "lambda");
    if (x < 0.0) throw ConfigError("lambda", "must be >= 0, got " + std::to_string(x));
    cfg.lambda = x;
  }
  if (j.contains("n")) {
    const long long x = get_integer(j, "n");
    if (x < 1 || x > 1'000'000) throw ConfigError("n", "must be in [1, 1000000]");
    cfg.n = static_cast<int>(x);
  }
  if (j.contains("lambda_list")) {
    const auto& v = j["lambda_list"];
    if (!v.is_array() || v.empty()) throw ConfigError("lambda_list", "must be a non-empty list");
    for (const auto& x : v) {
      if (!x.is_number() || !std::isfinite(x.get<double>()) || x.get<double>() < 0.0) {
        throw ConfigError("lambda_list", "entries must be finite and >= 0");
      }
      if (!cfg.lambda_list.empty() && x.get<double>() <= cfg.lambda_list.back()) {
        throw ConfigError("lambda_list", "must be strictly increasing");
      }
      cfg.lambda_list.push_back(x.get<double>());
    }
  }
  if (j.contains("n_list")) {
    const auto& v = j["n_list"];
    if (!v.is_array() || v.empty()) throw ConfigError("n_list", "must be a non-empty list");
    for (const auto& x : v) {
      if (!x.is_number_integer() || x.get<long long>() < 1 || x.get<long long>() > 1'000'000) {
        throw ConfigError("n_list", "entries must be integers in [1, 1000000]");
      }
      if (!cfg.n_list.empty() && x.get<int>() <= cfg.n_list.back()) {
        throw ConfigError("n_list", "must be strictly increasing");
      }
      cfg.n_list.push_back(x.get<int>());
    }
  }
  if (j.contains("sector")) {
    if (!j["sector"].is_string()) throw ConfigError("sector", "expected even, odd or both");
    cfg.sector = j["sector"].get<std::string>();
    if (cfg.sector != "even" && cfg.sector != "odd" && cfg.sector != "both") {
      throw ConfigError("sector", "expected even, odd or both, got '" + cfg.sector + "'");
    }
  }
  if (j.contains("level")) cfg.level = get_count(j, "level", 0);
  if (j.contains("bins")) cfg.bins = get_count(j, "bins", 8);
  if (j.contains("n_components")) cfg.n_components = get_count(j, "n_components", 1);
  if (j.contains("count")) cfg.count = get_count(j, "count", 1);
  if (j.contains("action_samples")) cfg.action_samples = get_count(j, "action_samples", 0);
  if (j.contains("threads")) {
    cfg.threads = static_cast<unsigned>(get_count(j, "threads", 1));
  }
  if (j.contains("density")) {
    if (!j["density"].is_boolean()) throw ConfigError("density", "expected true or false");
    cfg.density = j["density"].get<bool>();
  }
  if (j.contains("out")) {
    if (!j["out"].is_string()) throw ConfigError("out", "expected a path");
    cfg.out = j["out"].get<std::string>();
  }
  if (j.contains("preset")) {
    if (!j["preset"].is_string()) throw ConfigError("preset", "expected a preset name");
    cfg.preset = j["preset"].get<std::string>();
    if (std::find(kPresets.begin(), kPresets.end(), cfg.preset) == kPresets.end()) {
      throw ConfigError("preset", "unknown preset '" + cfg.preset + "'");
    }
  }
  cfg.resolution = cfg.preset.empty() ? 256 : 2048;
  if (j.contains("resolution")) {
    cfg.resolution = get_count(j, "resolution", 64);
    if (!is_power_of_two(cfg.resolution)) {
      throw ConfigError("resolution", "must be a power of two >= 64");
    }
  }

  // Per-command requirements.
  const bool needs_model = cfg.command == Command::spectrum || cfg.command == Command::eigvec ||
                           cfg.command == Command::wkb || cfg.command == Command::localize ||
                           cfg.command == Command::dos;
  if (needs_model || cfg.command == Command::classical) {
    if (!cfg.lambda) throw ConfigError("lambda", "required for " + std::string(to_string(cfg.command)));
  }
  if (needs_model && !cfg.n) {
    throw ConfigError("n", "required for " + std::string(to_string(cfg.command)));
  }
  if (cfg.command == Command::scaling && cfg.preset.empty()) {
    throw ConfigError("preset", "required for scaling");
  }
  if (cfg.command != Command::scaling && !cfg.preset.empty()) {
    throw ConfigError("preset", "only valid with the scaling command");
  }
  if (cfg.command == Command::eigvec) {
    if (cfg.sector == "both") throw ConfigError("sector", "eigvec needs --sector even or odd");
    if (!cfg.level) throw ConfigError("level", "required for eigvec");
  }
  if (cfg.command == Command::localize && cfg.level && cfg.sector == "both") {
    throw ConfigError("sector", "an explicit --level needs --sector even or odd");
  }
  if (cfg.command == Command::wkb && cfg.n && cfg.count > static_cast<std::size_t>(*cfg.n)) {
    throw ConfigError("count", "must be <= n");
  }
  return cfg;
}

std::optional<RunConfig> parse_config(const std::vector<std::string>& args) {
  CLI::App app{"Lipkin-Meshkov-Glick spectral laboratory", "lmg"};
  std::string command;
  std::string config_path;
  double lambda = 0.0;
  int n = 0;
  std::vector<double> lambda_list;
  std::vector<int> n_list;
  std::string sector;
  std::size_t level = 0;
  std::size_t bins = 0;
  std::size_t n_components = 0;
  std::size_t count = 0;
  std::size_t action_samples = 0;
  std::size_t resolution = 0;
  std::string preset;
  std::string out;
  unsigned threads = 1;
  bool density = false;

  app.add_option("command", command, "spectrum | eigvec | classical | wkb | scaling | localize | dos");
  auto* o_config = app.add_option("--config", config_path, "JSON configuration file");
  auto* o_lambda = app.add_option("--lambda", lambda, "coupling");
  auto* o_n = app.add_option("--n", n, "particle number N");
  auto* o_lambda_list = app.add_option("--lambda-list", lambda_list, "sweep couplings")->delimiter(',');
  auto* o_n_list = app.add_option("--n-list", n_list, "sweep particle numbers")->delimiter(',');
  auto* o_sector = app.add_option("--sector", sector, "even | odd | both");
  auto* o_level = app.add_option("--level", level, "sector index of the level");
  auto* o_bins = app.add_option("--bins", bins, "histogram bins");
  auto* o_ncomp = app.add_option("--n-components", n_components, "components counted by localize");
  auto* o_count = app.add_option("--count", count, "number of WKB levels");
  auto* o_action = app.add_option("--action-samples", action_samples, "rows of the action table");
  auto* o_res = app.add_option("--resolution", resolution, "phase-space grid cells per axis");
  auto* o_preset = app.add_option("--preset", preset, "fig1 | fig2 | gap13 | doublet | scar | weyl");
  auto* o_out = app.add_option("--out", out, "output file, or directory for multi-table runs");
  auto* o_threads = app.add_option("--threads", threads, "worker threads");
  auto* o_density = app.add_flag("--density", density, "normalize the histogram to a density");

  std::vector<const char*> argv{"lmg"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    std::cout << app.help();
    return std::nullopt;
  } catch (const CLI::ParseError& e) {
    std::string key = "arguments";
    const std::string what = e.what();
    for (const auto& name : {"lambda-list", "n-list", "lambda", "n-components", "n", "resolution",
                             "level", "bins", "count", "threads", "action-samples"}) {
      if (what.find(std::string("--") + name) != std::string::npos) {
        key = name;
        break;
      }
    }
    for (char& c : key) {
      if (c == '-') c = '_';
    }
    throw ConfigError(key, what);
  }

  json j = json::object();
  if (o_config->count() > 0) {
    std::ifstream file(config_path);
    if (!file) throw ConfigError("config", "cannot read " + config_path);
    try {
      j = json::parse(file);
    } catch (const json::parse_error& e) {
      throw ConfigError("config", e.what());
    }
    if (!j.is_object()) throw ConfigError("config", "expected a JSON object");
  }
  if (!command.empty()) j["command"] = command;
  if (o_lambda->count() > 0) j["lambda"] = lambda;
  if (o_n->count() > 0) j["n"] = n;
  if (o_lambda_list->count() > 0) j["lambda_list"] = lambda_list;
  if (o_n_list->count() > 0) j["n_list"] = n_list;
  if (o_sector->count() > 0) j["sector"] = sector;
  if (o_level->count() > 0) j["level"] = level;
  if (o_bins->count() > 0) j["bins"] = bins;
  if (o_ncomp->count() > 0) j["n_components"] = n_components;
  if (o_count->count() > 0) j["count"] = count;
  if (o_action->count() > 0) j["action_samples"] = action_samples;
  if (o_res->count() > 0) j["resolution"] = resolution;
  if (o_preset->count() > 0) j["preset"] = preset;
  if (o_out->count() > 0) j["out"] = out;
  if (o_threads->count() > 0) j["threads"] = threads;
  if (o_density->count() > 0) j["density"] = density;
  return config_from_json(j);
}

}  // namespace lmg
