// fspec command-line front end. A run is one JSON config plus flag overrides.

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <map>
#include <iostream>
#include <optional>
#include <string>

#include "fspec/cagos.hpp"
#include "fspec/decomposition.hpp"
#include "fspec/error.hpp"
#include "fspec/filtering.hpp"
#include "fspec/io.hpp"
#include "fspec/spectral.hpp"
#include "fspec/verify.hpp"

namespace fs = std::filesystem;
using fspec::io::Json;

namespace {

const std::vector<std::string> kCommands{"simulate", "autocov", "fit-grid", "filter", "compose",
                                         "invert",   "ckl",     "hfpca",    "verify"};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string command;
  std::map<std::string, fs::path> inputs;
  std::optional<fs::path> output;
  std::uint64_t seed = 1;
  long realizations = 1;
  int period = 16;
  int max_lag = -1;
  double rank_tol = 1e-10;
  double psd_tol = 1e-10;
  Json q = 1;
  bool strict_injectivity = false;
  bool real = false;
  unsigned threads = 0;
};

bool verbose() {
  const char* v = std::getenv("FSPEC_VERBOSE");
  return v != nullptr && *v != '\0' && std::string(v) != "0";
}

void log(const std::string& msg) {
  if (verbose()) std::cerr << "fspec: " << msg << '\n';
}

template <class T>
T positive(const Json& doc, const char* key, T fallback) {
  if (!doc.contains(key)) return fallback;
  if (!doc[key].is_number()) throw UsageError(std::string("config field '") + key + "' must be a number");
  const T value = doc[key].get<T>();
  if (!(value > T{0})) throw UsageError(std::string("config field '") + key + "' must be positive");
  return value;
}

RunConfig load_config(const fs::path& path) {
  RunConfig cfg;
  Json doc;
  try {
    doc = fspec::io::read_file(path);
  } catch (const fspec::Error& e) {
    throw UsageError(e.what());
  }
  if (!doc.is_object()) throw UsageError("config must be a JSON object");
  const fs::path base = path.parent_path();
  auto resolve = [&](const std::string& p) { return fs::path(p).is_absolute() ? fs::path(p) : base / p; };
  if (doc.contains("command")) cfg.command = doc["command"].get<std::string>();
  if (doc.contains("inputs")) {
    for (const auto& [key, value] : doc["inputs"].items()) cfg.inputs[key] = resolve(value.get<std::string>());
  }
  if (doc.contains("output")) cfg.output = resolve(doc["output"].get<std::string>());
  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_integer()) throw UsageError("config field 'seed' must be an integer");
    cfg.seed = doc["seed"].get<std::uint64_t>();
  }
  cfg.realizations = positive<long>(doc, "realizations", cfg.realizations);
  cfg.period = positive<int>(doc, "period", cfg.period);
  cfg.max_lag = doc.contains("max_lag") ? positive<int>(doc, "max_lag", 1) : -1;
  cfg.rank_tol = positive<double>(doc, "rank_tol", cfg.rank_tol);
  cfg.psd_tol = positive<double>(doc, "psd_tol", cfg.psd_tol);
  if (doc.contains("threads")) cfg.threads = positive<unsigned>(doc, "threads", 1u);
  if (doc.contains("q")) cfg.q = doc["q"];
  if (doc.contains("flags")) {
    const auto& f = doc["flags"];
    cfg.strict_injectivity = f.value("strict_injectivity", false);
    cfg.real = f.value("real", false);
  }
  return cfg;
}

const fs::path& input(const RunConfig& cfg, const std::string& key) {
  const auto it = cfg.inputs.find(key);
  if (it == cfg.inputs.end()) throw UsageError("command '" + cfg.command + "' needs inputs." + key);
  return it->second;
}

void emit(const RunConfig& cfg, const Json& doc) {
  if (cfg.output) {
    fspec::io::write_file(*cfg.output, doc);
    log("wrote " + cfg.output->string());
  } else {
    std::cout << doc.dump(2) << '\n';
  }
}

fspec::RankFunction rank_function(const Json& q, std::size_t atoms) {
  if (q.is_number_integer()) return fspec::RankFunction::constant(atoms, q.get<int>());
  if (!q.is_array() || q.size() != atoms) {
    throw UsageError("q must be an integer or an array with one rank per atom");
  }
  return fspec::RankFunction(q.get<std::vector<int>>());
}

int run(const RunConfig& cfg) {
  using namespace fspec;
  log("command " + cfg.command);
  if (cfg.command == "simulate") {
    const auto nu = io::povm_from_json(io::read_file(input(cfg, "povm")));
    const auto w = sample_gaussian_cagos(nu, cfg.realizations, cfg.seed, {cfg.threads});
    emit(cfg, io::to_json(cfg.real ? synthesize_real_process(w, cfg.period) : synthesize_process(w, cfg.period)));
  } else if (cfg.command == "autocov") {
    const auto nu = io::povm_from_json(io::read_file(input(cfg, "povm")));
    emit(cfg, io::to_json(autocov_from_povm(nu, cfg.max_lag > 0 ? cfg.max_lag : cfg.period - 1)));
  } else if (cfg.command == "fit-grid") {
    const auto gamma = io::autocov_from_json(io::read_file(input(cfg, "autocov")));
    emit(cfg, io::to_json(povm_from_autocov_grid(gamma, cfg.period)));
  } else if (cfg.command == "filter") {
    if (cfg.inputs.contains("fir") && cfg.inputs.contains("series")) {
      const auto fir = io::fir_from_json(io::read_file(input(cfg, "fir")));
      emit(cfg, io::to_json(apply_fir_time(fir, io::series_from_json(io::read_file(input(cfg, "series"))))));
    } else {
      const auto nu = io::povm_from_json(io::read_file(input(cfg, "povm")));
      const auto phi = cfg.inputs.contains("fir")
                           ? fir_to_transfer(io::fir_from_json(io::read_file(input(cfg, "fir"))), nu.freqs())
                           : io::transfer_from_json(io::read_file(input(cfg, "transfer")));
      emit(cfg, io::to_json(pushforward_povm(phi, nu)));
    }
  } else if (cfg.command == "compose") {
    const auto phi = io::transfer_from_json(io::read_file(input(cfg, "transfer")));
    const auto psi = io::transfer_from_json(io::read_file(input(cfg, "outer_transfer")));
    emit(cfg, io::to_json(compose_transfer(psi, phi, cfg.rank_tol)));
  } else if (cfg.command == "invert") {
    const auto nu = io::povm_from_json(io::read_file(input(cfg, "povm")));
    const auto phi = io::transfer_from_json(io::read_file(input(cfg, "transfer")));
    const auto mode = cfg.strict_injectivity ? Injectivity::strict : Injectivity::on_support;
    emit(cfg, io::to_json(invert_transfer(phi, nu, cfg.rank_tol, mode)));
  } else if (cfg.command == "ckl") {
    emit(cfg, io::ckl_report(ckl_decompose(io::povm_from_json(io::read_file(input(cfg, "povm"))))));
  } else if (cfg.command == "hfpca") {
    const auto nu = io::povm_from_json(io::read_file(input(cfg, "povm")));
    const auto sys = ckl_decompose(nu);
    const auto q = rank_function(cfg.q, nu.size());
    for (const auto& w : hfpca_tie_warnings(sys, q)) std::cerr << "warning: " << w << '\n';
    emit(cfg, io::hfpca_report(sys, q));
  } else if (cfg.command == "verify") {
    const verify::SuiteOptions options{cfg.seed, cfg.threads};
    auto results = verify::acceptance_suite(options);
    if (cfg.inputs.contains("povm")) {
      const auto extra = verify::povm_invariants(io::povm_from_json(io::read_file(input(cfg, "povm"))), options);
      results.insert(results.end(), extra.begin(), extra.end());
    }
    bool all = true;
    for (const auto& r : results) {
      std::cerr << verify::summary_line(r) << '\n';
      all = all && r.passed;
    }
    emit(cfg, verify::report_json(results));
    return all ? 0 : 1;
  } else {
    throw UsageError("unknown command '" + cfg.command + "'");
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral operator measures: simulate, filter, decompose and verify"};
  std::string command;
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<long> realizations;
  std::optional<int> period;
  bool strict = false;
  bool real = false;
  app.add_option("command", command, "One of: simulate autocov fit-grid filter compose invert ckl hfpca verify")
      ->check(CLI::IsMember(kCommands));
  app.add_option("--config", config_path, "JSON run configuration")->check(CLI::ExistingFile);
  app.add_option("--seed", seed, "Random seed");
  app.add_option("--out", out, "Output path (stdout when absent)");
  app.add_option("--realizations", realizations, "Number of realizations R")->check(CLI::PositiveNumber);
  app.add_option("--period", period, "Period M")->check(CLI::PositiveNumber);
  app.add_flag("--strict-injectivity", strict, "Require injectivity on the whole domain when inverting");
  app.add_flag("--real", real, "Synthesize the real-valued process");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  RunConfig cfg;
  try {
    if (!config_path.empty()) cfg = load_config(config_path);
    if (!command.empty()) cfg.command = command;
    if (cfg.command.empty()) throw UsageError("no command given");
    if (seed) cfg.seed = *seed;
    if (out) cfg.output = fs::path(*out);
    if (realizations) cfg.realizations = *realizations;
    if (period) cfg.period = *period;
    cfg.strict_injectivity = cfg.strict_injectivity || strict;
    cfg.real = cfg.real || real;
    for (const auto& [key, path] : cfg.inputs) {
      if (!fs::exists(path)) throw UsageError("inputs." + key + ": no such file " + path.string());
    }
  } catch (const std::exception& e) {
    std::cerr << e.what() << '\n';
    return 2;
  }

  try {
    return run(cfg);
  } catch (const UsageError& e) {
    std::cerr << e.what() << '\n';
    return 2;
  } catch (const fspec::Error& e) {
    std::cerr << e.what() << '\n';
    return e.kind() == fspec::ErrorKind::parse ? 2 : 1;
  } catch (const Json::exception& e) {
    std::cerr << "parse: " << e.what() << '\n';
    return 2;
  }
}
