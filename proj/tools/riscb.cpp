// riscb: command-line front end for channel generation, clustering, codebook
// learning, evaluation, size sweeps and oracles.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ris/checkpoint.hpp"
#include "ris/clustering.hpp"
#include "ris/codebook.hpp"
#include "ris/config.hpp"
#include "ris/dataset.hpp"
#include "ris/error.hpp"
#include "ris/pipeline.hpp"
#include "ris/plots.hpp"
#include "ris/rng.hpp"
#include "ris/simd/kernels.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitError = 1;
constexpr int kExitRefused = 3;

struct Overrides {
  std::string config;
  std::string channels;
  std::optional<std::uint64_t> seed;
  std::string out = "out";
  std::optional<std::size_t> threads;
  std::optional<std::size_t> beams;
  std::optional<unsigned> q;
  std::string levels;
  std::optional<std::size_t> budget;
  std::string simd = "auto";
};

void add_common(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config, "experiment config (JSON)");
  cmd->add_option("--channels", o.channels, "channel dataset file; replaces the config's channels");
  cmd->add_option("--seed", o.seed, "master seed");
  cmd->add_option("--out", o.out, "output directory")->capture_default_str();
  cmd->add_option("--threads", o.threads, "worker threads for sibling sub-array groups");
  cmd->add_option("--beams", o.beams, "codebook size N");
  cmd->add_option("--q", o.q, "phase-shifter bits");
  cmd->add_option("--levels", o.levels, "sub-array sizes per level, e.g. 32,8");
  cmd->add_option("--budget", o.budget, "iterations per group at every level");
  cmd->add_option("--simd", o.simd, "kernel level: auto, scalar or avx2")->capture_default_str();
}

ris::ExperimentConfig build_config(const Overrides& o) {
  ris::ExperimentConfig c;
  if (!o.config.empty()) c = ris::load_config(o.config);
  if (!o.channels.empty()) {
    c.scenario.reset();
    c.channels_file = o.channels;
  }
  if (o.seed) c.seed = *o.seed;
  if (o.threads) c.threads = *o.threads;
  if (o.beams) c.beams = *o.beams;
  if (o.q) c.q = *o.q;
  if (!o.levels.empty()) {
    const auto spec = ris::LevelSpec::parse(o.levels);
    c.levels.assign(spec.sizes().begin(), spec.sizes().end());
  }
  if (o.budget) {
    c.agent.budget = *o.budget;
    c.level_budgets.clear();
  }
  const auto level = ris::simd::set_level(ris::simd::parse_level(o.simd));
  if (o.simd != "auto" && ris::simd::level_name(level) != o.simd) {
    ris::warn("requested SIMD level " + o.simd + " unavailable; using " +
              std::string(ris::simd::level_name(level)));
  }
  return c;
}

fs::path out_dir(const Overrides& o) {
  fs::path dir = o.out;
  fs::create_directories(dir);
  return dir;
}

std::string hash_line(const ris::ExperimentConfig& c) { return "config_hash=" + ris::config_hash(c); }

int cmd_gen(const Overrides& o) {
  const auto config = build_config(o);
  if (!config.scenario) throw ris::ConfigError("gen needs a config with a scenario");
  config.validate();
  const auto data = ris::load_channels(config);
  const fs::path path = out_dir(o) / "channels.json";
  ris::export_channels(path, data);
  std::cout << "wrote " << data.users.size() << " users, M=" << data.geometry.size() << " to "
            << path.string() << "\n";
  return 0;
}

int cmd_cluster(const Overrides& o) {
  const auto config = build_config(o);
  config.validate();
  const auto data = ris::load_channels(config);
  const auto& grid = ris::PhaseGrid::of(config.q);
  const auto sensing = ris::sensing_codebook(data.geometry.size(), config.clustering.sensing_beams,
                                             grid, ris::derive_seed(config.seed, "sensing"));
  const auto features = ris::power_features(
      data.users, sensing,
      {config.clustering.measurement_noise, ris::derive_seed(config.seed, "measurement")});
  ris::KMeansOptions opts;
  opts.max_iterations = config.clustering.max_iterations;
  const auto assignment =
      ris::cluster_users(features, config.beams, ris::derive_seed(config.seed, "cluster"), opts);
  const fs::path dir = out_dir(o);
  ris::write_text_file(dir / "assignment.csv", ris::assignment_csv(assignment, hash_line(config)));
  ris::write_text_file(dir / "centroids.csv", ris::centroids_csv(assignment, hash_line(config)));
  std::cout << "clustered " << data.users.size() << " users into " << assignment.clusters()
            << " groups in " << assignment.iterations << " iterations\n";
  return 0;
}

void print_summary(const ris::ResultBundle& b) {
  auto show = [](const char* name, const std::optional<double>& v) {
    if (v) std::cout << "  " << name << " " << ris::format_double(*v) << "\n";
  };
  std::cout << "config_hash " << b.config_hash << "\n";
  show("learned_objective", b.learned_objective);
  show("dft_objective", b.dft_objective);
  show("dft_ideal_objective", b.dft_ideal_objective);
  show("aligned_mean", b.aligned_mean);
  show("exhaustive_mean", b.exhaustive_mean);
  show("egc_mean", b.egc_mean);
  std::cout << "  sanity_ok " << (b.sanity_ok ? "yes" : "no") << "\n";
}

int cmd_learn(const Overrides& o) {
  const auto config = build_config(o);
  const auto bundle = ris::run_pipeline(config);
  const auto files = ris::write_bundle(bundle, out_dir(o));
  print_summary(bundle);
  std::cout << "wrote " << files.size() << " files to " << o.out << "\n";
  return 0;
}

int cmd_eval(const Overrides& o, const std::string& codebook_path) {
  auto config = build_config(o);
  config.learn = false;
  auto bundle = ris::run_pipeline(config);
  const auto cb = ris::read_codebook(codebook_path);
  if (cb.elements() != bundle.dataset.geometry.size()) {
    throw ris::DimensionError("codebook has M=" + std::to_string(cb.elements()) +
                              " but the channels have M=" +
                              std::to_string(bundle.dataset.geometry.size()));
  }
  bundle.learned_objective = ris::codebook_objective(cb, bundle.dataset.users);
  bundle.codebook = cb;
  const fs::path dir = out_dir(o);
  ris::write_text_file(dir / "eval.csv", ris::results_csv(bundle));
  print_summary(bundle);
  return 0;
}

std::vector<std::size_t> parse_sizes(const std::string& text) {
  std::vector<std::size_t> sizes;
  for (const auto& part : CLI::detail::split(text, ',')) {
    try {
      std::size_t pos = 0;
      const auto n = std::stoull(part, &pos);
      if (pos != part.size() || n == 0) throw std::invalid_argument(part);
      sizes.push_back(n);
    } catch (const std::exception&) {
      throw ris::ConfigError("bad codebook size '" + part + "' in --sizes");
    }
  }
  return sizes;
}

int cmd_sweep(const Overrides& o, const std::string& sizes_text) {
  const auto config = build_config(o);
  const auto rows = ris::sweep_codebook_size(config, parse_sizes(sizes_text));
  const fs::path dir = out_dir(o);
  ris::write_text_file(dir / "sweep.csv", ris::sweep_csv(rows, ris::config_hash(config)));
  ris::write_sweep_plot(dir / "plot_sweep.svg", rows);
  for (const auto& r : rows) {
    std::cout << "N=" << r.beams << " learned " << ris::format_double(r.learned) << " dft "
              << ris::format_double(r.dft) << " egc " << ris::format_double(r.egc) << "\n";
  }
  return 0;
}

int cmd_oracle(const Overrides& o, bool exhaustive, std::uint64_t limit) {
  const auto config = build_config(o);
  const auto data = ris::load_channels(config);
  const auto rows = ris::run_oracles(data.users, config.q, exhaustive, limit);
  const std::string report = ris::oracle_report_json(rows, config.q);
  ris::write_text_file(out_dir(o) / "oracle.json", report + "\n");
  for (const auto& r : rows) {
    std::cout << "user " << r.user + 1 << " egc " << ris::format_double(r.egc);
    if (r.exhaustive) std::cout << " exhaustive " << ris::format_double(r.exhaustive_gain);
    std::cout << " aligned " << ris::format_double(r.aligned_gain) << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"RIS reflection codebook learning toolkit"};
  app.require_subcommand(1);

  Overrides gen_o, cluster_o, learn_o, eval_o, sweep_o, oracle_o;
  auto* gen = app.add_subcommand("gen", "generate a synthetic channel dataset");
  add_common(gen, gen_o);
  auto* cluster = app.add_subcommand("cluster", "cluster users from sensing-beam powers");
  add_common(cluster, cluster_o);
  auto* learn = app.add_subcommand("learn", "run the full pipeline and write all artifacts");
  add_common(learn, learn_o);
  auto* eval = app.add_subcommand("eval", "evaluate a codebook file against the baselines");
  add_common(eval, eval_o);
  std::string codebook_path;
  eval->add_option("--codebook", codebook_path, "codebook file")->required();
  auto* sweep = app.add_subcommand("sweep", "learn codebooks of several sizes");
  add_common(sweep, sweep_o);
  std::string sizes = "1,2,4,6,8,16";
  sweep->add_option("--sizes", sizes, "comma-separated codebook sizes")->capture_default_str();
  auto* oracle = app.add_subcommand("oracle", "per-user EGC, aligned and exhaustive oracles");
  add_common(oracle, oracle_o);
  bool exhaustive = false;
  std::uint64_t limit = ris::kDefaultSearchLimit;
  oracle->add_flag("--exhaustive", exhaustive, "also run exhaustive search");
  oracle->add_option("--limit", limit, "exhaustive search-space guard")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) return cmd_gen(gen_o);
    if (*cluster) return cmd_cluster(cluster_o);
    if (*learn) return cmd_learn(learn_o);
    if (*eval) return cmd_eval(eval_o, codebook_path);
    if (*sweep) return cmd_sweep(sweep_o, sizes);
    if (*oracle) return cmd_oracle(oracle_o, exhaustive, limit);
  } catch (const ris::SearchLimitError& e) {
    std::cerr << "refused: " << e.what() << "\n";
    return kExitRefused;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
