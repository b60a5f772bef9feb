#include "ris/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "json.hpp"
#include "ris/checkpoint.hpp"
#include "ris/error.hpp"
#include "ris/plots.hpp"
#include "ris/rng.hpp"

namespace ris {

using nlohmann::json;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Runs one stage, rewrapping any library error with the stage name.
template <typename F>
auto stage(const char* name, F&& body) -> decltype(body()) {
  try {
    return body();
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(name, e.what());
  }
}

LevelSpec level_spec(const ExperimentConfig& config, std::size_t elements) {
  if (config.levels.empty()) return LevelSpec(std::vector<std::size_t>{elements});
  LevelSpec spec(config.levels);
  spec.require_elements(elements);
  return spec;
}

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

bool not_above(double a, double b) { return a <= b + 1e-9 * std::max(1.0, std::abs(b)); }

std::string hash_comment(const std::string& hash) { return "config_hash=" + hash; }

std::string with_hash(const std::string& json_text, const std::string& hash) {
  json doc = json::parse(json_text);
  doc["config_hash"] = hash;
  return doc.dump(1);
}

std::string opt(const std::optional<double>& v) { return v ? format_double(*v) : "nan"; }

}  // namespace

ChannelDataset load_channels(const ExperimentConfig& config) {
  if (config.channels_file) return import_channels(*config.channels_file);
  if (!config.scenario) throw ConfigError("config needs a scenario or channels_file");
  ScenarioSpec spec = *config.scenario;
  spec.seed = derive_seed(config.seed, "scenario", {spec.seed});
  return to_dataset(generate_scenario(spec), config.q);
}

ResultBundle run_pipeline(const ExperimentConfig& config) {
  const auto start = Clock::now();
  stage("config", [&] { config.validate(); });
  ChannelDataset data = stage("channels", [&] { return load_channels(config); });
  ResultBundle bundle = run_pipeline(config, std::move(data));
  bundle.timings.insert(bundle.timings.begin(), {"channels", seconds_since(start)});
  return bundle;
}

ResultBundle run_pipeline(const ExperimentConfig& config, ChannelDataset dataset) {
  ResultBundle b;
  b.config = config;
  b.config_hash = config_hash(config);
  b.dataset = std::move(dataset);
  const auto& users = b.dataset.users;
  const std::size_t M = b.dataset.geometry.size();
  const auto& grid = stage("config", [&]() -> const PhaseGrid& {
    config.validate();
    if (users.empty()) throw DomainError("dataset has no users");
    return PhaseGrid::of(config.q);
  });
  const LevelSpec levels = stage("config", [&] { return level_spec(config, M); });

  if (config.learn) {
    auto t0 = Clock::now();
    b.assignment = stage("cluster", [&] {
      if (config.beams > users.size()) {
        throw ConfigError("codebook size " + std::to_string(config.beams) + " exceeds user count " +
                          std::to_string(users.size()));
      }
      const Codebook sensing = sensing_codebook(M, config.clustering.sensing_beams, grid,
                                                derive_seed(config.seed, "sensing"));
      const PowerFeatureMatrix features = power_features(
          users, sensing,
          {config.clustering.measurement_noise, derive_seed(config.seed, "measurement")});
      KMeansOptions opts;
      opts.max_iterations = config.clustering.max_iterations;
      return cluster_users(features, config.beams, derive_seed(config.seed, "cluster"), opts);
    });
    b.timings.emplace_back("cluster", seconds_since(t0));

    t0 = Clock::now();
    std::vector<InteractionVector> beams;
    for (std::size_t k = 0; k < config.beams; ++k) {
      ClusterResult cr = stage("learn", [&] {
        ClusterResult r;
        r.members = b.assignment->members(k);
        if (r.members.empty()) {
          warn("cluster " + std::to_string(k + 1) + " is empty; its beam is all-zero");
          r.learned.vector = InteractionVector::zeros(config.q, M);
          r.learned.phases = LevelPhases::zeros(levels, grid);
          return r;
        }
        LearningTask task;
        for (std::size_t u : r.members) task.users.push_back(users[u]);
        task.levels = levels;
        task.bits = config.q;
        task.agent = config.agent;
        task.level_budgets = config.level_budgets;
        task.transfer = config.transfer;
        task.threads = config.threads;
        task.seed = derive_seed(config.seed, "learn", {k});
        r.learned = learn_vector(task);
        r.objective = r.learned.gain;
        return r;
      });
      beams.push_back(cr.learned.vector);
      b.clusters.push_back(std::move(cr));
    }
    b.codebook = Codebook(config.q, M, std::move(beams));
    b.timings.emplace_back("learn", seconds_since(t0));
  } else {
    b.codebook = stage("baseline", [&] { return dft_codebook(M, config.baselines.dft_size, grid); });
  }

  const auto t0 = Clock::now();
  stage("evaluate", [&] {
    const Codebook dft = dft_codebook(M, config.baselines.dft_size, grid);
    b.dft_objective = codebook_objective(dft, users);
    b.dft_ideal_objective = dft_ideal_objective(config.baselines.dft_size, users);
    if (config.learn) b.learned_objective = codebook_objective(b.codebook, users);

    std::vector<double> egc;
    std::vector<double> aligned;
    for (const auto& u : users) {
      egc.push_back(egc_upper_bound(u));
      if (config.baselines.oracle) aligned.push_back(gain(u, aligned_oracle(u, grid)));
    }
    b.egc_mean = mean_of(egc);
    if (config.baselines.oracle) b.aligned_mean = mean_of(aligned);
    if (config.baselines.exhaustive) {
      std::vector<double> best;
      for (const auto& u : users) {
        best.push_back(exhaustive_search(std::span<const CompositeChannel>(&u, 1), M, grid,
                                         config.baselines.exhaustive_limit)
                           .mean_gain);
      }
      b.exhaustive_mean = mean_of(best);
    }

    const double upper = b.aligned_mean.value_or(b.egc_mean);
    b.sanity_ok = not_above(upper, b.egc_mean);
    if (b.learned_objective) b.sanity_ok = b.sanity_ok && not_above(*b.learned_objective, upper);
    if (!b.sanity_ok) {
      warn("sanity chain learned <= aligned <= EGC violated (learned " + opt(b.learned_objective) +
           ", aligned " + opt(b.aligned_mean) + ", EGC " + format_double(b.egc_mean) + ")");
    }
  });
  b.timings.emplace_back("evaluate", seconds_since(t0));
  return b;
}

std::string results_csv(const ResultBundle& b) {
  std::string out = "# " + hash_comment(b.config_hash) + "\n";
  out += "metric,value\n";
  auto row = [&](const std::string& k, const std::string& v) { out += k + ',' + v + '\n'; };
  row("users", std::to_string(b.dataset.users.size()));
  row("elements", std::to_string(b.dataset.geometry.size()));
  row("q", std::to_string(b.config.q));
  row("beams", std::to_string(b.codebook.size()));
  row("learned_objective", opt(b.learned_objective));
  row("dft_size", std::to_string(b.config.baselines.dft_size));
  row("dft_objective", format_double(b.dft_objective));
  row("dft_ideal_objective", format_double(b.dft_ideal_objective));
  row("aligned_mean", opt(b.aligned_mean));
  row("egc_mean", format_double(b.egc_mean));
  row("exhaustive_mean", opt(b.exhaustive_mean));
  row("sanity_ok", b.sanity_ok ? "1" : "0");
  for (std::size_t k = 0; k < b.clusters.size(); ++k) {
    row("cluster_" + std::to_string(k + 1) + "_users", std::to_string(b.clusters[k].members.size()));
    row("cluster_" + std::to_string(k + 1) + "_objective", format_double(b.clusters[k].objective));
  }
  return out;
}

std::string timings_csv(const ResultBundle& b) {
  std::string out = "# " + hash_comment(b.config_hash) + "\nstage,seconds\n";
  for (const auto& [name, s] : b.timings) out += name + ',' + format_double(s) + '\n';
  return out;
}

std::string level_trace_csv(const ResultBundle& b, std::size_t cluster, std::size_t level) {
  if (cluster >= b.clusters.size()) throw IndexError("trace: cluster out of range");
  std::string out = "# " + hash_comment(b.config_hash) + " cluster=" + std::to_string(cluster + 1) +
                    " level=" + std::to_string(level + 1) + "\n";
  out += "group,iteration,gain,best_gain,reward,loss\n";
  for (const auto& tr : b.clusters[cluster].learned.traces) {
    if (tr.level != level) continue;
    const std::string g = std::to_string(tr.group + 1) + ',';
    for (const auto& r : tr.rows) {
      out += g + std::to_string(r.iteration) + ',' + format_double(r.gain) + ',' +
             format_double(r.best_gain) + ',' + std::to_string(r.reward) + ',' +
             format_double(r.loss) + '\n';
    }
  }
  return out;
}

std::vector<std::filesystem::path> write_bundle(const ResultBundle& b,
                                                const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
  std::vector<std::filesystem::path> written;
  auto put = [&](const std::string& name, const std::string& text) {
    write_text_file(dir / name, text);
    written.push_back(dir / name);
  };
  const std::string& h = b.config_hash;

  put("config.json", [&] {
    json j = config_to_json(b.config);
    j["config_hash"] = h;
    return j.dump(2) + "\n";
  }());
  put("channels.json", with_hash(serialize_channels(b.dataset), h) + "\n");
  put("codebook.json", with_hash(serialize_codebook(b.codebook), h) + "\n");
  put("results.csv", results_csv(b));
  put("timings.csv", timings_csv(b));
  if (b.assignment) {
    put("assignment.csv", assignment_csv(*b.assignment, hash_comment(h)));
    put("centroids.csv", centroids_csv(*b.assignment, hash_comment(h)));
  }

  std::size_t level_count = 0;
  for (const auto& c : b.clusters) level_count = std::max(level_count, c.learned.phases.levels.size());
  for (std::size_t k = 0; k < b.clusters.size(); ++k) {
    if (b.clusters[k].learned.traces.empty()) continue;
    for (std::size_t l = 0; l < level_count; ++l) {
      put("trace_" + std::to_string(k + 1) + "_" + std::to_string(l + 1) + ".csv",
          level_trace_csv(b, k, l));
    }
  }

  // One plot per level: best-so-far gain averaged over the level's groups.
  for (std::size_t l = 0; l < level_count; ++l) {
    LinePlot plot{"Learning level " + std::to_string(l + 1), "iteration",
                  "mean best-so-far gain", {}};
    for (std::size_t k = 0; k < b.clusters.size(); ++k) {
      Series s{"cluster " + std::to_string(k + 1), {}, {}};
      std::size_t groups = 0;
      for (const auto& tr : b.clusters[k].learned.traces) {
        if (tr.level != l) continue;
        if (s.y.size() < tr.rows.size()) s.y.resize(tr.rows.size(), 0.0);
        for (std::size_t i = 0; i < tr.rows.size(); ++i) s.y[i] += tr.rows[i].best_gain;
        ++groups;
      }
      if (groups == 0) continue;
      for (std::size_t i = 0; i < s.y.size(); ++i) {
        s.y[i] /= static_cast<double>(groups);
        s.x.push_back(static_cast<double>(i + 1));
      }
      plot.series.push_back(std::move(s));
    }
    if (plot.series.empty()) continue;
    const std::string name = "plot_level_" + std::to_string(l + 1) + ".svg";
    write_svg(dir / name, plot);
    written.push_back(dir / name);
  }
  return written;
}

std::vector<SweepRow> sweep_codebook_size(const ExperimentConfig& config,
                                          const std::vector<std::size_t>& sizes) {
  if (sizes.empty()) throw ConfigError("sweep needs at least one codebook size");
  ChannelDataset data = stage("channels", [&] {
    config.validate();
    return load_channels(config);
  });
  const auto& grid = PhaseGrid::of(config.q);
  std::vector<SweepRow> rows;
  for (std::size_t n : sizes) {
    ExperimentConfig c = config;
    c.beams = n;
    c.learn = true;
    const ResultBundle b = run_pipeline(c, data);
    const Codebook dft = dft_codebook(data.geometry.size(), n, grid);
    rows.push_back({n, *b.learned_objective, codebook_objective(dft, data.users), b.egc_mean});
  }
  return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows, const std::string& hash) {
  std::string out = "# " + hash_comment(hash) + "\n";
  out += "N,learned_objective,dft_objective,egc_mean\n";
  for (const auto& r : rows) {
    out += std::to_string(r.beams) + ',' + format_double(r.learned) + ',' + format_double(r.dft) +
           ',' + format_double(r.egc) + '\n';
  }
  return out;
}

void write_sweep_plot(const std::filesystem::path& path, const std::vector<SweepRow>& rows) {
  LinePlot plot{"Average gain versus codebook size", "number of beams N", "average gain", {}};
  Series learned{"learned", {}, {}};
  Series dft{"DFT (quantized)", {}, {}};
  Series egc{"EGC bound", {}, {}};
  for (const auto& r : rows) {
    const double n = static_cast<double>(r.beams);
    learned.x.push_back(n);
    learned.y.push_back(r.learned);
    dft.x.push_back(n);
    dft.y.push_back(r.dft);
    egc.x.push_back(n);
    egc.y.push_back(r.egc);
  }
  plot.series = {learned, dft, egc};
  write_svg(path, plot);
}

std::vector<OracleRow> run_oracles(const std::vector<CompositeChannel>& users, unsigned bits,
                                   bool exhaustive, std::uint64_t limit) {
  if (users.empty()) throw DomainError("oracle: no users");
  const auto& grid = PhaseGrid::of(bits);
  const std::size_t M = users.front().size();
  if (exhaustive) {
    const double count = std::pow(static_cast<double>(grid.size()), static_cast<double>(M));
    if (count > static_cast<double>(limit)) {
      throw SearchLimitError("exhaustive search over " + format_double(count) +
                                 " vectors exceeds the limit of " + std::to_string(limit),
                             count, static_cast<double>(limit));
    }
  }
  std::vector<OracleRow> rows;
  for (std::size_t u = 0; u < users.size(); ++u) {
    const auto& c = users[u];
    if (c.size() != M) throw DimensionError("oracle: users differ in element count");
    OracleRow r{u, egc_upper_bound(c), aligned_oracle(c, grid), 0.0, std::nullopt, 0.0};
    r.aligned_gain = gain(c, r.aligned);
    if (exhaustive) {
      auto res = exhaustive_search(std::span<const CompositeChannel>(&c, 1), M, grid, limit);
      r.exhaustive = res.vector;
      r.exhaustive_gain = res.mean_gain;
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

std::string oracle_report_json(const std::vector<OracleRow>& rows, unsigned bits) {
  auto one_based = [](const InteractionVector& v) {
    json a = json::array();
    for (PhaseIndex i : v.indices()) a.push_back(i + 1);
    return a;
  };
  json users = json::array();
  for (const auto& r : rows) {
    json u{{"user", r.user + 1},
           {"egc", r.egc},
           {"aligned_gain", r.aligned_gain},
           {"aligned", one_based(r.aligned)}};
    if (r.exhaustive) {
      u["exhaustive_gain"] = r.exhaustive_gain;
      u["exhaustive"] = one_based(*r.exhaustive);
    }
    users.push_back(std::move(u));
  }
  return json{{"q", bits}, {"users", users}}.dump(1);
}

}  // namespace ris
