#include "chest/experiment.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>

#include "chest/error.hpp"
#include "chest/train.hpp"

namespace chest {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

DataSplits load_splits(const ExperimentConfig& cfg) {
  if (cfg.data.synthetic_source()) {
    auto [train, test] = generate_hierarchy(cfg.data.synthetic);
    return {std::move(train), std::move(test)};
  }
  LoadedDataset train = load_dataset(cfg.data.train_path, Split::Train);
  LoadedDataset test = load_dataset(cfg.data.test_path, Split::Test);
  if (train.data.input_dim() != test.data.input_dim()) {
    throw Error(ErrorKind::Dimension, "train and test feature widths differ");
  }
  // Test labels must refer to the same classes as the training labels.
  std::map<long long, int> remap(train.label_mapping.begin(), train.label_mapping.end());
  std::map<int, long long> original;
  for (const auto& [raw, id] : test.label_mapping) original[id] = raw;
  int next = static_cast<int>(remap.size());
  for (int& l : test.data.labels) {
    auto it = remap.find(original.at(l));
    if (it == remap.end()) it = remap.emplace(original.at(l), next++).first;
    l = it->second;
  }
  return {std::move(train.data), std::move(test.data)};
}

MetricsRecord evaluation_record(const ExperimentConfig& cfg, const ParamSet& params, const VectorDataset& split) {
  const std::size_t classes = static_cast<std::size_t>(ProxyBank::from_params(params).classes);
  ExperimentConfig c = cfg;
  c.per_class = ProxyBank::from_params(params).per_class;
  Trainer probe(c.model_dims(classes), c.ball, c.loss, c.train, params);
  // Labels unseen in training have no proxies; the loss covers known classes only.
  Batch known;
  known.inputs = Tensor({0, split.input_dim()});
  for (std::size_t i = 0; i < split.size(); ++i) {
    if (static_cast<std::size_t>(split.labels[i]) >= classes) continue;
    known.labels.push_back(split.labels[i]);
    const auto row = split.features.row(i);
    known.inputs.data.insert(known.inputs.data.end(), row.begin(), row.end());
  }
  known.inputs.shape[0] = known.labels.size();
  const LossBreakdown losses = known.labels.empty() ? LossBreakdown{} : probe.evaluate_loss(known);
  MetricsRecord r = MetricsRecord::from_losses(0, losses, 0.0);
  const DualMetrics m = evaluate_both(params, c.encoder, c.ball, split, c.eval.ks);
  r.eval_E = to_space_metrics(m.euclidean);
  r.eval_H = to_space_metrics(m.hyperbolic);
  return r;
}

RunResult run_training(const ExperimentConfig& cfg, const DataSplits& data, MetricsLog* log) {
  cfg.validate();
  data.train.validate();
  data.test.validate();
  const auto start = Clock::now();
  const std::size_t classes = data.train.num_classes();
  Trainer trainer(cfg.model_dims(classes), cfg.ball, cfg.loss, cfg.train);
  auto elapsed = [&] { return std::chrono::duration<double>(Clock::now() - start).count(); };

  RunResult result;
  for (std::size_t s = 1; s <= cfg.train.steps; ++s) {
    result.last_losses = trainer.step(data.train);
    const bool eval_now = cfg.eval.every > 0 && s % cfg.eval.every == 0;
    if (log && (s % cfg.log_every == 0 || s == cfg.train.steps || eval_now)) {
      MetricsRecord r = MetricsRecord::from_losses(s, result.last_losses, elapsed());
      if (eval_now) {
        const DualMetrics m = evaluate_both(trainer.params(), cfg.encoder, cfg.ball, data.test, cfg.eval.ks);
        r.eval_E = to_space_metrics(m.euclidean);
        r.eval_H = to_space_metrics(m.hyperbolic);
      }
      log->emit(r);
    }
  }
  result.params = trainer.params();
  result.steps = trainer.steps_taken();
  result.triplet_sampler_calls = trainer.triplet_sampler_calls();
  result.test_metrics = evaluate_both(result.params, cfg.encoder, cfg.ball, data.test, cfg.eval.ks);
  if (log) {
    MetricsRecord r = evaluation_record(cfg, result.params, data.test);
    r.step = result.steps;
    r.wall_time = elapsed();
    log->emit(r);
  }
  result.seconds = elapsed();
  return result;
}

RunResult run_training_to(const ExperimentConfig& cfg, const DataSplits& data, const fs::path& dir) {
  fs::create_directories(dir);
  save_config(dir / "config.json", cfg);
  MetricsLog log(dir / "metrics.jsonl");
  RunResult r = run_training(cfg, data, &log);
  save_checkpoint(dir / "checkpoint.txt", r.params);
  return r;
}

std::string AblationCell::label() const {
  std::ostringstream s;
  s << "eta_H=" << eta_H << " eta_E=" << eta_E << " K=" << per_class << " tau=" << tau;
  return s.str();
}

std::vector<AblationCell> ablation_grid(std::size_t k_max, double tau) {
  return {
      {1.0, 0.0, 1, 0.0},     {0.0, 1.0, 1, 0.0},     {1.0, 1.0, 1, 0.0},   {1.0, 0.0, k_max, 0.0},
      {0.0, 1.0, k_max, 0.0}, {1.0, 1.0, k_max, 0.0}, {1.0, 0.0, k_max, tau}, {1.0, 1.0, k_max, tau},
  };
}

ExperimentConfig cell_config(const ExperimentConfig& base, const AblationCell& cell, std::uint64_t seed) {
  ExperimentConfig c = base;
  c.loss.eta_H = cell.eta_H;
  c.loss.eta_E = cell.eta_E;
  c.loss.tau = cell.tau;
  c.per_class = cell.per_class;
  c.train.seed = seed;
  return c;
}

AblationResult run_ablation(const ExperimentConfig& base, const DataSplits& data,
                            const std::optional<fs::path>& out_root, std::ostream* progress) {
  AblationResult result;
  result.cells = ablation_grid(base.ablate.k_max, base.ablate.tau);
  const std::vector<std::uint64_t> seeds =
      base.ablate.seeds.empty() ? std::vector<std::uint64_t>{base.train.seed} : base.ablate.seeds;
  for (std::size_t ci = 0; ci < result.cells.size(); ++ci) {
    for (std::uint64_t seed : seeds) {
      const ExperimentConfig cfg = cell_config(base, result.cells[ci], seed);
      AblationRun run;
      run.cell = ci;
      run.seed = seed;
      try {
        const RunResult r = out_root ? run_training_to(cfg, data, *out_root / ("cell" + std::to_string(ci + 1) + "_seed" + std::to_string(seed)))
                                     : run_training(cfg, data, nullptr);
        run.recall1_H = r.test_metrics.hyperbolic.recall_at.at(1);
        run.recall1_E = r.test_metrics.euclidean.recall_at.at(1);
        run.map_H = r.test_metrics.hyperbolic.map_at_r;
        run.map_E = r.test_metrics.euclidean.map_at_r;
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::Evaluation && e.kind() != ErrorKind::Propagation) throw;
        run.diverged = true;
        run.failure = e.what();
      }
      if (progress) {
        *progress << "cell " << ci + 1 << " [" << result.cells[ci].label() << "] seed " << seed << ": "
                  << (run.diverged ? "DIVERGED" : "R@1 H=" + std::to_string(run.recall1_H) + " E=" + std::to_string(run.recall1_E))
                  << '\n';
      }
      result.runs.push_back(run);
    }
  }
  return result;
}

std::vector<CellSummary> AblationResult::summarize() const {
  std::vector<CellSummary> rows;
  for (std::size_t ci = 0; ci < cells.size(); ++ci) {
    CellSummary s{cells[ci]};
    for (const AblationRun& r : runs) {
      if (r.cell != ci) continue;
      ++s.runs;
      if (r.diverged) {
        ++s.diverged;
        continue;
      }
      s.mean_recall1_H += r.recall1_H;
      s.mean_recall1_E += r.recall1_E;
      s.mean_map_H += r.map_H;
      s.mean_map_E += r.map_E;
    }
    const std::size_t ok = s.runs - s.diverged;
    if (ok > 0) {
      s.mean_recall1_H /= static_cast<double>(ok);
      s.mean_recall1_E /= static_cast<double>(ok);
      s.mean_map_H /= static_cast<double>(ok);
      s.mean_map_E /= static_cast<double>(ok);
    }
    rows.push_back(s);
  }
  return rows;
}

void write_ablation_csv(std::ostream& out, const std::vector<CellSummary>& rows) {
  out << "cell,eta_H,eta_E,K,tau,runs,diverged,recall1_H,recall1_E,map_H,map_E\n";
  out << std::setprecision(6);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const CellSummary& s = rows[i];
    out << i + 1 << ',' << s.cell.eta_H << ',' << s.cell.eta_E << ',' << s.cell.per_class << ',' << s.cell.tau << ','
        << s.runs << ',' << s.diverged << ',' << s.mean_recall1_H << ',' << s.mean_recall1_E << ',' << s.mean_map_H
        << ',' << s.mean_map_E << '\n';
  }
}

void write_ablation_runs_csv(std::ostream& out, const AblationResult& result) {
  out << "cell,seed,diverged,recall1_H,recall1_E,map_H,map_E\n";
  out << std::setprecision(6);
  for (const AblationRun& r : result.runs) {
    out << r.cell + 1 << ',' << r.seed << ',' << (r.diverged ? 1 : 0) << ',' << r.recall1_H << ',' << r.recall1_E
        << ',' << r.map_H << ',' << r.map_E << '\n';
  }
}

std::vector<AblationComparison> compare_cells(const std::vector<CellSummary>& rows, double margin) {
  std::vector<AblationComparison> out;
  for (const CellSummary& c : rows) {
    if (!c.cell.combined()) continue;
    for (const CellSummary& s : rows) {
      if (s.cell.combined() || s.cell.per_class != c.cell.per_class || s.cell.tau != c.cell.tau) continue;
      AblationComparison cmp{c.cell.label(), s.cell.label(), c.mean_recall1_H, s.mean_recall1_H};
      cmp.pass = c.diverged == 0 && c.mean_recall1_H >= s.mean_recall1_H - margin;
      out.push_back(cmp);
    }
  }
  return out;
}

}  // namespace chest
