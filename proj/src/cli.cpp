#include "chest/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>

#include "chest/checks.hpp"
#include "chest/config.hpp"
#include "chest/error.hpp"
#include "chest/experiment.hpp"
#include "chest/simd/kernels.hpp"

namespace chest::cli {

namespace fs = std::filesystem;

namespace {

struct Options {
  std::string config;
  std::vector<std::string> sets;
  std::string out;
  std::optional<std::uint64_t> seed;
};

// Raised for problems that map to exit code 1.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

ExperimentConfig resolve_config(const Options& o) {
  std::vector<std::string> overrides = o.sets;
  if (o.seed) overrides.push_back("train.seed=" + std::to_string(*o.seed));
  if (!o.out.empty()) overrides.push_back("output.dir=\"" + o.out + "\"");
  try {
    return load_config(o.config, overrides);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Io) throw;
    throw InputError(e.what());
  }
}

DataSplits resolve_data(const ExperimentConfig& cfg) {
  try {
    return load_splits(cfg);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Io) throw;
    throw InputError(e.what());
  }
}

void print_metrics(std::ostream& out, const char* tag, const MetricsReport& m) {
  out << tag << ":";
  for (const auto& [k, v] : m.recall_at) out << " R@" << k << "=" << v;
  out << " MAP@R=" << m.map_at_r << '\n';
}

int cmd_train(const Options& o, std::ostream& out) {
  const ExperimentConfig cfg = resolve_config(o);
  const DataSplits data = resolve_data(cfg);
  const RunResult r = run_training_to(cfg, data, cfg.out_dir);
  out << "trained " << r.steps << " steps in " << r.seconds << " s; artifacts in " << cfg.out_dir << '\n';
  print_metrics(out, "test E", r.test_metrics.euclidean);
  print_metrics(out, "test H", r.test_metrics.hyperbolic);
  return kExitOk;
}

int cmd_eval(const Options& o, std::ostream& out) {
  const ExperimentConfig cfg = resolve_config(o);
  fs::path ckpt = cfg.eval.checkpoint;
  if (ckpt.empty()) ckpt = fs::path(cfg.out_dir) / "checkpoint.txt";
  const DataSplits data = resolve_data(cfg);
  const ParamSet params = load_checkpoint(ckpt);
  const MetricsRecord r = evaluation_record(cfg, params, data.test);
  fs::create_directories(cfg.out_dir);
  const std::string line = format_record(r);
  std::ofstream f(fs::path(cfg.out_dir) / "eval.jsonl");
  f << line << '\n';
  out << line << '\n';
  return kExitOk;
}

int cmd_ablate(const Options& o, std::ostream& out) {
  const ExperimentConfig cfg = resolve_config(o);
  const DataSplits data = resolve_data(cfg);
  const fs::path root = cfg.out_dir;
  fs::create_directories(root);
  const AblationResult result = run_ablation(cfg, data, root, &out);
  const auto rows = result.summarize();
  {
    std::ofstream f(root / "ablation.csv");
    write_ablation_csv(f, rows);
  }
  {
    std::ofstream f(root / "ablation_runs.csv");
    write_ablation_runs_csv(f, result);
  }
  write_ablation_csv(out, rows);
  return kExitOk;
}

int cmd_check_geometry(const Options& o, std::ostream& out) {
  if (!o.config.empty() || !o.sets.empty()) resolve_config(o);  // validates the file if given
  GeometrySuiteOptions opts;
  if (o.seed) opts.seed = *o.seed;
  const CheckReport r = run_geometry_suite(opts);
  print_report(out, r);
  return r.pass() ? kExitOk : kExitCheckFailed;
}

int cmd_check_grad(const Options& o, std::ostream& out) {
  GradientSuiteOptions opts;
  if (!o.config.empty() || !o.sets.empty()) {
    const ExperimentConfig cfg = resolve_config(o);
    opts.curvature = cfg.ball.curvature;
    opts.clip_radius = cfg.ball.clip_radius;
  }
  if (o.seed) opts.seed = *o.seed;
  const CheckReport r = run_gradient_suite(opts);
  print_report(out, r);
  return r.pass() ? kExitOk : kExitCheckFailed;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"chest: hyperbolic + Euclidean proxy metric learning"};
  app.require_subcommand(1);
  Options o;
  auto add_common = [&o](CLI::App* sub) {
    sub->add_option("--config", o.config, "JSON config file");
    sub->add_option("--set", o.sets, "override, key=value (repeatable)")->take_all();
    sub->add_option("--out", o.out, "output directory");
    sub->add_option("--seed", o.seed, "training seed");
  };
  struct Sub {
    const char* name;
    const char* help;
    int (*fn)(const Options&, std::ostream&);
  };
  const Sub subs[] = {
      {"train", "train a model and write checkpoint + metrics", cmd_train},
      {"eval", "evaluate a checkpoint on the test split", cmd_eval},
      {"ablate", "run the eta/K/tau ablation grid", cmd_ablate},
      {"check-geometry", "run the geometry invariant suite", cmd_check_geometry},
      {"check-grad", "run the finite-difference gradient suite", cmd_check_grad},
  };
  std::vector<std::pair<CLI::App*, const Sub*>> registered;
  for (const Sub& s : subs) {
    CLI::App* sub = app.add_subcommand(s.name, s.help);
    add_common(sub);
    registered.emplace_back(sub, &s);
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  }

  try {
    for (const auto& [sub, s] : registered) {
      if (sub->parsed()) {
        out << "simd backend: " << simd::backend_name(simd::active_backend()) << '\n';
        return s->fn(o, out);
      }
    }
  } catch (const InputError& e) {
    err << "invalid input: " << e.what() << '\n';
    return kExitValidation;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitValidation;
}

}  // namespace chest::cli
