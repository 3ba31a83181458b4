// sgblend command-line harness: gradient certification, training runs,
// multi-activation comparisons and activation-curve dumps.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "sgblend/experiment.hpp"

namespace {

using namespace sgblend;

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<ActivationKind> parse_kinds(const std::string& arg) {
  if (arg == "all") return {all_kinds.begin(), all_kinds.end()};
  std::vector<ActivationKind> kinds;
  for (const std::string& name : split_list(arg)) {
    const auto kind = kind_from_string(name);
    if (!kind || *kind == ActivationKind::identity) {
      throw std::invalid_argument("unknown activation kind '" + name + "'");
    }
    kinds.push_back(*kind);
  }
  if (kinds.empty()) throw std::invalid_argument("empty activation kind list");
  return kinds;
}

std::vector<int> parse_hidden(const std::string& arg) {
  std::vector<int> sizes;
  for (const std::string& item : split_list(arg)) {
    try {
      sizes.push_back(std::stoi(item));
    } catch (const std::exception&) {
      throw std::invalid_argument("bad hidden layer size '" + item + "'");
    }
  }
  if (sizes.empty()) throw std::invalid_argument("empty hidden layer list");
  return sizes;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << text;
}

// Flags shared by train and compare. Only values the user actually passed
// override the config file.
struct TrainFlags {
  std::string config_path;
  std::string dataset;
  int n = 0;
  double noise = 0.0;
  int turns = 0;
  int centers = 0;
  double blob_sd = 0.0;
  std::string csv_path;
  int label_column = 0;
  bool has_header = false;
  std::uint64_t data_seed = 0;
  double val_fraction = 0.0;
  std::string hidden;
  std::string activation;
  std::string blend_gelu;
  std::string optimizer;
  double lr = 0.0;
  double momentum = 0.0;
  double weight_decay = 0.0;
  int epochs = 0;
  int batch = 0;
  bool plateau = true;
  bool early_stop = true;
  int plateau_patience = 0;
  double plateau_factor = 0.0;
  int early_stop_patience = 0;
  double dead_eps = 0.0;
  std::uint64_t seed = 0;
  std::string out_dir;
};

void add_train_flags(CLI::App* cmd, TrainFlags& f) {
  cmd->add_option("--config", f.config_path, "JSON config file; flags override it");
  cmd->add_option("--dataset", f.dataset, "two_moons | spirals | blobs | csv");
  cmd->add_option("--n", f.n, "number of generated samples");
  cmd->add_option("--noise", f.noise, "generator noise standard deviation");
  cmd->add_option("--turns", f.turns, "spiral turns");
  cmd->add_option("--centers", f.centers, "blob centers (= classes)");
  cmd->add_option("--blob-sd", f.blob_sd, "blob standard deviation");
  cmd->add_option("--csv", f.csv_path, "CSV file path");
  cmd->add_option("--label-column", f.label_column, "0-based label column");
  cmd->add_flag("--has-header", f.has_header, "skip the first CSV row");
  cmd->add_option("--data-seed", f.data_seed, "dataset generator seed");
  cmd->add_option("--val-fraction", f.val_fraction, "validation fraction");
  cmd->add_option("--hidden", f.hidden, "hidden layer sizes, e.g. 32,32");
  cmd->add_option("--activation", f.activation, "hidden activation kind");
  cmd->add_option("--blend-gelu", f.blend_gelu, "gelu inside sgblend: tanh | exact");
  cmd->add_option("--optimizer", f.optimizer, "sgd | adam");
  cmd->add_option("--lr", f.lr, "initial learning rate");
  cmd->add_option("--momentum", f.momentum, "sgd momentum");
  cmd->add_option("--weight-decay", f.weight_decay, "sgd weight decay");
  cmd->add_option("--epochs", f.epochs, "maximum epochs");
  cmd->add_option("--batch", f.batch, "mini-batch size");
  cmd->add_flag("--plateau,!--no-plateau", f.plateau, "ReduceLROnPlateau scheduler");
  cmd->add_flag("--early-stop,!--no-early-stop", f.early_stop, "early stopping");
  cmd->add_option("--plateau-patience", f.plateau_patience, "plateau patience");
  cmd->add_option("--plateau-factor", f.plateau_factor, "plateau lr factor");
  cmd->add_option("--early-stop-patience", f.early_stop_patience, "early-stop patience");
  cmd->add_option("--dead-eps", f.dead_eps, "dead-neuron threshold");
  cmd->add_option("--seed", f.seed, "run seed (weights, shuffling)");
  cmd->add_option("--out", f.out_dir, "output directory for result files");
}

ExperimentConfig config_from_flags(CLI::App* cmd, const TrainFlags& f) {
  ExperimentConfig cfg;
  if (!f.config_path.empty()) cfg = config_from_json_string(read_file(f.config_path));

  const auto passed = [&](const std::string& name) { return cmd->count(name) > 0; };
  if (passed("--dataset")) cfg.dataset.source = f.dataset;
  if (passed("--n")) cfg.dataset.n = f.n;
  if (passed("--noise")) cfg.dataset.noise_sd = f.noise;
  if (passed("--turns")) cfg.dataset.turns = f.turns;
  if (passed("--centers")) cfg.dataset.centers = f.centers;
  if (passed("--blob-sd")) cfg.dataset.blob_sd = f.blob_sd;
  if (passed("--csv")) cfg.dataset.csv_path = f.csv_path;
  if (passed("--label-column")) cfg.dataset.label_column = f.label_column;
  if (passed("--has-header")) cfg.dataset.has_header = f.has_header;
  if (passed("--data-seed")) cfg.dataset.seed = f.data_seed;
  if (passed("--val-fraction")) cfg.dataset.val_fraction = f.val_fraction;
  if (passed("--hidden")) cfg.model.hidden = parse_hidden(f.hidden);
  if (passed("--activation")) cfg.model.activation = f.activation;
  if (passed("--blend-gelu")) cfg.model.blend_gelu = f.blend_gelu;
  if (passed("--optimizer")) cfg.optimizer.kind = f.optimizer;
  if (passed("--lr")) cfg.optimizer.lr = f.lr;
  if (passed("--momentum")) cfg.optimizer.momentum = f.momentum;
  if (passed("--weight-decay")) cfg.optimizer.weight_decay = f.weight_decay;
  if (passed("--epochs")) cfg.max_epochs = f.epochs;
  if (passed("--batch")) cfg.batch_size = f.batch;
  if (passed("--plateau") || passed("--no-plateau")) cfg.plateau_enabled = f.plateau;
  if (passed("--early-stop") || passed("--no-early-stop")) cfg.early_stop_enabled = f.early_stop;
  if (passed("--plateau-patience")) cfg.plateau_patience = f.plateau_patience;
  if (passed("--plateau-factor")) cfg.plateau_factor = f.plateau_factor;
  if (passed("--early-stop-patience")) cfg.early_stop_patience = f.early_stop_patience;
  if (passed("--dead-eps")) cfg.dead_neuron_eps = f.dead_eps;
  if (passed("--seed")) cfg.seed = f.seed;
  if (passed("--out")) cfg.out_dir = f.out_dir;
  return cfg;
}

void print_epoch(const EpochMetrics& m, int max_epochs) {
  std::printf("epoch %3d/%d  train_loss=%.6f  val_loss=%.6f  val_acc=%.4f  lr=%g\n",
              m.epoch, max_epochs, m.train_loss, m.val_loss, m.val_accuracy, m.lr);
}

int cmd_gradcheck(const std::string& kinds_arg, int points, std::uint64_t seed,
                  double tol, const std::string& out_path) {
  const std::vector<ActivationKind> kinds = parse_kinds(kinds_arg);
  const std::vector<GradCheckEntry> entries = run_gradcheck_suite(kinds, points, seed, tol);
  for (const GradCheckEntry& e : entries) {
    if (!e.error.empty()) {
      std::printf("[ERROR] %-11s %-6s %s\n", to_string(e.report.kind).data(),
                  to_string(e.report.variable).data(), e.error.c_str());
      continue;
    }
    std::printf("[%s] %-11s %-6s max_rel_error=%.3e at x=%.6f\n",
                e.report.passed ? "PASS" : "FAIL", to_string(e.report.kind).data(),
                to_string(e.report.variable).data(), e.report.max_rel_error,
                e.report.worst_point);
  }
  const std::string report = gradcheck_json(entries);
  if (out_path.empty()) {
    std::cout << report << '\n';
  } else {
    write_file(out_path, report + "\n");
    std::printf("report written to %s\n", out_path.c_str());
  }
  return all_passed(entries) ? 0 : 1;
}

int cmd_train(const ExperimentConfig& cfg, const std::string& resume_path,
              const std::string& checkpoint_path, int checkpoint_epoch) {
  auto trainer = resume_path.empty() ? Trainer(cfg) : Trainer::from_checkpoint_file(resume_path);

  while (!trainer.done()) {
    const EpochMetrics& m = trainer.step_epoch();
    print_epoch(m, trainer.config().max_epochs);
    if (!checkpoint_path.empty() && checkpoint_epoch > 0 &&
        m.epoch == checkpoint_epoch) {
      trainer.save_checkpoint(checkpoint_path);
      std::printf("checkpoint written to %s (epoch %d)\n", checkpoint_path.c_str(), m.epoch);
    }
  }
  if (!checkpoint_path.empty() && checkpoint_epoch <= 0) {
    trainer.save_checkpoint(checkpoint_path);
    std::printf("checkpoint written to %s\n", checkpoint_path.c_str());
  }

  const ExperimentResult result = trainer.run();
  std::printf("best_val_loss=%.6f best_val_accuracy=%.4f best_epoch=%d%s\n",
              result.summary.best_val_loss, result.summary.best_val_accuracy,
              result.summary.best_epoch,
              result.summary.stopped_early ? " (stopped early)" : "");
  for (const LayerFinalParams& p : result.final_params) {
    std::string line = "  layer " + p.kind;
    char buf[64];
    if (p.alpha) { std::snprintf(buf, sizeof(buf), " alpha=%.6f", *p.alpha); line += buf; }
    if (p.beta) { std::snprintf(buf, sizeof(buf), " beta=%.6f", *p.beta); line += buf; }
    if (p.gamma) { std::snprintf(buf, sizeof(buf), " gamma=%.6f", *p.gamma); line += buf; }
    std::printf("%s\n", line.c_str());
  }
  if (!result.config.out_dir.empty()) {
    std::printf("results written to %s\n", result.config.out_dir.c_str());
  }
  return 0;
}

int cmd_compare(const ExperimentConfig& base, const std::string& kinds_arg) {
  const std::vector<ActivationKind> kinds = parse_kinds(kinds_arg);
  ExperimentConfig cfg = base;
  const std::string out_dir = cfg.out_dir;
  const std::vector<CompareRow> rows = run_comparison(cfg, kinds);
  std::cout << compare_text(rows);
  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    write_file(out_dir + "/compare.csv", compare_csv(rows));
    write_file(out_dir + "/compare.txt", compare_text(rows));
    std::printf("comparison written to %s\n", out_dir.c_str());
  }
  for (const CompareRow& r : rows) {
    if (!r.ok) return 1;
  }
  return 0;
}

int cmd_curves(const std::string& kind_name, double alpha, double beta, double gamma,
               const std::string& blend_gelu, double x_min, double x_max, int points,
               const std::string& out_path) {
  const auto kind = kind_from_string(kind_name);
  if (!kind) throw std::invalid_argument("unknown activation kind '" + kind_name + "'");
  const auto bg = gelu_variant_from_string(blend_gelu);
  if (!bg) throw std::invalid_argument("unknown blend_gelu variant '" + blend_gelu + "'");
  ActivationParams p;
  p.alpha = alpha;
  p.beta = beta;
  p.gamma = gamma;
  const std::string csv = curves_csv(activation_curve(*kind, p, *bg, x_min, x_max, points));
  if (out_path.empty()) {
    std::cout << csv;
  } else {
    write_file(out_path, csv);
    std::printf("curve written to %s\n", out_path.c_str());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sgblend: adaptive activation functions with a certified training harness"};
  app.require_subcommand(1);

  std::string gc_kinds = "all";
  int gc_points = 1000;
  std::uint64_t gc_seed = 7;
  double gc_tol = 1e-5;
  std::string gc_out;
  CLI::App* gc = app.add_subcommand("gradcheck",
                                    "certify analytic derivatives against finite differences");
  gc->add_option("--kinds", gc_kinds, "comma list of kinds or 'all'");
  gc->add_option("--points", gc_points, "sample points per check");
  gc->add_option("--seed", gc_seed, "oracle seed");
  gc->add_option("--tol", gc_tol, "relative-error tolerance");
  gc->add_option("--out", gc_out, "JSON report path (default: stdout)");

  TrainFlags tf;
  std::string resume_path, checkpoint_path;
  int checkpoint_epoch = 0;
  CLI::App* tr = app.add_subcommand("train", "run one training experiment");
  add_train_flags(tr, tf);
  tr->add_option("--resume", resume_path, "resume from a checkpoint file");
  tr->add_option("--save-checkpoint", checkpoint_path, "checkpoint output path");
  tr->add_option("--checkpoint-epoch", checkpoint_epoch,
                 "save the checkpoint after this epoch (default: after training)");

  TrainFlags cf;
  std::string cmp_kinds;
  CLI::App* cmp = app.add_subcommand("compare", "train several activations on identical data");
  add_train_flags(cmp, cf);
  cmp->add_option("--kinds", cmp_kinds, "comma list of kinds or 'all'")->required();

  std::string cv_kind, cv_out, cv_gelu = "tanh";
  double cv_alpha = 0.5, cv_beta = 1.0, cv_gamma = 0.0;
  double cv_xmin = -5.0, cv_xmax = 5.0;
  int cv_points = 1001;
  CLI::App* cv = app.add_subcommand("curves", "dump x, f(x), f'(x) over a uniform grid");
  cv->add_option("--kind", cv_kind, "activation kind")->required();
  cv->add_option("--alpha", cv_alpha, "blend coefficient");
  cv->add_option("--beta", cv_beta, "sigmoid steepness");
  cv->add_option("--gamma", cv_gamma, "vertical shift");
  cv->add_option("--blend-gelu", cv_gelu, "gelu inside sgblend: tanh | exact");
  cv->add_option("--xmin", cv_xmin, "grid start");
  cv->add_option("--xmax", cv_xmax, "grid end");
  cv->add_option("--points", cv_points, "grid points");
  cv->add_option("--out", cv_out, "CSV path (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (gc->parsed()) return cmd_gradcheck(gc_kinds, gc_points, gc_seed, gc_tol, gc_out);
    if (tr->parsed()) {
      if (!resume_path.empty()) {
        return cmd_train(ExperimentConfig{}, resume_path, checkpoint_path, checkpoint_epoch);
      }
      return cmd_train(config_from_flags(tr, tf), "", checkpoint_path, checkpoint_epoch);
    }
    if (cmp->parsed()) return cmd_compare(config_from_flags(cmp, cf), cmp_kinds);
    if (cv->parsed()) {
      return cmd_curves(cv_kind, cv_alpha, cv_beta, cv_gamma, cv_gelu, cv_xmin, cv_xmax,
                        cv_points, cv_out);
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
