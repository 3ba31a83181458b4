#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sgblend/data.hpp"
#include "sgblend/gradcheck.hpp"
#include "sgblend/metrics.hpp"
#include "sgblend/nn.hpp"
#include "sgblend/optim.hpp"

namespace sgblend {

struct DatasetConfig {
  std::string source = "two_moons";  // two_moons | spirals | blobs | csv
  int n = 1000;
  double noise_sd = 0.1;
  int turns = 2;        // spirals
  int centers = 3;      // blobs
  double blob_sd = 1.0; // blobs
  std::string csv_path;
  int label_column = 0;
  bool has_header = false;
  std::uint64_t seed = 7;
  double val_fraction = 0.10;
};

struct ModelConfig {
  std::vector<int> hidden = {16, 16};
  std::string activation = "sgblend";
  std::string blend_gelu = "tanh";  // tanh | exact
};

struct OptimizerConfig {
  std::string kind = "sgd";  // sgd | adam
  double lr = 0.01;
  double momentum = 0.9;
  double weight_decay = 0.0005;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;
};

struct ExperimentConfig {
  DatasetConfig dataset;
  ModelConfig model;
  OptimizerConfig optimizer;
  int max_epochs = 50;
  int batch_size = 64;
  bool plateau_enabled = true;
  int plateau_patience = 3;
  double plateau_factor = 0.2;
  bool early_stop_enabled = true;
  int early_stop_patience = 5;
  double dead_neuron_eps = 0.0;
  std::uint64_t seed = 7;
  std::string out_dir;  // empty: write no files
};

// Throws std::invalid_argument with a usage-level message on bad values.
void validate(const ExperimentConfig& cfg);

struct LayerFinalParams {
  std::string kind;
  std::optional<double> alpha;
  std::optional<double> beta;
  std::optional<double> gamma;
};

struct RunSummary {
  double best_val_loss = 0.0;
  double best_val_accuracy = 0.0;
  int best_epoch = 0;  // epoch with the best validation loss
  bool stopped_early = false;
  int epochs_run = 0;
};

struct ExperimentResult {
  ExperimentConfig config;
  std::vector<EpochMetrics> epochs;
  RunSummary summary;
  std::vector<LayerFinalParams> final_params;  // hidden layers, in order
};

Dataset build_dataset(const DatasetConfig& cfg);

// One training run. Epoch flow: seeded shuffle, mini-batch forward / loss /
// backward / optimizer step / beta projection, then validation metrics,
// finiteness assertion, plateau update, early-stop update.
class Trainer {
 public:
  explicit Trainer(const ExperimentConfig& cfg);

  using EpochHook = std::function<void(const EpochMetrics&, const MlpModel&)>;

  bool done() const;
  const EpochMetrics& step_epoch();

  // Run remaining epochs, restore the best checkpoint when early stopping
  // is on, write out_dir files if configured, and return the result.
  ExperimentResult run(const EpochHook& hook = {});

  std::string checkpoint_json() const;
  void save_checkpoint(const std::string& path) const;
  static Trainer from_checkpoint_json(const std::string& text);
  static Trainer from_checkpoint_file(const std::string& path);

  const MlpModel& model() const { return model_; }
  const ExperimentConfig& config() const { return cfg_; }
  const Dataset& train_data() const { return train_; }
  const Dataset& val_data() const { return val_; }
  int epochs_completed() const { return epoch_; }
  double current_lr() const;

 private:
  Trainer() = default;
  void setup_data_and_shapes();
  void train_one_epoch(EpochMetrics& out);
  void evaluate(EpochMetrics& out) const;
  void assert_finite(int epoch) const;
  void snapshot_best(int epoch);
  void restore_best();

  struct LayerSnapshot {
    Matrix W;
    std::vector<double> b;
    ParamStore params;
  };

  ExperimentConfig cfg_;
  Dataset train_;
  Dataset val_;
  MlpModel model_;
  SgdState sgd_;
  AdamState adam_;
  PlateauState plateau_;
  EarlyStopState estop_;
  std::vector<EpochMetrics> history_;
  std::vector<LayerSnapshot> best_model_;
  bool have_best_ = false;
  int epoch_ = 0;
  bool stop_flag_ = false;

  friend struct TrainerSerde;
};

ExperimentResult run_experiment(const ExperimentConfig& cfg,
                                const Trainer::EpochHook& hook = {});

std::vector<LayerFinalParams> collect_final_params(const MlpModel& model);

// --- serialization (JSON strings keep the vendored parser out of the API) ---

std::string to_json_string(const ExperimentConfig& cfg, int indent = 2);
ExperimentConfig config_from_json_string(const std::string& text);

std::string to_json_string(const ExperimentResult& result, int indent = 2);
ExperimentResult result_from_json_string(const std::string& text);

// header: epoch,train_loss,val_loss,val_accuracy,val_f1,dead_pct,lr,wall_s
std::string metrics_csv(const ExperimentResult& result);

// Writes result.json and metrics.csv into out_dir (created if needed).
void write_result_files(const ExperimentResult& result, const std::string& out_dir);

// --- gradient certification suite ---

struct GradCheckEntry {
  GradCheckReport report;
  std::string error;  // non-empty when the oracle itself failed
};

std::vector<GradCheckEntry> run_gradcheck_suite(
    const std::vector<ActivationKind>& kinds, int n_points, std::uint64_t seed,
    double tol);
bool all_passed(const std::vector<GradCheckEntry>& entries);
std::string gradcheck_json(const std::vector<GradCheckEntry>& entries, int indent = 2);

// --- activation curves ---

struct CurvePoint {
  double x;
  double f;
  double df;
};

std::vector<CurvePoint> activation_curve(ActivationKind kind,
                                         const ActivationParams& p, GeluVariant bg,
                                         double x_min, double x_max, int n_points);
// header: x,f,df
std::string curves_csv(const std::vector<CurvePoint>& points);

// --- multi-activation comparison ---

struct CompareRow {
  std::string kind;
  bool ok = false;
  std::string error;
  double best_val_accuracy = 0.0;
  int epochs_to_best = 0;  // epoch of the best validation accuracy
  double dead_pct = 0.0;   // at the epoch of the reported model
  std::vector<LayerFinalParams> final_params;
};

// Runs the base config once per kind with identical seed and data. A failed
// run is reported in its row and does not abort the others. Rows come back
// ranked by best validation accuracy.
std::vector<CompareRow> run_comparison(const ExperimentConfig& base,
                                       const std::vector<ActivationKind>& kinds);
std::string compare_csv(const std::vector<CompareRow>& rows);
std::string compare_text(const std::vector<CompareRow>& rows);

}  // namespace sgblend
