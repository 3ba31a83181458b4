#include "sgblend/experiment.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "sgblend/rng.hpp"

namespace sgblend {

using nlohmann::json;

namespace {

constexpr int kCheckpointVersion = 1;

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// +inf round-trips as null; metrics themselves are asserted finite.
json metric_to_json(double v) {
  if (std::isinf(v)) return nullptr;
  return v;
}

double metric_from_json(const json& j) {
  if (j.is_null()) return std::numeric_limits<double>::infinity();
  return j.get<double>();
}

void require_keys(const json& obj, std::initializer_list<const char*> known,
                  const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    if (std::find_if(known.begin(), known.end(), [&](const char* k) {
          return key == k;
        }) == known.end()) {
      throw std::invalid_argument("unknown key '" + key + "' in " + where);
    }
  }
}

template <typename T>
void read_if(const json& obj, const char* key, T& out) {
  if (obj.contains(key)) out = obj.at(key).get<T>();
}

json dataset_to_json(const DatasetConfig& c) {
  return json{{"source", c.source},
              {"n", c.n},
              {"noise_sd", c.noise_sd},
              {"turns", c.turns},
              {"centers", c.centers},
              {"blob_sd", c.blob_sd},
              {"csv_path", c.csv_path},
              {"label_column", c.label_column},
              {"has_header", c.has_header},
              {"seed", c.seed},
              {"val_fraction", c.val_fraction}};
}

DatasetConfig dataset_from_json(const json& j) {
  require_keys(j,
               {"source", "n", "noise_sd", "turns", "centers", "blob_sd", "csv_path",
                "label_column", "has_header", "seed", "val_fraction"},
               "dataset config");
  DatasetConfig c;
  read_if(j, "source", c.source);
  read_if(j, "n", c.n);
  read_if(j, "noise_sd", c.noise_sd);
  read_if(j, "turns", c.turns);
  read_if(j, "centers", c.centers);
  read_if(j, "blob_sd", c.blob_sd);
  read_if(j, "csv_path", c.csv_path);
  read_if(j, "label_column", c.label_column);
  read_if(j, "has_header", c.has_header);
  read_if(j, "seed", c.seed);
  read_if(j, "val_fraction", c.val_fraction);
  return c;
}

json model_to_json(const ModelConfig& c) {
  return json{{"hidden", c.hidden},
              {"activation", c.activation},
              {"blend_gelu", c.blend_gelu}};
}

ModelConfig model_from_json(const json& j) {
  require_keys(j, {"hidden", "activation", "blend_gelu"}, "model config");
  ModelConfig c;
  read_if(j, "hidden", c.hidden);
  read_if(j, "activation", c.activation);
  read_if(j, "blend_gelu", c.blend_gelu);
  return c;
}

json optimizer_to_json(const OptimizerConfig& c) {
  return json{{"kind", c.kind},
              {"lr", c.lr},
              {"momentum", c.momentum},
              {"weight_decay", c.weight_decay},
              {"adam_beta1", c.adam_beta1},
              {"adam_beta2", c.adam_beta2},
              {"adam_eps", c.adam_eps}};
}

OptimizerConfig optimizer_from_json(const json& j) {
  require_keys(j,
               {"kind", "lr", "momentum", "weight_decay", "adam_beta1", "adam_beta2",
                "adam_eps"},
               "optimizer config");
  OptimizerConfig c;
  read_if(j, "kind", c.kind);
  read_if(j, "lr", c.lr);
  read_if(j, "momentum", c.momentum);
  read_if(j, "weight_decay", c.weight_decay);
  read_if(j, "adam_beta1", c.adam_beta1);
  read_if(j, "adam_beta2", c.adam_beta2);
  read_if(j, "adam_eps", c.adam_eps);
  return c;
}

json config_to_json(const ExperimentConfig& c) {
  return json{{"dataset", dataset_to_json(c.dataset)},
              {"model", model_to_json(c.model)},
              {"optimizer", optimizer_to_json(c.optimizer)},
              {"max_epochs", c.max_epochs},
              {"batch_size", c.batch_size},
              {"plateau_enabled", c.plateau_enabled},
              {"plateau_patience", c.plateau_patience},
              {"plateau_factor", c.plateau_factor},
              {"early_stop_enabled", c.early_stop_enabled},
              {"early_stop_patience", c.early_stop_patience},
              {"dead_neuron_eps", c.dead_neuron_eps},
              {"seed", c.seed},
              {"out_dir", c.out_dir}};
}

ExperimentConfig config_from_json(const json& j) {
  require_keys(j,
               {"dataset", "model", "optimizer", "max_epochs", "batch_size",
                "plateau_enabled", "plateau_patience", "plateau_factor",
                "early_stop_enabled", "early_stop_patience", "dead_neuron_eps", "seed",
                "out_dir"},
               "experiment config");
  ExperimentConfig c;
  if (j.contains("dataset")) c.dataset = dataset_from_json(j.at("dataset"));
  if (j.contains("model")) c.model = model_from_json(j.at("model"));
  if (j.contains("optimizer")) c.optimizer = optimizer_from_json(j.at("optimizer"));
  read_if(j, "max_epochs", c.max_epochs);
  read_if(j, "batch_size", c.batch_size);
  read_if(j, "plateau_enabled", c.plateau_enabled);
  read_if(j, "plateau_patience", c.plateau_patience);
  read_if(j, "plateau_factor", c.plateau_factor);
  read_if(j, "early_stop_enabled", c.early_stop_enabled);
  read_if(j, "early_stop_patience", c.early_stop_patience);
  read_if(j, "dead_neuron_eps", c.dead_neuron_eps);
  read_if(j, "seed", c.seed);
  read_if(j, "out_dir", c.out_dir);
  return c;
}

json epoch_to_json(const EpochMetrics& m) {
  return json{{"epoch", m.epoch},
              {"train_loss", m.train_loss},
              {"val_loss", m.val_loss},
              {"val_accuracy", m.val_accuracy},
              {"val_f1", m.val_f1 ? json(*m.val_f1) : json(nullptr)},
              {"dead_neuron_pct", m.dead_neuron_pct},
              {"dead_pct_overall", m.dead_pct_overall},
              {"lr", m.lr},
              {"wall_time_seconds", m.wall_time_seconds}};
}

EpochMetrics epoch_from_json(const json& j) {
  EpochMetrics m;
  m.epoch = j.at("epoch").get<int>();
  m.train_loss = j.at("train_loss").get<double>();
  m.val_loss = j.at("val_loss").get<double>();
  m.val_accuracy = j.at("val_accuracy").get<double>();
  if (!j.at("val_f1").is_null()) m.val_f1 = j.at("val_f1").get<double>();
  m.dead_neuron_pct = j.at("dead_neuron_pct").get<std::vector<double>>();
  m.dead_pct_overall = j.at("dead_pct_overall").get<double>();
  m.lr = j.at("lr").get<double>();
  m.wall_time_seconds = j.at("wall_time_seconds").get<double>();
  return m;
}

json final_params_to_json(const std::vector<LayerFinalParams>& params) {
  json arr = json::array();
  for (const LayerFinalParams& p : params) {
    arr.push_back(json{{"kind", p.kind},
                       {"alpha", p.alpha ? json(*p.alpha) : json(nullptr)},
                       {"beta", p.beta ? json(*p.beta) : json(nullptr)},
                       {"gamma", p.gamma ? json(*p.gamma) : json(nullptr)}});
  }
  return arr;
}

std::vector<LayerFinalParams> final_params_from_json(const json& arr) {
  std::vector<LayerFinalParams> out;
  for (const json& j : arr) {
    LayerFinalParams p;
    p.kind = j.at("kind").get<std::string>();
    if (!j.at("alpha").is_null()) p.alpha = j.at("alpha").get<double>();
    if (!j.at("beta").is_null()) p.beta = j.at("beta").get<double>();
    if (!j.at("gamma").is_null()) p.gamma = j.at("gamma").get<double>();
    out.push_back(std::move(p));
  }
  return out;
}

ActivationKind parse_kind_or_throw(const std::string& name) {
  const auto kind = kind_from_string(name);
  if (!kind) throw std::invalid_argument("unknown activation kind '" + name + "'");
  return *kind;
}

GeluVariant parse_gelu_or_throw(const std::string& name) {
  const auto v = gelu_variant_from_string(name);
  if (!v) throw std::invalid_argument("unknown blend_gelu variant '" + name + "'");
  return *v;
}

}  // namespace

void validate(const ExperimentConfig& cfg) {
  const DatasetConfig& d = cfg.dataset;
  if (d.source != "two_moons" && d.source != "spirals" && d.source != "blobs" &&
      d.source != "csv") {
    throw std::invalid_argument("unknown dataset source '" + d.source + "'");
  }
  if (d.source == "csv" && d.csv_path.empty()) {
    throw std::invalid_argument("csv dataset needs csv_path");
  }
  if (!(d.val_fraction > 0.0 && d.val_fraction < 1.0)) {
    throw std::invalid_argument("val_fraction must be in (0, 1)");
  }
  const ActivationKind kind = parse_kind_or_throw(cfg.model.activation);
  if (kind == ActivationKind::identity) {
    throw std::invalid_argument("identity is not a trainable hidden activation");
  }
  parse_gelu_or_throw(cfg.model.blend_gelu);
  if (cfg.model.hidden.empty()) {
    throw std::invalid_argument("model needs at least one hidden layer");
  }
  for (int h : cfg.model.hidden) {
    if (h < 1) throw std::invalid_argument("hidden sizes must be >= 1");
  }
  if (cfg.optimizer.kind != "sgd" && cfg.optimizer.kind != "adam") {
    throw std::invalid_argument("unknown optimizer '" + cfg.optimizer.kind + "'");
  }
  if (cfg.optimizer.lr <= 0.0) throw std::invalid_argument("lr must be > 0");
  if (cfg.max_epochs < 1) throw std::invalid_argument("max_epochs must be >= 1");
  if (cfg.batch_size < 1) throw std::invalid_argument("batch_size must be >= 1");
  if (cfg.plateau_patience < 0 || cfg.early_stop_patience < 0) {
    throw std::invalid_argument("patience must be >= 0");
  }
  if (!(cfg.plateau_factor > 0.0 && cfg.plateau_factor < 1.0)) {
    throw std::invalid_argument("plateau_factor must be in (0, 1)");
  }
  if (cfg.dead_neuron_eps < 0.0) {
    throw std::invalid_argument("dead_neuron_eps must be >= 0");
  }
}

Dataset build_dataset(const DatasetConfig& cfg) {
  if (cfg.source == "two_moons") return two_moons(cfg.n, cfg.noise_sd, cfg.seed);
  if (cfg.source == "spirals") return spirals(cfg.n, cfg.turns, cfg.noise_sd, cfg.seed);
  if (cfg.source == "blobs") return gaussian_blobs(cfg.n, cfg.centers, cfg.blob_sd, cfg.seed);
  if (cfg.source == "csv") return load_csv(cfg.csv_path, cfg.label_column, cfg.has_header);
  throw std::invalid_argument("unknown dataset source '" + cfg.source + "'");
}

Trainer::Trainer(const ExperimentConfig& cfg) : cfg_(cfg) {
  validate(cfg_);
  setup_data_and_shapes();
  model_ = make_mlp(train_.features(), cfg_.model.hidden,
                    static_cast<std::size_t>(train_.n_classes),
                    parse_kind_or_throw(cfg_.model.activation),
                    parse_gelu_or_throw(cfg_.model.blend_gelu),
                    derive_seed(cfg_.seed, 0));
  sgd_.lr = cfg_.optimizer.lr;
  sgd_.momentum = cfg_.optimizer.momentum;
  sgd_.weight_decay = cfg_.optimizer.weight_decay;
  adam_.lr = cfg_.optimizer.lr;
  adam_.beta1 = cfg_.optimizer.adam_beta1;
  adam_.beta2 = cfg_.optimizer.adam_beta2;
  adam_.eps = cfg_.optimizer.adam_eps;
  plateau_.lr = cfg_.optimizer.lr;
  plateau_.patience = cfg_.plateau_patience;
  plateau_.factor = cfg_.plateau_factor;
  estop_.patience = cfg_.early_stop_patience;
}

void Trainer::setup_data_and_shapes() {
  Dataset full = build_dataset(cfg_.dataset);
  auto [train, val] = split(full, cfg_.dataset.val_fraction, derive_seed(cfg_.seed, 1));
  train_ = std::move(train);
  val_ = std::move(val);
}

bool Trainer::done() const {
  return stop_flag_ || epoch_ >= cfg_.max_epochs;
}

double Trainer::current_lr() const {
  return cfg_.optimizer.kind == "adam" ? adam_.lr : sgd_.lr;
}

void Trainer::train_one_epoch(EpochMetrics& out) {
  const int epoch = epoch_ + 1;
  std::vector<std::size_t> order(train_.size());
  std::iota(order.begin(), order.end(), 0);
  SplitMix64 shuffle_rng(derive_seed(cfg_.seed, 2 + static_cast<std::uint64_t>(epoch - 1)));
  shuffle_rng.shuffle(order);

  const std::size_t batch_size = static_cast<std::size_t>(cfg_.batch_size);
  double loss_sum = 0.0;
  for (std::size_t start = 0; start < order.size(); start += batch_size) {
    const std::size_t count = std::min(batch_size, order.size() - start);
    Matrix xb(count, train_.features());
    std::vector<int> yb(count);
    for (std::size_t i = 0; i < count; ++i) {
      const std::size_t src = order[start + i];
      for (std::size_t j = 0; j < train_.features(); ++j) xb(i, j) = train_.X(src, j);
      yb[i] = train_.y[src];
    }

    model_.zero_grads();
    const Matrix logits = model_.forward(xb);
    auto [loss, dlogits] = softmax_cross_entropy(logits, yb);
    model_.backward(dlogits);

    std::vector<ParamSlot> slots = model_.param_slots();
    if (cfg_.optimizer.kind == "adam") {
      adam_next_step(adam_);
      for (std::size_t s = 0; s < slots.size(); ++s) {
        adam_step(adam_, s, slots[s].value, slots[s].grad);
      }
    } else {
      for (std::size_t s = 0; s < slots.size(); ++s) {
        sgd_step(sgd_, s, slots[s].value, slots[s].grad, slots[s].weight_decay);
      }
    }
    for (DenseLayer& layer : model_.layers) {
      if (has_beta(layer.kind)) project_beta(layer.params);
    }

    loss_sum += loss * static_cast<double>(count);
  }
  out.train_loss = loss_sum / static_cast<double>(train_.size());
}

void Trainer::evaluate(EpochMetrics& out) const {
  const std::vector<Matrix> acts = model_.activations(val_.X);
  const Matrix& logits = acts.back();
  out.val_loss = softmax_cross_entropy(logits, val_.y).first;
  const std::vector<int> preds = argmax_rows(logits);
  out.val_accuracy = accuracy(preds, val_.y);
  if (val_.n_classes == 2) out.val_f1 = f1_binary(preds, val_.y, 1);

  out.dead_neuron_pct.clear();
  std::size_t units_total = 0;
  double dead_total = 0.0;
  for (std::size_t l = 0; l + 1 < acts.size(); ++l) {
    const double pct = dead_neuron_pct(acts[l], cfg_.dead_neuron_eps);
    out.dead_neuron_pct.push_back(pct);
    dead_total += pct / 100.0 * static_cast<double>(acts[l].cols());
    units_total += acts[l].cols();
  }
  out.dead_pct_overall =
      units_total == 0 ? 0.0 : 100.0 * dead_total / static_cast<double>(units_total);
}

void Trainer::assert_finite(int epoch) const {
  if (!model_.all_finite()) {
    throw std::runtime_error("numerical blow-up at epoch " + std::to_string(epoch) +
                             ": non-finite model parameter");
  }
  const EpochMetrics& m = history_.back();
  if (!std::isfinite(m.train_loss) || !std::isfinite(m.val_loss)) {
    throw std::runtime_error("numerical blow-up at epoch " + std::to_string(epoch) +
                             ": non-finite loss");
  }
}

void Trainer::snapshot_best(int epoch) {
  best_model_.clear();
  for (const DenseLayer& layer : model_.layers) {
    best_model_.push_back({layer.W, layer.b, layer.params});
  }
  have_best_ = true;
  estop_.best_epoch = epoch;
}

void Trainer::restore_best() {
  if (!have_best_) return;
  for (std::size_t l = 0; l < model_.layers.size(); ++l) {
    model_.layers[l].W = best_model_[l].W;
    model_.layers[l].b = best_model_[l].b;
    model_.layers[l].params = best_model_[l].params;
    model_.layers[l].has_forward_cache = false;
  }
}

const EpochMetrics& Trainer::step_epoch() {
  if (done()) throw std::logic_error("step_epoch: training already finished");
  const auto t0 = std::chrono::steady_clock::now();
  const int epoch = epoch_ + 1;

  EpochMetrics m;
  m.epoch = epoch;
  m.lr = current_lr();
  train_one_epoch(m);
  evaluate(m);
  history_.push_back(std::move(m));
  assert_finite(epoch);

  if (cfg_.plateau_enabled) {
    const double new_lr = plateau_update(plateau_, history_.back().val_loss);
    sgd_.lr = new_lr;
    adam_.lr = new_lr;
  }
  if (cfg_.early_stop_enabled) {
    const bool stop = early_stop_update(estop_, history_.back().val_loss, epoch);
    if (estop_.epochs_since_improve == 0) snapshot_best(epoch);
    if (stop) stop_flag_ = true;
  }

  epoch_ = epoch;
  history_.back().wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return history_.back();
}

std::vector<LayerFinalParams> collect_final_params(const MlpModel& model) {
  std::vector<LayerFinalParams> out;
  for (const DenseLayer& layer : model.layers) {
    if (layer.kind == ActivationKind::identity) continue;
    LayerFinalParams p;
    p.kind = std::string(to_string(layer.kind));
    const ActivationParams cp = constrained(layer.params);
    if (has_alpha(layer.kind)) p.alpha = cp.alpha;
    if (has_beta(layer.kind)) p.beta = cp.beta;
    if (has_gamma(layer.kind)) p.gamma = cp.gamma;
    out.push_back(std::move(p));
  }
  return out;
}

ExperimentResult Trainer::run(const EpochHook& hook) {
  while (!done()) {
    const EpochMetrics& m = step_epoch();
    if (hook) hook(m, model_);
  }
  if (cfg_.early_stop_enabled) restore_best();

  ExperimentResult result;
  result.config = cfg_;
  result.epochs = history_;
  result.summary.epochs_run = epoch_;
  result.summary.stopped_early = stop_flag_;

  double best_loss = std::numeric_limits<double>::infinity();
  double best_acc = 0.0;
  int best_epoch = 0;
  for (const EpochMetrics& m : history_) {
    if (m.val_loss < best_loss) {
      best_loss = m.val_loss;
      best_epoch = m.epoch;
    }
    best_acc = std::max(best_acc, m.val_accuracy);
  }
  result.summary.best_val_loss = best_loss;
  result.summary.best_val_accuracy = best_acc;
  result.summary.best_epoch = best_epoch;
  result.final_params = collect_final_params(model_);

  for (const LayerFinalParams& p : result.final_params) {
    if (p.alpha && !(*p.alpha > 0.0 && *p.alpha < 1.0)) {
      throw std::runtime_error("result invariant violated: alpha out of (0, 1)");
    }
    if (p.beta && !(*p.beta >= kBetaMin && *p.beta <= kBetaMax)) {
      throw std::runtime_error("result invariant violated: beta out of [0.1, 10]");
    }
  }

  if (!cfg_.out_dir.empty()) write_result_files(result, cfg_.out_dir);
  return result;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg,
                                const Trainer::EpochHook& hook) {
  Trainer trainer(cfg);
  return trainer.run(hook);
}

// --- checkpointing ---

struct TrainerSerde {
  static json layers_to_json(const std::vector<Trainer::LayerSnapshot>& layers) {
    json arr = json::array();
    for (const auto& l : layers) {
      arr.push_back(json{{"rows", l.W.rows()},
                         {"cols", l.W.cols()},
                         {"W", l.W.storage()},
                         {"b", l.b},
                         {"alpha_raw", l.params.alpha_raw},
                         {"beta_raw", l.params.beta_raw},
                         {"gamma", l.params.gamma}});
    }
    return arr;
  }

  static std::vector<Trainer::LayerSnapshot> layers_from_json(const json& arr) {
    std::vector<Trainer::LayerSnapshot> out;
    for (const json& j : arr) {
      Trainer::LayerSnapshot l;
      l.W = Matrix(j.at("rows").get<std::size_t>(), j.at("cols").get<std::size_t>());
      l.W.storage() = j.at("W").get<std::vector<double>>();
      if (l.W.storage().size() != l.W.rows() * l.W.cols()) {
        throw std::invalid_argument("checkpoint: W size mismatch");
      }
      l.b = j.at("b").get<std::vector<double>>();
      l.params.alpha_raw = j.at("alpha_raw").get<double>();
      l.params.beta_raw = j.at("beta_raw").get<double>();
      l.params.gamma = j.at("gamma").get<double>();
      out.push_back(std::move(l));
    }
    return out;
  }

  static std::vector<Trainer::LayerSnapshot> snapshot_model(const MlpModel& m) {
    std::vector<Trainer::LayerSnapshot> out;
    for (const DenseLayer& layer : m.layers) {
      out.push_back({layer.W, layer.b, layer.params});
    }
    return out;
  }

  static void load_model(MlpModel& m, const std::vector<Trainer::LayerSnapshot>& snap) {
    if (snap.size() != m.layers.size()) {
      throw std::invalid_argument("checkpoint: layer count mismatch");
    }
    for (std::size_t l = 0; l < snap.size(); ++l) {
      if (snap[l].W.rows() != m.layers[l].W.rows() ||
          snap[l].W.cols() != m.layers[l].W.cols()) {
        throw std::invalid_argument("checkpoint: layer shape mismatch");
      }
      m.layers[l].W = snap[l].W;
      m.layers[l].b = snap[l].b;
      m.layers[l].params = snap[l].params;
      m.layers[l].has_forward_cache = false;
    }
  }

  static json to_json(const Trainer& t) {
    json j;
    j["format"] = "sgblend-checkpoint";
    j["version"] = kCheckpointVersion;
    j["config"] = config_to_json(t.cfg_);
    j["epoch"] = t.epoch_;
    j["stopped"] = t.stop_flag_;
    j["model"] = layers_to_json(snapshot_model(t.model_));
    if (t.cfg_.optimizer.kind == "adam") {
      j["optimizer"] = json{{"kind", "adam"},
                            {"lr", t.adam_.lr},
                            {"step_count", t.adam_.step_count},
                            {"m", t.adam_.m},
                            {"v", t.adam_.v}};
    } else {
      j["optimizer"] = json{{"kind", "sgd"},
                            {"lr", t.sgd_.lr},
                            {"velocity", t.sgd_.velocity}};
    }
    j["plateau"] = json{{"lr", t.plateau_.lr},
                        {"best", metric_to_json(t.plateau_.best_metric)},
                        {"since", t.plateau_.epochs_since_improve}};
    j["early_stop"] = json{{"best", metric_to_json(t.estop_.best_metric)},
                           {"since", t.estop_.epochs_since_improve},
                           {"best_epoch", t.estop_.best_epoch}};
    j["best_model"] = t.have_best_ ? layers_to_json(t.best_model_) : json(nullptr);
    json hist = json::array();
    for (const EpochMetrics& m : t.history_) hist.push_back(epoch_to_json(m));
    j["history"] = hist;
    j["rng"] = json{{"run_seed", t.cfg_.seed}};
    return j;
  }

  static Trainer from_json(const json& j) {
    if (!j.contains("format") || j.at("format") != "sgblend-checkpoint") {
      throw std::invalid_argument("not a checkpoint file");
    }
    if (j.at("version").get<int>() != kCheckpointVersion) {
      throw std::invalid_argument("unsupported checkpoint version");
    }
    Trainer t(config_from_json(j.at("config")));
    t.epoch_ = j.at("epoch").get<int>();
    t.stop_flag_ = j.at("stopped").get<bool>();
    load_model(t.model_, layers_from_json(j.at("model")));

    const json& opt = j.at("optimizer");
    if (opt.at("kind") != t.cfg_.optimizer.kind) {
      throw std::invalid_argument("checkpoint: optimizer kind mismatch");
    }
    if (t.cfg_.optimizer.kind == "adam") {
      t.adam_.lr = opt.at("lr").get<double>();
      t.adam_.step_count = opt.at("step_count").get<std::int64_t>();
      t.adam_.m = opt.at("m").get<std::vector<std::vector<double>>>();
      t.adam_.v = opt.at("v").get<std::vector<std::vector<double>>>();
    } else {
      t.sgd_.lr = opt.at("lr").get<double>();
      t.sgd_.velocity = opt.at("velocity").get<std::vector<std::vector<double>>>();
    }

    const json& plateau = j.at("plateau");
    t.plateau_.lr = plateau.at("lr").get<double>();
    t.plateau_.best_metric = metric_from_json(plateau.at("best"));
    t.plateau_.epochs_since_improve = plateau.at("since").get<int>();

    const json& estop = j.at("early_stop");
    t.estop_.best_metric = metric_from_json(estop.at("best"));
    t.estop_.epochs_since_improve = estop.at("since").get<int>();
    t.estop_.best_epoch = estop.at("best_epoch").get<int>();

    if (!j.at("best_model").is_null()) {
      t.best_model_ = layers_from_json(j.at("best_model"));
      t.have_best_ = true;
    }
    t.history_.clear();
    for (const json& h : j.at("history")) t.history_.push_back(epoch_from_json(h));
    return t;
  }
};

std::string Trainer::checkpoint_json() const { return TrainerSerde::to_json(*this).dump(2); }

void Trainer::save_checkpoint(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write checkpoint '" + path + "'");
  out << checkpoint_json() << '\n';
}

Trainer Trainer::from_checkpoint_json(const std::string& text) {
  return TrainerSerde::from_json(json::parse(text));
}

Trainer Trainer::from_checkpoint_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open checkpoint '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return from_checkpoint_json(buf.str());
}

// --- config / result serialization ---

std::string to_json_string(const ExperimentConfig& cfg, int indent) {
  return config_to_json(cfg).dump(indent);
}

ExperimentConfig config_from_json_string(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config parse error: ") + e.what());
  }
  return config_from_json(j);
}

std::string to_json_string(const ExperimentResult& result, int indent) {
  json j;
  j["config"] = config_to_json(result.config);
  json epochs = json::array();
  for (const EpochMetrics& m : result.epochs) epochs.push_back(epoch_to_json(m));
  j["epochs"] = epochs;
  j["summary"] = json{{"best_val_loss", result.summary.best_val_loss},
                      {"best_val_accuracy", result.summary.best_val_accuracy},
                      {"best_epoch", result.summary.best_epoch},
                      {"stopped_early", result.summary.stopped_early},
                      {"epochs_run", result.summary.epochs_run}};
  j["final_params"] = final_params_to_json(result.final_params);
  return j.dump(indent);
}

ExperimentResult result_from_json_string(const std::string& text) {
  const json j = json::parse(text);
  ExperimentResult r;
  r.config = config_from_json(j.at("config"));
  for (const json& e : j.at("epochs")) r.epochs.push_back(epoch_from_json(e));
  const json& s = j.at("summary");
  r.summary.best_val_loss = s.at("best_val_loss").get<double>();
  r.summary.best_val_accuracy = s.at("best_val_accuracy").get<double>();
  r.summary.best_epoch = s.at("best_epoch").get<int>();
  r.summary.stopped_early = s.at("stopped_early").get<bool>();
  r.summary.epochs_run = s.at("epochs_run").get<int>();
  r.final_params = final_params_from_json(j.at("final_params"));
  return r;
}

std::string metrics_csv(const ExperimentResult& result) {
  std::string out = "epoch,train_loss,val_loss,val_accuracy,val_f1,dead_pct,lr,wall_s\n";
  for (const EpochMetrics& m : result.epochs) {
    out += std::to_string(m.epoch);
    out += ',' + fmt_double(m.train_loss);
    out += ',' + fmt_double(m.val_loss);
    out += ',' + fmt_double(m.val_accuracy);
    out += ',';
    out += m.val_f1 ? fmt_double(*m.val_f1) : "nan";
    out += ',' + fmt_double(m.dead_pct_overall);
    out += ',' + fmt_double(m.lr);
    out += ',' + fmt_double(m.wall_time_seconds);
    out += '\n';
  }
  return out;
}

void write_result_files(const ExperimentResult& result, const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  const std::filesystem::path dir(out_dir);
  {
    std::ofstream f(dir / "result.json");
    if (!f) throw std::runtime_error("cannot write result.json in '" + out_dir + "'");
    f << to_json_string(result) << '\n';
  }
  {
    std::ofstream f(dir / "metrics.csv");
    if (!f) throw std::runtime_error("cannot write metrics.csv in '" + out_dir + "'");
    f << metrics_csv(result);
  }
}

// --- gradient certification suite ---

std::vector<GradCheckEntry> run_gradcheck_suite(
    const std::vector<ActivationKind>& kinds, int n_points, std::uint64_t seed,
    double tol) {
  std::vector<GradCheckEntry> entries;
  for (ActivationKind kind : kinds) {
    for (GradVariable var : variables_for(kind)) {
      GradCheckEntry entry;
      entry.report.kind = kind;
      entry.report.variable = var;
      try {
        entry.report = check(kind, var, n_points, seed, tol);
      } catch (const std::exception& e) {
        entry.error = e.what();
        entry.report.passed = false;
      }
      entries.push_back(std::move(entry));
    }
  }
  return entries;
}

bool all_passed(const std::vector<GradCheckEntry>& entries) {
  return std::all_of(entries.begin(), entries.end(), [](const GradCheckEntry& e) {
    return e.error.empty() && e.report.passed;
  });
}

std::string gradcheck_json(const std::vector<GradCheckEntry>& entries, int indent) {
  json checks = json::array();
  for (const GradCheckEntry& e : entries) {
    json c{{"kind", std::string(to_string(e.report.kind))},
           {"variable", std::string(to_string(e.report.variable))},
           {"points_checked", e.report.points_checked},
           {"max_rel_error", e.report.max_rel_error},
           {"worst_point", e.report.worst_point},
           {"passed", e.report.passed}};
    if (!e.error.empty()) c["error"] = e.error;
    checks.push_back(std::move(c));
  }
  return json{{"all_passed", all_passed(entries)}, {"checks", checks}}.dump(indent);
}

// --- activation curves ---

std::vector<CurvePoint> activation_curve(ActivationKind kind,
                                         const ActivationParams& p, GeluVariant bg,
                                         double x_min, double x_max, int n_points) {
  if (!(x_min < x_max)) throw std::invalid_argument("curves: need x_min < x_max");
  if (n_points < 2) throw std::invalid_argument("curves: need n_points >= 2");
  std::vector<CurvePoint> out;
  out.reserve(static_cast<std::size_t>(n_points));
  const double step = (x_max - x_min) / static_cast<double>(n_points - 1);
  for (int i = 0; i < n_points; ++i) {
    const double x = x_min + step * static_cast<double>(i);
    out.push_back({x, forward(kind, p, x, bg), d_input(kind, p, x, bg)});
  }
  return out;
}

std::string curves_csv(const std::vector<CurvePoint>& points) {
  std::string out = "x,f,df\n";
  for (const CurvePoint& p : points) {
    out += fmt_double(p.x) + ',' + fmt_double(p.f) + ',' + fmt_double(p.df) + '\n';
  }
  return out;
}

// --- multi-activation comparison ---

std::vector<CompareRow> run_comparison(const ExperimentConfig& base,
                                       const std::vector<ActivationKind>& kinds) {
  if (kinds.size() < 2) {
    throw std::invalid_argument("compare needs at least 2 activation kinds");
  }
  std::vector<CompareRow> rows;
  for (ActivationKind kind : kinds) {
    CompareRow row;
    row.kind = std::string(to_string(kind));
    ExperimentConfig cfg = base;
    cfg.model.activation = row.kind;
    cfg.out_dir.clear();
    try {
      const ExperimentResult result = run_experiment(cfg);
      row.ok = true;
      row.best_val_accuracy = 0.0;
      for (const EpochMetrics& m : result.epochs) {
        if (m.val_accuracy > row.best_val_accuracy) {
          row.best_val_accuracy = m.val_accuracy;
          row.epochs_to_best = m.epoch;
        }
      }
      const int model_epoch = cfg.early_stop_enabled ? result.summary.best_epoch
                                                     : result.summary.epochs_run;
      for (const EpochMetrics& m : result.epochs) {
        if (m.epoch == model_epoch) row.dead_pct = m.dead_pct_overall;
      }
      row.final_params = result.final_params;
    } catch (const std::exception& e) {
      row.ok = false;
      row.error = e.what();
    }
    rows.push_back(std::move(row));
  }
  std::stable_sort(rows.begin(), rows.end(), [](const CompareRow& a, const CompareRow& b) {
    if (a.ok != b.ok) return a.ok;
    return a.best_val_accuracy > b.best_val_accuracy;
  });
  return rows;
}

namespace {

std::string joined_param(const std::vector<LayerFinalParams>& params,
                         std::optional<double> LayerFinalParams::*field) {
  std::string out;
  bool any = false;
  for (const LayerFinalParams& p : params) {
    if (!(p.*field)) continue;
    if (any) out += ';';
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", *(p.*field));
    out += buf;
    any = true;
  }
  return out;
}

}  // namespace

std::string compare_csv(const std::vector<CompareRow>& rows) {
  std::string out = "kind,best_val_accuracy,epochs_to_best,dead_pct,alpha,beta,gamma,error\n";
  for (const CompareRow& r : rows) {
    out += r.kind;
    if (r.ok) {
      out += ',' + fmt_double(r.best_val_accuracy);
      out += ',' + std::to_string(r.epochs_to_best);
      out += ',' + fmt_double(r.dead_pct);
      out += ',' + joined_param(r.final_params, &LayerFinalParams::alpha);
      out += ',' + joined_param(r.final_params, &LayerFinalParams::beta);
      out += ',' + joined_param(r.final_params, &LayerFinalParams::gamma);
      out += ',';
    } else {
      out += ",,,,,,," + r.error;
    }
    out += '\n';
  }
  return out;
}

std::string compare_text(const std::vector<CompareRow>& rows) {
  char buf[256];
  std::string out;
  std::snprintf(buf, sizeof(buf), "%-12s %12s %10s %9s  %s\n", "kind", "best_val_acc",
                "best_epoch", "dead_pct", "alpha/beta/gamma per layer");
  out += buf;
  for (const CompareRow& r : rows) {
    if (!r.ok) {
      std::snprintf(buf, sizeof(buf), "%-12s FAILED: %s\n", r.kind.c_str(),
                    r.error.c_str());
      out += buf;
      continue;
    }
    std::string params;
    const std::string a = joined_param(r.final_params, &LayerFinalParams::alpha);
    const std::string b = joined_param(r.final_params, &LayerFinalParams::beta);
    const std::string g = joined_param(r.final_params, &LayerFinalParams::gamma);
    if (!a.empty()) params += "alpha=" + a + " ";
    if (!b.empty()) params += "beta=" + b + " ";
    if (!g.empty()) params += "gamma=" + g;
    std::snprintf(buf, sizeof(buf), "%-12s %12.4f %10d %9.2f  %s\n", r.kind.c_str(),
                  r.best_val_accuracy, r.epochs_to_best, r.dead_pct, params.c_str());
    out += buf;
  }
  return out;
}

}  // namespace sgblend
