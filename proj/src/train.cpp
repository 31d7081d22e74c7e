#include "chronograph/train.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "chronograph/errors.hpp"
#include "json.hpp"

namespace chronograph::train {

using json = nlohmann::ordered_json;
using num::Matrix;

namespace {

json matrix_to_json(const Matrix& m) {
  json entry;
  entry["shape"] = {m.rows(), m.cols()};
  json data = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) data.push_back(m(i, j));
  entry["data"] = std::move(data);
  return entry;
}

Matrix matrix_from_json(const json& entry) {
  const int rows = entry.at("shape")[0].get<int>();
  const int cols = entry.at("shape")[1].get<int>();
  Matrix m(rows, cols);
  int at = 0;
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = entry.at("data")[at++].get<double>();
  return m;
}

}  // namespace

TrainConfig config_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("malformed config JSON: ") + e.what());
  }
  TrainConfig c;
  for (const auto& [key, value] : j.items()) {
    if (key == "hidden") c.model.hidden = value.get<int>();
    else if (key == "n_layers") c.model.n_layers = value.get<int>();
    else if (key == "n_heads") c.model.n_heads = value.get<int>();
    else if (key == "n_query") c.model.n_query = value.get<int>();
    else if (key == "dropout") c.model.dropout = value.get<double>();
    else if (key == "encoder_seed") c.model.encoder_seed = value.get<std::uint64_t>();
    else if (key == "graph_enabled") c.model.graph_enabled = value.get<bool>();
    else if (key == "multi_view") c.model.multi_view = value.get<bool>();
    else if (key == "heterogeneous") c.model.heterogeneous = value.get<bool>();
    else if (key == "text_graph_fusion") c.model.text_graph_fusion = value.get<bool>();
    else if (key == "tc_on_fused") c.model.tc_on_fused = value.get<bool>();
    else if (key == "tc_mean") c.model.tc_mean = value.get<bool>();
    else if (key == "loss_lambda") c.loss_lambda = value.get<double>();
    else if (key == "epochs") c.epochs = value.get<int>();
    else if (key == "learning_rate") c.learning_rate = value.get<double>();
    else if (key == "batch_size") c.batch_size = value.get<int>();
    else if (key == "warmup_fraction") c.warmup_fraction = value.get<double>();
    else if (key == "weight_decay") c.weight_decay = value.get<double>();
    else if (key == "holdout_fraction") c.holdout_fraction = value.get<double>();
    else if (key == "seed") c.seed = value.get<std::uint64_t>();
    else throw ValidationError("unknown config key \"" + key + "\"");
  }
  return c;
}

std::string config_to_json(const TrainConfig& c) {
  json j;
  j["hidden"] = c.model.hidden;
  j["n_layers"] = c.model.n_layers;
  j["n_heads"] = c.model.n_heads;
  j["n_query"] = c.model.n_query;
  j["dropout"] = c.model.dropout;
  j["encoder_seed"] = c.model.encoder_seed;
  j["graph_enabled"] = c.model.graph_enabled;
  j["multi_view"] = c.model.multi_view;
  j["heterogeneous"] = c.model.heterogeneous;
  j["text_graph_fusion"] = c.model.text_graph_fusion;
  j["tc_on_fused"] = c.model.tc_on_fused;
  j["tc_mean"] = c.model.tc_mean;
  j["loss_lambda"] = c.loss_lambda;
  j["epochs"] = c.epochs;
  j["learning_rate"] = c.learning_rate;
  j["batch_size"] = c.batch_size;
  j["warmup_fraction"] = c.warmup_fraction;
  j["weight_decay"] = c.weight_decay;
  j["holdout_fraction"] = c.holdout_fraction;
  j["seed"] = c.seed;
  return j.dump();
}

std::string checkpoint_to_json(const Checkpoint& ckpt) {
  json j;
  j["config"] = json::parse(config_to_json(ckpt.config));
  j["epochs_done"] = ckpt.epochs_done;
  j["step"] = ckpt.adam.step;
  j["params"] = json::parse(ckpt.params.to_json());
  json m = json::object(), v = json::object();
  for (const auto& [name, mat] : ckpt.adam.m) m[name] = matrix_to_json(mat);
  for (const auto& [name, mat] : ckpt.adam.v) v[name] = matrix_to_json(mat);
  j["adam_m"] = std::move(m);
  j["adam_v"] = std::move(v);
  return j.dump();
}

Checkpoint checkpoint_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("malformed checkpoint JSON: ") + e.what());
  }
  Checkpoint ckpt;
  ckpt.config = config_from_json(j.at("config").dump());
  ckpt.epochs_done = j.at("epochs_done").get<int>();
  ckpt.adam.step = j.at("step").get<long>();
  ckpt.params = num::ParamStore::from_json(j.at("params").dump());
  for (const auto& [name, entry] : j.at("adam_m").items())
    ckpt.adam.m[name] = matrix_from_json(entry);
  for (const auto& [name, entry] : j.at("adam_v").items())
    ckpt.adam.v[name] = matrix_from_json(entry);
  return ckpt;
}

void save_checkpoint(const Checkpoint& ckpt, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write " + path);
  out << checkpoint_to_json(ckpt) << "\n";
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return checkpoint_from_json(buf.str());
}

std::string metrics_to_jsonl(const std::vector<EpochMetrics>& metrics) {
  std::ostringstream os;
  for (const auto& m : metrics) {
    json j;
    j["epoch"] = m.epoch;
    j["task_acc"] = m.task_acc;
    j["tc_acc"] = m.tc_acc;
    j["loss"] = m.loss;
    os << j.dump() << "\n";
  }
  return os.str();
}

std::size_t holdout_begin(std::size_t n_docs, double holdout_fraction) {
  const auto held = static_cast<std::size_t>(std::ceil(n_docs * holdout_fraction));
  return n_docs - std::min(held, n_docs);
}

double lr_at(const TrainConfig& config, long step, long total_steps) {
  const long warm = std::max<long>(1, std::lround(total_steps * config.warmup_fraction));
  if (step < warm) return config.learning_rate * static_cast<double>(step + 1) / warm;
  const double progress =
      static_cast<double>(step - warm) / std::max<long>(1, total_steps - warm);
  return config.learning_rate * 0.5 * (1.0 + std::cos(std::numbers::pi * progress));
}

int predict_fact(const model::DocArtifacts& art, num::ParamStore& params,
                 const model::ModelConfig& config) {
  num::Tape tape;
  return model::run_inference(art, params, config, tape).predicted;
}

HeldoutEval evaluate_heldout(const std::vector<model::DocArtifacts>& arts,
                             num::ParamStore& params, const model::ModelConfig& config) {
  HeldoutEval eval;
  long task_hits = 0, tc_hits = 0;
  for (const auto& art : arts) {
    num::Tape tape;
    auto out = model::run_inference(art, params, config, tape);
    task_hits += (out.predicted == art.gold);
    ++eval.n_docs;
    if (out.tc_logits.defined()) {
      const auto& logits = out.tc_logits.value();
      for (Eigen::Index r = 0; r < logits.rows(); ++r) {
        Eigen::Index best = 0;
        logits.row(r).maxCoeff(&best);
        tc_hits += (static_cast<int>(best) ==
                    objectives::tc_label_index(art.pairs[static_cast<std::size_t>(r)].label));
        ++eval.n_pairs;
      }
    }
  }
  eval.task_acc = eval.n_docs ? static_cast<double>(task_hits) / eval.n_docs : 0.0;
  eval.tc_acc = eval.n_pairs ? static_cast<double>(tc_hits) / eval.n_pairs : 0.0;
  return eval;
}

TrainResult train(const std::vector<corpus::Document>& docs, const TrainConfig& config,
                  const Checkpoint* resume, int stop_after_epoch, std::ostream* log) {
  if (docs.empty()) throw ValidationError("training corpus is empty");
  if (config.batch_size < 1) throw ValidationError("batch_size must be >= 1");
  if (config.loss_lambda < 0) throw ValidationError("loss_lambda must be >= 0");

  std::vector<model::DocArtifacts> arts;
  arts.reserve(docs.size());
  for (const auto& d : docs) arts.push_back(model::build_artifacts(d, config.model));

  const std::size_t split = holdout_begin(arts.size(), config.holdout_fraction);
  std::vector<model::DocArtifacts> held(arts.begin() + split, arts.end());
  arts.resize(split);
  if (arts.empty()) throw ValidationError("holdout fraction leaves no training documents");

  TrainResult result;
  Checkpoint& ckpt = result.checkpoint;
  if (resume) {
    ckpt = *resume;
  } else {
    ckpt.config = config;
    model::init_params(ckpt.params, config.model, config.seed);
    for (const auto& [name, value] : ckpt.params.values()) {
      ckpt.adam.m[name] = Matrix::Zero(value.rows(), value.cols());
      ckpt.adam.v[name] = Matrix::Zero(value.rows(), value.cols());
    }
  }

  const long steps_per_epoch =
      (static_cast<long>(arts.size()) + config.batch_size - 1) / config.batch_size;
  const long total_steps = steps_per_epoch * config.epochs;
  const int last_epoch =
      stop_after_epoch > 0 ? std::min(stop_after_epoch, config.epochs) : config.epochs;

  constexpr double kBeta1 = 0.9, kBeta2 = 0.999, kAdamEps = 1e-8;

  for (int epoch = ckpt.epochs_done; epoch < last_epoch; ++epoch) {
    std::vector<std::size_t> order(arts.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    Rng shuffle_rng(mix64(config.seed, 0xE70C0000ull + static_cast<std::uint64_t>(epoch)));
    shuffle_rng.shuffle(order);

    double loss_sum = 0.0;
    long loss_count = 0;
    for (std::size_t at = 0; at < order.size(); at += config.batch_size) {
      const std::size_t batch_end = std::min(order.size(), at + config.batch_size);
      ckpt.params.zero_grads();
      for (std::size_t b = at; b < batch_end; ++b) {
        const auto& art = arts[order[b]];
        num::Tape tape;
        num::BoundParams bound(tape, ckpt.params);
        Rng dropout_rng(mix64(config.seed, 0xD150000ull + static_cast<std::uint64_t>(
                                               ckpt.adam.step * 131071 + static_cast<long>(b - at))));
        auto out = model::model_forward(tape, bound, art, config.model, config.loss_lambda,
                                        config.model.dropout > 0 ? &dropout_rng : nullptr, nullptr);
        const double loss_value = out.loss.value()(0, 0);
        if (!std::isfinite(loss_value))
          throw NumericalError("non-finite loss at epoch " + std::to_string(epoch + 1) +
                               " step " + std::to_string(ckpt.adam.step) + " doc " + art.doc.id +
                               " (task=" + std::to_string(out.task_loss_value) +
                               ", tc=" + std::to_string(out.tc_loss_value) + ")");
        loss_sum += loss_value;
        ++loss_count;
        tape.backward(out.loss);
        bound.accumulate(1.0 / static_cast<double>(batch_end - at));
      }

      const double lr = lr_at(config, ckpt.adam.step, total_steps);
      ++ckpt.adam.step;
      const double t = static_cast<double>(ckpt.adam.step);
      for (auto& [name, value] : ckpt.params.values()) {
        Matrix& g = ckpt.params.grad(name);
        Matrix& m = ckpt.adam.m[name];
        Matrix& v = ckpt.adam.v[name];
        m = kBeta1 * m + (1.0 - kBeta1) * g;
        v = kBeta2 * v + (1.0 - kBeta2) * g.cwiseProduct(g);
        const double mhat = 1.0 / (1.0 - std::pow(kBeta1, t));
        const double vhat = 1.0 / (1.0 - std::pow(kBeta2, t));
        value -= lr * (mhat * m.array() / ((vhat * v.array()).sqrt() + kAdamEps)).matrix();
        if (config.weight_decay > 0) value *= (1.0 - lr * config.weight_decay);
      }
    }

    ckpt.epochs_done = epoch + 1;
    const auto eval = evaluate_heldout(held, ckpt.params, config.model);
    EpochMetrics em;
    em.epoch = epoch + 1;
    em.task_acc = eval.task_acc;
    em.tc_acc = eval.tc_acc;
    em.loss = loss_count ? loss_sum / loss_count : 0.0;
    result.metrics.push_back(em);
    if (log)
      (*log) << "epoch " << em.epoch << " loss " << em.loss << " task_acc " << em.task_acc
             << " tc_acc " << em.tc_acc << "\n";
  }
  return result;
}

}  // namespace chronograph::train
