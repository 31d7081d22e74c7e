#pragma once

#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "chronograph/model.hpp"

namespace chronograph::train {

struct TrainConfig {
  model::ModelConfig model;
  double loss_lambda = 0.001;
  int epochs = 3;
  double learning_rate = 5e-5;
  int batch_size = 4;
  double warmup_fraction = 0.2;
  double weight_decay = 0.01;
  double holdout_fraction = 0.1;
  std::uint64_t seed = 42;
};

// Flat JSON object mirroring the config fields; unknown keys are rejected.
TrainConfig config_from_json(const std::string& text);
std::string config_to_json(const TrainConfig& config);

struct AdamState {
  std::map<std::string, num::Matrix> m;
  std::map<std::string, num::Matrix> v;
  long step = 0;
};

struct Checkpoint {
  num::ParamStore params;
  AdamState adam;
  int epochs_done = 0;
  TrainConfig config;
};

void save_checkpoint(const Checkpoint& ckpt, const std::string& path);
Checkpoint load_checkpoint(const std::string& path);
std::string checkpoint_to_json(const Checkpoint& ckpt);
Checkpoint checkpoint_from_json(const std::string& text);

struct EpochMetrics {
  int epoch = 0;
  double task_acc = 0.0;
  double tc_acc = 0.0;
  double loss = 0.0;
};

std::string metrics_to_jsonl(const std::vector<EpochMetrics>& metrics);

struct TrainResult {
  Checkpoint checkpoint;
  std::vector<EpochMetrics> metrics;
};

// Full pipeline training. The learning-rate schedule always spans
// config.epochs; stop_after_epoch pauses early and a resumed run continues
// the same schedule, reproducing the uninterrupted run bit for bit.
TrainResult train(const std::vector<corpus::Document>& docs, const TrainConfig& config,
                  const Checkpoint* resume = nullptr, int stop_after_epoch = -1,
                  std::ostream* log = nullptr);

// Split helper: the trailing holdout_fraction of docs is held out.
std::size_t holdout_begin(std::size_t n_docs, double holdout_fraction);

struct HeldoutEval {
  double task_acc = 0.0;
  double tc_acc = 0.0;
  int n_docs = 0;
  long n_pairs = 0;
};

HeldoutEval evaluate_heldout(const std::vector<model::DocArtifacts>& arts,
                             num::ParamStore& params, const model::ModelConfig& config);

// Argmax fact prediction (n_facts means unanswerable), dropout off.
int predict_fact(const model::DocArtifacts& art, num::ParamStore& params,
                 const model::ModelConfig& config);

double lr_at(const TrainConfig& config, long step, long total_steps);

}  // namespace chronograph::train
