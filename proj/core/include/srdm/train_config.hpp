#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "srdm/augment.hpp"
#include "srdm/losses.hpp"
#include "srdm/model.hpp"

namespace srdm {

/// Full training configuration (config-file schema version 1).
struct TrainConfig {
  int epochs = 20;
  int batch = 32;
  double peak_lr = 2e-5;
  double init_lr = 5e-6;
  double final_lr = 0.0;
  double weight_decay = 0.05;
  int warmup_epochs = 2;
  uint64_t seed = 1;
  int anchors_per_clip = 1;  // anchor positions each train clip contributes per epoch
  int threads = 0;           // 0 = hardware concurrency
  bool deterministic = false;
  int val_stride = 2;
  EncoderConfig encoder;
  LossConfig loss;
  AugConfig aug;

  void validate() const;
  std::string to_json() const;  // canonical
  static TrainConfig from_json(const std::string& text);
  void save(const std::filesystem::path& path) const;
  static TrainConfig load(const std::filesystem::path& path);
  std::string digest() const;
};

}  // namespace srdm
