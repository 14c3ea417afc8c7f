#include "srdm/train_config.hpp"

#include <nlohmann/json.hpp>

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "srdm/digest.hpp"

using nlohmann::json;

namespace srdm {

void TrainConfig::validate() const {
  if (epochs < 1) throw std::invalid_argument("train: epochs must be >= 1");
  if (batch < 1) throw std::invalid_argument("train: batch must be >= 1");
  if (!(init_lr >= 0 && init_lr <= peak_lr)) {
    throw std::invalid_argument("train: need 0 <= init_lr <= peak_lr");
  }
  if (final_lr < 0) throw std::invalid_argument("train: final_lr must be >= 0");
  if (weight_decay < 0) throw std::invalid_argument("train: weight_decay must be >= 0");
  if (warmup_epochs < 0 || warmup_epochs >= epochs) {
    throw std::invalid_argument("train: need 0 <= warmup_epochs < epochs");
  }
  if (anchors_per_clip < 1) throw std::invalid_argument("train: anchors_per_clip must be >= 1");
  if (val_stride < 1) throw std::invalid_argument("train: val_stride must be >= 1");
  encoder.validate();
  loss.validate();
  // Aug frame-size checks happen against actual frames at sampling time.
  if (aug.crop < 8) throw std::invalid_argument("train: crop must be >= 8");
}

namespace {

void check_keys(const json& j, const std::set<std::string>& allowed, const char* section) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (allowed.find(it.key()) == allowed.end()) {
      throw std::invalid_argument(std::string("config: unknown key '") + it.key() + "' in " +
                                  section);
    }
  }
}

}  // namespace

std::string TrainConfig::to_json() const {
  json j;
  j["version"] = 1;
  json jt;
  jt["epochs"] = epochs;
  jt["batch"] = batch;
  jt["peak_lr"] = peak_lr;
  jt["init_lr"] = init_lr;
  jt["final_lr"] = final_lr;
  jt["weight_decay"] = weight_decay;
  jt["warmup_epochs"] = warmup_epochs;
  char seed_buf[32];
  std::snprintf(seed_buf, sizeof(seed_buf), "%" PRIu64, seed);
  jt["seed"] = seed_buf;
  jt["anchors_per_clip"] = anchors_per_clip;
  jt["threads"] = threads;
  jt["deterministic"] = deterministic;
  jt["val_stride"] = val_stride;
  j["train"] = jt;

  json je;
  je["backbone"] = backbone_name(encoder.backbone);
  je["k_frames"] = encoder.k_frames;
  je["conv_widths"] = encoder.conv_widths;
  je["proj_dim"] = encoder.proj_dim;
  je["cls_widths"] = encoder.cls_widths;
  j["encoder"] = je;

  json jl;
  jl["margin"] = loss.margin;
  jl["gamma"] = loss.gamma;
  jl["epsilon"] = loss.epsilon;
  json terms = json::array();
  if (loss.enable_ce) terms.push_back("CE");
  if (loss.enable_t) terms.push_back("T");
  if (loss.enable_v) terms.push_back("V");
  jl["enabled_terms"] = terms;
  jl["paper_literal_triplet"] = loss.paper_literal_triplet;
  j["loss"] = jl;

  json ja;
  ja["crop"] = aug.crop;
  ja["cutout_count"] = aug.cutout_count;
  ja["cutout_min"] = aug.cutout_min;
  ja["cutout_max"] = aug.cutout_max;
  ja["ablation"] = aug.ablation ? json(ablation_name(*aug.ablation)) : json(nullptr);
  j["aug"] = ja;
  return j.dump(2) + "\n";
}

TrainConfig TrainConfig::from_json(const std::string& text) {
  const json j = json::parse(text);
  check_keys(j, {"version", "train", "encoder", "loss", "aug"}, "config");
  if (j.at("version").get<int>() != 1) {
    throw std::invalid_argument("config: unsupported version");
  }
  TrainConfig c;

  const json& jt = j.at("train");
  check_keys(jt,
             {"epochs", "batch", "peak_lr", "init_lr", "final_lr", "weight_decay",
              "warmup_epochs", "seed", "anchors_per_clip", "threads", "deterministic",
              "val_stride"},
             "train");
  if (jt.contains("epochs")) c.epochs = jt.at("epochs").get<int>();
  if (jt.contains("batch")) c.batch = jt.at("batch").get<int>();
  if (jt.contains("peak_lr")) c.peak_lr = jt.at("peak_lr").get<double>();
  if (jt.contains("init_lr")) c.init_lr = jt.at("init_lr").get<double>();
  if (jt.contains("final_lr")) c.final_lr = jt.at("final_lr").get<double>();
  if (jt.contains("weight_decay")) c.weight_decay = jt.at("weight_decay").get<double>();
  if (jt.contains("warmup_epochs")) c.warmup_epochs = jt.at("warmup_epochs").get<int>();
  if (jt.contains("seed")) c.seed = std::stoull(jt.at("seed").get<std::string>());
  if (jt.contains("anchors_per_clip")) c.anchors_per_clip = jt.at("anchors_per_clip").get<int>();
  if (jt.contains("threads")) c.threads = jt.at("threads").get<int>();
  if (jt.contains("deterministic")) c.deterministic = jt.at("deterministic").get<bool>();
  if (jt.contains("val_stride")) c.val_stride = jt.at("val_stride").get<int>();

  if (j.contains("encoder")) {
    const json& je = j.at("encoder");
    check_keys(je, {"backbone", "k_frames", "conv_widths", "proj_dim", "cls_widths"}, "encoder");
    if (je.contains("backbone")) {
      c.encoder.backbone = backbone_from_string(je.at("backbone").get<std::string>());
    }
    if (je.contains("k_frames")) c.encoder.k_frames = je.at("k_frames").get<int>();
    if (je.contains("conv_widths")) {
      c.encoder.conv_widths = je.at("conv_widths").get<std::vector<int>>();
    }
    if (je.contains("proj_dim")) c.encoder.proj_dim = je.at("proj_dim").get<int>();
    if (je.contains("cls_widths")) {
      c.encoder.cls_widths = je.at("cls_widths").get<std::vector<int>>();
    }
  }

  if (j.contains("loss")) {
    const json& jl = j.at("loss");
    check_keys(jl, {"margin", "gamma", "epsilon", "enabled_terms", "paper_literal_triplet"},
               "loss");
    if (jl.contains("margin")) c.loss.margin = jl.at("margin").get<double>();
    if (jl.contains("gamma")) c.loss.gamma = jl.at("gamma").get<double>();
    if (jl.contains("epsilon")) c.loss.epsilon = jl.at("epsilon").get<double>();
    if (jl.contains("enabled_terms")) {
      c.loss.enable_ce = c.loss.enable_t = c.loss.enable_v = false;
      for (const auto& t : jl.at("enabled_terms")) {
        const std::string s = t.get<std::string>();
        if (s == "CE") {
          c.loss.enable_ce = true;
        } else if (s == "T") {
          c.loss.enable_t = true;
        } else if (s == "V") {
          c.loss.enable_v = true;
        } else {
          throw std::invalid_argument("config: unknown loss term " + s);
        }
      }
    }
    if (jl.contains("paper_literal_triplet")) {
      c.loss.paper_literal_triplet = jl.at("paper_literal_triplet").get<bool>();
    }
  }

  if (j.contains("aug")) {
    const json& ja = j.at("aug");
    check_keys(ja, {"crop", "cutout_count", "cutout_min", "cutout_max", "ablation"}, "aug");
    if (ja.contains("crop")) c.aug.crop = ja.at("crop").get<int>();
    if (ja.contains("cutout_count")) c.aug.cutout_count = ja.at("cutout_count").get<int>();
    if (ja.contains("cutout_min")) c.aug.cutout_min = ja.at("cutout_min").get<int>();
    if (ja.contains("cutout_max")) c.aug.cutout_max = ja.at("cutout_max").get<int>();
    if (ja.contains("ablation") && !ja.at("ablation").is_null()) {
      c.aug.ablation = ablation_from_string(ja.at("ablation").get<std::string>());
    }
  }

  c.validate();
  return c;
}

void TrainConfig::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("config: cannot write " + path.string());
  out << to_json();
}

TrainConfig TrainConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("config: cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return from_json(ss.str());
}

std::string TrainConfig::digest() const { return sha256_hex(to_json()); }

}  // namespace srdm
