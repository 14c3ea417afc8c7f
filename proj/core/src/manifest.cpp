#include "srdm/manifest.hpp"

#include <nlohmann/json.hpp>

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "srdm/digest.hpp"

using nlohmann::json;

namespace srdm {

const char* split_name(Split s) {
  switch (s) {
    case Split::train: return "train";
    case Split::val: return "val";
    case Split::test: return "test";
  }
  return "?";
}

Split split_from_string(const std::string& name) {
  if (name == "train") return Split::train;
  if (name == "val") return Split::val;
  if (name == "test") return Split::test;
  throw std::invalid_argument("unknown split: " + name);
}

static json entry_to_json(const ManifestEntry& e) {
  json j;
  j["clip_id"] = e.clip_id;
  j["path"] = e.path;
  j["label"] = label_name(e.label);
  j["upscaler"] = e.upscaler;
  j["scale_factor"] = e.scale_factor;
  if (e.q.has_value()) {
    j["q"] = *e.q;
  } else {
    j["q"] = nullptr;
  }
  j["frame_count"] = e.frame_count;
  j["split"] = split_name(e.split);
  return j;
}

static ManifestEntry entry_from_json(const json& j) {
  ManifestEntry e;
  e.clip_id = j.at("clip_id").get<std::string>();
  e.path = j.at("path").get<std::string>();
  const std::string label = j.at("label").get<std::string>();
  if (label == "real") {
    e.label = Label::real;
  } else if (label == "fake") {
    e.label = Label::fake;
  } else {
    throw std::invalid_argument("manifest: bad label " + label);
  }
  e.upscaler = j.at("upscaler").get<std::string>();
  e.scale_factor = j.at("scale_factor").get<int>();
  if (!j.at("q").is_null()) e.q = j.at("q").get<int>();
  e.frame_count = j.at("frame_count").get<int>();
  e.split = split_from_string(j.at("split").get<std::string>());
  return e;
}

std::string DatasetManifest::to_json() const {
  json j;
  j["version"] = version;
  j["toolkit_version"] = toolkit_version;
  // Seeds are 64-bit; JSON numbers are kept out of the picture.
  char seed_buf[32];
  std::snprintf(seed_buf, sizeof(seed_buf), "%" PRIu64, seed);
  j["seed"] = seed_buf;
  j["config_digest"] = config_digest;
  j["entries"] = json::array();
  for (const auto& e : entries) j["entries"].push_back(entry_to_json(e));
  return j.dump(2) + "\n";
}

DatasetManifest DatasetManifest::from_json(const std::string& text) {
  const json j = json::parse(text);
  DatasetManifest m;
  m.version = j.at("version").get<int>();
  if (m.version != 1) {
    throw std::runtime_error("manifest: unsupported version " + std::to_string(m.version));
  }
  m.toolkit_version = j.at("toolkit_version").get<std::string>();
  m.seed = std::stoull(j.at("seed").get<std::string>());
  m.config_digest = j.at("config_digest").get<std::string>();
  for (const auto& je : j.at("entries")) m.entries.push_back(entry_from_json(je));
  m.validate();
  return m;
}

void DatasetManifest::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("manifest: cannot write " + path.string());
  out << to_json();
}

DatasetManifest DatasetManifest::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("manifest: cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return from_json(ss.str());
}

std::string DatasetManifest::digest() const { return sha256_hex(to_json()); }

void DatasetManifest::validate() const {
  for (const auto& e : entries) {
    if (e.clip_id.empty() || e.path.empty()) {
      throw std::runtime_error("manifest: entry with empty id or path");
    }
    if (e.frame_count <= 0) {
      throw std::runtime_error("manifest: non-positive frame count for " + e.clip_id);
    }
    if (e.label == Label::fake && e.upscaler.empty()) {
      throw std::runtime_error("manifest: fake entry without upscaler: " + e.clip_id);
    }
    if (e.label == Label::real && !e.upscaler.empty()) {
      throw std::runtime_error("manifest: real entry with upscaler: " + e.clip_id);
    }
    if (e.q.has_value() && (*e.q < 15 || *e.q > 30)) {
      throw std::runtime_error("manifest: q out of range for " + e.clip_id);
    }
  }
}

std::filesystem::path frame_path(const std::filesystem::path& root, const ManifestEntry& e,
                                 int frame_index) {
  char name[16];
  std::snprintf(name, sizeof(name), "%06d.png", frame_index);
  return root / std::filesystem::path(e.path) / name;
}

}  // namespace srdm
