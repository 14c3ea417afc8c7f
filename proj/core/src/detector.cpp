#include "srdm/detector.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <tuple>

#include "srdm/augment.hpp"
#include "srdm/digest.hpp"
#include "srdm/error.hpp"
#include "srdm/losses.hpp"
#include "srdm/threading.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace srdm {

namespace {

std::string opts_json(const DetectOptions& o) {
  json j;
  j["crop"] = o.crop;
  j["stride"] = o.stride;
  j["p_threshold"] = o.p_threshold;
  j["frac_threshold"] = o.frac_threshold;
  j["tiled"] = o.tiled;
  return j.dump();
}

void pair_to_row(const FramePair& pair, std::vector<float>& row) {
  const int k = pair.k();
  const int w = pair.width(), h = pair.height();
  row.resize(static_cast<size_t>(3 * k) * h * w);
  for (int j = 0; j < k; ++j) {
    const ImageTensor& f = pair.frames[static_cast<size_t>(j)];
    for (int c = 0; c < 3; ++c) {
      float* plane = row.data() + (static_cast<size_t>(3 * j + c)) * h * w;
      for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) plane[static_cast<size_t>(y) * w + x] = f.at(y, x, c);
      }
    }
  }
}

double score_window(const Model<float>& model, const FramePair& window,
                    const DetectOptions& opts, Model<float>::RowCtx& ctx,
                    std::vector<float>& row) {
  const int k = model.config().k_frames;
  if (window.k() != k) throw std::invalid_argument("score_pair: pair has wrong frame count");
  const int w = window.width(), h = window.height();
  if (w < opts.crop || h < opts.crop) {
    throw std::invalid_argument("score_pair: frames smaller than the inference crop");
  }
  std::vector<std::pair<int, int>> origins;
  if (!opts.tiled) {
    origins.emplace_back((w - opts.crop) / 2, (h - opts.crop) / 2);
  } else {
    for (int y = 0;; y += opts.crop) {
      const int yy = std::min(y, h - opts.crop);
      for (int x = 0;; x += opts.crop) {
        const int xx = std::min(x, w - opts.crop);
        origins.emplace_back(xx, yy);
        if (xx == w - opts.crop) break;
      }
      if (yy == h - opts.crop) break;
    }
  }
  double acc = 0.0;
  for (const auto& [x0, y0] : origins) {
    FramePair crop;
    crop.clip_id = window.clip_id;
    crop.start_index = window.start_index;
    crop.label = window.label;
    for (const auto& f : window.frames) {
      ImageTensor c(opts.crop, opts.crop);
      for (int y = 0; y < opts.crop; ++y) {
        const float* src = &f.data[(static_cast<size_t>(y0 + y) * w + x0) * 3];
        std::copy(src, src + static_cast<size_t>(opts.crop) * 3,
                  &c.data[static_cast<size_t>(y) * opts.crop * 3]);
      }
      crop.frames.push_back(std::move(c));
    }
    pair_to_row(crop, row);
    model.forward_row(row.data(), opts.crop, opts.crop, ctx);
    acc += detail::stable_sigmoid(static_cast<double>(ctx.logit));
  }
  return acc / static_cast<double>(origins.size());
}

}  // namespace

double score_pair(const Model<float>& model, const FramePair& pair, const DetectOptions& opts) {
  Model<float>::RowCtx ctx;
  std::vector<float> row;
  return score_window(model, pair, opts, ctx, row);
}

bool verdict_is_fake(int64_t detected, int64_t total, double frac_threshold) {
  if (total <= 0) throw std::invalid_argument("verdict: no scored windows");
  return static_cast<double>(detected) / static_cast<double>(total) >= frac_threshold;
}

VideoDetection detect_video(const Model<float>& model, const VideoClip& clip,
                            const DetectOptions& opts) {
  const int k = model.config().k_frames;
  if (opts.stride < 1) throw std::invalid_argument("detect_video: stride must be >= 1");
  if (clip.frame_count() < k) {
    throw std::invalid_argument("detect_video: clip shorter than the window length");
  }
  std::vector<int> starts;
  for (int s = 0; s + k <= clip.frame_count(); s += opts.stride) starts.push_back(s);

  VideoDetection det;
  det.clip_id = clip.id;
  det.truth = clip.source_label;
  if (clip.provenance) det.upscaler = clip.provenance->upscaler;
  det.compressed = clip.compression_quality.has_value();
  det.probs.assign(starts.size(), 0.0);

  parallel_for(static_cast<int64_t>(starts.size()), opts.threads, [&](int64_t i, int) {
    thread_local Model<float>::RowCtx ctx;
    thread_local std::vector<float> row;
    FramePair window;
    window.clip_id = clip.id;
    window.start_index = starts[static_cast<size_t>(i)];
    window.label = clip.source_label;
    for (int j = 0; j < k; ++j) {
      window.frames.push_back(clip.frames[static_cast<size_t>(window.start_index + j)]);
    }
    det.probs[static_cast<size_t>(i)] = score_window(model, window, opts, ctx, row);
  });

  int64_t detected = 0;
  for (const double p : det.probs) {
    if (p > opts.p_threshold) ++detected;
  }
  det.fraction = static_cast<double>(detected) / static_cast<double>(det.probs.size());
  det.verdict = verdict_is_fake(detected, static_cast<int64_t>(det.probs.size()),
                                opts.frac_threshold)
                    ? Label::fake
                    : Label::real;
  return det;
}

namespace {

json metrics_to_json(const Metrics& m) {
  json j;
  j["accuracy"] = m.accuracy;
  j["balanced_accuracy"] = m.balanced_accuracy ? json(*m.balanced_accuracy) : json(nullptr);
  j["f1"] = m.f1 ? json(*m.f1) : json(nullptr);
  return j;
}

Metrics metrics_from_json(const json& j) {
  Metrics m;
  m.accuracy = j.at("accuracy").get<double>();
  if (!j.at("balanced_accuracy").is_null()) {
    m.balanced_accuracy = j.at("balanced_accuracy").get<double>();
  }
  if (!j.at("f1").is_null()) m.f1 = j.at("f1").get<double>();
  return m;
}

json counts_to_json(const ConfusionCounts& c) {
  return json{{"tp", c.tp}, {"fp", c.fp}, {"tn", c.tn}, {"fn", c.fn}};
}

ConfusionCounts counts_from_json(const json& j) {
  ConfusionCounts c;
  c.tp = j.at("tp").get<int64_t>();
  c.fp = j.at("fp").get<int64_t>();
  c.tn = j.at("tn").get<int64_t>();
  c.fn = j.at("fn").get<int64_t>();
  return c;
}

json stratum_to_json(const StratumResult& s) {
  json j;
  j["key"] = s.key;
  j["compressed"] = s.compressed;
  j["counts"] = counts_to_json(s.counts);
  j["metrics"] = metrics_to_json(s.metrics);
  return j;
}

StratumResult stratum_from_json(const json& j) {
  StratumResult s;
  s.key = j.at("key").get<std::string>();
  s.compressed = j.at("compressed").get<bool>();
  s.counts = counts_from_json(j.at("counts"));
  s.metrics = metrics_from_json(j.at("metrics"));
  return s;
}

}  // namespace

std::string DetectionReport::to_json() const {
  json j;
  j["config_digest"] = config_digest;
  j["checkpoint_digest"] = checkpoint_digest;
  j["split"] = split;
  j["overall"] = counts_to_json(overall);
  j["overall_metrics"] = metrics_to_json(overall_metrics);
  j["strata"] = json::array();
  for (const auto& s : strata) j["strata"].push_back(stratum_to_json(s));
  j["summaries"] = json::array();
  for (const auto& s : summaries) j["summaries"].push_back(stratum_to_json(s));
  j["videos"] = json::array();
  for (const auto& v : videos) {
    json jv;
    jv["clip_id"] = v.clip_id;
    jv["path"] = v.variant_path;
    jv["truth"] = label_name(v.truth);
    jv["upscaler"] = v.upscaler;
    jv["compressed"] = v.compressed;
    jv["fraction"] = v.fraction;
    jv["verdict"] = label_name(v.verdict);
    jv["probs"] = v.probs;
    j["videos"].push_back(std::move(jv));
  }
  return j.dump(2) + "\n";
}

DetectionReport DetectionReport::from_json(const std::string& text) {
  const json j = json::parse(text);
  DetectionReport r;
  r.config_digest = j.at("config_digest").get<std::string>();
  r.checkpoint_digest = j.at("checkpoint_digest").get<std::string>();
  r.split = j.at("split").get<std::string>();
  r.overall = counts_from_json(j.at("overall"));
  r.overall_metrics = metrics_from_json(j.at("overall_metrics"));
  for (const auto& js : j.at("strata")) r.strata.push_back(stratum_from_json(js));
  for (const auto& js : j.at("summaries")) r.summaries.push_back(stratum_from_json(js));
  for (const auto& jv : j.at("videos")) {
    VideoDetection v;
    v.clip_id = jv.at("clip_id").get<std::string>();
    v.variant_path = jv.at("path").get<std::string>();
    v.truth = jv.at("truth").get<std::string>() == "fake" ? Label::fake : Label::real;
    v.upscaler = jv.at("upscaler").get<std::string>();
    v.compressed = jv.at("compressed").get<bool>();
    v.fraction = jv.at("fraction").get<double>();
    v.verdict = jv.at("verdict").get<std::string>() == "fake" ? Label::fake : Label::real;
    v.probs = jv.at("probs").get<std::vector<double>>();
    r.videos.push_back(std::move(v));
  }
  return r;
}

void DetectionReport::save(const fs::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("report: cannot write " + path.string());
  out << to_json();
}

const StratumResult* DetectionReport::regime_summary(bool compressed) const {
  for (const auto& s : summaries) {
    if (s.key == "all" && s.compressed == compressed) return &s;
  }
  return nullptr;
}

DetectionReport evaluate_corpus(const Model<float>& model, const DatasetManifest& manifest,
                                const fs::path& root, Split split, const DetectOptions& opts,
                                std::shared_ptr<FrameCache> cache) {
  std::vector<const ManifestEntry*> entries;
  for (const auto& e : manifest.entries) {
    if (e.split == split) entries.push_back(&e);
  }
  if (entries.empty()) {
    throw EmptyInputError(std::string("evaluate_corpus: split '") + split_name(split) +
                          "' is empty");
  }
  std::sort(entries.begin(), entries.end(), [](const ManifestEntry* a, const ManifestEntry* b) {
    return std::tie(a->clip_id, a->path) < std::tie(b->clip_id, b->path);
  });
  if (!cache) cache = std::make_shared<FrameCache>();

  DetectionReport report;
  report.config_digest = sha256_hex(opts_json(opts));
  report.split = split_name(split);

  std::map<std::pair<std::string, bool>, ConfusionCounts> strata;
  bool saw_regime[2] = {false, false};
  ConfusionCounts regime_counts[2];

  for (const auto* e : entries) {
    VideoClip clip;
    clip.id = e->clip_id;
    clip.source_label = e->label;
    if (!e->upscaler.empty()) clip.provenance = Provenance{e->upscaler, e->scale_factor};
    clip.compression_quality = e->q;
    clip.frames.reserve(static_cast<size_t>(e->frame_count));
    for (int i = 0; i < e->frame_count; ++i) {
      clip.frames.push_back(cache->get(frame_path(root, *e, i)));
    }
    VideoDetection det = detect_video(model, clip, opts);
    det.variant_path = e->path;

    const bool is_fake = det.truth == Label::fake;
    const bool said_fake = det.verdict == Label::fake;
    ConfusionCounts unit;
    if (is_fake && said_fake) unit.tp = 1;
    if (is_fake && !said_fake) unit.fn = 1;
    if (!is_fake && said_fake) unit.fp = 1;
    if (!is_fake && !said_fake) unit.tn = 1;

    report.overall += unit;
    strata[{is_fake ? det.upscaler : "real", det.compressed}] += unit;
    regime_counts[det.compressed ? 1 : 0] += unit;
    saw_regime[det.compressed ? 1 : 0] = true;
    report.videos.push_back(std::move(det));
  }

  report.overall_metrics = compute_metrics(report.overall);
  for (const auto& [key, counts] : strata) {
    report.strata.push_back({key.first, key.second, counts, compute_metrics(counts)});
  }
  for (int r = 0; r < 2; ++r) {
    if (saw_regime[r]) {
      report.summaries.push_back(
          {"all", r == 1, regime_counts[r], compute_metrics(regime_counts[r])});
    }
  }
  return report;
}

namespace {

std::string fmt_opt(const std::optional<double>& v) {
  if (!v) return "n/a";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", *v);
  return buf;
}

void table_row(std::ostringstream& os, const std::string& key, const StratumResult& s) {
  char acc[32];
  std::snprintf(acc, sizeof(acc), "%.4f", s.metrics.accuracy);
  os << "  " << key << (s.compressed ? " [compressed]" : " [uncompressed]");
  os << "  n=" << s.counts.total() << "  accuracy=" << acc
     << "  b_accuracy=" << fmt_opt(s.metrics.balanced_accuracy) << "  f1=" << fmt_opt(s.metrics.f1)
     << "\n";
}

}  // namespace

std::string report_table(const DetectionReport& report) {
  std::ostringstream os;
  os << "split: " << report.split << "\n";
  os << "overall: n=" << report.overall.total() << "  accuracy=" << report.overall_metrics.accuracy
     << "  b_accuracy=" << fmt_opt(report.overall_metrics.balanced_accuracy)
     << "  f1=" << fmt_opt(report.overall_metrics.f1) << "\n";
  os << "regimes:\n";
  for (const auto& s : report.summaries) table_row(os, s.key, s);
  os << "strata:\n";
  for (const auto& s : report.strata) table_row(os, s.key, s);
  return os.str();
}

std::string report_csv(const DetectionReport& report) {
  std::ostringstream os;
  os << "group,key,compressed,n,tp,fp,tn,fn,accuracy,balanced_accuracy,f1\n";
  auto line = [&](const char* group, const StratumResult& s) {
    os << group << "," << s.key << "," << (s.compressed ? 1 : 0) << "," << s.counts.total() << ","
       << s.counts.tp << "," << s.counts.fp << "," << s.counts.tn << "," << s.counts.fn << ","
       << s.metrics.accuracy << ","
       << (s.metrics.balanced_accuracy ? std::to_string(*s.metrics.balanced_accuracy) : "") << ","
       << (s.metrics.f1 ? std::to_string(*s.metrics.f1) : "") << "\n";
  };
  StratumResult overall{"overall", false, report.overall, report.overall_metrics};
  line("overall", overall);
  for (const auto& s : report.summaries) line("regime", s);
  for (const auto& s : report.strata) line("stratum", s);
  return os.str();
}

}  // namespace srdm
