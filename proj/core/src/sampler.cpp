#include "srdm/sampler.hpp"

#include <algorithm>
#include <stdexcept>

#include "srdm/error.hpp"
#include "srdm/png_io.hpp"

namespace fs = std::filesystem;

namespace srdm {

ImageTensor FrameCache::get(const fs::path& path) {
  const std::string key = path.generic_string();
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = slots_.find(key);
    if (it != slots_.end()) {
      order_.erase(it->second.first);
      order_.push_front(key);
      it->second.first = order_.begin();
      const Slot& s = it->second.second;
      RgbBuffer buf{s.w, s.h, s.rgb};
      return to_image(buf);
    }
  }
  RgbBuffer buf = read_png_rgb8(path);
  ImageTensor img = to_image(buf);
  {
    std::lock_guard<std::mutex> lock(mu_);
    if (slots_.find(key) == slots_.end()) {
      bytes_ += buf.data.size();
      order_.push_front(key);
      slots_.emplace(key, std::make_pair(order_.begin(),
                                         Slot{std::move(buf.data), buf.width, buf.height}));
      while (bytes_ > byte_cap_ && order_.size() > 1) {
        const std::string& victim = order_.back();
        auto vit = slots_.find(victim);
        bytes_ -= vit->second.second.rgb.size();
        slots_.erase(vit);
        order_.pop_back();
      }
    }
  }
  return img;
}

TripletSampler::TripletSampler(const DatasetManifest& manifest, fs::path root, Split split,
                               int k_frames, Rng rng, std::shared_ptr<FrameCache> cache)
    : manifest_(manifest), root_(std::move(root)), k_(k_frames), rng_(rng),
      cache_(std::move(cache)) {
  if (k_ < 1 || k_ > 3) throw std::invalid_argument("sampler: k_frames must be 1, 2 or 3");
  if (!cache_) cache_ = std::make_shared<FrameCache>();

  for (const auto& e : manifest_.entries) {
    if (e.split != split) continue;
    const int regime = e.compressed() ? 1 : 0;
    if (e.label == Label::real) {
      reals_[regime].push_back(&e);
    } else {
      fakes_[regime][e.clip_id].push_back(&e);
    }
  }
  // Anchor candidates: reals that have at least one fake counterpart, a
  // distinct-clip positive in the same regime, and enough frames for k.
  for (int r = 0; r < 2; ++r) {
    for (const auto* e : reals_[r]) {
      if (e->frame_count < k_) continue;
      auto fit = fakes_[r].find(e->clip_id);
      if (fit == fakes_[r].end() || fit->second.empty()) continue;
      const bool has_positive =
          std::any_of(reals_[r].begin(), reals_[r].end(), [&](const ManifestEntry* o) {
            return o->clip_id != e->clip_id && o->frame_count >= k_;
          });
      if (has_positive) anchor_entries_.push_back(e);
    }
  }
  if (anchor_entries_.empty()) {
    throw InsufficientDataError(
        "sampler: split needs at least 2 real clips and a fake forged from an anchor clip");
  }
}

int TripletSampler::draw_start(const ManifestEntry& entry) {
  return static_cast<int>(rng_.uniform_int(0, entry.frame_count - k_));
}

TripletSpec TripletSampler::sample_spec() {
  TripletSpec spec;
  spec.anchor = anchor_entries_[static_cast<size_t>(
      rng_.uniform_int(0, static_cast<int64_t>(anchor_entries_.size()) - 1))];
  const int regime = spec.anchor->compressed() ? 1 : 0;
  spec.anchor_start = draw_start(*spec.anchor);

  // Positive: a different real clip from the same compression regime.
  std::vector<const ManifestEntry*> candidates;
  for (const auto* e : reals_[regime]) {
    if (e->clip_id != spec.anchor->clip_id && e->frame_count >= k_) candidates.push_back(e);
  }
  if (candidates.empty()) {
    throw InsufficientDataError("sampler: no positive candidate for " + spec.anchor->clip_id);
  }
  spec.positive = candidates[static_cast<size_t>(
      rng_.uniform_int(0, static_cast<int64_t>(candidates.size()) - 1))];
  spec.positive_start = draw_start(*spec.positive);

  // Negative: the anchor clip's forged counterpart, same start index.
  const auto& fakes = fakes_[regime].at(spec.anchor->clip_id);
  spec.negative =
      fakes[static_cast<size_t>(rng_.uniform_int(0, static_cast<int64_t>(fakes.size()) - 1))];
  if (spec.negative->frame_count < spec.anchor_start + k_) {
    throw InsufficientDataError("sampler: fake entry shorter than its source: " +
                                spec.negative->clip_id);
  }
  return spec;
}

FramePair TripletSampler::load_pair(const ManifestEntry& entry, int start) const {
  if (start < 0 || start + k_ > entry.frame_count) {
    throw std::invalid_argument("load_pair: start index out of range");
  }
  FramePair pair;
  pair.clip_id = entry.clip_id;
  pair.start_index = start;
  pair.label = entry.label;
  pair.frames.reserve(static_cast<size_t>(k_));
  for (int j = 0; j < k_; ++j) {
    pair.frames.push_back(cache_->get(frame_path(root_, entry, start + j)));
  }
  return pair;
}

TripletSample TripletSampler::materialize(const TripletSpec& spec) {
  TripletSample s;
  s.anchor = load_pair(*spec.anchor, spec.anchor_start);
  s.positive = load_pair(*spec.positive, spec.positive_start);
  s.negative = load_pair(*spec.negative, spec.anchor_start);
  return s;
}

TripletSample TripletSampler::sample() { return materialize(sample_spec()); }

}  // namespace srdm
