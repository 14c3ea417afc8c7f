#include "srdm/forge.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cinttypes>
#include <cstdio>
#include <mutex>
#include <numeric>
#include <stdexcept>

#include "srdm/digest.hpp"
#include "srdm/error.hpp"
#include "srdm/png_io.hpp"
#include "srdm/rng.hpp"
#include "srdm/threading.hpp"
#include "srdm/version.hpp"

using nlohmann::json;
namespace fs = std::filesystem;

namespace srdm {

void ForgeConfig::validate() const {
  if (scale < 2) throw std::invalid_argument("forge: scale must be >= 2");
  if (upscalers.empty()) throw std::invalid_argument("forge: need at least one upscaler");
  if (q_lo < 15 || q_hi > 30 || q_lo > q_hi) {
    throw std::invalid_argument("forge: q range must lie within [15,30]");
  }
  if (train_frac < 0 || val_frac < 0 || train_frac + val_frac > 1.0) {
    throw std::invalid_argument("forge: bad split fractions");
  }
  if (window) {
    if (window->block_len < 1 || window->take_lo < 0 || window->take_hi < window->take_lo ||
        window->take_hi >= window->block_len) {
      throw std::invalid_argument("forge: bad frame window");
    }
  }
}

std::string ForgeConfig::to_json() const {
  json j;
  j["scale"] = scale;
  j["down"] = kernel_name(down);
  json ups = json::array();
  for (const auto k : upscalers) ups.push_back(kernel_name(k));
  j["upscalers"] = ups;
  j["q_lo"] = q_lo;
  j["q_hi"] = q_hi;
  if (window) {
    j["window"] = {{"block_len", window->block_len},
                   {"take_lo", window->take_lo},
                   {"take_hi", window->take_hi}};
  } else {
    j["window"] = nullptr;
  }
  j["regimes"] = regimes == Regimes::compressed     ? "compressed"
                 : regimes == Regimes::uncompressed ? "uncompressed"
                                                    : "both";
  j["train_frac"] = train_frac;
  j["val_frac"] = val_frac;
  char seed_buf[32];
  std::snprintf(seed_buf, sizeof(seed_buf), "%" PRIu64, seed);
  j["seed"] = seed_buf;
  return j.dump();
}

std::string ForgeConfig::digest() const { return sha256_hex(to_json()); }

VideoClip select_frame_window(const VideoClip& clip, int block_len, int take_lo, int take_hi) {
  if (block_len < 1 || take_lo < 0 || take_hi < take_lo || take_hi >= block_len) {
    throw std::invalid_argument("select_frame_window: bad window parameters");
  }
  const int n = clip.frame_count();
  if (n < block_len) {
    throw std::invalid_argument("select_frame_window: clip shorter than one block");
  }
  VideoClip out = clip;
  out.frames.clear();
  const int blocks = n / block_len;
  for (int b = 0; b < blocks; ++b) {
    for (int i = take_lo; i <= take_hi; ++i) {
      out.frames.push_back(clip.frames[static_cast<size_t>(b * block_len + i)]);
    }
  }
  return out;
}

static ImageTensor center_crop_divisible(const ImageTensor& img, int scale) {
  const int cw = img.width / scale * scale;
  const int ch = img.height / scale * scale;
  if (cw == img.width && ch == img.height) return img;
  if (cw < scale || ch < scale) {
    throw std::invalid_argument("make_fake: frame smaller than the scale factor");
  }
  const int x0 = (img.width - cw) / 2;
  const int y0 = (img.height - ch) / 2;
  ImageTensor out(cw, ch);
  for (int y = 0; y < ch; ++y) {
    for (int x = 0; x < cw; ++x) {
      for (int c = 0; c < 3; ++c) out.at(y, x, c) = img.at(y0 + y, x0 + x, c);
    }
  }
  return out;
}

VideoClip make_fake(const VideoClip& clip, int scale, Kernel down, Kernel up) {
  if (scale < 2) throw std::invalid_argument("make_fake: scale must be >= 2");
  if (clip.source_label != Label::real) {
    throw std::invalid_argument("make_fake: source clip must be real");
  }
  if (!clip_is_valid(clip)) throw std::invalid_argument("make_fake: invalid clip");

  VideoClip out;
  out.id = clip.id;
  out.source_label = Label::fake;
  out.provenance = Provenance{kernel_name(up), scale};
  out.compression_quality = clip.compression_quality;
  out.frames.reserve(clip.frames.size());
  for (const auto& f : clip.frames) {
    const ImageTensor base = center_crop_divisible(f, scale);
    const ImageTensor low = resample(base, base.width / scale, base.height / scale, down);
    out.frames.push_back(resample(low, base.width, base.height, up));
  }
  return out;
}

int clip_q(uint64_t seed, const std::string& clip_id, int q_lo, int q_hi) {
  Rng rng(Rng::derive_seed(seed, std::string("forge.q/") + clip_id));
  return static_cast<int>(rng.uniform_int(q_lo, q_hi));
}

std::vector<Split> assign_splits(size_t n_clips, double train_frac, double val_frac,
                                 uint64_t seed) {
  std::vector<size_t> order(n_clips);
  std::iota(order.begin(), order.end(), size_t{0});
  Rng rng(Rng::derive_seed(seed, "forge.splits"));
  for (size_t i = n_clips; i > 1; --i) {
    const size_t j = static_cast<size_t>(rng.uniform_int(0, static_cast<int64_t>(i) - 1));
    std::swap(order[i - 1], order[j]);
  }
  const auto n_train = static_cast<size_t>(std::llround(train_frac * static_cast<double>(n_clips)));
  const auto n_val = static_cast<size_t>(std::llround(val_frac * static_cast<double>(n_clips)));
  std::vector<Split> out(n_clips, Split::test);
  for (size_t i = 0; i < n_clips; ++i) {
    if (i < n_train) {
      out[order[i]] = Split::train;
    } else if (i < n_train + n_val) {
      out[order[i]] = Split::val;
    }
  }
  return out;
}

VideoClip load_clip_dir(const fs::path& dir, const std::string& id) {
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ".png") files.push_back(e.path());
  }
  if (files.empty()) throw std::runtime_error("no PNG frames in " + dir.string());
  std::sort(files.begin(), files.end());

  VideoClip clip;
  clip.id = id;
  clip.frames.reserve(files.size());
  for (const auto& f : files) clip.frames.push_back(read_png(f));
  if (!clip_is_valid(clip)) {
    throw std::runtime_error("frames disagree on dimensions in " + dir.string());
  }
  return clip;
}

void write_clip_dir(const fs::path& dir, const VideoClip& clip) {
  fs::create_directories(dir);
  for (int i = 0; i < clip.frame_count(); ++i) {
    char name[16];
    std::snprintf(name, sizeof(name), "%06d.png", i);
    write_png(dir / name, clip.frames[static_cast<size_t>(i)]);
  }
}

namespace {

struct ClipJob {
  std::string id;
  fs::path src;
  Split split;
};

struct ClipResult {
  std::vector<ManifestEntry> entries;
  std::optional<ForgeError> error;
};

}  // namespace

DatasetManifest forge_dataset(const fs::path& src_dir, const fs::path& out_dir,
                              const ForgeConfig& config, ForgeReport* report) {
  config.validate();
  if (!fs::is_directory(src_dir)) {
    throw EmptyInputError("forge: source is not a directory: " + src_dir.string());
  }

  std::vector<ClipJob> jobs;
  for (const auto& e : fs::directory_iterator(src_dir)) {
    if (e.is_directory()) jobs.push_back({e.path().filename().string(), e.path(), Split::train});
  }
  if (jobs.empty()) {
    throw EmptyInputError("forge: no clip subdirectories in " + src_dir.string());
  }
  std::sort(jobs.begin(), jobs.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
  const auto splits = assign_splits(jobs.size(), config.train_frac, config.val_frac, config.seed);
  for (size_t i = 0; i < jobs.size(); ++i) jobs[i].split = splits[i];

  fs::create_directories(out_dir);

  const bool do_uncompressed = config.regimes != Regimes::compressed;
  const bool do_compressed = config.regimes != Regimes::uncompressed;

  std::vector<ClipResult> results(jobs.size());
  parallel_for(static_cast<int64_t>(jobs.size()), config.threads, [&](int64_t ji, int) {
    const ClipJob& job = jobs[static_cast<size_t>(ji)];
    ClipResult& res = results[static_cast<size_t>(ji)];
    try {
      VideoClip clip = load_clip_dir(job.src, job.id);
      if (config.window) {
        clip = select_frame_window(clip, config.window->block_len, config.window->take_lo,
                                   config.window->take_hi);
      }
      const int q = clip_q(config.seed, job.id, config.q_lo, config.q_hi);

      auto add_entry = [&](const VideoClip& variant, const std::string& rel) {
        write_clip_dir(out_dir / rel, variant);
        ManifestEntry e;
        e.clip_id = job.id;
        e.path = rel;
        e.label = variant.source_label;
        if (variant.provenance) {
          e.upscaler = variant.provenance->upscaler;
          e.scale_factor = variant.provenance->scale_factor;
        }
        e.q = variant.compression_quality;
        e.frame_count = variant.frame_count();
        e.split = job.split;
        res.entries.push_back(std::move(e));
      };

      char qs[8];
      std::snprintf(qs, sizeof(qs), "%d", q);
      if (do_uncompressed) add_entry(clip, job.id + "/real");
      if (do_compressed) {
        add_entry(compress_clip(clip, CompressionParams{q}), job.id + "/real_q" + qs);
      }
      for (const Kernel up : config.upscalers) {
        const VideoClip fake = make_fake(clip, config.scale, config.down, up);
        const std::string base =
            job.id + "/up_" + kernel_name(up) + "_x" + std::to_string(config.scale);
        if (do_uncompressed) add_entry(fake, base);
        if (do_compressed) {
          add_entry(compress_clip(fake, CompressionParams{q}), base + "_q" + qs);
        }
      }
    } catch (const std::exception& ex) {
      res.entries.clear();
      res.error = ForgeError{job.id, ex.what()};
    }
  });

  DatasetManifest manifest;
  manifest.toolkit_version = kToolkitVersion;
  manifest.seed = config.seed;
  manifest.config_digest = config.digest();
  ForgeReport local_report;
  for (auto& res : results) {
    if (res.error) {
      local_report.errors.push_back(*res.error);
    } else {
      local_report.clips_forged++;
      for (auto& e : res.entries) manifest.entries.push_back(std::move(e));
    }
  }
  if (report) *report = local_report;
  manifest.validate();
  manifest.save(out_dir / "manifest.json");
  return manifest;
}

}  // namespace srdm
