#include "srdm/checkpoint.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>

#include "srdm/error.hpp"

namespace fs = std::filesystem;

namespace srdm {

namespace {

// The toolkit targets little-endian hosts; enforce at build time.
static_assert(std::endian::native == std::endian::little,
              "checkpoint I/O assumes a little-endian host");

template <class U>
void write_raw(std::ofstream& out, U v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(U));
}

template <class U>
U read_raw(std::ifstream& in) {
  U v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(U));
  if (!in) throw CheckpointError("checkpoint: truncated file");
  return v;
}

std::string read_string(std::ifstream& in, uint32_t len) {
  if (len > (1u << 20)) throw CheckpointError("checkpoint: implausible string length");
  std::string s(len, '\0');
  in.read(s.data(), len);
  if (!in) throw CheckpointError("checkpoint: truncated file");
  return s;
}

int shape_dim(const Param<float>& p, size_t i) {
  if (p.shape.size() <= i) throw CheckpointError("checkpoint: unexpected array rank");
  return p.shape[i];
}

}  // namespace

void save_checkpoint(const Model<float>& model, const std::string& config_digest, int crop,
                     const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw CheckpointError("checkpoint: cannot write " + path.string());
  out.write(kCheckpointMagic, 4);
  write_raw<uint32_t>(out, kCheckpointVersion);
  write_raw<uint32_t>(out, static_cast<uint32_t>(config_digest.size()));
  out.write(config_digest.data(), static_cast<std::streamsize>(config_digest.size()));
  write_raw<uint64_t>(out, model.init_seed());
  write_raw<uint32_t>(out, static_cast<uint32_t>(crop));
  write_raw<uint32_t>(out, static_cast<uint32_t>(model.params().size()));
  for (const auto& p : model.params()) {
    write_raw<uint32_t>(out, static_cast<uint32_t>(p.name.size()));
    out.write(p.name.data(), static_cast<std::streamsize>(p.name.size()));
    write_raw<uint32_t>(out, static_cast<uint32_t>(p.shape.size()));
    for (const int d : p.shape) write_raw<uint32_t>(out, static_cast<uint32_t>(d));
    out.write(reinterpret_cast<const char*>(p.w.data()),
              static_cast<std::streamsize>(p.w.size() * sizeof(float)));
  }
  if (!out) throw CheckpointError("checkpoint: write failed for " + path.string());
}

LoadedCheckpoint load_checkpoint(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CheckpointError("checkpoint: cannot open " + path.string());
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kCheckpointMagic, 4) != 0) {
    throw CheckpointError("checkpoint: bad magic (not a checkpoint file)");
  }
  const auto version = read_raw<uint32_t>(in);
  if (version != kCheckpointVersion) {
    throw CheckpointError("checkpoint: unsupported format version " + std::to_string(version) +
                          " (this build reads version " + std::to_string(kCheckpointVersion) +
                          ")");
  }
  const auto digest_len = read_raw<uint32_t>(in);
  std::string digest = read_string(in, digest_len);
  const auto init_seed = read_raw<uint64_t>(in);
  const auto crop = read_raw<uint32_t>(in);
  const auto n_arrays = read_raw<uint32_t>(in);
  if (n_arrays == 0 || n_arrays > 4096) {
    throw CheckpointError("checkpoint: implausible array count");
  }

  std::vector<Param<float>> arrays;
  arrays.reserve(n_arrays);
  for (uint32_t a = 0; a < n_arrays; ++a) {
    Param<float> p;
    p.name = read_string(in, read_raw<uint32_t>(in));
    const auto ndim = read_raw<uint32_t>(in);
    if (ndim == 0 || ndim > 8) throw CheckpointError("checkpoint: bad rank for " + p.name);
    int64_t count = 1;
    for (uint32_t i = 0; i < ndim; ++i) {
      const auto d = read_raw<uint32_t>(in);
      if (d == 0 || d > (1u << 24)) throw CheckpointError("checkpoint: bad dim for " + p.name);
      p.shape.push_back(static_cast<int>(d));
      count *= d;
    }
    p.w.resize(static_cast<size_t>(count));
    in.read(reinterpret_cast<char*>(p.w.data()),
            static_cast<std::streamsize>(p.w.size() * sizeof(float)));
    if (!in) throw CheckpointError("checkpoint: truncated payload for " + p.name);
    for (const float v : p.w) {
      if (!std::isfinite(v)) throw CheckpointError("checkpoint: non-finite value in " + p.name);
    }
    arrays.push_back(std::move(p));
  }

  // Infer the architecture from the stored shapes.
  EncoderConfig cfg;
  cfg.conv_widths.clear();
  int k_channels = 0;
  const Param<float>* proj_last = nullptr;
  const Param<float>* cls1 = nullptr;
  const Param<float>* cls2 = nullptr;
  for (const auto& p : arrays) {
    if (p.name.rfind("encoder.conv", 0) == 0 && p.name.find(".weight") != std::string::npos) {
      if (cfg.conv_widths.empty()) {
        const int in9 = shape_dim(p, 1);
        if (in9 % 9 != 0 || (in9 / 9) % 3 != 0) {
          throw CheckpointError("checkpoint: conv1 shape is inconsistent");
        }
        k_channels = in9 / 9 / 3;
      }
      cfg.conv_widths.push_back(shape_dim(p, 0));
    } else if (p.name == "projector.fc3.weight") {
      proj_last = &p;
    } else if (p.name == "classifier.fc1.weight") {
      cls1 = &p;
    } else if (p.name == "classifier.fc2.weight") {
      cls2 = &p;
    }
  }
  if (cfg.conv_widths.empty() || !proj_last || !cls1 || !cls2 || k_channels < 1 ||
      k_channels > 3) {
    throw CheckpointError("checkpoint: missing or inconsistent arrays");
  }
  cfg.k_frames = k_channels;
  cfg.proj_dim = shape_dim(*proj_last, 0);
  cfg.cls_widths = {shape_dim(*cls1, 0), shape_dim(*cls2, 0)};

  LoadedCheckpoint loaded{Model<float>(cfg), std::move(digest), static_cast<int>(crop)};
  loaded.model.set_init_seed(init_seed);
  auto& params = loaded.model.params();
  if (params.size() != arrays.size()) {
    throw CheckpointError("checkpoint: array count does not match the inferred architecture");
  }
  for (size_t i = 0; i < params.size(); ++i) {
    if (params[i].name != arrays[i].name || params[i].shape != arrays[i].shape) {
      throw CheckpointError("checkpoint: array " + arrays[i].name +
                            " does not match the inferred architecture");
    }
    params[i].w = std::move(arrays[i].w);
  }
  return loaded;
}

}  // namespace srdm
