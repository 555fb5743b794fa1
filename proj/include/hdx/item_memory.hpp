#pragma once

#include <cstdint>
#include <cstring>
#include <span>
#include <string>
#include <vector>

#include "hdx/errors.hpp"
#include "hdx/hypervector.hpp"
#include "hdx/image.hpp"
#include "hdx/rng.hpp"

namespace hdx {

/// Geometry and dimensionality of the random-projection encoder.
struct EncoderConfig {
  uint32_t dimension = 10000;
  int image_width = 28;
  int image_height = 28;
  uint32_t value_levels = 256;  // one level per greyscale value 0..255
  uint64_t seed = 0;

  uint32_t pixel_count() const {
    return static_cast<uint32_t>(image_width) * static_cast<uint32_t>(image_height);
  }

  void validate() const {
    if (dimension < 1) throw DomainError("EncoderConfig: dimension must be >= 1");
    if (image_width < 1 || image_height < 1)
      throw DomainError("EncoderConfig: image geometry must be positive");
    if (value_levels < 1) throw DomainError("EncoderConfig: value_levels must be >= 1");
    // Image HVs accumulate in int16 inside encode_image; |component| stays
    // below 3 * pixel_count, so cap the geometry well inside int16 range.
    if (pixel_count() > 10000)
      throw DomainError("EncoderConfig: pixel count above 10000 is unsupported");
  }

  bool operator==(const EncoderConfig&) const = default;
};

/// Seeded random position memory (one base HV per pixel index) and value
/// memory (one base HV per greyscale level). Regenerating with the same
/// seed and config yields bitwise-identical memories.
///
/// Rows are stored bipolar as int8 for the encoder's hot path; the
/// position-wise component sum is precomputed so image encoding can skip
/// zero-valued pixels (see encode_image).
class ItemMemory {
 public:
  ItemMemory() = default;

  static ItemMemory generate(const EncoderConfig& config) {
    config.validate();
    ItemMemory mem;
    mem.config_ = config;
    const size_t d = config.dimension;
    mem.position_.resize(size_t(config.pixel_count()) * d);
    mem.value_.resize(size_t(config.value_levels) * d);
    SplitMix64 rng(config.seed);
    fill_bipolar(rng, mem.position_);
    fill_bipolar(rng, mem.value_);
    mem.rebuild_position_sum();
    return mem;
  }

  /// Rebuilds a memory from raw rows (model deserialization, tests).
  static ItemMemory from_rows(const EncoderConfig& config, std::vector<int8_t> position_rows,
                              std::vector<int8_t> value_rows) {
    config.validate();
    const size_t d = config.dimension;
    if (position_rows.size() != size_t(config.pixel_count()) * d)
      throw DimensionError("ItemMemory: position row buffer size mismatch");
    if (value_rows.size() != size_t(config.value_levels) * d)
      throw DimensionError("ItemMemory: value row buffer size mismatch");
    for (int8_t c : position_rows)
      if (c != 1 && c != -1) throw DomainError("ItemMemory: position rows must be bipolar");
    for (int8_t c : value_rows)
      if (c != 1 && c != -1) throw DomainError("ItemMemory: value rows must be bipolar");
    ItemMemory mem;
    mem.config_ = config;
    mem.position_ = std::move(position_rows);
    mem.value_ = std::move(value_rows);
    mem.rebuild_position_sum();
    return mem;
  }

  const EncoderConfig& config() const { return config_; }
  uint32_t dimension() const { return config_.dimension; }
  uint64_t seed() const { return config_.seed; }

  std::span<const int8_t> position_row(uint32_t index) const {
    if (index >= config_.pixel_count())
      throw DomainError("ItemMemory: position index " + std::to_string(index) + " out of range");
    return {position_.data() + size_t(index) * config_.dimension, config_.dimension};
  }

  std::span<const int8_t> value_row(uint32_t level) const {
    if (level >= config_.value_levels)
      throw DomainError("ItemMemory: value level " + std::to_string(level) + " out of range");
    return {value_.data() + size_t(level) * config_.dimension, config_.dimension};
  }

  Hypervector position(uint32_t index) const { return to_hypervector(position_row(index)); }
  Hypervector value(uint32_t level) const { return to_hypervector(value_row(level)); }

  std::span<const int8_t> position_rows() const { return position_; }
  std::span<const int8_t> value_rows() const { return value_; }

  bool operator==(const ItemMemory& other) const {
    return config_ == other.config_ && position_ == other.position_ && value_ == other.value_;
  }

  static Hypervector to_hypervector(std::span<const int8_t> row) {
    std::vector<int32_t> out(row.size());
    for (size_t i = 0; i < row.size(); ++i) out[i] = row[i];
    return Hypervector(std::move(out));
  }

  std::span<const int16_t> position_sum() const { return position_sum_; }

 private:
  static void fill_bipolar(SplitMix64& rng, std::vector<int8_t>& buf) {
    // 64 components per draw; each bit independently maps to +1/-1.
    size_t i = 0;
    while (i < buf.size()) {
      uint64_t bits = rng.next();
      const size_t n = std::min<size_t>(64, buf.size() - i);
      for (size_t b = 0; b < n; ++b) {
        buf[i + b] = (bits & 1) ? int8_t(1) : int8_t(-1);
        bits >>= 1;
      }
      i += n;
    }
  }

  void rebuild_position_sum() {
    const size_t d = config_.dimension;
    position_sum_.assign(d, 0);
    for (size_t i = 0; i < config_.pixel_count(); ++i) {
      const int8_t* row = position_.data() + i * d;
      for (size_t k = 0; k < d; ++k) position_sum_[k] = int16_t(position_sum_[k] + row[k]);
    }
  }

  EncoderConfig config_;
  std::vector<int8_t> position_;  // pixel_count x D, row-major
  std::vector<int8_t> value_;    // value_levels x D, row-major
  std::vector<int16_t> position_sum_;
};

/// Convenience factory mirroring the one-call construction used by the CLI.
inline ItemMemory generate_item_memory(const EncoderConfig& config) {
  return ItemMemory::generate(config);
}

/// PixelHV = PositionMem[index] (*) ValueMem[value]; bipolar.
inline Hypervector encode_pixel(const ItemMemory& mem, uint32_t index, uint32_t value) {
  const auto pos = mem.position_row(index);  // range checks happen here
  const auto val = mem.value_row(value);
  std::vector<int32_t> out(pos.size());
  for (size_t i = 0; i < out.size(); ++i) out[i] = int32_t(pos[i]) * int32_t(val[i]);
  return Hypervector(std::move(out));
}

/// Image HV: bundle of the per-pixel bind(position, value) HVs, pixels taken
/// in row-major order.
///
/// Uses the algebraic split
///   sum_i pos_i*val[x_i] = val[0]*sum_i pos_i + sum_{x_i != 0} pos_i*(val[x_i]-val[0])
/// so the (typically dominant) zero-valued pixels cost one fused pass. The
/// result is component-for-component identical to the definitional
/// bundle-of-encode_pixel route, which the tests hold it to.
inline Hypervector encode_image(const ItemMemory& mem, const Image& image) {
  const auto& cfg = mem.config();
  if (!image.same_geometry(cfg.image_width, cfg.image_height))
    throw DimensionError("encode_image: image is " + std::to_string(image.width) + "x" +
                         std::to_string(image.height) + ", encoder expects " +
                         std::to_string(cfg.image_width) + "x" + std::to_string(cfg.image_height));
  const size_t d = cfg.dimension;
  const size_t npix = image.pixel_count();
  const int8_t* val0 = mem.value_rows().data();
  const int16_t* psum = mem.position_sum().data();

  std::vector<int16_t> acc(d);
  for (size_t k = 0; k < d; ++k) acc[k] = int16_t(val0[k] * psum[k]);
  for (size_t i = 0; i < npix; ++i) {
    const uint8_t px = image.pixels[i];
    if (px == 0) continue;
    if (px >= cfg.value_levels)
      throw DomainError("encode_image: pixel value " + std::to_string(px) +
                        " exceeds value_levels");
    const int8_t* __restrict pos = mem.position_rows().data() + i * d;
    const int8_t* __restrict val = mem.value_rows().data() + size_t(px) * d;
    int16_t* __restrict a = acc.data();
    for (size_t k = 0; k < d; ++k) a[k] = int16_t(a[k] + int16_t(pos[k] * (int16_t(val[k]) - int16_t(val0[k]))));
  }
  std::vector<int32_t> out(d);
  for (size_t k = 0; k < d; ++k) out[k] = acc[k];
  return Hypervector(std::move(out));
}

}  // namespace hdx
