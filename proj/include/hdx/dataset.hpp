#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "hdx/errors.hpp"
#include "hdx/image.hpp"
#include "hdx/io.hpp"
#include "hdx/rng.hpp"

namespace hdx {

/// Labeled image collection. Image ids are "<name>-<zero padded file index>"
/// so provenance survives splitting and perturbation.
struct Dataset {
  std::string name;
  std::vector<Image> images;

  size_t size() const { return images.size(); }

  std::vector<uint8_t> labels() const {
    std::vector<uint8_t> out(images.size());
    for (size_t i = 0; i < images.size(); ++i) {
      if (!images[i].label) throw DomainError("dataset " + name + ": unlabeled image " +
                                              images[i].id);
      out[i] = *images[i].label;
    }
    return out;
  }
};

struct SplitConfig {
  double validation_fraction = 0.5;
  std::optional<uint64_t> shuffle_seed;  // nullopt: in-order tail split
};

namespace detail {
inline std::string image_id(const std::string& dataset_name, size_t index) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%05zu", index);
  return dataset_name + "-" + buf;
}
}  // namespace detail

/// Parses an IDX image/label file pair (the MNIST distribution format).
/// Images: big-endian magic 2051, dims [count, rows, cols]. Labels:
/// magic 2049, dims [count]. Gzip-compressed files are accepted.
inline Dataset load_idx(const std::filesystem::path& images_path,
                        const std::filesystem::path& labels_path,
                        const std::string& name) {
  const auto image_bytes = read_file_bytes(images_path);
  const auto label_bytes = read_file_bytes(labels_path);

  ByteReader ir(image_bytes, images_path.string());
  const uint32_t image_magic = ir.u32be("image magic");
  if (image_magic != 2051)
    throw FormatError(images_path.string() + ": unexpected magic " + std::to_string(image_magic) +
                      " at byte offset 0 (want 2051)");
  const uint32_t count = ir.u32be("image count");
  const uint32_t rows = ir.u32be("row count");
  const uint32_t cols = ir.u32be("column count");
  if (rows == 0 || cols == 0)
    throw FormatError(images_path.string() + ": zero image dimensions at byte offset 8");

  ByteReader lr(label_bytes, labels_path.string());
  const uint32_t label_magic = lr.u32be("label magic");
  if (label_magic != 2049)
    throw FormatError(labels_path.string() + ": unexpected magic " + std::to_string(label_magic) +
                      " at byte offset 0 (want 2049)");
  const uint32_t label_count = lr.u32be("label count");
  if (label_count != count)
    throw FormatError(labels_path.string() + ": label count " + std::to_string(label_count) +
                      " does not match image count " + std::to_string(count));

  Dataset ds;
  ds.name = name;
  ds.images.reserve(count);
  const size_t npix = size_t(rows) * cols;
  for (uint32_t i = 0; i < count; ++i) {
    const auto px = ir.bytes(npix, "image pixels");
    Image img(int(cols), int(rows));
    std::copy(px.begin(), px.end(), img.pixels.begin());
    img.id = detail::image_id(name, i);
    ds.images.push_back(std::move(img));
  }
  const auto labels = lr.bytes(count, "labels");
  for (uint32_t i = 0; i < count; ++i) {
    if (labels[i] > 9)
      throw FormatError(labels_path.string() + ": label value " + std::to_string(labels[i]) +
                        " out of range at byte offset " + std::to_string(8 + i));
    ds.images[i].label = labels[i];
  }
  return ds;
}

/// Splits into (train, validation). Validation takes floor(fraction * count)
/// images; without a shuffle seed it is the tail of the in-file order, with
/// one it follows a seeded Fisher-Yates shuffle. Outputs are disjoint and
/// cover the input.
inline std::pair<Dataset, Dataset> split(const Dataset& dataset, const SplitConfig& config) {
  if (dataset.images.empty()) throw DomainError("split: empty dataset");
  if (!(config.validation_fraction > 0.0 && config.validation_fraction < 1.0))
    throw DomainError("split: validation_fraction must lie in (0, 1)");
  const size_t n = dataset.images.size();
  const size_t n_val = size_t(config.validation_fraction * double(n));
  const size_t n_train = n - n_val;

  std::vector<uint32_t> order(n);
  for (size_t i = 0; i < n; ++i) order[i] = uint32_t(i);
  if (config.shuffle_seed) {
    SplitMix64 rng(*config.shuffle_seed);
    rng.shuffle(order);
  }

  Dataset train{dataset.name + "/train", {}};
  Dataset validation{dataset.name + "/validation", {}};
  train.images.reserve(n_train);
  validation.images.reserve(n_val);
  for (size_t i = 0; i < n_train; ++i) train.images.push_back(dataset.images[order[i]]);
  for (size_t i = n_train; i < n; ++i) validation.images.push_back(dataset.images[order[i]]);
  return {std::move(train), std::move(validation)};
}

}  // namespace hdx
