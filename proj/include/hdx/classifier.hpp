#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hdx/errors.hpp"
#include "hdx/hypervector.hpp"
#include "hdx/image.hpp"
#include "hdx/item_memory.hpp"
#include "hdx/parallel.hpp"

namespace hdx {

/// One accumulated hypervector per class; the trained parameters of an HDC
/// classifier. Class HVs start at zero. Squared norms are maintained
/// incrementally so similarity scoring never rescans the memory.
class AssociativeMemory {
 public:
  AssociativeMemory() = default;
  AssociativeMemory(uint32_t num_classes, uint32_t dimension)
      : num_classes_(num_classes),
        dimension_(dimension),
        data_(size_t(num_classes) * dimension, 0),
        norm2_(num_classes, 0) {}

  uint32_t num_classes() const { return num_classes_; }
  uint32_t dimension() const { return dimension_; }

  std::span<const int32_t> class_hv(uint32_t c) const {
    check_class(c);
    return {data_.data() + size_t(c) * dimension_, dimension_};
  }

  Hypervector class_hypervector(uint32_t c) const {
    const auto row = class_hv(c);
    return Hypervector(std::vector<int32_t>(row.begin(), row.end()));
  }

  int64_t norm2(uint32_t c) const {
    check_class(c);
    return norm2_[c];
  }

  template <typename T>
  void add(uint32_t c, std::span<const T> hv) {
    apply(c, hv, +1);
  }
  template <typename T>
  void subtract(uint32_t c, std::span<const T> hv) {
    apply(c, hv, -1);
  }

  /// Raw row access for deserialization.
  void load_class(uint32_t c, std::span<const int32_t> hv) {
    check_class(c);
    check_dim(hv.size());
    int32_t* row = data_.data() + size_t(c) * dimension_;
    int64_t n2 = 0;
    for (size_t k = 0; k < hv.size(); ++k) {
      row[k] = hv[k];
      n2 += int64_t(hv[k]) * hv[k];
    }
    norm2_[c] = n2;
  }

  bool operator==(const AssociativeMemory& other) const {
    return num_classes_ == other.num_classes_ && dimension_ == other.dimension_ &&
           data_ == other.data_;
  }

 private:
  template <typename T>
  void apply(uint32_t c, std::span<const T> hv, int sign) {
    check_class(c);
    check_dim(hv.size());
    int32_t* __restrict row = data_.data() + size_t(c) * dimension_;
    const T* __restrict h = hv.data();
    int64_t cross = 0, hn2 = 0;
    for (uint32_t k = 0; k < dimension_; ++k) {
      cross += int64_t(row[k]) * h[k];
      hn2 += int64_t(h[k]) * h[k];
      row[k] += sign * int32_t(h[k]);
    }
    norm2_[c] += 2 * sign * cross + hn2;
  }

  void check_class(uint32_t c) const {
    if (c >= num_classes_)
      throw DomainError("AssociativeMemory: class " + std::to_string(c) + " out of range");
  }
  void check_dim(size_t n) const {
    if (n != dimension_) throw DimensionError("AssociativeMemory: hypervector dimension mismatch");
  }

  uint32_t num_classes_ = 0;
  uint32_t dimension_ = 0;
  std::vector<int32_t> data_;   // num_classes x D
  std::vector<int64_t> norm2_;  // per class
};

/// Seeded item memory plus associative memory: one member of the ensemble
/// under test. The seed uniquely identifies the classifier.
class HdcClassifier {
 public:
  explicit HdcClassifier(const EncoderConfig& config, uint32_t num_classes = 10)
      : item_memory_(ItemMemory::generate(config)), am_(num_classes, config.dimension) {}

  HdcClassifier(ItemMemory item_memory, AssociativeMemory am)
      : item_memory_(std::move(item_memory)), am_(std::move(am)) {
    if (item_memory_.dimension() != am_.dimension())
      throw DimensionError("HdcClassifier: item memory and AM dimensions differ");
  }

  const EncoderConfig& config() const { return item_memory_.config(); }
  uint64_t seed() const { return item_memory_.seed(); }
  uint32_t dimension() const { return item_memory_.dimension(); }
  uint32_t num_classes() const { return am_.num_classes(); }
  const ItemMemory& item_memory() const { return item_memory_; }
  const AssociativeMemory& am() const { return am_; }
  AssociativeMemory& am() { return am_; }

  Hypervector encode(const Image& image) const { return encode_image(item_memory_, image); }

  /// Adds each image HV to its label's class HV. Single pass; the result is
  /// independent of the order of the training sequence.
  void train(std::span<const Image> images, std::span<const uint8_t> labels,
             unsigned threads = hardware_threads()) {
    if (images.size() != labels.size())
      throw DimensionError("train: images and labels differ in length");
    for (uint8_t l : labels)
      if (l >= am_.num_classes())
        throw DomainError("train: label " + std::to_string(int(l)) + " out of range");
    // Encode in parallel chunks, accumulate serially (integer adds commute,
    // so chunking does not change the result).
    constexpr size_t kChunk = 256;
    std::vector<Hypervector> hvs(std::min(images.size(), kChunk));
    for (size_t base = 0; base < images.size(); base += kChunk) {
      const size_t n = std::min(kChunk, images.size() - base);
      parallel_for(
          n, [&](size_t i) { hvs[i] = encode(images[base + i]); }, threads);
      for (size_t i = 0; i < n; ++i) {
        const Hypervector& hv = hvs[i];
        am_.add(labels[base + i], hv.components());
      }
    }
  }

  /// Trains from images carrying their own labels.
  void train(std::span<const Image> images, unsigned threads = hardware_threads()) {
    std::vector<uint8_t> labels(images.size());
    for (size_t i = 0; i < images.size(); ++i) {
      if (!images[i].label) throw DomainError("train: image " + images[i].id + " has no label");
      labels[i] = *images[i].label;
    }
    train(images, labels, threads);
  }

  /// Per-class cosine similarity of an already-encoded query.
  template <typename T>
  std::vector<double> similarities_encoded(std::span<const T> query, int64_t query_norm2) const {
    std::vector<double> sims(am_.num_classes());
    for (uint32_t c = 0; c < am_.num_classes(); ++c) {
      const int64_t cn2 = am_.norm2(c);
      if (query_norm2 == 0 || cn2 == 0) {
        sims[c] = kMinSimilarity;
        continue;
      }
      const int64_t d = dot(query, am_.class_hv(c));
      sims[c] = double(d) / (std::sqrt(double(query_norm2)) * std::sqrt(double(cn2)));
    }
    return sims;
  }

  std::vector<double> similarities(const Image& image) const {
    const Hypervector q = encode(image);
    return similarities_encoded(q.components(), dot(q.components(), q.components()));
  }

  /// Argmax class by cosine similarity; ties break to the lowest class index.
  template <typename T>
  uint8_t predict_encoded(std::span<const T> query, int64_t query_norm2) const {
    uint32_t best = 0;
    double best_sim = -2.0;
    for (uint32_t c = 0; c < am_.num_classes(); ++c) {
      const int64_t cn2 = am_.norm2(c);
      double sim;
      if (query_norm2 == 0 || cn2 == 0) {
        sim = kMinSimilarity;
      } else {
        sim = double(dot(query, am_.class_hv(c))) /
              (std::sqrt(double(query_norm2)) * std::sqrt(double(cn2)));
      }
      if (sim > best_sim) {
        best_sim = sim;
        best = c;
      }
    }
    return uint8_t(best);
  }

  uint8_t predict(const Image& image) const {
    const Hypervector q = encode(image);
    return predict_encoded(q.components(), dot(q.components(), q.components()));
  }

  /// Fraction of images whose prediction matches the label.
  double evaluate(std::span<const Image> images, std::span<const uint8_t> labels,
                  unsigned threads = hardware_threads()) const {
    if (images.empty()) throw DomainError("evaluate: empty dataset");
    if (images.size() != labels.size())
      throw DimensionError("evaluate: images and labels differ in length");
    std::vector<uint8_t> pred(images.size());
    parallel_for(
        images.size(), [&](size_t i) { pred[i] = predict(images[i]); }, threads);
    size_t correct = 0;
    for (size_t i = 0; i < images.size(); ++i)
      if (pred[i] == labels[i]) ++correct;
    return double(correct) / double(images.size());
  }

  double evaluate(std::span<const Image> images, unsigned threads = hardware_threads()) const {
    std::vector<uint8_t> labels(images.size());
    for (size_t i = 0; i < images.size(); ++i) {
      if (!images[i].label) throw DomainError("evaluate: image " + images[i].id + " has no label");
      labels[i] = *images[i].label;
    }
    return evaluate(images, labels, threads);
  }

 private:
  ItemMemory item_memory_;
  AssociativeMemory am_;
};

/// Dense matrix of encoded image HVs for one classifier, with per-row squared
/// norms. Item memories never change, so these caches stay valid across
/// retraining epochs. Rows narrow to int16: image HV components are bounded
/// by the pixel count, which EncoderConfig keeps inside int16 range.
class EncodedBatch {
 public:
  EncodedBatch() = default;

  static EncodedBatch build(const HdcClassifier& classifier, std::span<const Image> images,
                            unsigned threads = hardware_threads()) {
    EncodedBatch batch;
    batch.dimension_ = classifier.dimension();
    batch.rows_ = images.size();
    batch.data_.resize(images.size() * size_t(batch.dimension_));
    batch.norm2_.resize(images.size());
    parallel_for(
        images.size(),
        [&](size_t i) {
          const Hypervector hv = classifier.encode(images[i]);
          int16_t* out = batch.data_.data() + i * size_t(batch.dimension_);
          int64_t n2 = 0;
          for (uint32_t k = 0; k < batch.dimension_; ++k) {
            out[k] = int16_t(hv[k]);
            n2 += int64_t(hv[k]) * hv[k];
          }
          batch.norm2_[i] = n2;
        },
        threads);
    return batch;
  }

  size_t rows() const { return rows_; }
  std::span<const int16_t> row(size_t i) const {
    return {data_.data() + i * size_t(dimension_), dimension_};
  }
  int64_t norm2(size_t i) const { return norm2_[i]; }

  /// Widened copy of a row, for feeding AssociativeMemory updates.
  std::vector<int32_t> row_i32(size_t i) const {
    const auto r = row(i);
    return std::vector<int32_t>(r.begin(), r.end());
  }

 private:
  uint32_t dimension_ = 0;
  size_t rows_ = 0;
  std::vector<int16_t> data_;
  std::vector<int64_t> norm2_;
};

}  // namespace hdx
