#pragma once

#include <algorithm>
#include <concepts>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hdx/errors.hpp"
#include "hdx/image.hpp"
#include "hdx/parallel.hpp"
#include "hdx/perturbations.hpp"
#include "hdx/rng.hpp"

namespace hdx {

/// The only surface differential testing may touch: a label for an image and
/// a seed identifying the classifier. Keeping this a concept (rather than a
/// base class with internals) makes the blackbox property a compile-time
/// fact: this header never sees item memories or associative memories.
template <typename C>
concept Predictor = requires(const C& c, const Image& img) {
  { c.predict(img) } -> std::convertible_to<uint8_t>;
  { c.seed() } -> std::convertible_to<uint64_t>;
};

struct Provenance {
  enum Type { kOriginal, kPerturbed };
  Type type = kOriginal;
  PerturbationKind kind = PerturbationKind::kNoise;  // meaningful when perturbed
  std::string parent_image_id;

  static Provenance original() { return {}; }
  static Provenance perturbed(PerturbationKind k, std::string parent) {
    return {kPerturbed, k, std::move(parent)};
  }
};

/// One input on which the ensemble disagrees, with every classifier's vote.
struct DiscrepancyRecord {
  Image image;
  std::vector<std::pair<uint64_t, uint8_t>> predictions;  // (seed, label), ensemble order
  std::optional<uint8_t> true_label;
  Provenance provenance;

  const std::string& image_id() const { return image.id; }

  bool disagrees() const {
    for (size_t i = 1; i < predictions.size(); ++i)
      if (predictions[i].second != predictions[0].second) return true;
    return false;
  }
};

struct DiffTestReport {
  size_t discrepancy_count = 0;  // == records.size()
  std::vector<DiscrepancyRecord> records;
  size_t generated_count = 0;  // records with perturbed provenance
  double elapsed_seconds = 0.0;
};

namespace detail {

template <Predictor C>
std::vector<std::pair<uint64_t, uint8_t>> vote(std::span<const C> ensemble, const Image& image) {
  std::vector<std::pair<uint64_t, uint8_t>> preds;
  preds.reserve(ensemble.size());
  for (const C& c : ensemble) preds.emplace_back(c.seed(), c.predict(image));
  return preds;
}

inline bool all_equal(std::span<const std::pair<uint64_t, uint8_t>> preds) {
  for (size_t i = 1; i < preds.size(); ++i)
    if (preds[i].second != preds[0].second) return false;
  return true;
}

inline void require_ensemble(size_t n) {
  if (n < 2) throw ConfigError("differential testing requires at least 2 classifiers");
}

/// Sub-stream seed for one (image, spec slot) pair. Order-independent, so
/// parallel and serial runs perturb identically.
inline uint64_t perturbation_seed(uint64_t run_seed, const std::string& image_id,
                                  size_t spec_index, uint64_t spec_seed) {
  return seed_mix({run_seed, fnv1a(image_id), uint64_t(spec_index), spec_seed});
}

}  // namespace detail

/// Partitions `images` by ensemble agreement: an image lands in the
/// discrepancy list iff not every classifier predicts the same label.
/// Both outputs preserve the input order.
template <Predictor C>
std::pair<std::vector<DiscrepancyRecord>, std::vector<Image>> discrepancies(
    std::span<const C> ensemble, std::span<const Image> images,
    unsigned threads = hardware_threads()) {
  detail::require_ensemble(ensemble.size());
  std::vector<std::vector<std::pair<uint64_t, uint8_t>>> votes(images.size());
  parallel_for(
      images.size(), [&](size_t i) { votes[i] = detail::vote(ensemble, images[i]); }, threads);

  std::vector<DiscrepancyRecord> dis;
  std::vector<Image> non_dis;
  for (size_t i = 0; i < images.size(); ++i) {
    if (detail::all_equal(votes[i])) {
      non_dis.push_back(images[i]);
    } else {
      dis.push_back(DiscrepancyRecord{images[i], std::move(votes[i]), images[i].label,
                                      Provenance::original()});
    }
  }
  return {std::move(dis), std::move(non_dis)};
}

/// Re-votes a set of existing records, keeping only those that still induce
/// disagreement. Predictions are refreshed; provenance and labels carry over.
template <Predictor C>
std::vector<DiscrepancyRecord> still_disagreeing(std::span<const C> ensemble,
                                                 std::span<const DiscrepancyRecord> records,
                                                 unsigned threads = hardware_threads()) {
  detail::require_ensemble(ensemble.size());
  std::vector<std::vector<std::pair<uint64_t, uint8_t>>> votes(records.size());
  parallel_for(
      records.size(), [&](size_t i) { votes[i] = detail::vote(ensemble, records[i].image); },
      threads);
  std::vector<DiscrepancyRecord> out;
  for (size_t i = 0; i < records.size(); ++i) {
    if (detail::all_equal(votes[i])) continue;
    DiscrepancyRecord r = records[i];
    r.predictions = std::move(votes[i]);
    out.push_back(std::move(r));
  }
  return out;
}

/// Perturbs every agreed-upon image with each spec and keeps the variants
/// the ensemble disagrees on. A perturbed image inherits its parent's
/// ground-truth label and takes the id "<parent>_<kind>". Deterministic for
/// a given rng_seed; records come back ordered by (image id, spec slot).
template <Predictor C>
std::vector<DiscrepancyRecord> generate_difference_inducing(
    std::span<const C> ensemble, std::span<const Image> non_dis,
    std::span<const PerturbationSpec> perturbations, uint64_t rng_seed,
    unsigned threads = hardware_threads()) {
  detail::require_ensemble(ensemble.size());
  for (const Image& img : non_dis)
    if (!img.label)
      throw DomainError("generate_difference_inducing: image " + img.id + " has no true label");

  std::vector<std::vector<DiscrepancyRecord>> found(non_dis.size());
  parallel_for(
      non_dis.size(),
      [&](size_t i) {
        const Image& parent = non_dis[i];
        for (size_t s = 0; s < perturbations.size(); ++s) {
          const auto& spec = perturbations[s];
          const uint64_t seed =
              detail::perturbation_seed(rng_seed, parent.id, s, spec.rng_seed);
          Image variant = perturb(parent, spec.with_seed(seed));
          variant.id = parent.id + "_" + kind_name(spec.kind);
          variant.label = parent.label;
          auto preds = detail::vote(ensemble, variant);
          if (detail::all_equal(preds)) continue;
          found[i].push_back(DiscrepancyRecord{std::move(variant), std::move(preds), parent.label,
                                               Provenance::perturbed(spec.kind, parent.id)});
        }
      },
      threads);

  std::vector<DiscrepancyRecord> out;
  for (auto& per_image : found)
    for (auto& rec : per_image) out.push_back(std::move(rec));
  std::stable_sort(out.begin(), out.end(),
                   [](const DiscrepancyRecord& a, const DiscrepancyRecord& b) {
                     return a.image_id() < b.image_id();
                   });
  return out;
}

struct RobustnessResult {
  size_t products = 0;       // |images| x |perturbations|
  size_t disagreements = 0;  // products the ensemble splits on; lower is more robust
  std::vector<size_t> per_spec;

  double disagreement_rate() const {
    return products == 0 ? 0.0 : double(disagreements) / double(products);
  }
};

/// Counts (image, perturbation) products that split the ensemble, over
/// images it agrees on unperturbed. Lower is more robust.
template <Predictor C>
RobustnessResult measure_robustness(std::span<const C> ensemble,
                                    std::span<const Image> agreed_test_images,
                                    std::span<const PerturbationSpec> perturbations,
                                    uint64_t rng_seed, unsigned threads = hardware_threads()) {
  detail::require_ensemble(ensemble.size());
  RobustnessResult result;
  result.products = agreed_test_images.size() * perturbations.size();
  result.per_spec.assign(perturbations.size(), 0);

  std::vector<std::vector<uint8_t>> split_flags(agreed_test_images.size());
  parallel_for(
      agreed_test_images.size(),
      [&](size_t i) {
        const Image& parent = agreed_test_images[i];
        split_flags[i].assign(perturbations.size(), 0);
        for (size_t s = 0; s < perturbations.size(); ++s) {
          const auto& spec = perturbations[s];
          const uint64_t seed =
              detail::perturbation_seed(rng_seed, parent.id, s, spec.rng_seed);
          const Image variant = perturb(parent, spec.with_seed(seed));
          if (!detail::all_equal(std::span(detail::vote(ensemble, variant))))
            split_flags[i][s] = 1;
        }
      },
      threads);

  for (const auto& flags : split_flags)
    for (size_t s = 0; s < flags.size(); ++s)
      if (flags[s]) {
        ++result.disagreements;
        ++result.per_spec[s];
      }
  return result;
}

}  // namespace hdx
