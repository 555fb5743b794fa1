#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "hdx/errors.hpp"
#include "hdx/image.hpp"
#include "hdx/rng.hpp"

namespace hdx {

enum class PerturbationKind { kSkew, kNoise, kBrightness, kElastic };

inline const char* kind_name(PerturbationKind kind) {
  switch (kind) {
    case PerturbationKind::kSkew: return "skew";
    case PerturbationKind::kNoise: return "noise";
    case PerturbationKind::kBrightness: return "brightness";
    case PerturbationKind::kElastic: return "elastic";
  }
  return "?";
}

inline PerturbationKind kind_from_name(const std::string& name) {
  if (name == "skew") return PerturbationKind::kSkew;
  if (name == "noise") return PerturbationKind::kNoise;
  if (name == "brightness") return PerturbationKind::kBrightness;
  if (name == "elastic") return PerturbationKind::kElastic;
  throw DomainError("unknown perturbation kind: " + name);
}

/// One perturbation instance: the kind, its parameters, and the seed that
/// makes it a deterministic function of the input image.
struct PerturbationSpec {
  PerturbationKind kind = PerturbationKind::kNoise;

  double shear_mean = 0.2;  // skew: shear factor ~ Normal(mean, std)
  double shear_std = 0.1;
  uint32_t noise_count = 100;      // noise: pixels forced to 0
  double brightness_factor = 0.8;  // brightness: multiplicative, in (0, 1]
  double elastic_alpha = 34.0;     // elastic: displacement scale
  double elastic_sigma = 4.0;      // elastic: Gaussian smoothing width

  uint64_t rng_seed = 0;

  void validate() const {
    switch (kind) {
      case PerturbationKind::kBrightness:
        if (!(brightness_factor > 0.0 && brightness_factor <= 1.0))
          throw DomainError("brightness factor must lie in (0, 1]");
        break;
      case PerturbationKind::kElastic:
        if (!(elastic_sigma > 0.0)) throw DomainError("elastic sigma must be > 0");
        if (!(elastic_alpha >= 0.0)) throw DomainError("elastic alpha must be >= 0");
        break;
      case PerturbationKind::kSkew:
        if (!(shear_std >= 0.0)) throw DomainError("skew stddev must be >= 0");
        break;
      case PerturbationKind::kNoise:
        break;
    }
  }

  /// Same spec re-rooted at a derived seed (per-image streams).
  PerturbationSpec with_seed(uint64_t seed) const {
    PerturbationSpec s = *this;
    s.rng_seed = seed;
    return s;
  }
};

namespace detail {

inline uint8_t round_clamp(double v) {
  const double r = std::floor(v + 0.5);  // round half up
  return uint8_t(std::clamp(r, 0.0, 255.0));
}

/// Bilinear sample with border replication. Factored lerp form, so integer
/// coordinates and constant images reproduce pixel values exactly.
inline double bilinear_replicate(const Image& img, double y, double x) {
  const auto clamp_r = [&](int r) { return std::clamp(r, 0, img.height - 1); };
  const auto clamp_c = [&](int c) { return std::clamp(c, 0, img.width - 1); };
  const int y0 = int(std::floor(y));
  const int x0 = int(std::floor(x));
  const double fy = y - y0;
  const double fx = x - x0;
  const double v00 = img.at(clamp_r(y0), clamp_c(x0));
  const double v01 = img.at(clamp_r(y0), clamp_c(x0 + 1));
  const double v10 = img.at(clamp_r(y0 + 1), clamp_c(x0));
  const double v11 = img.at(clamp_r(y0 + 1), clamp_c(x0 + 1));
  const double top = v00 + fx * (v01 - v00);
  const double bot = v10 + fx * (v11 - v10);
  return top + fy * (bot - top);
}

/// 1-D Gaussian smoothing along rows or columns, zero padding outside the
/// field, kernel truncated at 3 sigma and normalized.
inline void gaussian_smooth(std::vector<double>& field, int width, int height, double sigma) {
  const int radius = std::max(1, int(std::ceil(3.0 * sigma)));
  std::vector<double> kernel(2 * radius + 1);
  double sum = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    kernel[i + radius] = std::exp(-0.5 * (double(i) / sigma) * (double(i) / sigma));
    sum += kernel[i + radius];
  }
  for (double& k : kernel) k /= sum;

  std::vector<double> tmp(field.size());
  // horizontal pass
  for (int r = 0; r < height; ++r)
    for (int c = 0; c < width; ++c) {
      double acc = 0.0;
      for (int i = -radius; i <= radius; ++i) {
        const int cc = c + i;
        if (cc < 0 || cc >= width) continue;
        acc += kernel[i + radius] * field[size_t(r) * width + cc];
      }
      tmp[size_t(r) * width + c] = acc;
    }
  // vertical pass
  for (int r = 0; r < height; ++r)
    for (int c = 0; c < width; ++c) {
      double acc = 0.0;
      for (int i = -radius; i <= radius; ++i) {
        const int rr = r + i;
        if (rr < 0 || rr >= height) continue;
        acc += kernel[i + radius] * tmp[size_t(rr) * width + c];
      }
      field[size_t(r) * width + c] = acc;
    }
}

}  // namespace detail

/// Horizontal shear: output(r, c) samples input(r, c - s*r) with s drawn from
/// Normal(shear_mean, shear_std). Row 0 is fixed; displacement grows with row
/// depth.
inline Image skew(const Image& image, const PerturbationSpec& spec) {
  spec.validate();
  SplitMix64 rng(spec.rng_seed);
  const double s = rng.next_normal(spec.shear_mean, spec.shear_std);
  Image out(image.width, image.height);
  out.label = image.label;
  out.id = image.id;
  for (int r = 0; r < image.height; ++r)
    for (int c = 0; c < image.width; ++c)
      out.at(r, c) = detail::round_clamp(detail::bilinear_replicate(image, r, c - s * r));
  return out;
}

/// Forces `noise_count` distinct uniformly chosen pixels to 0.
inline Image add_noise(const Image& image, const PerturbationSpec& spec) {
  spec.validate();
  SplitMix64 rng(spec.rng_seed);
  const uint32_t npix = uint32_t(image.pixel_count());
  const auto hits = rng.sample_indices(npix, std::min(spec.noise_count, npix));
  Image out = image;
  for (uint32_t i : hits) out.pixels[i] = 0;
  return out;
}

/// pixel <- floor(pixel * factor); multiplicative, keeps the background at 0.
inline Image brightness(const Image& image, const PerturbationSpec& spec) {
  spec.validate();
  Image out = image;
  for (auto& px : out.pixels)
    px = uint8_t(std::clamp(std::floor(double(px) * spec.brightness_factor), 0.0, 255.0));
  return out;
}

/// Elastic deformation: per-pixel displacement fields dx, dy ~ Uniform(-1, 1)
/// smoothed by a Gaussian of width sigma and scaled by alpha; resampled with
/// bilinear interpolation and border replication.
inline Image elastic_transform(const Image& image, const PerturbationSpec& spec) {
  spec.validate();
  SplitMix64 rng(spec.rng_seed);
  const size_t n = image.pixel_count();
  std::vector<double> dx(n), dy(n);
  for (size_t i = 0; i < n; ++i) dx[i] = 2.0 * rng.next_double() - 1.0;
  for (size_t i = 0; i < n; ++i) dy[i] = 2.0 * rng.next_double() - 1.0;
  detail::gaussian_smooth(dx, image.width, image.height, spec.elastic_sigma);
  detail::gaussian_smooth(dy, image.width, image.height, spec.elastic_sigma);

  Image out(image.width, image.height);
  out.label = image.label;
  out.id = image.id;
  for (int r = 0; r < image.height; ++r)
    for (int c = 0; c < image.width; ++c) {
      const size_t i = size_t(r) * image.width + c;
      const double sy = r + spec.elastic_alpha * dy[i];
      const double sx = c + spec.elastic_alpha * dx[i];
      out.at(r, c) = detail::round_clamp(detail::bilinear_replicate(image, sy, sx));
    }
  return out;
}

inline Image perturb(const Image& image, const PerturbationSpec& spec) {
  switch (spec.kind) {
    case PerturbationKind::kSkew: return skew(image, spec);
    case PerturbationKind::kNoise: return add_noise(image, spec);
    case PerturbationKind::kBrightness: return brightness(image, spec);
    case PerturbationKind::kElastic: return elastic_transform(image, spec);
  }
  throw DomainError("perturb: bad kind");
}

/// The paper's four perturbations with default parameters.
inline std::vector<PerturbationSpec> default_perturbations(uint64_t rng_seed = 0) {
  std::vector<PerturbationSpec> specs(4);
  specs[0].kind = PerturbationKind::kSkew;
  specs[1].kind = PerturbationKind::kNoise;
  specs[2].kind = PerturbationKind::kBrightness;
  specs[3].kind = PerturbationKind::kElastic;
  for (auto& s : specs) s.rng_seed = rng_seed;
  return specs;
}

}  // namespace hdx
