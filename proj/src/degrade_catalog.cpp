// Copyright 2026 The camrobust Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <cmath>
#include <string>

#include "camrobust/degrade.hpp"

namespace camrobust {

namespace {

constexpr FactorInfo kCatalog[kFactorCount] = {
    {Factor::kLowLight, "low_light", 1, "light", false, false, {1, 2, 3}, "severity index"},
    {Factor::kNightLight, "night_light", 1, "light", false, true, {1, 2, 3}, "severity index"},
    {Factor::kExtremeLight, "extreme_light", 1, "light", false, true, {1, 2, 3}, "severity index"},
    {Factor::kStrongLight, "strong_light", 1, "light", false, false, {1, 3, 5}, "brightness level"},
    {Factor::kRain, "rain", 2, "weather", true, true, {50, 100, 200}, "rain rate mm/hr"},
    {Factor::kFog, "fog", 2, "weather", true, false, {0.005, 0.01, 0.02}, "attenuation 1/m"},
    {Factor::kSnow, "snow", 2, "weather", true, false, {1, 2, 3}, "flake size class"},
    {Factor::kMud, "mud", 3, "optic obstruction", false, false, {12, 24, 36}, "kernel size px"},
    {Factor::kDroplets, "droplets", 3, "optic obstruction", false, false, {2, 3, 4}, "droplet level"},
    {Factor::kJpeg, "jpeg", 4, "isp", false, false, {20, 50, 80}, "compression strength"},
    {Factor::kSharpen, "sharpen", 4, "isp", false, false, {0.25, 0.5, 0.75}, "alpha"},
    {Factor::kNoDemosaic, "no_demosaic", 4, "isp", false, false, {1, 1, 1}, "none"},
    {Factor::kNoBayer, "no_bayer", 4, "isp", false, false, {1, 1, 1}, "none"},
    {Factor::kGaussian, "gaussian", 5, "sensor noise", false, false, {1, 3, 5}, "corruption level"},
    {Factor::kUniform, "uniform", 5, "sensor noise", false, false, {25, 50, 75}, "std dev /255"},
    {Factor::kImpulse, "impulse", 5, "sensor noise", false, false, {1, 3, 5}, "corruption level"},
    {Factor::kPoisson, "poisson", 5, "sensor noise", false, false, {5, 10, 15}, "lambda"},
    {Factor::kDefocus, "defocus", 6, "blur", false, false, {1, 3, 5}, "corruption level"},
    {Factor::kMotion, "motion", 6, "blur", false, false, {1, 3, 5}, "corruption level"},
};

double get(const ParamMap& p, const char* key) { return p.at(key); }

}  // namespace

std::span<const FactorInfo> factor_catalog() { return kCatalog; }

const FactorInfo& factor_info(Factor factor) {
  return kCatalog[static_cast<int>(factor)];
}

Factor parse_factor(std::string_view name) {
  for (const auto& info : kCatalog) {
    if (info.name == name) return info.factor;
  }
  throw CatalogError("unknown degradation factor '" + std::string(name) + "'");
}

void check_severity(int severity) {
  if (severity < 1 || severity > kSeverityLevels) {
    throw CatalogError("severity must be 1, 2 or 3, got " + std::to_string(severity));
  }
}

namespace {

ParamMap defaults(const DegradationSpec& spec) {
  const int s = spec.severity;
  const int i = s - 1;
  switch (spec.factor) {
    case Factor::kLowLight: {
      const auto p = lowlight_params(s);
      return {{"alpha", p.alpha},
              {"iterations", p.iterations},
              {"highlight_threshold", p.highlight_threshold}};
    }
    case Factor::kNightLight:
    case Factor::kExtremeLight: {
      const auto g = nightlight_params(s);
      ParamMap p{{"alpha", g.curve.alpha},
                 {"iterations", g.curve.iterations},
                 {"sources", g.sources},
                 {"halo_gain", g.halo_gain},
                 {"streak_gain", g.streak_gain}};
      if (spec.factor == Factor::kExtremeLight) {
        const auto l = lowlight_params(s);
        p["final_alpha"] = l.alpha;
        p["final_iterations"] = l.iterations;
      }
      return p;
    }
    case Factor::kStrongLight:
      return {{"shift", 0.1 + 0.2 * i}};
    case Factor::kRain: {
      const auto r = rain_params(s);
      return {{"rate", r.rate}, {"beta", r.veil_beta}, {"opacity", r.opacity}};
    }
    case Factor::kFog:
      return {{"beta", kFogBeta[i]}, {"airlight", kFogAirlight[0]}};
    case Factor::kSnow:
      return {{"beta", kSnowBeta[i]}, {"density", 1.0}};
    case Factor::kMud: {
      const auto m = mud_params(s);
      return {{"kernel", m.kernel_size},
              {"intensity", m.intensity},
              {"threshold", m.threshold}};
    }
    case Factor::kDroplets: {
      const auto d = droplet_params(s);
      return {{"count", d.count}, {"magnification", d.magnification}};
    }
    case Factor::kJpeg:
      return {{"quality", kJpegQuality[i]}};
    case Factor::kSharpen:
      return {{"alpha", kSharpenAlpha[i]}, {"lightness", 1.0}};
    case Factor::kNoDemosaic:
    case Factor::kNoBayer:
      return {};
    case Factor::kGaussian:
      return {{"sigma", noise_level(NoiseKind::kGaussian, s)}};
    case Factor::kUniform:
      return {{"sigma", noise_level(NoiseKind::kUniform, s)}};
    case Factor::kImpulse:
      return {{"fraction", noise_level(NoiseKind::kImpulse, s)}};
    case Factor::kPoisson:
      return {{"lambda", noise_level(NoiseKind::kPoisson, s)}};
    case Factor::kDefocus:
      return {{"radius", kDefocus[i].radius}, {"alias_blur", kDefocus[i].alias_blur}};
    case Factor::kMotion:
      return {{"length", kMotion[i].length},
              {"sigma", kMotion[i].sigma},
              {"angle", motion_angle_deg(spec.seed)}};
  }
  throw CatalogError("unhandled factor");
}

const DepthMap& require_depth(const ImageBuffer& img, const DepthMap* depth,
                              Factor factor) {
  if (!depth) {
    throw ValidationError(std::string(factor_info(factor).name) +
                          " requires a depth map");
  }
  if (!depth->matches(img)) {
    throw DimensionError("depth map size does not match the image");
  }
  return *depth;
}

}  // namespace

ParamMap resolve_parameters(const DegradationSpec& spec) {
  check_severity(spec.severity);
  ParamMap params = defaults(spec);
  for (const auto& [key, value] : spec.overrides) {
    auto it = params.find(key);
    if (it == params.end()) {
      throw CatalogError("factor " + std::string(factor_info(spec.factor).name) +
                         " has no parameter '" + key + "'");
    }
    if (!std::isfinite(value)) throw CatalogError("override '" + key + "' is not finite");
    it->second = value;
  }
  // The rain veil follows the rate unless set explicitly.
  if (spec.factor == Factor::kRain && spec.overrides.count("rate") &&
      !spec.overrides.count("beta")) {
    params["beta"] = 0.001 * params["rate"] / 50.0;
  }
  return params;
}

DegradationSpec task_spec(std::uint64_t global_seed, std::string_view image_id,
                          Factor factor, int severity) {
  check_severity(severity);
  const std::string_view name = factor_info(factor).name;
  DegradationSpec spec{factor, severity, derive_seed(global_seed, image_id, name, severity), {}};
  if (factor == Factor::kMotion) {
    spec.overrides["angle"] = motion_angle_deg(derive_seed(global_seed, image_id, name, 0));
  }
  return spec;
}

ImageBuffer apply_degradation(const ImageBuffer& img, const DepthMap* depth,
                              const DegradationSpec& spec) {
  const ParamMap p = resolve_parameters(spec);
  const std::uint64_t seed = spec.seed;
  ImageBuffer out;
  switch (spec.factor) {
    case Factor::kLowLight:
      out = darken_lowlight(img, LightCurveParams{get(p, "alpha"),
                                                  static_cast<int>(get(p, "iterations")),
                                                  get(p, "highlight_threshold")});
      break;
    case Factor::kNightLight:
    case Factor::kExtremeLight: {
      GlareParams g = nightlight_params(spec.severity);
      g.curve.alpha = get(p, "alpha");
      g.curve.iterations = static_cast<int>(get(p, "iterations"));
      g.sources = static_cast<int>(get(p, "sources"));
      g.halo_gain = get(p, "halo_gain");
      g.streak_gain = get(p, "streak_gain");
      out = synth_nightlight(img, g, seed);
      if (spec.factor == Factor::kExtremeLight) {
        LightCurveParams l = lowlight_params(spec.severity);
        l.alpha = get(p, "final_alpha");
        l.iterations = static_cast<int>(get(p, "final_iterations"));
        out = darken_lowlight(out, l);
      }
      break;
    }
    case Factor::kStrongLight:
      out = brighten_stronglight(img, get(p, "shift"));
      break;
    case Factor::kRain: {
      RainParams r = rain_params(spec.severity);
      r.rate = get(p, "rate");
      r.veil_beta = get(p, "beta");
      r.opacity = get(p, "opacity");
      out = rain(img, require_depth(img, depth, spec.factor), r, seed);
      break;
    }
    case Factor::kFog: {
      const float a = static_cast<float>(get(p, "airlight"));
      out = apply_scattering(img, require_depth(img, depth, spec.factor),
                             ScatterParams{get(p, "beta"), {a, a, a}});
      break;
    }
    case Factor::kSnow: {
      SnowMaskParams m = snow_mask_params(spec.severity);
      m.density = get(p, "density");
      out = snow(img, require_depth(img, depth, spec.factor), m, get(p, "beta"), seed);
      break;
    }
    case Factor::kMud:
      out = mud_occlusion(img,
                          MudParams{static_cast<int>(get(p, "kernel")),
                                    get(p, "intensity"), get(p, "threshold")},
                          seed);
      break;
    case Factor::kDroplets: {
      DropletParams d = droplet_params(spec.severity);
      d.count = static_cast<int>(get(p, "count"));
      d.magnification = get(p, "magnification");
      out = lens_droplets(img, d, seed);
      break;
    }
    case Factor::kJpeg:
      out = jpeg_cycle_quality(img, static_cast<int>(get(p, "quality")));
      break;
    case Factor::kSharpen:
      out = oversharpen(img, get(p, "alpha"), get(p, "lightness"));
      break;
    case Factor::kNoDemosaic:
      out = no_demosaic(img);
      break;
    case Factor::kNoBayer:
      out = no_bayer(img);
      break;
    case Factor::kGaussian:
      out = add_noise_level(img, NoiseKind::kGaussian, get(p, "sigma"), seed);
      break;
    case Factor::kUniform:
      out = add_noise_level(img, NoiseKind::kUniform, get(p, "sigma"), seed);
      break;
    case Factor::kImpulse:
      out = add_noise_level(img, NoiseKind::kImpulse, get(p, "fraction"), seed);
      break;
    case Factor::kPoisson:
      out = add_noise_level(img, NoiseKind::kPoisson, get(p, "lambda"), seed);
      break;
    case Factor::kDefocus:
      out = kernels::convolve(img, defocus_kernel(get(p, "radius"), get(p, "alias_blur")));
      break;
    case Factor::kMotion:
      out = kernels::convolve(
          img, motion_kernel(get(p, "length"), get(p, "sigma"), get(p, "angle")));
      break;
  }
  out.clip();
  return out;
}

}  // namespace camrobust
