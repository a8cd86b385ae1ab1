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

#pragma once

// Full-reference image quality metrics. All scores are computed on luma
// (single-channel inputs are used as-is) with pixel values in [0,1].

#include <complex>
#include <vector>

#include "camrobust/image.hpp"
#include "camrobust/kernels.hpp"

namespace camrobust {

inline constexpr double kPsnrCap = 100.0;

struct SsimConfig {
  int window = 11;
  double sigma = 1.5;
  double k1 = 0.01;
  double k2 = 0.03;
};

struct LogGaborConfig {
  int scales = 4;
  int orientations = 6;
  double min_wavelength = 6.0;
  double mult = 2.0;
  double sigma_on_f = 0.55;
  double d_theta_on_sigma = 1.2;
  double lowpass_cutoff = 0.45;
  int lowpass_order = 15;
};

struct CwSsimConfig {
  LogGaborConfig bank;
  int window = 7;
  double k = 0.01;
};

struct FsimConfig {
  LogGaborConfig bank;
  double t1 = 0.85;
  double t2 = 160.0;
  double noise_k = 2.0;
  // Box-average and decimate by round(min(w,h)/256) before scoring.
  bool downsample = true;
};

struct IQReport {
  double psnr = 0.0;
  double ssim = 0.0;
  double cw_ssim = 0.0;
  double fsim = 0.0;
};

// 10 log10(1/MSE) over all samples, capped at kPsnrCap.
double psnr(const ImageBuffer& ref, const ImageBuffer& test);

double ssim(const ImageBuffer& ref, const ImageBuffer& test,
            const SsimConfig& config = {});

// Per-window terms of SSIM on luma ("valid" windows only): the luminance
// factor and the contrast-structure factor. ssim = mean(l * cs).
struct SsimMaps {
  GridD luminance;
  GridD contrast_structure;
};
SsimMaps ssim_maps(const ImageBuffer& ref, const ImageBuffer& test,
                   const SsimConfig& config = {});

// Luma as doubles.
GridD luma_grid(const ImageBuffer& img);

// Frequency response of one log-Gabor band on an unshifted FFT grid
// (index 0 = DC). Real and nonnegative; zero at DC.
std::vector<double> log_gabor_filter(int width, int height, int scale,
                                     int orientation,
                                     const LogGaborConfig& config = {});

// Center frequency (cycles/pixel) of a scale, and angle (radians,
// counter-clockwise with y pointing up) of an orientation.
double log_gabor_center_frequency(int scale, const LogGaborConfig& config = {});
double log_gabor_orientation_angle(int orientation, const LogGaborConfig& config = {});

struct LogGaborBank {
  int width = 0;
  int height = 0;
  int scales = 0;
  int orientations = 0;
  // bands[scale * orientations + orientation], row-major planes.
  std::vector<std::vector<std::complex<double>>> bands;

  const std::vector<std::complex<double>>& band(int scale, int orientation) const {
    return bands[static_cast<std::size_t>(scale) * orientations + orientation];
  }
};

LogGaborBank log_gabor_bank(const GridD& img, const LogGaborConfig& config = {});

double cw_ssim(const ImageBuffer& ref, const ImageBuffer& test,
               const CwSsimConfig& config = {});

// Phase congruency map of a 0-255 scaled luma plane.
GridD phase_congruency(const GridD& img, const LogGaborConfig& bank, double noise_k);

double fsim(const ImageBuffer& ref, const ImageBuffer& test,
            const FsimConfig& config = {});

IQReport iq_suite(const ImageBuffer& ref, const ImageBuffer& test);

}  // namespace camrobust
