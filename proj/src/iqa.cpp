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

#include "camrobust/iqa.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <mutex>
#include <numbers>

#include "camrobust/error.hpp"

namespace camrobust {

namespace {

using cplx = std::complex<double>;
using Plane = std::vector<cplx>;

void check_pair(const ImageBuffer& ref, const ImageBuffer& test) {
  require_same_shape(ref, test, "quality metric");
  if (ref.empty()) throw DimensionError("quality metric on an empty image");
}

// FFTW planning is not thread-safe; execution with new-array calls is.
std::mutex& plan_mutex() {
  static std::mutex m;
  return m;
}

struct FftwFree {
  void operator()(fftw_complex* p) const { fftw_free(p); }
};

class Fft2d {
 public:
  Fft2d(int width, int height) : w_(width), h_(height) {
    const std::size_t n = static_cast<std::size_t>(width) * height;
    in_.reset(fftw_alloc_complex(n));
    out_.reset(fftw_alloc_complex(n));
    std::lock_guard lock(plan_mutex());
    fwd_ = fftw_plan_dft_2d(height, width, in_.get(), out_.get(), FFTW_FORWARD, FFTW_ESTIMATE);
    inv_ = fftw_plan_dft_2d(height, width, in_.get(), out_.get(), FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  ~Fft2d() {
    std::lock_guard lock(plan_mutex());
    fftw_destroy_plan(fwd_);
    fftw_destroy_plan(inv_);
  }
  Fft2d(const Fft2d&) = delete;
  Fft2d& operator=(const Fft2d&) = delete;

  Plane forward(const Plane& x) { return run(fwd_, x, 1.0); }
  // Normalized so that inverse(forward(x)) == x.
  Plane inverse(const Plane& x) {
    return run(inv_, x, 1.0 / (static_cast<double>(w_) * h_));
  }

 private:
  Plane run(fftw_plan plan, const Plane& x, double scale) {
    const std::size_t n = x.size();
    std::copy(x.begin(), x.end(), reinterpret_cast<cplx*>(in_.get()));
    fftw_execute(plan);
    Plane y(n);
    const cplx* o = reinterpret_cast<const cplx*>(out_.get());
    for (std::size_t i = 0; i < n; ++i) y[i] = o[i] * scale;
    return y;
  }

  int w_, h_;
  std::unique_ptr<fftw_complex, FftwFree> in_, out_;
  fftw_plan fwd_ = nullptr, inv_ = nullptr;
};

// Normalized frequency coordinate of FFT index k in a length-n transform
// (odd lengths use n-1 as the denominator, matching the usual log-Gabor
// reference code).
double freq_coord(int k, int n) {
  const int shifted = k < (n + 1) / 2 ? k : k - n;
  const double denom = n % 2 == 0 ? n : std::max(1, n - 1);
  return shifted / denom;
}

struct PolarGrid {
  std::vector<double> radius;
  std::vector<double> sin_theta;
  std::vector<double> cos_theta;
};

PolarGrid polar_grid(int width, int height) {
  PolarGrid g;
  const std::size_t n = static_cast<std::size_t>(width) * height;
  g.radius.resize(n);
  g.sin_theta.resize(n);
  g.cos_theta.resize(n);
  for (int y = 0; y < height; ++y) {
    const double fy = freq_coord(y, height);
    for (int x = 0; x < width; ++x) {
      const double fx = freq_coord(x, width);
      const std::size_t i = static_cast<std::size_t>(y) * width + x;
      const double theta = std::atan2(-fy, fx);
      g.radius[i] = std::hypot(fx, fy);
      g.sin_theta[i] = std::sin(theta);
      g.cos_theta[i] = std::cos(theta);
    }
  }
  g.radius[0] = 1.0;  // avoid log(0); the DC term is zeroed afterwards
  return g;
}

std::vector<double> radial_part(const PolarGrid& g, int scale, const LogGaborConfig& c) {
  const double fo = log_gabor_center_frequency(scale, c);
  const double denom = 2.0 * std::pow(std::log(c.sigma_on_f), 2);
  std::vector<double> r(g.radius.size());
  for (std::size_t i = 0; i < r.size(); ++i) {
    const double rad = g.radius[i];
    const double lp = 1.0 / (1.0 + std::pow(rad / c.lowpass_cutoff, 2 * c.lowpass_order));
    const double l = std::log(rad / fo);
    r[i] = std::exp(-l * l / denom) * lp;
  }
  r[0] = 0.0;
  return r;
}

std::vector<double> angular_part(const PolarGrid& g, int orientation,
                                 const LogGaborConfig& c) {
  const double angle = log_gabor_orientation_angle(orientation, c);
  const double theta_sigma = std::numbers::pi / c.orientations / c.d_theta_on_sigma;
  const double ca = std::cos(angle), sa = std::sin(angle);
  std::vector<double> s(g.radius.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double ds = g.sin_theta[i] * ca - g.cos_theta[i] * sa;
    const double dc = g.cos_theta[i] * ca + g.sin_theta[i] * sa;
    const double dtheta = std::abs(std::atan2(ds, dc));
    s[i] = std::exp(-dtheta * dtheta / (2.0 * theta_sigma * theta_sigma));
  }
  return s;
}

void check_bank(const LogGaborConfig& c) {
  if (c.scales < 1 || c.orientations < 1) {
    throw ValidationError("log-Gabor bank needs >= 1 scale and orientation");
  }
  if (!(c.min_wavelength > 0.0 && c.mult > 0.0 && c.sigma_on_f > 0.0 && c.sigma_on_f < 1.0)) {
    throw ValidationError("invalid log-Gabor parameters");
  }
}

// Image-independent part of a bank: filters and the per-orientation noise
// model constants. Shared between calls with the same geometry.
struct BankGeometry {
  int width = 0, height = 0;
  LogGaborConfig config;
  std::vector<std::vector<double>> radial, angular;
  std::vector<double> em_n;       // energy of the finest-scale filter
  std::vector<double> sum_an2;    // sum of squared spatial filters
  std::vector<double> sum_aiaj;   // sum of cross products between scales

  std::vector<double> filter(int s, int o) const {
    std::vector<double> f(radial[s].size());
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = radial[s][i] * angular[o][i];
    return f;
  }
};

bool same_config(const LogGaborConfig& a, const LogGaborConfig& b) {
  return a.scales == b.scales && a.orientations == b.orientations &&
         a.min_wavelength == b.min_wavelength && a.mult == b.mult &&
         a.sigma_on_f == b.sigma_on_f && a.d_theta_on_sigma == b.d_theta_on_sigma &&
         a.lowpass_cutoff == b.lowpass_cutoff && a.lowpass_order == b.lowpass_order;
}

std::shared_ptr<const BankGeometry> build_geometry(int w, int h, const LogGaborConfig& c) {
  auto g = std::make_shared<BankGeometry>();
  g->width = w;
  g->height = h;
  g->config = c;
  const PolarGrid polar = polar_grid(w, h);
  for (int s = 0; s < c.scales; ++s) g->radial.push_back(radial_part(polar, s, c));
  for (int o = 0; o < c.orientations; ++o) g->angular.push_back(angular_part(polar, o, c));
  Fft2d fft(w, h);
  const double root_n = std::sqrt(static_cast<double>(w) * h);
  const std::size_t n = static_cast<std::size_t>(w) * h;
  for (int o = 0; o < c.orientations; ++o) {
    std::vector<std::vector<double>> spatial;
    double em = 0.0;
    for (int s = 0; s < c.scales; ++s) {
      const auto f = g->filter(s, o);
      if (s == 0) {
        for (double v : f) em += v * v;
      }
      const Plane q = fft.inverse(Plane(f.begin(), f.end()));
      std::vector<double> r(n);
      for (std::size_t i = 0; i < n; ++i) r[i] = q[i].real() * root_n;
      spatial.push_back(std::move(r));
    }
    double an2 = 0.0, aiaj = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (int s = 0; s < c.scales; ++s) {
        an2 += spatial[s][i] * spatial[s][i];
        for (int t = s + 1; t < c.scales; ++t) aiaj += spatial[s][i] * spatial[t][i];
      }
    }
    g->em_n.push_back(em);
    g->sum_an2.push_back(an2);
    g->sum_aiaj.push_back(aiaj);
  }
  return g;
}

std::shared_ptr<const BankGeometry> geometry(int w, int h, const LogGaborConfig& c) {
  static std::mutex m;
  static std::vector<std::shared_ptr<const BankGeometry>> cache;
  std::lock_guard lock(m);
  for (const auto& g : cache) {
    if (g->width == w && g->height == h && same_config(g->config, c)) return g;
  }
  auto g = build_geometry(w, h, c);
  if (cache.size() >= 8) cache.erase(cache.begin());
  cache.push_back(g);
  return g;
}

// Streams the band responses of one image so that only one band is held
// in memory at a time.
class BankRunner {
 public:
  BankRunner(const GridD& img, const LogGaborConfig& c)
      : fft_(img.width, img.height) {
    check_bank(c);
    geo_ = geometry(img.width, img.height, c);
    Plane x(img.size());
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = img.values[i];
    spectrum_ = fft_.forward(x);
  }

  const BankGeometry& geo() const { return *geo_; }

  Plane band(int s, int o) {
    const auto& r = geo_->radial[s];
    const auto& a = geo_->angular[o];
    Plane p(spectrum_.size());
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = spectrum_[i] * (r[i] * a[i]);
    return fft_.inverse(p);
  }

 private:
  Fft2d fft_;
  std::shared_ptr<const BankGeometry> geo_;
  Plane spectrum_;
};

std::vector<double> box(int n) { return std::vector<double>(n, 1.0); }

GridD real_grid(int w, int h, const Plane& p, double (*part)(const cplx&)) {
  GridD g(w, h);
  for (std::size_t i = 0; i < p.size(); ++i) g.values[i] = part(p[i]);
  return g;
}

double re(const cplx& z) { return z.real(); }
double im(const cplx& z) { return z.imag(); }

GridD scale_grid(GridD g, double k) {
  for (double& v : g.values) v *= k;
  return g;
}

// Box average over FxF blocks followed by decimation.
GridD downsample(const GridD& in, int f) {
  if (f <= 1) return in;
  const int ow = (in.width + f - 1) / f, oh = (in.height + f - 1) / f;
  GridD out(ow, oh);
  for (int y = 0; y < oh; ++y) {
    for (int x = 0; x < ow; ++x) {
      double acc = 0.0;
      int cnt = 0;
      for (int dy = 0; dy < f && y * f + dy < in.height; ++dy) {
        for (int dx = 0; dx < f && x * f + dx < in.width; ++dx) {
          acc += in(x * f + dx, y * f + dy);
          ++cnt;
        }
      }
      out(x, y) = acc / cnt;
    }
  }
  return out;
}

GridD scharr_magnitude(const GridD& img) {
  static constexpr double kSmooth[3] = {3.0 / 16.0, 10.0 / 16.0, 3.0 / 16.0};
  static constexpr double kDiff[3] = {1.0, 0.0, -1.0};
  const GridD gx = kernels::convolve_separable(img, kDiff, kSmooth);
  const GridD gy = kernels::convolve_separable(img, kSmooth, kDiff);
  GridD m(img.width, img.height);
  for (std::size_t i = 0; i < m.size(); ++i) m.values[i] = std::hypot(gx.values[i], gy.values[i]);
  return m;
}

}  // namespace

GridD luma_grid(const ImageBuffer& img) {
  GridD g(img.width(), img.height());
  const auto d = img.data();
  const int c = img.channels();
  for (std::size_t i = 0; i < g.size(); ++i) {
    g.values[i] = c == 1 ? static_cast<double>(d[i])
                         : kLumaR * static_cast<double>(d[3 * i]) +
                               kLumaG * static_cast<double>(d[3 * i + 1]) +
                               kLumaB * static_cast<double>(d[3 * i + 2]);
  }
  return g;
}

double psnr(const ImageBuffer& ref, const ImageBuffer& test) {
  check_pair(ref, test);
  const auto a = ref.data();
  const auto b = test.data();
  double sse = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = static_cast<double>(a[i]) - static_cast<double>(b[i]);
    sse += d * d;
  }
  const double mse = sse / static_cast<double>(a.size());
  if (mse == 0.0) return kPsnrCap;
  return std::min(kPsnrCap, 10.0 * std::log10(1.0 / mse));
}

SsimMaps ssim_maps(const ImageBuffer& ref, const ImageBuffer& test,
                   const SsimConfig& config) {
  check_pair(ref, test);
  if (config.window < 1 || !(config.sigma > 0.0)) throw ValidationError("invalid SSIM window");
  if (ref.width() < config.window || ref.height() < config.window) {
    throw DimensionError("image smaller than the SSIM window");
  }
  const GridD x = luma_grid(ref), y = luma_grid(test);
  const auto g = gaussian_kernel_1d(config.sigma, config.window / 2);
  GridD xx(x.width, x.height), yy(x.width, x.height), xy(x.width, x.height);
  for (std::size_t i = 0; i < x.size(); ++i) {
    xx.values[i] = x.values[i] * x.values[i];
    yy.values[i] = y.values[i] * y.values[i];
    xy.values[i] = x.values[i] * y.values[i];
  }
  const GridD mx = kernels::filter_valid(x, g, g), my = kernels::filter_valid(y, g, g);
  const GridD sxx = kernels::filter_valid(xx, g, g), syy = kernels::filter_valid(yy, g, g);
  const GridD sxy = kernels::filter_valid(xy, g, g);
  const double c1 = config.k1 * config.k1, c2 = config.k2 * config.k2;
  SsimMaps maps{GridD(mx.width, mx.height), GridD(mx.width, mx.height)};
  for (std::size_t i = 0; i < mx.size(); ++i) {
    const double ux = mx.values[i], uy = my.values[i];
    const double vx = sxx.values[i] - ux * ux, vy = syy.values[i] - uy * uy;
    const double cov = sxy.values[i] - ux * uy;
    maps.luminance.values[i] = (2.0 * ux * uy + c1) / (ux * ux + uy * uy + c1);
    maps.contrast_structure.values[i] = (2.0 * cov + c2) / (vx + vy + c2);
  }
  return maps;
}

double ssim(const ImageBuffer& ref, const ImageBuffer& test, const SsimConfig& config) {
  const SsimMaps maps = ssim_maps(ref, test, config);
  double acc = 0.0;
  for (std::size_t i = 0; i < maps.luminance.size(); ++i) {
    acc += maps.luminance.values[i] * maps.contrast_structure.values[i];
  }
  return acc / static_cast<double>(maps.luminance.size());
}

double log_gabor_center_frequency(int scale, const LogGaborConfig& config) {
  return 1.0 / (config.min_wavelength * std::pow(config.mult, scale));
}

double log_gabor_orientation_angle(int orientation, const LogGaborConfig& config) {
  return orientation * std::numbers::pi / config.orientations;
}

std::vector<double> log_gabor_filter(int width, int height, int scale, int orientation,
                                     const LogGaborConfig& config) {
  check_bank(config);
  if (scale < 0 || scale >= config.scales || orientation < 0 ||
      orientation >= config.orientations) {
    throw ValidationError("log-Gabor band index out of range");
  }
  const PolarGrid g = polar_grid(width, height);
  auto r = radial_part(g, scale, config);
  const auto a = angular_part(g, orientation, config);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] *= a[i];
  return r;
}

LogGaborBank log_gabor_bank(const GridD& img, const LogGaborConfig& config) {
  BankRunner runner(img, config);
  LogGaborBank bank{img.width, img.height, config.scales, config.orientations, {}};
  for (int s = 0; s < config.scales; ++s) {
    for (int o = 0; o < config.orientations; ++o) bank.bands.push_back(runner.band(s, o));
  }
  return bank;
}

double cw_ssim(const ImageBuffer& ref, const ImageBuffer& test, const CwSsimConfig& config) {
  check_pair(ref, test);
  if (ref.width() < config.window || ref.height() < config.window) {
    throw DimensionError("image smaller than the CW-SSIM window");
  }
  const GridD x = luma_grid(ref), y = luma_grid(test);
  BankRunner bx(x, config.bank), by(y, config.bank);
  const int w = x.width, h = x.height;
  const auto k = box(config.window);
  double total = 0.0;
  std::size_t count = 0;
  for (int s = 0; s < config.bank.scales; ++s) {
    for (int o = 0; o < config.bank.orientations; ++o) {
      const Plane cx = bx.band(s, o), cy = by.band(s, o);
      Plane cross(cx.size());
      GridD energy(w, h);
      for (std::size_t i = 0; i < cx.size(); ++i) {
        cross[i] = cx[i] * std::conj(cy[i]);
        energy.values[i] = std::norm(cx[i]) + std::norm(cy[i]);
      }
      const GridD sr = kernels::filter_valid(real_grid(w, h, cross, re), k, k);
      const GridD si = kernels::filter_valid(real_grid(w, h, cross, im), k, k);
      const GridD se = kernels::filter_valid(energy, k, k);
      for (std::size_t i = 0; i < sr.size(); ++i) {
        const double num = 2.0 * std::hypot(sr.values[i], si.values[i]) + config.k;
        total += num / (se.values[i] + config.k);
      }
      count += sr.size();
    }
  }
  return total / static_cast<double>(count);
}

GridD phase_congruency(const GridD& img, const LogGaborConfig& c, double noise_k) {
  BankRunner bank(img, c);
  const BankGeometry& geo = bank.geo();
  const std::size_t n = img.size();
  constexpr double kEpsilon = 1e-4;
  std::vector<double> energy_all(n, 0.0), an_all(n, 0.0);
  for (int o = 0; o < c.orientations; ++o) {
    std::vector<Plane> eo;
    std::vector<double> sum_e(n, 0.0), sum_o(n, 0.0), sum_an(n, 0.0);
    for (int s = 0; s < c.scales; ++s) {
      eo.push_back(bank.band(s, o));
      for (std::size_t i = 0; i < n; ++i) {
        sum_e[i] += eo.back()[i].real();
        sum_o[i] += eo.back()[i].imag();
        sum_an[i] += std::abs(eo.back()[i]);
      }
    }
    // Weighted phase deviation energy.
    std::vector<double> energy(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const double xe = std::hypot(sum_e[i], sum_o[i]) + kEpsilon;
      const double me = sum_e[i] / xe, mo = sum_o[i] / xe;
      for (int s = 0; s < c.scales; ++s) {
        const double e = eo[s][i].real(), od = eo[s][i].imag();
        energy[i] += e * me + od * mo - std::abs(e * mo - od * me);
      }
    }
    // Noise floor from the median response of the finest scale.
    std::vector<double> e2(n);
    for (std::size_t i = 0; i < n; ++i) e2[i] = std::norm(eo[0][i]);
    std::nth_element(e2.begin(), e2.begin() + n / 2, e2.end());
    const double mean_e2n = -e2[n / 2] / std::log(0.5);
    const double noise_power = geo.em_n[o] > 0.0 ? mean_e2n / geo.em_n[o] : 0.0;
    const double est_noise_energy2 =
        2.0 * noise_power * geo.sum_an2[o] + 4.0 * noise_power * geo.sum_aiaj[o];
    const double tau = std::sqrt(std::max(0.0, est_noise_energy2) / 2.0);
    const double noise_mean = tau * std::sqrt(std::numbers::pi / 2.0);
    const double noise_sigma = std::sqrt((2.0 - std::numbers::pi / 2.0) * tau * tau);
    const double threshold = (noise_mean + noise_k * noise_sigma) / 1.7;
    for (std::size_t i = 0; i < n; ++i) {
      energy_all[i] += std::max(energy[i] - threshold, 0.0);
      an_all[i] += sum_an[i];
    }
  }
  GridD pc(img.width, img.height);
  for (std::size_t i = 0; i < n; ++i) {
    pc.values[i] = an_all[i] > 0.0 ? energy_all[i] / (an_all[i] + kEpsilon) : 0.0;
  }
  return pc;
}

double fsim(const ImageBuffer& ref, const ImageBuffer& test, const FsimConfig& config) {
  check_pair(ref, test);
  GridD x = scale_grid(luma_grid(ref), 255.0), y = scale_grid(luma_grid(test), 255.0);
  if (config.downsample) {
    const int f = std::max(
        1, static_cast<int>(std::lround(std::min(x.width, x.height) / 256.0)));
    x = downsample(x, f);
    y = downsample(y, f);
  }
  const GridD pc1 = phase_congruency(x, config.bank, config.noise_k);
  const GridD pc2 = phase_congruency(y, config.bank, config.noise_k);
  const GridD g1 = scharr_magnitude(x), g2 = scharr_magnitude(y);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < pc1.size(); ++i) {
    const double p1 = pc1.values[i], p2 = pc2.values[i];
    const double a = g1.values[i], b = g2.values[i];
    const double s_pc = (2.0 * p1 * p2 + config.t1) / (p1 * p1 + p2 * p2 + config.t1);
    const double s_g = (2.0 * a * b + config.t2) / (a * a + b * b + config.t2);
    const double pcm = std::max(p1, p2);
    num += s_pc * s_g * pcm;
    den += pcm;
  }
  if (den == 0.0) return 1.0;
  return std::clamp(num / den, 0.0, 1.0);
}

IQReport iq_suite(const ImageBuffer& ref, const ImageBuffer& test) {
  IQReport r;
  r.psnr = psnr(ref, test);
  r.ssim = ssim(ref, test);
  r.cw_ssim = cw_ssim(ref, test);
  r.fsim = fsim(ref, test);
  return r;
}

}  // namespace camrobust
