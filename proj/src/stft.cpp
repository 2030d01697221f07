#include "ovr/stft.hpp"

#include <cmath>

#include "ovr/fft.hpp"

namespace ovr::stft {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;

void check_finite(const Waveform& x) {
  for (double v : x.samples)
    if (!std::isfinite(v)) throw DataError("analyze: non-finite sample in input");
}
}  // namespace

StftConfig make_config(int sample_rate_hz, int frame_len) {
  StftConfig cfg;
  cfg.sample_rate_hz = sample_rate_hz;
  cfg.frame_len = frame_len;
  cfg.frame_shift = frame_len / 2;
  cfg.num_bins = frame_len / 2 + 1;
  validate(cfg);
  return cfg;
}

void validate(const StftConfig& config) {
  if (config.frame_len < 2 || config.frame_len % 2 != 0)
    throw ConfigError("stft: frame_len must be even and >= 2");
  if (config.frame_shift != config.frame_len / 2)
    throw ConfigError("stft: frame_shift must equal frame_len/2");
  if (config.num_bins != config.frame_len / 2 + 1)
    throw ConfigError("stft: num_bins must equal frame_len/2 + 1");
  if (config.sample_rate_hz <= 0) throw ConfigError("stft: sample rate must be positive");
}

std::vector<double> make_window(const StftConfig& config) {
  validate(config);
  const int n = config.frame_len;
  std::vector<double> w(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i)
    w[static_cast<size_t>(i)] = std::sqrt(0.5 - 0.5 * std::cos(kTwoPi * i / n));
  return w;
}

int frame_count(int num_samples, const StftConfig& config) {
  if (num_samples < 1) throw DataError("stft: empty signal");
  return (num_samples + config.frame_shift - 1) / config.frame_shift;
}

namespace detail {

int mirror_index(long long i, int n) {
  if (n == 1) return 0;
  const long long period = 2LL * n - 2;
  long long m = i % period;
  if (m < 0) m += period;
  if (m >= n) m = period - m;
  return static_cast<int>(m);
}

int padded_length(int num_frames, const StftConfig& config) {
  return (num_frames - 1) * config.frame_shift + config.frame_len;
}

std::vector<double> reflect_pad(std::span<const double> x, const StftConfig& config,
                                int num_frames) {
  const int n = static_cast<int>(x.size());
  const int pad = config.frame_len / 2;
  const int total = padded_length(num_frames, config);
  std::vector<double> out(static_cast<size_t>(total));
  for (int i = 0; i < total; ++i)
    out[static_cast<size_t>(i)] = x[static_cast<size_t>(mirror_index(i - pad, n))];
  return out;
}

std::vector<double> ola_weight(int num_frames, const StftConfig& config) {
  const std::vector<double> w = make_window(config);
  std::vector<double> weight(static_cast<size_t>(padded_length(num_frames, config)), 0.0);
  for (int l = 0; l < num_frames; ++l) {
    const size_t off = static_cast<size_t>(l) * config.frame_shift;
    for (int i = 0; i < config.frame_len; ++i)
      weight[off + i] += w[static_cast<size_t>(i)] * w[static_cast<size_t>(i)];
  }
  return weight;
}

}  // namespace detail

Spectrogram analyze(const Waveform& x, const StftConfig& config) {
  validate(config);
  if (x.sample_rate_hz != config.sample_rate_hz)
    throw DataError("analyze: waveform sample rate does not match config");
  check_finite(x);

  const int num_frames = frame_count(x.size(), config);
  const std::vector<double> w = make_window(config);
  const std::vector<double> padded = detail::reflect_pad(x.samples, config, num_frames);

  Spectrogram spec(config.num_bins, num_frames, config);
  spec.num_samples = x.size();

#pragma omp parallel for schedule(static)
  for (int l = 0; l < num_frames; ++l) {
    std::vector<double> frame(static_cast<size_t>(config.frame_len));
    const size_t off = static_cast<size_t>(l) * config.frame_shift;
    for (int i = 0; i < config.frame_len; ++i)
      frame[static_cast<size_t>(i)] = padded[off + i] * w[static_cast<size_t>(i)];
    const std::vector<cd> bins = fft::rfft(frame);
    cd* dst = spec.frame(l);
    for (int k = 0; k < config.num_bins; ++k) dst[k] = bins[static_cast<size_t>(k)];
  }
  return spec;
}

Waveform synthesize(const Spectrogram& spec, const StftConfig& config) {
  validate(config);
  if (spec.num_bins != config.num_bins)
    throw DataError("synthesize: spectrogram bin count does not match config");
  if (spec.num_frames < 1) throw DataError("synthesize: empty spectrogram");
  const int num_frames = spec.num_frames;
  const int num_samples =
      spec.num_samples > 0 ? spec.num_samples : num_frames * config.frame_shift;
  if (frame_count(num_samples, config) != num_frames)
    throw DataError("synthesize: num_samples inconsistent with frame count");

  const std::vector<double> w = make_window(config);
  const int total = detail::padded_length(num_frames, config);
  const int pad = config.frame_len / 2;

  // Inverse transforms are independent per frame; the overlap-add below
  // stays serial so the accumulation order is fixed.
  std::vector<double> segments(static_cast<size_t>(num_frames) * config.frame_len);
#pragma omp parallel for schedule(static)
  for (int l = 0; l < num_frames; ++l) {
    const std::vector<double> t =
        fft::irfft(std::span<const cd>(spec.frame(l), static_cast<size_t>(config.num_bins)),
                   config.frame_len);
    double* seg = segments.data() + static_cast<size_t>(l) * config.frame_len;
    for (int i = 0; i < config.frame_len; ++i) seg[i] = t[static_cast<size_t>(i)] * w[static_cast<size_t>(i)];
  }

  std::vector<double> ola(static_cast<size_t>(total), 0.0);
  for (int l = 0; l < num_frames; ++l) {
    const double* seg = segments.data() + static_cast<size_t>(l) * config.frame_len;
    const size_t off = static_cast<size_t>(l) * config.frame_shift;
    for (int i = 0; i < config.frame_len; ++i) ola[off + i] += seg[i];
  }

  const std::vector<double> weight = detail::ola_weight(num_frames, config);
  Waveform out;
  out.sample_rate_hz = config.sample_rate_hz;
  out.samples.resize(static_cast<size_t>(num_samples));
  for (int t = 0; t < num_samples; ++t) {
    const double g = weight[static_cast<size_t>(t + pad)];
    out.samples[static_cast<size_t>(t)] = g > 1e-12 ? ola[static_cast<size_t>(t + pad)] / g : 0.0;
  }
  return out;
}

}  // namespace ovr::stft
