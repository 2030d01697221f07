#pragma once

#include <span>
#include <vector>

#include "ovr/common.hpp"

namespace ovr {

// Analysis/synthesis parameters. Defaults are the operating point of the
// whole toolkit: 16 kHz, 32 ms frames, 16 ms shift, 257 bins.
struct StftConfig {
  int sample_rate_hz = 16000;
  int frame_len = 512;
  int frame_shift = 256;
  int num_bins = 257;
};

struct Waveform {
  std::vector<double> samples;
  int sample_rate_hz = 16000;

  int size() const { return static_cast<int>(samples.size()); }
  double duration_s() const {
    return static_cast<double>(samples.size()) / sample_rate_hz;
  }
};

// Complex STFT grid for one channel, frame-major storage.
struct Spectrogram {
  int num_bins = 0;
  int num_frames = 0;
  int num_samples = 0;  // source length; synthesize trims to this
  StftConfig config;
  std::vector<cd> bins;

  Spectrogram() = default;
  Spectrogram(int k, int l, const StftConfig& cfg)
      : num_bins(k),
        num_frames(l),
        num_samples(l * cfg.frame_shift),
        config(cfg),
        bins(static_cast<size_t>(k) * l, cd(0.0, 0.0)) {}

  cd& at(int k, int l) { return bins[static_cast<size_t>(l) * num_bins + k]; }
  cd at(int k, int l) const { return bins[static_cast<size_t>(l) * num_bins + k]; }

  // Pointer to frame l's contiguous bin vector.
  cd* frame(int l) { return bins.data() + static_cast<size_t>(l) * num_bins; }
  const cd* frame(int l) const { return bins.data() + static_cast<size_t>(l) * num_bins; }
};

namespace stft {

// Derives frame_shift (50% overlap) and num_bins from the frame length
// and validates the invariants.
StftConfig make_config(int sample_rate_hz = 16000, int frame_len = 512);
void validate(const StftConfig& config);

// Square-root periodic Hann: w[n] = sqrt(0.5 - 0.5 cos(2 pi n / N)).
// Satisfies w^2[n] + w^2[n + N/2] = 1, so analysis+synthesis windowing
// overlap-adds to unity at 50% shift.
std::vector<double> make_window(const StftConfig& config);

int frame_count(int num_samples, const StftConfig& config);

Spectrogram analyze(const Waveform& x, const StftConfig& config);
Waveform synthesize(const Spectrogram& spec, const StftConfig& config);

namespace detail {

// Mirror indexing for centered reflection padding (no edge duplication).
int mirror_index(long long i, int n);

// Signal padded by frame_len/2 on each side, long enough for the last
// frame: frame l covers padded samples [l*shift, l*shift + frame_len).
std::vector<double> reflect_pad(std::span<const double> x, const StftConfig& config,
                                int num_frames);

// Accumulated squared synthesis window over the padded domain. Interior
// samples are exactly 1 (COLA); edges are normalized at synthesis time.
std::vector<double> ola_weight(int num_frames, const StftConfig& config);

int padded_length(int num_frames, const StftConfig& config);

}  // namespace detail

}  // namespace stft
}  // namespace ovr
