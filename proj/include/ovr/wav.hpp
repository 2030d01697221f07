#pragma once

#include <filesystem>
#include <vector>

#include "ovr/stft.hpp"

namespace ovr::wav {

// Decoded WAV contents, one vector per channel, samples in [-1, 1] for
// PCM sources (float sources are passed through unscaled).
struct WavData {
  int sample_rate_hz = 0;
  std::vector<std::vector<double>> channels;

  int num_channels() const { return static_cast<int>(channels.size()); }
  int num_samples() const { return channels.empty() ? 0 : static_cast<int>(channels[0].size()); }
};

// Reads PCM 16-bit or IEEE float-32 RIFF files.
WavData read(const std::filesystem::path& path);

// Mono convenience reader; enforces the expected sample rate (resampling
// is out of scope, a mismatch is a hard error). Multi-channel files are
// rejected.
Waveform read_mono(const std::filesystem::path& path, int required_rate_hz);

void write_float32(const std::filesystem::path& path, const WavData& data);
void write_pcm16(const std::filesystem::path& path, const WavData& data);

void write_mono_float32(const std::filesystem::path& path, const Waveform& x);

}  // namespace ovr::wav
