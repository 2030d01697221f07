#pragma once

#include <array>
#include <filesystem>
#include <optional>

#include "ovr/stft.hpp"

namespace ovr::mixer {

inline constexpr int kNumDirections = 8;  // horizontal, 45 degree steps

// One measured (or synthetic) impulse-response pair per direction.
struct IrPair {
  std::vector<double> outer;
  std::vector<double> inear;
};

struct IrSet {
  std::array<IrPair, kNumDirections> directions;
  int sample_rate_hz = 16000;
};

enum class NoiseMode { kPoint, kPseudoDiffuse };

NoiseMode noise_mode_from_string(const std::string& s);
std::string to_string(NoiseMode mode);

struct MixSpec {
  double snr_db = 0.0;
  NoiseMode mode = NoiseMode::kPoint;
  int direction = 0;  // used by kPoint
  uint64_t seed = 0;
};

// Two-channel rendering of a noise source as captured at the device.
struct NoiseCapture {
  Waveform outer;
  Waveform inear;
};

// Point source: convolves one mono source with the chosen direction's IR
// pair. Output length equals input length.
NoiseCapture spatialize_point(const Waveform& source, const IrSet& irs, int direction);

// Pseudo-diffuse field: sums the renderings of 8 mutually independent
// sources, one per direction, then scales both channels so the outer
// channel has unit RMS.
NoiseCapture spatialize_diffuse(const std::array<Waveform, kNumDirections>& sources,
                                const IrSet& irs);

// Scales the noise on both channels by a single gain so that the outer
// channel meets spec.snr_db against the own-voice outer channel; powers
// are measured over the full utterance. Noise shorter than the speech is
// wrapped circularly with a seed-derived offset.
std::pair<Waveform, Waveform> mix_at_snr(const Waveform& own_outer, const Waveform& own_inear,
                                         const NoiseCapture& noise, const MixSpec& spec);

double measure_snr_db(const Waveform& signal, const Waveform& noise);

// Random sparse FIR pairs (64 taps) standing in for measured impulse
// responses in tests and synthetic pipelines.
IrSet make_test_ir_set(uint64_t seed, int num_taps = 64);

// Directory of dir{0..7}_outer.wav / dir{0..7}_inear.wav.
IrSet load_ir_set(const std::filesystem::path& dir, int required_rate_hz = 16000);
void save_ir_set(const std::filesystem::path& dir, const IrSet& irs);

}  // namespace ovr::mixer
