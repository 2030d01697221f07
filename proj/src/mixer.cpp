#include "ovr/mixer.hpp"

#include <cmath>

#include "ovr/wav.hpp"

namespace ovr::mixer {

namespace {

double power(const std::vector<double>& x) {
  double acc = 0.0;
  for (double v : x) acc += v * v;
  return acc / static_cast<double>(x.size());
}

// Truncated linear convolution: output length equals input length.
std::vector<double> convolve_truncated(const std::vector<double>& x,
                                       const std::vector<double>& h) {
  const int n = static_cast<int>(x.size());
  const int m = static_cast<int>(h.size());
  std::vector<double> y(static_cast<size_t>(n), 0.0);
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i) {
    double acc = 0.0;
    const int jmax = std::min(m - 1, i);
    for (int j = 0; j <= jmax; ++j) acc += h[static_cast<size_t>(j)] * x[static_cast<size_t>(i - j)];
    y[static_cast<size_t>(i)] = acc;
  }
  return y;
}

void check_rate(const Waveform& x, int rate, const char* what) {
  if (x.sample_rate_hz != rate) throw DataError(std::string("mixer: sample-rate mismatch in ") + what);
}

}  // namespace

NoiseMode noise_mode_from_string(const std::string& s) {
  if (s == "point") return NoiseMode::kPoint;
  if (s == "diffuse" || s == "pseudo_diffuse") return NoiseMode::kPseudoDiffuse;
  throw DataError("mixer: unknown noise mode '" + s + "'");
}

std::string to_string(NoiseMode mode) {
  return mode == NoiseMode::kPoint ? "point" : "diffuse";
}

NoiseCapture spatialize_point(const Waveform& source, const IrSet& irs, int direction) {
  if (direction < 0 || direction >= kNumDirections)
    throw DataError("mixer: direction index out of range");
  check_rate(source, irs.sample_rate_hz, "spatialize_point");
  const IrPair& ir = irs.directions[static_cast<size_t>(direction)];
  if (ir.outer.empty() || ir.outer.size() != ir.inear.size())
    throw DataError("mixer: missing or inconsistent impulse response for direction " +
                    std::to_string(direction));
  NoiseCapture out;
  out.outer = {convolve_truncated(source.samples, ir.outer), source.sample_rate_hz};
  out.inear = {convolve_truncated(source.samples, ir.inear), source.sample_rate_hz};
  return out;
}

NoiseCapture spatialize_diffuse(const std::array<Waveform, kNumDirections>& sources,
                                const IrSet& irs) {
  const int n = sources[0].size();
  for (const Waveform& s : sources) {
    if (s.size() != n) throw DataError("mixer: diffuse sources must share length");
    check_rate(s, irs.sample_rate_hz, "spatialize_diffuse");
  }
  NoiseCapture acc;
  acc.outer = {std::vector<double>(static_cast<size_t>(n), 0.0), irs.sample_rate_hz};
  acc.inear = {std::vector<double>(static_cast<size_t>(n), 0.0), irs.sample_rate_hz};
  for (int d = 0; d < kNumDirections; ++d) {
    const NoiseCapture one = spatialize_point(sources[static_cast<size_t>(d)], irs, d);
    for (int i = 0; i < n; ++i) {
      acc.outer.samples[static_cast<size_t>(i)] += one.outer.samples[static_cast<size_t>(i)];
      acc.inear.samples[static_cast<size_t>(i)] += one.inear.samples[static_cast<size_t>(i)];
    }
  }
  const double rms = std::sqrt(power(acc.outer.samples));
  if (rms <= 0.0) throw DataError("mixer: diffuse field has zero power at the outer channel");
  const double g = 1.0 / rms;
  for (double& v : acc.outer.samples) v *= g;
  for (double& v : acc.inear.samples) v *= g;
  return acc;
}

std::pair<Waveform, Waveform> mix_at_snr(const Waveform& own_outer, const Waveform& own_inear,
                                         const NoiseCapture& noise, const MixSpec& spec) {
  const int n = own_outer.size();
  if (own_inear.size() != n) throw DataError("mixer: own-voice channels differ in length");
  if (own_outer.sample_rate_hz != own_inear.sample_rate_hz ||
      noise.outer.sample_rate_hz != own_outer.sample_rate_hz ||
      noise.inear.sample_rate_hz != own_outer.sample_rate_hz)
    throw DataError("mixer: sample-rate mismatch between speech and noise");
  if (noise.outer.size() != noise.inear.size())
    throw DataError("mixer: noise channels differ in length");
  if (!std::isfinite(spec.snr_db)) throw DataError("mixer: SNR must be finite");
  const int m = noise.outer.size();
  if (m == 0) throw DataError("mixer: empty noise");

  // Crop, wrapping with a seeded circular offset when the noise is
  // shorter than the speech.
  Rng rng(spec.seed);
  const int offset = m > 0 ? static_cast<int>(rng.index(static_cast<uint64_t>(m))) : 0;
  std::vector<double> v_outer(static_cast<size_t>(n)), v_inear(static_cast<size_t>(n));
  if (m >= n) {
    for (int i = 0; i < n; ++i) {
      v_outer[static_cast<size_t>(i)] = noise.outer.samples[static_cast<size_t>(i)];
      v_inear[static_cast<size_t>(i)] = noise.inear.samples[static_cast<size_t>(i)];
    }
  } else {
    for (int i = 0; i < n; ++i) {
      const int j = (offset + i) % m;
      v_outer[static_cast<size_t>(i)] = noise.outer.samples[static_cast<size_t>(j)];
      v_inear[static_cast<size_t>(i)] = noise.inear.samples[static_cast<size_t>(j)];
    }
  }

  const double p_speech = power(own_outer.samples);
  const double p_noise = power(v_outer);
  if (p_speech <= 0.0) throw DataError("mixer: own voice has zero power at the outer channel");
  if (p_noise <= 0.0) throw DataError("mixer: noise has zero power at the outer channel");

  // Same gain on both noise channels so the inter-channel noise level
  // difference survives the mixing.
  const double g = std::sqrt(p_speech / (p_noise * std::pow(10.0, spec.snr_db / 10.0)));

  Waveform y_outer{std::vector<double>(static_cast<size_t>(n)), own_outer.sample_rate_hz};
  Waveform y_inear{std::vector<double>(static_cast<size_t>(n)), own_outer.sample_rate_hz};
  for (int i = 0; i < n; ++i) {
    y_outer.samples[static_cast<size_t>(i)] =
        own_outer.samples[static_cast<size_t>(i)] + g * v_outer[static_cast<size_t>(i)];
    y_inear.samples[static_cast<size_t>(i)] =
        own_inear.samples[static_cast<size_t>(i)] + g * v_inear[static_cast<size_t>(i)];
  }
  return {std::move(y_outer), std::move(y_inear)};
}

double measure_snr_db(const Waveform& signal, const Waveform& noise) {
  if (signal.size() != noise.size()) throw DataError("mixer: measure_snr length mismatch");
  double ps = 0.0, pv = 0.0;
  for (size_t i = 0; i < signal.samples.size(); ++i) {
    ps += signal.samples[i] * signal.samples[i];
    pv += noise.samples[i] * noise.samples[i];
  }
  if (pv <= 0.0) throw DataError("mixer: zero noise power");
  return 10.0 * std::log10(ps / pv);
}

IrSet make_test_ir_set(uint64_t seed, int num_taps) {
  Rng rng(seed);
  IrSet irs;
  irs.sample_rate_hz = 16000;
  for (int d = 0; d < kNumDirections; ++d) {
    IrPair& pair = irs.directions[static_cast<size_t>(d)];
    pair.outer.assign(static_cast<size_t>(num_taps), 0.0);
    pair.inear.assign(static_cast<size_t>(num_taps), 0.0);
    // Direct path plus a handful of decaying reflections.
    pair.outer[0] = 1.0;
    pair.inear[static_cast<size_t>(rng.index(4))] = 0.6 + 0.2 * rng.uniform01();
    for (int tap = 0; tap < 6; ++tap) {
      const int i = 1 + static_cast<int>(rng.index(static_cast<uint64_t>(num_taps - 1)));
      const int j = 1 + static_cast<int>(rng.index(static_cast<uint64_t>(num_taps - 1)));
      const double decay_i = std::exp(-3.0 * i / num_taps);
      const double decay_j = std::exp(-3.0 * j / num_taps);
      pair.outer[static_cast<size_t>(i)] += rng.uniform(-0.4, 0.4) * decay_i;
      pair.inear[static_cast<size_t>(j)] += rng.uniform(-0.3, 0.3) * decay_j;
    }
  }
  return irs;
}

IrSet load_ir_set(const std::filesystem::path& dir, int required_rate_hz) {
  IrSet irs;
  irs.sample_rate_hz = required_rate_hz;
  for (int d = 0; d < kNumDirections; ++d) {
    const auto outer = dir / ("dir" + std::to_string(d) + "_outer.wav");
    const auto inear = dir / ("dir" + std::to_string(d) + "_inear.wav");
    irs.directions[static_cast<size_t>(d)].outer = wav::read_mono(outer, required_rate_hz).samples;
    irs.directions[static_cast<size_t>(d)].inear = wav::read_mono(inear, required_rate_hz).samples;
    if (irs.directions[static_cast<size_t>(d)].outer.size() !=
        irs.directions[static_cast<size_t>(d)].inear.size())
      throw DataError("mixer: IR pair lengths differ for direction " + std::to_string(d));
  }
  return irs;
}

void save_ir_set(const std::filesystem::path& dir, const IrSet& irs) {
  std::filesystem::create_directories(dir);
  for (int d = 0; d < kNumDirections; ++d) {
    Waveform outer{irs.directions[static_cast<size_t>(d)].outer, irs.sample_rate_hz};
    Waveform inear{irs.directions[static_cast<size_t>(d)].inear, irs.sample_rate_hz};
    wav::write_mono_float32(dir / ("dir" + std::to_string(d) + "_outer.wav"), outer);
    wav::write_mono_float32(dir / ("dir" + std::to_string(d) + "_inear.wav"), inear);
  }
}

}  // namespace ovr::mixer
