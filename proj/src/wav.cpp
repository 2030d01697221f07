#include "ovr/wav.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>

#include "ovr/io_util.hpp"

namespace ovr::wav {

namespace {

static_assert(std::endian::native == std::endian::little,
              "wav reader assumes a little-endian host");

uint32_t read_u32(const uint8_t* p) {
  uint32_t v;
  std::memcpy(&v, p, 4);
  return v;
}

uint16_t read_u16(const uint8_t* p) {
  uint16_t v;
  std::memcpy(&v, p, 2);
  return v;
}

void append_u32(std::vector<uint8_t>& out, uint32_t v) {
  const size_t n = out.size();
  out.resize(n + 4);
  std::memcpy(out.data() + n, &v, 4);
}

void append_u16(std::vector<uint8_t>& out, uint16_t v) {
  const size_t n = out.size();
  out.resize(n + 2);
  std::memcpy(out.data() + n, &v, 2);
}

constexpr uint16_t kFormatPcm = 1;
constexpr uint16_t kFormatFloat = 3;

std::vector<uint8_t> encode(const WavData& data, uint16_t format) {
  if (data.channels.empty()) throw DataError("wav: no channels to write");
  const int channels = data.num_channels();
  const int samples = data.num_samples();
  for (const auto& ch : data.channels)
    if (static_cast<int>(ch.size()) != samples)
      throw DataError("wav: channel lengths differ");

  const uint16_t bytes_per_sample = format == kFormatFloat ? 4 : 2;
  const uint32_t block_align = static_cast<uint32_t>(channels) * bytes_per_sample;
  const uint32_t data_bytes = block_align * static_cast<uint32_t>(samples);

  std::vector<uint8_t> out;
  out.reserve(44 + data_bytes);
  out.insert(out.end(), {'R', 'I', 'F', 'F'});
  append_u32(out, 36 + data_bytes);
  out.insert(out.end(), {'W', 'A', 'V', 'E'});
  out.insert(out.end(), {'f', 'm', 't', ' '});
  append_u32(out, 16);
  append_u16(out, format);
  append_u16(out, static_cast<uint16_t>(channels));
  append_u32(out, static_cast<uint32_t>(data.sample_rate_hz));
  append_u32(out, static_cast<uint32_t>(data.sample_rate_hz) * block_align);
  append_u16(out, static_cast<uint16_t>(block_align));
  append_u16(out, static_cast<uint16_t>(8 * bytes_per_sample));
  out.insert(out.end(), {'d', 'a', 't', 'a'});
  append_u32(out, data_bytes);

  for (int i = 0; i < samples; ++i) {
    for (int c = 0; c < channels; ++c) {
      const double v = data.channels[static_cast<size_t>(c)][static_cast<size_t>(i)];
      if (format == kFormatFloat) {
        const float f = static_cast<float>(v);
        const size_t n = out.size();
        out.resize(n + 4);
        std::memcpy(out.data() + n, &f, 4);
      } else {
        const double clamped = std::clamp(v, -1.0, 1.0);
        const int16_t q = static_cast<int16_t>(std::lrint(clamped * 32767.0));
        const size_t n = out.size();
        out.resize(n + 2);
        std::memcpy(out.data() + n, &q, 2);
      }
    }
  }
  return out;
}

}  // namespace

WavData read(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("wav: cannot open " + path.string());
  std::vector<uint8_t> raw((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (raw.size() < 44 || std::memcmp(raw.data(), "RIFF", 4) != 0 ||
      std::memcmp(raw.data() + 8, "WAVE", 4) != 0)
    throw DataError("wav: not a RIFF/WAVE file: " + path.string());

  uint16_t format = 0, channels = 0, bits = 0;
  uint32_t rate = 0;
  const uint8_t* data_ptr = nullptr;
  uint32_t data_bytes = 0;

  size_t pos = 12;
  while (pos + 8 <= raw.size()) {
    const uint32_t chunk_size = read_u32(raw.data() + pos + 4);
    const uint8_t* body = raw.data() + pos + 8;
    if (pos + 8 + chunk_size > raw.size()) break;
    if (std::memcmp(raw.data() + pos, "fmt ", 4) == 0 && chunk_size >= 16) {
      format = read_u16(body);
      channels = read_u16(body + 2);
      rate = read_u32(body + 4);
      bits = read_u16(body + 14);
    } else if (std::memcmp(raw.data() + pos, "data", 4) == 0) {
      data_ptr = body;
      data_bytes = chunk_size;
    }
    pos += 8 + chunk_size + (chunk_size & 1);
  }

  if (data_ptr == nullptr || channels == 0) throw DataError("wav: missing fmt/data chunk in " + path.string());
  if (!((format == kFormatPcm && bits == 16) || (format == kFormatFloat && bits == 32)))
    throw DataError("wav: unsupported format (want PCM16 or float32): " + path.string());

  const uint16_t bytes_per_sample = bits / 8;
  const uint32_t frame_bytes = static_cast<uint32_t>(channels) * bytes_per_sample;
  const uint32_t samples = data_bytes / frame_bytes;

  WavData out;
  out.sample_rate_hz = static_cast<int>(rate);
  out.channels.assign(channels, std::vector<double>(samples));
  for (uint32_t i = 0; i < samples; ++i) {
    for (uint16_t c = 0; c < channels; ++c) {
      const uint8_t* p = data_ptr + static_cast<size_t>(i) * frame_bytes + static_cast<size_t>(c) * bytes_per_sample;
      if (format == kFormatPcm) {
        int16_t q;
        std::memcpy(&q, p, 2);
        out.channels[c][i] = static_cast<double>(q) / 32768.0;
      } else {
        float f;
        std::memcpy(&f, p, 4);
        out.channels[c][i] = static_cast<double>(f);
      }
    }
  }
  return out;
}

Waveform read_mono(const std::filesystem::path& path, int required_rate_hz) {
  const WavData data = read(path);
  if (data.sample_rate_hz != required_rate_hz)
    throw DataError("wav: " + path.string() + " has sample rate " +
                    std::to_string(data.sample_rate_hz) + ", expected " +
                    std::to_string(required_rate_hz));
  if (data.num_channels() != 1)
    throw DataError("wav: " + path.string() + " is not mono");
  Waveform x;
  x.sample_rate_hz = data.sample_rate_hz;
  x.samples = data.channels[0];
  return x;
}

void write_float32(const std::filesystem::path& path, const WavData& data) {
  io::atomic_write(path, encode(data, kFormatFloat));
}

void write_pcm16(const std::filesystem::path& path, const WavData& data) {
  io::atomic_write(path, encode(data, kFormatPcm));
}

void write_mono_float32(const std::filesystem::path& path, const Waveform& x) {
  WavData data;
  data.sample_rate_hz = x.sample_rate_hz;
  data.channels = {x.samples};
  write_float32(path, data);
}

}  // namespace ovr::wav
