#include "ovr/augment.hpp"

#include <cmath>
#include <cstring>

#include "ovr/io_util.hpp"

namespace ovr::augment {

const std::vector<cd>& RtfTable::lookup(const std::string& phoneme) const {
  const auto it = rtfs.find(phoneme);
  return it != rtfs.end() ? it->second : global_fallback;
}

PhonemeIntervals load_intervals(const std::filesystem::path& path) {
  PhonemeIntervals out;
  for (const nlohmann::json& row : io::read_jsonl(path)) {
    PhonemeInterval iv;
    iv.start_s = row.at("start").get<double>();
    iv.end_s = row.at("end").get<double>();
    iv.phoneme = row.at("phoneme").get<std::string>();
    out.push_back(std::move(iv));
  }
  validate(out);
  return out;
}

void save_intervals(const std::filesystem::path& path, const PhonemeIntervals& intervals) {
  std::string text;
  for (const PhonemeInterval& iv : intervals) {
    nlohmann::json row{{"start", iv.start_s}, {"end", iv.end_s}, {"phoneme", iv.phoneme}};
    text += row.dump();
    text += '\n';
  }
  io::atomic_write_text(path, text);
}

void validate(const PhonemeIntervals& intervals) {
  for (const PhonemeInterval& iv : intervals) {
    if (!(iv.start_s >= 0.0) || !(iv.end_s > iv.start_s))
      throw DataError("augment: interval must satisfy 0 <= start < end");
    if (iv.phoneme.empty()) throw DataError("augment: empty phoneme label");
  }
}

PhonemeTrack intervals_to_track(const PhonemeIntervals& intervals, int num_frames,
                                const StftConfig& config) {
  PhonemeTrack track;
  track.labels.assign(static_cast<size_t>(num_frames), kSilenceLabel);
  const double fs = static_cast<double>(config.sample_rate_hz);
  for (int l = 0; l < num_frames; ++l) {
    const double center = static_cast<double>(l) * config.frame_shift / fs;
    double best_start = -1.0;
    for (const PhonemeInterval& iv : intervals) {
      if (center >= iv.start_s && center < iv.end_s && iv.start_s >= best_start) {
        best_start = iv.start_s;
        track.labels[static_cast<size_t>(l)] = iv.phoneme;
      }
    }
  }
  return track;
}

RtfTable estimate_rtfs(const Spectrogram& outer, const Spectrogram& inear,
                       const PhonemeTrack& track, int min_frames,
                       const std::string& talker_id) {
  if (outer.num_frames != inear.num_frames || outer.num_bins != inear.num_bins)
    throw DataError("augment: outer/inear spectrograms differ in shape");
  if (track.size() != outer.num_frames)
    throw DataError("augment: phoneme track length does not match frame count");

  const int num_bins = outer.num_bins;
  const int num_frames = outer.num_frames;

  // Global least squares over all frames: H(k) = sum S_i conj(S_o) / sum |S_o|^2.
  std::vector<cd> global_num(static_cast<size_t>(num_bins), cd(0.0, 0.0));
  std::vector<double> global_den(static_cast<size_t>(num_bins), 0.0);
  std::map<std::string, int> counts;
  for (int l = 0; l < num_frames; ++l) {
    ++counts[track.labels[static_cast<size_t>(l)]];
    const cd* so = outer.frame(l);
    const cd* si = inear.frame(l);
    for (int k = 0; k < num_bins; ++k) {
      global_num[static_cast<size_t>(k)] += si[k] * std::conj(so[k]);
      global_den[static_cast<size_t>(k)] += std::norm(so[k]);
    }
  }

  double total_energy = 0.0;
  for (double d : global_den) total_energy += d;
  if (total_energy <= 0.0) throw DataError("augment: all-silent input, cannot estimate RTFs");

  RtfTable table;
  table.talker_id = talker_id;
  table.num_bins = num_bins;
  table.global_fallback.assign(static_cast<size_t>(num_bins), cd(0.0, 0.0));
  for (int k = 0; k < num_bins; ++k) {
    if (global_den[static_cast<size_t>(k)] > 0.0)
      table.global_fallback[static_cast<size_t>(k)] =
          global_num[static_cast<size_t>(k)] / global_den[static_cast<size_t>(k)];
  }

  for (const auto& [phoneme, count] : counts) {
    if (count < min_frames) continue;
    std::vector<cd> num(static_cast<size_t>(num_bins), cd(0.0, 0.0));
    std::vector<double> den(static_cast<size_t>(num_bins), 0.0);
    for (int l = 0; l < num_frames; ++l) {
      if (track.labels[static_cast<size_t>(l)] != phoneme) continue;
      const cd* so = outer.frame(l);
      const cd* si = inear.frame(l);
      for (int k = 0; k < num_bins; ++k) {
        num[static_cast<size_t>(k)] += si[k] * std::conj(so[k]);
        den[static_cast<size_t>(k)] += std::norm(so[k]);
      }
    }
    std::vector<cd> h(static_cast<size_t>(num_bins));
    for (int k = 0; k < num_bins; ++k) {
      h[static_cast<size_t>(k)] = den[static_cast<size_t>(k)] > 0.0
                                      ? num[static_cast<size_t>(k)] / den[static_cast<size_t>(k)]
                                      : table.global_fallback[static_cast<size_t>(k)];
    }
    table.rtfs.emplace(phoneme, std::move(h));
  }
  return table;
}

Spectrogram simulate_inear(const Spectrogram& outer, const PhonemeTrack& track,
                           const RtfTable& table, const SmoothingConfig& smoothing) {
  if (track.size() != outer.num_frames)
    throw DataError("augment: phoneme track length does not match frame count");
  if (table.num_bins != outer.num_bins)
    throw DataError("augment: RTF table bin count does not match spectrogram");
  if (!(smoothing.alpha >= 0.0 && smoothing.alpha < 1.0))
    throw ConfigError("augment: smoothing alpha must be in [0, 1)");

  const int num_bins = outer.num_bins;
  const double alpha = smoothing.alpha;

  Spectrogram out = outer;
  std::vector<cd> smoothed(table.lookup(track.labels[0]));
  for (int l = 0; l < outer.num_frames; ++l) {
    const std::vector<cd>& target = table.lookup(track.labels[static_cast<size_t>(l)]);
    if (l > 0) {
      for (int k = 0; k < num_bins; ++k)
        smoothed[static_cast<size_t>(k)] =
            alpha * smoothed[static_cast<size_t>(k)] + (1.0 - alpha) * target[static_cast<size_t>(k)];
    }
    const cd* src = outer.frame(l);
    cd* dst = out.frame(l);
    for (int k = 0; k < num_bins; ++k) dst[k] = smoothed[static_cast<size_t>(k)] * src[k];
  }
  return out;
}

std::pair<Waveform, Waveform> augment_utterance(const Waveform& clean_speech,
                                                const PhonemeIntervals& intervals,
                                                const RtfTable& table,
                                                const SmoothingConfig& smoothing,
                                                const StftConfig& config) {
  validate(intervals);
  const Spectrogram outer_spec = stft::analyze(clean_speech, config);
  const PhonemeTrack track = intervals_to_track(intervals, outer_spec.num_frames, config);
  const Spectrogram inear_spec = simulate_inear(outer_spec, track, table, smoothing);
  Waveform inear = stft::synthesize(inear_spec, config);
  return {clean_speech, std::move(inear)};
}

void save_rtf_table(const std::filesystem::path& path, const RtfTable& table) {
  nlohmann::json doc;
  doc["talker_id"] = table.talker_id;
  doc["num_bins"] = table.num_bins;
  std::vector<std::string> names;
  nlohmann::json data = nlohmann::json::object();

  const auto encode = [&](const std::string& name, const std::vector<cd>& h) {
    std::vector<uint8_t> bytes(h.size() * 2 * sizeof(float));
    for (size_t k = 0; k < h.size(); ++k) {
      const float re = static_cast<float>(h[k].real());
      const float im = static_cast<float>(h[k].imag());
      std::memcpy(bytes.data() + k * 8, &re, 4);
      std::memcpy(bytes.data() + k * 8 + 4, &im, 4);
    }
    data[name] = io::base64_encode(bytes);
  };

  for (const auto& [phoneme, h] : table.rtfs) {
    names.push_back(phoneme);
    encode(phoneme, h);
  }
  encode(kFallbackName, table.global_fallback);
  doc["phonemes"] = names;
  doc["data"] = data;
  io::atomic_write_text(path, doc.dump(2) + "\n");
}

RtfTable load_rtf_table(const std::filesystem::path& path) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(io::read_text(path));
  } catch (const nlohmann::json::exception& e) {
    throw DataError("augment: bad RTF table " + path.string() + ": " + e.what());
  }
  RtfTable table;
  table.talker_id = doc.at("talker_id").get<std::string>();
  table.num_bins = doc.at("num_bins").get<int>();

  const auto decode = [&](const std::string& name) {
    const std::vector<uint8_t> bytes = io::base64_decode(doc.at("data").at(name).get<std::string>());
    if (bytes.size() != static_cast<size_t>(table.num_bins) * 8)
      throw DataError("augment: RTF entry '" + name + "' has wrong size");
    std::vector<cd> h(static_cast<size_t>(table.num_bins));
    for (int k = 0; k < table.num_bins; ++k) {
      float re, im;
      std::memcpy(&re, bytes.data() + static_cast<size_t>(k) * 8, 4);
      std::memcpy(&im, bytes.data() + static_cast<size_t>(k) * 8 + 4, 4);
      h[static_cast<size_t>(k)] = cd(re, im);
    }
    return h;
  };

  for (const auto& name : doc.at("phonemes").get<std::vector<std::string>>())
    table.rtfs.emplace(name, decode(name));
  table.global_fallback = decode(kFallbackName);
  return table;
}

}  // namespace ovr::augment
