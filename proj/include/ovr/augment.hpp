#pragma once

#include <filesystem>
#include <map>
#include <string>

#include "ovr/stft.hpp"

namespace ovr::augment {

inline constexpr const char* kSilenceLabel = "sil";
inline constexpr const char* kFallbackName = "*";

struct PhonemeInterval {
  double start_s = 0.0;
  double end_s = 0.0;
  std::string phoneme;
};

using PhonemeIntervals = std::vector<PhonemeInterval>;

// One phoneme symbol per STFT frame.
struct PhonemeTrack {
  std::vector<std::string> labels;

  int size() const { return static_cast<int>(labels.size()); }
};

// Per-phoneme relative transfer functions between the outer and in-ear
// microphones, one complex value per frequency bin, plus a global
// fallback estimated over all frames.
struct RtfTable {
  std::string talker_id;
  int num_bins = 0;
  std::map<std::string, std::vector<cd>> rtfs;
  std::vector<cd> global_fallback;

  // Fallback-aware lookup; never fails for a well-formed table.
  const std::vector<cd>& lookup(const std::string& phoneme) const;
};

struct SmoothingConfig {
  double alpha = 0.5;  // first-order recursive smoothing, 0 disables
};

// JSON Lines, one {"start":s,"end":s,"phoneme":p} object per interval.
PhonemeIntervals load_intervals(const std::filesystem::path& path);
void save_intervals(const std::filesystem::path& path, const PhonemeIntervals& intervals);
void validate(const PhonemeIntervals& intervals);

// Labels frame l with the phoneme whose interval contains the frame
// center time l*shift/fs; "sil" where uncovered. When intervals overlap
// the later-starting one wins.
PhonemeTrack intervals_to_track(const PhonemeIntervals& intervals, int num_frames,
                                const StftConfig& config);

// Least-squares per-frequency RTF estimate over all frames carrying each
// phoneme; assumes noise-free paired recordings. Phonemes with fewer
// than min_frames occurrences fall back to the global estimate.
RtfTable estimate_rtfs(const Spectrogram& outer, const Spectrogram& inear,
                       const PhonemeTrack& track, int min_frames = 5,
                       const std::string& talker_id = "");

// In-ear simulation: S_i(k,l) = H(k,l) * S_o(k,l) with H recursively
// smoothed across frames to soften phoneme transitions.
Spectrogram simulate_inear(const Spectrogram& outer, const PhonemeTrack& track,
                           const RtfTable& table, const SmoothingConfig& smoothing);

// Full augmentation of one clean utterance: the outer channel passes
// through unchanged, the in-ear channel is synthesized via the table.
std::pair<Waveform, Waveform> augment_utterance(const Waveform& clean_speech,
                                                const PhonemeIntervals& intervals,
                                                const RtfTable& table,
                                                const SmoothingConfig& smoothing,
                                                const StftConfig& config);

// Table container: JSON header with base64 float32 (re, im interleaved,
// little-endian) per phoneme; the global fallback is stored under "*".
void save_rtf_table(const std::filesystem::path& path, const RtfTable& table);
RtfTable load_rtf_table(const std::filesystem::path& path);

}  // namespace ovr::augment
