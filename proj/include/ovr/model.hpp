#pragma once

#include <filesystem>
#include <span>
#include <string>

#include "ovr/stft.hpp"

namespace ovr::model {

// FT-JNF hyperparameters. The network maps the real/imaginary parts of
// the per-microphone STFT coefficients (2*num_mics inputs) to the
// real/imaginary parts of one complex mask per microphone.
struct ModelConfig {
  int h_f = 32;      // hidden units of the frequency-direction LSTM
  int h_t = 32;      // hidden units of the time-direction LSTM
  int num_mics = 2;  // 2 = outer + in-ear, 1 = in-ear only
  int num_bins = 257;

  int input_size() const { return 2 * num_mics; }
  int output_size() const { return 2 * num_mics; }
};

void validate(const ModelConfig& config);

// Gate order in all 4h-row tensors: input, forget, cell, output.
struct LstmParams {
  Matrix w_ih;              // [4h, input]
  Matrix w_hh;              // [4h, h]
  std::vector<double> b_ih;  // [4h]
  std::vector<double> b_hh;  // [4h]
};

struct DenseParams {
  Matrix w;                 // [out, in]
  std::vector<double> b;    // [out]
};

struct WeightSet {
  LstmParams f_lstm;
  LstmParams t_lstm;
  DenseParams dense;
};

WeightSet make_zero_weights(const ModelConfig& config);

// Uniform(-1/sqrt(h), 1/sqrt(h)) per layer, forget-gate b_ih offset by +1.
WeightSet make_initial_weights(const ModelConfig& config, uint64_t seed);

void validate_weights(const ModelConfig& config, const WeightSet& weights);

// Recovers (h_f, h_t, num_mics) from tensor shapes.
ModelConfig config_from_weights(const WeightSet& weights, int num_bins);

// Size variants. The (h_f, h_t) pairs reproduce the published parameter
// totals of the five models at 0.001 M precision.
struct VariantPreset {
  std::string name;
  int h_f = 0;
  int h_t = 0;
};

const std::vector<VariantPreset>& variant_presets();
VariantPreset preset_by_name(const std::string& name);
ModelConfig preset_config(const std::string& name, int num_mics = 2, int num_bins = 257);

// One LSTM cell update. `gates_out`, when non-null, receives the 4h
// post-activation gate values (i, f, g, o) for the backward pass.
void lstm_cell_step(std::span<const double> x, std::span<const double> h_prev,
                    std::span<const double> c_prev, const LstmParams& params,
                    std::span<double> h_out, std::span<double> c_out,
                    double* gates_out = nullptr);

// Complex masks, one grid per input microphone, frame-major like
// Spectrogram. Real and imaginary parts are tanh-bounded to [-1, 1].
struct MaskPair {
  int num_bins = 0;
  int num_frames = 0;
  std::vector<std::vector<cd>> masks;

  cd at(int mic, int k, int l) const {
    return masks[static_cast<size_t>(mic)][static_cast<size_t>(l) * num_bins + k];
  }
};

// Whole-utterance forward pass. The F-LSTM scans frequencies within each
// frame (state reset per frame); the T-LSTM scans frames per frequency
// with state carried causally.
MaskPair forward(std::span<const Spectrogram> mics, const ModelConfig& config,
                 const WeightSet& weights);

// Masking combiner: S_hat(k,l) = sum_m M_m(k,l) * Y_m(k,l).
Spectrogram apply_masks(std::span<const Spectrogram> mics, const MaskPair& masks);

// analyze -> forward -> apply_masks -> synthesize. Output length equals
// input length. For num_mics == 1 only the in-ear channel is consumed.
Waveform infer_utterance(const Waveform& outer, const Waveform& inear,
                         const ModelConfig& config, const WeightSet& weights,
                         const StftConfig& stft_config);

namespace detail {

// Column-major weight copies so the gate accumulation loops vectorize;
// numerically identical to the row-major evaluation order.
template <typename T>
struct PackedLstm {
  int input = 0;
  int hidden = 0;
  std::vector<T> w_ih_t;  // [input][4h]
  std::vector<T> w_hh_t;  // [h][4h]
  std::vector<T> bias;    // [4h], b_ih + b_hh
};

template <typename T>
PackedLstm<T> pack_lstm(const LstmParams& params);

template <typename T>
void packed_lstm_step(const PackedLstm<T>& lstm, const T* x, T* h, T* c, T* gate_buf);

}  // namespace detail

// Frame-by-frame inference with persistent time-direction state; output
// frames match the batch forward bit for bit. The scalar type selects
// the double reference path or the float32 fast path.
template <typename T>
class StreamingInference {
 public:
  StreamingInference(const ModelConfig& config, const WeightSet& weights);

  // One STFT frame per microphone in, one masked output frame out.
  // mics[0] = outer, mics[1] = in-ear (or just the in-ear for 1 mic).
  void process_frame(std::span<const cd* const> mic_frames, cd* out_frame);

  void reset();

  const ModelConfig& config() const { return config_; }

 private:
  ModelConfig config_;
  detail::PackedLstm<T> f_lstm_;
  detail::PackedLstm<T> t_lstm_;
  std::vector<T> dense_w_t_;  // [h_t][out]
  std::vector<T> dense_b_;
  std::vector<T> t_h_;  // [K][h_t]
  std::vector<T> t_c_;
  std::vector<T> f_seq_;  // [K][h_f] scratch
  std::vector<T> scratch_;
};

extern template class StreamingInference<float>;
extern template class StreamingInference<double>;

// Weights container, bit-exact: magic "OVRW", u32 version, u32 tensor
// count, then per tensor u16 name length, name, u8 rank, u32 dims,
// float32 little-endian row-major data.
void save_weights(const std::filesystem::path& path, const WeightSet& weights);
WeightSet load_weights(const std::filesystem::path& path);

}  // namespace ovr::model
