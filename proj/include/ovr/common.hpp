#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ovr {

inline constexpr std::string_view kVersion = "0.1.0";

using cd = std::complex<double>;

// Base class for everything the toolkit throws. The CLI maps these to
// exit code 2 (data error); usage errors are handled by the argument
// parser and map to exit code 1.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Invalid configuration (bad frame length, inconsistent shapes at
// construction time, unknown preset name, ...).
struct ConfigError : Error {
  using Error::Error;
};

// Invalid data at runtime (file not found / malformed, sample-rate
// mismatch, non-finite input, length mismatch between signals, ...).
struct DataError : Error {
  using Error::Error;
};

// Minimal row-major dense matrix. Model weights and gradients are small
// enough that a hand-rolled type beats pulling in a linear-algebra
// dependency.
struct Matrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(int r, int c) : rows(r), cols(c), data(static_cast<size_t>(r) * c, 0.0) {}

  double& operator()(int r, int c) { return data[static_cast<size_t>(r) * cols + c]; }
  double operator()(int r, int c) const { return data[static_cast<size_t>(r) * cols + c]; }

  size_t size() const { return data.size(); }
};

// Deterministic random source. The transforms are hand-rolled on top of
// mt19937_64 so that sequences are bit-identical across standard library
// implementations, which the reproducibility contract requires.
class Rng {
 public:
  explicit Rng(uint64_t seed) : gen_(seed) {}

  uint64_t bits() { return gen_(); }

  // Uniform in [0, 1).
  double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Uniform integer in [0, n).
  uint64_t index(uint64_t n) {
    return static_cast<uint64_t>((static_cast<unsigned __int128>(gen_()) * n) >> 64);
  }

  // Standard normal via Box-Muller.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = 0.0;
    do {
      u1 = uniform01();
    } while (u1 <= 0.0);
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
  }

 private:
  std::mt19937_64 gen_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace ovr
