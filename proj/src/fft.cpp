#include "ovr/fft.hpp"

#include <cmath>

namespace ovr::fft {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

bool is_pow2(size_t n) { return n != 0 && (n & (n - 1)) == 0; }

void dft_direct(std::vector<cd>& a, bool inverse) {
  const size_t n = a.size();
  const double sign = inverse ? 1.0 : -1.0;
  std::vector<cd> out(n);
  for (size_t k = 0; k < n; ++k) {
    cd acc(0.0, 0.0);
    for (size_t j = 0; j < n; ++j) {
      const double ang = sign * kTwoPi * static_cast<double>(k * j % n) / static_cast<double>(n);
      acc += a[j] * cd(std::cos(ang), std::sin(ang));
    }
    out[k] = acc;
  }
  a = std::move(out);
}

void fft_radix2(std::vector<cd>& a, bool inverse) {
  const size_t n = a.size();
  for (size_t i = 1, j = 0; i < n; ++i) {
    size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (size_t len = 2; len <= n; len <<= 1) {
    const double ang = (inverse ? kTwoPi : -kTwoPi) / static_cast<double>(len);
    const cd wlen(std::cos(ang), std::sin(ang));
    for (size_t i = 0; i < n; i += len) {
      cd w(1.0, 0.0);
      for (size_t j = 0; j < len / 2; ++j) {
        const cd u = a[i + j];
        const cd v = a[i + j + len / 2] * w;
        a[i + j] = u + v;
        a[i + j + len / 2] = u - v;
        w *= wlen;
      }
    }
  }
}

}  // namespace

void transform(std::vector<cd>& a, bool inverse) {
  if (a.size() <= 1) return;
  if (is_pow2(a.size())) {
    fft_radix2(a, inverse);
  } else {
    dft_direct(a, inverse);
  }
  if (inverse) {
    const double scale = 1.0 / static_cast<double>(a.size());
    for (cd& v : a) v *= scale;
  }
}

std::vector<cd> rfft(std::span<const double> x) {
  const int n = static_cast<int>(x.size());
  std::vector<cd> buf(x.begin(), x.end());
  transform(buf, false);
  buf.resize(static_cast<size_t>(n / 2 + 1));
  return buf;
}

std::vector<double> irfft(std::span<const cd> bins, int n) {
  const int num_bins = n / 2 + 1;
  if (static_cast<int>(bins.size()) != num_bins)
    throw ConfigError("irfft: bin count does not match transform size");
  std::vector<cd> full(static_cast<size_t>(n));
  full[0] = cd(bins[0].real(), 0.0);
  full[static_cast<size_t>(n / 2)] = cd(bins[static_cast<size_t>(n / 2)].real(), 0.0);
  for (int k = 1; k < n / 2; ++k) {
    full[static_cast<size_t>(k)] = bins[static_cast<size_t>(k)];
    full[static_cast<size_t>(n - k)] = std::conj(bins[static_cast<size_t>(k)]);
  }
  transform(full, true);
  std::vector<double> out(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) out[static_cast<size_t>(i)] = full[static_cast<size_t>(i)].real();
  return out;
}

std::vector<double> rfft_adjoint(std::span<const cd> grad_bins, int n) {
  const int num_bins = n / 2 + 1;
  if (static_cast<int>(grad_bins.size()) != num_bins)
    throw ConfigError("rfft_adjoint: bin count does not match transform size");
  // dL/dx_j = sum_k Re(C_k * e^{+i 2 pi k j / n}) over the kept bins only.
  std::vector<cd> buf(static_cast<size_t>(n), cd(0.0, 0.0));
  for (int k = 0; k < num_bins; ++k) buf[static_cast<size_t>(k)] = grad_bins[static_cast<size_t>(k)];
  transform(buf, true);
  std::vector<double> out(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i)
    out[static_cast<size_t>(i)] = buf[static_cast<size_t>(i)].real() * static_cast<double>(n);
  return out;
}

std::vector<cd> irfft_adjoint(std::span<const double> grad_time, int n) {
  if (static_cast<int>(grad_time.size()) != n)
    throw ConfigError("irfft_adjoint: gradient length does not match transform size");
  const int num_bins = n / 2 + 1;
  std::vector<cd> buf(grad_time.begin(), grad_time.end());
  transform(buf, false);
  std::vector<cd> out(static_cast<size_t>(num_bins));
  const double inv_n = 1.0 / static_cast<double>(n);
  for (int k = 0; k < num_bins; ++k) {
    const double weight = (k == 0 || k == n / 2) ? inv_n : 2.0 * inv_n;
    out[static_cast<size_t>(k)] = buf[static_cast<size_t>(k)] * weight;
  }
  // The forward irfft ignores the imaginary parts of DC and Nyquist, so
  // no gradient flows into them.
  out[0] = cd(out[0].real(), 0.0);
  out[static_cast<size_t>(n / 2)] = cd(out[static_cast<size_t>(n / 2)].real(), 0.0);
  return out;
}

}  // namespace ovr::fft
