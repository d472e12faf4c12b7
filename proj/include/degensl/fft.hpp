// Minimal iterative radix-2 complex FFT plus the circular-convolution
// helper used by the Toeplitz/Hankel kernel applies in the GL solver.
#pragma once

#include <cmath>
#include <vector>

#include "degensl/types.hpp"

namespace degensl::fft {

inline std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

inline void transform(std::vector<cplx>& a, bool inverse) {
  const std::size_t n = a.size();
  if (n < 2) return;
  // bit reversal
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = 2.0 * kPi / double(len) * (inverse ? 1.0 : -1.0);
    const cplx wlen(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < n; i += len) {
      cplx w(1.0, 0.0);
      for (std::size_t j = 0; j < len / 2; ++j) {
        const cplx u = a[i + j];
        const cplx v = a[i + j + len / 2] * w;
        a[i + j] = u + v;
        a[i + j + len / 2] = u - v;
        w *= wlen;
      }
    }
  }
  if (inverse)
    for (cplx& x : a) x /= double(n);
}

/// Reusable convolver: y[j] = sum_s kernel[j + s] v[s] (Hankel) and
/// y[j] = sum_s kernel[|j - s|] v[s] (Toeplitz), for 0 <= j, s <= n-1,
/// with the kernel given on 0..2(n-1).
class SymbolConvolver {
public:
  // kernel: samples k[0..m]; applies use indices up to 2(n-1) <= m.
  explicit SymbolConvolver(const std::vector<cplx>& kernel, int n) : n_(n) {
    const std::size_t need = 2 * std::size_t(n) - 1;
    if (kernel.size() < need)
      throw error(errc::validation, "SymbolConvolver: kernel too short");
    len_ = next_pow2(2 * need);
    // Toeplitz symbol: t[d] for d = -(n-1)..(n-1) embedded circularly,
    // t[d] = kernel[|d|]
    toeplitz_hat_.assign(len_, cplx(0, 0));
    for (int d = 0; d < n_; ++d) toeplitz_hat_[d] = kernel[d];
    for (int d = 1; d < n_; ++d) toeplitz_hat_[len_ - d] = kernel[d];
    transform(toeplitz_hat_, false);
    // Hankel symbol: h[j + s] = kernel[j + s], plain linear convolution with
    // the reversed input
    hankel_hat_.assign(len_, cplx(0, 0));
    for (std::size_t d = 0; d < need; ++d) hankel_hat_[d] = kernel[d];
    transform(hankel_hat_, false);
  }

  /// y[j] = sum_{s=0}^{m-1} kernel[|j-s|] v[s], j = 0..m-1 (m <= n).
  void apply_toeplitz(const std::vector<cplx>& v, int m, std::vector<cplx>& y) const {
    work_.assign(len_, cplx(0, 0));
    for (int s = 0; s < m; ++s) work_[s] = v[s];
    transform(work_, false);
    for (std::size_t i = 0; i < len_; ++i) work_[i] *= toeplitz_hat_[i];
    transform(work_, true);
    y.assign(m, cplx(0, 0));
    for (int j = 0; j < m; ++j) y[j] = work_[j];
  }

  /// y[j] = sum_{s=0}^{m-1} kernel[j+s] v[s], j = 0..m-1 (m <= n).
  void apply_hankel(const std::vector<cplx>& v, int m, std::vector<cplx>& y) const {
    work_.assign(len_, cplx(0, 0));
    for (int s = 0; s < m; ++s) work_[m - 1 - s] = v[s];  // reverse
    transform(work_, false);
    for (std::size_t i = 0; i < len_; ++i) work_[i] *= hankel_hat_[i];
    transform(work_, true);
    y.assign(m, cplx(0, 0));
    for (int j = 0; j < m; ++j) y[j] = work_[j + m - 1];
  }

private:
  int n_;
  std::size_t len_;
  std::vector<cplx> toeplitz_hat_, hankel_hat_;
  mutable std::vector<cplx> work_;
};

}  // namespace degensl::fft
