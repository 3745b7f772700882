#include <cmath>
#include <numbers>
#include <unordered_map>
#include <utility>

#include "qfall/errors.hpp"
#include "qfall/lattice.hpp"

namespace qfall::detail {
namespace {

// Twiddles exp(-2 pi i k / n), k < n/2, evaluated directly (no recurrence) so the
// round trip stays at the 1e-15 level for n up to 2^16.
const ComplexVector& twiddles(std::size_t n) {
  thread_local std::unordered_map<std::size_t, ComplexVector> cache;
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  ComplexVector w(n / 2);
  for (std::size_t k = 0; k < n / 2; ++k) {
    const double angle = -2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
    w[k] = {std::cos(angle), std::sin(angle)};
  }
  return cache.emplace(n, std::move(w)).first->second;
}

void bit_reverse(std::span<Complex> data) {
  const std::size_t n = data.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(data[i], data[j]);
  }
}

}  // namespace

void fft_inplace(std::span<Complex> data, bool forward) {
  const std::size_t n = data.size();
  if (n < 2) return;
  if (!is_power_of_two(n)) throw InvalidArgument("fft: length must be a power of two");

  bit_reverse(data);
  const ComplexVector& w = twiddles(n);
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t half = len / 2;
    const std::size_t stride = n / len;
    for (std::size_t start = 0; start < n; start += len) {
      for (std::size_t k = 0; k < half; ++k) {
        const Complex tw = forward ? w[k * stride] : std::conj(w[k * stride]);
        const Complex u = data[start + k];
        const Complex v = data[start + k + half] * tw;
        data[start + k] = u + v;
        data[start + k + half] = u - v;
      }
    }
  }
}

}  // namespace qfall::detail
