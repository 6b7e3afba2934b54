#pragma once

// Dense double-precision reductions used by every distance computation.
//
// Each kernel has a portable scalar reference (namespace `scalar`) and, on
// x86-64 builds, an AVX2+FMA variant (namespace `avx2`). The `chest::simd`
// entry points forward to whichever table is active; the table is chosen once
// from CPUID and may be overridden with `set_backend` or the CHEST_SIMD
// environment variable (`scalar` | `avx2` | `auto`).
//
// The variants differ only in summation order, so results agree to a few ulp
// of the accumulated magnitude, not bitwise. Within one backend every kernel
// is deterministic.

#include <cstddef>
#include <span>
#include <string_view>

namespace chest::simd {

enum class Backend { Scalar, Avx2 };

struct KernelTable {
  double (*dot)(const double* a, const double* b, std::size_t n);
  double (*squared_norm)(const double* a, std::size_t n);
  double (*squared_distance)(const double* a, const double* b, std::size_t n);
  // ||alpha*x + beta*y||^2
  double (*combo_squared_norm)(double alpha, const double* x, double beta, const double* y,
                               std::size_t n);
  // y += alpha * x
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
};

namespace scalar {
const KernelTable& table() noexcept;
}

bool avx2_compiled() noexcept;
bool avx2_supported() noexcept;

/// Returns nullptr when the AVX2 variant is not compiled in.
const KernelTable* avx2_table() noexcept;

Backend active_backend() noexcept;
std::string_view backend_name(Backend b) noexcept;

/// Falls back to Scalar (and returns false) if the requested backend is unavailable.
bool set_backend(Backend b) noexcept;
void reset_backend() noexcept;

const KernelTable& kernels() noexcept;

inline double dot(std::span<const double> a, std::span<const double> b) noexcept {
  return kernels().dot(a.data(), b.data(), a.size());
}
inline double squared_norm(std::span<const double> a) noexcept {
  return kernels().squared_norm(a.data(), a.size());
}
inline double squared_distance(std::span<const double> a, std::span<const double> b) noexcept {
  return kernels().squared_distance(a.data(), b.data(), a.size());
}
inline double combo_squared_norm(double alpha, std::span<const double> x, double beta,
                                 std::span<const double> y) noexcept {
  return kernels().combo_squared_norm(alpha, x.data(), beta, y.data(), x.size());
}
inline void axpy(double alpha, std::span<const double> x, std::span<double> y) noexcept {
  kernels().axpy(alpha, x.data(), y.data(), x.size());
}

}  // namespace chest::simd
