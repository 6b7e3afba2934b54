#include <atomic>
#include <cstdlib>
#include <string_view>

#include "chest/simd/kernels.hpp"

#if defined(CHEST_HAVE_AVX2)
namespace chest::simd::avx2 {
const KernelTable& table() noexcept;
}
#endif

namespace chest::simd {
namespace {

Backend detect() noexcept {
  if (const char* env = std::getenv("CHEST_SIMD")) {
    const std::string_view v(env);
    if (v == "scalar") return Backend::Scalar;
  }
  return avx2_supported() ? Backend::Avx2 : Backend::Scalar;
}

const KernelTable* table_for(Backend b) noexcept {
  if (b == Backend::Avx2 && avx2_supported()) return avx2_table();
  return &scalar::table();
}

std::atomic<const KernelTable*>& active() noexcept {
  static std::atomic<const KernelTable*> ptr{table_for(detect())};
  return ptr;
}

}  // namespace

bool avx2_compiled() noexcept {
#if defined(CHEST_HAVE_AVX2)
  return true;
#else
  return false;
#endif
}

bool avx2_supported() noexcept {
#if defined(CHEST_HAVE_AVX2)
  static const bool ok = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return ok;
#else
  return false;
#endif
}

const KernelTable* avx2_table() noexcept {
#if defined(CHEST_HAVE_AVX2)
  return &avx2::table();
#else
  return nullptr;
#endif
}

Backend active_backend() noexcept {
  return active().load(std::memory_order_acquire) == &scalar::table() ? Backend::Scalar
                                                                       : Backend::Avx2;
}

std::string_view backend_name(Backend b) noexcept {
  return b == Backend::Avx2 ? "avx2" : "scalar";
}

bool set_backend(Backend b) noexcept {
  const KernelTable* t = table_for(b);
  active().store(t, std::memory_order_release);
  return b == Backend::Scalar || t != &scalar::table();
}

void reset_backend() noexcept { active().store(table_for(detect()), std::memory_order_release); }

const KernelTable& kernels() noexcept { return *active().load(std::memory_order_acquire); }

}  // namespace chest::simd
