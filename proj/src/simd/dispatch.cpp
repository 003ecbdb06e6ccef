#include <atomic>
#include <cstdlib>
#include <cstring>

#include "fkfp/simd/kernels.hpp"

namespace fkfp::simd {

#if defined(__x86_64__) || defined(__i386__)
extern const Backend avx2_backend;
bool avx2_supported() { return __builtin_cpu_supports("avx2"); }
#else
bool avx2_supported() { return false; }
#endif

#if defined(__aarch64__)
extern const Backend neon_backend;
bool neon_supported() { return true; }
#else
bool neon_supported() { return false; }
#endif

const Backend* backend_by_name(const char* name) {
  if (std::strcmp(name, "scalar") == 0) return &scalar_backend;
#if defined(__x86_64__) || defined(__i386__)
  if (std::strcmp(name, "avx2") == 0 && avx2_supported()) return &avx2_backend;
#endif
#if defined(__aarch64__)
  if (std::strcmp(name, "neon") == 0) return &neon_backend;
#endif
  return nullptr;
}

namespace {

const Backend* pick_default() {
  if (const char* env = std::getenv("FKFP_SIMD")) {
    if (const Backend* b = backend_by_name(env)) return b;
  }
#if defined(__x86_64__) || defined(__i386__)
  if (avx2_supported()) return &avx2_backend;
#endif
#if defined(__aarch64__)
  return &neon_backend;
#endif
  return &scalar_backend;
}

std::atomic<const Backend*> g_backend{nullptr};

}  // namespace

const Backend& backend() {
  const Backend* b = g_backend.load(std::memory_order_acquire);
  if (!b) {
    b = pick_default();
    g_backend.store(b, std::memory_order_release);
  }
  return *b;
}

bool select_backend(const char* name) {
  const Backend* b = backend_by_name(name);
  if (!b) return false;
  g_backend.store(b, std::memory_order_release);
  return true;
}

}  // namespace fkfp::simd
