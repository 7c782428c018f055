#include <cstdlib>
#include <string>

#include "isoperim/kernels.hpp"

namespace isoperim::kernels {

#if defined(ISOPERIM_HAVE_AVX2)
namespace detail {
const KernelSet& avx2_kernel_set();
}
#endif

namespace {

bool cpu_has_avx2() {
#if defined(ISOPERIM_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

const KernelSet* initial_choice() {
  if (const char* env = std::getenv("ISOPERIM_SIMD"); env && std::string(env) == "scalar") {
    return &scalar_kernels();
  }
  if (const KernelSet* v = avx2_kernels()) return v;
  return &scalar_kernels();
}

const KernelSet*& current() {
  static const KernelSet* chosen = initial_choice();
  return chosen;
}

}  // namespace

const KernelSet* avx2_kernels() {
#if defined(ISOPERIM_HAVE_AVX2)
  if (cpu_has_avx2()) return &detail::avx2_kernel_set();
#endif
  return nullptr;
}

const KernelSet& active_kernels() { return *current(); }

bool select_kernels(std::string_view name) {
  if (name == "scalar") {
    current() = &scalar_kernels();
    return true;
  }
  if (name == "avx2") {
    if (const KernelSet* v = avx2_kernels()) {
      current() = v;
      return true;
    }
  }
  return false;
}

}  // namespace isoperim::kernels
