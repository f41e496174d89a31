#include <atomic>
#include <cstdlib>
#include <string_view>

#include "bigm/simd/kernels.hpp"

namespace bigm::simd {
namespace {

const Kernels* initial_choice() {
  const char* env = std::getenv("BIGM_SIMD");
  if (env != nullptr && std::string_view(env) == "scalar") return &scalar_kernels();
  if (const Kernels* k = avx2_kernels()) return k;
  return &scalar_kernels();
}

std::atomic<const Kernels*>& current() {
  static std::atomic<const Kernels*> ptr{initial_choice()};
  return ptr;
}

}  // namespace

const Kernels& active() { return *current().load(std::memory_order_acquire); }

bool select(Isa isa) {
  const Kernels* k = isa == Isa::scalar ? &scalar_kernels() : avx2_kernels();
  if (k == nullptr) return false;
  current().store(k, std::memory_order_release);
  return true;
}

}  // namespace bigm::simd
