#include <atomic>
#include <cstdlib>
#include <cstring>

#include "vpsm/kernels.hpp"

namespace vpsm::kernels {

#ifdef VPSM_HAVE_AVX2
const KernelTable* avx2_table_unchecked();
#endif

namespace {

bool cpu_has_avx2() {
#if defined(VPSM_HAVE_AVX2) && (defined(__x86_64__) || defined(__i386__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

const KernelTable* initial_selection() {
  const char* env = std::getenv("VPSM_KERNELS");
  if (env != nullptr && std::strcmp(env, "scalar") == 0) return &scalar_table();
  if (const KernelTable* t = avx2_table()) return t;
  return &scalar_table();
}

std::atomic<const KernelTable*>& selection() {
  static std::atomic<const KernelTable*> current{initial_selection()};
  return current;
}

}  // namespace

const KernelTable* avx2_table() {
#ifdef VPSM_HAVE_AVX2
  static const bool ok = cpu_has_avx2();
  return ok ? avx2_table_unchecked() : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable& active() { return *selection().load(std::memory_order_relaxed); }

bool select(Isa isa) {
  const KernelTable* t = isa == Isa::Scalar ? &scalar_table() : avx2_table();
  if (t == nullptr) return false;
  selection().store(t, std::memory_order_relaxed);
  return true;
}

const char* to_string(Isa isa) { return isa == Isa::Scalar ? "scalar" : "avx2"; }

}  // namespace vpsm::kernels
