#include <atomic>
#include <cstdlib>

#include "psox/common.hpp"
#include "psox/kernels.hpp"

namespace psox::kern {

bool avx2_supported() {
#if defined(__x86_64__) || defined(__i386__)
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

namespace {

const Ops* pick_default() {
  if (const Ops* o = avx2_ops(); o && avx2_supported()) return o;
  if (const Ops* o = neon_ops()) return o;  // compiled only on aarch64
  return &scalar_ops();
}

const Ops* resolve(const std::string& name) {
  if (name == "auto") return pick_default();
  if (name == "scalar") return &scalar_ops();
  if (name == "avx2") {
    const Ops* o = avx2_ops();
    require(o != nullptr && avx2_supported(), "avx2 kernels unavailable on this machine");
    return o;
  }
  if (name == "neon") {
    const Ops* o = neon_ops();
    require(o != nullptr, "neon kernels unavailable on this machine");
    return o;
  }
  throw ArgumentError("unknown kernel backend '" + name + "' (scalar|avx2|neon|auto)");
}

std::atomic<const Ops*>& slot() {
  static std::atomic<const Ops*> s = [] {
    const char* env = std::getenv("PSOX_KERNEL");
    return env ? resolve(env) : pick_default();
  }();
  return s;
}

}  // namespace

const Ops& active_ops() { return *slot().load(std::memory_order_relaxed); }

void force_backend(const std::string& name) {
  slot().store(resolve(name), std::memory_order_relaxed);
}

std::vector<const Ops*> compiled_backends() {
  std::vector<const Ops*> v = {&scalar_ops()};
  if (const Ops* o = avx2_ops(); o && avx2_supported()) v.push_back(o);
  if (const Ops* o = neon_ops()) v.push_back(o);
  return v;
}

}  // namespace psox::kern
