#include <atomic>
#include <cstdlib>
#include <string_view>

#include "natmodes/error.hpp"
#include "natmodes/kernels.hpp"

namespace natmodes::kernels {

namespace {

Isa detect() noexcept {
  if (const char* env = std::getenv("NATMODES_ISA"); env != nullptr && std::string_view(env) == "scalar") {
    return Isa::Scalar;
  }
  return isa_available(Isa::Avx2) ? Isa::Avx2 : Isa::Scalar;
}

std::atomic<Isa>& active() {
  static std::atomic<Isa> isa{detect()};
  return isa;
}

}  // namespace

const char* isa_name(Isa isa) noexcept {
  switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
  }
  return "unknown";
}

bool isa_available(Isa isa) noexcept {
  switch (isa) {
    case Isa::Scalar: return true;
    case Isa::Avx2:
#if defined(NATMODES_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
  }
  return false;
}

Isa active_isa() noexcept { return active().load(std::memory_order_relaxed); }

void set_active_isa(Isa isa) {
  if (!isa_available(isa)) throw Error(ErrorKind::Unsupported, std::string("ISA not available: ") + isa_name(isa));
  active().store(isa, std::memory_order_relaxed);
}

#if !defined(NATMODES_HAVE_AVX2)
void wolter_batch_avx2(const RecursionBatch&, RecursionOutput&) {
  throw Error(ErrorKind::Unsupported, "built without AVX2 kernels");
}
void product_avx2(std::span<const double>, std::span<const double>, std::span<const std::complex<double>>,
                  std::span<ScaledComplex>) {
  throw Error(ErrorKind::Unsupported, "built without AVX2 kernels");
}
#endif

void wolter_batch(const RecursionBatch& in, RecursionOutput& out) {
  if (active_isa() == Isa::Avx2) {
    wolter_batch_avx2(in, out);
  } else {
    wolter_batch_scalar(in, out);
  }
}

void product(std::span<const double> mu_re, std::span<const double> mu_im, std::span<const std::complex<double>> z,
             std::span<ScaledComplex> out) {
  if (active_isa() == Isa::Avx2) {
    product_avx2(mu_re, mu_im, z, out);
  } else {
    product_scalar(mu_re, mu_im, z, out);
  }
}

}  // namespace natmodes::kernels
