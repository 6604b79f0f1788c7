#include <atomic>
#include <cstdlib>
#include <string>

#include "seqmeas/kernels.hpp"

namespace seqmeas::kernels {

namespace {

constexpr KernelTable kScalarTable{Backend::Scalar, &scalar::cdotc,
                                   &scalar::cgemm};
#if defined(SEQMEAS_HAVE_AVX2_KERNELS)
constexpr KernelTable kAvx2Table{Backend::Avx2, &avx2::cdotc, &avx2::cgemm};
#endif

const KernelTable* initial_table() {
  const char* env = std::getenv("SEQMEAS_KERNELS");
  if (env != nullptr && std::string(env) == "scalar") return &kScalarTable;
  return &table(avx2_available() ? Backend::Avx2 : Backend::Scalar);
}

std::atomic<const KernelTable*>& selected() {
  static std::atomic<const KernelTable*> current{initial_table()};
  return current;
}

}  // namespace

bool avx2_available() {
#if defined(SEQMEAS_HAVE_AVX2_KERNELS)
  static const bool ok =
      __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return ok;
#else
  return false;
#endif
}

const KernelTable& table(Backend backend) {
#if defined(SEQMEAS_HAVE_AVX2_KERNELS)
  if (backend == Backend::Avx2 && avx2_available()) return kAvx2Table;
#endif
  (void)backend;
  return kScalarTable;
}

const KernelTable& active() {
  return *selected().load(std::memory_order_acquire);
}

bool set_backend(Backend backend) {
  if (backend == Backend::Avx2 && !avx2_available()) return false;
  selected().store(&table(backend), std::memory_order_release);
  return true;
}

std::string_view backend_name(Backend backend) {
  switch (backend) {
    case Backend::Scalar:
      return "scalar";
    case Backend::Avx2:
      return "avx2";
  }
  return "unknown";
}

}  // namespace seqmeas::kernels
