#include "landau/platform.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <vector>

#include <cblas.h>
#include <unistd.h>

namespace landau {

bool blas_dgemm_ok() {
  const int n = 256;
  std::vector<double> a(n * n), b(n * n), c(n * n, 0.0);
  for (int i = 0; i < n * n; ++i) {
    a[i] = std::sin(0.37 * i);
    b[i] = std::cos(0.11 * i);
  }
  cblas_dgemm(CblasColMajor, CblasNoTrans, CblasNoTrans, n, n, n, 1.0, a.data(), n, b.data(), n,
              0.0, c.data(), n);
  for (int j = 0; j < n; j += 17)
    for (int i = 0; i < n; i += 13) {
      double s = 0.0;
      for (int k = 0; k < n; ++k) s += a[i + k * n] * b[k + j * n];
      if (std::abs(s - c[i + j * n]) > 1e-9 * (1.0 + std::abs(s))) return false;
    }
  return true;
}

void ensure_working_blas(char** argv) {
  if (blas_dgemm_ok()) return;
  if (std::getenv("OPENBLAS_CORETYPE") != nullptr) return;
  setenv("OPENBLAS_CORETYPE", "Haswell", 1);
  execv("/proc/self/exe", argv);
  std::fprintf(stderr, "warning: BLAS self-check failed and re-exec was not possible\n");
}

}  // namespace landau
