// SPDX-License-Identifier: Apache-2.0
//
// beamsim - mmWave beam-training simulator and learned beam predictors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef BEAMSIM_NN_GEMM_HPP
#define BEAMSIM_NN_GEMM_HPP

#include <cstdio>
#include <cstdlib>
#include <cstring>

#ifdef BEAMSIM_USE_BLAS
#include <cblas.h>
#if defined(__linux__)
#include <unistd.h>
#endif
extern "C" {
// Present when the linked BLAS is OpenBLAS; weak so other BLAS builds link.
char* openblas_get_corename(void) __attribute__((weak));
}
#endif

namespace beamsim::nn {

/// Pins the BLAS thread count via environment (effective if called before the
/// first BLAS invocation). Single-threaded kernels keep training bit-stable.
inline void set_blas_threads(int n) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%d", n > 0 ? n : 1);
  ::setenv("OPENBLAS_NUM_THREADS", buf, 1);
  ::setenv("OMP_NUM_THREADS", buf, 1);
}

/// OpenBLAS picks its kernel family in a library constructor, before main().
/// On AVX-512 CPUs whose CPUID the installed build does not recognize it
/// silently falls back to the SSE2 kernels, costing ~4x on GEMM throughput.
/// When that happens this re-executes the process once with
/// OPENBLAS_CORETYPE pinned to the AVX-512 kernel set. A user-provided
/// OPENBLAS_CORETYPE always wins. Call first thing in main().
inline void ensure_fast_blas_kernel(int argc, char** argv) {
  (void)argc;
  (void)argv;
#if defined(BEAMSIM_USE_BLAS) && defined(__linux__) && defined(__x86_64__) && \
    defined(__GNUC__)
  if (std::getenv("BEAMSIM_BLAS_PINNED") != nullptr) return;
  if (std::getenv("OPENBLAS_CORETYPE") != nullptr) return;
  if (&openblas_get_corename == nullptr) return;  // not OpenBLAS
  if (!__builtin_cpu_supports("avx512f")) return;
  const char* core = openblas_get_corename();
  if (core == nullptr) return;
  // Kernel families a correct detection would pick on an AVX-512 machine.
  for (const char* good : {"SkylakeX", "CooperLake", "SapphireRapids", "Zen"}) {
    if (std::strcmp(core, good) == 0) return;
  }
  ::setenv("OPENBLAS_CORETYPE", "SKYLAKEX", 1);
  ::setenv("BEAMSIM_BLAS_PINNED", "1", 1);
  ::execv("/proc/self/exe", argv);  // returns only on failure
  ::unsetenv("OPENBLAS_CORETYPE");  // keep the misdetected-but-working setup
#endif
}

#ifdef BEAMSIM_USE_BLAS

/// Row-major C(m,n) = alpha * op(A) * op(B) + beta * C.
inline void gemm(bool trans_a, bool trans_b, int m, int n, int k, float alpha,
                 const float* a, int lda, const float* b, int ldb, float beta,
                 float* c, int ldc) {
  cblas_sgemm(CblasRowMajor, trans_a ? CblasTrans : CblasNoTrans,
              trans_b ? CblasTrans : CblasNoTrans, m, n, k, alpha, a, lda, b, ldb,
              beta, c, ldc);
}

inline void gemm(bool trans_a, bool trans_b, int m, int n, int k, double alpha,
                 const double* a, int lda, const double* b, int ldb, double beta,
                 double* c, int ldc) {
  cblas_dgemm(CblasRowMajor, trans_a ? CblasTrans : CblasNoTrans,
              trans_b ? CblasTrans : CblasNoTrans, m, n, k, alpha, a, lda, b, ldb,
              beta, c, ldc);
}

#else

// Portable fallback, considerably slower than a tuned BLAS.
template <typename T>
inline void gemm(bool trans_a, bool trans_b, int m, int n, int k, T alpha,
                 const T* a, int lda, const T* b, int ldb, T beta, T* c, int ldc) {
  auto at = [&](int i, int j) { return trans_a ? a[j * lda + i] : a[i * lda + j]; };
  auto bt = [&](int i, int j) { return trans_b ? b[j * ldb + i] : b[i * ldb + j]; };
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) {
      T acc = 0;
      for (int p = 0; p < k; ++p) acc += at(i, p) * bt(p, j);
      c[i * ldc + j] = alpha * acc + beta * c[i * ldc + j];
    }
  }
}

#endif

}  // namespace beamsim::nn

#endif
