#include <benchmark/benchmark.h>

#include "beamsim/nn/gemm.hpp"

int main(int argc, char** argv) {
  beamsim::nn::ensure_fast_blas_kernel(argc, argv);
  beamsim::nn::set_blas_threads(1);
  benchmark::Initialize(&argc, argv);
  benchmark::RunSpecifiedBenchmarks();
  benchmark::Shutdown();
  return 0;
}
