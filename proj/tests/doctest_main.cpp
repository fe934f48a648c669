#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include "beamsim/nn/gemm.hpp"

int main(int argc, char** argv) {
  beamsim::nn::ensure_fast_blas_kernel(argc, argv);
  beamsim::nn::set_blas_threads(1);
  return doctest::Context(argc, argv).run();
}
