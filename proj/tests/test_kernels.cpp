#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "doctest.h"
#include "vpsm/kernels.hpp"
#include "vpsm/tridiag.hpp"

using namespace vpsm;

namespace {

std::vector<double> noise(std::size_t n, unsigned seed, double lo = -1.0, double hi = 1.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> d(lo, hi);
  std::vector<double> v(n);
  for (auto& x : v) x = d(rng);
  return v;
}

}  // namespace

TEST_SUITE("kernels") {
  TEST_CASE("active table is usable") {
    const auto& t = kernels::active();
    const kernels::Isa before = t.isa;
    CHECK(t.solve_tridiag4 != nullptr);
    CHECK(t.conservative_update != nullptr);
    CHECK(t.sls_blend != nullptr);
    CHECK(kernels::select(kernels::Isa::Scalar));
    CHECK(kernels::active().isa == kernels::Isa::Scalar);
    if (kernels::avx2_table() != nullptr) CHECK(kernels::select(kernels::Isa::Avx2));
    kernels::select(before);
  }

  TEST_CASE("avx2 variants reproduce the scalar reference bit for bit") {
    const kernels::KernelTable* simd = kernels::avx2_table();
    if (simd == nullptr) {
      MESSAGE("AVX2 kernels unavailable on this build or CPU");
      return;
    }
    const auto& ref = kernels::scalar_table();

    for (EndCondition ec : {EndCondition::Periodic, EndCondition::Natural}) {
      for (int n : {4, 33, 128}) {
        const SlopeSolver s(n, ec);
        auto a = noise(static_cast<std::size_t>(n) * kernels::kLanes, 11u + n);
        auto b = a;
        ref.solve_tridiag4(s.factors(), a.data());
        simd->solve_tridiag4(s.factors(), b.data());
        CHECK(a == b);
      }
    }

    for (int n : {1, 3, 4, 7, 64, 129}) {
      const auto f = noise(n, 3u + n);
      const auto sw = noise(n + 1, 5u + n);
      std::vector<double> o1(n), o2(n);
      ref.conservative_update(f.data(), sw.data(), o1.data(), n);
      simd->conservative_update(f.data(), sw.data(), o2.data(), n);
      CHECK(o1 == o2);

      auto theta = noise(n, 9u + n, -0.5, 0.5);
      theta[0] = std::numeric_limits<double>::infinity();
      if (n > 2) theta[2] = -std::numeric_limits<double>::infinity();
      std::vector<double> b1(n), b2(n);
      ref.sls_blend(f.data(), sw.data(), theta.data(), 5.0, b1.data(), n);
      simd->sls_blend(f.data(), sw.data(), theta.data(), 5.0, b2.data(), n);
      CHECK(b1 == b2);
    }
  }
}
