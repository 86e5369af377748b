#include <immintrin.h>

#include <algorithm>
#include <cmath>

#include "vpsm/kernels.hpp"

namespace vpsm::kernels {
namespace {

void solve_tridiag4_avx2(const TridiagFactors& f, double* x) {
  const int n = f.n;
  __m256d prev = _mm256_mul_pd(_mm256_loadu_pd(x), _mm256_set1_pd(f.inv_pivot[0]));
  _mm256_storeu_pd(x, prev);
  for (int k = 1; k < n; ++k) {
    double* row = x + k * kLanes;
    const __m256d rhs = _mm256_loadu_pd(row);
    const __m256d t = _mm256_sub_pd(rhs, _mm256_mul_pd(_mm256_set1_pd(f.lower[k]), prev));
    prev = _mm256_mul_pd(t, _mm256_set1_pd(f.inv_pivot[k]));
    _mm256_storeu_pd(row, prev);
  }
  __m256d next = prev;
  for (int k = n - 2; k >= 0; --k) {
    double* row = x + k * kLanes;
    const __m256d cur = _mm256_loadu_pd(row);
    next = _mm256_sub_pd(cur, _mm256_mul_pd(_mm256_set1_pd(f.upper[k]), next));
    _mm256_storeu_pd(row, next);
  }
  if (f.cyclic_z != nullptr) {
    const __m256d first = _mm256_loadu_pd(x);
    const __m256d last = _mm256_loadu_pd(x + (n - 1) * kLanes);
    const __m256d fact = _mm256_mul_pd(
        _mm256_add_pd(first, _mm256_mul_pd(_mm256_set1_pd(f.cyclic_w_last), last)),
        _mm256_set1_pd(f.cyclic_inv_denom));
    for (int k = 0; k < n; ++k) {
      double* row = x + k * kLanes;
      const __m256d cur = _mm256_loadu_pd(row);
      _mm256_storeu_pd(row, _mm256_sub_pd(cur, _mm256_mul_pd(fact, _mm256_set1_pd(f.cyclic_z[k]))));
    }
  }
}

void conservative_update_avx2(const double* f, const double* swept, double* out, int n) {
  int i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d s0 = _mm256_loadu_pd(swept + i);
    const __m256d s1 = _mm256_loadu_pd(swept + i + 1);
    const __m256d v = _mm256_loadu_pd(f + i);
    _mm256_storeu_pd(out + i, _mm256_add_pd(v, _mm256_sub_pd(s0, s1)));
  }
  for (; i < n; ++i) out[i] = f[i] + (swept[i] - swept[i + 1]);
}

void sls_blend_avx2(const double* psm, const double* upwind, const double* theta, double K,
                    double* out, int n) {
  const __m256d abs_mask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));
  const __m256d vk = _mm256_set1_pd(K);
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d zero = _mm256_setzero_pd();
  int i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d th = _mm256_and_pd(_mm256_loadu_pd(theta + i), abs_mask);
    const __m256d g = _mm256_max_pd(_mm256_min_pd(_mm256_mul_pd(vk, th), one), zero);
    const __m256d hi = _mm256_mul_pd(g, _mm256_loadu_pd(psm + i));
    const __m256d lo = _mm256_mul_pd(_mm256_sub_pd(one, g), _mm256_loadu_pd(upwind + i));
    _mm256_storeu_pd(out + i, _mm256_add_pd(hi, lo));
  }
  for (; i < n; ++i) {
    const double g = std::max(0.0, std::min(K * std::fabs(theta[i]), 1.0));
    out[i] = g * psm[i] + (1.0 - g) * upwind[i];
  }
}

}  // namespace

const KernelTable* avx2_table_unchecked() {
  static const KernelTable table{Isa::Avx2, "avx2", &solve_tridiag4_avx2,
                                 &conservative_update_avx2, &sls_blend_avx2};
  return &table;
}

}  // namespace vpsm::kernels
