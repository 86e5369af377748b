#include <algorithm>
#include <cmath>

#include "vpsm/kernels.hpp"

namespace vpsm::kernels {
namespace {

void solve_tridiag4_scalar(const TridiagFactors& f, double* x) {
  const int n = f.n;
  for (int lane = 0; lane < kLanes; ++lane) {
    double* col = x + lane;
    col[0] = col[0] * f.inv_pivot[0];
    for (int k = 1; k < n; ++k) {
      col[k * kLanes] = (col[k * kLanes] - f.lower[k] * col[(k - 1) * kLanes]) * f.inv_pivot[k];
    }
    for (int k = n - 2; k >= 0; --k) {
      col[k * kLanes] = col[k * kLanes] - f.upper[k] * col[(k + 1) * kLanes];
    }
    if (f.cyclic_z != nullptr) {
      const double fact = (col[0] + f.cyclic_w_last * col[(n - 1) * kLanes]) * f.cyclic_inv_denom;
      for (int k = 0; k < n; ++k) col[k * kLanes] = col[k * kLanes] - fact * f.cyclic_z[k];
    }
  }
}

void conservative_update_scalar(const double* f, const double* swept, double* out, int n) {
  for (int i = 0; i < n; ++i) out[i] = f[i] + (swept[i] - swept[i + 1]);
}

void sls_blend_scalar(const double* psm, const double* upwind, const double* theta, double K,
                      double* out, int n) {
  for (int i = 0; i < n; ++i) {
    const double g = std::max(0.0, std::min(K * std::fabs(theta[i]), 1.0));
    out[i] = g * psm[i] + (1.0 - g) * upwind[i];
  }
}

}  // namespace

const KernelTable& scalar_table() {
  static const KernelTable table{Isa::Scalar, "scalar", &solve_tridiag4_scalar,
                                 &conservative_update_scalar, &sls_blend_scalar};
  return table;
}

}  // namespace vpsm::kernels
