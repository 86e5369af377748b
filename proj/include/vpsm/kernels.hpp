#pragma once

// Data-parallel inner loops of the transport sweeps. Every kernel has a
// scalar reference implementation; SIMD variants are selected at run time
// and must reproduce the scalar results bit for bit (no FMA contraction,
// identical operation order).

namespace vpsm::kernels {

/// Number of independent lines solved together by solve_tridiag4.
inline constexpr int kLanes = 4;

/// LU factors of a (possibly cyclic) tridiagonal matrix, see SlopeSolver.
struct TridiagFactors {
  int n = 0;
  const double* lower = nullptr;      // sub-diagonal coefficient of row k (k >= 1)
  const double* upper = nullptr;      // eliminated super-diagonal c'_k
  const double* inv_pivot = nullptr;  // 1 / pivot of row k
  const double* cyclic_z = nullptr;   // Sherman-Morrison vector, null if not cyclic
  double cyclic_w_last = 0.0;
  double cyclic_inv_denom = 0.0;
};

enum class Isa { Scalar, Avx2 };

struct KernelTable {
  Isa isa;
  const char* name;
  /// Solve kLanes systems in place; x is interleaved as x[k * kLanes + lane].
  void (*solve_tridiag4)(const TridiagFactors& f, double* x);
  /// out[i] = f[i] + swept[i] - swept[i+1], i < n (swept has n+1 entries).
  void (*conservative_update)(const double* f, const double* swept, double* out, int n);
  /// out[i] = g psm[i] + (1 - g) upwind[i], g = max(0, min(K |theta[i]|, 1)).
  void (*sls_blend)(const double* psm, const double* upwind, const double* theta, double K,
                    double* out, int n);
};

const KernelTable& scalar_table();
/// nullptr when the AVX2 variant was not built or the CPU lacks AVX2.
const KernelTable* avx2_table();

/// Kernel table used by the solvers. Defaults to the widest supported ISA;
/// the environment variable VPSM_KERNELS=scalar forces the reference path.
const KernelTable& active();

/// Force a kernel set; returns false (and leaves the selection unchanged)
/// when the requested ISA is unavailable.
bool select(Isa isa);

const char* to_string(Isa isa);

}  // namespace vpsm::kernels
