#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "rlw/grid.hpp"

namespace rlw {

/// Physical constants of the regularized long-wave model
///   u_t + alpha*u_x + beta*u_y + alpha*u*u_x + beta*u*u_y - mu*u_xxt - theta*u_yyt = 0.
/// On 1D grids beta and theta must be exactly zero.
struct RlwParams {
    double alpha = 1.0;
    double beta = 0.0;
    double mu = 1.0;
    double theta = 0.0;
    /// 2/3-rule truncation around the quadratic products. Off by default:
    /// conservation never needs it, it only trims aliased high modes.
    bool dealias = false;

    /// Throws ConfigError unless the parameters are admissible for `dim`.
    void validate(int dim) const;
};

/// (1 - mu*dxx - theta*dyy) u. Self-adjoint, positive definite.
Field apply_helmholtz(const Field& u, const RlwParams& p);

/// Exact inverse of apply_helmholtz (diagonal in Fourier space).
Field apply_helmholtz_inv(const Field& u, const RlwParams& p);

/// -(1 - mu*dxx - theta*dyy)^{-1} (alpha*dx + beta*dy) u.
/// Skew-adjoint; output has exactly zero mean.
Field apply_skew_grad(const Field& u, const RlwParams& p);

/// Advection linearized about a frozen state w:
///   -[alpha*v_x + beta*v_y + (alpha/3)(w*v_x + (w v)_x) + (beta/3)(w*v_y + (w v)_y)]
/// with pointwise products and spectral derivatives. Skew-adjoint for every w.
Field apply_linearized_advection(const Field& w, const Field& v, const RlwParams& p);

/// Reusable operator workspace: precomputed Fourier multipliers plus scratch
/// buffers, so the time-stepping hot path does no per-call allocation.
/// Span arguments must have grid->total() elements; `out` may not alias inputs.
class RlwOperators {
  public:
    RlwOperators(GridPtr grid, RlwParams params);

    const GridPtr& grid() const { return grid_; }
    const RlwParams& params() const { return params_; }

    void helmholtz(std::span<const double> in, std::span<double> out);
    void helmholtz_inv(std::span<const double> in, std::span<double> out);
    void skew_grad(std::span<const double> in, std::span<double> out);
    void linearized_advection(std::span<const double> w, std::span<const double> v,
                              std::span<double> out);
    /// helmholtz_inv(linearized_advection(w, v)): the matrix-vector product of
    /// the linearized evolution u' = D^{-1} G(w) u, fused to save transforms.
    void linearized_flow(std::span<const double> w, std::span<const double> v,
                         std::span<double> out);

    /// In-place 2/3-rule truncation (modes |m| > n/3 zeroed). No-op mask is
    /// built only when params.dealias is set; callable regardless for tests.
    void project_two_thirds(std::span<double> u);

  private:
    void advection_core(std::span<const double> w, std::span<const double> v,
                        std::span<double> out);

    GridPtr grid_;
    RlwParams params_;
    std::vector<double> helm_, helm_inv_;  // real multipliers of D, D^{-1}
    std::vector<double> kx_, ky_;          // Nyquist-zeroed wavenumbers, flattened
    Symbol skew_;                          // multiplier of the skew gradient
    std::vector<std::uint8_t> keep_;       // 2/3-rule mask (flattened)
    SpectralScratch scratch_;
    std::vector<Complex> spec_, spec2_;
    std::vector<double> vx_, vy_, wx_, wy_, prod_, fw_, fv_;
};

/// Which operator materialize_dense should expand.
enum class OpTag { helmholtz, helmholtz_inv, skew_grad, linearized_advection };

/// Explicit row-major matrix of the chosen operator, built column-by-column
/// from unit impulses. Brute-force oracle: refuses grids above 64 nodes.
/// `w` is the frozen state, required for linearized_advection and ignored else.
std::vector<double> materialize_dense(OpTag tag, const Field* w, const RlwParams& p,
                                      const GridPtr& grid);

}  // namespace rlw
