#pragma once

#include <functional>
#include <span>
#include <vector>

#include "rlw/operators.hpp"
#include "rlw/tableau.hpp"

namespace rlw {

/// Stage slopes and stage values of one implicit RK step. `l` and `q` are
/// filled only by the quadratic-energy solver and stay empty otherwise.
struct StageSet {
    int s = 0;
    std::vector<Field> k;  // slopes of u
    std::vector<Field> u;  // stage values u_i = u^n + tau*sum_j a_ij k_j
    std::vector<Field> l;  // slopes of the auxiliary square q = u^2
    std::vector<Field> q;  // auxiliary stage values
};

enum class StageMethod { krylov, fixed_point };

/// Controls for the linear stage solves.
struct SolveConfig {
    double rel_tol = 1e-13;  // in (0, 1e-6]
    int max_iters = 500;     // total iteration budget (Krylov or fixed-point)
    int restart = 50;        // Krylov subspace dimension between restarts
    StageMethod method = StageMethod::krylov;

    void validate() const;
};

/// Convergence report of an iterative linear solve. `residual` is relative
/// to the right-hand side norm and recomputed from scratch after the solve.
struct KrylovStats {
    double residual = 0.0;
    int iterations = 0;
    bool converged = false;
};

using MatVec = std::function<void(std::span<const double>, std::span<double>)>;

/// Restarted GMRES with modified Gram-Schmidt and Givens rotations, starting
/// from x = 0. Deterministic: no randomization, sequential reductions. The
/// returned residual is the true relative residual ||b - Ax|| / ||b||, paid
/// for with one extra operator application per restart cycle.
KrylovStats gmres(const MatVec& apply, std::span<const double> rhs, std::span<double> x,
                  double rel_tol, int restart, int max_iters);

/// Solves the coupled linear stage system of the momentum-preserving step,
///   k_i = D^{-1} G(w_i) (u_n + tau*sum_j a_ij k_j),
/// matrix-free over the stacked s*N unknowns. Throws SolverError (with the
/// achieved residual) if the tolerance is not reached within the budget.
StageSet solve_lmp_stages(RlwOperators& ops, const Field& u_n,
                          const std::vector<Field>& w, const ButcherTableau& tab,
                          double tau, const SolveConfig& cfg);

/// Solves the stage system of the quadratic-energy-preserving step. The
/// auxiliary slopes l_i = 2 w_i k_i and values q_i are eliminated first, so
/// the linear solve runs on k alone; all four sequences are reconstructed.
StageSet solve_lep_stages(RlwOperators& ops, const Field& u_n, const Field& q_n,
                          const std::vector<Field>& w, const ButcherTableau& tab,
                          double tau, const SolveConfig& cfg);

/// M explicit fixed-point sweeps of the nonlinear momentum stage equations,
/// k_i <- D^{-1} G(u_i) u_i with u_i rebuilt each sweep; returns the predicted
/// stage values u_i after the final sweep. Slopes start from k = u_n when
/// `start_from_state` is set (the documented choice), from k = 0 otherwise.
/// NaN or Inf mid-sweep throws DivergenceError.
std::vector<Field> predict_sweeps_lmp(RlwOperators& ops, const Field& u_n,
                                      const ButcherTableau& tab, double tau, int sweeps,
                                      bool start_from_state = true);

/// Prediction sweeps of the quadratic-energy form,
///   k_i <- S(u_i + q_i/6 + u_i^2/3), l_i = 2 u_i k_i.
std::vector<Field> predict_sweeps_lep(RlwOperators& ops, const Field& u_n, const Field& q_n,
                                      const ButcherTableau& tab, double tau, int sweeps,
                                      bool start_from_state = true);

}  // namespace rlw
