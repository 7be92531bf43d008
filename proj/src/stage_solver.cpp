#include "rlw/stage_solver.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace rlw {

namespace {

double norm2(std::span<const double> v) {
    double acc = 0.0;
    for (double x : v) acc += x * x;
    return std::sqrt(acc);
}

double dot(std::span<const double> a, std::span<const double> b) {
    double acc = 0.0;
    for (size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

bool all_finite(std::span<const double> v) {
    for (double x : v) {
        if (!std::isfinite(x)) return false;
    }
    return true;
}

/// Richardson iteration x <- x + (b - Ax): the explicit fixed-point sweep of
/// the stage equations. The stopping residual is exact by construction.
KrylovStats fixed_point(const MatVec& apply, std::span<const double> rhs, std::span<double> x,
                        double rel_tol, int max_iters) {
    const size_t n = rhs.size();
    std::fill(x.begin(), x.end(), 0.0);
    KrylovStats st;
    const double bnorm = norm2(rhs);
    if (bnorm == 0.0) {
        st.converged = true;
        return st;
    }
    std::vector<double> resid(n);
    while (true) {
        apply(x, resid);
        ++st.iterations;
        double rn = 0.0;
        for (size_t i = 0; i < n; ++i) {
            resid[i] = rhs[i] - resid[i];
            rn += resid[i] * resid[i];
        }
        rn = std::sqrt(rn);
        st.residual = rn / bnorm;
        if (rn <= rel_tol * bnorm) {
            st.converged = true;
            return st;
        }
        if (st.iterations >= max_iters) return st;
        for (size_t i = 0; i < n; ++i) x[i] += resid[i];
    }
}

void check_step_inputs(const RlwOperators& ops, const Field& u_n, double tau,
                       const ButcherTableau& tab) {
    if (!(tau > 0.0) || !std::isfinite(tau))
        throw ConfigError("stage solve needs a positive finite time step");
    if (tab.s < 1 || static_cast<int>(tab.a.size()) != tab.s * tab.s ||
        static_cast<int>(tab.b.size()) != tab.s)
        throw ConfigError("stage solve got a malformed tableau");
    if (!u_n.grid || !u_n.grid->same_layout(*ops.grid()))
        throw DimensionError("state does not live on the operator grid");
}

void check_frozen_states(const RlwOperators& ops, const std::vector<Field>& w, int s) {
    if (static_cast<int>(w.size()) != s)
        throw ConfigError("stage solve expects one frozen state per stage");
    for (const Field& wi : w)
        if (!wi.grid || !wi.grid->same_layout(*ops.grid()))
            throw DimensionError("frozen stage state does not live on the operator grid");
}

KrylovStats run_linear_solve(const MatVec& apply, std::span<const double> rhs,
                             std::span<double> x, const SolveConfig& cfg) {
    return cfg.method == StageMethod::krylov
               ? gmres(apply, rhs, x, cfg.rel_tol, cfg.restart, cfg.max_iters)
               : fixed_point(apply, rhs, x, cfg.rel_tol, cfg.max_iters);
}

[[noreturn]] void throw_not_converged(const char* which, const KrylovStats& st) {
    throw SolverError(std::string(which) +
                          " stage system did not reach tolerance (relative residual " +
                          std::to_string(st.residual) + " after " +
                          std::to_string(st.iterations) + " iterations); reduce the time step",
                      st.residual, st.iterations);
}

}  // namespace

void SolveConfig::validate() const {
    if (!(rel_tol > 0.0) || rel_tol > 1e-6)
        throw ConfigError("rel_tol must lie in (0, 1e-6]");
    if (max_iters < 1) throw ConfigError("max_iters must be at least 1");
    if (restart < 1) throw ConfigError("restart must be at least 1");
}

KrylovStats gmres(const MatVec& apply, std::span<const double> rhs, std::span<double> x,
                  double rel_tol, int restart, int max_iters) {
    const size_t n = rhs.size();
    std::fill(x.begin(), x.end(), 0.0);
    KrylovStats st;
    const double bnorm = norm2(rhs);
    if (bnorm == 0.0) {
        st.converged = true;
        return st;
    }
    const double target = rel_tol * bnorm;

    std::vector<double> r(rhs.begin(), rhs.end());  // residual at x = 0
    std::vector<std::vector<double>> basis;
    std::vector<double> hess(static_cast<size_t>(restart + 1) * restart);
    std::vector<double> cs(restart), sn(restart), g(restart + 1), y(restart), work(n);
    const auto h = [&](int i, int j) -> double& {
        return hess[static_cast<size_t>(i) * restart + j];
    };

    while (true) {
        const double beta = norm2(r);
        if (beta <= target) {
            st.residual = beta / bnorm;
            st.converged = true;
            return st;
        }
        basis.assign(1, r);
        for (double& v : basis[0]) v /= beta;
        std::fill(g.begin(), g.end(), 0.0);
        std::fill(hess.begin(), hess.end(), 0.0);
        g[0] = beta;
        int m = 0;  // Krylov dimension built this cycle

        for (int j = 0; j < restart; ++j) {
            ++st.iterations;
            apply(basis[j], work);
            // modified Gram-Schmidt
            for (int i = 0; i <= j; ++i) {
                const double hij = dot(work, basis[i]);
                h(i, j) = hij;
                const std::vector<double>& vi = basis[i];
                for (size_t t = 0; t < n; ++t) work[t] -= hij * vi[t];
            }
            const double hnext = norm2(work);
            h(j + 1, j) = hnext;
            basis.push_back(work);
            if (hnext > 0.0)
                for (double& v : basis[j + 1]) v /= hnext;

            // keep the Hessenberg column upper-triangular via Givens rotations
            for (int i = 0; i < j; ++i) {
                const double t1 = h(i, j), t2 = h(i + 1, j);
                h(i, j) = cs[i] * t1 + sn[i] * t2;
                h(i + 1, j) = -sn[i] * t1 + cs[i] * t2;
            }
            const double t1 = h(j, j), t2 = h(j + 1, j);
            const double rho = std::hypot(t1, t2);
            cs[j] = rho == 0.0 ? 1.0 : t1 / rho;
            sn[j] = rho == 0.0 ? 0.0 : t2 / rho;
            h(j, j) = rho;
            h(j + 1, j) = 0.0;
            const double gj = g[j];
            g[j] = cs[j] * gj;
            g[j + 1] = -sn[j] * gj;
            m = j + 1;
            if (std::abs(g[j + 1]) <= target || st.iterations >= max_iters) break;
        }

        for (int i = m - 1; i >= 0; --i) {
            double acc = g[i];
            for (int c = i + 1; c < m; ++c) acc -= h(i, c) * y[c];
            y[i] = h(i, i) != 0.0 ? acc / h(i, i) : 0.0;
        }
        for (int i = 0; i < m; ++i) {
            const std::vector<double>& vi = basis[i];
            const double yi = y[i];
            for (size_t t = 0; t < n; ++t) x[t] += yi * vi[t];
        }

        // honest postcondition: recompute the residual from scratch
        apply(x, work);
        double rn = 0.0;
        for (size_t t = 0; t < n; ++t) {
            r[t] = rhs[t] - work[t];
            rn += r[t] * r[t];
        }
        rn = std::sqrt(rn);
        st.residual = rn / bnorm;
        if (rn <= target) {
            st.converged = true;
            return st;
        }
        if (st.iterations >= max_iters) return st;
    }
}

StageSet solve_lmp_stages(RlwOperators& ops, const Field& u_n, const std::vector<Field>& w,
                          const ButcherTableau& tab, double tau, const SolveConfig& cfg) {
    cfg.validate();
    check_step_inputs(ops, u_n, tau, tab);
    check_frozen_states(ops, w, tab.s);
    const int s = tab.s;
    const int N = ops.grid()->total();
    const size_t total = static_cast<size_t>(s) * N;

    std::vector<double> rhs(total), x(total), z(N);
    for (int i = 0; i < s; ++i)
        ops.linearized_flow(w[i].values, u_n.values, {rhs.data() + i * N, (size_t)N});

    const MatVec apply = [&](std::span<const double> in, std::span<double> out) {
        for (int i = 0; i < s; ++i) {
            std::fill(z.begin(), z.end(), 0.0);
            for (int j = 0; j < s; ++j) {
                const double f = tau * tab.a_ij(i, j);
                const double* kj = in.data() + j * N;
                for (int t = 0; t < N; ++t) z[t] += f * kj[t];
            }
            std::span<double> oi{out.data() + i * N, (size_t)N};
            ops.linearized_flow(w[i].values, z, oi);
            const double* ki = in.data() + i * N;
            for (int t = 0; t < N; ++t) oi[t] = ki[t] - oi[t];
        }
    };

    const KrylovStats st = run_linear_solve(apply, rhs, x, cfg);
    if (!st.converged) throw_not_converged("momentum", st);

    StageSet set;
    set.s = s;
    set.k.assign(s, Field(u_n.grid));
    set.u.assign(s, Field(u_n.grid));
    for (int i = 0; i < s; ++i)
        std::copy(x.begin() + i * N, x.begin() + (i + 1) * N, set.k[i].values.begin());
    for (int i = 0; i < s; ++i) {
        set.u[i].values = u_n.values;
        for (int j = 0; j < s; ++j) {
            const double f = tau * tab.a_ij(i, j);
            const double* kj = set.k[j].values.data();
            for (int t = 0; t < N; ++t) set.u[i].values[t] += f * kj[t];
        }
    }
    return set;
}

StageSet solve_lep_stages(RlwOperators& ops, const Field& u_n, const Field& q_n,
                          const std::vector<Field>& w, const ButcherTableau& tab, double tau,
                          const SolveConfig& cfg) {
    cfg.validate();
    check_step_inputs(ops, u_n, tau, tab);
    check_frozen_states(ops, w, tab.s);
    if (!q_n.grid || !q_n.grid->same_layout(*ops.grid()))
        throw DimensionError("auxiliary state does not live on the operator grid");
    const int s = tab.s;
    const int N = ops.grid()->total();
    const size_t total = static_cast<size_t>(s) * N;

    std::vector<double> rhs(total), x(total), z(N), acc(N), arg(N);
    std::vector<double> prod(static_cast<size_t>(s) * N);
    for (int i = 0; i < s; ++i) {
        const double* wi = w[i].values.data();
        for (int t = 0; t < N; ++t)
            arg[t] = (1.0 + wi[t] / 3.0) * u_n.values[t] + q_n.values[t] / 6.0;
        ops.skew_grad(arg, {rhs.data() + i * N, (size_t)N});
    }

    // After eliminating l_i = 2 w_i k_i and q_i = q_n + tau*sum_j a_ij l_j:
    //   k_i - S[(1 + w_i/3) * tau*sum_j a_ij k_j + (tau/3) sum_j a_ij w_j k_j]
    const MatVec apply = [&](std::span<const double> in, std::span<double> out) {
        for (int j = 0; j < s; ++j) {
            const double* kj = in.data() + j * N;
            const double* wj = w[j].values.data();
            double* pj = prod.data() + j * N;
            for (int t = 0; t < N; ++t) pj[t] = wj[t] * kj[t];
        }
        for (int i = 0; i < s; ++i) {
            std::fill(z.begin(), z.end(), 0.0);
            std::fill(acc.begin(), acc.end(), 0.0);
            for (int j = 0; j < s; ++j) {
                const double f = tau * tab.a_ij(i, j);
                const double* kj = in.data() + j * N;
                const double* pj = prod.data() + j * N;
                for (int t = 0; t < N; ++t) {
                    z[t] += f * kj[t];
                    acc[t] += f * pj[t];
                }
            }
            const double* wi = w[i].values.data();
            for (int t = 0; t < N; ++t) arg[t] = (1.0 + wi[t] / 3.0) * z[t] + acc[t] / 3.0;
            std::span<double> oi{out.data() + i * N, (size_t)N};
            ops.skew_grad(arg, oi);
            const double* ki = in.data() + i * N;
            for (int t = 0; t < N; ++t) oi[t] = ki[t] - oi[t];
        }
    };

    const KrylovStats st = run_linear_solve(apply, rhs, x, cfg);
    if (!st.converged) throw_not_converged("energy", st);

    StageSet set;
    set.s = s;
    set.k.assign(s, Field(u_n.grid));
    set.l.assign(s, Field(u_n.grid));
    set.u.assign(s, Field(u_n.grid));
    set.q.assign(s, Field(u_n.grid));
    for (int i = 0; i < s; ++i)
        std::copy(x.begin() + i * N, x.begin() + (i + 1) * N, set.k[i].values.begin());
    for (int i = 0; i < s; ++i) {
        const double* wi = w[i].values.data();
        const double* ki = set.k[i].values.data();
        for (int t = 0; t < N; ++t) set.l[i].values[t] = 2.0 * wi[t] * ki[t];
    }
    for (int i = 0; i < s; ++i) {
        set.u[i].values = u_n.values;
        set.q[i].values = q_n.values;
        for (int j = 0; j < s; ++j) {
            const double f = tau * tab.a_ij(i, j);
            const double* kj = set.k[j].values.data();
            const double* lj = set.l[j].values.data();
            for (int t = 0; t < N; ++t) {
                set.u[i].values[t] += f * kj[t];
                set.q[i].values[t] += f * lj[t];
            }
        }
    }
    return set;
}

std::vector<Field> predict_sweeps_lmp(RlwOperators& ops, const Field& u_n,
                                      const ButcherTableau& tab, double tau, int sweeps,
                                      bool start_from_state) {
    check_step_inputs(ops, u_n, tau, tab);
    if (sweeps < 1) throw ConfigError("prediction needs at least one sweep");
    const int s = tab.s;
    const int N = ops.grid()->total();

    std::vector<std::vector<double>> k(s), knew(s), u(s);
    for (int i = 0; i < s; ++i) {
        k[i] = start_from_state ? u_n.values : std::vector<double>(N, 0.0);
        knew[i].resize(N);
        u[i].resize(N);
    }

    const auto rebuild_stage_values = [&]() {
        for (int i = 0; i < s; ++i) {
            u[i] = u_n.values;
            for (int j = 0; j < s; ++j) {
                const double f = tau * tab.a_ij(i, j);
                const double* kj = k[j].data();
                for (int t = 0; t < N; ++t) u[i][t] += f * kj[t];
            }
        }
    };

    for (int m = 0; m < sweeps; ++m) {
        rebuild_stage_values();
        for (int i = 0; i < s; ++i) {
            ops.linearized_flow(u[i], u[i], knew[i]);
            if (!all_finite(knew[i]))
                throw DivergenceError("prediction sweep " + std::to_string(m + 1) +
                                      " produced NaN/Inf; the time step is too large");
        }
        k.swap(knew);
    }
    rebuild_stage_values();

    std::vector<Field> out(s, Field(u_n.grid));
    for (int i = 0; i < s; ++i) out[i].values = std::move(u[i]);
    return out;
}

std::vector<Field> predict_sweeps_lep(RlwOperators& ops, const Field& u_n, const Field& q_n,
                                      const ButcherTableau& tab, double tau, int sweeps,
                                      bool start_from_state) {
    check_step_inputs(ops, u_n, tau, tab);
    if (!q_n.grid || !q_n.grid->same_layout(*ops.grid()))
        throw DimensionError("auxiliary state does not live on the operator grid");
    if (sweeps < 1) throw ConfigError("prediction needs at least one sweep");
    const int s = tab.s;
    const int N = ops.grid()->total();

    std::vector<std::vector<double>> k(s), knew(s), u(s), l(s);
    std::vector<double> q(N), arg(N);
    for (int i = 0; i < s; ++i) {
        k[i] = start_from_state ? u_n.values : std::vector<double>(N, 0.0);
        knew[i].resize(N);
        u[i].resize(N);
        l[i].resize(N);
    }

    const auto rebuild_stage_values = [&]() {
        for (int i = 0; i < s; ++i) {
            u[i] = u_n.values;
            for (int j = 0; j < s; ++j) {
                const double f = tau * tab.a_ij(i, j);
                const double* kj = k[j].data();
                for (int t = 0; t < N; ++t) u[i][t] += f * kj[t];
            }
        }
    };

    for (int m = 0; m < sweeps; ++m) {
        rebuild_stage_values();
        for (int i = 0; i < s; ++i)
            for (int t = 0; t < N; ++t) l[i][t] = 2.0 * u[i][t] * k[i][t];
        for (int i = 0; i < s; ++i) {
            q = q_n.values;
            for (int j = 0; j < s; ++j) {
                const double f = tau * tab.a_ij(i, j);
                const double* lj = l[j].data();
                for (int t = 0; t < N; ++t) q[t] += f * lj[t];
            }
            const double* ui = u[i].data();
            for (int t = 0; t < N; ++t)
                arg[t] = ui[t] + q[t] / 6.0 + ui[t] * ui[t] / 3.0;
            ops.skew_grad(arg, knew[i]);
            if (!all_finite(knew[i]))
                throw DivergenceError("prediction sweep " + std::to_string(m + 1) +
                                      " produced NaN/Inf; the time step is too large");
        }
        k.swap(knew);
    }
    rebuild_stage_values();

    std::vector<Field> out(s, Field(u_n.grid));
    for (int i = 0; i < s; ++i) out[i].values = std::move(u[i]);
    return out;
}

}  // namespace rlw
