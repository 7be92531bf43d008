#include "rlw/schemes.hpp"

#include <cmath>
#include <cstddef>

#include "rlw/errors.hpp"

namespace rlw {

namespace {

constexpr int kStartupSweeps = 200;
constexpr double kStartupTol = 1e-14;

double vec_max_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

bool vec_finite(const std::vector<double>& v) {
    for (double x : v) {
        if (!std::isfinite(x)) return false;
    }
    return true;
}

// y += a * x
void axpy(double a, const std::vector<double>& x, std::vector<double>& y) {
    for (std::size_t m = 0; m < y.size(); ++m) y[m] += a * x[m];
}

bool is_pc_scheme(SchemeKind kind) { return !is_extrapolation_scheme(kind); }

// stage[i] = base + tau * sum_j a_ij k[j]
void build_stages(const std::vector<double>& base, const std::vector<std::vector<double>>& k,
                  const ButcherTableau& tab, double tau,
                  std::vector<std::vector<double>>& stage) {
    for (int i = 0; i < tab.s; ++i) {
        auto& si = stage[static_cast<std::size_t>(i)];
        si = base;
        for (int j = 0; j < tab.s; ++j) {
            axpy(tau * tab.a_ij(i, j), k[static_cast<std::size_t>(j)], si);
        }
    }
}

// First step of an extrapolation scheme: solve the fully nonlinear Gauss
// stage equations by fixed-point iteration and keep the stage states as the
// history for later steps.
void startup_step(SchemeState& st, RlwOperators& ops) {
    const ButcherTableau& tab = st.tableau;
    const int s = tab.s;
    const std::size_t n = st.u.values.size();
    const bool energy = is_energy_scheme(st.kind);
    const double tol = kStartupTol * std::max(1.0, vec_max_abs(st.u.values));

    std::vector<std::vector<double>> k(static_cast<std::size_t>(s), st.u.values);
    std::vector<std::vector<double>> knew(static_cast<std::size_t>(s), std::vector<double>(n));
    std::vector<std::vector<double>> stage_u(static_cast<std::size_t>(s),
                                             std::vector<double>(n));
    std::vector<std::vector<double>> l(static_cast<std::size_t>(s), std::vector<double>(n));
    std::vector<std::vector<double>> stage_q;
    std::vector<double> arg(n);
    if (energy) stage_q.assign(static_cast<std::size_t>(s), std::vector<double>(n));

    auto eval_slopes = [&](const std::vector<std::vector<double>>& kin,
                           std::vector<std::vector<double>>& kout) {
        build_stages(st.u.values, kin, tab, st.tau, stage_u);
        if (energy) {
            for (int i = 0; i < s; ++i) {
                auto& li = l[static_cast<std::size_t>(i)];
                const auto& ui = stage_u[static_cast<std::size_t>(i)];
                const auto& ki = kin[static_cast<std::size_t>(i)];
                for (std::size_t m = 0; m < n; ++m) li[m] = 2.0 * ui[m] * ki[m];
            }
            for (int i = 0; i < s; ++i) {
                auto& qi = stage_q[static_cast<std::size_t>(i)];
                qi = st.q.values;
                for (int j = 0; j < s; ++j) {
                    axpy(st.tau * tab.a_ij(i, j), l[static_cast<std::size_t>(j)], qi);
                }
                const auto& ui = stage_u[static_cast<std::size_t>(i)];
                for (std::size_t m = 0; m < n; ++m) {
                    arg[m] = ui[m] + qi[m] / 6.0 + ui[m] * ui[m] / 3.0;
                }
                ops.skew_grad(arg, kout[static_cast<std::size_t>(i)]);
            }
        } else {
            for (int i = 0; i < s; ++i) {
                const auto& ui = stage_u[static_cast<std::size_t>(i)];
                ops.linearized_flow(ui, ui, kout[static_cast<std::size_t>(i)]);
            }
        }
    };

    bool converged = false;
    for (int sweep = 0; sweep < kStartupSweeps && !converged; ++sweep) {
        eval_slopes(k, knew);
        double delta = 0.0;
        for (int i = 0; i < s; ++i) {
            const auto& ki = k[static_cast<std::size_t>(i)];
            const auto& kn = knew[static_cast<std::size_t>(i)];
            if (!vec_finite(kn)) {
                throw StartupError("startup step diverged; the time step is too large");
            }
            for (std::size_t m = 0; m < n; ++m) {
                delta = std::max(delta, std::abs(kn[m] - ki[m]));
            }
        }
        k.swap(knew);
        if (delta <= tol) converged = true;
    }
    if (!converged) {
        throw StartupError("startup fixed-point iteration stalled; reduce the time step");
    }

    // refresh the stage states (and q slopes) from the converged slopes
    eval_slopes(k, knew);

    st.prev_u = st.u;
    st.prev_stages.clear();
    st.prev_stages.reserve(static_cast<std::size_t>(s));
    for (int i = 0; i < s; ++i) {
        Field f(st.u.grid);
        f.values = stage_u[static_cast<std::size_t>(i)];
        st.prev_stages.push_back(std::move(f));
    }
    st.has_prev = true;

    for (int i = 0; i < s; ++i) {
        axpy(st.tau * tab.b[static_cast<std::size_t>(i)], k[static_cast<std::size_t>(i)],
             st.u.values);
    }
    if (energy) {
        for (int i = 0; i < s; ++i) {
            axpy(st.tau * tab.b[static_cast<std::size_t>(i)], l[static_cast<std::size_t>(i)],
                 st.q.values);
        }
    }
    st.steps += 1;
}

void apply_update(SchemeState& st, const StageSet& set) {
    const ButcherTableau& tab = st.tableau;
    for (int i = 0; i < tab.s; ++i) {
        axpy(st.tau * tab.b[static_cast<std::size_t>(i)],
             set.k[static_cast<std::size_t>(i)].values, st.u.values);
    }
    if (is_energy_scheme(st.kind)) {
        for (int i = 0; i < tab.s; ++i) {
            axpy(st.tau * tab.b[static_cast<std::size_t>(i)],
                 set.l[static_cast<std::size_t>(i)].values, st.q.values);
        }
    }
    st.steps += 1;
}

void step_extrapolated(SchemeState& st, RlwOperators& ops) {
    if (st.tableau.s != 3) {
        throw ConfigError("extrapolation schemes require the three-stage Gauss tableau");
    }
    const ExtrapCoeffs W = extrap_coeffs(st.tableau);
    const int s = st.tableau.s;
    const std::size_t n = st.u.values.size();

    std::vector<Field> ustar;
    ustar.reserve(static_cast<std::size_t>(s));
    for (int i = 0; i < s; ++i) {
        Field f(st.u.grid);
        const double w0 = W.at(i, 0);
        for (std::size_t m = 0; m < n; ++m) f.values[m] = w0 * st.prev_u.values[m];
        for (int j = 0; j < s; ++j) {
            axpy(W.at(i, j + 1), st.prev_stages[static_cast<std::size_t>(j)].values, f.values);
        }
        ustar.push_back(std::move(f));
    }

    StageSet set = is_energy_scheme(st.kind)
                       ? solve_lep_stages(ops, st.u, st.q, ustar, st.tableau, st.tau, st.solve)
                       : solve_lmp_stages(ops, st.u, ustar, st.tableau, st.tau, st.solve);

    st.prev_u = st.u;
    st.prev_stages = std::move(set.u);
    apply_update(st, set);
}

void step_predictor_corrector(SchemeState& st, RlwOperators& ops) {
    std::vector<Field> pred;
    StageSet set;
    if (is_energy_scheme(st.kind)) {
        pred = predict_sweeps_lep(ops, st.u, st.q, st.tableau, st.tau, st.sweeps,
                                  st.predict_from_state);
        set = solve_lep_stages(ops, st.u, st.q, pred, st.tableau, st.tau, st.solve);
    } else {
        pred = predict_sweeps_lmp(ops, st.u, st.tableau, st.tau, st.sweeps,
                                  st.predict_from_state);
        set = solve_lmp_stages(ops, st.u, pred, st.tableau, st.tau, st.solve);
    }
    apply_update(st, set);
}

}  // namespace

SchemeKind scheme_from_tag(const std::string& tag) {
    if (tag == "lmps4") return SchemeKind::lmps4;
    if (tag == "lmp-pc4") return SchemeKind::lmp_pc4;
    if (tag == "lmp-pc6") return SchemeKind::lmp_pc6;
    if (tag == "leps4") return SchemeKind::leps4;
    if (tag == "lep-pc4") return SchemeKind::lep_pc4;
    if (tag == "lep-pc6") return SchemeKind::lep_pc6;
    throw ConfigError("unknown scheme tag '" + tag +
                      "' (expected lmps4 | lmp-pc4 | lmp-pc6 | leps4 | lep-pc4 | lep-pc6)");
}

std::string scheme_tag(SchemeKind kind) {
    switch (kind) {
        case SchemeKind::lmps4: return "lmps4";
        case SchemeKind::lmp_pc4: return "lmp-pc4";
        case SchemeKind::lmp_pc6: return "lmp-pc6";
        case SchemeKind::leps4: return "leps4";
        case SchemeKind::lep_pc4: return "lep-pc4";
        case SchemeKind::lep_pc6: return "lep-pc6";
    }
    throw InternalError("scheme_tag: bad kind");
}

const std::vector<std::string>& all_scheme_tags() {
    static const std::vector<std::string> tags = {"lmps4",  "lmp-pc4", "lmp-pc6",
                                                  "leps4",  "lep-pc4", "lep-pc6"};
    return tags;
}

bool is_energy_scheme(SchemeKind kind) {
    return kind == SchemeKind::leps4 || kind == SchemeKind::lep_pc4 ||
           kind == SchemeKind::lep_pc6;
}

bool is_extrapolation_scheme(SchemeKind kind) {
    return kind == SchemeKind::lmps4 || kind == SchemeKind::leps4;
}

int stage_count(SchemeKind kind) {
    switch (kind) {
        case SchemeKind::lmps4:
        case SchemeKind::leps4:
        case SchemeKind::lmp_pc6:
        case SchemeKind::lep_pc6: return 3;
        case SchemeKind::lmp_pc4:
        case SchemeKind::lep_pc4: return 2;
    }
    throw InternalError("stage_count: bad kind");
}

int default_sweeps(SchemeKind kind) {
    switch (kind) {
        case SchemeKind::lmp_pc4:
        case SchemeKind::lep_pc4: return 3;
        case SchemeKind::lmp_pc6:
        case SchemeKind::lep_pc6: return 5;
        case SchemeKind::lmps4:
        case SchemeKind::leps4: return 0;
    }
    throw InternalError("default_sweeps: bad kind");
}

ExtrapCoeffs extrap_coeffs(const ButcherTableau& tab) {
    const int s = tab.s;
    std::vector<double> nodes(static_cast<std::size_t>(s) + 1, 0.0);
    for (int j = 0; j < s; ++j) nodes[static_cast<std::size_t>(j) + 1] = tab.c[static_cast<std::size_t>(j)];
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        for (std::size_t j = i + 1; j < nodes.size(); ++j) {
            if (std::abs(nodes[i] - nodes[j]) <= 1e-12) {
                throw ConfigError("extrapolation abscissae coincide; cannot interpolate");
            }
        }
    }

    ExtrapCoeffs co;
    co.s = s;
    co.w.resize(static_cast<std::size_t>(s) * (static_cast<std::size_t>(s) + 1));
    for (int i = 0; i < s; ++i) {
        const double x = 1.0 + tab.c[static_cast<std::size_t>(i)];
        for (int j = 0; j <= s; ++j) {
            double w = 1.0;
            for (int m = 0; m <= s; ++m) {
                if (m == j) continue;
                w *= (x - nodes[static_cast<std::size_t>(m)]) /
                     (nodes[static_cast<std::size_t>(j)] - nodes[static_cast<std::size_t>(m)]);
            }
            co.w[static_cast<std::size_t>(i * (s + 1) + j)] = w;
        }
    }
    return co;
}

SchemeState make_scheme_state(SchemeKind kind, Field u0, double tau, const RlwParams& params,
                              const SolveConfig& solve, int sweeps, double t0) {
    if (!u0.grid) throw DimensionError("make_scheme_state: field has no grid");
    params.validate(u0.grid->dim());
    solve.validate();
    if (!(tau > 0.0) || !std::isfinite(tau)) {
        throw ConfigError("the time step must be positive and finite");
    }
    if (!std::isfinite(t0)) throw ConfigError("the start time must be finite");
    if (sweeps < 0) throw ConfigError("prediction sweeps must be nonnegative");
    if (sweeps > 0 && is_extrapolation_scheme(kind)) {
        throw ConfigError("prediction sweeps apply only to predictor-corrector schemes");
    }

    SchemeState st;
    st.kind = kind;
    st.tableau = gauss_tableau(stage_count(kind));
    st.params = params;
    st.solve = solve;
    st.t0 = t0;
    st.tau = tau;
    if (is_pc_scheme(kind)) st.sweeps = sweeps > 0 ? sweeps : default_sweeps(kind);
    st.u = std::move(u0);
    if (is_energy_scheme(kind)) {
        st.q = Field(st.u.grid);
        for (std::size_t m = 0; m < st.u.values.size(); ++m) {
            st.q.values[m] = st.u.values[m] * st.u.values[m];
        }
    }
    return st;
}

void advance(SchemeState& st, RlwOperators& ops) {
    if (!st.u.grid) throw DimensionError("advance: state has no grid");
    if (!ops.grid()->same_layout(*st.u.grid)) {
        throw DimensionError("advance: operator workspace grid differs from the state grid");
    }
    if (!(st.tau > 0.0)) throw ConfigError("advance: the time step must be positive");

    if (is_extrapolation_scheme(st.kind)) {
        if (st.has_prev) {
            step_extrapolated(st, ops);
        } else {
            startup_step(st, ops);
        }
    } else {
        step_predictor_corrector(st, ops);
    }
}

RunSummary run(SchemeState& st, double T, RlwOperators& ops, const RunObservers& obs) {
    if (!std::isfinite(T)) throw ConfigError("run: the final time must be finite");
    if (obs.invariant_stride < 1 || obs.snapshot_stride < 1) {
        throw ConfigError("run: observer strides must be positive");
    }
    const double span = T - st.t();
    if (span < -1e-9 * std::max(1.0, std::abs(T))) {
        throw ConfigError("run: the final time is before the current time");
    }
    const long nsteps = std::max(0L, std::lround(span / st.tau));
    if (std::abs(static_cast<double>(nsteps) * st.tau - span) > 1e-8 * st.tau) {
        throw ConfigError("run: the time step does not tile the requested interval");
    }

    RunSummary sum;
    sum.max_abs = max_norm(st.u);
    if (obs.on_invariant) obs.on_invariant(st);
    if (obs.on_snapshot) obs.on_snapshot(st);
    for (long n = 1; n <= nsteps; ++n) {
        advance(st, ops);
        sum.max_abs = std::max(sum.max_abs, max_norm(st.u));
        const bool last = n == nsteps;
        if (obs.on_invariant && (n % obs.invariant_stride == 0 || last)) obs.on_invariant(st);
        if (obs.on_snapshot && (n % obs.snapshot_stride == 0 || last)) obs.on_snapshot(st);
    }
    sum.steps = nsteps;
    sum.t_final = st.t();
    return sum;
}

}  // namespace rlw
