#pragma once

#include <functional>
#include <string>
#include <vector>

#include "rlw/stage_solver.hpp"
#include "rlw/tableau.hpp"

namespace rlw {

/// The six time integrators. "lmp" variants conserve the momentum functional
/// exactly, "lep" variants conserve the quadratic energy of the extended
/// system. The "s4" pair reuses the previous step's stages through
/// extrapolation; the "pc" pairs predict the stage states with fixed-point
/// sweeps inside each step.
enum class SchemeKind {
    lmps4,
    lmp_pc4,
    lmp_pc6,
    leps4,
    lep_pc4,
    lep_pc6,
};

/// Maps a command-line tag (lmps4 | lmp-pc4 | lmp-pc6 | leps4 | lep-pc4 |
/// lep-pc6) to its scheme. Throws ConfigError for unknown tags.
SchemeKind scheme_from_tag(const std::string& tag);
std::string scheme_tag(SchemeKind kind);

/// All six tags in canonical order.
const std::vector<std::string>& all_scheme_tags();

bool is_energy_scheme(SchemeKind kind);          // lep* variants
bool is_extrapolation_scheme(SchemeKind kind);   // lmps4, leps4
int stage_count(SchemeKind kind);                // Gauss stages: 2 or 3
int default_sweeps(SchemeKind kind);             // prediction sweeps; 0 if unused

/// Lagrange weights that evaluate the interpolant through the previous
/// step's values {u^{n-1}, u_1^{n-1}, ..., u_s^{n-1}} (abscissae 0 and c_j
/// in units of the step) at the current stage times 1 + c_i. Row i gives the
/// s+1 weights for stage i; each row sums to 1.
struct ExtrapCoeffs {
    int s = 0;
    std::vector<double> w;  // s rows of s+1 weights, row-major

    double at(int i, int j) const { return w[static_cast<std::size_t>(i * (s + 1) + j)]; }
};

/// Throws ConfigError when the abscissae coincide (interpolation undefined).
ExtrapCoeffs extrap_coeffs(const ButcherTableau& tab);

/// Complete state of a time integration.
struct SchemeState {
    SchemeKind kind{};
    ButcherTableau tableau;
    RlwParams params;
    SolveConfig solve;

    double t0 = 0.0;
    long steps = 0;
    double tau = 0.0;
    int sweeps = 0;                  // prediction sweeps (pc schemes)
    bool predict_from_state = true;  // sweep seed: current state vs zero

    Field u;
    Field q;        // auxiliary quadratic state (lep schemes), q0 = u0^2
    Field prev_u;   // previous step's state (extrapolation schemes)
    std::vector<Field> prev_stages;
    bool has_prev = false;

    double t() const { return t0 + static_cast<double>(steps) * tau; }
};

/// Builds a ready-to-step state. sweeps = 0 selects the per-scheme default
/// (3 for two-stage predictors, 5 for three-stage ones).
SchemeState make_scheme_state(SchemeKind kind, Field u0, double tau, const RlwParams& params,
                              const SolveConfig& solve = {}, int sweeps = 0, double t0 = 0.0);

/// Advances one step of tau. The first step of an extrapolation scheme runs
/// the fully nonlinear three-stage Gauss method (solved by fixed-point
/// iteration) to seed the stage history; later steps reuse it. Throws
/// SolverError / DivergenceError / StartupError on failure, leaving the
/// state at the last completed step.
void advance(SchemeState& st, RlwOperators& ops);

struct RunObservers {
    int invariant_stride = 1;
    int snapshot_stride = 100;
    std::function<void(const SchemeState&)> on_invariant;
    std::function<void(const SchemeState&)> on_snapshot;
};

struct RunSummary {
    long steps = 0;
    double t_final = 0.0;
    double max_abs = 0.0;  // running max of |u| over all completed steps
};

/// Steps from the current time to T. The step count is round((T - t)/tau)
/// and tau must tile the span to rounding accuracy (ConfigError otherwise).
/// Observers fire at entry and every stride steps; both always fire on the
/// final step. T equal to the current time performs no steps.
RunSummary run(SchemeState& st, double T, RlwOperators& ops, const RunObservers& obs = {});

}  // namespace rlw
