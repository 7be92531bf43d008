#pragma once

#include <vector>

#include "rlw/operators.hpp"

namespace rlw {

/// One sampled row of the conserved-quantity time series.
struct InvariantRecord {
    double t = 0.0;
    double mass = 0.0;
    double momentum = 0.0;
    double hamiltonian = 0.0;
    double quad_energy = 0.0;  // meaningful only when has_quad
    bool has_quad = false;
};

/// integral of u.
double mass(const Field& u);

/// (1/2)(u, (1 - mu*dxx - theta*dyy) u); positive definite.
double momentum(const Field& u, const RlwParams& p);

/// integral of u^2/2 + u^3/6 (the cubic energy of the wave equation).
double hamiltonian(const Field& u);

/// integral of u^2/2 + u*q/6; coincides with hamiltonian(u) when q = u^2.
double quad_energy(const Field& u, const Field& q);

struct ErrorNorms {
    double l2 = 0.0;   // quadrature-weighted
    double max = 0.0;
};

/// Difference norms between a numerical and a reference field.
ErrorNorms error_norms(const Field& u_num, const Field& u_ref);

/// log2 ratios of adjacent errors from a step-halving ladder. Throws
/// ConfigError when any error is zero or negative (rate undefined).
std::vector<double> convergence_rates(const std::vector<double>& errors);

}  // namespace rlw
