#pragma once

#include <vector>

#include "rlw/errors.hpp"

namespace rlw {

/// Implicit Runge-Kutta coefficients, row-major a, abscissae c_i = sum_j a_ij.
struct ButcherTableau {
    int s = 0;
    int order = 0;
    std::vector<double> a;  // s*s, row-major
    std::vector<double> b;  // s
    std::vector<double> c;  // s

    double a_ij(int i, int j) const { return a[i * s + j]; }
};

/// Gauss-Legendre collocation tableau of s stages (classical order 2s).
/// Coefficients come from exact closed forms evaluated in extended precision.
/// Only s in {1,2,3} is supported.
ButcherTableau gauss_tableau(int s);

/// max_ij |b_i a_ij + b_j a_ji - b_i b_j|. Zero (to rounding) is the algebraic
/// condition under which the Runge-Kutta map preserves quadratic invariants.
double symplectic_residual(const ButcherTableau& t);

}  // namespace rlw
