#pragma once

#include "rlw/operators.hpp"

namespace rlw {

/// Solitary-wave parameters. Width and speed follow from the amplitude
/// parameter c and the equation coefficients.
struct SolitonParams {
    double c = 3.0;    // amplitude parameter; peak height is 3c
    double x0 = 0.0;   // initial peak position

    double wavenumber(const RlwParams& p) const;  // k = sqrt(c/(mu(1+c)))/2
    double speed(const RlwParams& p) const;       // v = alpha(1+c)
};

/// Exact traveling solitary wave 3c sech^2(k(x - v t - x0)), wrapped onto
/// the periodic interval. Warns on stderr when the tail magnitude at the
/// periodic seam exceeds 1e-10 (domain too narrow for the wave).
Field soliton_1d(const GridPtr& g, const RlwParams& p, const SolitonParams& sp, double t);

/// Superposition of two solitary waves at t = 0.
Field two_soliton_ic(const GridPtr& g, const RlwParams& p, const SolitonParams& s1,
                     const SolitonParams& s2);

/// (1 + sin x)(1 + sin y) on a 2D grid.
Field trig_ic_2d(const GridPtr& g);

/// Undular-bore profile 0.05(1 - tanh((x-x0)^2 + (y-y0)^2 - d^2)).
Field undular_bore_ic(const GridPtr& g, double x0, double y0, double d);

/// Gaussian pulse exp(-((x-x0)^2 + (y-y0)^2)).
Field maxwellian_ic(const GridPtr& g, double x0, double y0);

}  // namespace rlw
