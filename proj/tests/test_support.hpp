#pragma once

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "rlw/grid.hpp"

namespace rlw::test {

/// Random trig polynomial with modes strictly below Nyquist, so spectral
/// derivatives of it are exact up to roundoff. Deterministic in `seed`.
inline Field random_band_limited(const GridPtr& g, int max_mode, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> coef(-1.0, 1.0);
    for (int d = 0; d < g->dim(); ++d)
        if (max_mode >= g->axis(d).n / 2)
            throw std::runtime_error("random_band_limited: max_mode reaches Nyquist");

    if (g->dim() == 1) {
        const Axis& ax = g->axis(0);
        const double w = 2.0 * M_PI / (ax.b - ax.a);
        std::vector<double> ac(max_mode + 1), as(max_mode + 1);
        for (int m = 1; m <= max_mode; ++m) {
            ac[m] = coef(rng);
            as[m] = coef(rng);
        }
        const double a0 = coef(rng);
        return sample(g, [&](double x) {
            double v = a0;
            for (int m = 1; m <= max_mode; ++m)
                v += ac[m] * std::cos(m * w * (x - ax.a)) + as[m] * std::sin(m * w * (x - ax.a));
            return v;
        });
    }

    const Axis& axx = g->axis(0);
    const Axis& axy = g->axis(1);
    const double wx = 2.0 * M_PI / (axx.b - axx.a);
    const double wy = 2.0 * M_PI / (axy.b - axy.a);
    struct Mode {
        int mx, my;
        double cc, cs, sc, ss;
    };
    std::vector<Mode> modes;
    for (int mx = 0; mx <= max_mode; ++mx)
        for (int my = 0; my <= max_mode; ++my)
            modes.push_back({mx, my, coef(rng), coef(rng), coef(rng), coef(rng)});
    return sample(g, [&](double x, double y) {
        double v = 0.0;
        for (const Mode& m : modes) {
            const double cx = std::cos(m.mx * wx * (x - axx.a)), sx = std::sin(m.mx * wx * (x - axx.a));
            const double cy = std::cos(m.my * wy * (y - axy.a)), sy = std::sin(m.my * wy * (y - axy.a));
            v += m.cc * cx * cy + m.cs * cx * sy + m.sc * sx * cy + m.ss * sx * sy;
        }
        return v;
    });
}

/// Direct dense solve of A x = b (row-major A) by LU with partial pivoting.
/// Reference oracle for the iterative stage solvers; O(n^3), test-only.
inline std::vector<double> lu_solve(std::vector<double> A, std::vector<double> b) {
    const int n = static_cast<int>(b.size());
    if (static_cast<int>(A.size()) != n * n) throw std::runtime_error("lu_solve: shape mismatch");
    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int r = col + 1; r < n; ++r)
            if (std::abs(A[r * n + col]) > std::abs(A[piv * n + col])) piv = r;
        if (A[piv * n + col] == 0.0) throw std::runtime_error("lu_solve: singular matrix");
        if (piv != col) {
            for (int c = 0; c < n; ++c) std::swap(A[piv * n + c], A[col * n + c]);
            std::swap(b[piv], b[col]);
        }
        for (int r = col + 1; r < n; ++r) {
            const double f = A[r * n + col] / A[col * n + col];
            A[r * n + col] = 0.0;
            for (int c = col + 1; c < n; ++c) A[r * n + c] -= f * A[col * n + c];
            b[r] -= f * b[col];
        }
    }
    std::vector<double> x(n);
    for (int r = n - 1; r >= 0; --r) {
        double acc = b[r];
        for (int c = r + 1; c < n; ++c) acc -= A[r * n + c] * x[c];
        x[r] = acc / A[r * n + r];
    }
    return x;
}

}  // namespace rlw::test
