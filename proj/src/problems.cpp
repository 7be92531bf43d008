#include "rlw/problems.hpp"

#include <cmath>
#include <cstdio>

#include "rlw/errors.hpp"

namespace rlw {

namespace {

double sech(double x) { return 1.0 / std::cosh(x); }

void require_dim(const GridPtr& g, int dim, const char* who) {
    if (!g) throw DimensionError(std::string(who) + ": null grid");
    if (g->dim() != dim) {
        throw DimensionError(std::string(who) + ": needs a " + std::to_string(dim) + "D grid");
    }
}

}  // namespace

double SolitonParams::wavenumber(const RlwParams& p) const {
    if (!(c > 0.0)) throw ConfigError("soliton: c must be positive");
    return 0.5 * std::sqrt(c / (p.mu * (1.0 + c)));
}

double SolitonParams::speed(const RlwParams& p) const {
    return p.alpha * (1.0 + c);
}

Field soliton_1d(const GridPtr& g, const RlwParams& p, const SolitonParams& sp, double t) {
    require_dim(g, 1, "soliton_1d");
    p.validate(1);
    const double k = sp.wavenumber(p);
    const double v = sp.speed(p);
    const Axis& ax = g->axis(0);
    const double L = ax.b - ax.a;

    const double seam = 3.0 * sp.c * sech(k * 0.5 * L) * sech(k * 0.5 * L);
    if (seam > 1e-10) {
        std::fprintf(stderr,
                     "warning: solitary wave tail %.3e at the periodic seam; "
                     "interval [%g, %g) is too narrow\n",
                     seam, ax.a, ax.b);
    }

    Field u(g);
    const double center = sp.x0 + v * t;
    for (int i = 0; i < ax.n; ++i) {
        double xi = g->node_x(i) - center;
        xi -= L * std::round(xi / L);  // nearest periodic image
        const double s = sech(k * xi);
        u.values[static_cast<std::size_t>(i)] = 3.0 * sp.c * s * s;
    }
    return u;
}

Field two_soliton_ic(const GridPtr& g, const RlwParams& p, const SolitonParams& s1,
                     const SolitonParams& s2) {
    Field u = soliton_1d(g, p, s1, 0.0);
    Field w = soliton_1d(g, p, s2, 0.0);
    for (std::size_t i = 0; i < u.values.size(); ++i) u.values[i] += w.values[i];
    return u;
}

Field trig_ic_2d(const GridPtr& g) {
    require_dim(g, 2, "trig_ic_2d");
    return sample(g, [](double x, double y) {
        return (1.0 + std::sin(x)) * (1.0 + std::sin(y));
    });
}

Field undular_bore_ic(const GridPtr& g, double x0, double y0, double d) {
    require_dim(g, 2, "undular_bore_ic");
    return sample(g, [=](double x, double y) {
        const double r2 = (x - x0) * (x - x0) + (y - y0) * (y - y0);
        return 0.05 * (1.0 - std::tanh(r2 - d * d));
    });
}

Field maxwellian_ic(const GridPtr& g, double x0, double y0) {
    require_dim(g, 2, "maxwellian_ic");
    return sample(g, [=](double x, double y) {
        const double r2 = (x - x0) * (x - x0) + (y - y0) * (y - y0);
        return std::exp(-r2);
    });
}

}  // namespace rlw
