#include "rlw/diagnostics.hpp"

#include <cmath>

#include "rlw/errors.hpp"

namespace rlw {

double mass(const Field& u) {
    if (!u.grid) throw DimensionError("mass: field has no grid");
    double s = 0.0;
    for (double v : u.values) s += v;
    return s * u.grid->cell_volume();
}

double momentum(const Field& u, const RlwParams& p) {
    if (!u.grid) throw DimensionError("momentum: field has no grid");
    Field du = apply_helmholtz(u, p);
    return 0.5 * inner_product(u, du);
}

double hamiltonian(const Field& u) {
    if (!u.grid) throw DimensionError("hamiltonian: field has no grid");
    double s = 0.0;
    for (double v : u.values) s += v * v * (0.5 + v / 6.0);
    return s * u.grid->cell_volume();
}

double quad_energy(const Field& u, const Field& q) {
    require_same_grid(u, q);
    double s = 0.0;
    for (std::size_t i = 0; i < u.values.size(); ++i) {
        s += 0.5 * u.values[i] * u.values[i] + u.values[i] * q.values[i] / 6.0;
    }
    return s * u.grid->cell_volume();
}

ErrorNorms error_norms(const Field& u_num, const Field& u_ref) {
    require_same_grid(u_num, u_ref);
    double sq = 0.0;
    double mx = 0.0;
    for (std::size_t i = 0; i < u_num.values.size(); ++i) {
        const double d = u_num.values[i] - u_ref.values[i];
        sq += d * d;
        mx = std::max(mx, std::abs(d));
    }
    return {std::sqrt(sq * u_num.grid->cell_volume()), mx};
}

std::vector<double> convergence_rates(const std::vector<double>& errors) {
    std::vector<double> rates;
    if (errors.size() < 2) return rates;
    for (double e : errors) {
        if (!(e > 0.0) || !std::isfinite(e)) {
            throw ConfigError("convergence_rates: errors must be positive and finite");
        }
    }
    rates.reserve(errors.size() - 1);
    for (std::size_t i = 0; i + 1 < errors.size(); ++i) {
        rates.push_back(std::log2(errors[i] / errors[i + 1]));
    }
    return rates;
}

}  // namespace rlw
