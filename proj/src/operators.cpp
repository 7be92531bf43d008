#include "rlw/operators.hpp"

#include <cmath>
#include <string>

namespace rlw {

void RlwParams::validate(int dim) const {
    if (!(alpha > 0.0) || !std::isfinite(alpha))
        throw ConfigError("alpha must be a finite positive real");
    if (!(mu > 0.0) || !std::isfinite(mu))
        throw ConfigError("mu must be a finite positive real");
    if (!(beta >= 0.0) || !std::isfinite(beta))
        throw ConfigError("beta must be a finite nonnegative real");
    if (!(theta >= 0.0) || !std::isfinite(theta))
        throw ConfigError("theta must be a finite nonnegative real");
    if (dim == 1 && (beta != 0.0 || theta != 0.0))
        throw ConfigError("beta and theta must be zero on 1D grids");
}

RlwOperators::RlwOperators(GridPtr grid, RlwParams params)
    : grid_(std::move(grid)), params_(params) {
    params_.validate(grid_->dim());
    const int nx = grid_->nx(), ny = grid_->ny(), total = grid_->total();
    const Axis& ax = grid_->axis(0);
    const Axis* ay = grid_->dim() == 2 ? &grid_->axis(1) : nullptr;

    helm_.resize(total);
    helm_inv_.resize(total);
    kx_.resize(total);
    ky_.resize(total);
    skew_.resize(total);
    for (int ix = 0; ix < nx; ++ix) {
        const double kxf = ax.kappa[ix];                          // full, incl. Nyquist
        const double kxt = (ix == ax.nyquist) ? 0.0 : kxf;        // derivative wavenumber
        for (int iy = 0; iy < ny; ++iy) {
            const double kyf = ay ? ay->kappa[iy] : 0.0;
            const double kyt = (ay && iy != ay->nyquist) ? kyf : 0.0;
            const int m = ix * ny + iy;
            helm_[m] = 1.0 + params_.mu * kxf * kxf + params_.theta * kyf * kyf;
            helm_inv_[m] = 1.0 / helm_[m];
            kx_[m] = kxt;
            ky_[m] = kyt;
            skew_[m] = Complex(0.0, -(params_.alpha * kxt + params_.beta * kyt) * helm_inv_[m]);
        }
    }

    spec_.resize(total);
    spec2_.resize(total);
    vx_.resize(total);
    vy_.resize(total);
    wx_.resize(total);
    wy_.resize(total);
    prod_.resize(total);
    fw_.resize(total);
    fv_.resize(total);
}

void RlwOperators::helmholtz(std::span<const double> in, std::span<double> out) {
    grid_->forward(in, spec_.data(), scratch_);
    for (int i = 0; i < grid_->total(); ++i) spec_[i] *= helm_[i];
    grid_->inverse(spec_.data(), out, scratch_);
}

void RlwOperators::helmholtz_inv(std::span<const double> in, std::span<double> out) {
    grid_->forward(in, spec_.data(), scratch_);
    for (int i = 0; i < grid_->total(); ++i) spec_[i] *= helm_inv_[i];
    grid_->inverse(spec_.data(), out, scratch_);
}

void RlwOperators::skew_grad(std::span<const double> in, std::span<double> out) {
    grid_->forward(in, spec_.data(), scratch_);
    for (int i = 0; i < grid_->total(); ++i) spec_[i] *= skew_[i];
    grid_->inverse(spec_.data(), out, scratch_);
}

void RlwOperators::project_two_thirds(std::span<double> u) {
    const int nx = grid_->nx(), ny = grid_->ny();
    if (keep_.empty()) {
        keep_.assign(grid_->total(), 1);
        const Axis* ay = grid_->dim() == 2 ? &grid_->axis(1) : nullptr;
        for (int ix = 0; ix < nx; ++ix) {
            const int mx = (ix <= nx / 2) ? ix : ix - nx;
            for (int iy = 0; iy < ny; ++iy) {
                const int my = ay ? ((iy <= ny / 2) ? iy : iy - ny) : 0;
                if (std::abs(mx) > nx / 3 || (ay && std::abs(my) > ny / 3))
                    keep_[ix * ny + iy] = 0;
            }
        }
    }
    grid_->forward(u, spec_.data(), scratch_);
    for (int i = 0; i < grid_->total(); ++i)
        if (!keep_[i]) spec_[i] = Complex(0.0, 0.0);
    grid_->inverse(spec_.data(), u, scratch_);
}

void RlwOperators::advection_core(std::span<const double> w, std::span<const double> v,
                                  std::span<double> out) {
    const int total = grid_->total();
    const bool two_d = grid_->dim() == 2;
    const double a = params_.alpha, b = params_.beta;

    grid_->forward(v, spec_.data(), scratch_);
    for (int i = 0; i < total; ++i) {
        const Complex s = spec_[i];
        spec2_[i] = Complex(-kx_[i] * s.imag(), kx_[i] * s.real());
    }
    grid_->inverse(spec2_.data(), vx_, scratch_);
    if (two_d) {
        for (int i = 0; i < total; ++i) {
            const Complex s = spec_[i];
            spec2_[i] = Complex(-ky_[i] * s.imag(), ky_[i] * s.real());
        }
        grid_->inverse(spec2_.data(), vy_, scratch_);
    }

    for (int i = 0; i < total; ++i) prod_[i] = w[i] * v[i];
    grid_->forward(prod_, spec_.data(), scratch_);
    for (int i = 0; i < total; ++i) {
        const Complex s = spec_[i];
        spec2_[i] = Complex(-kx_[i] * s.imag(), kx_[i] * s.real());
    }
    grid_->inverse(spec2_.data(), wx_, scratch_);
    if (two_d) {
        for (int i = 0; i < total; ++i) {
            const Complex s = spec_[i];
            spec2_[i] = Complex(-ky_[i] * s.imag(), ky_[i] * s.real());
        }
        grid_->inverse(spec2_.data(), wy_, scratch_);
    }

    if (two_d) {
        for (int i = 0; i < total; ++i) {
            const double c = 1.0 + w[i] / 3.0;
            out[i] = -(a * (c * vx_[i] + wx_[i] / 3.0) + b * (c * vy_[i] + wy_[i] / 3.0));
        }
    } else {
        for (int i = 0; i < total; ++i)
            out[i] = -a * ((1.0 + w[i] / 3.0) * vx_[i] + wx_[i] / 3.0);
    }
}

void RlwOperators::linearized_advection(std::span<const double> w, std::span<const double> v,
                                        std::span<double> out) {
    if (params_.dealias) {
        std::copy(w.begin(), w.end(), fw_.begin());
        std::copy(v.begin(), v.end(), fv_.begin());
        project_two_thirds(fw_);
        project_two_thirds(fv_);
        advection_core(fw_, fv_, out);
        project_two_thirds(out);
    } else {
        advection_core(w, v, out);
    }
}

void RlwOperators::linearized_flow(std::span<const double> w, std::span<const double> v,
                                   std::span<double> out) {
    linearized_advection(w, v, out);
    grid_->forward(out, spec_.data(), scratch_);
    for (int i = 0; i < grid_->total(); ++i) spec_[i] *= helm_inv_[i];
    grid_->inverse(spec_.data(), out, scratch_);
}

Field apply_helmholtz(const Field& u, const RlwParams& p) {
    RlwOperators ops(u.grid, p);
    Field out(u.grid);
    ops.helmholtz(u.values, out.values);
    return out;
}

Field apply_helmholtz_inv(const Field& u, const RlwParams& p) {
    RlwOperators ops(u.grid, p);
    Field out(u.grid);
    ops.helmholtz_inv(u.values, out.values);
    return out;
}

Field apply_skew_grad(const Field& u, const RlwParams& p) {
    RlwOperators ops(u.grid, p);
    Field out(u.grid);
    ops.skew_grad(u.values, out.values);
    return out;
}

Field apply_linearized_advection(const Field& w, const Field& v, const RlwParams& p) {
    require_same_grid(w, v);
    RlwOperators ops(v.grid, p);
    Field out(v.grid);
    ops.linearized_advection(w.values, v.values, out.values);
    return out;
}

std::vector<double> materialize_dense(OpTag tag, const Field* w, const RlwParams& p,
                                      const GridPtr& grid) {
    const int n = grid->total();
    if (n > 64)
        throw ConfigError("materialize_dense is a test oracle, refused for grids above 64 nodes");
    if (tag == OpTag::linearized_advection && w == nullptr)
        throw ConfigError("materialize_dense: linearized_advection needs a frozen state");

    RlwOperators ops(grid, p);
    std::vector<double> mat(static_cast<size_t>(n) * n);
    std::vector<double> e(n, 0.0), col(n);
    for (int j = 0; j < n; ++j) {
        e[j] = 1.0;
        switch (tag) {
            case OpTag::helmholtz: ops.helmholtz(e, col); break;
            case OpTag::helmholtz_inv: ops.helmholtz_inv(e, col); break;
            case OpTag::skew_grad: ops.skew_grad(e, col); break;
            case OpTag::linearized_advection: ops.linearized_advection(w->values, e, col); break;
        }
        e[j] = 0.0;
        for (int i = 0; i < n; ++i) mat[static_cast<size_t>(i) * n + j] = col[i];
    }
    return mat;
}

}  // namespace rlw
