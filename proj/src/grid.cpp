#include "rlw/grid.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <numbers>

namespace rlw {

namespace {

// FFTW's planner is not thread-safe; executions on distinct buffers are.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

Axis make_axis(std::array<double, 2> bounds, int n) {
    if (n < 8 || n % 2 != 0)
        throw ConfigError("grid axis needs an even node count >= 8, got " + std::to_string(n));
    if (!(bounds[1] > bounds[0]))
        throw ConfigError("grid axis needs a nondegenerate interval [a,b), a < b");
    Axis ax;
    ax.a = bounds[0];
    ax.b = bounds[1];
    ax.n = n;
    ax.h = (bounds[1] - bounds[0]) / n;
    ax.kappa.resize(n);
    const double base = 2.0 * std::numbers::pi / (bounds[1] - bounds[0]);
    for (int j = 0; j < n; ++j) {
        const int m = (j <= n / 2) ? j : j - n;
        ax.kappa[j] = base * m;
    }
    ax.nyquist = n / 2;
    return ax;
}

}  // namespace

struct PeriodicGrid::Plans {
    fftw_plan fwd = nullptr;
    fftw_plan bwd = nullptr;

    Plans(int dim, int nx, int ny, Complex* buf_a, Complex* buf_b) {
        std::lock_guard<std::mutex> lock(planner_mutex());
        auto* a = reinterpret_cast<fftw_complex*>(buf_a);
        auto* b = reinterpret_cast<fftw_complex*>(buf_b);
        const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
        if (dim == 1) {
            fwd = fftw_plan_dft_1d(nx, a, b, FFTW_FORWARD, flags);
            bwd = fftw_plan_dft_1d(nx, a, b, FFTW_BACKWARD, flags);
        } else {
            fwd = fftw_plan_dft_2d(nx, ny, a, b, FFTW_FORWARD, flags);
            bwd = fftw_plan_dft_2d(nx, ny, a, b, FFTW_BACKWARD, flags);
        }
        if (!fwd || !bwd) throw InternalError("FFTW plan creation failed");
    }

    ~Plans() {
        std::lock_guard<std::mutex> lock(planner_mutex());
        if (fwd) fftw_destroy_plan(fwd);
        if (bwd) fftw_destroy_plan(bwd);
    }
};

PeriodicGrid::~PeriodicGrid() = default;

const Axis& PeriodicGrid::axis(int d) const {
    if (d < 0 || d >= dim_) throw DimensionError("axis index out of range for this grid");
    return axes_[d];
}

bool PeriodicGrid::same_layout(const PeriodicGrid& other) const {
    if (dim_ != other.dim_) return false;
    for (int d = 0; d < dim_; ++d) {
        if (axes_[d].n != other.axes_[d].n || axes_[d].a != other.axes_[d].a ||
            axes_[d].b != other.axes_[d].b)
            return false;
    }
    return true;
}

void PeriodicGrid::forward(std::span<const double> in, Complex* out,
                           SpectralScratch& scratch) const {
    if (static_cast<int>(in.size()) != total_)
        throw DimensionError("forward transform: field size does not match grid");
    scratch.resize(total_);
    for (int i = 0; i < total_; ++i) scratch[i] = Complex(in[i], 0.0);
    fftw_execute_dft(plans_->fwd, reinterpret_cast<fftw_complex*>(scratch.data()),
                     reinterpret_cast<fftw_complex*>(out));
}

void PeriodicGrid::inverse(const Complex* in, std::span<double> out,
                           SpectralScratch& scratch) const {
    if (static_cast<int>(out.size()) != total_)
        throw DimensionError("inverse transform: field size does not match grid");
    scratch.resize(total_);
    fftw_execute_dft(plans_->bwd, reinterpret_cast<fftw_complex*>(const_cast<Complex*>(in)),
                     reinterpret_cast<fftw_complex*>(scratch.data()));
    const double norm = 1.0 / total_;
    for (int i = 0; i < total_; ++i) out[i] = scratch[i].real() * norm;
}

GridPtr make_grid(std::array<double, 2> bounds, int n) {
    auto g = std::shared_ptr<PeriodicGrid>(new PeriodicGrid());
    g->dim_ = 1;
    g->axes_[0] = make_axis(bounds, n);
    g->total_ = n;
    g->cell_volume_ = g->axes_[0].h;
    std::vector<Complex> a(g->total_), b(g->total_);
    g->plans_ = std::make_unique<PeriodicGrid::Plans>(1, n, 1, a.data(), b.data());
    return g;
}

GridPtr make_grid(std::array<double, 2> bounds_x, std::array<double, 2> bounds_y,
                  int n_x, int n_y) {
    auto g = std::shared_ptr<PeriodicGrid>(new PeriodicGrid());
    g->dim_ = 2;
    g->axes_[0] = make_axis(bounds_x, n_x);
    g->axes_[1] = make_axis(bounds_y, n_y);
    g->total_ = n_x * n_y;
    g->cell_volume_ = g->axes_[0].h * g->axes_[1].h;
    std::vector<Complex> a(g->total_), b(g->total_);
    g->plans_ = std::make_unique<PeriodicGrid::Plans>(2, n_x, n_y, a.data(), b.data());
    return g;
}

void require_same_grid(const Field& u, const Field& v) {
    if (!u.grid || !v.grid) throw DimensionError("field has no grid");
    if (u.grid != v.grid && !u.grid->same_layout(*v.grid))
        throw DimensionError("fields live on different grids");
}

double inner_product(const Field& u, const Field& v) {
    require_same_grid(u, v);
    double acc = 0.0;
    const int n = u.size();
    for (int i = 0; i < n; ++i) acc += u.values[i] * v.values[i];
    return acc * u.grid->cell_volume();
}

double l2_norm(const Field& u) { return std::sqrt(inner_product(u, u)); }

double max_norm(const Field& u) {
    double m = 0.0;
    for (double x : u.values) m = std::max(m, std::abs(x));
    return m;
}

double mean(const Field& u) {
    double acc = 0.0;
    for (double x : u.values) acc += x;
    return acc / u.size();
}

Symbol deriv_symbol(const PeriodicGrid& g, int axis) {
    const Axis& ax = g.axis(axis);
    Symbol sym(g.total());
    const int ny = g.ny();
    for (int ix = 0; ix < g.nx(); ++ix) {
        for (int iy = 0; iy < ny; ++iy) {
            const int j = (axis == 0) ? ix : iy;
            const double k = (j == ax.nyquist) ? 0.0 : ax.kappa[j];
            sym[ix * ny + iy] = Complex(0.0, k);
        }
    }
    return sym;
}

namespace {

// Raw multiplier kernel without the conjugate-symmetry validation.
Field apply_symbol_unchecked(const Field& u, const Symbol& symbol) {
    const PeriodicGrid& g = *u.grid;
    std::vector<Complex> spec(g.total());
    SpectralScratch scratch;
    g.forward(u.values, spec.data(), scratch);
    for (int i = 0; i < g.total(); ++i) spec[i] *= symbol[i];
    Field out(u.grid);
    g.inverse(spec.data(), out.values, scratch);
    return out;
}

}  // namespace

Field deriv(const Field& u, int axis) {
    if (!u.grid) throw DimensionError("field has no grid");
    return apply_symbol_unchecked(u, deriv_symbol(*u.grid, axis));
}

Field apply_multiplier(const Field& u, const Symbol& symbol) {
    if (!u.grid) throw DimensionError("field has no grid");
    const PeriodicGrid& g = *u.grid;
    if (static_cast<int>(symbol.size()) != g.total())
        throw InternalError("multiplier symbol does not match the grid's spectral layout");
    // Real output needs symbol(-k) == conj(symbol(k)).
    double max_abs = 0.0;
    for (const Complex& s : symbol) max_abs = std::max(max_abs, std::abs(s));
    const int nx = g.nx(), ny = g.ny();
    const double tol = 1e-12 * std::max(1.0, max_abs);
    for (int ix = 0; ix < nx; ++ix) {
        for (int iy = 0; iy < ny; ++iy) {
            const int m = ix * ny + iy;
            const int mneg = ((nx - ix) % nx) * ny + (ny - iy) % ny;
            if (std::abs(symbol[mneg] - std::conj(symbol[m])) > tol)
                throw InternalError("multiplier symbol is not conjugate-symmetric");
        }
    }
    return apply_symbol_unchecked(u, symbol);
}

std::vector<Complex> forward_transform(const Field& u) {
    if (!u.grid) throw DimensionError("field has no grid");
    std::vector<Complex> spec(u.grid->total());
    SpectralScratch scratch;
    u.grid->forward(u.values, spec.data(), scratch);
    return spec;
}

Field inverse_transform(const GridPtr& g, const std::vector<Complex>& spectrum) {
    if (static_cast<int>(spectrum.size()) != g->total())
        throw DimensionError("spectrum size does not match grid");
    Field out(g);
    SpectralScratch scratch;
    g->inverse(spectrum.data(), out.values, scratch);
    return out;
}

}  // namespace rlw
