#pragma once

#include <array>
#include <complex>
#include <memory>
#include <span>
#include <type_traits>
#include <vector>

#include "rlw/errors.hpp"

namespace rlw {

/// One periodic axis: nodes x_j = a + j*h, j = 0..n-1, right endpoint excluded.
struct Axis {
    double a = 0.0;
    double b = 0.0;
    int n = 0;
    double h = 0.0;
    /// kappa[j] = 2*pi*m/(b-a) with m = j for j <= n/2, m = j-n otherwise.
    std::vector<double> kappa;
    /// Index of the Nyquist mode (n/2).
    int nyquist = -1;
};

using Complex = std::complex<double>;
/// Per-mode scalar table in the grid's spectral layout (row-major over axes).
using Symbol = std::vector<Complex>;
/// Reusable complex scratch for transforms; grows on demand.
using SpectralScratch = std::vector<Complex>;

class PeriodicGrid;
using GridPtr = std::shared_ptr<const PeriodicGrid>;

/// Uniform periodic tensor grid (1D/2D) with cached FFT plans and wavenumber
/// tables. Immutable after construction; safe to share across threads.
class PeriodicGrid {
  public:
    ~PeriodicGrid();
    PeriodicGrid(const PeriodicGrid&) = delete;
    PeriodicGrid& operator=(const PeriodicGrid&) = delete;

    int dim() const { return dim_; }
    const Axis& axis(int d) const;
    int nx() const { return axes_[0].n; }
    int ny() const { return dim_ == 2 ? axes_[1].n : 1; }
    int total() const { return total_; }
    /// Quadrature weight of one node: product of spacings.
    double cell_volume() const { return cell_volume_; }

    double node_x(int ix) const { return axes_[0].a + ix * axes_[0].h; }
    double node_y(int iy) const { return axes_[1].a + iy * axes_[1].h; }

    /// Structural equality: same dimension, counts, and bounds.
    bool same_layout(const PeriodicGrid& other) const;

    /// Unnormalized forward DFT of a real field. `out` must hold total() modes.
    void forward(std::span<const double> in, Complex* out, SpectralScratch& scratch) const;
    /// Inverse DFT with 1/N normalization; the real part lands in `out`.
    void inverse(const Complex* in, std::span<double> out, SpectralScratch& scratch) const;

    friend GridPtr make_grid(std::array<double, 2> bounds, int n);
    friend GridPtr make_grid(std::array<double, 2> bounds_x, std::array<double, 2> bounds_y,
                             int n_x, int n_y);

  private:
    PeriodicGrid() = default;

    int dim_ = 0;
    std::array<Axis, 2> axes_;
    int total_ = 0;
    double cell_volume_ = 0.0;

    struct Plans;
    std::unique_ptr<Plans> plans_;
};

/// Build a 1D periodic grid on [a,b) with n nodes (n even, >= 8).
GridPtr make_grid(std::array<double, 2> bounds, int n);
/// Build a 2D periodic tensor grid.
GridPtr make_grid(std::array<double, 2> bounds_x, std::array<double, 2> bounds_y,
                  int n_x, int n_y);

/// Real-valued grid function, row-major over axes (x slow, y fast).
struct Field {
    GridPtr grid;
    std::vector<double> values;

    Field() = default;
    explicit Field(GridPtr g) : grid(std::move(g)), values(grid->total(), 0.0) {}

    int size() const { return static_cast<int>(values.size()); }
    double& operator[](int i) { return values[i]; }
    double operator[](int i) const { return values[i]; }
    double& at(int ix, int iy) { return values[ix * grid->ny() + iy]; }
    double at(int ix, int iy) const { return values[ix * grid->ny() + iy]; }
};

/// Evaluate f at every node; f takes (x) on 1D grids and (x,y) on 2D grids.
template <class F>
Field sample(const GridPtr& g, F&& f) {
    Field u(g);
    if constexpr (std::is_invocable_r_v<double, F, double>) {
        if (g->dim() != 1) throw DimensionError("sample: 1-argument function on a 2D grid");
        for (int ix = 0; ix < g->nx(); ++ix) u.values[ix] = f(g->node_x(ix));
    } else {
        if (g->dim() != 2) throw DimensionError("sample: 2-argument function on a 1D grid");
        for (int ix = 0; ix < g->nx(); ++ix)
            for (int iy = 0; iy < g->ny(); ++iy) u.at(ix, iy) = f(g->node_x(ix), g->node_y(iy));
    }
    return u;
}

/// Throw DimensionError unless u and v live on structurally equal grids.
void require_same_grid(const Field& u, const Field& v);

/// Periodic trapezoidal inner product: (prod h) * sum(u*v).
double inner_product(const Field& u, const Field& v);
/// Quadrature-weighted l2 norm, sqrt(inner_product(u,u)).
double l2_norm(const Field& u);
double max_norm(const Field& u);
/// Mean value: inner_product(u, 1) / |domain|.
double mean(const Field& u);

/// Spectral first derivative along `axis`; Nyquist mode zeroed so the discrete
/// derivative is exactly skew-symmetric.
Field deriv(const Field& u, int axis);

/// First-derivative symbol i*kappa along `axis` with the Nyquist mode zeroed,
/// in the grid's flattened spectral layout.
Symbol deriv_symbol(const PeriodicGrid& g, int axis);

/// inverse(symbol * forward(u)). The symbol must be conjugate-symmetric so the
/// result is real; violations throw InternalError.
Field apply_multiplier(const Field& u, const Symbol& symbol);

/// Forward DFT as a plain vector of modes (unnormalized).
std::vector<Complex> forward_transform(const Field& u);
/// Inverse DFT of a mode vector back to a real field (1/N normalization).
Field inverse_transform(const GridPtr& g, const std::vector<Complex>& spectrum);

}  // namespace rlw
