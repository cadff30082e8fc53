#pragma once

#include <Eigen/Core>

#include "gcss/coherent.hpp"
#include "gcss/fock.hpp"

namespace gcss {

// Rectangular phase-space grid in quadrature units
// x = sqrt(2) Re(alpha), p = sqrt(2) Im(alpha).
struct PhaseGrid {
    double x0 = 0.0, p0 = 0.0;       // center
    double half_x = 6.0, half_p = 6.0;
    int nx = 201, np = 201;

    double x(int i) const { return x0 - half_x + 2.0 * half_x * i / (nx - 1); }
    double p(int j) const { return p0 - half_p + 2.0 * half_p * j / (np - 1); }
    double dx() const { return 2.0 * half_x / (nx - 1); }
    double dp() const { return 2.0 * half_p / (np - 1); }

    // Grid centered on a coherent amplitude, +-halfwidth in both quadratures.
    static PhaseGrid centered_on(Complex alpha, double halfwidth, int n);
    void validate() const;
};

// values(i,j) = W(x_i, p_j); convention: integral over dx dp is 1 and the
// vacuum peaks at 1/pi.
struct WignerField {
    PhaseGrid grid;
    Eigen::MatrixXd values;
};

struct WignerExtrema {
    double min_value = 0.0, min_x = 0.0, min_p = 0.0;
    double max_value = 0.0, max_x = 0.0, max_p = 0.0;
    double negative_volume = 0.0;  // integral of max(-W, 0)
};

// Closed-form Gaussian pair sum for a normalized coherent superposition.
WignerField wigner_analytic(const CoherentSnapshot& s, const PhaseGrid& grid, int threads = 0);
WignerField wigner_analytic(const CoherentSuperposition& s, double t, const PhaseGrid& grid,
                            int threads = 0);

// Displaced-parity evaluation W = (1/pi) Tr[rho D(beta) Pi D^dag(beta)],
// beta = (x+ip)/sqrt(2), via stable Laguerre recurrences on the matrix
// elements of D(2 beta). Throws TruncationError when rho leakage > 1e-6.
WignerField wigner_fock(const FockDensity& rho, const PhaseGrid& grid, int threads = 0);

WignerExtrema wigner_extrema(const WignerField& w);

// Trapezoidal integral of W over the grid.
double wigner_integral(const WignerField& w);

// Marginal |<x|psi>|^2: integral of W over p, per x grid point.
std::vector<double> wigner_x_marginal(const WignerField& w);

}  // namespace gcss
