#include "gcss/wigner.hpp"

#include <cmath>

namespace gcss {

namespace {
constexpr double kUnderflow = -700.0;

// <a_j - beta | beta - a_k> with the displacement phases; one term of the
// coherent cross-Wigner sum. Everything stays in the exponent.
Complex cross_term(Complex aj, Complex ak, Complex beta) {
    const Complex u = aj - beta;
    const Complex v = beta - ak;
    Complex expo = -0.5 * std::norm(u) - 0.5 * std::norm(v) + std::conj(u) * v;
    expo += 0.5 * (beta * std::conj(aj) - std::conj(beta) * aj);
    expo += 0.5 * (std::conj(beta) * ak - beta * std::conj(ak));
    if (expo.real() < kUnderflow) return {0.0, 0.0};
    return std::exp(expo);
}
}  // namespace

PhaseGrid PhaseGrid::centered_on(Complex alpha, double halfwidth, int n) {
    PhaseGrid g;
    g.x0 = std::sqrt(2.0) * alpha.real();
    g.p0 = std::sqrt(2.0) * alpha.imag();
    g.half_x = g.half_p = halfwidth;
    g.nx = g.np = n;
    g.validate();
    return g;
}

void PhaseGrid::validate() const {
    if (nx < 16 || np < 16) throw ConfigError("PhaseGrid: need nx, np >= 16");
    if (!(half_x > 0.0) || !(half_p > 0.0)) throw ConfigError("PhaseGrid: ranges must be positive");
}

WignerField wigner_analytic(const CoherentSnapshot& s, const PhaseGrid& grid, int threads) {
    grid.validate();
    const double n2 = snapshot_norm_squared(s);
    if (std::abs(n2 - 1.0) > 1e-6)
        throw ConfigError("wigner_analytic: snapshot must be normalized");
    WignerField w{grid, Eigen::MatrixXd::Zero(grid.nx, grid.np)};
    const std::size_t m = s.size();
    parallel_for(static_cast<std::size_t>(grid.nx), threads, [&](std::size_t i) {
        const double x = grid.x(static_cast<int>(i));
        for (int j = 0; j < grid.np; ++j) {
            const Complex beta{x / std::sqrt(2.0), grid.p(j) / std::sqrt(2.0)};
            Complex acc{0.0, 0.0};
            for (std::size_t a = 0; a < m; ++a)
                for (std::size_t b = 0; b < m; ++b)
                    acc += std::conj(s.coeff[a]) * s.coeff[b] *
                           cross_term(s.alpha[a], s.alpha[b], beta);
            w.values(static_cast<int>(i), j) = acc.real() / constants::pi;
        }
    });
    return w;
}

WignerField wigner_analytic(const CoherentSuperposition& s, double t, const PhaseGrid& grid,
                            int threads) {
    return wigner_analytic(snapshot_at(s, t), grid, threads);
}

WignerField wigner_fock(const FockDensity& rho_in, const PhaseGrid& grid, int threads) {
    grid.validate();
    if (rho_in.leakage() > 1e-6)
        throw TruncationError("wigner_fock: density leakage exceeds 1e-6, raise n_max");
    const FockDensity rho = rho_in.normalized();
    const int nmax = rho.n_max();
    const Eigen::MatrixXcd& r = rho.matrix();

    // Skip superdiagonals with no weight.
    std::vector<double> diag_amp(nmax + 1, 0.0);
    for (int d = 0; d <= nmax; ++d)
        for (int n = 0; n + d <= nmax; ++n)
            diag_amp[d] = std::max(diag_amp[d], std::abs(r(n, n + d)));

    // lgamma table for the d! prefactors
    std::vector<double> lgam(nmax + 2, 0.0);
    for (int i = 1; i <= nmax + 1; ++i) lgam[i] = lgam[i - 1] + std::log(static_cast<double>(i));

    WignerField w{grid, Eigen::MatrixXd::Zero(grid.nx, grid.np)};
    parallel_for(static_cast<std::size_t>(grid.nx), threads, [&](std::size_t ii) {
        const int i = static_cast<int>(ii);
        const double x = grid.x(i);
        for (int j = 0; j < grid.np; ++j) {
            const Complex beta{x / std::sqrt(2.0), grid.p(j) / std::sqrt(2.0)};
            const Complex g = 2.0 * beta;
            const double y = std::norm(g);
            const double ln_abs_g = y > 0.0 ? 0.5 * std::log(y) : 0.0;
            const double ph = y > 0.0 ? std::arg(g) : 0.0;
            // W = (1/pi) sum_{m,n} rho_{n,m} (-1)^n <m|D(g)|n>; for each
            // superdiagonal m = n+d the elements follow the Laguerre
            // recurrence with unit-bounded scaled values.
            Complex total{0.0, 0.0};
            for (int d = 0; d <= nmax; ++d) {
                if (diag_amp[d] < 1e-18) continue;
                if (d > 0 && y == 0.0) continue;  // D(0) = I has no off-diagonal elements
                const double lm = -0.5 * y + d * ln_abs_g - 0.5 * lgam[d];
                if (lm < kUnderflow) continue;
                Complex Mn = std::polar(std::exp(lm), d * ph);  // <d|D|0>
                Complex Mn_prev{0.0, 0.0};
                Complex s{0.0, 0.0};
                double sign = 1.0;
                for (int n = 0; n + d <= nmax; ++n) {
                    s += r(n, n + d) * sign * Mn;
                    sign = -sign;
                    const double c1 = std::sqrt((n + 1.0) / (n + 1.0 + d)) *
                                      (2.0 * n + d + 1.0 - y) / (n + 1.0);
                    const double c2 =
                        n > 0 ? std::sqrt((static_cast<double>(n) * (n + d)) /
                                          ((n + 1.0) * (n + 1.0 + d)))
                              : 0.0;
                    const Complex Mn_next = c1 * Mn - c2 * Mn_prev;
                    Mn_prev = Mn;
                    Mn = Mn_next;
                }
                total += d == 0 ? s : Complex{2.0 * s.real(), 0.0};
            }
            w.values(i, j) = total.real() / constants::pi;
        }
    });
    return w;
}

WignerExtrema wigner_extrema(const WignerField& w) {
    WignerExtrema e;
    e.min_value = 1e300;
    e.max_value = -1e300;
    double negsum = 0.0;
    for (int i = 0; i < w.grid.nx; ++i)
        for (int j = 0; j < w.grid.np; ++j) {
            const double v = w.values(i, j);
            if (v < e.min_value) {
                e.min_value = v;
                e.min_x = w.grid.x(i);
                e.min_p = w.grid.p(j);
            }
            if (v > e.max_value) {
                e.max_value = v;
                e.max_x = w.grid.x(i);
                e.max_p = w.grid.p(j);
            }
            if (v < 0.0) negsum -= v;
        }
    e.negative_volume = negsum * w.grid.dx() * w.grid.dp();
    return e;
}

double wigner_integral(const WignerField& w) {
    // trapezoid in both directions: half weights on the grid boundary
    double sum = 0.0;
    for (int i = 0; i < w.grid.nx; ++i) {
        const double wi = (i == 0 || i == w.grid.nx - 1) ? 0.5 : 1.0;
        for (int j = 0; j < w.grid.np; ++j) {
            const double wj = (j == 0 || j == w.grid.np - 1) ? 0.5 : 1.0;
            sum += wi * wj * w.values(i, j);
        }
    }
    return sum * w.grid.dx() * w.grid.dp();
}

std::vector<double> wigner_x_marginal(const WignerField& w) {
    std::vector<double> out(w.grid.nx, 0.0);
    for (int i = 0; i < w.grid.nx; ++i) {
        double sum = 0.0;
        for (int j = 0; j < w.grid.np; ++j) {
            const double wj = (j == 0 || j == w.grid.np - 1) ? 0.5 : 1.0;
            sum += wj * w.values(i, j);
        }
        out[i] = sum * w.grid.dp();
    }
    return out;
}

}  // namespace gcss
