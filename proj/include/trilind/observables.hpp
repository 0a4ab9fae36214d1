// observables.hpp — measured quantities: occupation moments, second-order
// correlations g2(0)/g2(tau), number distributions, Wigner functions.

#pragma once

#include <vector>

#include "trilind/fock.hpp"
#include "trilind/lindblad.hpp"

namespace trilind {

struct MomentRecord {
    double n_a = 0.0;      // <a†a>
    double n_b = 0.0;      // <b†b>
    double spin_exc = 0.0; // <s_+ s_->
    double n_e = 0.0;      // spin_exc + (n_a + n_b)/2, composed exactly
};

MomentRecord moments(const DensityMatrix& rho);

struct NumberDistribution {
    Subsystem mode;
    std::vector<double> p; // p(q) = Tr(|q><q| rho), q = 0..n_max

    double occupation() const; // sum q p(q)
    double tail() const { return p.empty() ? 0.0 : p.back(); }
};

NumberDistribution number_distribution(const DensityMatrix& rho, Subsystem mode);

// Fraction of q-quanta states among the excitations: p~(q) = q p(q) / n_s.
NumberDistribution steady_distribution(const NumberDistribution& nd, double n_s);

// g2(0) = <o†o†oo> / <o†o>^2. Throws CorrelationUndefined when the occupation
// is at or below 1e-12.
double g2_zero(const DensityMatrix& rho, Subsystem mode);

// g2(tau) = Tr[o†o e^{L tau}(o rho_ss o†)] / n_ss^2 via the regression
// theorem: the collapsed state o rho_ss o† / n_ss is propagated under the same
// Liouvillian. tau_grid must be ascending and start at 0.
std::vector<double> g2_tau(const Liouvillian& l, const DensityMatrix& rho_ss, Subsystem mode,
                           const std::vector<double>& tau_grid,
                           const EvolutionSpec* base_spec = nullptr);

// tau grid used by default for delay scans: 0 followed by n-1 log-spaced
// points ending at tau_max.
std::vector<double> default_tau_grid(double tau_max, int n_points);

struct WignerGridSpec {
    double x_max = 3.0;
    int n_points = 101;
};

struct WignerGrid {
    std::vector<double> axis; // shared samples of Re(alpha) and Im(alpha)
    Eigen::MatrixXd values;   // values(i, j) = W(axis[i] + i*axis[j])
    double norm_sum = 0.0;    // Riemann sum of W over the grid
    bool norm_ok = false;     // |norm_sum - 1| <= 0.03
};

// Displaced-parity Wigner function W(alpha) = (2/pi) Tr[D†(alpha) rho
// D(alpha) P], with D built by matrix exponential in the truncated space and
// P the parity operator. Only bosonic reductions are accepted.
WignerGrid wigner(const ReducedDensity& reduced, const WignerGridSpec& spec);

} // namespace trilind
