// observables.cpp — moments, correlations, distributions, Wigner grids

#include "trilind/observables.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <string>

namespace trilind {

MomentRecord moments(const DensityMatrix& rho) {
    const HilbertSpace& sp = rho.space;
    MomentRecord rec;
    for (int i = 0; i < sp.dim; ++i) {
        const auto lbl = sp.label_of(i);
        const double pop = rho.matrix(i, i).real();
        rec.n_a += lbl.n_a * pop;
        rec.n_b += lbl.n_b * pop;
        if (lbl.s == 1) rec.spin_exc += pop;
    }
    rec.n_e = rec.spin_exc + 0.5 * (rec.n_a + rec.n_b);
    return rec;
}

double NumberDistribution::occupation() const {
    double n = 0.0;
    for (std::size_t q = 0; q < p.size(); ++q) n += static_cast<double>(q) * p[q];
    return n;
}

NumberDistribution number_distribution(const DensityMatrix& rho, Subsystem mode) {
    if (mode == Subsystem::spin) throw DimensionError("number_distribution: not a bosonic mode");
    const HilbertSpace& sp = rho.space;
    const int levels = (mode == Subsystem::cavity) ? sp.cavity_levels() : sp.phonon_levels();
    NumberDistribution nd{mode, std::vector<double>(levels, 0.0)};
    for (int i = 0; i < sp.dim; ++i) {
        const auto lbl = sp.label_of(i);
        const int q = (mode == Subsystem::cavity) ? lbl.n_a : lbl.n_b;
        nd.p[q] += rho.matrix(i, i).real();
    }
    return nd;
}

NumberDistribution steady_distribution(const NumberDistribution& nd, double n_s) {
    if (!(n_s > 1e-12)) {
        throw CorrelationUndefined("steady_distribution undefined for occupation <= 1e-12");
    }
    NumberDistribution out{nd.mode, std::vector<double>(nd.p.size(), 0.0)};
    for (std::size_t q = 0; q < nd.p.size(); ++q) {
        out.p[q] = static_cast<double>(q) * nd.p[q] / n_s;
    }
    return out;
}

double g2_zero(const DensityMatrix& rho, Subsystem mode) {
    const NumberDistribution nd = number_distribution(rho, mode);
    const double n = nd.occupation();
    if (!(n > 1e-12)) {
        throw CorrelationUndefined(std::string("g2 undefined: ") + subsystem_name(mode) +
                                   " occupation " + std::to_string(n) + " <= 1e-12");
    }
    double num = 0.0;
    for (std::size_t q = 2; q < nd.p.size(); ++q) {
        num += static_cast<double>(q) * static_cast<double>(q - 1) * nd.p[q];
    }
    return num / (n * n);
}

std::vector<double> g2_tau(const Liouvillian& l, const DensityMatrix& rho_ss, Subsystem mode,
                           const std::vector<double>& tau_grid, const EvolutionSpec* base_spec) {
    if (mode == Subsystem::spin) throw DimensionError("g2_tau: not a bosonic mode");
    if (!(rho_ss.space == l.space)) throw DimensionError("g2_tau: state/Liouvillian mismatch");
    const double stationarity = apply(l, rho_ss.matrix).norm();
    if (!(stationarity < 1e-6)) {
        throw SolverError("g2_tau: input is not stationary (||L rho|| = " +
                          std::to_string(stationarity) + ")");
    }

    const Operator o = mode_annihilator(l.space, mode);
    const MomentRecord m_ss = moments(rho_ss);
    const double n_ss = (mode == Subsystem::cavity) ? m_ss.n_a : m_ss.n_b;
    if (!(n_ss > 1e-12)) {
        throw CorrelationUndefined(std::string("g2_tau undefined: ") + subsystem_name(mode) +
                                   " occupation <= 1e-12");
    }

    // Collapsed state (o rho o†)/n_ss is a valid density matrix; its
    // occupation at delay tau, rescaled by n_ss, is g2(tau).
    Matrix collapsed = o.matrix * rho_ss.matrix * o.adjoint().matrix;
    collapsed /= collapsed.trace().real();

    EvolutionSpec spec;
    if (base_spec != nullptr) spec = *base_spec;
    spec.t_grid = tau_grid;
    spec.validate();

    std::vector<double> g2(tau_grid.size(), 0.0);
    evolve_observe(DensityMatrix{l.space, std::move(collapsed)}, l, spec,
                   [&](std::size_t i, double, const DensityMatrix& rho) {
                       const MomentRecord m = moments(rho);
                       const double occ = (mode == Subsystem::cavity) ? m.n_a : m.n_b;
                       g2[i] = occ / n_ss;
                   });
    return g2;
}

std::vector<double> default_tau_grid(double tau_max, int n_points) {
    if (!(tau_max > 0.0) || n_points < 2) throw Error("tau grid needs tau_max > 0, n >= 2");
    std::vector<double> grid(n_points);
    grid[0] = 0.0;
    const double tau_min = tau_max * 1e-3;
    const double ratio = std::pow(tau_max / tau_min, 1.0 / (n_points - 2 > 0 ? n_points - 2 : 1));
    double t = tau_min;
    for (int i = 1; i < n_points; ++i) {
        grid[i] = t;
        t *= ratio;
    }
    grid.back() = tau_max;
    return grid;
}

// W(alpha) = (2/pi) Tr[D†(alpha) rho D(alpha) P]. The state is padded into a
// working space large enough that displaced states up to the grid corner fit;
// in the padded space the matrix exponential is evaluated spectrally:
// alpha = r e^{i th} gives D(alpha) = R_th exp(r(a†-a)) R_th† with R_th the
// number-phase rotation, and exp(r(a†-a)) = U diag(e^{-i r s}) U† from one
// eigendecomposition of i(a†-a).
WignerGrid wigner(const ReducedDensity& reduced, const WignerGridSpec& spec) {
    if (reduced.subsystem == Subsystem::spin) {
        throw DimensionError("wigner: spin has no phase-space representation here");
    }
    if (spec.n_points < 2 || !(spec.x_max > 0.0)) {
        throw Error("wigner: grid needs n_points >= 2 and x_max > 0");
    }
    const int levels = static_cast<int>(reduced.matrix.rows());
    const double corner = spec.x_max * std::sqrt(2.0);
    const int work = levels + static_cast<int>(std::ceil((corner + 4.0) * (corner + 4.0)));

    const Matrix a = mode_annihilator_block(work - 1);
    const Complex i_unit(0.0, 1.0);
    Eigen::SelfAdjointEigenSolver<Matrix> es(i_unit * (a.adjoint() - a).eval());
    if (es.info() != Eigen::Success) throw Error("wigner: eigendecomposition failed");
    const Eigen::VectorXd s = es.eigenvalues();
    const Matrix& u = es.eigenvectors();

    // P_eig(k, j) = (U† Parity U)(k, j), precomputed once
    Matrix parity_cols = u; // Parity * U, row q scaled by (-1)^q
    for (int q = 0; q < work; ++q) {
        if (q % 2 == 1) parity_cols.row(q) *= -1.0;
    }
    const Matrix p_eig = u.adjoint() * parity_cols;
    const Matrix u_top = u.topRows(levels); // rows overlapping the state block

    WignerGrid grid;
    grid.axis.resize(spec.n_points);
    for (int i = 0; i < spec.n_points; ++i) {
        grid.axis[i] = -spec.x_max + 2.0 * spec.x_max * i / (spec.n_points - 1);
    }
    grid.values.resize(spec.n_points, spec.n_points);

    const double prefactor = 2.0 / M_PI;
    Matrix rho_rot(levels, levels);
    Vector phase(work);
    for (int i = 0; i < spec.n_points; ++i) {
        for (int j = 0; j < spec.n_points; ++j) {
            const double x = grid.axis[i];
            const double y = grid.axis[j];
            const double r = std::hypot(x, y);
            const double theta = std::atan2(y, x);

            // rho rotated into the radial frame: rho_{mn} e^{i th (n-m)}
            for (int m = 0; m < levels; ++m) {
                for (int n = 0; n < levels; ++n) {
                    rho_rot(m, n) = reduced.matrix(m, n) * std::exp(i_unit * (theta * (n - m)));
                }
            }
            const Matrix a_eig = u_top.adjoint() * rho_rot * u_top;
            for (int k = 0; k < work; ++k) phase(k) = std::exp(-i_unit * (r * s(k)));

            // Tr[E_r^{-1} A E_r P] as a quadratic form in the phases
            Complex value(0.0, 0.0);
            for (int jj = 0; jj < work; ++jj) {
                Complex row_sum(0.0, 0.0);
                for (int kk = 0; kk < work; ++kk) {
                    row_sum += a_eig(jj, kk) * p_eig(kk, jj) * phase(kk);
                }
                value += std::conj(phase(jj)) * row_sum;
            }
            grid.values(i, j) = prefactor * value.real();
        }
    }

    const double dx = 2.0 * spec.x_max / (spec.n_points - 1);
    grid.norm_sum = grid.values.sum() * dx * dx;
    grid.norm_ok = std::abs(grid.norm_sum - 1.0) <= 0.03;
    return grid;
}

} // namespace trilind
