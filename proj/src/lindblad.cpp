// lindblad.cpp — superoperator assembly, Dormand–Prince 5(4) / RK4 stepping,
// and the stationary-state solve.

#include "trilind/lindblad.hpp"

#include <Eigen/SparseLU>
#include <unsupported/Eigen/KroneckerProduct>

#include <algorithm>
#include <cmath>
#include <string>

#include "trilind/log.hpp"

namespace trilind {

CollapseSet CollapseSet::standard(const HilbertSpace& space, double gamma, double kappa_a,
                                  double kappa_b) {
    CollapseSet set;
    set.channels.push_back({gamma, spin_operator(space, SpinKind::minus)});
    set.channels.push_back({kappa_a, mode_annihilator(space, Subsystem::cavity)});
    set.channels.push_back({kappa_b, mode_annihilator(space, Subsystem::phonon)});
    return set;
}

void CollapseSet::validate(const HilbertSpace& space) const {
    for (const auto& c : channels) {
        if (c.rate < 0.0) throw Error("collapse rates must be nonnegative");
        if (!(c.op.space == space)) {
            throw DimensionError("collapse operator space does not match Hamiltonian space");
        }
    }
}

namespace {

SparseMatrix sparse_kron(const SparseMatrix& a, const SparseMatrix& b) {
    SparseMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    out = Eigen::kroneckerProduct(a, b);
    return out;
}

SparseMatrix sparse_identity(int n) {
    SparseMatrix id(n, n);
    id.setIdentity();
    return id;
}

Eigen::Map<const Vector> vec_view(const Matrix& m) {
    return Eigen::Map<const Vector>(m.data(), m.size());
}

Matrix unvec(const Vector& v, int n) {
    return Eigen::Map<const Matrix>(v.data(), n, n);
}

} // namespace

Liouvillian build_liouvillian(const Operator& h, const CollapseSet& collapses) {
    collapses.validate(h.space);
    const int n = h.space.dim;
    const SparseMatrix id = sparse_identity(n);
    const SparseMatrix hs = h.matrix.sparseView();
    const Complex i_unit(0.0, 1.0);

    // vec(H rho) = (I ⊗ H) vec(rho), vec(rho H) = (H^T ⊗ I) vec(rho)
    SparseMatrix l = -i_unit * sparse_kron(id, hs);
    l += i_unit * sparse_kron(SparseMatrix(hs.transpose()), id);

    for (const auto& c : collapses.channels) {
        if (c.rate == 0.0) continue;
        const SparseMatrix o = c.op.matrix.sparseView();
        const SparseMatrix o_conj = o.conjugate();
        const SparseMatrix odo = SparseMatrix(o.adjoint()) * o;
        // (rate/2) D[o]: rate (o rho o† - {o†o, rho}/2)
        l += c.rate * sparse_kron(o_conj, o);
        l -= (0.5 * c.rate) * sparse_kron(id, odo);
        l -= (0.5 * c.rate) * sparse_kron(SparseMatrix(odo.transpose()), id);
    }
    l.makeCompressed();
    return {h.space, std::move(l)};
}

Matrix apply(const Liouvillian& l, const Matrix& m) {
    if (m.rows() != l.space.dim || m.cols() != l.space.dim) {
        throw DimensionError("apply: matrix does not match Liouvillian space");
    }
    const Vector out = l.superop * vec_view(m);
    return unvec(out, l.space.dim);
}

void EvolutionSpec::validate() const {
    if (t_grid.empty()) throw Error("evolution grid is empty");
    if (t_grid.front() != 0.0) throw Error("evolution grid must start at 0");
    for (std::size_t i = 1; i < t_grid.size(); ++i) {
        if (!(t_grid[i] > t_grid[i - 1])) throw Error("evolution grid must be strictly ascending");
    }
    if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) throw Error("tolerances must be positive");
    if (!(max_step > 0.0)) throw Error("max_step must be positive");
    if (method == StepMethod::fixed_rk4 && !(fixed_step > 0.0)) {
        throw Error("fixed_rk4 requires fixed_step > 0");
    }
}

EvolutionSpec EvolutionSpec::linear(double t_max, int n_points) {
    if (!(t_max > 0.0) || n_points < 2) throw Error("linear grid needs t_max > 0, n_points >= 2");
    EvolutionSpec spec;
    spec.t_grid.resize(n_points);
    for (int i = 0; i < n_points; ++i) {
        spec.t_grid[i] = t_max * static_cast<double>(i) / (n_points - 1);
    }
    return spec;
}

namespace {

// Dormand–Prince 5(4) tableau.
constexpr double kA21 = 1.0 / 5.0;
constexpr double kA31 = 3.0 / 40.0, kA32 = 9.0 / 40.0;
constexpr double kA41 = 44.0 / 45.0, kA42 = -56.0 / 15.0, kA43 = 32.0 / 9.0;
constexpr double kA51 = 19372.0 / 6561.0, kA52 = -25360.0 / 2187.0, kA53 = 64448.0 / 6561.0,
                 kA54 = -212.0 / 729.0;
constexpr double kA61 = 9017.0 / 3168.0, kA62 = -355.0 / 33.0, kA63 = 46732.0 / 5247.0,
                 kA64 = 49.0 / 176.0, kA65 = -5103.0 / 18656.0;
constexpr double kB1 = 35.0 / 384.0, kB3 = 500.0 / 1113.0, kB4 = 125.0 / 192.0,
                 kB5 = -2187.0 / 6784.0, kB6 = 11.0 / 84.0;
constexpr double kE1 = 5179.0 / 57600.0, kE3 = 7571.0 / 16695.0, kE4 = 393.0 / 640.0,
                 kE5 = -92097.0 / 339200.0, kE6 = 187.0 / 2100.0, kE7 = 1.0 / 40.0;

class Dopri5 {
public:
    Dopri5(const SparseMatrix& l, double rel_tol, double abs_tol)
        : l_(l), rel_tol_(rel_tol), abs_tol_(abs_tol) {}

    // One attempted step of size h from y; on acceptance y and f0 are updated
    // (FSAL) and the actual error ratio is returned via err.
    bool try_step(Vector& y, Vector& f0, double h, double& err) {
        k2_ = l_ * (y + (h * kA21) * f0).eval();
        k3_ = l_ * (y + h * (kA31 * f0 + kA32 * k2_)).eval();
        k4_ = l_ * (y + h * (kA41 * f0 + kA42 * k2_ + kA43 * k3_)).eval();
        k5_ = l_ * (y + h * (kA51 * f0 + kA52 * k2_ + kA53 * k3_ + kA54 * k4_)).eval();
        k6_ = l_ * (y + h * (kA61 * f0 + kA62 * k2_ + kA63 * k3_ + kA64 * k4_ + kA65 * k5_)).eval();
        y5_ = y + h * (kB1 * f0 + kB3 * k3_ + kB4 * k4_ + kB5 * k5_ + kB6 * k6_);
        k7_ = l_ * y5_;
        y4_ = y + h * (kE1 * f0 + kE3 * k3_ + kE4 * k4_ + kE5 * k5_ + kE6 * k6_ + kE7 * k7_);

        err = 0.0;
        for (Eigen::Index i = 0; i < y.size(); ++i) {
            const double diff = std::abs(y5_(i) - y4_(i));
            const double scale = abs_tol_ + rel_tol_ * std::max(std::abs(y(i)), std::abs(y5_(i)));
            err = std::max(err, diff / scale);
        }
        if (err <= 1.0) {
            y.swap(y5_);
            f0.swap(k7_); // FSAL: last stage is the derivative at the new point
            return true;
        }
        return false;
    }

    Vector derivative(const Vector& y) const { return l_ * y; }

private:
    const SparseMatrix& l_;
    double rel_tol_;
    double abs_tol_;
    Vector k2_, k3_, k4_, k5_, k6_, k7_, y5_, y4_;
};

double initial_step_guess(const SparseMatrix& l, const Vector& y0, double max_step) {
    const double dy = (l * y0).norm();
    const double y = std::max(y0.norm(), 1e-12);
    double h = (dy > 0.0) ? 0.01 * y / dy : 1e-6;
    return std::min(h, max_step);
}

void symmetrize(Matrix& rho) {
    rho = 0.5 * (rho + rho.adjoint()).eval();
}

} // namespace

EvolveStats evolve_observe(const DensityMatrix& rho0, const Liouvillian& l,
                           const EvolutionSpec& spec, const EvolveObserver& observer) {
    if (!(rho0.space == l.space)) {
        throw DimensionError("evolve: initial state space does not match Liouvillian");
    }
    spec.validate();

    const int n = l.space.dim;
    Vector y = vec_view(rho0.matrix);
    EvolveStats stats;

    auto emit = [&](std::size_t index, double t) {
        Matrix rho = unvec(y, n);
        symmetrize(rho);
        stats.max_trace_drift =
            std::max(stats.max_trace_drift, std::abs(rho.trace().real() - 1.0));
        if (observer) observer(index, t, DensityMatrix{l.space, std::move(rho)});
    };

    emit(0, spec.t_grid.front());

    constexpr std::size_t kMaxSteps = 50'000'000;

    if (spec.method == StepMethod::fixed_rk4) {
        Vector k1, k2, k3, k4;
        double t = 0.0;
        for (std::size_t gi = 1; gi < spec.t_grid.size(); ++gi) {
            const double span = spec.t_grid[gi] - t;
            const auto substeps =
                static_cast<std::size_t>(std::ceil(span / spec.fixed_step - 1e-12));
            const double h = span / static_cast<double>(std::max<std::size_t>(substeps, 1));
            for (std::size_t s = 0; s < std::max<std::size_t>(substeps, 1); ++s) {
                k1 = l.superop * y;
                k2 = l.superop * (y + (0.5 * h) * k1).eval();
                k3 = l.superop * (y + (0.5 * h) * k2).eval();
                k4 = l.superop * (y + h * k3).eval();
                y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
                ++stats.steps_taken;
                if (stats.steps_taken > kMaxSteps) {
                    throw IntegrationError("step budget exhausted at t=" + std::to_string(t));
                }
            }
            t = spec.t_grid[gi];
            emit(gi, t);
        }
        return stats;
    }

    Dopri5 stepper(l.superop, spec.rel_tol, spec.abs_tol);
    Vector f = stepper.derivative(y);
    double t = 0.0;
    double h = std::min(initial_step_guess(l.superop, y, spec.max_step),
                        spec.t_grid.back() - spec.t_grid.front());

    for (std::size_t gi = 1; gi < spec.t_grid.size(); ++gi) {
        const double t_target = spec.t_grid[gi];
        while (t < t_target) {
            const double h_try = std::min({h, spec.max_step, t_target - t});
            if (h_try < 16.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t))) {
                throw IntegrationError("step size underflow at t=" + std::to_string(t));
            }
            double err = 0.0;
            const bool accepted = stepper.try_step(y, f, h_try, err);
            const double factor =
                std::clamp(0.9 * std::pow(std::max(err, 1e-10), -0.2), 0.2, 5.0);
            if (accepted) {
                t += h_try;
                ++stats.steps_taken;
                h = h_try * factor;
            } else {
                ++stats.steps_rejected;
                h = h_try * factor;
            }
            if (stats.steps_taken + stats.steps_rejected > kMaxSteps) {
                throw IntegrationError("step budget exhausted at t=" + std::to_string(t));
            }
        }
        emit(gi, t_target);
    }
    return stats;
}

Trajectory evolve(const DensityMatrix& rho0, const Liouvillian& l, const EvolutionSpec& spec) {
    Trajectory traj;
    traj.space = l.space;
    traj.times = spec.t_grid;
    traj.states.resize(spec.t_grid.size());
    const EvolveStats stats =
        evolve_observe(rho0, l, spec, [&](std::size_t i, double, const DensityMatrix& rho) {
            traj.states[i] = rho.matrix;
        });
    traj.max_trace_drift = stats.max_trace_drift;
    traj.steps_taken = stats.steps_taken;
    return traj;
}

DensityMatrix steady_state(const Liouvillian& l, SteadyStats* stats) {
    const int n = l.space.dim;
    const int nn = n * n;

    // Replace the first row of L with the trace functional; the null vector of
    // L then solves A x = e_0 with unit trace built in.
    std::vector<Eigen::Triplet<Complex>> trips;
    trips.reserve(static_cast<std::size_t>(l.superop.nonZeros()) + n);
    for (int col = 0; col < l.superop.outerSize(); ++col) {
        for (SparseMatrix::InnerIterator it(l.superop, col); it; ++it) {
            if (it.row() == 0) continue;
            trips.emplace_back(static_cast<int>(it.row()), col, it.value());
        }
    }
    for (int k = 0; k < n; ++k) {
        trips.emplace_back(0, k * n + k, Complex(1.0, 0.0));
    }
    SparseMatrix a(nn, nn);
    a.setFromTriplets(trips.begin(), trips.end());
    a.makeCompressed();

    Eigen::SparseLU<SparseMatrix> lu;
    lu.compute(a);
    if (lu.info() != Eigen::Success) {
        throw SolverError(
            "stationary solve failed (singular or ill-conditioned Liouvillian); "
            "try a larger truncation or check that decay rates are nonzero");
    }

    Vector rhs = Vector::Zero(nn);
    rhs(0) = 1.0;
    Vector x = lu.solve(rhs);
    if (lu.info() != Eigen::Success) {
        throw SolverError("stationary back-substitution failed");
    }

    int refinements = 0;
    for (; refinements < 5; ++refinements) {
        const Vector r = rhs - a * x;
        if (r.norm() < 1e-13 * std::max(1.0, x.norm())) break;
        x += lu.solve(r);
    }

    Matrix rho = unvec(x, n);
    symmetrize(rho);
    const double trace = rho.trace().real();
    if (!std::isfinite(trace) || std::abs(trace) < 1e-12) {
        throw SolverError("stationary state has non-finite or vanishing trace");
    }
    rho /= trace;

    const double residual = (l.superop * vec_view(rho)).norm();
    if (stats != nullptr) {
        stats->residual = residual;
        stats->refinement_steps = refinements;
    }
    if (!(residual < 1e-10)) {
        throw SolverError("stationary residual " + std::to_string(residual) +
                          " exceeds 1e-10; try a larger truncation or check rates");
    }
    log::debug("steady_state residual " + std::to_string(residual) + " after " +
               std::to_string(refinements) + " refinement steps");
    return {l.space, std::move(rho)};
}

} // namespace trilind
