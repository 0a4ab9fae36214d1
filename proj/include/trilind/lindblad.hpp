// lindblad.hpp — dissipative time evolution and stationary states of
//   drho/dt = -i[H, rho] + sum_k (rate_k/2) D[o_k] rho,
//   D[o] rho = 2 o rho o† - o†o rho - rho o†o.

#pragma once

#include <Eigen/Sparse>

#include <functional>
#include <limits>
#include <vector>

#include "trilind/fock.hpp"

namespace trilind {

using SparseMatrix = Eigen::SparseMatrix<Complex>;

struct Collapse {
    double rate;
    Operator op;
};

struct CollapseSet {
    std::vector<Collapse> channels;

    // The standard three channels {(gamma, s_-), (kappa_a, a), (kappa_b, b)}.
    static CollapseSet standard(const HilbertSpace& space, double gamma, double kappa_a,
                                double kappa_b);

    void validate(const HilbertSpace& space) const;
};

// Sparse superoperator acting on the column-stacked density matrix.
struct Liouvillian {
    HilbertSpace space;
    SparseMatrix superop;
};

Liouvillian build_liouvillian(const Operator& h, const CollapseSet& collapses);

// L applied to an arbitrary matrix (unvec(superop · vec(m))).
Matrix apply(const Liouvillian& l, const Matrix& m);

enum class StepMethod { adaptive_rk45, fixed_rk4 };

struct EvolutionSpec {
    std::vector<double> t_grid; // strictly ascending, starts at 0 (units 1/gamma)
    double rel_tol = 1e-8;
    double abs_tol = 1e-10;
    double max_step = std::numeric_limits<double>::infinity();
    StepMethod method = StepMethod::adaptive_rk45;
    double fixed_step = 0.0; // required > 0 for fixed_rk4

    void validate() const;

    static EvolutionSpec linear(double t_max, int n_points);
};

struct Trajectory {
    HilbertSpace space;
    std::vector<double> times;
    std::vector<Matrix> states; // symmetrized at output points
    double max_trace_drift = 0.0;
    std::size_t steps_taken = 0;

    DensityMatrix state_at(std::size_t i) const { return {space, states.at(i)}; }
};

// Called once per grid time with the (symmetrized) state at that time.
using EvolveObserver = std::function<void(std::size_t index, double t, const DensityMatrix& rho)>;

struct EvolveStats {
    std::size_t steps_taken = 0;
    std::size_t steps_rejected = 0;
    double max_trace_drift = 0.0;
};

Trajectory evolve(const DensityMatrix& rho0, const Liouvillian& l, const EvolutionSpec& spec);

// Streaming variant: does not retain states. Used for long grids / large dims.
EvolveStats evolve_observe(const DensityMatrix& rho0, const Liouvillian& l,
                           const EvolutionSpec& spec, const EvolveObserver& observer);

struct SteadyStats {
    double residual = 0.0;     // ||L vec(rho_ss)||_2 of the returned state
    int refinement_steps = 0;
};

// Unique stationary state (requires open decay channels). Sparse LU on the
// trace-constrained system plus iterative refinement.
DensityMatrix steady_state(const Liouvillian& l, SteadyStats* stats = nullptr);

} // namespace trilind
