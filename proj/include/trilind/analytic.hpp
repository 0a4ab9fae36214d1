// analytic.hpp — closed-form dynamics of the resonant, undamped, undriven
// squeeze/beamsplitter interactions. Kept free of any solver dependency so
// oracle-vs-solver tests stay independent.

#pragma once

#include "trilind/fock.hpp"
#include "trilind/observables.hpp"

namespace trilind {

enum class Branch { squeeze, beamsplitter };

// Two-level dressed dynamics starting from |n, n, e>:
//   squeeze:      cos(th)|n,n,e> - i sin(th)|n+1,n+1,g>, th = g(n+1) t
//   beamsplitter: cos(th)|n,n,e> - i sin(th)|n+1,n-1,g>, th = g sqrt(n(n+1)) t
struct AnalyticState {
    int n;
    double theta;
    Branch branch;

    // The ket in a concrete truncated space (throws if it does not fit).
    PureState to_pure_state(const HilbertSpace& space) const;
};

struct AnalyticResult {
    AnalyticState state;
    MomentRecord moments;
};

AnalyticResult squeeze_trajectory(int n, double g, double t);
AnalyticResult beamsplitter_trajectory(int n, double g, double t);

// Dressed pair energies ±g(n+1) (squeeze) or ±g sqrt(n(n+1)) (beamsplitter).
std::pair<double, double> dressed_energies(int n, double g, Branch branch);

// sqrt(g^2 + (omega_b + delta_c)^2 / 4); reduces to g on the blue sideband.
double vacuum_rabi_frequency(double g, double omega_b, double delta_c);

// Occupancy difference between matched blue- and red-sideband runs.
double vacuum_fluctuation_signal(double blue_occ, double red_occ);

} // namespace trilind
