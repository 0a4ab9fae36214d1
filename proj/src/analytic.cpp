// analytic.cpp — dressed-state closed forms

#include "trilind/analytic.hpp"

#include <cmath>
#include <string>

namespace trilind {

PureState AnalyticState::to_pure_state(const HilbertSpace& space) const {
    const Complex minus_i(0.0, -1.0);
    Vector v = Vector::Zero(space.dim);
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    v(space.index_of(n, n, 1)) = c;
    if (branch == Branch::squeeze) {
        v(space.index_of(n + 1, n + 1, 0)) = minus_i * s;
    } else if (n >= 1) {
        v(space.index_of(n + 1, n - 1, 0)) = minus_i * s;
    }
    return make_pure_state(space, std::move(v));
}

AnalyticResult squeeze_trajectory(int n, double g, double t) {
    if (n < 0 || !(g > 0.0)) throw Error("squeeze_trajectory needs n >= 0, g > 0");
    const double theta = g * (n + 1) * t;
    const double s2 = std::sin(theta) * std::sin(theta);
    MomentRecord m;
    m.n_a = n + s2;
    m.n_b = n + s2;
    m.spin_exc = 1.0 - s2;
    m.n_e = m.spin_exc + 0.5 * (m.n_a + m.n_b);
    return {{n, theta, Branch::squeeze}, m};
}

AnalyticResult beamsplitter_trajectory(int n, double g, double t) {
    if (n < 0 || !(g > 0.0)) throw Error("beamsplitter_trajectory needs n >= 0, g > 0");
    const double theta = g * std::sqrt(static_cast<double>(n) * (n + 1)) * t;
    const double s2 = std::sin(theta) * std::sin(theta);
    MomentRecord m;
    m.n_a = n + s2;
    m.n_b = n - s2;
    m.spin_exc = 1.0 - s2;
    m.n_e = m.spin_exc + 0.5 * (m.n_a + m.n_b);
    return {{n, theta, Branch::beamsplitter}, m};
}

std::pair<double, double> dressed_energies(int n, double g, Branch branch) {
    if (n < 0) throw Error("dressed_energies needs n >= 0");
    const double e = (branch == Branch::squeeze)
                         ? g * (n + 1)
                         : g * std::sqrt(static_cast<double>(n) * (n + 1));
    return {e, -e};
}

double vacuum_rabi_frequency(double g, double omega_b, double delta_c) {
    if (!(g > 0.0)) throw Error("vacuum_rabi_frequency needs g > 0");
    const double detune = omega_b + delta_c;
    return std::sqrt(g * g + 0.25 * detune * detune);
}

double vacuum_fluctuation_signal(double blue_occ, double red_occ) {
    return blue_occ - red_occ;
}

} // namespace trilind
