// model.cpp — Hamiltonian builders and closed-form spectrum

#include "trilind/model.hpp"

#include <cmath>
#include <string>

namespace trilind {

void SystemParams::validate() const {
    if (g < 0.0 || gamma < 0.0 || kappa_a < 0.0 || kappa_b < 0.0) {
        throw Error("rates g, gamma, kappa_a, kappa_b must be nonnegative");
    }
    if (!std::isfinite(omega_b) || !std::isfinite(delta_c) || !std::isfinite(delta_atom) ||
        !std::isfinite(omega_pump)) {
        throw Error("system parameters must be finite");
    }
}

void EffectiveParams::validate() const {
    if (g < 0.0) throw Error("coupling g must be nonnegative");
    if (!std::isfinite(delta_a) || !std::isfinite(delta_b) || !std::isfinite(delta) ||
        !std::isfinite(omega_pump)) {
        throw Error("effective parameters must be finite");
    }
}

namespace {

struct Blocks {
    Operator a;
    Operator b;
    Operator sz;
    Operator sx;
    Operator sp;
    Operator sm;

    explicit Blocks(const HilbertSpace& space)
        : a(mode_annihilator(space, Subsystem::cavity)),
          b(mode_annihilator(space, Subsystem::phonon)),
          sz(spin_operator(space, SpinKind::z)),
          sx(spin_operator(space, SpinKind::x)),
          sp(spin_operator(space, SpinKind::plus)),
          sm(spin_operator(space, SpinKind::minus)) {}
};

} // namespace

Operator build_full_hamiltonian(const SystemParams& p, const HilbertSpace& space) {
    p.validate();
    const Blocks k(space);
    Matrix h = p.omega_b * (k.b.adjoint().matrix * k.b.matrix) +
               p.delta_c * (k.a.adjoint().matrix * k.a.matrix) +
               0.5 * p.delta_atom * k.sz.matrix + p.omega_pump * k.sx.matrix;
    const Matrix quad = (k.b.adjoint().matrix + k.b.matrix) *
                        (k.a.adjoint().matrix * k.sm.matrix + k.a.matrix * k.sp.matrix);
    h += p.g * quad;
    return {space, std::move(h)};
}

Operator build_beamsplitter_hamiltonian(const EffectiveParams& p, const HilbertSpace& space) {
    p.validate();
    const Blocks k(space);
    Matrix h = p.delta_b * (k.b.adjoint().matrix * k.b.matrix) +
               p.delta_a * (k.a.adjoint().matrix * k.a.matrix) +
               0.5 * (p.delta_a - p.delta) * k.sz.matrix + p.omega_pump * k.sx.matrix;
    const Matrix exchange = k.a.adjoint().matrix * k.b.matrix * k.sm.matrix;
    h += p.g * (exchange + exchange.adjoint());
    return {space, std::move(h)};
}

Operator build_squeeze_hamiltonian(const EffectiveParams& p, const HilbertSpace& space) {
    p.validate();
    const Blocks k(space);
    Matrix h = p.delta_b * (k.b.adjoint().matrix * k.b.matrix) +
               p.delta_a * (k.a.adjoint().matrix * k.a.matrix) +
               0.5 * (p.delta_a - p.delta) * k.sz.matrix + p.omega_pump * k.sx.matrix;
    const Matrix pair = k.a.adjoint().matrix * k.b.adjoint().matrix * k.sm.matrix;
    h += p.g * (pair + pair.adjoint());
    return {space, std::move(h)};
}

SpectrumPoint squeeze_spectrum(int n_a, int n_b, double delta_a, double delta, double g) {
    if (n_a < 1 || n_b < 1) {
        throw IndexError("squeeze_spectrum needs n_a, n_b >= 1 (dressed pair), got (" +
                         std::to_string(n_a) + ", " + std::to_string(n_b) + ")");
    }
    const double centre = (n_a + n_b) * delta_a - 0.5 * (delta_a + delta);
    const double half_gap =
        0.5 * std::sqrt(4.0 * g * g * n_a * n_b + (delta_a + delta) * (delta_a + delta));
    return {n_a, n_b, centre + half_gap, centre - half_gap};
}

RabiSplitting rabi_splitting(double delta, double g) {
    if (g < 0.0) throw Error("rabi_splitting needs g >= 0");
    const double root = 0.5 * std::sqrt(2.0 * g * g + delta * delta);
    return {0.5 * delta + root, 0.5 * delta - root};
}

Operator symmetry_generator(const HilbertSpace& space, SymmetryKind kind) {
    const Operator a = mode_annihilator(space, Subsystem::cavity);
    const Operator b = mode_annihilator(space, Subsystem::phonon);
    const Operator sz = spin_operator(space, SpinKind::z);
    const Matrix num_a = a.adjoint().matrix * a.matrix;
    const Matrix num_b = b.adjoint().matrix * b.matrix;
    if (kind == SymmetryKind::beamsplitter) {
        return {space, 2.0 * num_a + num_b + 0.5 * sz.matrix};
    }
    return {space, num_a + num_b + sz.matrix};
}

Operator total_excitation_operator(const HilbertSpace& space) {
    const Operator a = mode_annihilator(space, Subsystem::cavity);
    const Operator b = mode_annihilator(space, Subsystem::phonon);
    const Operator sp = spin_operator(space, SpinKind::plus);
    const Operator sm = spin_operator(space, SpinKind::minus);
    return {space, sp.matrix * sm.matrix +
                       0.5 * (a.adjoint().matrix * a.matrix + b.adjoint().matrix * b.matrix)};
}

} // namespace trilind
