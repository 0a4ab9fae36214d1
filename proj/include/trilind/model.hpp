// model.hpp — Hamiltonians of the driven spin–photon–phonon system plus the
// analytic spectrum and symmetry generators.
//
// Three related Hamiltonians are provided (hbar = 1, rates in units of the
// atomic decay gamma):
//
//   full         H   = w_b b†b + D_c a†a + (D/2) s_z + W s_x
//                      + g (b† + b)(a† s_- + a s_+)
//   beamsplitter H_B = d_b b†b + d_a a†a + ((d_a - d)/2) s_z + W s_x
//                      + g (a† b s_- + b† a s_+)
//   squeeze      H_S = d_b b†b + d_a a†a + ((d_a - d)/2) s_z + W s_x
//                      + g (a† b† s_- + b a s_+)
//
// H_B / H_S are the rotating-frame sideband limits of the full model
// (red sideband D_c ≈ +w_b, blue sideband D_c ≈ -w_b, valid for g/w_b << 1);
// the detuned forms are kept general since the resonance studies scan d_a, d_b.

#pragma once

#include "trilind/fock.hpp"

namespace trilind {

// Parameters of the full model. All rates are dimensionless multiples of the
// atomic decay gamma, which sets the frequency scale (gamma = 1 by default).
struct SystemParams {
    double g = 40.0;          // photon-phonon coupling
    double omega_b = 400.0;   // trap frequency
    double delta_c = -400.0;  // cavity-light detuning
    double delta_atom = 0.0;  // atom-light detuning
    double omega_pump = 2.0;  // pump Rabi frequency
    double gamma = 1.0;       // atomic decay
    double kappa_a = 10.0;    // cavity decay
    double kappa_b = 1.0;     // phonon decay

    void validate() const;
};

// Parameters of the rotating-frame beamsplitter/squeeze models. The frame
// frequency enters only through d_a and d_b, so those are taken directly;
// d = d_a - D is the detuning of the cavity emission from atomic resonance.
struct EffectiveParams {
    double delta_a = 0.0;
    double delta_b = 0.0;
    double delta = 0.0;
    double g = 40.0;
    double omega_pump = 2.0;

    void validate() const;
};

struct SpectrumPoint {
    int n_a;
    int n_b;
    double e_plus;
    double e_minus;
};

struct RabiSplitting {
    double upper; // d_a^(+)
    double lower; // d_a^(-)
};

enum class SymmetryKind { beamsplitter, squeeze };

Operator build_full_hamiltonian(const SystemParams& p, const HilbertSpace& space);
Operator build_beamsplitter_hamiltonian(const EffectiveParams& p, const HilbertSpace& space);
Operator build_squeeze_hamiltonian(const EffectiveParams& p, const HilbertSpace& space);

// Pair energies of the squeeze model (d_a = d_b, pump ignored), measured from
// the ground level:
//   E± = (n_a+n_b) d_a - (d_a+d)/2 ± sqrt(4 g² n_a n_b + (d_a+d)²)/2
SpectrumPoint squeeze_spectrum(int n_a, int n_b, double delta_a, double delta, double g);

// Single-quanta resonance positions d_a^(±) = d/2 ± sqrt(2g² + d²)/2. Setting
// d_a to the upper (lower) value makes E-(1,1) (E+(1,1)) cross zero.
RabiSplitting rabi_splitting(double delta, double g);

// U(1) charge conserved by the corresponding interaction at zero pump:
// G_B = 2 a†a + b†b + s_z/2,  G_S = a†a + b†b + s_z.
Operator symmetry_generator(const HilbertSpace& space, SymmetryKind kind);

// N_e = s_+ s_- + (a†a + b†b)/2; commutes with the squeeze model at zero pump.
Operator total_excitation_operator(const HilbertSpace& space);

} // namespace trilind
