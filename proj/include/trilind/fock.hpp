// fock.hpp — Truncated composite Hilbert space (cavity ⊗ phonon ⊗ spin-1/2):
// spaces, operators, states, partial trace, expectation values.

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <vector>

#include "trilind/errors.hpp"

namespace trilind {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

enum class Subsystem { cavity, phonon, spin };
enum class SpinKind { x, y, z, plus, minus };
enum class SpinState { g = 0, e = 1 };

const char* subsystem_name(Subsystem s);

// Composite space with cavity Fock levels 0..n_a_max, phonon levels
// 0..n_b_max, and the two spin states. Basis index of |n_a, n_b, s> is
//   i = (n_a*(n_b_max+1) + n_b)*2 + s,   s = 0 for |g>, 1 for |e>,
// i.e. cavity-major, spin-minor. The ordering is fixed so that file outputs
// are reproducible across implementations.
struct HilbertSpace {
    int n_a_max{0};
    int n_b_max{0};
    int dim{0};

    int cavity_levels() const { return n_a_max + 1; }
    int phonon_levels() const { return n_b_max + 1; }

    int index_of(int n_a, int n_b, int s) const;

    struct BasisLabel {
        int n_a;
        int n_b;
        int s;
    };
    BasisLabel label_of(int index) const;

    bool operator==(const HilbertSpace&) const = default;
};

HilbertSpace build_space(int n_a_max, int n_b_max);

// Square matrix tagged with the space it acts on.
struct Operator {
    HilbertSpace space;
    Matrix matrix;

    Operator adjoint() const { return {space, matrix.adjoint()}; }
};

Operator operator+(const Operator& a, const Operator& b);
Operator operator-(const Operator& a, const Operator& b);
Operator operator*(const Operator& a, const Operator& b);
Operator operator*(Complex scale, const Operator& a);
Operator operator*(double scale, const Operator& a);

struct DensityMatrix;

struct PureState {
    HilbertSpace space;
    Vector amplitudes;

    DensityMatrix to_density() const;
};

// Normalizes; throws DimensionError on size mismatch or a zero vector.
PureState make_pure_state(const HilbertSpace& space, Vector amplitudes);

struct DensityMatrix {
    HilbertSpace space;
    Matrix matrix;

    double trace_real() const { return matrix.trace().real(); }
    // Max deviations from the density-matrix contract; eigen check is O(dim^3)
    // and therefore opt-in.
    double hermiticity_defect() const;
    double min_eigenvalue() const;
};

struct ReducedDensity {
    Subsystem subsystem;
    Matrix matrix;
};

// Single-mode lowering operator on levels 0..n_max: <n-1|o|n> = sqrt(n).
Matrix mode_annihilator_block(int n_max);

// Kronecker helpers with the fixed cavity ⊗ phonon ⊗ spin ordering.
Matrix kron(const Matrix& a, const Matrix& b);
Matrix kron3(const Matrix& cavity, const Matrix& phonon, const Matrix& spin);

// Annihilation operator of the named bosonic mode, embedded in the full
// space with identities on the other factors.
Operator mode_annihilator(const HilbertSpace& space, Subsystem mode);

// Embedded Pauli / ladder operator; sigma_pm = (sigma_x ± i sigma_y)/2 with
// sigma_z|e> = +|e>, sigma_z|g> = -|g>.
Operator spin_operator(const HilbertSpace& space, SpinKind kind);

Operator identity_operator(const HilbertSpace& space);

PureState basis_state(const HilbertSpace& space, int n_a, int n_b, SpinState s);

ReducedDensity partial_trace(const DensityMatrix& rho, Subsystem keep);

// Tr(op · rho). Imaginary part is preserved so callers can assert it.
Complex expectation(const Operator& op, const DensityMatrix& rho);

} // namespace trilind
