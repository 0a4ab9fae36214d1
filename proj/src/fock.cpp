// fock.cpp — composite-space construction and operator embedding

#include "trilind/fock.hpp"

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/KroneckerProduct>

#include <cmath>
#include <string>

namespace trilind {

const char* subsystem_name(Subsystem s) {
    switch (s) {
        case Subsystem::cavity: return "cavity";
        case Subsystem::phonon: return "phonon";
        case Subsystem::spin: return "spin";
    }
    return "?";
}

int HilbertSpace::index_of(int n_a, int n_b, int s) const {
    if (n_a < 0 || n_a > n_a_max || n_b < 0 || n_b > n_b_max || s < 0 || s > 1) {
        throw IndexError("basis index (" + std::to_string(n_a) + ", " + std::to_string(n_b) +
                         ", " + std::to_string(s) + ") outside truncation (" +
                         std::to_string(n_a_max) + ", " + std::to_string(n_b_max) + ")");
    }
    return (n_a * (n_b_max + 1) + n_b) * 2 + s;
}

HilbertSpace::BasisLabel HilbertSpace::label_of(int index) const {
    if (index < 0 || index >= dim) {
        throw IndexError("basis index " + std::to_string(index) + " outside dim " +
                         std::to_string(dim));
    }
    const int s = index % 2;
    const int rest = index / 2;
    return {rest / (n_b_max + 1), rest % (n_b_max + 1), s};
}

HilbertSpace build_space(int n_a_max, int n_b_max) {
    if (n_a_max < 1 || n_b_max < 1) {
        throw TruncationError("truncation bounds must be >= 1, got (" + std::to_string(n_a_max) +
                              ", " + std::to_string(n_b_max) + ")");
    }
    HilbertSpace space;
    space.n_a_max = n_a_max;
    space.n_b_max = n_b_max;
    space.dim = 2 * (n_a_max + 1) * (n_b_max + 1);
    return space;
}

namespace {

void require_same_space(const HilbertSpace& a, const HilbertSpace& b, const char* what) {
    if (!(a == b)) {
        throw DimensionError(std::string(what) + ": operands on different spaces (dim " +
                             std::to_string(a.dim) + " vs " + std::to_string(b.dim) + ")");
    }
}

Matrix pauli(SpinKind kind) {
    Matrix m = Matrix::Zero(2, 2);
    const Complex i(0.0, 1.0);
    switch (kind) {
        case SpinKind::x:
            m(0, 1) = 1.0;
            m(1, 0) = 1.0;
            break;
        case SpinKind::y:
            // Basis order (g, e); sigma_pm = (sigma_x ± i sigma_y)/2 holds.
            m(0, 1) = i;
            m(1, 0) = -i;
            break;
        case SpinKind::z:
            m(0, 0) = -1.0;
            m(1, 1) = 1.0;
            break;
        case SpinKind::plus:
            m(1, 0) = 1.0; // |e><g|
            break;
        case SpinKind::minus:
            m(0, 1) = 1.0; // |g><e|
            break;
    }
    return m;
}

} // namespace

Operator operator+(const Operator& a, const Operator& b) {
    require_same_space(a.space, b.space, "operator+");
    return {a.space, a.matrix + b.matrix};
}

Operator operator-(const Operator& a, const Operator& b) {
    require_same_space(a.space, b.space, "operator-");
    return {a.space, a.matrix - b.matrix};
}

Operator operator*(const Operator& a, const Operator& b) {
    require_same_space(a.space, b.space, "operator*");
    return {a.space, a.matrix * b.matrix};
}

Operator operator*(Complex scale, const Operator& a) { return {a.space, scale * a.matrix}; }

Operator operator*(double scale, const Operator& a) { return {a.space, scale * a.matrix}; }

DensityMatrix PureState::to_density() const {
    return {space, amplitudes * amplitudes.adjoint()};
}

PureState make_pure_state(const HilbertSpace& space, Vector amplitudes) {
    if (amplitudes.size() != space.dim) {
        throw DimensionError("pure state length " + std::to_string(amplitudes.size()) +
                             " does not match dim " + std::to_string(space.dim));
    }
    const double norm = amplitudes.norm();
    if (norm <= 0.0) throw DimensionError("pure state has zero norm");
    amplitudes /= norm;
    return {space, std::move(amplitudes)};
}

double DensityMatrix::hermiticity_defect() const {
    return (matrix - matrix.adjoint()).cwiseAbs().maxCoeff();
}

double DensityMatrix::min_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(0.5 * (matrix + matrix.adjoint()));
    if (solver.info() != Eigen::Success) throw Error("eigenvalue check failed");
    return solver.eigenvalues().minCoeff();
}

Matrix mode_annihilator_block(int n_max) {
    if (n_max < 1) throw TruncationError("mode block needs n_max >= 1");
    Matrix m = Matrix::Zero(n_max + 1, n_max + 1);
    for (int n = 1; n <= n_max; ++n) {
        m(n - 1, n) = std::sqrt(static_cast<double>(n));
    }
    return m;
}

Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    out = Eigen::kroneckerProduct(a, b);
    return out;
}

Matrix kron3(const Matrix& cavity, const Matrix& phonon, const Matrix& spin) {
    return kron(cavity, kron(phonon, spin));
}

Operator mode_annihilator(const HilbertSpace& space, Subsystem mode) {
    const Matrix id_a = Matrix::Identity(space.cavity_levels(), space.cavity_levels());
    const Matrix id_b = Matrix::Identity(space.phonon_levels(), space.phonon_levels());
    const Matrix id_s = Matrix::Identity(2, 2);
    switch (mode) {
        case Subsystem::cavity:
            return {space, kron3(mode_annihilator_block(space.n_a_max), id_b, id_s)};
        case Subsystem::phonon:
            return {space, kron3(id_a, mode_annihilator_block(space.n_b_max), id_s)};
        case Subsystem::spin:
            throw DimensionError("spin is not a bosonic mode");
    }
    throw DimensionError("unknown mode");
}

Operator spin_operator(const HilbertSpace& space, SpinKind kind) {
    const Matrix id_a = Matrix::Identity(space.cavity_levels(), space.cavity_levels());
    const Matrix id_b = Matrix::Identity(space.phonon_levels(), space.phonon_levels());
    return {space, kron3(id_a, id_b, pauli(kind))};
}

Operator identity_operator(const HilbertSpace& space) {
    return {space, Matrix::Identity(space.dim, space.dim)};
}

PureState basis_state(const HilbertSpace& space, int n_a, int n_b, SpinState s) {
    Vector v = Vector::Zero(space.dim);
    v(space.index_of(n_a, n_b, static_cast<int>(s))) = 1.0;
    return {space, std::move(v)};
}

ReducedDensity partial_trace(const DensityMatrix& rho, Subsystem keep) {
    const HilbertSpace& sp = rho.space;
    const int na = sp.cavity_levels();
    const int nb = sp.phonon_levels();

    if (keep == Subsystem::cavity) {
        Matrix out = Matrix::Zero(na, na);
        for (int m = 0; m < na; ++m)
            for (int mp = 0; mp < na; ++mp)
                for (int b = 0; b < nb; ++b)
                    for (int s = 0; s < 2; ++s)
                        out(m, mp) += rho.matrix(sp.index_of(m, b, s), sp.index_of(mp, b, s));
        return {keep, std::move(out)};
    }
    if (keep == Subsystem::phonon) {
        Matrix out = Matrix::Zero(nb, nb);
        for (int m = 0; m < nb; ++m)
            for (int mp = 0; mp < nb; ++mp)
                for (int a = 0; a < na; ++a)
                    for (int s = 0; s < 2; ++s)
                        out(m, mp) += rho.matrix(sp.index_of(a, m, s), sp.index_of(a, mp, s));
        return {keep, std::move(out)};
    }
    Matrix out = Matrix::Zero(2, 2);
    for (int m = 0; m < 2; ++m)
        for (int mp = 0; mp < 2; ++mp)
            for (int a = 0; a < na; ++a)
                for (int b = 0; b < nb; ++b)
                    out(m, mp) += rho.matrix(sp.index_of(a, b, m), sp.index_of(a, b, mp));
    return {keep, std::move(out)};
}

Complex expectation(const Operator& op, const DensityMatrix& rho) {
    require_same_space(op.space, rho.space, "expectation");
    // Tr(op·rho) = sum_ij op(i,j) rho(j,i), avoiding the full product.
    return op.matrix.cwiseProduct(rho.matrix.transpose()).sum();
}

} // namespace trilind
