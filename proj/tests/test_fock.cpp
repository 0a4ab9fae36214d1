// test_fock.cpp — composite space, embedded operators, partial trace

#include "doctest.h"

#include <random>

#include "trilind/fock.hpp"

using namespace trilind;

namespace {

// Random density matrix rho = A A† / Tr(A A†) with a fixed seed.
DensityMatrix random_density(const HilbertSpace& space, unsigned seed) {
    std::mt19937 rng(seed);
    std::normal_distribution<double> dist(0.0, 1.0);
    Matrix a(space.dim, space.dim);
    for (int i = 0; i < space.dim; ++i)
        for (int j = 0; j < space.dim; ++j) a(i, j) = Complex(dist(rng), dist(rng));
    Matrix rho = a * a.adjoint();
    rho /= rho.trace().real();
    return {space, std::move(rho)};
}

} // namespace

TEST_CASE("build_space dimensions and bounds") {
    CHECK(build_space(1, 1).dim == 8);
    CHECK(build_space(5, 5).dim == 72);
    CHECK(build_space(15, 15).dim == 512);
    CHECK_THROWS_AS(build_space(0, 5), TruncationError);
    CHECK_THROWS_AS(build_space(5, -1), TruncationError);
}

TEST_CASE("basis index convention and round trip") {
    const HilbertSpace sp = build_space(1, 1);
    CHECK(sp.index_of(0, 0, 1) == 1);
    CHECK(sp.index_of(1, 1, 0) == 6);
    CHECK_THROWS_AS(basis_state(sp, 2, 0, SpinState::g), IndexError);

    const HilbertSpace big = build_space(3, 4);
    for (int i = 0; i < big.dim; ++i) {
        const auto lbl = big.label_of(i);
        CHECK(big.index_of(lbl.n_a, lbl.n_b, lbl.s) == i);
    }
}

TEST_CASE("basis_state places a single unit amplitude") {
    const HilbertSpace sp = build_space(1, 1);
    const PureState e00 = basis_state(sp, 0, 0, SpinState::e);
    CHECK(std::abs(e00.amplitudes(1) - Complex(1.0, 0.0)) < 1e-15);
    CHECK(std::abs(e00.amplitudes.norm() - 1.0) < 1e-12);
    const PureState g11 = basis_state(sp, 1, 1, SpinState::g);
    CHECK(std::abs(g11.amplitudes(6) - Complex(1.0, 0.0)) < 1e-15);
}

TEST_CASE("single-mode ladder block") {
    const Matrix a = mode_annihilator_block(2);
    CHECK(a.rows() == 3);
    CHECK(std::abs(a(0, 1) - 1.0) < 1e-15);
    CHECK(std::abs(a(1, 2) - std::sqrt(2.0)) < 1e-15);
    CHECK(a.cwiseAbs().sum() == doctest::Approx(1.0 + std::sqrt(2.0)).epsilon(1e-14));
}

TEST_CASE("cavity annihilator action on a basis state") {
    const HilbertSpace sp = build_space(2, 2);
    const Operator a = mode_annihilator(sp, Subsystem::cavity);
    const Vector out = a.matrix * basis_state(sp, 1, 0, SpinState::g).amplitudes;
    const Vector expected = basis_state(sp, 0, 0, SpinState::g).amplitudes;
    CHECK((out - expected).norm() < 1e-14);
}

TEST_CASE("truncated ladder commutator pattern") {
    const HilbertSpace sp = build_space(5, 5);
    for (Subsystem mode : {Subsystem::cavity, Subsystem::phonon}) {
        const Operator o = mode_annihilator(sp, mode);
        const Matrix comm = o.matrix * o.adjoint().matrix - o.adjoint().matrix * o.matrix;
        for (int i = 0; i < sp.dim; ++i) {
            const auto lbl = sp.label_of(i);
            const int n = (mode == Subsystem::cavity) ? lbl.n_a : lbl.n_b;
            const double expected = (n < 5) ? 1.0 : -5.0;
            CHECK(std::abs(comm(i, i) - expected) < 1e-12);
        }
        // off-diagonals vanish
        Matrix offdiag = comm;
        offdiag.diagonal().setZero();
        CHECK(offdiag.cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("embedded operators of different subsystems commute") {
    const HilbertSpace sp = build_space(2, 3);
    const Operator a = mode_annihilator(sp, Subsystem::cavity);
    const Operator b = mode_annihilator(sp, Subsystem::phonon);
    const Operator sx = spin_operator(sp, SpinKind::x);
    CHECK((a.matrix * b.matrix - b.matrix * a.matrix).cwiseAbs().maxCoeff() < 1e-14);
    CHECK((a.matrix * sx.matrix - sx.matrix * a.matrix).cwiseAbs().maxCoeff() < 1e-14);
    CHECK((b.matrix * sx.matrix - sx.matrix * b.matrix).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("spin operators") {
    const HilbertSpace sp = build_space(1, 1);
    const Operator sz = spin_operator(sp, SpinKind::z);
    const Operator sm = spin_operator(sp, SpinKind::minus);
    const Operator sp_op = spin_operator(sp, SpinKind::plus);

    const Vector e00 = basis_state(sp, 0, 0, SpinState::e).amplitudes;
    const Vector g00 = basis_state(sp, 0, 0, SpinState::g).amplitudes;
    CHECK((sz.matrix * e00 - e00).norm() < 1e-14);
    CHECK((sz.matrix * g00 + g00).norm() < 1e-14);
    CHECK((sm.matrix * e00 - g00).norm() < 1e-14);

    // sigma_+ sigma_- projects onto the excited manifold: eigenvalues {0,1}
    const Matrix proj = sp_op.matrix * sm.matrix;
    for (int i = 0; i < sp.dim; ++i) {
        const double v = proj(i, i).real();
        CHECK((std::abs(v) < 1e-14 || std::abs(v - 1.0) < 1e-14));
    }
    CHECK((proj * proj - proj).cwiseAbs().maxCoeff() < 1e-14);

    // ladder decomposition and the completeness relation on the spin factor
    const Operator sx = spin_operator(sp, SpinKind::x);
    const Operator sy = spin_operator(sp, SpinKind::y);
    const Complex i_unit(0.0, 1.0);
    CHECK((sp_op.matrix - 0.5 * (sx.matrix + i_unit * sy.matrix)).cwiseAbs().maxCoeff() < 1e-14);
    CHECK((sm.matrix - 0.5 * (sx.matrix - i_unit * sy.matrix)).cwiseAbs().maxCoeff() < 1e-14);
    const Matrix sum = sp_op.matrix * sm.matrix + sm.matrix * sp_op.matrix;
    CHECK((sum - Matrix::Identity(sp.dim, sp.dim)).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("partial trace on orthogonal branches") {
    const HilbertSpace sp = build_space(3, 3);
    const DensityMatrix rho_g = basis_state(sp, 0, 0, SpinState::g).to_density();
    const ReducedDensity cav = partial_trace(rho_g, Subsystem::cavity);
    CHECK(std::abs(cav.matrix(0, 0) - 1.0) < 1e-14);
    CHECK(cav.matrix.cwiseAbs().sum() == doctest::Approx(1.0).epsilon(1e-12));

    Matrix mix = 0.5 * basis_state(sp, 0, 0, SpinState::e).to_density().matrix +
                 0.5 * basis_state(sp, 1, 1, SpinState::g).to_density().matrix;
    const ReducedDensity phon = partial_trace(DensityMatrix{sp, mix}, Subsystem::phonon);
    CHECK(std::abs(phon.matrix(0, 0) - 0.5) < 1e-14);
    CHECK(std::abs(phon.matrix(1, 1) - 0.5) < 1e-14);
    CHECK(std::abs(phon.matrix(2, 2)) < 1e-14);
}

TEST_CASE("partial trace preserves trace and hermiticity for random states") {
    const HilbertSpace sp = build_space(2, 3);
    for (unsigned seed = 0; seed < 20; ++seed) {
        const DensityMatrix rho = random_density(sp, 1000 + seed);
        for (Subsystem keep : {Subsystem::cavity, Subsystem::phonon, Subsystem::spin}) {
            const ReducedDensity red = partial_trace(rho, keep);
            CHECK(std::abs(red.matrix.trace().real() - 1.0) < 1e-12);
            CHECK((red.matrix - red.matrix.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
        }
    }
}

TEST_CASE("expectation values") {
    const HilbertSpace sp = build_space(2, 2);
    const DensityMatrix rho = basis_state(sp, 1, 0, SpinState::g).to_density();

    CHECK(std::abs(expectation(identity_operator(sp), rho) - 1.0) < 1e-14);

    const Operator a = mode_annihilator(sp, Subsystem::cavity);
    const Operator num = a.adjoint() * a;
    CHECK(std::abs(expectation(num, rho) - 1.0) < 1e-14);

    const DensityMatrix rho_e = basis_state(sp, 0, 0, SpinState::e).to_density();
    const Operator proj =
        spin_operator(sp, SpinKind::plus) * spin_operator(sp, SpinKind::minus);
    CHECK(std::abs(expectation(proj, rho_e) - 1.0) < 1e-14);

    // hermitian observable on a random state has a real expectation
    const DensityMatrix rho_r = random_density(sp, 7);
    const Operator herm = num + proj;
    CHECK(std::abs(expectation(herm, rho_r).imag()) < 1e-10);

    const HilbertSpace other = build_space(1, 1);
    CHECK_THROWS_AS(expectation(identity_operator(other), rho), DimensionError);
}
