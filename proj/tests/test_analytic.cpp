// test_analytic.cpp — closed forms versus direct numerics

#include "doctest.h"

#include <Eigen/Eigenvalues>

#include "trilind/analytic.hpp"
#include "trilind/lindblad.hpp"
#include "trilind/model.hpp"

using namespace trilind;

TEST_CASE("squeeze trajectory endpoints") {
    const double g = 40.0;
    const AnalyticResult quarter = squeeze_trajectory(0, g, 0.5 * M_PI / g);
    CHECK(quarter.moments.n_a == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(quarter.moments.n_b == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(quarter.moments.spin_exc == doctest::Approx(0.0));

    const AnalyticResult start = squeeze_trajectory(0, g, 0.0);
    CHECK(start.moments.n_a == doctest::Approx(0.0));
    CHECK(start.moments.spin_exc == doctest::Approx(1.0));

    const AnalyticResult n1 = squeeze_trajectory(1, g, 0.5 * M_PI / (2.0 * g));
    CHECK(n1.state.theta == doctest::Approx(M_PI / 2.0).epsilon(1e-12));
    CHECK(n1.moments.n_a == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(n1.moments.n_b == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("beamsplitter trajectory endpoints") {
    const double g = 5.0;
    const AnalyticResult vac = beamsplitter_trajectory(0, g, 1.234);
    CHECK(vac.moments.n_a == doctest::Approx(0.0));
    CHECK(vac.moments.n_b == doctest::Approx(0.0));
    CHECK(vac.moments.spin_exc == doctest::Approx(1.0));

    const AnalyticResult swap = beamsplitter_trajectory(1, g, 0.5 * M_PI / (std::sqrt(2.0) * g));
    CHECK(swap.state.theta == doctest::Approx(M_PI / 2.0).epsilon(1e-12));
    CHECK(swap.moments.n_a == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(swap.moments.n_b == doctest::Approx(0.0).epsilon(1e-12));

    const AnalyticResult t0 = beamsplitter_trajectory(1, g, 0.0);
    CHECK(t0.moments.n_a == doctest::Approx(1.0));
    CHECK(t0.moments.n_b == doctest::Approx(1.0));
    CHECK(t0.moments.spin_exc == doctest::Approx(1.0));
}

TEST_CASE("dressed energies") {
    const auto [sp0, sm0] = dressed_energies(0, 3.0, Branch::squeeze);
    CHECK(sp0 == doctest::Approx(3.0));
    CHECK(sm0 == doctest::Approx(-3.0));

    const auto [bp0, bm0] = dressed_energies(0, 3.0, Branch::beamsplitter);
    CHECK(bp0 == doctest::Approx(0.0));
    CHECK(bm0 == doctest::Approx(0.0));

    const auto [sp2, sm2] = dressed_energies(2, 40.0, Branch::squeeze);
    CHECK(sp2 == doctest::Approx(120.0));
    CHECK(sm2 == doctest::Approx(-120.0));
}

TEST_CASE("dressed energies equal the restricted diagonalization") {
    const HilbertSpace sp = build_space(4, 4);
    EffectiveParams p{};
    p.g = 2.7;
    p.omega_pump = 0.0;
    const Operator h = build_squeeze_hamiltonian(p, sp);
    for (int n = 0; n <= 2; ++n) {
        const Vector u = basis_state(sp, n, n, SpinState::e).amplitudes;
        const Vector v = basis_state(sp, n + 1, n + 1, SpinState::g).amplitudes;
        Eigen::Matrix2cd block;
        block << u.dot(h.matrix * u), u.dot(h.matrix * v), v.dot(h.matrix * u),
            v.dot(h.matrix * v);
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(block);
        const auto [ep, em] = dressed_energies(n, p.g, Branch::squeeze);
        CHECK(std::abs(es.eigenvalues()(1) - ep) < 1e-12);
        CHECK(std::abs(es.eigenvalues()(0) - em) < 1e-12);
    }
}

TEST_CASE("vacuum Rabi frequency") {
    CHECK(vacuum_rabi_frequency(3.0, 10.0, -10.0) == doctest::Approx(3.0));
    CHECK(vacuum_rabi_frequency(40.0, 400.0, -360.0) ==
          doctest::Approx(std::sqrt(2000.0)).epsilon(1e-12));
}

TEST_CASE("first oscillation of the detuned full model matches the Rabi frequency") {
    // omega_b/g = 10, delta_c = -0.95 omega_b, closed dynamics from |0,0,e>
    const double g = 40.0, omega_b = 400.0, delta_c = -0.95 * omega_b;
    SystemParams p{};
    p.g = g;
    p.omega_b = omega_b;
    p.delta_c = delta_c;
    p.delta_atom = 0.0;
    p.omega_pump = 0.0;
    const HilbertSpace sp = build_space(5, 5);
    const Liouvillian l = build_liouvillian(build_full_hamiltonian(p, sp), CollapseSet{});

    const double omega_r = vacuum_rabi_frequency(g, omega_b, delta_c);
    const double period = M_PI / omega_r; // n_a ~ sin^2(Omega_R t)
    EvolutionSpec spec = EvolutionSpec::linear(1.2 * period, 601);
    spec.rel_tol = 1e-9;
    spec.abs_tol = 1e-11;
    const Trajectory traj = evolve(basis_state(sp, 0, 0, SpinState::e).to_density(), l, spec);

    std::size_t peak = 0;
    double best = -1.0;
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        const double n_a = moments(traj.state_at(i)).n_a;
        if (n_a > best) {
            best = n_a;
            peak = i;
        }
    }
    const double fitted_period = 2.0 * traj.times[peak];
    CHECK(std::abs(fitted_period - period) / period < 0.02);
}

TEST_CASE("vacuum fluctuation signal") {
    CHECK(vacuum_fluctuation_signal(1.0, 0.0) == doctest::Approx(1.0));
    CHECK(vacuum_fluctuation_signal(0.0, 0.0) == doctest::Approx(0.0));
}

TEST_CASE("oracle matches dissipationless numerics for n = 0, 1, 2") {
    const double g = 10.0;
    const HilbertSpace sp = build_space(4, 4);
    EffectiveParams p{};
    p.g = g;
    p.omega_pump = 0.0;

    // residual rates at 1e-12 gamma keep the generator open but negligible
    const CollapseSet tiny = CollapseSet::standard(sp, 1e-12, 1e-12, 1e-12);

    for (Branch branch : {Branch::squeeze, Branch::beamsplitter}) {
        const Operator h = (branch == Branch::squeeze) ? build_squeeze_hamiltonian(p, sp)
                                                       : build_beamsplitter_hamiltonian(p, sp);
        const Liouvillian l = build_liouvillian(h, tiny);
        for (int n = 0; n <= 2; ++n) {
            EvolutionSpec spec = EvolutionSpec::linear(2.0 * M_PI / g, 33);
            spec.rel_tol = 1e-10;
            spec.abs_tol = 1e-13;
            const Trajectory traj =
                evolve(basis_state(sp, n, n, SpinState::e).to_density(), l, spec);
            for (std::size_t i = 0; i < traj.times.size(); ++i) {
                const AnalyticResult ref = (branch == Branch::squeeze)
                                               ? squeeze_trajectory(n, g, traj.times[i])
                                               : beamsplitter_trajectory(n, g, traj.times[i]);
                const MomentRecord m = moments(traj.state_at(i));
                CHECK(std::abs(m.n_a - ref.moments.n_a) < 1e-6);
                CHECK(std::abs(m.n_b - ref.moments.n_b) < 1e-6);
                CHECK(std::abs(m.spin_exc - ref.moments.spin_exc) < 1e-6);
            }
        }
    }
}
