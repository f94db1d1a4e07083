#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "qprob/quantum.hpp"
#include "qprob/rng.hpp"
#include "testutil.hpp"

using namespace qprob;
using namespace testutil;

namespace {

HermitianObservable obs_z() { return HermitianObservable(sigma_z(), "sz"); }
HermitianObservable obs_x() { return HermitianObservable(sigma_x(), "sx"); }

}  // namespace

TEST_CASE("born_probability examples") {
    const QuantumState zero = QuantumState::pure(ket(2, 0));
    CHECK(born_probability(zero, obs_z(), 1.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(born_probability(zero, obs_z(), -1.0) == doctest::Approx(0.0));
    CHECK(born_probability(zero, obs_x(), 1.0) == doctest::Approx(0.5));

    const QuantumState mixed =
        QuantumState::mixed(ComplexMatrix::identity(2) * cplx(0.5, 0.0));
    CHECK(born_probability(mixed, obs_z(), 1.0) == doctest::Approx(0.5));
    CHECK(born_probability(mixed, obs_x(), -1.0) == doctest::Approx(0.5));

    CHECK_THROWS_AS(born_probability(zero, obs_z(), 0.25), OutcomeNotInSpectrum);
}

TEST_CASE("luders_update: selective and non-selective") {
    const QuantumState plus = QuantumState::pure(plus_state());

    const QuantumState collapsed = luders_update(plus, obs_z(), 1.0);
    REQUIRE(collapsed.is_pure());
    CHECK(std::abs(std::abs(collapsed.amplitudes()[0]) - 1.0) < 1e-12);
    CHECK(std::abs(collapsed.amplitudes()[1]) < 1e-12);

    const QuantumState mixture = luders_update(plus, obs_z());
    REQUIRE_FALSE(mixture.is_pure());
    CHECK(max_abs_diff(mixture.density_ref(), ComplexMatrix::identity(2) * cplx(0.5, 0.0)) <
          1e-12);

    // eigenstate fixed point
    const QuantumState zero = QuantumState::pure(ket(2, 0));
    const QuantumState again = luders_update(zero, obs_z(), 1.0);
    CHECK(std::abs(std::abs(again.amplitudes()[0]) - 1.0) < 1e-12);

    CHECK_THROWS_AS(luders_update(zero, obs_z(), -1.0), ZeroProbabilityBranch);
}

TEST_CASE("luders repeatability") {
    CounterRng rng(53);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t dim = 2 + trial % 3;
        const HermitianObservable obs(random_hermitian(dim, rng), "A");
        const QuantumState psi = QuantumState::pure(random_pure(dim, rng));
        for (double outcome : obs.spectrum().eigenvalues) {
            const double p = born_probability(psi, obs, outcome);
            if (p < 1e-6) continue;
            const QuantumState updated = luders_update(psi, obs, outcome);
            CHECK(born_probability(updated, obs, outcome) == doctest::Approx(1.0).epsilon(1e-10));
        }
    }
}

TEST_CASE("conditional_probability examples") {
    const QuantumState zero = QuantumState::pure(ket(2, 0));
    CHECK(conditional_probability(zero, obs_z(), 1.0, obs_x(), 1.0) == doctest::Approx(0.5));
    CHECK(conditional_probability(zero, obs_z(), 1.0, obs_z(), 1.0) ==
          doctest::Approx(1.0).epsilon(1e-12));
    CHECK(conditional_probability(zero, obs_z(), 1.0, obs_z(), -1.0) == doctest::Approx(0.0));
}

TEST_CASE("conditional symmetry for non-degenerate pairs") {
    CounterRng rng(59);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t dim = 2 + trial % 4;
        const HermitianObservable a(random_hermitian(dim, rng), "A");
        const HermitianObservable b(random_hermitian(dim, rng), "B");
        if (!a.non_degenerate() || !b.non_degenerate()) continue;
        const QuantumState psi = QuantumState::pure(random_pure(dim, rng));
        for (double x : a.spectrum().eigenvalues)
            for (double y : b.spectrum().eigenvalues) {
                if (born_probability(psi, a, x) < 1e-6 || born_probability(psi, b, y) < 1e-6)
                    continue;
                CHECK(std::abs(conditional_probability(psi, a, x, b, y) -
                               conditional_probability(psi, b, y, a, x)) < 1e-10);
            }
    }
}

TEST_CASE("degenerate spectra can break conditional symmetry") {
    // A has a rank-2 eigenspace; B is a generic non-degenerate observable.
    const HermitianObservable a(ComplexMatrix::diagonal({1.0, 1.0, 3.0}), "A");
    ComplexMatrix bm{{cplx(1.0, 0), cplx(0.4, 0.1), cplx(0, 0)},
                     {cplx(0.4, -0.1), cplx(2.0, 0), cplx(0.3, 0)},
                     {cplx(0, 0), cplx(0.3, 0), cplx(-1.0, 0)}};
    const HermitianObservable b(bm, "B");
    cvector amps{cplx(0.8, 0), cplx(0.36, 0), cplx(0.48, 0)};
    const QuantumState psi = QuantumState::pure(amps);

    const double x = 1.0;
    const double y = b.spectrum().eigenvalues[0];
    const double forward = conditional_probability(psi, a, x, b, y);
    const double backward = conditional_probability(psi, b, y, a, x);
    CHECK(std::abs(forward - backward) > 1e-3);
}

TEST_CASE("quantum_ftp on the plus state: constructive and destructive branches") {
    const QuantumState plus = QuantumState::pure(plus_state());

    const InterferenceDecomposition constructive = quantum_ftp(plus, obs_z(), obs_x(), 1.0);
    CHECK(constructive.classical_part == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(constructive.interference_term == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(constructive.total == doctest::Approx(1.0).epsilon(1e-10));

    const InterferenceDecomposition destructive = quantum_ftp(plus, obs_z(), obs_x(), -1.0);
    CHECK(destructive.classical_part == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(destructive.interference_term == doctest::Approx(-0.5).epsilon(1e-10));
    CHECK(destructive.total == doctest::Approx(0.0));
}

TEST_CASE("quantum_ftp: commuting observables have no interference") {
    const HermitianObservable b(ComplexMatrix::diagonal({2.0, -1.0}), "B");
    CounterRng rng(61);
    const QuantumState psi = QuantumState::pure(random_pure(2, rng));
    for (double target : b.spectrum().eigenvalues) {
        const InterferenceDecomposition d = quantum_ftp(psi, obs_z(), b, target);
        CHECK(std::abs(d.interference_term) < 1e-10);
        CHECK(d.total == doctest::Approx(d.classical_part).epsilon(1e-10));
    }
}

TEST_CASE("quantum_ftp invariants on random non-degenerate pairs, dims 2-6") {
    for (std::size_t dim = 2; dim <= 6; ++dim) {
        CounterRng rng(600 + dim);
        for (int trial = 0; trial < 20; ++trial) {
            const HermitianObservable a(random_hermitian(dim, rng), "A");
            const HermitianObservable b(random_hermitian(dim, rng), "B");
            const QuantumState psi = QuantumState::pure(random_pure(dim, rng));
            double total_sum = 0.0;
            for (double target : b.spectrum().eigenvalues) {
                const InterferenceDecomposition d = quantum_ftp(psi, a, b, target);
                const double born = born_probability(psi, b, target);
                CHECK(std::abs(d.total - born) < 1e-10);
                CHECK(std::abs(d.classical_part + d.interference_term - d.total) < 1e-10);
                double cross_sum = 0.0;
                for (const auto& ct : d.cross_terms)
                    cross_sum += 2.0 * ct.magnitude * std::cos(ct.phase);
                CHECK(std::abs(cross_sum - d.interference_term) < 1e-10);
                CHECK(d.total >= -1e-10);
                CHECK(d.total <= 1.0 + 1e-10);
                total_sum += d.total;
            }
            CHECK(std::abs(total_sum - 1.0) < 1e-10);
        }
    }
}

TEST_CASE("quantum_ftp rejects degenerate spectra and mixed states") {
    const HermitianObservable degenerate(ComplexMatrix::diagonal({1.0, 1.0, 2.0}), "D");
    const HermitianObservable fine(ComplexMatrix::diagonal({0.0, 1.0, 2.0}), "F");
    CounterRng rng(67);
    const QuantumState psi = QuantumState::pure(random_pure(3, rng));
    CHECK_THROWS_AS(quantum_ftp(psi, degenerate, fine, 0.0), DegenerateSpectrum);
    CHECK_THROWS_AS(quantum_ftp(psi, fine, degenerate, 1.0), DegenerateSpectrum);
}

TEST_CASE("probability_gain examples") {
    const QuantumState plus = QuantumState::pure(plus_state());
    CHECK(probability_gain(plus, obs_z(), obs_x(), 1.0) == doctest::Approx(0.5).epsilon(1e-10));

    const QuantumState zero = QuantumState::pure(ket(2, 0));
    CHECK(std::abs(probability_gain(zero, obs_z(), obs_x(), 1.0)) < 1e-12);
}

TEST_CASE("are_compatible") {
    CHECK(are_compatible(obs_z(), obs_z(), 1e-8));
    CHECK_FALSE(are_compatible(obs_z(), obs_x(), 1e-8));
    const HermitianObservable zi(tensor_product(sigma_z(), ComplexMatrix::identity(2)), "zi");
    const HermitianObservable ix(tensor_product(ComplexMatrix::identity(2), sigma_x()), "ix");
    CHECK(are_compatible(zi, ix, 1e-8));
}

TEST_CASE("jpd_for_compatible: Bell state correlations") {
    const QuantumState bell = QuantumState::pure(bell_phi_plus());
    const HermitianObservable zi(tensor_product(sigma_z(), ComplexMatrix::identity(2)), "z1");
    const HermitianObservable iz(tensor_product(ComplexMatrix::identity(2), sigma_z()), "z2");
    const JointDistribution jpd = jpd_for_compatible(bell, {zi, iz});
    CHECK(jpd.probability_of({1.0, 1.0}) == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(jpd.probability_of({-1.0, -1.0}) == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(jpd.probability_of({1.0, -1.0}) == 0.0);
    CHECK(jpd.probability_of({-1.0, 1.0}) == 0.0);
}

TEST_CASE("jpd_for_compatible: single observable reduces to the Born distribution") {
    CounterRng rng(71);
    const HermitianObservable a(random_hermitian(3, rng), "A");
    const QuantumState psi = QuantumState::pure(random_pure(3, rng));
    const JointDistribution jpd = jpd_for_compatible(psi, {a});
    for (double outcome : a.spectrum().eigenvalues)
        CHECK(std::abs(jpd.probability_of({outcome}) - born_probability(psi, a, outcome)) <
              1e-10);
}

TEST_CASE("jpd_for_compatible rejects incompatible families") {
    CounterRng rng(73);
    const QuantumState psi = QuantumState::pure(random_pure(2, rng));
    CHECK_THROWS_AS(jpd_for_compatible(psi, {obs_z(), obs_x()}), IncompatibleFamily);
    try {
        jpd_for_compatible(psi, {obs_z(), obs_x()});
    } catch (const IncompatibleFamily& e) {
        CHECK(e.first == 0);
        CHECK(e.second == 1);
        CHECK(e.commutator_norm == doctest::Approx(2.0));
    }
}

TEST_CASE("jpd marginals match Born probabilities for commuting families") {
    CounterRng rng(79);
    for (int trial = 0; trial < 15; ++trial) {
        const std::size_t dim = 2 + trial % 3;
        const auto [am, bm] = random_commuting_nondegenerate(dim, rng);
        const HermitianObservable a(am, "A");
        const HermitianObservable b(bm, "B");
        const QuantumState psi = QuantumState::pure(random_pure(dim, rng));
        const JointDistribution jpd = jpd_for_compatible(psi, {a, b});

        const JointDistribution ma = marginal(jpd, {"A"});
        for (double outcome : a.spectrum().eigenvalues)
            CHECK(std::abs(ma.probability_of({outcome}) - born_probability(psi, a, outcome)) <
                  1e-10);
        const JointDistribution mb = marginal(jpd, {"B"});
        for (double outcome : b.spectrum().eigenvalues)
            CHECK(std::abs(mb.probability_of({outcome}) - born_probability(psi, b, outcome)) <
                  1e-10);
    }
}

TEST_CASE("classical ftp over the quantum jpd matches the Born rule") {
    CounterRng rng(83);
    const auto [am, bm] = random_commuting_nondegenerate(3, rng);
    const HermitianObservable a(am, "A");
    const HermitianObservable b(bm, "B");
    const QuantumState psi = QuantumState::pure(random_pure(3, rng));
    const JointDistribution jpd = jpd_for_compatible(psi, {a, b});
    const auto rebuilt = space_from_jpd(jpd);

    for (double target : b.spectrum().eigenvalues) {
        const double via_classical =
            classical_ftp(rebuilt.space, rebuilt.variables[0], rebuilt.variables[1], target);
        CHECK(std::abs(via_classical - born_probability(psi, b, target)) < 1e-10);
    }
}

TEST_CASE("non-selective update preserves trace and positivity") {
    CounterRng rng(89);
    for (int trial = 0; trial < 15; ++trial) {
        const std::size_t dim = 2 + trial % 4;
        const HermitianObservable a(random_hermitian(dim, rng), "A");
        const QuantumState psi = QuantumState::pure(random_pure(dim, rng));
        const QuantumState after = luders_update(psi, a);
        // QuantumState::mixed validated trace/positivity at 1e-10 already;
        // double-check the trace explicitly.
        CHECK(std::abs(after.density_ref().trace().real() - 1.0) < 1e-10);
    }
}

TEST_CASE("state validation rejects bad inputs") {
    CHECK_THROWS_AS(QuantumState::pure({cplx(1, 0), cplx(1, 0)}), NumericalIntegrity);
    ComplexMatrix not_density = ComplexMatrix::identity(2);  // trace 2
    CHECK_THROWS_AS(QuantumState::mixed(not_density), NumericalIntegrity);
    ComplexMatrix negative{{cplx(1.5, 0), cplx(0, 0)}, {cplx(0, 0), cplx(-0.5, 0)}};
    CHECK_THROWS_AS(QuantumState::mixed(negative), NumericalIntegrity);
}
