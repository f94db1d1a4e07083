#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "qprob/instruments.hpp"
#include "testutil.hpp"

using namespace qprob;
using namespace testutil;

namespace {

ComplexMatrix cnot_system_control() {
    // |s,k> -> |s, k xor s>, system is the first (slow) factor
    ComplexMatrix u(4);
    u(0, 0) = u(1, 1) = u(2, 3) = u(3, 2) = cplx(1, 0);
    return u;
}

ComplexMatrix swap_gate() {
    ComplexMatrix u(4);
    u(0, 0) = u(1, 2) = u(2, 1) = u(3, 3) = cplx(1, 0);
    return u;
}

IndirectMeasurementModel cnot_model() {
    return IndirectMeasurementModel(2, QuantumState::pure(ket(2, 0)), cnot_system_control(),
                                    HermitianObservable(sigma_z(), "meter"));
}

QuantumState superposition(double a, double b) {
    cvector v{cplx(a, 0), cplx(b, 0)};
    const double n = vector_norm(v);
    for (auto& amp : v) amp /= n;
    return QuantumState::pure(std::move(v));
}

}  // namespace

TEST_CASE("uncoupled model: outcome distribution is the probe's, independent of the system") {
    const QuantumState probe = superposition(0.6, 0.8);
    const IndirectMeasurementModel model(2, probe, ComplexMatrix::identity(4),
                                         HermitianObservable(sigma_z(), "meter"));

    const double q_plus_expected = 0.36;  // |<0|probe>|^2
    for (double a : {1.0, 0.3, 0.0})
        for (double b : {0.0, 0.7, 1.0}) {
            if (a == 0.0 && b == 0.0) continue;
            const QuantumState system = superposition(a, b);
            CHECK(outcome_probability(model, system, 1.0) ==
                  doctest::Approx(q_plus_expected).epsilon(1e-10));
        }
}

TEST_CASE("uncoupled model: instrument leaves the system untouched") {
    const QuantumState probe = superposition(0.6, 0.8);
    const IndirectMeasurementModel model(2, probe, ComplexMatrix::identity(4),
                                         HermitianObservable(sigma_z(), "meter"));
    const QuantumState system = superposition(0.48, 0.877496438739212206);
    const ComplexMatrix post = instrument_apply(model, system, 1.0);
    const double q = outcome_probability(model, system, 1.0);
    CHECK(max_abs_diff(post, system.density() * cplx(q, 0.0)) < 1e-12);
}

TEST_CASE("cnot model reproduces the Born probabilities of sigma_z") {
    const auto model = cnot_model();
    const QuantumState psi = superposition(0.6, 0.8);
    CHECK(outcome_probability(model, psi, 1.0) == doctest::Approx(0.36).epsilon(1e-12));
    CHECK(outcome_probability(model, psi, -1.0) == doctest::Approx(0.64).epsilon(1e-12));

    // maximally mixed system: both outcomes 1/2 by linearity
    const QuantumState mixed = QuantumState::mixed(ComplexMatrix::identity(2) * cplx(0.5, 0.0));
    CHECK(outcome_probability(model, mixed, 1.0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(outcome_probability(model, mixed, -1.0) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("cnot instrument reproduces the projective update") {
    const auto model = cnot_model();
    const QuantumState psi = superposition(0.6, 0.8);

    const ComplexMatrix post = instrument_apply(model, psi, 1.0);
    CHECK(post.trace().real() == doctest::Approx(0.36).epsilon(1e-12));
    ComplexMatrix normalized = post;
    normalized *= cplx(1.0 / post.trace().real(), 0.0);
    CHECK(max_abs_diff(normalized, outer_product(ket(2, 0), ket(2, 0))) < 1e-12);

    // zero-probability branch gives the zero operator
    const QuantumState zero_state = QuantumState::pure(ket(2, 0));
    const ComplexMatrix nothing = instrument_apply(model, zero_state, -1.0);
    CHECK(nothing.max_abs() < 1e-12);
}

TEST_CASE("instrument trace equals outcome probability on random models") {
    CounterRng rng(113);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t dim_s = 2 + trial % 3;
        const std::size_t dim_k = 2 + (trial / 3) % 3;
        // random unitary from a random Hermitian eigenbasis
        const EigenSystem eig = hermitian_eigensystem(random_hermitian(dim_s * dim_k, rng));
        const IndirectMeasurementModel model(
            dim_k, QuantumState::pure(random_pure(dim_k, rng)), eig.eigenvectors,
            HermitianObservable(random_hermitian(dim_k, rng), "meter"));
        const QuantumState system = QuantumState::pure(random_pure(dim_s, rng));

        double total = 0.0;
        for (double x : model.meter().spectrum().eigenvalues) {
            const double q = outcome_probability(model, system, x);
            const ComplexMatrix post = instrument_apply(model, system, x);
            CHECK(std::abs(post.trace().real() - q) < 1e-12);
            // positivity of the unnormalized branch operator
            const EigenSystem post_eig = hermitian_eigensystem(post);
            CHECK(post_eig.eigenvalues.front() >= -1e-10);
            total += q;
        }
        CHECK(std::abs(total - 1.0) < 1e-10);
    }
}

TEST_CASE("non-selective instrument map is trace preserving") {
    CounterRng rng(127);
    const EigenSystem eig = hermitian_eigensystem(random_hermitian(4, rng));
    const IndirectMeasurementModel model(2, QuantumState::pure(random_pure(2, rng)),
                                         eig.eigenvectors,
                                         HermitianObservable(random_hermitian(2, rng), "meter"));
    const QuantumState system = QuantumState::pure(random_pure(2, rng));
    ComplexMatrix sum(2);
    for (double x : model.meter().spectrum().eigenvalues)
        sum += instrument_apply(model, system, x);
    CHECK(std::abs(sum.trace().real() - 1.0) < 1e-10);
    const EigenSystem sum_eig = hermitian_eigensystem(sum);
    CHECK(sum_eig.eigenvalues.front() >= -1e-10);
}

TEST_CASE("verify_projective_realization: cnot passes against sigma_z") {
    const RealizationReport report = verify_projective_realization(
        HermitianObservable(sigma_z(), "sz"), cnot_model(), {{1.0, 1.0}, {-1.0, -1.0}});
    CHECK(report.passes);
    CHECK(report.states_tested == 20);
    CHECK(report.max_probability_deviation <= 1e-8);
    CHECK(report.max_trace_distance <= 1e-8);
}

TEST_CASE("verify_projective_realization: uncoupled model fails") {
    const IndirectMeasurementModel model(2, QuantumState::pure(ket(2, 0)),
                                         ComplexMatrix::identity(4),
                                         HermitianObservable(sigma_z(), "meter"));
    const RealizationReport report = verify_projective_realization(
        HermitianObservable(sigma_z(), "sz"), model, {{1.0, 1.0}, {-1.0, -1.0}});
    CHECK_FALSE(report.passes);
    CHECK(report.max_probability_deviation > 0.1);  // probabilities are state independent
}

TEST_CASE("verify_projective_realization: swap with a mixed probe fails on post-states") {
    const IndirectMeasurementModel model(
        2, QuantumState::mixed(ComplexMatrix::identity(2) * cplx(0.5, 0.0)), swap_gate(),
        HermitianObservable(sigma_z(), "meter"));
    const RealizationReport report = verify_projective_realization(
        HermitianObservable(sigma_z(), "sz"), model, {{1.0, 1.0}, {-1.0, -1.0}});
    CHECK_FALSE(report.passes);
    // the probabilities match (swap reads the system), the post-state is the probe
    CHECK(report.max_probability_deviation < 1e-10);
    CHECK(report.max_trace_distance > 0.1);
}

TEST_CASE("verify_projective_realization requires a declared bijection") {
    CHECK_THROWS_AS(verify_projective_realization(HermitianObservable(sigma_z(), "sz"),
                                                  cnot_model(), {{1.0, 1.0}}),
                    OutcomeMismatch);
    CHECK_THROWS_AS(verify_projective_realization(HermitianObservable(sigma_z(), "sz"),
                                                  cnot_model(), {{1.0, 1.0}, {1.0, -1.0}}),
                    OutcomeMismatch);
}

TEST_CASE("meter relabeling through the outcome map") {
    // meter diag(0, 1): outcome 0 marks the system's +1 branch
    const IndirectMeasurementModel model(2, QuantumState::pure(ket(2, 0)), cnot_system_control(),
                                         HermitianObservable(ComplexMatrix::diagonal({0, 1}),
                                                             "counter"));
    const RealizationReport report = verify_projective_realization(
        HermitianObservable(sigma_z(), "sz"), model, {{0.0, 1.0}, {1.0, -1.0}});
    CHECK(report.passes);
}

TEST_CASE("model validation") {
    CHECK_THROWS_AS(IndirectMeasurementModel(2, QuantumState::pure(ket(2, 0)),
                                             ComplexMatrix::identity(4) * cplx(2.0, 0.0),
                                             HermitianObservable(sigma_z(), "meter")),
                    NumericalIntegrity);
    CHECK_THROWS_AS(IndirectMeasurementModel(3, QuantumState::pure(ket(3, 0)),
                                             ComplexMatrix::identity(4),
                                             HermitianObservable(ComplexMatrix::identity(3),
                                                                 "meter")),
                    DimMismatch);
    const auto model = cnot_model();
    const QuantumState psi = QuantumState::pure(ket(2, 0));
    CHECK_THROWS_AS(outcome_probability(model, psi, 0.5), OutcomeNotInSpectrum);
    CHECK_THROWS_AS(outcome_probability(model, QuantumState::pure(ket(3, 0)), 1.0), DimMismatch);
}
