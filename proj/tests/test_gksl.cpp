#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "qprob/gksl.hpp"
#include "testutil.hpp"

using namespace qprob;
using namespace testutil;

namespace {

LindbladModel dephasing_model(double gamma) {
    return LindbladModel(ComplexMatrix(2), {JumpOperator{sigma_z(), gamma}});
}

LindbladModel amplitude_damping_model(double gamma) {
    ComplexMatrix lower(2);
    lower(0, 1) = cplx(1, 0);  // |0><1|
    return LindbladModel(ComplexMatrix(2), {JumpOperator{lower, gamma}});
}

QuantumState plus_density() {
    return QuantumState::mixed(outer_product(plus_state(), plus_state()));
}

}  // namespace

TEST_CASE("unitary evolution: populations constant, coherence rotates with unit magnitude") {
    const LindbladModel model(sigma_z(), {});
    const auto trajectory = integrate(model, plus_density(), 2.0, 0.001, {.record_stride = 100});
    for (const auto& point : trajectory) {
        const ComplexMatrix rho = point.state.density();
        CHECK(rho(0, 0).real() == doctest::Approx(0.5).epsilon(1e-8));
        CHECK(rho(1, 1).real() == doctest::Approx(0.5).epsilon(1e-8));
        CHECK(std::abs(rho(0, 1)) == doctest::Approx(0.5).epsilon(1e-8));
        // off-diagonal phase advances as e^{-2it} under H = sigma_z
        const cplx expected = 0.5 * std::exp(cplx(0, -2.0 * point.t));
        CHECK(std::abs(rho(0, 1) - expected) < 1e-8);
    }
}

TEST_CASE("dephasing: off-diagonal decays as exp(-2 gamma t)") {
    const LindbladModel model = dephasing_model(1.0);
    const auto trajectory = integrate(model, plus_density(), 3.0, 0.001, {.record_stride = 250});
    for (const auto& point : trajectory) {
        const ComplexMatrix rho = point.state.density();
        CHECK(std::abs(rho(0, 1)) == doctest::Approx(0.5 * std::exp(-2.0 * point.t)).epsilon(1e-6));
        CHECK(rho(0, 0).real() == doctest::Approx(0.5).epsilon(1e-9));
    }
}

TEST_CASE("dephasing fixed point: diagonal initial states do not move") {
    const LindbladModel model = dephasing_model(1.0);
    const QuantumState diag = QuantumState::mixed(ComplexMatrix::diagonal({0.7, 0.3}));
    const auto trajectory = integrate(model, diag, 1.0, 0.01);
    for (const auto& point : trajectory)
        CHECK(max_abs_diff(point.state.density(), diag.density()) < 1e-12);
}

TEST_CASE("trajectories preserve trace and positivity") {
    CounterRng rng(131);
    const LindbladModel model = amplitude_damping_model(0.8);
    const QuantumState rho0 = QuantumState::pure(random_pure(2, rng));
    const auto trajectory = integrate(model, rho0, 5.0, 0.002, {.record_stride = 100});
    for (const auto& point : trajectory) {
        const ComplexMatrix rho = point.state.density();
        CHECK(std::abs(rho.trace().real() - 1.0) < 1e-8);
        CHECK(hermitian_eigensystem(rho).eigenvalues.front() >= -1e-7);
    }
}

TEST_CASE("rk4 is fourth order under dt halving") {
    const LindbladModel model = dephasing_model(1.0);
    const QuantumState rho0 = plus_density();
    // exact endpoint
    ComplexMatrix exact = rho0.density();
    exact(0, 1) *= std::exp(-2.0);
    exact(1, 0) *= std::exp(-2.0);

    std::vector<double> errors;
    for (double dt : {0.1, 0.05, 0.025, 0.0125}) {
        const auto trajectory =
            integrate(model, rho0, 1.0, dt, {.record_stride = 1000000});
        errors.push_back(max_abs_diff(trajectory.back().state.density(), exact));
    }
    for (std::size_t i = 1; i < errors.size(); ++i) {
        const double ratio = errors[i - 1] / errors[i];
        CHECK(ratio > 8.0);   // 16 within a factor of 2
        CHECK(ratio < 32.0);
    }
}

TEST_CASE("steady state of dephasing is the dephased initial state (non-unique family)") {
    const LindbladModel model = dephasing_model(1.0);
    const HermitianObservable a(sigma_z(), "sz");

    SUBCASE("from the plus state") {
        const SteadyStateReport report = steady_state(model, a, plus_density());
        CHECK_FALSE(report.unique);
        CHECK(report.null_space_dimension == 2);
        CHECK(report.residual <= 1e-8);
        CHECK(report.diagonal_in_basis);
        CHECK(report.max_offdiagonal <= 1e-8);
        REQUIRE(report.eigen_populations.size() == 2);
        // populations ordered by ascending eigenvalue: lambda(-1), lambda(+1)
        CHECK(report.eigen_populations[0] == doctest::Approx(0.5).epsilon(1e-6));
        CHECK(report.eigen_populations[1] == doctest::Approx(0.5).epsilon(1e-6));
    }

    SUBCASE("from a biased diagonal state") {
        const QuantumState biased = QuantumState::mixed(ComplexMatrix::diagonal({0.9, 0.1}));
        const SteadyStateReport report = steady_state(model, a, biased);
        CHECK_FALSE(report.unique);
        CHECK(report.eigen_populations[0] == doctest::Approx(0.1).epsilon(1e-8));
        CHECK(report.eigen_populations[1] == doctest::Approx(0.9).epsilon(1e-8));
    }
}

TEST_CASE("steady state of amplitude damping is the ground state, unique") {
    const LindbladModel model = amplitude_damping_model(1.0);
    const HermitianObservable a(sigma_z(), "sz");
    const QuantumState excited = QuantumState::mixed(ComplexMatrix::diagonal({0.0, 1.0}));
    const SteadyStateReport report = steady_state(model, a, excited);
    CHECK(report.unique);
    CHECK(report.null_space_dimension == 1);
    CHECK(report.residual <= 1e-8);
    CHECK(report.diagonal_in_basis);
    CHECK(max_abs_diff(report.steady_state.density(), outer_product(ket(2, 0), ket(2, 0))) <
          1e-7);
    CHECK(report.cross_check_distance <= 1e-6);
}

TEST_CASE("populations equal Born probabilities of the steady state") {
    const LindbladModel model = dephasing_model(1.0);
    const HermitianObservable a(sigma_z(), "sz");
    const QuantumState biased = QuantumState::mixed(ComplexMatrix::diagonal({0.35, 0.65}));
    const SteadyStateReport report = steady_state(model, a, biased);
    for (std::size_t k = 0; k < report.eigen_populations.size(); ++k) {
        const double born = born_probability(report.steady_state, a,
                                             a.spectrum().eigenvalues[k]);
        CHECK(std::abs(report.eigen_populations[k] - born) < 1e-10);
    }
}

TEST_CASE("convergence rate: dephasing fits -2 gamma") {
    const auto [rate, quality] =
        convergence_rate(dephasing_model(1.0), plus_density(), HermitianObservable(sigma_z(), "sz"));
    CHECK(rate == doctest::Approx(-2.0).epsilon(0.05));
    CHECK(quality > 0.999);
}

TEST_CASE("convergence rate: amplitude damping from the excited state fits -gamma") {
    const QuantumState excited = QuantumState::mixed(ComplexMatrix::diagonal({0.0, 1.0}));
    const auto [rate, quality] = convergence_rate(amplitude_damping_model(1.0), excited,
                                                  HermitianObservable(sigma_z(), "sz"));
    CHECK(rate == doctest::Approx(-1.0).epsilon(0.05));
    CHECK(quality > 0.999);
}

TEST_CASE("convergence rate: pure unitary dynamics has no decay") {
    const LindbladModel model(sigma_z(), {});
    CHECK_THROWS_AS(
        convergence_rate(model, plus_density(), HermitianObservable(sigma_z(), "sz")),
        NoDecay);
}

TEST_CASE("steady-state report carries the fitted rate") {
    const SteadyStateReport report =
        steady_state(dephasing_model(1.0), HermitianObservable(sigma_z(), "sz"), plus_density());
    CHECK(report.convergence_rate == doctest::Approx(-2.0).epsilon(0.05));
    CHECK(report.fit_quality > 0.999);
}

TEST_CASE("generator superoperator path with trace-annihilation check") {
    // Assemble the dephasing dissipator by hand: gamma (Z (x) Z - I).
    const ComplexMatrix zz = tensor_product(sigma_z(), sigma_z().conj());
    const ComplexMatrix dissipator = zz - ComplexMatrix::identity(4);
    const LindbladModel model = LindbladModel::from_superoperator(ComplexMatrix(2), dissipator);
    const auto trajectory = integrate(model, plus_density(), 1.0, 0.001, {.record_stride = 1000});
    const ComplexMatrix rho = trajectory.back().state.density();
    CHECK(std::abs(rho(0, 1)) == doctest::Approx(0.5 * std::exp(-2.0)).epsilon(1e-6));

    // A superoperator that creates trace is rejected.
    ComplexMatrix bad(4);
    bad(0, 0) = cplx(1.0, 0.0);
    CHECK_THROWS_AS(LindbladModel::from_superoperator(ComplexMatrix(2), bad),
                    NumericalIntegrity);
}

TEST_CASE("model validation") {
    ComplexMatrix not_hermitian(2);
    not_hermitian(0, 1) = cplx(1, 0);
    CHECK_THROWS_AS(LindbladModel(not_hermitian, {}), NotHermitian);
    CHECK_THROWS_AS(LindbladModel(ComplexMatrix(2), {JumpOperator{sigma_z(), -1.0}}),
                    ConfigInvalid);
    CHECK_THROWS_AS(integrate(LindbladModel(ComplexMatrix(2), {}), plus_density(), -1.0, 0.1),
                    ConfigInvalid);
}

TEST_CASE("apply_generator matches the superoperator") {
    CounterRng rng(137);
    const LindbladModel model = amplitude_damping_model(0.7);
    ComplexMatrix rho = random_hermitian(2, rng);
    const ComplexMatrix via_matrix = model.apply_generator(rho);
    // direct form: -i[H, rho] + gamma (L rho L^dag - {L^dag L, rho}/2)
    ComplexMatrix lower(2);
    lower(0, 1) = cplx(1, 0);
    const ComplexMatrix ldl = lower.adjoint() * lower;
    const ComplexMatrix direct =
        (lower * rho * lower.adjoint() - (ldl * rho + rho * ldl) * cplx(0.5, 0.0)) *
        cplx(0.7, 0.0);
    CHECK(max_abs_diff(via_matrix, direct) < 1e-12);
}
