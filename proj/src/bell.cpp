#include "qprob/bell.hpp"

#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "qprob/threads.hpp"

namespace qprob {

std::size_t thread_cap() {
    static const std::size_t cap = [] {
        std::size_t hw = std::thread::hardware_concurrency();
        if (hw == 0) hw = 1;
        if (const char* env = std::getenv("QPROB_THREADS")) {
            const long v = std::atol(env);
            if (v >= 1 && static_cast<std::size_t>(v) < hw) hw = static_cast<std::size_t>(v);
        }
        return hw;
    }();
    return cap;
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn) {
    const std::size_t workers = std::min(thread_cap(), count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    std::exception_ptr first_error;
    std::mutex error_mutex;
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = w; i < count; i += workers) fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

namespace {

constexpr double kViolationMargin = 1e-8;

void check_bounded_spectrum(const HermitianObservable& obs) {
    for (double ev : obs.spectrum().eigenvalues)
        if (std::abs(ev) > 1.0 + 1e-10)
            throw ConfigInvalid("CHSHSetting: observable " + obs.name() + " has eigenvalue " +
                                std::to_string(ev) + " outside [-1, 1]");
}

}  // namespace

CHSHSetting::CHSHSetting(HermitianObservable a1_in, HermitianObservable a2_in,
                         HermitianObservable b1_in, HermitianObservable b2_in)
    : a1(std::move(a1_in)), a2(std::move(a2_in)), b1(std::move(b1_in)), b2(std::move(b2_in)) {
    check_same_dim(a1.matrix(), a2.matrix(), "CHSHSetting Alice pair");
    check_same_dim(b1.matrix(), b2.matrix(), "CHSHSetting Bob pair");
    check_bounded_spectrum(a1);
    check_bounded_spectrum(a2);
    check_bounded_spectrum(b1);
    check_bounded_spectrum(b2);
}

ComplexMatrix bell_operator(const CHSHSetting& s) {
    return tensor_product(s.a1.matrix(), s.b1.matrix() + s.b2.matrix()) +
           tensor_product(s.a2.matrix(), s.b1.matrix() - s.b2.matrix());
}

double chsh_value(const QuantumState& state, const CHSHSetting& setting) {
    const ComplexMatrix op = bell_operator(setting);
    if (state.dim() != op.dim())
        throw DimMismatch("chsh_value: state dim " + std::to_string(state.dim()) +
                          " vs composite dim " + std::to_string(op.dim()));
    cplx value;
    if (state.is_pure()) {
        value = inner_product(state.amplitudes(), op.apply(state.amplitudes()));
    } else {
        value = (state.density_ref() * op).trace();
    }
    if (std::abs(value.imag()) > 1e-10)
        throw NumericalIntegrity("chsh_value: non-real expectation " +
                                 std::to_string(value.imag()));
    return value.real();
}

bool local_incompatibility(const CHSHSetting& s, double tol) {
    if (tol < 0.0) {
        const double scale = std::max({s.a1.matrix().max_abs(), s.a2.matrix().max_abs(),
                                       s.b1.matrix().max_abs(), s.b2.matrix().max_abs(), 1.0});
        tol = 1e-8 * scale;
    }
    const double norm_a = commutator(s.a1.matrix(), s.a2.matrix()).max_abs();
    const double norm_b = commutator(s.b1.matrix(), s.b2.matrix()).max_abs();
    return norm_a > tol && norm_b > tol;
}

CHSHResult max_chsh(const CHSHSetting& setting) {
    const ComplexMatrix op = bell_operator(setting);
    const EigenSystem eig = hermitian_eigensystem(op);

    std::size_t best = 0;
    for (std::size_t k = 1; k < eig.eigenvalues.size(); ++k)
        if (std::abs(eig.eigenvalues[k]) > std::abs(eig.eigenvalues[best])) best = k;

    cvector vec(op.dim());
    for (std::size_t i = 0; i < op.dim(); ++i) vec[i] = eig.eigenvectors(i, best);

    CHSHResult out{
        .bell_operator_max = std::abs(eig.eigenvalues[best]),
        .optimal_state = QuantumState::pure(std::move(vec)),
        .violated = false,
        .locally_incompatible = local_incompatibility(setting),
        .commutator_norm_a = commutator(setting.a1.matrix(), setting.a2.matrix()).max_abs(),
        .commutator_norm_b = commutator(setting.b1.matrix(), setting.b2.matrix()).max_abs(),
    };
    out.violated = out.bell_operator_max > 2.0 + kViolationMargin;
    return out;
}

ComplexMatrix random_bounded_observable(std::size_t dim, CounterRng& rng) {
    ComplexMatrix g(dim);
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j) g(i, j) = cplx(rng.next_normal(), rng.next_normal());
    ComplexMatrix h = (g + g.adjoint()) * cplx(0.5, 0.0);

    const EigenSystem eig = hermitian_eigensystem(h);
    const double lo = eig.eigenvalues.front();
    const double hi = eig.eigenvalues.back();
    if (hi - lo < 1e-12) return ComplexMatrix(dim);  // all-equal spectrum: map to 0
    const double alpha = 2.0 / (hi - lo);
    const double beta = -1.0 - alpha * lo;
    return h * cplx(alpha, 0.0) + ComplexMatrix::identity(dim) * cplx(beta, 0.0);
}

namespace {

// Commuting pair sharing a random eigenbasis with independent spectra.
std::pair<ComplexMatrix, ComplexMatrix> random_commuting_pair(std::size_t dim, CounterRng& rng) {
    ComplexMatrix g(dim);
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j) g(i, j) = cplx(rng.next_normal(), rng.next_normal());
    const EigenSystem eig = hermitian_eigensystem((g + g.adjoint()) * cplx(0.5, 0.0));

    auto from_diagonal = [&](const std::vector<double>& diag) {
        ComplexMatrix m(dim);
        for (std::size_t k = 0; k < dim; ++k)
            for (std::size_t i = 0; i < dim; ++i)
                for (std::size_t j = 0; j < dim; ++j)
                    m(i, j) += diag[k] * eig.eigenvectors(i, k) * std::conj(eig.eigenvectors(j, k));
        return m;
    };
    std::vector<double> d1(dim), d2(dim);
    for (std::size_t k = 0; k < dim; ++k) d1[k] = 2.0 * rng.next_double() - 1.0;
    for (std::size_t k = 0; k < dim; ++k) d2[k] = 2.0 * rng.next_double() - 1.0;
    return {from_diagonal(d1), from_diagonal(d2)};
}

CHSHSetting random_setting(std::size_t dim_a, std::size_t dim_b, std::uint64_t seed,
                           std::size_t trial, SweepConstraint constraint) {
    CounterRng rng(seed, trial);
    bool commute_alice = constraint == SweepConstraint::CommutingAlice;
    bool commute_bob = constraint == SweepConstraint::CommutingBob;
    if (constraint == SweepConstraint::CommutingEitherSide) {
        (rng.next_double() < 0.5 ? commute_alice : commute_bob) = true;
    }

    ComplexMatrix a1(dim_a), a2(dim_a), b1(dim_b), b2(dim_b);
    if (commute_alice) {
        std::tie(a1, a2) = random_commuting_pair(dim_a, rng);
    } else {
        a1 = random_bounded_observable(dim_a, rng);
        a2 = random_bounded_observable(dim_a, rng);
    }
    if (commute_bob) {
        std::tie(b1, b2) = random_commuting_pair(dim_b, rng);
    } else {
        b1 = random_bounded_observable(dim_b, rng);
        b2 = random_bounded_observable(dim_b, rng);
    }
    return CHSHSetting(HermitianObservable(std::move(a1), "A1"),
                       HermitianObservable(std::move(a2), "A2"),
                       HermitianObservable(std::move(b1), "B1"),
                       HermitianObservable(std::move(b2), "B2"));
}

}  // namespace

SweepReport incompatibility_sweep(std::size_t n_trials, std::size_t dim_a, std::size_t dim_b,
                                  std::uint64_t seed, SweepConstraint constraint) {
    if (n_trials > 0 && (dim_a < 2 || dim_b < 2))
        throw ConfigInvalid("incompatibility_sweep: local dims must be >= 2");

    SweepReport report;
    report.trials.resize(n_trials);

    parallel_for(n_trials, [&](std::size_t t) {
        const CHSHSetting setting = random_setting(dim_a, dim_b, seed, t, constraint);
        const CHSHResult res = max_chsh(setting);
        report.trials[t] = SweepTrial{t,
                                      res.commutator_norm_a,
                                      res.commutator_norm_b,
                                      res.bell_operator_max,
                                      res.violated,
                                      res.locally_incompatible};
    });

    std::size_t incompatible = 0;
    for (const auto& trial : report.trials) {
        report.max_bell = std::max(report.max_bell, trial.bell_max);
        if (trial.locally_incompatible) {
            ++incompatible;
            if (trial.violated) {
                ++report.count_incompatible_violated;
            } else {
                ++report.count_incompatible_ok;
                report.counterexample_candidates.push_back(trial.trial);
            }
        } else {
            if (trial.violated)
                ++report.count_compatible_violated;
            else
                ++report.count_compatible_ok;
        }
    }
    report.violation_rate_incompatible =
        incompatible == 0 ? 0.0
                          : static_cast<double>(report.count_incompatible_violated) /
                                static_cast<double>(incompatible);
    return report;
}

}  // namespace qprob
