#include "qprob/gksl.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "qprob/instruments.hpp"  // trace_distance
#include "qprob/kernels.hpp"

namespace qprob {

namespace {

cvector vec(const ComplexMatrix& m) { return m.entries(); }

ComplexMatrix unvec(const cvector& v, std::size_t dim) {
    return ComplexMatrix(dim, v);
}

// max_c | sum_i G[(i*d+i)][c] |: how much the generator can move the trace.
double trace_annihilation_defect(const ComplexMatrix& g, std::size_t dim) {
    double worst = 0.0;
    for (std::size_t c = 0; c < g.dim(); ++c) {
        cplx acc(0.0, 0.0);
        for (std::size_t i = 0; i < dim; ++i) acc += g(i * dim + i, c);
        worst = std::max(worst, std::abs(acc));
    }
    return worst;
}

}  // namespace

void LindbladModel::finalize(ComplexMatrix dissipator) {
    const std::size_t d = hamiltonian_.dim();
    if (hamiltonian_.hermiticity_deviation() > 1e-10)
        throw NotHermitian("LindbladModel: Hamiltonian not Hermitian",
                           hamiltonian_.hermiticity_deviation());
    const ComplexMatrix id = ComplexMatrix::identity(d);
    generator_ = (tensor_product(hamiltonian_, id) - tensor_product(id, hamiltonian_.transpose())) *
                     cplx(0.0, -1.0) +
                 dissipator;
    const double defect = trace_annihilation_defect(generator_, d);
    if (defect > 1e-10 * std::max(1.0, generator_.max_abs()))
        throw NumericalIntegrity("LindbladModel: generator does not preserve the trace (defect " +
                                 std::to_string(defect) + ")");
}

LindbladModel::LindbladModel(ComplexMatrix hamiltonian, std::vector<JumpOperator> jumps) {
    hamiltonian_ = std::move(hamiltonian);
    const std::size_t d = hamiltonian_.dim();
    const ComplexMatrix id = ComplexMatrix::identity(d);
    ComplexMatrix dissipator(d * d);
    for (const auto& jump : jumps) {
        if (jump.matrix.dim() != d)
            throw DimMismatch("LindbladModel: jump operator dim mismatch");
        if (!(jump.rate >= 0.0))
            throw ConfigInvalid("LindbladModel: jump rate must be >= 0");
        const ComplexMatrix ldl = jump.matrix.adjoint() * jump.matrix;
        dissipator += (tensor_product(jump.matrix, jump.matrix.conj()) -
                       (tensor_product(ldl, id) + tensor_product(id, ldl.transpose())) *
                           cplx(0.5, 0.0)) *
                      cplx(jump.rate, 0.0);
    }
    finalize(std::move(dissipator));
}

LindbladModel LindbladModel::from_superoperator(ComplexMatrix hamiltonian,
                                                ComplexMatrix dissipator_superop) {
    const std::size_t d = hamiltonian.dim();
    if (dissipator_superop.dim() != d * d)
        throw DimMismatch("LindbladModel: superoperator must be dim^2 x dim^2");
    const double defect = trace_annihilation_defect(dissipator_superop, d);
    if (defect > 1e-10 * std::max(1.0, dissipator_superop.max_abs()))
        throw NumericalIntegrity(
            "LindbladModel: supplied dissipator does not annihilate the trace (defect " +
            std::to_string(defect) + ")");
    LindbladModel model;
    model.hamiltonian_ = std::move(hamiltonian);
    model.finalize(std::move(dissipator_superop));
    return model;
}

ComplexMatrix LindbladModel::apply_generator(const ComplexMatrix& rho) const {
    if (rho.dim() != dim()) throw DimMismatch("apply_generator: dim mismatch");
    return unvec(generator_.apply(vec(rho)), dim());
}

std::vector<TrajectoryPoint> integrate(const LindbladModel& model, const QuantumState& rho0,
                                       double t_final, double dt, const IntegrateOptions& options) {
    if (!(t_final > 0.0) || !(dt > 0.0) || dt > t_final)
        throw ConfigInvalid("integrate: need 0 < dt <= t_final");
    if (rho0.dim() != model.dim()) throw DimMismatch("integrate: state dim mismatch");

    const std::size_t n_steps =
        std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(t_final / dt)));
    const double h = t_final / static_cast<double>(n_steps);
    const std::size_t d = model.dim();
    const std::size_t n = d * d;
    const auto& g = model.generator();
    auto& k = kernels::active();

    cvector v = vec(rho0.density());
    cvector k1(n), k2(n), k3(n), k4(n), tmp(n);

    const StateTolerances point_tol{
        .norm = 1e-10,
        .hermiticity = 1e-8,
        .trace = options.trace_tol,
        .eigenvalue = -options.eigenvalue_floor,
    };
    auto record = [&](double t, const cvector& state_vec) -> QuantumState {
        try {
            if (options.check_positivity) return QuantumState::mixed(unvec(state_vec, d), point_tol);
            ComplexMatrix m = unvec(state_vec, d);
            const double tr = m.trace().real();
            if (std::abs(tr - 1.0) > options.trace_tol)
                throw NumericalIntegrity("trace " + std::to_string(tr));
            StateTolerances loose = point_tol;
            loose.eigenvalue = std::numeric_limits<double>::infinity();
            return QuantumState::mixed(std::move(m), loose);
        } catch (const Error& e) {
            throw StepTooLarge("integrate: state invalid at t = " + std::to_string(t) + " (" +
                               e.what() + "); reduce dt");
        }
    };

    std::vector<TrajectoryPoint> trajectory;
    trajectory.push_back(TrajectoryPoint{0.0, record(0.0, v)});

    for (std::size_t step = 0; step < n_steps; ++step) {
        g.apply(v).swap(k1);
        tmp = v;
        k.axpy(n, cplx(0.5 * h, 0.0), k1.data(), tmp.data());
        g.apply(tmp).swap(k2);
        tmp = v;
        k.axpy(n, cplx(0.5 * h, 0.0), k2.data(), tmp.data());
        g.apply(tmp).swap(k3);
        tmp = v;
        k.axpy(n, cplx(h, 0.0), k3.data(), tmp.data());
        g.apply(tmp).swap(k4);

        k.axpy(n, cplx(h / 6.0, 0.0), k1.data(), v.data());
        k.axpy(n, cplx(h / 3.0, 0.0), k2.data(), v.data());
        k.axpy(n, cplx(h / 3.0, 0.0), k3.data(), v.data());
        k.axpy(n, cplx(h / 6.0, 0.0), k4.data(), v.data());

        const double t = h * static_cast<double>(step + 1);
        if ((step + 1) % options.record_stride == 0 || step + 1 == n_steps)
            trajectory.push_back(TrajectoryPoint{t, record(t, v)});
    }
    return trajectory;
}

namespace {

struct FitResult {
    double slope;
    double r_squared;
};

// Least squares of log(d) against t over the tail window; nullopt when the
// window is unusable or the distance fails to decrease across it.
std::optional<FitResult> fit_decay(const std::vector<double>& times,
                                   const std::vector<double>& distances,
                                   const RateFitOptions& options) {
    const std::size_t n = times.size();
    if (n < 8) return std::nullopt;
    const double d0 = distances.front();
    if (d0 <= options.noise_floor) return std::nullopt;  // started at the target

    std::size_t transient_end = 0;
    while (transient_end < n && distances[transient_end] > options.transient_cut * d0)
        ++transient_end;

    const std::size_t tail_start = std::max(
        transient_end, static_cast<std::size_t>((1.0 - options.tail_fraction) *
                                                static_cast<double>(n)));
    std::vector<double> ts, logs;
    for (std::size_t i = tail_start; i < n; ++i) {
        if (distances[i] <= options.noise_floor) break;
        ts.push_back(times[i]);
        logs.push_back(std::log(distances[i]));
    }
    if (ts.size() < 8) return std::nullopt;

    // Monotone decrease over the fit window (tiny per-step slack for rounding).
    for (std::size_t i = 1; i < logs.size(); ++i)
        if (logs[i] > logs[i - 1] + 1e-9) return std::nullopt;
    if (logs.back() >= logs.front() - 1e-6) return std::nullopt;

    const double m = static_cast<double>(ts.size());
    double st = 0.0, sy = 0.0, stt = 0.0, sty = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        st += ts[i];
        sy += logs[i];
        stt += ts[i] * ts[i];
        sty += ts[i] * logs[i];
        syy += logs[i] * logs[i];
    }
    const double denom = m * stt - st * st;
    if (denom == 0.0) return std::nullopt;
    const double slope = (m * sty - st * sy) / denom;
    const double ss_tot = syy - sy * sy / m;
    const double intercept = (sy - slope * st) / m;
    double ss_res = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        const double resid = logs[i] - (intercept + slope * ts[i]);
        ss_res += resid * resid;
    }
    const double r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
    return FitResult{slope, r2};
}

// Reference state the distances are measured against: the unique null-space
// state when there is one, otherwise the long-time limit from rho0.
struct NullSpaceInfo {
    std::size_t dimension = 0;
    std::optional<ComplexMatrix> unique_state;
};

NullSpaceInfo analyze_null_space(const LindbladModel& model, double null_tol) {
    const ComplexMatrix& g = model.generator();
    const ComplexMatrix k = g.adjoint() * g;
    const EigenSystem eig = hermitian_eigensystem(k);
    const double threshold = std::max(eig.eigenvalues.back(), 1.0) * null_tol;

    NullSpaceInfo info;
    std::size_t first_null = 0;
    while (first_null < eig.eigenvalues.size() && eig.eigenvalues[first_null] <= threshold)
        ++first_null;
    info.dimension = first_null;
    if (info.dimension == 1) {
        const std::size_t d = model.dim();
        cvector v(d * d);
        for (std::size_t i = 0; i < d * d; ++i) v[i] = eig.eigenvectors(i, 0);
        ComplexMatrix x = unvec(v, d);
        x = (x + x.adjoint()) * cplx(0.5, 0.0);
        const double tr = x.trace().real();
        if (std::abs(tr) > 1e-10) {
            x *= cplx(1.0 / tr, 0.0);
            info.unique_state = std::move(x);
        }
    }
    return info;
}

ComplexMatrix long_time_limit(const LindbladModel& model, const QuantumState& rho0, double t_long,
                              double dt) {
    IntegrateOptions opts;
    opts.record_stride = std::numeric_limits<std::size_t>::max();  // endpoints only
    const auto trajectory = integrate(model, rho0, t_long, dt, opts);
    return trajectory.back().state.density();
}

}  // namespace

std::optional<ComplexMatrix> unique_steady_state(const LindbladModel& model) {
    return analyze_null_space(model, 1e-10).unique_state;
}

SteadyStateReport steady_state(const LindbladModel& model, const HermitianObservable& observable,
                               const QuantumState& rho0, const SteadyStateOptions& options) {
    if (observable.dim() != model.dim() || rho0.dim() != model.dim())
        throw DimMismatch("steady_state: dim mismatch");

    const NullSpaceInfo null_info = analyze_null_space(model, options.null_tol);
    if (null_info.dimension == 0)
        throw NoStationaryConvergence("steady_state: generator has no (numerical) null space");

    const ComplexMatrix limit = long_time_limit(model, rho0, options.t_long, options.dt);

    ComplexMatrix rho_a = null_info.unique_state ? *null_info.unique_state : limit;
    const double residual = model.apply_generator(rho_a).max_abs();
    if (residual > options.residual_tol)
        throw NoStationaryConvergence("steady_state: residual " + std::to_string(residual) +
                                      " above tolerance; dynamics did not stabilize");

    const double cross = trace_distance(rho_a, limit);
    if (cross > options.cross_check_tol)
        throw NoStationaryConvergence(
            "steady_state: long-time integration disagrees with the null-space state "
            "(trace distance " +
            std::to_string(cross) + ")");

    // Populations and diagonality in the observable's eigenbasis.
    const SpectralDecomposition& sd = observable.spectrum();
    const ComplexMatrix in_basis = sd.eigenbasis.adjoint() * rho_a * sd.eigenbasis;
    double max_off = 0.0;
    for (std::size_t i = 0; i < in_basis.dim(); ++i)
        for (std::size_t j = 0; j < in_basis.dim(); ++j)
            if (i != j) max_off = std::max(max_off, std::abs(in_basis(i, j)));

    std::vector<double> populations;
    std::size_t col = 0;
    for (std::size_t k = 0; k < sd.outcome_count(); ++k) {
        double lambda = 0.0;
        for (std::size_t m = 0; m < sd.multiplicities[k]; ++m, ++col)
            lambda += in_basis(col, col).real();
        populations.push_back(lambda);
    }

    SteadyStateReport report{
        .steady_state = QuantumState::mixed(rho_a, StateTolerances{.norm = 1e-10,
                                                                   .hermiticity = 1e-8,
                                                                   .trace = 1e-8,
                                                                   .eigenvalue = 1e-7}),
        .residual = residual,
        .diagonal_in_basis = max_off <= 1e-8,
        .max_offdiagonal = max_off,
        .eigen_populations = std::move(populations),
        .unique = null_info.unique_state.has_value(),
        .null_space_dimension = null_info.dimension,
        .convergence_rate = std::numeric_limits<double>::quiet_NaN(),
        .fit_quality = std::numeric_limits<double>::quiet_NaN(),
        .cross_check_distance = cross,
    };

    try {
        const auto [rate, quality] = convergence_rate(model, rho0, observable);
        report.convergence_rate = rate;
        report.fit_quality = quality;
    } catch (const NoDecay&) {
        // already at (or never approaching) the steady state: NaN rate
    }
    return report;
}

std::pair<double, double> convergence_rate(const LindbladModel& model, const QuantumState& rho0,
                                           const HermitianObservable& observable,
                                           const RateFitOptions& options) {
    if (observable.dim() != model.dim() || rho0.dim() != model.dim())
        throw DimMismatch("convergence_rate: dim mismatch");

    const NullSpaceInfo null_info = analyze_null_space(model, 1e-10);
    ComplexMatrix reference =
        null_info.unique_state
            ? *null_info.unique_state
            : long_time_limit(model, rho0, 4.0 * options.t_final, options.dt);

    IntegrateOptions iopts;
    const std::size_t n_steps =
        std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(options.t_final / options.dt)));
    iopts.record_stride = std::max<std::size_t>(1, n_steps / 2000);
    const auto trajectory = integrate(model, rho0, options.t_final, options.dt, iopts);

    std::vector<double> times, distances;
    times.reserve(trajectory.size());
    for (const auto& point : trajectory) {
        times.push_back(point.t);
        distances.push_back((point.state.density() - reference).frobenius_norm());
    }

    const auto fit = fit_decay(times, distances, options);
    if (!fit)
        throw NoDecay(
            "convergence_rate: distance to the steady state does not decrease over the fit "
            "window");
    return {fit->slope, fit->r_squared};
}

}  // namespace qprob
