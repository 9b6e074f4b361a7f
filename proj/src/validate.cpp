#include "qlab/validate.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "qlab/dynamics.hpp"
#include "qlab/infotheory.hpp"
#include "qlab/measurement.hpp"
#include "qlab/sampling.hpp"

namespace qlab {

namespace {

Eigen::MatrixXd corrupted_phases(int K, int M) {
    // Same phase in every microstate: the s-sum in Eq.-10-style averages
    // no longer self-averages, so macroscopic expectations stop decohering.
    Eigen::MatrixXd theta(K, M);
    for (int i = 0; i < K; ++i) theta.row(i).setConstant(0.3 * (i + 1));
    return theta;
}

PointerMeasurementModel sample_model(const ValidationOptions& opts, int K, int M,
                                     std::uint64_t stream) {
    PointerMeasurementModel m = random_model(K, M, opts.seed, stream);
    if (opts.corrupt_phases) return m.with_theta(corrupted_phases(K, M));
    return m;
}

CheckResult check_dense_vs_structured(const ValidationOptions& opts) {
    double worst = 0.0;
    for (int K = 1; K <= 3; ++K)
        for (int M = 1; M <= 4; ++M) {
            const auto model = sample_model(opts, K, M, 100 + K * 10 + M);
            for (BranchState st : {premeasurement_state(model),
                                   apply_measurement(model),
                                   reduce(apply_measurement(model))}) {
                const DensityOperator dense = to_dense(st);
                worst = std::max(worst, std::abs(von_neumann_entropy(dense) -
                                                 entropy(st)));
                worst = std::max(
                    worst, std::abs(mutual_entropy(dense, {"object"}) -
                                    mutual_entropy(st)));
                auto [dev_povm, obj_povm] = pointer_povm(model);
                // state factors are (object, device)
                worst = std::max(
                    worst,
                    std::abs(classical_mutual_information(dense, obj_povm,
                                                          dev_povm) -
                             pointer_mutual_information(st)));
                if (K >= 2 && st.kind != BranchKind::premeasurement) {
                    const auto A = MacroscopicObservable::sigma_x_pattern(K);
                    const double dense_exp =
                        (dense.matrix() * to_dense_observable(A, model))
                            .trace()
                            .real();
                    worst = std::max(worst,
                                     std::abs(dense_exp - expectation(st, A)));
                }
            }
        }
    std::ostringstream ss;
    ss << "max dense/structured deviation " << worst;
    return {"dense-vs-structured", worst <= 1e-9, ss.str()};
}

CheckResult check_reduction_identity(const ValidationOptions& opts) {
    // Object marginal of the coherent post-measurement state equals the
    // phase-free mixture of outcomes for every c and theta.
    double worst = 0.0;
    auto rng = substream(opts.seed, 7);
    std::uniform_real_distribution<double> u(0.0, 2.0 * std::numbers::pi);
    for (int trial = 0; trial < 100; ++trial) {
        const int K = 2 + trial % 4;  // K in 2..5
        Vec c = random_unit_vector(K, rng);
        RVec theta0(K);
        for (int i = 0; i < K; ++i) theta0[i] = u(rng);
        const DensityOperator rho = postmeasurement_pure(c, theta0);
        const DensityOperator marg = partial_trace(rho, {"object"});
        Mat expected = c.cwiseAbs2().cast<Cplx>().asDiagonal();
        worst = std::max(worst,
                         (marg.matrix() - expected).cwiseAbs().maxCoeff());
    }
    std::ostringstream ss;
    ss << "max |tr_A(rho) - sum |c_i|^2 proj| = " << worst;
    return {"object-reduction-identity", worst <= 1e-10, ss.str()};
}

CheckResult check_inequality(const ValidationOptions& opts) {
    SearchConfig cfg;
    cfg.restarts = 4;
    cfg.max_iters = 60;
    int failures = 0;
    double min_slack = 1e300;
    for (int t = 0; t < opts.random_states; ++t) {
        auto rng = substream(opts.seed, 5000 + t);
        std::uniform_int_distribution<int> dim(2, 4);
        HilbertSpace sp({dim(rng), dim(rng)}, {"A", "C"});
        DensityOperator rho = (t % 2 == 0)
                                  ? projector(random_pure_state(sp, rng))
                                  : random_mixed_state(sp, rng);
        cfg.seed = splitmix64(opts.seed ^ (t + 1));
        const InequalityCheck chk = verify_inequality(rho, cfg);
        if (!chk.holds) ++failures;
        min_slack = std::min(min_slack, chk.slack);
    }
    std::ostringstream ss;
    ss << failures << " violations over " << opts.random_states
       << " states, min slack " << min_slack;
    return {"mutual-entropy-bounds-info", failures == 0, ss.str()};
}

CheckResult check_pointer_optimality(const ValidationOptions& opts) {
    SearchConfig cfg;
    cfg.restarts = 2;
    cfg.max_iters = 40;
    double worst = -1e300;
    for (int t = 0; t < 8; ++t) {
        const int K = 2 + t % 2;
        const int M = 1 + t % 3;
        const auto model = sample_model(opts, K, M, 9000 + t);
        const BranchState red = reduce(apply_measurement(model));
        cfg.seed = splitmix64(opts.seed ^ (7777 + t));
        const auto searched = accessible_mutual_information(
            red, Strategy::projective_search, cfg);
        worst = std::max(worst, searched.accessible_info -
                                    pointer_mutual_information(red));
    }
    std::ostringstream ss;
    ss << "max (search - pointer) = " << worst;
    return {"pointer-povm-optimality", worst <= 1e-6, ss.str()};
}

CheckResult check_decoherence_scaling(const ValidationOptions& opts) {
    // Ensemble mean of |sum_s p_s e^{i dphase}| should track sqrt(pi/(4M)).
    bool pass = true;
    std::ostringstream ss;
    for (int M : {100, 1000}) {
        double mean = 0.0;
        for (int d = 0; d < opts.decoherence_draws; ++d) {
            PointerMeasurementModel m = random_model(2, M, opts.seed, 40000 + d);
            if (opts.corrupt_phases)
                m = m.with_theta(corrupted_phases(2, M));
            Cplx f = 0.0;
            for (int s = 0; s < M; ++s)
                f += m.p()[s] * std::exp(Cplx(0.0, m.phase(0, s) - m.phase(1, s)));
            mean += std::abs(f);
        }
        mean /= opts.decoherence_draws;
        const double ref = std::sqrt(std::numbers::pi / (4.0 * M));
        const bool ok = mean > 0.5 * ref && mean < 1.5 * ref;
        pass = pass && ok;
        ss << "M=" << M << " mean " << mean << " ref " << ref << "; ";
    }
    return {"decoherence-phase-scaling", pass, ss.str()};
}

}  // namespace

std::vector<CheckResult> run_validation_suite(const ValidationOptions& opts) {
    return {check_dense_vs_structured(opts), check_reduction_identity(opts),
            check_inequality(opts), check_pointer_optimality(opts),
            check_decoherence_scaling(opts)};
}

bool all_passed(const std::vector<CheckResult>& results) {
    for (const auto& r : results)
        if (!r.pass) return false;
    return true;
}

}  // namespace qlab
