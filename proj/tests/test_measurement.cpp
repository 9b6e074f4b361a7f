#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "qlab/infotheory.hpp"
#include "qlab/measurement.hpp"
#include "qlab/sampling.hpp"

using namespace qlab;

namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

Vec amps2(double a, double b) {
    Vec c(2);
    c << a, b;
    return c;
}

}  // namespace

TEST_CASE("premeasurement_pure basics") {
    const auto rho = premeasurement_pure(amps2(1.0, 0.0));
    // projector onto |psi_0>|alpha_0>: device dim K+1 = 3, index 0
    CHECK(std::abs(rho.matrix()(0, 0) - 1.0) < 1e-12);
    CHECK(purity(rho) == doctest::Approx(1.0).epsilon(1e-10));

    const auto rho2 = premeasurement_pure(amps2(kInvSqrt2, kInvSqrt2));
    CHECK(purity(rho2) == doctest::Approx(1.0).epsilon(1e-10));
    const auto marg = partial_trace(rho2, {"object"});
    Mat expected(2, 2);
    expected << 0.5, 0.5, 0.5, 0.5;
    CHECK((marg.matrix() - expected).cwiseAbs().maxCoeff() < 1e-12);

    CHECK_THROWS_AS((void)premeasurement_pure(amps2(1.0, 1.0)),
                    std::invalid_argument);
}

TEST_CASE("postmeasurement_pure reduces the object for any phases") {
    RVec theta(2);
    theta << 0.4, 5.1;
    const auto rho = postmeasurement_pure(amps2(std::sqrt(0.3), std::sqrt(0.7)),
                                          theta);
    const auto marg = partial_trace(rho, {"object"});
    Mat expected = Mat::Zero(2, 2);
    expected(0, 0) = 0.3;
    expected(1, 1) = 0.7;
    CHECK((marg.matrix() - expected).cwiseAbs().maxCoeff() < 1e-10);

    const auto basis = postmeasurement_pure(amps2(1.0, 0.0), RVec::Zero(2));
    // |psi_0 alpha_1>: full index 0*(K+1) + 1 = 1
    CHECK(std::abs(basis.matrix()(1, 1) - 1.0) < 1e-12);

    auto [lam, v] = eig_hermitian(partial_trace(
        postmeasurement_pure(amps2(kInvSqrt2, kInvSqrt2), RVec::Zero(2)),
        {"object"}));
    CHECK(lam[0] == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(lam[1] == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("premeasurement mixed state") {
    const auto model = random_model(2, 4, 99, 0);
    const auto pre = premeasurement_state(model);
    CHECK(mutual_entropy(pre) == doctest::Approx(0.0));
    CHECK(device_entropy(pre) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(object_entropy(pre) == doctest::Approx(0.0));

    const auto dense = to_dense(pre);
    CHECK(mutual_entropy(dense, {"object"}) ==
          doctest::Approx(0.0).epsilon(1e-9));
    // object marginal is |psi><psi| regardless of p
    const auto marg = partial_trace(dense, {"object"});
    const Mat expected = model.c() * model.c().adjoint();
    CHECK((marg.matrix() - expected).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("M = 1 premeasurement equals the pure construction") {
    const auto model =
        PointerMeasurementModel::single(amps2(std::sqrt(0.3), std::sqrt(0.7)),
                                        RVec::Zero(2));
    const auto dense = to_dense(premeasurement_state(model));
    const auto pure = premeasurement_pure(amps2(std::sqrt(0.3), std::sqrt(0.7)));
    CHECK((dense.matrix() - pure.matrix()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("apply_measurement with one microstate equals the pure state") {
    RVec theta0(2);
    theta0 << 1.1, 2.9;
    const auto model =
        PointerMeasurementModel::single(amps2(kInvSqrt2, kInvSqrt2), theta0);
    const auto dense = to_dense(apply_measurement(model));
    const auto pure = postmeasurement_pure(amps2(kInvSqrt2, kInvSqrt2), theta0);
    CHECK((dense.matrix() - pure.matrix()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("exact-state spectrum is the microstate distribution") {
    const auto model = random_model(2, 3, 5, 1, WeightMode::random);
    const auto dense = to_dense(apply_measurement(model));
    auto [lam, v] = eig_hermitian(dense);
    RVec p = model.p();
    std::sort(p.data(), p.data() + p.size(), std::greater<double>());
    for (int s = 0; s < 3; ++s)
        CHECK(lam[s] == doctest::Approx(p[s]).epsilon(1e-9));
    for (int k = 3; k < lam.size(); ++k) CHECK(std::abs(lam[k]) < 1e-10);
    CHECK(entropy(apply_measurement(model)) ==
          doctest::Approx(von_neumann_entropy(dense)).epsilon(1e-9));
}

TEST_CASE("object marginal of the exact state is phase-free (Theorem 1 form)") {
    for (std::uint64_t k = 0; k < 20; ++k) {
        const int K = 2 + int(k % 4);
        const auto model = random_model(K, 3, 21, k);
        const auto dense = to_dense(apply_measurement(model));
        const auto marg = partial_trace(dense, {"object"});
        const Mat expected =
            model.outcome_probs().cast<Cplx>().asDiagonal().toDenseMatrix();
        CHECK((marg.matrix() - expected).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("reduced state spectrum and entropy") {
    Vec c = amps2(std::sqrt(0.3), std::sqrt(0.7));
    const PointerMeasurementModel model(c, RVec::Zero(2),
                                        RVec::Constant(4, 0.25),
                                        Eigen::MatrixXd::Zero(2, 4));
    const auto red = reduce(apply_measurement(model));
    CHECK(entropy(red) ==
          doctest::Approx(oracle::entropy_bits({0.3, 0.7}) + 2.0).epsilon(1e-9));
    CHECK(entropy(red) == doctest::Approx(2.881291).epsilon(1e-6));

    const auto dense = to_dense(red);
    CHECK(von_neumann_entropy(dense) ==
          doctest::Approx(entropy(red)).epsilon(1e-9));
    // diagonal in the branch basis
    Mat off = dense.matrix();
    off.diagonal().setZero();
    CHECK(off.cwiseAbs().maxCoeff() < 1e-14);

    // idempotent
    const auto red2 = reduce(red);
    CHECK(red2.kind == BranchKind::reduced);
    CHECK((to_dense(red2).matrix() - dense.matrix()).cwiseAbs().maxCoeff() <
          1e-14);
}

TEST_CASE("expectation closed forms") {
    const auto A = MacroscopicObservable::sigma_x_pattern(2);

    // equal phases, M = 1: coherence survives in full
    const auto coherent =
        PointerMeasurementModel::single(amps2(kInvSqrt2, kInvSqrt2),
                                        RVec::Constant(2, 0.7));
    CHECK(expectation(apply_measurement(coherent), A) ==
          doctest::Approx(1.0).epsilon(1e-12));
    CHECK(expectation(reduce(apply_measurement(coherent)), A) ==
          doctest::Approx(0.0));
    CHECK(decoherence_error(coherent, A) == doctest::Approx(1.0).epsilon(1e-12));

    // diagonal observables never see the phases
    RVec d(2);
    d << 0.2, -1.4;
    const auto D = MacroscopicObservable::diagonal(d);
    const auto model = random_model(2, 5, 31, 2);
    CHECK(decoherence_error(model, D) == doctest::Approx(0.0));
    const auto red = reduce(apply_measurement(model));
    const RVec probs = model.outcome_probs();
    CHECK(expectation(red, D) ==
          doctest::Approx(probs[0] * 0.2 - probs[1] * 1.4).epsilon(1e-12));
}

TEST_CASE("dense and closed-form expectations agree") {
    for (std::uint64_t k = 0; k < 10; ++k) {
        const auto model = random_model(3, 4, 77, k);
        const auto A = MacroscopicObservable::sigma_x_pattern(3);
        const auto st = apply_measurement(model);
        const double dense_val =
            (to_dense(st).matrix() * to_dense_observable(A, model))
                .trace()
                .real();
        CHECK(std::abs(dense_val - expectation(st, A)) < 1e-9);
    }
}

TEST_CASE("phase-averaging factor scales like sqrt(pi/4M)") {
    const int draws = 400;
    for (int M : {100, 1000}) {
        double mean = 0.0;
        for (int d = 0; d < draws; ++d) {
            const auto m = random_model(2, M, 123, 1000 + d);
            Cplx f = 0.0;
            for (int s = 0; s < M; ++s)
                f += m.p()[s] *
                     std::exp(Cplx(0.0, m.phase(0, s) - m.phase(1, s)));
            mean += std::abs(f);
        }
        mean /= draws;
        const double ref = std::sqrt(std::numbers::pi / (4.0 * M));
        CHECK(mean > 0.5 * ref);
        CHECK(mean < 1.5 * ref);
    }
}

TEST_CASE("to_dense bookkeeping and limits") {
    const auto model = random_model(2, 2, 1, 0);
    const auto dense = to_dense(apply_measurement(model));
    CHECK(dense.dim() == 12);  // K(K+1)M = 2*3*2
    CHECK(std::abs(dense.matrix().trace().real() - 1.0) < 1e-12);

    const auto big = random_model(4, 300, 1, 1);  // 4*5*300 = 6000
    CHECK_THROWS_WITH_AS((void)to_dense(apply_measurement(big)),
                         doctest::Contains("4096"), std::invalid_argument);
}

TEST_CASE("closed-form entropies match the dense path on the small grid") {
    for (int K = 1; K <= 3; ++K)
        for (int M = 1; M <= 4; ++M) {
            const auto model = random_model(K, M, 55, K * 10 + M,
                                            WeightMode::random);
            for (const BranchState& st :
                 {premeasurement_state(model), apply_measurement(model),
                  reduce(apply_measurement(model))}) {
                CHECK(std::abs(von_neumann_entropy(to_dense(st)) -
                               entropy(st)) < 1e-9);
            }
        }
}

TEST_CASE("K = 1 degenerate model is fully uncorrelated") {
    Vec c(1);
    c << 1.0;
    const PointerMeasurementModel model(c, RVec::Zero(1),
                                        RVec::Constant(3, 1.0 / 3.0),
                                        Eigen::MatrixXd::Zero(1, 3));
    CHECK(mutual_entropy(apply_measurement(model)) == doctest::Approx(0.0));
    CHECK(mutual_entropy(reduce(apply_measurement(model))) ==
          doctest::Approx(0.0));
}
