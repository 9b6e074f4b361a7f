#include "qlab/measurement.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "qlab/rng.hpp"

namespace qlab {

namespace {

void check_normalized(const Vec& c, double tol) {
    if (std::abs(c.squaredNorm() - 1.0) > tol)
        throw std::invalid_argument("amplitudes not normalized");
}

HilbertSpace model_space(int object_dim, int device_dim) {
    return HilbertSpace({object_dim, device_dim}, {"object", "device"});
}

}  // namespace

PointerMeasurementModel::PointerMeasurementModel(Vec c, RVec theta0, RVec p,
                                                 Eigen::MatrixXd theta)
    : c_(std::move(c)), theta0_(std::move(theta0)), p_(std::move(p)),
      theta_(std::move(theta)) {
    const int K = static_cast<int>(c_.size());
    const int M = static_cast<int>(p_.size());
    if (K < 1 || M < 1)
        throw std::invalid_argument("PointerMeasurementModel: K and M must be >= 1");
    if (theta0_.size() != K || theta_.rows() != K || theta_.cols() != M)
        throw std::invalid_argument("PointerMeasurementModel: phase table shape mismatch");
    check_normalized(c_, kNormTol);
    double sum = 0.0;
    for (int s = 0; s < M; ++s) {
        if (p_[s] < 0.0)
            throw std::invalid_argument("PointerMeasurementModel: negative weight");
        sum += p_[s];
    }
    if (std::abs(sum - 1.0) > kNormTol)
        throw std::invalid_argument("PointerMeasurementModel: weights do not sum to 1");
}

PointerMeasurementModel PointerMeasurementModel::single(Vec c, RVec theta0) {
    const int K = static_cast<int>(c.size());
    RVec p = RVec::Ones(1);
    return PointerMeasurementModel(std::move(c), std::move(theta0), std::move(p),
                                   Eigen::MatrixXd::Zero(K, 1));
}

RVec PointerMeasurementModel::outcome_probs() const {
    return c_.cwiseAbs2();
}

HilbertSpace PointerMeasurementModel::full_space() const {
    return model_space(object_dim(), device_dim());
}

PointerMeasurementModel PointerMeasurementModel::with_theta(
    Eigen::MatrixXd theta) const {
    return PointerMeasurementModel(c_, theta0_, p_, std::move(theta));
}

Eigen::MatrixXd PointerMeasurementModel::random_phases(int K, int M,
                                                       std::uint64_t seed,
                                                       std::uint64_t stream) {
    auto rng = substream(seed, stream);
    std::uniform_real_distribution<double> u(0.0, 2.0 * std::numbers::pi);
    Eigen::MatrixXd theta(K, M);
    for (int i = 0; i < K; ++i)
        for (int s = 0; s < M; ++s) theta(i, s) = u(rng);
    return theta;
}

MacroscopicObservable::MacroscopicObservable(Mat a) : a_(std::move(a)) {
    if (a_.rows() != a_.cols())
        throw std::invalid_argument("MacroscopicObservable: not square");
    if ((a_ - a_.adjoint()).cwiseAbs().maxCoeff() > 1e-12)
        throw std::invalid_argument("MacroscopicObservable: not Hermitian");
}

MacroscopicObservable MacroscopicObservable::sigma_x_pattern(int K) {
    if (K < 2) throw std::invalid_argument("sigma_x_pattern: needs K >= 2");
    Mat a = Mat::Zero(K, K);
    a(0, 1) = a(1, 0) = 1.0;
    return MacroscopicObservable(std::move(a));
}

MacroscopicObservable MacroscopicObservable::diagonal(const RVec& d) {
    return MacroscopicObservable(d.cast<Cplx>().asDiagonal().toDenseMatrix());
}

DensityOperator premeasurement_pure(const Vec& c) {
    check_normalized(c, 1e-6);
    const int K = static_cast<int>(c.size());
    const int dev = K + 1;  // M = 1
    Vec psi = Vec::Zero(K * dev);
    for (int i = 0; i < K; ++i) psi[i * dev + 0] = c[i];  // device in |alpha_0>
    psi /= psi.norm();
    return projector(PureState(model_space(K, dev), std::move(psi)));
}

DensityOperator postmeasurement_pure(const Vec& c, const RVec& theta0) {
    check_normalized(c, 1e-6);
    const int K = static_cast<int>(c.size());
    if (theta0.size() != K)
        throw std::invalid_argument("postmeasurement_pure: theta0 length mismatch");
    const int dev = K + 1;
    Vec psi = Vec::Zero(K * dev);
    for (int i = 0; i < K; ++i)
        psi[i * dev + (i + 1)] = c[i] * std::exp(Cplx(0.0, theta0[i]));
    psi /= psi.norm();
    return projector(PureState(model_space(K, dev), std::move(psi)));
}

BranchState premeasurement_state(const PointerMeasurementModel& model) {
    return {BranchKind::premeasurement, model};
}

BranchState apply_measurement(const PointerMeasurementModel& model) {
    return {BranchKind::exact, model};
}

BranchState reduce(const BranchState& state) {
    if (state.kind == BranchKind::premeasurement)
        throw std::invalid_argument("reduce: expects a post-measurement state");
    return {BranchKind::reduced, state.model};
}

double entropy(const BranchState& state, double base) {
    const auto& m = state.model;
    const double hp = shannon_entropy(m.p(), base);
    if (state.kind == BranchKind::reduced)
        return shannon_entropy(m.outcome_probs(), base) + hp;
    return hp;  // branches over s are orthonormal pure states
}

double object_entropy(const BranchState& state, double base) {
    if (state.kind == BranchKind::premeasurement) return 0.0;
    return shannon_entropy(state.model.outcome_probs(), base);
}

double device_entropy(const BranchState& state, double base) {
    const auto& m = state.model;
    if (state.kind == BranchKind::premeasurement)
        return shannon_entropy(m.p(), base);
    return shannon_entropy(m.outcome_probs(), base) + shannon_entropy(m.p(), base);
}

double mutual_entropy(const BranchState& state, double base) {
    switch (state.kind) {
        case BranchKind::premeasurement: return 0.0;
        case BranchKind::exact:
            return 2.0 * shannon_entropy(state.model.outcome_probs(), base);
        case BranchKind::reduced:
            return shannon_entropy(state.model.outcome_probs(), base);
    }
    throw std::logic_error("mutual_entropy: bad kind");
}

double expectation(const BranchState& state, const MacroscopicObservable& A) {
    const auto& m = state.model;
    if (A.K() != m.K())
        throw std::invalid_argument("expectation: observable dimension mismatch");
    if (state.kind == BranchKind::premeasurement)
        return 0.0;  // sector 0 is annihilated by the observable
    const RVec probs = m.outcome_probs();
    if (state.kind == BranchKind::reduced) {
        double v = 0.0;
        for (int i = 0; i < m.K(); ++i) v += probs[i] * A.a()(i, i).real();
        return v;
    }
    Cplx v = 0.0;
    for (int i = 0; i < m.K(); ++i) {
        for (int j = 0; j < m.K(); ++j) {
            Cplx f = 0.0;
            for (int s = 0; s < m.M(); ++s)
                f += m.p()[s] *
                     std::exp(Cplx(0.0, m.phase(i, s) - m.phase(j, s)));
            v += m.c()[i] * std::conj(m.c()[j]) * A.a()(i, j) * f;
        }
    }
    return v.real();
}

double decoherence_error(const PointerMeasurementModel& model,
                         const MacroscopicObservable& A) {
    const BranchState exact = apply_measurement(model);
    return std::abs(expectation(exact, A) - expectation(reduce(exact), A));
}

DensityOperator to_dense(const BranchState& state) {
    const auto& m = state.model;
    if (m.total_dim() > kDenseLimit)
        throw std::invalid_argument(
            "to_dense: K*(K+1)*M = " + std::to_string(m.total_dim()) +
            " exceeds the dense limit " + std::to_string(kDenseLimit));
    const int d = m.total_dim();
    Mat rho = Mat::Zero(d, d);
    switch (state.kind) {
        case BranchKind::premeasurement:
            for (int s = 0; s < m.M(); ++s) {
                Vec chi = Vec::Zero(d);
                for (int i = 0; i < m.K(); ++i)
                    chi[m.full_index(i, 0, s)] = m.c()[i];
                rho += m.p()[s] * (chi * chi.adjoint());
            }
            break;
        case BranchKind::exact:
            for (int s = 0; s < m.M(); ++s) {
                Vec chi = Vec::Zero(d);
                for (int i = 0; i < m.K(); ++i)
                    chi[m.full_index(i, i + 1, s)] =
                        m.c()[i] * std::exp(Cplx(0.0, m.phase(i, s)));
                rho += m.p()[s] * (chi * chi.adjoint());
            }
            break;
        case BranchKind::reduced:
            for (int s = 0; s < m.M(); ++s)
                for (int i = 0; i < m.K(); ++i) {
                    const int k = m.full_index(i, i + 1, s);
                    rho(k, k) += m.p()[s] * std::norm(m.c()[i]);
                }
            break;
    }
    return DensityOperator(m.full_space(), std::move(rho));
}

Mat to_dense_observable(const MacroscopicObservable& A,
                        const PointerMeasurementModel& model) {
    if (A.K() != model.K())
        throw std::invalid_argument("to_dense_observable: dimension mismatch");
    const int d = model.total_dim();
    Mat op = Mat::Zero(d, d);
    for (int i = 0; i < model.K(); ++i)
        for (int j = 0; j < model.K(); ++j)
            for (int s = 0; s < model.M(); ++s)
                op(model.full_index(i, i + 1, s), model.full_index(j, j + 1, s)) =
                    A.a()(i, j);
    return op;
}

}  // namespace qlab
