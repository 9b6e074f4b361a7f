#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "qlab/linalg.hpp"

namespace qlab {

// Largest total dimension the dense (oracle) path will materialize.
constexpr int kDenseLimit = 4096;

// Object with K outcome states coupled to a pointer device whose K+1
// macroscopic sectors (sector 0 = pre-measurement) each hold M orthonormal
// microstates. Branch s carries a weight p_s and a phase theta0_i +
// theta(i,s) on outcome i. Device basis index: sector*M + s; full basis
// index: object*device_dim + device (object-major).
class PointerMeasurementModel {
public:
    PointerMeasurementModel(Vec c, RVec theta0, RVec p, Eigen::MatrixXd theta);

    // Convenience: M = 1, single microstate with weight 1 and phases theta0.
    static PointerMeasurementModel single(Vec c, RVec theta0);

    int K() const { return static_cast<int>(c_.size()); }
    int M() const { return static_cast<int>(p_.size()); }
    int object_dim() const { return K(); }
    int device_dim() const { return (K() + 1) * M(); }
    int total_dim() const { return K() * device_dim(); }

    const Vec& c() const { return c_; }
    const RVec& theta0() const { return theta0_; }
    const RVec& p() const { return p_; }
    const Eigen::MatrixXd& theta() const { return theta_; }
    double phase(int i, int s) const { return theta0_[i] + theta_(i, s); }

    RVec outcome_probs() const;  // |c_i|^2

    HilbertSpace full_space() const;
    int device_index(int sector, int s) const { return sector * M() + s; }
    int full_index(int i, int sector, int s) const {
        return i * device_dim() + device_index(sector, s);
    }

    PointerMeasurementModel with_theta(Eigen::MatrixXd theta) const;

    // Fresh i.i.d. uniform [0, 2pi) phase table from a seeded stream.
    static Eigen::MatrixXd random_phases(int K, int M, std::uint64_t seed,
                                         std::uint64_t stream = 0);

private:
    Vec c_;
    RVec theta0_;
    RVec p_;
    Eigen::MatrixXd theta_;
};

// Hermitian K x K matrix of macroscopic matrix elements a_{i,j}; realized
// on the full space with elements independent of the microstate index.
class MacroscopicObservable {
public:
    explicit MacroscopicObservable(Mat a);
    static MacroscopicObservable sigma_x_pattern(int K);  // a_01 = a_10 = 1
    static MacroscopicObservable diagonal(const RVec& d);

    int K() const { return static_cast<int>(a_.rows()); }
    const Mat& a() const { return a_; }

private:
    Mat a_;
};

enum class BranchKind { premeasurement, exact, reduced };

// Structured stand-in for the pre-measurement, coherent post-measurement
// and branch-diagonal reduced operators; entropies and expectations come
// from closed forms so M can be large.
struct BranchState {
    BranchKind kind;
    PointerMeasurementModel model;
};

DensityOperator premeasurement_pure(const Vec& c);
DensityOperator postmeasurement_pure(const Vec& c, const RVec& theta0);

BranchState premeasurement_state(const PointerMeasurementModel& model);
BranchState apply_measurement(const PointerMeasurementModel& model);
BranchState reduce(const BranchState& state);

// Closed-form spectral quantities.
double entropy(const BranchState& state, double base = 2.0);
double object_entropy(const BranchState& state, double base = 2.0);
double device_entropy(const BranchState& state, double base = 2.0);
double mutual_entropy(const BranchState& state, double base = 2.0);

double expectation(const BranchState& state, const MacroscopicObservable& A);
double decoherence_error(const PointerMeasurementModel& model,
                         const MacroscopicObservable& A);

// Dense oracle bridge; throws past kDenseLimit.
DensityOperator to_dense(const BranchState& state);
Mat to_dense_observable(const MacroscopicObservable& A,
                        const PointerMeasurementModel& model);

}  // namespace qlab
