#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "qlab/infotheory.hpp"
#include "qlab/linalg.hpp"
#include "qlab/measurement.hpp"

namespace qlab {

// Branch energies E_{i,s} in radians per unit time (hbar = 1); the phase
// table at time t is theta_{i,s} = E_{i,s} * t mod 2pi.
class EnergyModel {
public:
    EnergyModel(PointerMeasurementModel base, Eigen::MatrixXd energies);

    // Energies i.i.d. uniform on [0, 1) from a seeded stream.
    static EnergyModel random(PointerMeasurementModel base, std::uint64_t seed,
                              std::uint64_t stream = 0);
    // E_{i,s} = n_{i,s} * eps with integer n; common period 2pi/eps.
    static EnergyModel commensurate(PointerMeasurementModel base,
                                    const Eigen::MatrixXi& n, double eps);

    const PointerMeasurementModel& base() const { return base_; }
    const Eigen::MatrixXd& energies() const { return energies_; }

private:
    PointerMeasurementModel base_;
    Eigen::MatrixXd energies_;
};

BranchState evolve(const EnergyModel& model, double t);

// Trace distance between two exact states of the same model that differ
// only in their phase tables. The s-branches live in orthogonal sectors, so
// the distance is sum_s p_s sqrt(1 - |sum_i |c_i|^2 e^{i dtheta_{i,s}}|^2).
double phase_trace_distance(const PointerMeasurementModel& model,
                            const Eigen::MatrixXd& theta_a,
                            const Eigen::MatrixXd& theta_b);

struct RecurrenceScan {
    std::vector<double> times;
    std::vector<double> distances;
    double min_distance = 1.0;
    double argmin_time = 0.0;
};

RecurrenceScan recurrence_scan(const EnergyModel& model,
                               const std::vector<double>& times);

struct NearReturn {
    bool found = false;
    double time = 0.0;
    double distance = 1.0;
};

// Streaming scan over t in (0, horizon] with step dt; stops at the first
// distance below threshold after the state has first moved at least twice
// the threshold away, so the departure from t = 0 is not reported.
NearReturn find_near_return(const EnergyModel& model, double horizon, double dt,
                            double threshold);

struct CounterexampleMargins {
    double entropy_drop = 0.01;  // required S(t1) - S(t2), bits
    double info_rise = 0.01;     // required I(t2) - I(t1), bits
};

struct CounterexampleInstance {
    Vec initial_state;           // 8 amplitudes, qubit order (A, B, C)
    std::uint64_t seed = 0;      // master seed of the search
    long trial = 0;
    int step1 = 0, step2 = 0;    // consecutive steps with t1 < t2
    double s1 = 0.0, s2 = 0.0;   // S(A:C) at t1, t2
    double i1 = 0.0, i2 = 0.0;   // projective-search I(A:C) at t1, t2
};

struct CounterexampleSearchResult {
    std::optional<CounterexampleInstance> instance;
    CounterexampleInstance best_candidate;  // largest min(dS, dI) seen
    long trials_run = 0;
};

// Random 3-qubit pure states evolved by seeded Haar-random two-qubit
// unitaries on random qubit pairs; S and I are taken for the pair (q0, q2)
// with q1 traced out. Deterministic for fixed (seed, trials, margins, cfg).
CounterexampleSearchResult counterexample_search(std::uint64_t seed, long trials,
                                                 const CounterexampleMargins& margins,
                                                 const SearchConfig& cfg,
                                                 int steps_per_trial = 8);

// Seeded Haar-random unitary (QR of a Ginibre matrix with phase fix).
Mat haar_unitary(int d, std::mt19937_64& rng);

}  // namespace qlab
