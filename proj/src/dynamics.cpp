#include "qlab/dynamics.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "qlab/rng.hpp"

namespace qlab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

Eigen::MatrixXd mod_two_pi(Eigen::MatrixXd m) {
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) {
            m(i, j) = std::fmod(m(i, j), kTwoPi);
            if (m(i, j) < 0.0) m(i, j) += kTwoPi;
        }
    return m;
}

}  // namespace

EnergyModel::EnergyModel(PointerMeasurementModel base, Eigen::MatrixXd energies)
    : base_(std::move(base)), energies_(std::move(energies)) {
    if (energies_.rows() != base_.K() || energies_.cols() != base_.M())
        throw std::invalid_argument("EnergyModel: energy table shape mismatch");
    if (!energies_.allFinite())
        throw std::invalid_argument("EnergyModel: non-finite energy");
}

EnergyModel EnergyModel::random(PointerMeasurementModel base, std::uint64_t seed,
                                std::uint64_t stream) {
    auto rng = substream(seed, stream);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Eigen::MatrixXd e(base.K(), base.M());
    for (int i = 0; i < e.rows(); ++i)
        for (int s = 0; s < e.cols(); ++s) e(i, s) = u(rng);
    return EnergyModel(std::move(base), std::move(e));
}

EnergyModel EnergyModel::commensurate(PointerMeasurementModel base,
                                      const Eigen::MatrixXi& n, double eps) {
    return EnergyModel(std::move(base), n.cast<double>() * eps);
}

BranchState evolve(const EnergyModel& model, double t) {
    if (t < 0.0) throw std::invalid_argument("evolve: t must be >= 0");
    return apply_measurement(
        model.base().with_theta(mod_two_pi(model.energies() * t)));
}

double phase_trace_distance(const PointerMeasurementModel& model,
                            const Eigen::MatrixXd& theta_a,
                            const Eigen::MatrixXd& theta_b) {
    RVec probs = model.outcome_probs();
    probs /= probs.sum();
    double dist = 0.0;
    for (int s = 0; s < model.M(); ++s) {
        // 1 - |sum_i q_i e^{i dphi_i}|^2 written as a pairwise sum, which
        // stays accurate when all phases align.
        double one_minus = 0.0;
        for (int i = 0; i < model.K(); ++i)
            for (int j = i + 1; j < model.K(); ++j) {
                const double half =
                    0.5 * ((theta_b(i, s) - theta_a(i, s)) -
                           (theta_b(j, s) - theta_a(j, s)));
                const double sn = std::sin(half);
                one_minus += 4.0 * probs[i] * probs[j] * sn * sn;
            }
        dist += model.p()[s] * std::sqrt(std::min(std::max(one_minus, 0.0), 1.0));
    }
    return dist;
}

RecurrenceScan recurrence_scan(const EnergyModel& model,
                               const std::vector<double>& times) {
    if (model.base().total_dim() > kDenseLimit)
        throw std::invalid_argument("recurrence_scan: model exceeds the dense limit");
    const Eigen::MatrixXd theta0 = model.base().theta();
    RecurrenceScan scan;
    scan.times = times;
    scan.distances.reserve(times.size());
    for (double t : times) {
        const double d = phase_trace_distance(
            model.base(), theta0, theta0 + model.energies() * t);
        scan.distances.push_back(d);
        if (d < scan.min_distance) {
            scan.min_distance = d;
            scan.argmin_time = t;
        }
    }
    return scan;
}

NearReturn find_near_return(const EnergyModel& model, double horizon, double dt,
                            double threshold) {
    if (dt <= 0.0 || horizon <= dt)
        throw std::invalid_argument("find_near_return: bad horizon/dt");
    const auto& base = model.base();
    const int K = base.K(), M = base.M();
    const RVec probs = base.outcome_probs();

    // Incremental phasors z_{i,s} = e^{i E_{i,s} t}, refreshed periodically
    // to keep rounding drift below the threshold scale.
    std::vector<Cplx> z(K * M), step(K * M);
    for (int i = 0; i < K; ++i)
        for (int s = 0; s < M; ++s)
            step[i * M + s] = std::polar(1.0, model.energies()(i, s) * dt);
    auto refresh = [&](double t) {
        for (int i = 0; i < K; ++i)
            for (int s = 0; s < M; ++s)
                z[i * M + s] = std::polar(1.0, model.energies()(i, s) * t);
    };
    refresh(0.0);

    const long nsteps = static_cast<long>(horizon / dt);
    NearReturn best;
    // The state starts at distance 0 and climbs away; a revival only counts
    // after the scan has seen the distance clear twice the threshold.
    bool armed = false;
    for (long k = 1; k <= nsteps; ++k) {
        if (k % 8192 == 0)
            refresh(k * dt);
        double dist = 0.0;
        for (int s = 0; s < M; ++s) {
            Cplx overlap = 0.0;
            for (int i = 0; i < K; ++i) {
                Cplx& zi = z[i * M + s];
                if (k % 8192 != 0) zi *= step[i * M + s];
                overlap += probs[i] * zi;
            }
            dist += base.p()[s] *
                    std::sqrt(std::max(1.0 - std::norm(overlap), 0.0));
        }
        if (!armed) {
            armed = dist >= 2.0 * threshold;
            continue;
        }
        if (dist < best.distance) {
            best.distance = dist;
            best.time = k * dt;
        }
        if (dist < threshold) {
            best.found = true;
            break;
        }
    }
    if (best.time == 0.0) return best;
    // re-evaluate the reported point exactly
    best.distance = phase_trace_distance(
        base, base.theta(), base.theta() + model.energies() * best.time);
    return best;
}

Mat haar_unitary(int d, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Mat g(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) g(i, j) = Cplx(gauss(rng), gauss(rng));
    Eigen::HouseholderQR<Mat> qr(g);
    Mat q = qr.householderQ();
    Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int k = 0; k < d; ++k) {
        const Cplx rk = r(k, k);
        q.col(k) *= (std::abs(rk) > 0.0) ? rk / std::abs(rk) : 1.0;
    }
    return q;
}

namespace {

// Apply a two-qubit unitary on qubits (qa, qb) of a 3-qubit state, qubit 0
// most significant.
void apply_two_qubit(Vec& psi, const Mat& u, int qa, int qb) {
    const int sa = 1 << (2 - qa);
    const int sb = 1 << (2 - qb);
    const int qc = 3 - qa - qb;
    const int sc = 1 << (2 - qc);
    for (int e = 0; e < 2; ++e) {
        const int base = e * sc;
        Eigen::Vector4cd v;
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b) v[a * 2 + b] = psi[base + a * sa + b * sb];
        v = u * v;
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b) psi[base + a * sa + b * sb] = v[a * 2 + b];
    }
}

struct StepMetrics {
    double s = 0.0;
    double i = 0.0;
};

StepMetrics metrics_for(const Vec& psi, std::uint64_t search_seed,
                        const SearchConfig& cfg) {
    HilbertSpace sp({2, 2, 2}, {"q0", "q1", "q2"});
    DensityOperator full(sp, psi * psi.adjoint());
    DensityOperator rho_ac = partial_trace(full, {"q0", "q2"});
    StepMetrics m;
    m.s = mutual_entropy(rho_ac, {"q0"});
    SearchConfig step_cfg = cfg;
    step_cfg.seed = search_seed;
    m.i = accessible_mutual_information(rho_ac, step_cfg).accessible_info;
    return m;
}

}  // namespace

CounterexampleSearchResult counterexample_search(
    std::uint64_t seed, long trials, const CounterexampleMargins& margins,
    const SearchConfig& cfg, int steps_per_trial) {
    if (trials < 1) throw std::invalid_argument("counterexample_search: trials < 1");
    CounterexampleSearchResult result;
    double best_score = -1e300;

    const std::array<std::pair<int, int>, 3> pairs{{{0, 1}, {0, 2}, {1, 2}}};

    for (long trial = 0; trial < trials; ++trial) {
        auto rng = substream(seed, static_cast<std::uint64_t>(trial));
        std::normal_distribution<double> gauss(0.0, 1.0);
        Vec psi(8);
        for (int i = 0; i < 8; ++i) psi[i] = Cplx(gauss(rng), gauss(rng));
        psi /= psi.norm();
        const Vec initial = psi;

        std::vector<StepMetrics> track;
        track.push_back(metrics_for(
            psi, splitmix64(seed ^ (0x5851f42dULL * (trial * 64 + 0))), cfg));
        for (int step = 1; step <= steps_per_trial; ++step) {
            const auto [qa, qb] =
                pairs[std::uniform_int_distribution<int>(0, 2)(rng)];
            const Mat u = haar_unitary(4, rng);
            apply_two_qubit(psi, u, qa, qb);
            track.push_back(metrics_for(
                psi, splitmix64(seed ^ (0x5851f42dULL * (trial * 64 + step))),
                cfg));

            const auto& m1 = track[step - 1];
            const auto& m2 = track[step];
            const double ds = m1.s - m2.s;
            const double di = m2.i - m1.i;
            const double score = std::min(ds - margins.entropy_drop,
                                          di - margins.info_rise);
            const CounterexampleInstance cand{initial, seed, trial, step - 1,
                                              step,    m1.s, m2.s,  m1.i,
                                              m2.i};
            if (score > best_score) {
                best_score = score;
                result.best_candidate = cand;
            }
            if (ds > margins.entropy_drop && di > margins.info_rise) {
                result.instance = cand;
                result.trials_run = trial + 1;
                return result;
            }
        }
        result.trials_run = trial + 1;
    }
    return result;
}

}  // namespace qlab
