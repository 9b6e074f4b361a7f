#pragma once

#include <cstdint>

#include "qlab/measurement.hpp"
#include "qlab/random_states.hpp"
#include "qlab/rng.hpp"

namespace qlab {

enum class WeightMode { uniform, random };

// Seeded pointer model: Haar-random amplitudes, zero pre-set phases,
// uniform or Dirichlet(1,..,1) microstate weights, i.i.d. uniform phases.
inline PointerMeasurementModel random_model(int K, int M, std::uint64_t seed,
                                            std::uint64_t stream,
                                            WeightMode mode = WeightMode::uniform) {
    auto rng = substream(seed, stream);
    Vec c = random_unit_vector(K, rng);
    RVec p(M);
    if (mode == WeightMode::uniform) {
        p.setConstant(1.0 / M);
    } else {
        std::exponential_distribution<double> expo(1.0);
        double sum = 0.0;
        for (int s = 0; s < M; ++s) {
            p[s] = expo(rng);
            sum += p[s];
        }
        p /= sum;
    }
    Eigen::MatrixXd theta =
        PointerMeasurementModel::random_phases(K, M, seed, splitmix64(stream) + 1);
    return PointerMeasurementModel(std::move(c), RVec::Zero(K), std::move(p),
                                   std::move(theta));
}

}  // namespace qlab
