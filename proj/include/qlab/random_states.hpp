#pragma once

#include <random>

#include "qlab/linalg.hpp"

namespace qlab {

inline Vec random_unit_vector(int d, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Vec v(d);
    for (int i = 0; i < d; ++i) v[i] = Cplx(gauss(rng), gauss(rng));
    return v / v.norm();
}

inline PureState random_pure_state(const HilbertSpace& sp, std::mt19937_64& rng) {
    return PureState(sp, random_unit_vector(sp.total_dim(), rng));
}

// Full-rank Wishart state G G^dag / tr.
inline DensityOperator random_mixed_state(const HilbertSpace& sp,
                                          std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    const int d = sp.total_dim();
    Mat g(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) g(i, j) = Cplx(gauss(rng), gauss(rng));
    Mat w = g * g.adjoint();
    w /= w.trace().real();
    w = 0.5 * (w + w.adjoint().eval());
    return DensityOperator(sp, std::move(w));
}

}  // namespace qlab
