#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "qlab/linalg.hpp"
#include "qlab/random_states.hpp"
#include "qlab/rng.hpp"

using namespace qlab;

namespace {

const HilbertSpace kQubit({2}, {"q"});
const HilbertSpace kTwoQubits({2, 2}, {"a", "c"});

PureState ket(const HilbertSpace& sp, std::initializer_list<Cplx> amps) {
    Vec v(static_cast<long>(amps.size()));
    long i = 0;
    for (Cplx a : amps) v[i++] = a;
    return PureState(sp, v);
}

}  // namespace

TEST_CASE("tensor of basis kets") {
    const auto a = ket(kQubit, {1.0, 0.0});
    const auto b = ket(HilbertSpace({2}, {"r"}), {1.0, 0.0});
    const auto ab = tensor(a, b);
    CHECK(ab.space().total_dim() == 4);
    CHECK(std::abs(ab.amplitudes()[0] - 1.0) < 1e-15);
    CHECK(ab.amplitudes().tail(3).norm() < 1e-15);
}

TEST_CASE("tensor expansion (|0>+|1>)/sqrt2 x |1>") {
    const double r = 1.0 / std::sqrt(2.0);
    const auto a = ket(kQubit, {r, r});
    const auto b = ket(HilbertSpace({2}, {"r"}), {0.0, 1.0});
    const auto ab = tensor(a, b);
    CHECK(std::abs(ab.amplitudes()[0]) < 1e-15);
    CHECK(std::abs(ab.amplitudes()[1] - r) < 1e-15);
    CHECK(std::abs(ab.amplitudes()[2]) < 1e-15);
    CHECK(std::abs(ab.amplitudes()[3] - r) < 1e-15);
}

TEST_CASE("product-state marginal returns the factor") {
    auto rng = substream(42, 0);
    const auto rho_a = random_mixed_state(HilbertSpace({3}, {"a"}), rng);
    const auto rho_c = random_mixed_state(HilbertSpace({2}, {"c"}), rng);
    const auto prod = tensor(rho_a, rho_c);
    const auto back_c = partial_trace(prod, {"c"});
    CHECK((back_c.matrix() - rho_c.matrix()).cwiseAbs().maxCoeff() < 1e-10);
    const auto back_a = partial_trace(prod, {"a"});
    CHECK((back_a.matrix() - rho_a.matrix()).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("Bell state marginals are maximally mixed") {
    const double r = 1.0 / std::sqrt(2.0);
    const auto bell = ket(kTwoQubits, {r, 0.0, 0.0, r});
    for (const char* keep : {"a", "c"}) {
        const auto marg = partial_trace(projector(bell), {keep});
        CHECK((marg.matrix() - 0.5 * Mat::Identity(2, 2)).cwiseAbs().maxCoeff() <
              1e-12);
    }
}

TEST_CASE("partial trace rejects unknown labels") {
    const auto bell =
        ket(kTwoQubits, {1.0 / std::sqrt(2.0), 0.0, 0.0, 1.0 / std::sqrt(2.0)});
    CHECK_THROWS_AS((void)partial_trace(projector(bell), {"nope"}),
                    std::invalid_argument);
}

TEST_CASE("eig_hermitian on simple matrices") {
    Mat d(2, 2);
    d << 0.7, 0.0, 0.0, 0.3;
    auto [lam, v] = eig_hermitian(DensityOperator(kQubit, d));
    CHECK(lam[0] == doctest::Approx(0.7).epsilon(1e-12));
    CHECK(lam[1] == doctest::Approx(0.3).epsilon(1e-12));

    Mat px(2, 2);  // (I + sigma_x)/2, rank-1 projector
    px << 0.5, 0.5, 0.5, 0.5;
    auto [lam2, v2] = eig_hermitian(DensityOperator(kQubit, px));
    CHECK(lam2[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(lam2[1]) < 1e-12);
}

TEST_CASE("eig_hermitian matches characteristic-polynomial roots") {
    const HilbertSpace sp({4}, {"x"});
    for (std::uint64_t k = 0; k < 20; ++k) {
        auto rng = substream(7, k);
        const auto rho = random_mixed_state(sp, rng);
        auto [lam, v] = eig_hermitian(rho);
        CHECK(std::abs(lam.sum() - 1.0) < 1e-10);
        const auto roots = oracle::hermitian_eigs_by_charpoly(rho.matrix());
        for (int i = 0; i < 4; ++i)
            CHECK(lam[i] == doctest::Approx(roots[i]).epsilon(1e-8));
        // reconstruction
        const Mat rec =
            v * lam.cast<Cplx>().asDiagonal().toDenseMatrix() * v.adjoint();
        CHECK((rec - rho.matrix()).cwiseAbs().maxCoeff() < 1e-9);
    }
}

TEST_CASE("von Neumann entropy values") {
    const auto pure = projector(ket(kQubit, {1.0, 0.0}));
    CHECK(von_neumann_entropy(pure) == doctest::Approx(0.0).epsilon(1e-12));

    const DensityOperator mixed(kQubit, 0.5 * Mat::Identity(2, 2));
    CHECK(von_neumann_entropy(mixed) == doctest::Approx(1.0).epsilon(1e-12));

    Mat d(2, 2);
    d << 0.3, 0.0, 0.0, 0.7;
    const double expected = oracle::entropy_bits({0.3, 0.7});
    CHECK(expected == doctest::Approx(0.881291).epsilon(1e-6));
    CHECK(von_neumann_entropy(DensityOperator(kQubit, d)) ==
          doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("shannon entropy agrees with diagonal operators") {
    using P = std::vector<double>;
    CHECK(shannon_entropy(P{1.0, 0.0}) == doctest::Approx(0.0));
    CHECK(shannon_entropy(P{0.25, 0.25, 0.25, 0.25}) == doctest::Approx(2.0));
    CHECK(shannon_entropy(P{0.3, 0.7}) ==
          doctest::Approx(oracle::entropy_bits({0.3, 0.7})).epsilon(1e-12));
    CHECK_THROWS_AS((void)shannon_entropy(P{0.3, 0.3}), std::invalid_argument);
}

TEST_CASE("trace distance") {
    Mat a(2, 2), b(2, 2);
    a << 0.7, 0.0, 0.0, 0.3;
    b << 0.5, 0.0, 0.0, 0.5;
    const DensityOperator rho(kQubit, a), sigma(kQubit, b);
    CHECK(trace_distance(rho, rho) == doctest::Approx(0.0));
    CHECK(trace_distance(rho, sigma) == doctest::Approx(0.2).epsilon(1e-12));

    const auto p0 = projector(ket(kQubit, {1.0, 0.0}));
    const auto p1 = projector(ket(kQubit, {0.0, 1.0}));
    CHECK(trace_distance(p0, p1) == doctest::Approx(1.0).epsilon(1e-12));

    const DensityOperator other(HilbertSpace({2}, {"z"}), a);
    CHECK_THROWS_AS((void)trace_distance(rho, other), std::invalid_argument);
}

TEST_CASE("Schmidt symmetry: equal marginal entropies of pure states") {
    for (std::uint64_t k = 0; k < 25; ++k) {
        auto rng = substream(11, k);
        const HilbertSpace sp({2 + int(k % 3), 2 + int((k / 3) % 3)},
                              {"a", "c"});
        const auto rho = projector(random_pure_state(sp, rng));
        const double sa = von_neumann_entropy(partial_trace(rho, {"a"}));
        const double sc = von_neumann_entropy(partial_trace(rho, {"c"}));
        CHECK(std::abs(sa - sc) < 1e-9);
    }
}

TEST_CASE("entropy is unitarily invariant") {
    const HilbertSpace sp({4}, {"x"});
    for (std::uint64_t k = 0; k < 10; ++k) {
        auto rng = substream(13, k);
        const auto rho = random_mixed_state(sp, rng);
        // random unitary from the eigenvectors of a random Hermitian
        const auto h = random_mixed_state(sp, rng);
        Eigen::SelfAdjointEigenSolver<Mat> es(h.matrix());
        const Mat u = es.eigenvectors();
        const DensityOperator rot(sp, u * rho.matrix() * u.adjoint());
        CHECK(std::abs(von_neumann_entropy(rot) - von_neumann_entropy(rho)) <
              1e-9);
    }
}

TEST_CASE("tracing everything but one factor then the rest gives trace 1") {
    auto rng = substream(17, 0);
    const HilbertSpace sp({2, 3, 2}, {"a", "b", "c"});
    const auto rho = random_mixed_state(sp, rng);
    const auto one = partial_trace(rho, {"b"});
    CHECK(std::abs(one.matrix().trace().real() - 1.0) < 1e-10);
}
