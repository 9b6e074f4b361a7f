#include "qlab/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace qlab {

namespace {

constexpr int kPsdCheckCutoff = 512;  // skip the O(d^3) PSD check above this

double entropy_from_eigs(const RVec& lam, double base) {
    const double scale = 1.0 / std::log(base);
    double s = 0.0;
    for (int i = 0; i < lam.size(); ++i) {
        double x = lam[i];
        if (x < -kPsdTol)
            throw std::invalid_argument("entropy: eigenvalue below -1e-10");
        if (x < kEigZero) continue;  // 0*log 0 := 0
        s -= x * std::log(x) * scale;
    }
    return std::max(s, 0.0);
}

}  // namespace

HilbertSpace::HilbertSpace(std::vector<int> dims, std::vector<std::string> labels)
    : dims_(std::move(dims)), labels_(std::move(labels)) {
    if (dims_.empty() || dims_.size() != labels_.size())
        throw std::invalid_argument("HilbertSpace: dims/labels mismatch");
    for (int d : dims_) {
        if (d < 1) throw std::invalid_argument("HilbertSpace: dimension < 1");
        total_ *= d;
    }
    for (size_t i = 0; i < labels_.size(); ++i)
        for (size_t j = i + 1; j < labels_.size(); ++j)
            if (labels_[i] == labels_[j])
                throw std::invalid_argument("HilbertSpace: duplicate label " + labels_[i]);
}

int HilbertSpace::index_of(const std::string& label) const {
    for (size_t k = 0; k < labels_.size(); ++k)
        if (labels_[k] == label) return static_cast<int>(k);
    throw std::invalid_argument("HilbertSpace: unknown label " + label);
}

PureState::PureState(HilbertSpace space, Vec amplitudes)
    : space_(std::move(space)), amps_(std::move(amplitudes)) {
    if (amps_.size() != space_.total_dim())
        throw std::invalid_argument("PureState: amplitude length mismatch");
    if (std::abs(amps_.squaredNorm() - 1.0) > kNormTol)
        throw std::invalid_argument("PureState: not normalized");
}

DensityOperator::DensityOperator(HilbertSpace space, Mat matrix)
    : space_(std::move(space)), mat_(std::move(matrix)) {
    const int d = space_.total_dim();
    if (mat_.rows() != d || mat_.cols() != d)
        throw std::invalid_argument("DensityOperator: matrix size mismatch");
    if ((mat_ - mat_.adjoint()).cwiseAbs().maxCoeff() > kHermTol)
        throw std::invalid_argument("DensityOperator: not Hermitian within 1e-10");
    if (std::abs(mat_.trace().real() - 1.0) > kTraceTol ||
        std::abs(mat_.trace().imag()) > kTraceTol)
        throw std::invalid_argument("DensityOperator: trace != 1 within 1e-10");
    if (d <= kPsdCheckCutoff) {
        Eigen::SelfAdjointEigenSolver<Mat> es(mat_, Eigen::EigenvaluesOnly);
        if (es.eigenvalues().minCoeff() < -kPsdTol)
            throw std::invalid_argument("DensityOperator: negative eigenvalue beyond -1e-10");
    }
}

DensityOperator projector(const PureState& psi) {
    return DensityOperator(psi.space(),
                           psi.amplitudes() * psi.amplitudes().adjoint());
}

namespace {

HilbertSpace concat(const HilbertSpace& a, const HilbertSpace& b) {
    std::vector<int> dims = a.dims();
    dims.insert(dims.end(), b.dims().begin(), b.dims().end());
    std::vector<std::string> labels = a.labels();
    labels.insert(labels.end(), b.labels().begin(), b.labels().end());
    return HilbertSpace(std::move(dims), std::move(labels));
}

}  // namespace

PureState tensor(const PureState& a, const PureState& b) {
    const Vec& u = a.amplitudes();
    const Vec& v = b.amplitudes();
    Vec w(u.size() * v.size());
    for (int i = 0; i < u.size(); ++i)
        w.segment(i * v.size(), v.size()) = u[i] * v;
    return PureState(concat(a.space(), b.space()), std::move(w));
}

DensityOperator tensor(const DensityOperator& a, const DensityOperator& b) {
    const Mat& A = a.matrix();
    const Mat& B = b.matrix();
    const int db = static_cast<int>(B.rows());
    Mat W(A.rows() * db, A.cols() * db);
    for (int i = 0; i < A.rows(); ++i)
        for (int j = 0; j < A.cols(); ++j)
            W.block(i * db, j * db, db, db) = A(i, j) * B;
    return DensityOperator(concat(a.space(), b.space()), std::move(W));
}

DensityOperator partial_trace(const DensityOperator& rho,
                              const std::vector<std::string>& keep) {
    const HilbertSpace& sp = rho.space();
    const int n = sp.num_factors();
    std::vector<bool> kept(n, false);
    for (const auto& lab : keep) kept[sp.index_of(lab)] = true;

    std::vector<int> keep_dims, disc_dims, keep_idx, disc_idx;
    std::vector<std::string> keep_labels;
    for (int k = 0; k < n; ++k) {
        if (kept[k]) {
            keep_dims.push_back(sp.dim(k));
            keep_labels.push_back(sp.labels()[k]);
            keep_idx.push_back(k);
        } else {
            disc_dims.push_back(sp.dim(k));
            disc_idx.push_back(k);
        }
    }
    if (keep_idx.empty())
        throw std::invalid_argument("partial_trace: must keep at least one factor");

    // Strides of each factor in the composite index (leftmost most significant).
    std::vector<long> stride(n, 1);
    for (int k = n - 2; k >= 0; --k) stride[k] = stride[k + 1] * sp.dim(k + 1);

    const long dk = std::accumulate(keep_dims.begin(), keep_dims.end(), 1L,
                                    std::multiplies<long>());
    const long dd = std::accumulate(disc_dims.begin(), disc_dims.end(), 1L,
                                    std::multiplies<long>());

    auto offset = [&](long multi, const std::vector<int>& idx,
                      const std::vector<int>& dims) {
        long off = 0;
        for (int k = static_cast<int>(idx.size()) - 1; k >= 0; --k) {
            off += (multi % dims[k]) * stride[idx[k]];
            multi /= dims[k];
        }
        return off;
    };

    Mat out = Mat::Zero(dk, dk);
    for (long a = 0; a < dk; ++a) {
        const long ra = offset(a, keep_idx, keep_dims);
        for (long b = 0; b < dk; ++b) {
            const long rb = offset(b, keep_idx, keep_dims);
            Cplx acc = 0.0;
            for (long e = 0; e < dd; ++e) {
                const long re = offset(e, disc_idx, disc_dims);
                acc += rho.matrix()(ra + re, rb + re);
            }
            out(a, b) = acc;
        }
    }
    return DensityOperator(HilbertSpace(keep_dims, keep_labels), std::move(out));
}

std::pair<RVec, Mat> eig_hermitian(const DensityOperator& rho) {
    Eigen::SelfAdjointEigenSolver<Mat> es(rho.matrix());
    if (es.info() != Eigen::Success)
        throw std::runtime_error("eig_hermitian: eigensolver failed");
    const int d = rho.dim();
    RVec lam(d);
    Mat vecs(d, d);
    for (int i = 0; i < d; ++i) {  // Eigen returns ascending; flip
        lam[i] = es.eigenvalues()[d - 1 - i];
        vecs.col(i) = es.eigenvectors().col(d - 1 - i);
    }
    return {std::move(lam), std::move(vecs)};
}

double von_neumann_entropy(const DensityOperator& rho, double base) {
    Eigen::SelfAdjointEigenSolver<Mat> es(rho.matrix(), Eigen::EigenvaluesOnly);
    return entropy_from_eigs(es.eigenvalues(), base);
}

double shannon_entropy(const RVec& p, double base) {
    double sum = 0.0;
    for (int i = 0; i < p.size(); ++i) {
        if (p[i] < -kEigZero)
            throw std::invalid_argument("shannon_entropy: negative probability");
        sum += std::max(p[i], 0.0);
    }
    if (std::abs(sum - 1.0) > 1e-6)
        throw std::invalid_argument("shannon_entropy: probabilities do not sum to 1");
    RVec q = p.cwiseMax(0.0) / sum;
    return entropy_from_eigs(q, base);
}

double shannon_entropy(const std::vector<double>& p, double base) {
    return shannon_entropy(
        Eigen::Map<const RVec>(p.data(), static_cast<long>(p.size())), base);
}

double trace_distance(const DensityOperator& rho, const DensityOperator& sigma) {
    if (!(rho.space() == sigma.space()))
        throw std::invalid_argument("trace_distance: space mismatch");
    Eigen::SelfAdjointEigenSolver<Mat> es(rho.matrix() - sigma.matrix(),
                                          Eigen::EigenvaluesOnly);
    return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

double purity(const DensityOperator& rho) {
    return (rho.matrix() * rho.matrix()).trace().real();
}

}  // namespace qlab
