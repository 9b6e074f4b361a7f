#pragma once

#include <Eigen/Dense>
#include <complex>
#include <string>
#include <utility>
#include <vector>

namespace qlab {

using Cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;

// Tolerances shared across the library.
constexpr double kHermTol = 1e-10;
constexpr double kTraceTol = 1e-10;
constexpr double kPsdTol = 1e-10;
constexpr double kNormTol = 1e-12;
constexpr double kEigZero = 1e-12;  // eigenvalues below this are treated as 0

// Labeled tensor-product space. Index convention: the leftmost label is the
// most significant digit of the composite index (object-major when the
// object factor is listed first).
class HilbertSpace {
public:
    HilbertSpace() = default;
    HilbertSpace(std::vector<int> dims, std::vector<std::string> labels);

    int num_factors() const { return static_cast<int>(dims_.size()); }
    int dim(int k) const { return dims_[k]; }
    const std::vector<int>& dims() const { return dims_; }
    const std::vector<std::string>& labels() const { return labels_; }
    int total_dim() const { return total_; }
    int index_of(const std::string& label) const;  // throws on unknown label

    bool operator==(const HilbertSpace& o) const {
        return dims_ == o.dims_ && labels_ == o.labels_;
    }

private:
    std::vector<int> dims_;
    std::vector<std::string> labels_;
    int total_ = 1;
};

class PureState {
public:
    PureState(HilbertSpace space, Vec amplitudes);

    const HilbertSpace& space() const { return space_; }
    const Vec& amplitudes() const { return amps_; }

private:
    HilbertSpace space_;
    Vec amps_;
};

class DensityOperator {
public:
    // Validates Hermiticity (1e-10), unit trace (1e-10) and, for dimensions
    // where an eigensolve is cheap, positivity (min eigenvalue >= -1e-10).
    DensityOperator(HilbertSpace space, Mat matrix);

    const HilbertSpace& space() const { return space_; }
    const Mat& matrix() const { return mat_; }
    int dim() const { return space_.total_dim(); }

private:
    HilbertSpace space_;
    Mat mat_;
};

DensityOperator projector(const PureState& psi);

PureState tensor(const PureState& a, const PureState& b);
DensityOperator tensor(const DensityOperator& a, const DensityOperator& b);

// tr over every factor not named in `keep`; kept factors stay in their
// original order.
DensityOperator partial_trace(const DensityOperator& rho,
                              const std::vector<std::string>& keep);

// Eigenvalues descending, columns of the returned matrix are eigenvectors
// in the same order.
std::pair<RVec, Mat> eig_hermitian(const DensityOperator& rho);

// Entropies in units of log `base` (bits for base 2, the default).
double von_neumann_entropy(const DensityOperator& rho, double base = 2.0);
double shannon_entropy(const std::vector<double>& p, double base = 2.0);
double shannon_entropy(const RVec& p, double base = 2.0);

double trace_distance(const DensityOperator& rho, const DensityOperator& sigma);

double purity(const DensityOperator& rho);

}  // namespace qlab
