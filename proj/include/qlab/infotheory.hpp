#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qlab/linalg.hpp"
#include "qlab/measurement.hpp"

namespace qlab {

// Finite set of PSD effects summing to identity on one subsystem.
class Povm {
public:
    Povm(std::vector<Mat> effects, std::vector<std::string> labels);

    // Rank-1 projective measurement in the basis given by the columns of U.
    static Povm projective(const Mat& basis);

    int num_outcomes() const { return static_cast<int>(effects_.size()); }
    int dim() const { return static_cast<int>(effects_.front().rows()); }
    const std::vector<Mat>& effects() const { return effects_; }
    const std::vector<std::string>& labels() const { return labels_; }

private:
    std::vector<Mat> effects_;
    std::vector<std::string> labels_;
};

enum class Strategy { pointer_exact, projective_search, hybrid };

struct SearchConfig {
    std::uint64_t seed = 0;
    int restarts = 32;
    int max_iters = 500;
    double tol = 1e-9;
    double init_step = 0.6;
    // Above this many parameters per factor, coordinate probing switches to
    // seeded random directions (this many per sweep).
    int random_dir_count = 16;
};

struct OptimizerMeta {
    int restarts = 0;
    long iterations = 0;
    bool converged = true;
};

struct CorrelationReport {
    double mutual_entropy = 0.0;   // S(A:C)
    double accessible_info = 0.0;  // certified lower bound on I(A:C)
    double gap = 0.0;              // S - I
    std::optional<std::pair<Povm, Povm>> best_povms;  // (first factor, second)
    OptimizerMeta optimizer_meta;
};

struct InequalityCheck {
    bool holds = false;
    double mutual_entropy = 0.0;
    double accessible_info = 0.0;
    double slack = 0.0;  // S - I
};

// S(rho_A) + S(rho_C) - S(rho_AC) for the bipartition keep-vs-rest.
double mutual_entropy(const DensityOperator& rho_ac,
                      const std::vector<std::string>& first_part,
                      double base = 2.0);

// H(E:F) of the outcome table P_ij = tr[(E_i x F_j) rho]; E acts on the
// first factor of the bipartite state, F on the second.
double classical_mutual_information(const DensityOperator& rho_ac,
                                    const Povm& e_first, const Povm& f_second,
                                    double base = 2.0);

// The natural measurement pair: device projectors |alpha_{i,s}> (sector-0
// ones per s) and object projectors |psi_j>. Returned as (device, object).
std::pair<Povm, Povm> pointer_povm(const PointerMeasurementModel& model);

// Closed-form H(E:F) of the pointer POVM pair on a branch state.
double pointer_mutual_information(const BranchState& state, double base = 2.0);

CorrelationReport accessible_mutual_information(const DensityOperator& rho_ac,
                                                const SearchConfig& cfg,
                                                double base = 2.0);
CorrelationReport accessible_mutual_information(const BranchState& state,
                                                Strategy strategy,
                                                const SearchConfig& cfg,
                                                double base = 2.0);

InequalityCheck verify_inequality(const DensityOperator& rho_ac,
                                  const SearchConfig& cfg, double base = 2.0);
InequalityCheck verify_inequality(const BranchState& state, Strategy strategy,
                                  const SearchConfig& cfg, double base = 2.0);

double macroscopicity_gap(const DensityOperator& rho_ac, const SearchConfig& cfg,
                          double base = 2.0);
double macroscopicity_gap(const BranchState& state, Strategy strategy,
                          const SearchConfig& cfg, double base = 2.0);

// Internals exposed for tests and oracles.
namespace detail {
// MI of measuring each factor in the bases given by the columns of ua/uc.
double basis_mutual_information(const Mat& rho, int da, int dc, const Mat& ua,
                                const Mat& uc, double base);
Mat unitary_from_params(const RVec& x, int d);
}  // namespace detail

}  // namespace qlab
