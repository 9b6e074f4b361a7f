#include "qlab/infotheory.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qlab/rng.hpp"

namespace qlab {

namespace {

double table_mutual_information(const Eigen::MatrixXd& P, double base) {
    const double scale = 1.0 / std::log(base);
    double hp = 0.0, hq = 0.0, hpq = 0.0;
    const RVec p = P.rowwise().sum();
    const RVec q = P.colwise().sum();
    auto h = [&](double x) { return x > kEigZero ? -x * std::log(x) * scale : 0.0; };
    for (int i = 0; i < p.size(); ++i) hp += h(p[i]);
    for (int j = 0; j < q.size(); ++j) hq += h(q[j]);
    for (int i = 0; i < P.rows(); ++i)
        for (int j = 0; j < P.cols(); ++j) hpq += h(P(i, j));
    return std::max(hp + hq - hpq, 0.0);
}

}  // namespace

Povm::Povm(std::vector<Mat> effects, std::vector<std::string> labels)
    : effects_(std::move(effects)), labels_(std::move(labels)) {
    if (effects_.empty())
        throw std::invalid_argument("Povm: no effects");
    if (labels_.empty()) {
        for (size_t k = 0; k < effects_.size(); ++k)
            labels_.push_back(std::to_string(k));
    }
    if (labels_.size() != effects_.size())
        throw std::invalid_argument("Povm: label count mismatch");
    const long d = effects_.front().rows();
    Mat sum = Mat::Zero(d, d);
    for (const Mat& e : effects_) {
        if (e.rows() != d || e.cols() != d)
            throw std::invalid_argument("Povm: effect size mismatch");
        if ((e - e.adjoint()).cwiseAbs().maxCoeff() > kHermTol)
            throw std::invalid_argument("Povm: effect not Hermitian");
        Eigen::SelfAdjointEigenSolver<Mat> es(e, Eigen::EigenvaluesOnly);
        if (es.eigenvalues().minCoeff() < -kPsdTol)
            throw std::invalid_argument("Povm: effect not PSD");
        sum += e;
    }
    if ((sum - Mat::Identity(d, d)).cwiseAbs().maxCoeff() > 1e-9)
        throw std::invalid_argument("Povm: effects do not sum to identity");
}

Povm Povm::projective(const Mat& basis) {
    const long d = basis.rows();
    std::vector<Mat> effects;
    effects.reserve(d);
    for (long k = 0; k < d; ++k)
        effects.push_back(basis.col(k) * basis.col(k).adjoint());
    return Povm(std::move(effects), {});
}

double mutual_entropy(const DensityOperator& rho_ac,
                      const std::vector<std::string>& first_part, double base) {
    std::vector<std::string> rest;
    std::vector<bool> in_first(rho_ac.space().num_factors(), false);
    for (const auto& lab : first_part) in_first[rho_ac.space().index_of(lab)] = true;
    for (int k = 0; k < rho_ac.space().num_factors(); ++k)
        if (!in_first[k]) rest.push_back(rho_ac.space().labels()[k]);
    if (first_part.empty() || rest.empty())
        throw std::invalid_argument("mutual_entropy: split must be a proper bipartition");
    const double sa = von_neumann_entropy(partial_trace(rho_ac, first_part), base);
    const double sc = von_neumann_entropy(partial_trace(rho_ac, rest), base);
    const double sac = von_neumann_entropy(rho_ac, base);
    return std::max(sa + sc - sac, 0.0);
}

double classical_mutual_information(const DensityOperator& rho_ac,
                                    const Povm& e_first, const Povm& f_second,
                                    double base) {
    if (rho_ac.space().num_factors() != 2)
        throw std::invalid_argument("classical_mutual_information: state must be bipartite");
    const int da = rho_ac.space().dim(0);
    const int dc = rho_ac.space().dim(1);
    if (e_first.dim() != da || f_second.dim() != dc)
        throw std::invalid_argument("classical_mutual_information: POVM dimension mismatch");

    // P_ij = sum_{a,a'} E_i(a,a') tr(F_j * rho_block(a',a))
    Eigen::MatrixXd tf(da * da, f_second.num_outcomes());
    Eigen::MatrixXd tf_im(da * da, f_second.num_outcomes());
    for (int j = 0; j < f_second.num_outcomes(); ++j) {
        const Mat& F = f_second.effects()[j];
        for (int ap = 0; ap < da; ++ap)
            for (int a = 0; a < da; ++a) {
                const Cplx t =
                    (F * rho_ac.matrix().block(ap * dc, a * dc, dc, dc)).trace();
                tf(ap * da + a, j) = t.real();
                tf_im(ap * da + a, j) = t.imag();
            }
    }
    Eigen::MatrixXd P(e_first.num_outcomes(), f_second.num_outcomes());
    for (int i = 0; i < e_first.num_outcomes(); ++i) {
        const Mat& E = e_first.effects()[i];
        for (int j = 0; j < f_second.num_outcomes(); ++j) {
            double v = 0.0;
            for (int a = 0; a < da; ++a)
                for (int ap = 0; ap < da; ++ap) {
                    v += E(a, ap).real() * tf(ap * da + a, j) -
                         E(a, ap).imag() * tf_im(ap * da + a, j);
                }
            P(i, j) = std::max(v, 0.0);
        }
    }
    return table_mutual_information(P, base);
}

std::pair<Povm, Povm> pointer_povm(const PointerMeasurementModel& model) {
    const int dev = model.device_dim();
    std::vector<Mat> dev_effects;
    std::vector<std::string> dev_labels;
    for (int sector = 0; sector <= model.K(); ++sector)
        for (int s = 0; s < model.M(); ++s) {
            Mat e = Mat::Zero(dev, dev);
            const int k = model.device_index(sector, s);
            e(k, k) = 1.0;
            dev_effects.push_back(std::move(e));
            dev_labels.push_back(std::to_string(sector) + ":" + std::to_string(s));
        }
    std::vector<Mat> obj_effects;
    std::vector<std::string> obj_labels;
    for (int j = 0; j < model.K(); ++j) {
        Mat e = Mat::Zero(model.K(), model.K());
        e(j, j) = 1.0;
        obj_effects.push_back(std::move(e));
        obj_labels.push_back("psi" + std::to_string(j));
    }
    return {Povm(std::move(dev_effects), std::move(dev_labels)),
            Povm(std::move(obj_effects), std::move(obj_labels))};
}

double pointer_mutual_information(const BranchState& state, double base) {
    // Joint table over (pointer sector, microstate; object outcome): for the
    // exact and reduced states P((i,s),j) = delta_ij p_s |c_i|^2, for the
    // pre-measurement state the sector index is constant, so in every case
    // the table is a product or a diagonal copy and the MI is closed-form.
    if (state.kind == BranchKind::premeasurement) return 0.0;
    return shannon_entropy(state.model.outcome_probs(), base);
}

namespace detail {

Mat unitary_from_params(const RVec& x, int d) {
    if (x.size() != d * d)
        throw std::invalid_argument("unitary_from_params: wrong parameter count");
    Mat h(d, d);
    int k = 0;
    for (int i = 0; i < d; ++i) h(i, i) = x[k++];
    for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j) {
            h(i, j) = Cplx(x[k], x[k + 1]);
            h(j, i) = std::conj(h(i, j));
            k += 2;
        }
    Eigen::SelfAdjointEigenSolver<Mat> es(h);
    Vec phases(d);
    for (int i = 0; i < d; ++i)
        phases[i] = std::exp(Cplx(0.0, es.eigenvalues()[i]));
    return es.eigenvectors() * phases.asDiagonal() *
           es.eigenvectors().adjoint();
}

double basis_mutual_information(const Mat& rho, int da, int dc, const Mat& ua,
                                const Mat& uc, double base) {
    // Diagonal of (UA (x) UC)^dag rho (UA (x) UC) without forming the full
    // conjugation: rotate the C blocks first, then contract with UA columns.
    Eigen::MatrixXd P(da, dc);
    // X[(a c),(a' c')] with c-blocks rotated: X_block(a,a') = UC^dag B UC
    Mat X(rho.rows(), rho.cols());
    for (int a = 0; a < da; ++a)
        for (int ap = 0; ap < da; ++ap)
            X.block(a * dc, ap * dc, dc, dc) =
                uc.adjoint() * rho.block(a * dc, ap * dc, dc, dc) * uc;
    for (int i = 0; i < da; ++i) {
        for (int c = 0; c < dc; ++c) {
            Cplx v = 0.0;
            for (int a = 0; a < da; ++a)
                for (int ap = 0; ap < da; ++ap)
                    v += std::conj(ua(a, i)) * X(a * dc + c, ap * dc + c) *
                         ua(ap, i);
            P(i, c) = std::max(v.real(), 0.0);
        }
    }
    return table_mutual_information(P, base);
}

}  // namespace detail

namespace {

struct SearchOutcome {
    double value = 0.0;
    Mat ua, uc;
    OptimizerMeta meta;
};

// Multi-start derivative-free ascent over the measurement-basis parameters.
// Full coordinate probing for small parameter counts, seeded random
// directions otherwise.
SearchOutcome projective_search(const Mat& rho, int da, int dc,
                                const SearchConfig& cfg, double base) {
    const int na = da * da, nc = dc * dc, n = na + nc;
    auto eval = [&](const RVec& x) {
        const Mat ua = detail::unitary_from_params(x.head(na), da);
        const Mat uc = detail::unitary_from_params(x.tail(nc), dc);
        return detail::basis_mutual_information(rho, da, dc, ua, uc, base);
    };

    SearchOutcome best;
    best.value = -1.0;
    int best_restart = 0;
    long total_iters = 0;
    bool best_converged = false;

    for (int r = 0; r < cfg.restarts; ++r) {
        auto rng = substream(cfg.seed, static_cast<std::uint64_t>(r));
        std::normal_distribution<double> gauss(0.0, 1.0);
        RVec x(n);
        for (int i = 0; i < n; ++i) x[i] = gauss(rng);
        double f = eval(x);
        double step = cfg.init_step;
        long iters = 0;
        const bool coord = n <= 40;
        RVec y(n), dir(n);
        while (iters < cfg.max_iters && step > cfg.tol) {
            bool improved = false;
            const int ndirs = coord ? n : cfg.random_dir_count;
            for (int k = 0; k < ndirs; ++k) {
                if (coord) {
                    dir.setZero();
                    dir[k] = 1.0;
                } else {
                    for (int i = 0; i < n; ++i) dir[i] = gauss(rng);
                    dir.normalize();
                }
                for (double sign : {1.0, -1.0}) {
                    y = x + sign * step * dir;
                    const double fy = eval(y);
                    if (fy > f + 1e-15) {
                        x = y;
                        f = fy;
                        improved = true;
                    }
                }
            }
            if (!improved) step *= 0.5;
            ++iters;
        }
        total_iters += iters;
        if (f > best.value + 1e-15) {  // strict: first-found wins ties
            best.value = f;
            best.ua = detail::unitary_from_params(x.head(na), da);
            best.uc = detail::unitary_from_params(x.tail(nc), dc);
            best_restart = r;
            best_converged = step <= cfg.tol;
        }
    }
    (void)best_restart;
    best.meta.restarts = cfg.restarts;
    best.meta.iterations = total_iters;
    best.meta.converged = best_converged;
    return best;
}

CorrelationReport make_report(double s, double i, OptimizerMeta meta,
                              std::optional<std::pair<Povm, Povm>> povms) {
    CorrelationReport rep;
    rep.mutual_entropy = s;
    rep.accessible_info = i;
    rep.gap = s - i;
    rep.best_povms = std::move(povms);
    rep.optimizer_meta = meta;
    return rep;
}

}  // namespace

CorrelationReport accessible_mutual_information(const DensityOperator& rho_ac,
                                                const SearchConfig& cfg,
                                                double base) {
    if (rho_ac.space().num_factors() != 2)
        throw std::invalid_argument("accessible_mutual_information: state must be bipartite");
    const int da = rho_ac.space().dim(0);
    const int dc = rho_ac.space().dim(1);
    const double s = mutual_entropy(rho_ac, {rho_ac.space().labels()[0]}, base);
    SearchOutcome out = projective_search(rho_ac.matrix(), da, dc, cfg, base);
    return make_report(s, out.value, out.meta,
                       std::make_pair(Povm::projective(out.ua),
                                      Povm::projective(out.uc)));
}

CorrelationReport accessible_mutual_information(const BranchState& state,
                                                Strategy strategy,
                                                const SearchConfig& cfg,
                                                double base) {
    const double s = mutual_entropy(state, base);
    if (strategy == Strategy::pointer_exact) {
        OptimizerMeta meta{0, 0, true};
        auto [dev, obj] = pointer_povm(state.model);
        return make_report(s, pointer_mutual_information(state, base), meta,
                           std::make_pair(std::move(obj), std::move(dev)));
    }
    CorrelationReport searched =
        accessible_mutual_information(to_dense(state), cfg, base);
    if (strategy == Strategy::projective_search) return searched;
    // hybrid: keep the larger lower bound, pointer on ties
    const double ptr = pointer_mutual_information(state, base);
    if (ptr >= searched.accessible_info) {
        auto [dev, obj] = pointer_povm(state.model);
        return make_report(s, ptr, searched.optimizer_meta,
                           std::make_pair(std::move(obj), std::move(dev)));
    }
    return searched;
}

namespace {

InequalityCheck check_from_report(const CorrelationReport& rep) {
    InequalityCheck chk;
    chk.mutual_entropy = rep.mutual_entropy;
    chk.accessible_info = rep.accessible_info;
    chk.slack = rep.gap;
    chk.holds = rep.accessible_info <= rep.mutual_entropy + 1e-6;
    return chk;
}

}  // namespace

InequalityCheck verify_inequality(const DensityOperator& rho_ac,
                                  const SearchConfig& cfg, double base) {
    return check_from_report(accessible_mutual_information(rho_ac, cfg, base));
}

InequalityCheck verify_inequality(const BranchState& state, Strategy strategy,
                                  const SearchConfig& cfg, double base) {
    return check_from_report(
        accessible_mutual_information(state, strategy, cfg, base));
}

double macroscopicity_gap(const DensityOperator& rho_ac, const SearchConfig& cfg,
                          double base) {
    return accessible_mutual_information(rho_ac, cfg, base).gap;
}

double macroscopicity_gap(const BranchState& state, Strategy strategy,
                          const SearchConfig& cfg, double base) {
    return accessible_mutual_information(state, strategy, cfg, base).gap;
}

}  // namespace qlab
