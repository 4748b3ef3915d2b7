#ifndef MUI_GAUSSIAN_UI_HPP
#define MUI_GAUSSIAN_UI_HPP

#include <Eigen/Dense>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "mui/gaussian.hpp"
#include "mui/pid.hpp"
#include "mui/units.hpp"

namespace mui {

/// Which Markov-chain formulation the unique information uses.
///   TMXY: extractor T is a stochastic function of M, objective I(T;X).
///   MYXT: extractor T is a stochastic function of X, objective I(T;M).
enum class UIDefinition { TMXY, MYXT };

inline std::string definition_name(UIDefinition d) {
    return d == UIDefinition::TMXY ? "TMXY" : "MYXT";
}

/// Orthonormal basis of the null space of a matrix.
struct KernelBasis {
    Eigen::MatrixXd basis;  // n x nullity, orthonormal columns
    int rows = 0, cols = 0;
    double rel_tol = kRankTol;
};

/// Columns of the returned basis orthonormally span Ker(m) at the given
/// relative tolerance. Canonical sign: first nonzero entry of each column
/// is positive, so the result is deterministic for a fixed input.
inline KernelBasis kernel_basis(const Eigen::MatrixXd& m, double rel_tol = kRankTol) {
    if (!m.allFinite()) throw std::invalid_argument("kernel_basis: non-finite input");
    KernelBasis kb;
    kb.rows = static_cast<int>(m.rows());
    kb.cols = static_cast<int>(m.cols());
    kb.rel_tol = rel_tol;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeFullV);
    const Eigen::VectorXd& sv = svd.singularValues();
    const double smax = sv.size() > 0 ? sv(0) : 0.0;
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i)
        if (sv(i) > rel_tol * smax && sv(i) > 0.0) ++rank;
    const int n = static_cast<int>(m.cols());
    kb.basis = svd.matrixV().rightCols(n - rank);
    for (int c = 0; c < kb.basis.cols(); ++c) {
        for (int r = 0; r < kb.basis.rows(); ++r) {
            if (std::abs(kb.basis(r, c)) > 1e-12) {
                if (kb.basis(r, c) < 0.0) kb.basis.col(c) = -kb.basis.col(c);
                break;
            }
        }
    }
    return kb;
}

struct GaussianUIResult {
    double value = 0.0;
    InfoUnit unit = InfoUnit::bits;
    UIDefinition definition = UIDefinition::TMXY;
    /// Optimal cross-covariance in whitened coordinates (Sigma_MT for TMXY,
    /// Sigma_XT for MYXT); equals the kernel basis.
    Eigen::MatrixXd extractor_cross_cov;
    WhitenTransform whiten_record;
    int kernel_dim = 0;
};

namespace detail {

/// Closed-form UI on whitened blocks: -1/2 sum log(1 - s_i^2) over the
/// singular values of V^T S_ct, where V spans Ker(S_ic).
inline double ui_nats_from_whitened(const Eigen::MatrixXd& s_indep_center,
                                    const Eigen::MatrixXd& s_center_target,
                                    Eigen::MatrixXd* kernel_out, int* kernel_dim) {
    KernelBasis kb = kernel_basis(s_indep_center);
    if (kernel_out) *kernel_out = kb.basis;
    if (kernel_dim) *kernel_dim = static_cast<int>(kb.basis.cols());
    if (kb.basis.cols() == 0) return 0.0;
    Eigen::MatrixXd b = kb.basis.transpose() * s_center_target;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(b);
    double nats = 0.0;
    for (int i = 0; i < svd.singularValues().size(); ++i) {
        const double s = svd.singularValues()(i);
        if (s >= 1.0 - 1e-12)
            throw std::runtime_error(
                "ui_gaussian: whitened cross-correlation at or above 1 "
                "(infinite/ill-conditioned unique information)");
        nats -= 0.5 * std::log1p(-s * s);
    }
    return nats;
}

}  // namespace detail

/// Gaussian-restricted unique information of X (and not Y) about M.
/// MYXT is evaluated by exchanging the M and X blocks and running the
/// TMXY closed form, which is exactly the content of the second theorem.
inline GaussianUIResult ui_gaussian(const GaussianJoint& g, UIDefinition def,
                                    InfoUnit unit = InfoUnit::bits) {
    if (def == UIDefinition::MYXT) {
        GaussianUIResult r = ui_gaussian(g.swapped(Role::M, Role::X),
                                         UIDefinition::TMXY, unit);
        r.definition = UIDefinition::MYXT;
        return r;
    }
    auto [w, record] = whiten(g);
    Eigen::MatrixXd s_ym = w.block(RoleSet{Role::Y}, RoleSet{Role::M});
    Eigen::MatrixXd s_mx = w.block(RoleSet{Role::M}, RoleSet{Role::X});
    GaussianUIResult r;
    r.unit = unit;
    r.definition = UIDefinition::TMXY;
    r.whiten_record = record;
    const double nats =
        detail::ui_nats_from_whitened(s_ym, s_mx, &r.extractor_cross_cov, &r.kernel_dim);
    r.value = from_nats(nats, unit);
    return r;
}

/// The extractor T realizing the unique information, as a joint covariance
/// over (T, M, X, Y) in whitened coordinates. T = V^T M for TMXY (V^T X for
/// MYXT), so Sigma_T = I and Sigma_TY = 0.
struct GaussianExtractor {
    bool degenerate = false;  // trivial kernel, no extractor
    int t_dim = 0;
    std::array<int, 3> base_dims{0, 0, 0};  // whitened (M, X, Y) ranks
    Eigen::MatrixXd cov;                    // (t+m+x+y) square, order [T;M;X;Y]
    GaussianUIResult ui;

    std::vector<int> t_indices() const {
        std::vector<int> v;
        for (int i = 0; i < t_dim; ++i) v.push_back(i);
        return v;
    }
    std::vector<int> block_indices(int which) const {  // 0=M, 1=X, 2=Y
        int off = t_dim;
        for (int i = 0; i < which; ++i) off += base_dims[i];
        std::vector<int> v;
        for (int i = 0; i < base_dims[which]; ++i) v.push_back(off + i);
        return v;
    }
};

inline GaussianExtractor optimal_extractor(const GaussianJoint& g, UIDefinition def,
                                           InfoUnit unit = InfoUnit::bits) {
    if (def == UIDefinition::MYXT) {
        GaussianExtractor e =
            optimal_extractor(g.swapped(Role::M, Role::X), UIDefinition::TMXY, unit);
        e.ui.definition = UIDefinition::MYXT;
        return e;
    }
    GaussianExtractor e;
    e.ui = ui_gaussian(g, def, unit);
    auto [w, record] = whiten(g);
    e.base_dims = {w.dim(Role::M), w.dim(Role::X), w.dim(Role::Y)};
    e.t_dim = e.ui.kernel_dim;
    if (e.t_dim == 0) {
        e.degenerate = true;
        e.cov = w.cov();
        return e;
    }
    const Eigen::MatrixXd& v = e.ui.extractor_cross_cov;  // dm x p
    const int p = e.t_dim, n = w.total_dim();
    Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(p + n, p + n);
    cov.block(p, p, n, n) = w.cov();
    cov.block(0, 0, p, p) = Eigen::MatrixXd::Identity(p, p);
    // T = V^T M, so Sigma_T(MXY) = V^T Sigma_M(MXY); the M rows come first.
    Eigen::MatrixXd m_rows = w.cov().topRows(w.dim(Role::M));
    cov.block(0, p, p, n) = v.transpose() * m_rows;
    cov.block(p, 0, n, p) = cov.block(0, p, p, n).transpose();
    e.cov = cov;
    return e;
}

struct NumericUIReport {
    double closed_form_nats = 0.0;
    double numeric_nats = 0.0;
    double gap_nats = 0.0;  // closed_form - numeric
    int restarts = 0;
};

/// Confirms the closed form empirically: projected gradient ascent on the
/// proof's parametrization max -1/2 log det(I - S^T A S) over S^T S <= I,
/// from multiple seeded random starts.
inline NumericUIReport numeric_ui_verify(const GaussianJoint& g, UIDefinition def,
                                         int restarts = 32, std::uint64_t seed = 0) {
    if (def == UIDefinition::MYXT)
        return numeric_ui_verify(g.swapped(Role::M, Role::X), UIDefinition::TMXY,
                                 restarts, seed);
    NumericUIReport rep;
    rep.restarts = restarts;
    GaussianUIResult closed = ui_gaussian(g, def, InfoUnit::nats);
    rep.closed_form_nats = closed.value;
    const int p = closed.kernel_dim;
    if (p == 0) {
        rep.numeric_nats = 0.0;
        rep.gap_nats = rep.closed_form_nats;
        return rep;
    }
    auto [w, record] = whiten(g);
    Eigen::MatrixXd s_mx = w.block(RoleSet{Role::M}, RoleSet{Role::X});
    Eigen::MatrixXd bv = closed.extractor_cross_cov.transpose() * s_mx;
    Eigen::MatrixXd a = bv * bv.transpose();  // p x p, 0 <= A <= I

    auto project = [](const Eigen::MatrixXd& s) {
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(s, Eigen::ComputeThinU | Eigen::ComputeThinV);
        Eigen::VectorXd sv = svd.singularValues();
        for (int i = 0; i < sv.size(); ++i) sv(i) = std::min(1.0, std::max(0.0, sv(i)));
        return Eigen::MatrixXd(svd.matrixU() * sv.asDiagonal() * svd.matrixV().transpose());
    };
    auto objective = [&](const Eigen::MatrixXd& s) {
        Eigen::MatrixXd m = Eigen::MatrixXd::Identity(p, p) - s.transpose() * a * s;
        Eigen::PartialPivLU<Eigen::MatrixXd> lu(m);
        double logdet = 0.0;
        Eigen::VectorXd d = lu.matrixLU().diagonal();
        for (int i = 0; i < d.size(); ++i) logdet += std::log(std::abs(d(i)));
        return -0.5 * logdet;
    };

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    double best = 0.0;
    for (int r = 0; r < restarts; ++r) {
        Eigen::MatrixXd s(p, p);
        for (int i = 0; i < p; ++i)
            for (int j = 0; j < p; ++j) s(i, j) = gauss(rng);
        s = project(s);
        double f = objective(s);
        for (int iter = 0; iter < 500; ++iter) {
            Eigen::MatrixXd m = Eigen::MatrixXd::Identity(p, p) - s.transpose() * a * s;
            Eigen::MatrixXd grad = a * s * m.inverse();
            double step = 0.1;
            double fnew = f;
            Eigen::MatrixXd snew = s;
            bool improved = false;
            for (int h = 0; h < 40; ++h) {
                Eigen::MatrixXd cand = project(s + step * grad);
                double fc = objective(cand);
                if (fc > fnew) {
                    fnew = fc;
                    snew = cand;
                    improved = true;
                    break;
                }
                step *= 0.5;
            }
            if (!improved) break;
            const double rel = (fnew - f) / std::max(std::abs(fnew), 1e-30);
            s = snew;
            f = fnew;
            if (rel < 1e-10) break;
        }
        if (f > best) best = f;
    }
    rep.numeric_nats = best;
    rep.gap_nats = rep.closed_form_nats - rep.numeric_nats;
    return rep;
}

/// The scalar covariance families demonstrating asymmetric redundancy.
/// TMXY family: params (rho_x, rho_y); MYXT family: params (rho, eps).
/// Returned joint uses block order [M; X; Y].
inline GaussianJoint counterexample_family(UIDefinition def, double p1, double p2) {
    if (p1 * p1 + p2 * p2 >= 1.0)
        throw std::domain_error("counterexample_family: need p1^2 + p2^2 < 1");
    Eigen::MatrixXd cov(3, 3);
    if (def == UIDefinition::TMXY) {
        const double rho_x = p1, rho_y = p2;
        cov << 1.0, rho_x, rho_y,
               rho_x, 1.0, 0.0,
               rho_y, 0.0, 1.0;
    } else {
        const double rho = p1, eps = p2;
        cov << 1.0, eps, 0.0,
               eps, 1.0, rho,
               0.0, rho, 1.0;
    }
    return GaussianJoint({1, 1, 1}, cov);
}

/// Full unsymmetrized PID for the Gaussian joint. UI_Y is the same
/// definition with the X and Y roles exchanged.
inline PIDTerms pid_terms_gaussian(const GaussianJoint& g, UIDefinition def,
                                   InfoUnit unit = InfoUnit::bits) {
    PIDTerms t;
    t.unit = unit;
    t.i_mx = gaussian_mi(g, RoleSet{Role::M}, RoleSet{Role::X}, unit);
    t.i_my = gaussian_mi(g, RoleSet{Role::M}, RoleSet{Role::Y}, unit);
    t.i_mx_given_y = gaussian_conditional_mi(g, RoleSet{Role::M}, RoleSet{Role::X},
                                             RoleSet{Role::Y}, unit);
    t.i_my_given_x = gaussian_conditional_mi(g, RoleSet{Role::M}, RoleSet{Role::Y},
                                             RoleSet{Role::X}, unit);
    t.ui_x = ui_gaussian(g, def, unit).value;
    t.ui_y = ui_gaussian(g.swapped(Role::X, Role::Y), def, unit).value;
    t.finish();
    return t;
}

}  // namespace mui

#endif  // MUI_GAUSSIAN_UI_HPP
