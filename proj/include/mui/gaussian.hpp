#ifndef MUI_GAUSSIAN_HPP
#define MUI_GAUSSIAN_HPP

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "mui/discrete.hpp"  // Role, RoleSet
#include "mui/units.hpp"

namespace mui {

/// Relative threshold below which singular/eigen values count as zero.
/// Used consistently for kernels, pseudo-inverses and whitening ranks.
inline constexpr double kRankTol = 1e-10;

/// Block-partitioned covariance of (M, X, Y), block order [M; X; Y].
/// Zero mean is assumed throughout; means are not represented.
class GaussianJoint {
public:
    GaussianJoint(std::array<int, 3> dims, Eigen::MatrixXd cov)
        : dims_(dims), cov_(std::move(cov)) {
        const int n = dims_[0] + dims_[1] + dims_[2];
        if (dims_[0] <= 0 || dims_[1] <= 0 || dims_[2] <= 0)
            throw std::invalid_argument("block dimensions must be positive");
        if (cov_.rows() != n || cov_.cols() != n)
            throw std::invalid_argument("covariance side does not match dims");
        const double scale = std::max(1.0, cov_.cwiseAbs().maxCoeff());
        if ((cov_ - cov_.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
            throw std::invalid_argument("covariance not symmetric");
        cov_ = 0.5 * (cov_ + cov_.transpose());
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov_,
                                                          Eigen::EigenvaluesOnly);
        const double emax = std::max(0.0, es.eigenvalues().maxCoeff());
        if (es.eigenvalues().minCoeff() < -1e-10 * std::max(emax, 1.0))
            throw std::invalid_argument("covariance not positive semidefinite");
    }

    int dim(Role r) const { return dims_[static_cast<int>(r)]; }
    const std::array<int, 3>& dims() const { return dims_; }
    int total_dim() const { return dims_[0] + dims_[1] + dims_[2]; }
    const Eigen::MatrixXd& cov() const { return cov_; }

    int offset(Role r) const {
        int off = 0;
        for (int i = 0; i < static_cast<int>(r); ++i) off += dims_[i];
        return off;
    }

    /// Row/column indices of the given subset, in block order.
    std::vector<int> indices(const RoleSet& roles) const {
        std::vector<int> idx;
        for (int i = 0; i < 3; ++i)
            if (roles.mask[i]) {
                const int off = offset(static_cast<Role>(i));
                for (int k = 0; k < dims_[i]; ++k) idx.push_back(off + k);
            }
        return idx;
    }

    Eigen::MatrixXd block(const RoleSet& rows, const RoleSet& cols) const {
        return cov_(indices(rows), indices(cols));
    }

    GaussianJoint swapped(Role a, Role b) const {
        std::array<int, 3> perm{0, 1, 2};
        std::swap(perm[static_cast<int>(a)], perm[static_cast<int>(b)]);
        std::array<int, 3> d;
        std::vector<int> idx;
        for (int i = 0; i < 3; ++i) {
            d[i] = dims_[perm[i]];
            const int off = offset(static_cast<Role>(perm[i]));
            for (int k = 0; k < dims_[perm[i]]; ++k) idx.push_back(off + k);
        }
        return GaussianJoint(d, cov_(idx, idx));
    }

private:
    std::array<int, 3> dims_;
    Eigen::MatrixXd cov_;
};

/// Per-variable whitening maps W_i (rank_i x dim_i) with W_i Sigma_i W_i^T = I
/// on the retained coordinates, plus the reconstruction maps
/// B_i = Sigma_i W_i^T (dim_i x rank_i).
struct WhitenTransform {
    std::array<Eigen::MatrixXd, 3> forward;   // rank x dim
    std::array<Eigen::MatrixXd, 3> backward;  // dim x rank
    std::array<int, 3> ranks;
    std::array<bool, 3> degenerate{false, false, false};  // block had rank 0
};

namespace detail {

/// W = Lambda_r^{-1/2} U_r^T for the retained eigenpairs of a PSD matrix.
inline std::pair<Eigen::MatrixXd, int> whitening_map(const Eigen::MatrixXd& sigma) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sigma);
    const Eigen::VectorXd& ev = es.eigenvalues();
    const double emax = std::max(0.0, ev.maxCoeff());
    const double thresh = kRankTol * std::max(emax, 0.0);
    std::vector<int> keep;
    for (int i = 0; i < ev.size(); ++i)
        if (ev(i) > thresh && ev(i) > 0.0) keep.push_back(i);
    const int r = static_cast<int>(keep.size());
    Eigen::MatrixXd w(r, sigma.rows());
    for (int k = 0; k < r; ++k)
        w.row(k) = es.eigenvectors().col(keep[k]).transpose() / std::sqrt(ev(keep[k]));
    return {w, r};
}

/// Moore-Penrose pseudo-inverse with the module-wide rank threshold.
inline Eigen::MatrixXd pinv(const Eigen::MatrixXd& m) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd& sv = svd.singularValues();
    const double thresh = kRankTol * (sv.size() > 0 ? sv(0) : 0.0);
    Eigen::VectorXd inv = Eigen::VectorXd::Zero(sv.size());
    for (int i = 0; i < sv.size(); ++i)
        if (sv(i) > thresh) inv(i) = 1.0 / sv(i);
    return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

/// MI in nats between two index groups of a PSD covariance, computed from
/// the singular values of the whitened cross block. Robust to rank-deficient
/// marginals (reduces to the retained subspaces).
struct MiDiagnostics {
    bool rank_deficient = false;
};

inline double mi_nats_from_cov(const Eigen::MatrixXd& cov,
                               const std::vector<int>& ia, const std::vector<int>& ib,
                               MiDiagnostics* diag = nullptr) {
    Eigen::MatrixXd sa = cov(ia, ia), sb = cov(ib, ib), sab = cov(ia, ib);
    auto [wa, ra] = whitening_map(sa);
    auto [wb, rb] = whitening_map(sb);
    if (diag && (ra < static_cast<int>(ia.size()) || rb < static_cast<int>(ib.size())))
        diag->rank_deficient = true;
    if (ra == 0 || rb == 0) return 0.0;
    Eigen::MatrixXd c = wa * sab * wb.transpose();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(c);
    double nats = 0.0;
    for (int i = 0; i < svd.singularValues().size(); ++i) {
        double s = svd.singularValues()(i);
        if (s >= 1.0 - 1e-12) {
            if (diag) diag->rank_deficient = true;
            s = 1.0 - 1e-12;
        }
        nats -= 0.5 * std::log1p(-s * s);
    }
    return nats;
}

}  // namespace detail

/// I(A;B) for jointly Gaussian blocks; 1/2 log(det Sa det Sb / det Sab)
/// evaluated on retained subspaces.
inline double gaussian_mi(const GaussianJoint& g, const RoleSet& a, const RoleSet& b,
                          InfoUnit unit = InfoUnit::bits) {
    if (a.empty() || b.empty())
        throw std::invalid_argument("gaussian_mi: empty role subset");
    if (!a.disjoint(b)) throw std::invalid_argument("gaussian_mi: overlapping role sets");
    return from_nats(detail::mi_nats_from_cov(g.cov(), g.indices(a), g.indices(b)), unit);
}

/// I(A;B|C) via the Schur complement of the conditioning block.
inline double gaussian_conditional_mi(const GaussianJoint& g, const RoleSet& a,
                                      const RoleSet& b, const RoleSet& c,
                                      InfoUnit unit = InfoUnit::bits) {
    if (a.empty() || b.empty())
        throw std::invalid_argument("gaussian_conditional_mi: empty role subset");
    if (!a.disjoint(b) || !a.disjoint(c) || !b.disjoint(c))
        throw std::invalid_argument("gaussian_conditional_mi: overlapping role sets");
    if (c.empty()) return gaussian_mi(g, a, b, unit);
    auto iab = g.indices(a.united(b));
    auto ic = g.indices(c);
    Eigen::MatrixXd sc = g.cov()(ic, ic);
    Eigen::MatrixXd cross = g.cov()(iab, ic);
    Eigen::MatrixXd cond = g.cov()(iab, iab) - cross * detail::pinv(sc) * cross.transpose();
    cond = 0.5 * (cond + cond.transpose());
    // Index the conditional matrix: a-rows first, then b-rows.
    const int na = static_cast<int>(g.indices(a).size());
    std::vector<int> ja, jb;
    for (int i = 0; i < na; ++i) ja.push_back(i);
    for (int i = na; i < static_cast<int>(iab.size()); ++i) jb.push_back(i);
    double nats = detail::mi_nats_from_cov(cond, ja, jb);
    if (nats < 0.0 && nats >= -1e-9) nats = 0.0;
    return from_nats(nats, unit);
}

/// Whitens all three blocks. Rank-deficient blocks are projected onto their
/// image; retained dimensions are recorded in the transform.
inline std::pair<GaussianJoint, WhitenTransform> whiten(const GaussianJoint& g) {
    WhitenTransform t;
    for (int i = 0; i < 3; ++i) {
        Role r = static_cast<Role>(i);
        Eigen::MatrixXd sigma = g.block(RoleSet{r}, RoleSet{r});
        auto [w, rank] = detail::whitening_map(sigma);
        if (rank == 0) {
            // Fully degenerate block: keep one dummy coordinate so the joint
            // stays well-formed; its covariance row/column is zero.
            t.forward[i] = Eigen::MatrixXd::Zero(1, sigma.rows());
            t.backward[i] = Eigen::MatrixXd::Zero(sigma.rows(), 1);
            t.ranks[i] = 1;
            t.degenerate[i] = true;
        } else {
            t.forward[i] = w;
            t.backward[i] = sigma * w.transpose();
            t.ranks[i] = rank;
        }
    }
    const int n = t.ranks[0] + t.ranks[1] + t.ranks[2];
    Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(n, n);
    int roff = 0;
    for (int i = 0; i < 3; ++i) {
        int coff = 0;
        for (int j = 0; j < 3; ++j) {
            Eigen::MatrixXd sij =
                g.block(RoleSet{static_cast<Role>(i)}, RoleSet{static_cast<Role>(j)});
            cov.block(roff, coff, t.ranks[i], t.ranks[j]) =
                t.forward[i] * sij * t.forward[j].transpose();
            coff += t.ranks[j];
        }
        roff += t.ranks[i];
    }
    // Snap diagonal blocks to exact identities; they are I up to round-off.
    int off = 0;
    for (int i = 0; i < 3; ++i) {
        cov.block(off, off, t.ranks[i], t.ranks[i]) =
            t.degenerate[i]
                ? Eigen::MatrixXd(Eigen::MatrixXd::Zero(t.ranks[i], t.ranks[i]))
                : Eigen::MatrixXd(Eigen::MatrixXd::Identity(t.ranks[i], t.ranks[i]));
        off += t.ranks[i];
    }
    cov = 0.5 * (cov + cov.transpose());
    return {GaussianJoint({t.ranks[0], t.ranks[1], t.ranks[2]}, cov), t};
}

struct MarkovCheckResult {
    bool holds = false;
    double residual = 0.0;
};

/// Tests the chain first - middle - last via the Gaussian conditional
/// independence identity Sigma_AC = Sigma_AB Sigma_B^+ Sigma_BC.
inline MarkovCheckResult markov_check_gaussian(const GaussianJoint& g,
                                               std::array<Role, 3> chain, double tol) {
    RoleSet a{chain[0]}, w{chain[1]}, y{chain[2]};
    Eigen::MatrixXd sac = g.block(a, y);
    Eigen::MatrixXd pred =
        g.block(a, w) * detail::pinv(g.block(w, w)) * g.block(w, y);
    const double denom = sac.norm();
    const double resid = (sac - pred).norm();
    MarkovCheckResult r;
    r.residual = denom > 0.0 ? resid / denom : resid;
    r.holds = resid <= tol * std::max(denom, 1e-300) || resid <= tol;
    return r;
}

/// Same identity on a raw covariance with explicit index groups; used for
/// extractor validation where T is a fourth block.
inline MarkovCheckResult markov_check_cov(const Eigen::MatrixXd& cov,
                                          const std::vector<int>& ia,
                                          const std::vector<int>& iw,
                                          const std::vector<int>& iy, double tol) {
    Eigen::MatrixXd sac = cov(ia, iy);
    Eigen::MatrixXd pred = cov(ia, iw) * detail::pinv(cov(iw, iw)) * cov(iw, iy);
    const double denom = sac.norm();
    const double resid = (sac - pred).norm();
    MarkovCheckResult r;
    r.residual = denom > 0.0 ? resid / denom : resid;
    r.holds = resid <= tol * std::max(denom, 1e-300) || resid <= tol;
    return r;
}

}  // namespace mui

#endif  // MUI_GAUSSIAN_HPP
