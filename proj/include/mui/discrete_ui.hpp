#ifndef MUI_DISCRETE_UI_HPP
#define MUI_DISCRETE_UI_HPP

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "mui/discrete.hpp"
#include "mui/gaussian_ui.hpp"  // UIDefinition
#include "mui/pid.hpp"
#include "mui/simplex.hpp"

namespace mui {

/// Column-stochastic extractor law p(t | source symbol).
struct Channel {
    int t_size = 0;
    int source_size = 0;
    Eigen::MatrixXd probs;  // t_size x source_size, columns sum to 1

    void validate() const {
        for (int j = 0; j < source_size; ++j) {
            double s = 0.0;
            for (int i = 0; i < t_size; ++i) {
                if (probs(i, j) < -1e-12 || probs(i, j) > 1.0 + 1e-12)
                    throw std::invalid_argument("channel entry outside [0,1]");
                s += probs(i, j);
            }
            if (std::abs(s - 1.0) > 1e-12)
                throw std::invalid_argument("channel column does not sum to 1");
        }
    }
};

/// Linearized feasible set for the extractor channel: column-stochasticity
/// rows plus independence-from-Y rows, over t_card * |source_eff| variables
/// with entries in [0,1]. The unit upper bounds are implied by stochasticity
/// and nonnegativity, so vertices are basic feasible solutions of
/// {A q = b, q >= 0}.
struct ChannelPolytope {
    UIDefinition definition = UIDefinition::TMXY;
    int t_card = 0;
    int source_eff = 0;                  // zero-mass symbols removed
    int source_full = 0;
    std::vector<int> eff_to_full;        // effective column -> alphabet index
    Eigen::MatrixXd a;                   // equality constraints
    Eigen::VectorXd b;

    int var_count() const { return t_card * source_eff; }
    int var_index(int t, int s) const { return t * source_eff + s; }

    double feasibility_residual(const Channel& ch) const {
        Eigen::VectorXd q(var_count());
        for (int t = 0; t < t_card; ++t)
            for (int s = 0; s < source_eff; ++s)
                q(var_index(t, s)) = ch.probs(t, eff_to_full[s]);
        return (a * q - b).cwiseAbs().maxCoeff();
    }
};

namespace detail {

struct UIRoles {
    Role center;  // variable T is extracted from
    Role target;  // variable in the objective
    Role indep;   // variable T must be independent of
};

inline UIRoles ui_roles(UIDefinition def) {
    // TMXY: T-M-XY, objective I(T;X). MYXT: MY-X-T, objective I(T;M).
    return def == UIDefinition::TMXY ? UIRoles{Role::M, Role::X, Role::Y}
                                     : UIRoles{Role::X, Role::M, Role::Y};
}

/// MI in nats of a 2-d joint table.
inline double table_mi_nats(const Eigen::MatrixXd& p) {
    Eigen::VectorXd pr = p.rowwise().sum(), pc = p.colwise().sum();
    double mi = 0.0;
    for (int i = 0; i < p.rows(); ++i)
        for (int j = 0; j < p.cols(); ++j)
            if (p(i, j) > 0.0) mi += p(i, j) * std::log(p(i, j) / (pr(i) * pc(j)));
    return clamp_nonneg(mi);
}

}  // namespace detail

/// Builds the feasible polytope of Definition-style extractor channels:
/// for each source symbol s a stochasticity row, and for each (t, y) with
/// one y dropped an independence row  sum_s q(t|s) (p(s,y) - p(y) p(s)) = 0.
inline ChannelPolytope build_polytope(const DiscreteJoint& joint, UIDefinition def,
                                      int t_card) {
    if (t_card < 1) throw std::invalid_argument("build_polytope: t_card >= 1 required");
    const auto roles = detail::ui_roles(def);
    ChannelPolytope p;
    p.definition = def;
    p.t_card = t_card;
    p.source_full = static_cast<int>(joint.size(roles.center));

    auto [p_center, sc] = joint.marginal(RoleSet{roles.center});
    for (int s = 0; s < p.source_full; ++s)
        if (p_center[s] > 0.0) p.eff_to_full.push_back(s);
    p.source_eff = static_cast<int>(p.eff_to_full.size());

    auto [p_cy, shape_cy] = joint.marginal(RoleSet{roles.center, roles.indep});
    auto [p_y, sy] = joint.marginal(RoleSet{roles.indep});
    const int ny = static_cast<int>(p_y.size());
    // marginal() flattens in fixed (M, X, Y) nesting order; find the stride
    // of the center variable within the (center, indep) table.
    const bool center_first = static_cast<int>(roles.center) < static_cast<int>(roles.indep);
    auto p_center_indep = [&](int s, int y) {
        return center_first ? p_cy[s * ny + y] : p_cy[y * p.source_full + s];
    };

    const int n = p.var_count();
    const int rows = p.source_eff + t_card * (ny - 1);
    p.a = Eigen::MatrixXd::Zero(rows, n);
    p.b = Eigen::VectorXd::Zero(rows);
    int row = 0;
    for (int s = 0; s < p.source_eff; ++s, ++row) {
        for (int t = 0; t < t_card; ++t) p.a(row, p.var_index(t, s)) = 1.0;
        p.b(row) = 1.0;
    }
    // One y per t is redundant (the rows sum to zero over y); drop the last.
    for (int t = 0; t < t_card; ++t) {
        for (int y = 0; y + 1 < ny; ++y, ++row) {
            for (int s = 0; s < p.source_eff; ++s) {
                const int full = p.eff_to_full[s];
                p.a(row, p.var_index(t, s)) =
                    p_center_indep(full, y) - p_y[y] * p_center[full];
            }
        }
    }
    return p;
}

struct VertexSet {
    std::vector<Channel> channels;
    bool exhaustive = false;
    long long bases_examined = 0;
};

namespace detail {

inline Channel assemble_channel(const ChannelPolytope& p, const Eigen::VectorXd& q) {
    Channel ch;
    ch.t_size = p.t_card;
    ch.source_size = p.source_full;
    // Zero-mass source symbols carry an arbitrary feasible column.
    ch.probs = Eigen::MatrixXd::Constant(p.t_card, p.source_full, 1.0 / p.t_card);
    for (int t = 0; t < p.t_card; ++t)
        for (int s = 0; s < p.source_eff; ++s) {
            double v = q(p.var_index(t, s));
            ch.probs(t, p.eff_to_full[s]) = std::min(1.0, std::max(0.0, v));
        }
    return ch;
}

inline bool channel_close(const Channel& a, const Channel& b, double tol = 1e-9) {
    return (a.probs - b.probs).cwiseAbs().maxCoeff() <= tol;
}

/// Independent-row selection for a possibly rank-deficient system.
inline std::pair<Eigen::MatrixXd, Eigen::VectorXd> independent_rows(
    const Eigen::MatrixXd& a, const Eigen::VectorXd& b) {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a.transpose());
    const int r = static_cast<int>(qr.rank());
    const auto& perm = qr.colsPermutation().indices();
    Eigen::MatrixXd ar(r, a.cols());
    Eigen::VectorXd br(r);
    std::vector<int> rows(r);
    for (int i = 0; i < r; ++i) rows[i] = perm(i);
    std::sort(rows.begin(), rows.end());
    for (int i = 0; i < r; ++i) {
        ar.row(i) = a.row(rows[i]);
        br(i) = b(rows[i]);
    }
    return {ar, br};
}

}  // namespace detail

/// All basic feasible solutions of the polytope, deduplicated. Exhaustive
/// unless the vertex limit is hit. Throws when the variable count exceeds
/// the cap; callers should fall back to sample_vertices then.
inline VertexSet enumerate_vertices(const ChannelPolytope& p, int limit = 1000000,
                                    int var_cap = 16) {
    const int n = p.var_count();
    if (n > var_cap)
        throw std::runtime_error(
            "enumerate_vertices: " + std::to_string(n) + " variables exceeds the cap of " +
            std::to_string(var_cap) + "; use sampling mode");
    auto [ar, br] = detail::independent_rows(p.a, p.b);
    const int r = static_cast<int>(ar.rows());
    VertexSet out;
    if (r == 0) {
        out.exhaustive = true;
        return out;  // no constraints would mean an unbounded set; cannot happen
    }
    std::vector<int> comb(r);
    for (int i = 0; i < r; ++i) comb[i] = i;
    bool done = false;
    while (!done) {
        ++out.bases_examined;
        Eigen::MatrixXd basis_cols(r, r);
        for (int i = 0; i < r; ++i) basis_cols.col(i) = ar.col(comb[i]);
        Eigen::FullPivLU<Eigen::MatrixXd> lu(basis_cols);
        lu.setThreshold(1e-9);
        if (lu.rank() == r) {
            Eigen::VectorXd xb = lu.solve(br);
            bool feasible = xb.minCoeff() >= -1e-9;
            if (feasible) {
                Eigen::VectorXd q = Eigen::VectorXd::Zero(n);
                for (int i = 0; i < r; ++i) q(comb[i]) = xb(i);
                if ((p.a * q - p.b).cwiseAbs().maxCoeff() <= 1e-9) {
                    Channel ch = detail::assemble_channel(p, q);
                    bool dup = false;
                    for (const Channel& seen : out.channels)
                        if (detail::channel_close(seen, ch)) { dup = true; break; }
                    if (!dup) {
                        if (static_cast<int>(out.channels.size()) >= limit) {
                            out.exhaustive = false;
                            return out;
                        }
                        out.channels.push_back(std::move(ch));
                    }
                }
            }
        }
        // next lexicographic combination
        int i = r - 1;
        while (i >= 0 && comb[i] == n - r + i) --i;
        if (i < 0) {
            done = true;
        } else {
            ++comb[i];
            for (int j = i + 1; j < r; ++j) comb[j] = comb[j - 1] + 1;
        }
    }
    out.exhaustive = true;
    return out;
}

/// Vertices found by maximizing random linear objectives; deterministic
/// given the seed. Every returned point is a basic feasible solution.
inline std::vector<Channel> sample_vertices(const ChannelPolytope& p, int n_samples,
                                            std::uint64_t seed) {
    if (n_samples < 1) throw std::invalid_argument("sample_vertices: n >= 1 required");
    auto [ar, br] = detail::independent_rows(p.a, p.b);
    SimplexSolver lp;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<Channel> out;
    for (int k = 0; k < n_samples; ++k) {
        Eigen::VectorXd c(p.var_count());
        for (int i = 0; i < c.size(); ++i) c(i) = gauss(rng);
        auto x = lp.maximize(ar, br, c);
        if (!x)
            throw std::runtime_error(
                "sample_vertices: LP reported infeasible/unbounded on a polytope "
                "that is feasible by construction (internal error)");
        out.push_back(detail::assemble_channel(p, *x));
    }
    return out;
}

enum class SolveMode { exact, sample };

struct DiscreteUIResult {
    double value = 0.0;
    InfoUnit unit = InfoUnit::bits;
    UIDefinition definition = UIDefinition::TMXY;
    int t_card = 0;
    Channel optimal_channel;
    SolveMode method = SolveMode::exact;
    long long vertices_examined = 0;
    bool certified = false;
};

struct DiscreteUIOptions {
    SolveMode mode = SolveMode::exact;
    InfoUnit unit = InfoUnit::bits;
    std::uint64_t seed = 0;
    int n_samples = 256;   // sampling mode
    int var_cap = 16;      // exhaustive mode
};

/// Default extractor cardinality: |source alphabet| + 1.
inline int default_t_card(const DiscreteJoint& joint, UIDefinition def) {
    return static_cast<int>(joint.size(detail::ui_roles(def).center)) + 1;
}

/// Exact (or sampled) unique information: the convex objective is maximized
/// over the polytope vertices. Ties break toward the lexicographically
/// smallest channel matrix.
inline DiscreteUIResult ui_discrete(const DiscreteJoint& joint, UIDefinition def,
                                    int t_card, const DiscreteUIOptions& opt = {}) {
    if (def == UIDefinition::MYXT) {
        // Dual of TMXY with the M and X roles exchanged; reuse that path so
        // the identity holds bitwise.
        DiscreteUIResult res = ui_discrete(joint.swapped(Role::M, Role::X),
                                           UIDefinition::TMXY, t_card, opt);
        res.definition = UIDefinition::MYXT;
        return res;
    }
    const auto roles = detail::ui_roles(def);
    ChannelPolytope poly = build_polytope(joint, def, t_card);

    // Joint table p(center, target) restricted to effective source symbols.
    auto [p_ct, shape] = joint.marginal(RoleSet{roles.center, roles.target});
    const int nt = static_cast<int>(joint.size(roles.target));
    const bool center_first =
        static_cast<int>(roles.center) < static_cast<int>(roles.target);
    Eigen::MatrixXd pct(poly.source_eff, nt);
    for (int s = 0; s < poly.source_eff; ++s)
        for (int x = 0; x < nt; ++x) {
            const int full = poly.eff_to_full[s];
            pct(s, x) = center_first ? p_ct[full * nt + x]
                                     : p_ct[x * poly.source_full + full];
        }

    std::vector<Channel> vertices;
    DiscreteUIResult res;
    res.definition = def;
    res.unit = opt.unit;
    res.t_card = t_card;
    res.method = opt.mode;
    if (opt.mode == SolveMode::exact) {
        VertexSet vs = enumerate_vertices(poly, 1000000, opt.var_cap);
        vertices = std::move(vs.channels);
        res.certified = vs.exhaustive;
    } else {
        vertices = sample_vertices(poly, opt.n_samples, opt.seed);
        res.certified = false;
    }
    res.vertices_examined = static_cast<long long>(vertices.size());

    double best = -1.0;
    const Channel* best_ch = nullptr;
    auto lex_smaller = [](const Channel& a, const Channel& b) {
        for (int i = 0; i < a.t_size; ++i)
            for (int j = 0; j < a.source_size; ++j) {
                if (a.probs(i, j) < b.probs(i, j) - 1e-12) return true;
                if (a.probs(i, j) > b.probs(i, j) + 1e-12) return false;
            }
        return false;
    };
    for (const Channel& ch : vertices) {
        Eigen::MatrixXd q(poly.t_card, poly.source_eff);
        for (int t = 0; t < poly.t_card; ++t)
            for (int s = 0; s < poly.source_eff; ++s)
                q(t, s) = ch.probs(t, poly.eff_to_full[s]);
        const double obj = detail::table_mi_nats(q * pct);
        if (best_ch == nullptr || obj > best + 1e-12) {
            best = obj;
            best_ch = &ch;
        } else if (obj >= best - 1e-12 && lex_smaller(ch, *best_ch)) {
            best = std::max(best, obj);
            best_ch = &ch;
        }
    }
    if (best_ch == nullptr)
        throw std::runtime_error("ui_discrete: no feasible vertex found (internal error)");
    res.value = from_nats(std::max(0.0, best), opt.unit);
    res.optimal_channel = *best_ch;
    return res;
}

enum class CanonicalName { RDN, UNQ, XOR, AND };

inline CanonicalName parse_canonical(const std::string& s) {
    std::string u;
    for (char c : s) u.push_back(static_cast<char>(std::toupper(c)));
    if (u == "RDN") return CanonicalName::RDN;
    if (u == "UNQ") return CanonicalName::UNQ;
    if (u == "XOR") return CanonicalName::XOR;
    if (u == "AND") return CanonicalName::AND;
    throw std::invalid_argument("unknown canonical example: " + s);
}

inline std::string canonical_name_str(CanonicalName n) {
    switch (n) {
        case CanonicalName::RDN: return "RDN";
        case CanonicalName::UNQ: return "UNQ";
        case CanonicalName::XOR: return "XOR";
        case CanonicalName::AND: return "AND";
    }
    return "?";
}

/// The four binary-operator examples of the comparison table.
inline DiscreteJoint canonical_example(CanonicalName name) {
    const std::vector<std::string> bit{"0", "1"};
    switch (name) {
        case CanonicalName::RDN: {
            // M = X = Y uniform bit.
            std::vector<double> p(8, 0.0);
            p[(0 * 2 + 0) * 2 + 0] = 0.5;
            p[(1 * 2 + 1) * 2 + 1] = 0.5;
            return DiscreteJoint({{"M", "X", "Y"}}, {{bit, bit, bit}}, std::move(p));
        }
        case CanonicalName::UNQ: {
            // X, Y iid bits; M = (X, Y) on a 4-symbol alphabet.
            std::vector<std::string> pairs{"00", "01", "10", "11"};
            std::vector<double> p(16, 0.0);
            for (int x = 0; x < 2; ++x)
                for (int y = 0; y < 2; ++y) {
                    const int m = 2 * x + y;
                    p[(m * 2 + x) * 2 + y] = 0.25;
                }
            return DiscreteJoint({{"M", "X", "Y"}}, {{pairs, bit, bit}}, std::move(p));
        }
        case CanonicalName::XOR: {
            std::vector<double> p(8, 0.0);
            for (int x = 0; x < 2; ++x)
                for (int y = 0; y < 2; ++y) p[((x ^ y) * 2 + x) * 2 + y] = 0.25;
            return DiscreteJoint({{"M", "X", "Y"}}, {{bit, bit, bit}}, std::move(p));
        }
        case CanonicalName::AND: {
            std::vector<double> p(8, 0.0);
            for (int x = 0; x < 2; ++x)
                for (int y = 0; y < 2; ++y) p[((x & y) * 2 + x) * 2 + y] = 0.25;
            return DiscreteJoint({{"M", "X", "Y"}}, {{bit, bit, bit}}, std::move(p));
        }
    }
    throw std::invalid_argument("unknown canonical example");
}

struct LemmaB1Report {
    double mi_xz = 0.0, mi_yz = 0.0, mi_xy = 0.0;  // nats
    bool x_indep_z = false, y_indep_z = false, x_indep_y = false;
    bool hypothesis = false;  // X indep Z and Y not indep Z
    bool pass = false;        // hypothesis implies X indep Y
};

/// Checks the binary independence-propagation lemma on a joint whose three
/// slots are read as (X, Y, Z) with the chain X - Y - Z. Y and Z must be
/// binary; the chain must hold to the given tolerance.
inline LemmaB1Report lemma_b1_verify(const DiscreteJoint& joint, double tol = 1e-9) {
    const Role rx = Role::M, ry = Role::X, rz = Role::Y;
    if (joint.size(ry) != 2 || joint.size(rz) != 2)
        throw std::invalid_argument("lemma_b1_verify: Y and Z must be binary");
    const double chain = conditional_mutual_information(joint, RoleSet{rx}, RoleSet{rz},
                                                        RoleSet{ry}, InfoUnit::nats);
    if (chain > tol)
        throw std::invalid_argument("lemma_b1_verify: X - Y - Z Markov chain violated");
    LemmaB1Report r;
    r.mi_xz = mutual_information(joint, RoleSet{rx}, RoleSet{rz}, InfoUnit::nats);
    r.mi_yz = mutual_information(joint, RoleSet{ry}, RoleSet{rz}, InfoUnit::nats);
    r.mi_xy = mutual_information(joint, RoleSet{rx}, RoleSet{ry}, InfoUnit::nats);
    r.x_indep_z = r.mi_xz <= tol;
    r.y_indep_z = r.mi_yz <= tol;
    r.x_indep_y = r.mi_xy <= tol;
    r.hypothesis = r.x_indep_z && !r.y_indep_z;
    r.pass = !r.hypothesis || r.x_indep_y;
    return r;
}

/// Full unsymmetrized PID from the discrete solver. UI_Y reuses the same
/// definition with the X and Y roles exchanged.
inline PIDTerms pid_terms_discrete(const DiscreteJoint& joint, UIDefinition def,
                                   int t_card, const DiscreteUIOptions& opt = {}) {
    PIDTerms t;
    t.unit = opt.unit;
    t.i_mx = mutual_information(joint, RoleSet{Role::M}, RoleSet{Role::X}, opt.unit);
    t.i_my = mutual_information(joint, RoleSet{Role::M}, RoleSet{Role::Y}, opt.unit);
    t.i_mx_given_y = conditional_mutual_information(joint, RoleSet{Role::M},
                                                    RoleSet{Role::X}, RoleSet{Role::Y},
                                                    opt.unit);
    t.i_my_given_x = conditional_mutual_information(joint, RoleSet{Role::M},
                                                    RoleSet{Role::Y}, RoleSet{Role::X},
                                                    opt.unit);
    t.ui_x = ui_discrete(joint, def, t_card, opt).value;
    t.ui_y = ui_discrete(joint.swapped(Role::X, Role::Y), def, t_card, opt).value;
    t.finish();
    return t;
}

}  // namespace mui

#endif  // MUI_DISCRETE_UI_HPP
