#ifndef MUI_DISCRETE_HPP
#define MUI_DISCRETE_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "mui/units.hpp"

namespace mui {

/// The three base variables, in storage order.
enum class Role : int { M = 0, X = 1, Y = 2 };

/// An unordered subset of {M, X, Y}.
struct RoleSet {
    std::array<bool, 3> mask{false, false, false};

    RoleSet() = default;
    RoleSet(std::initializer_list<Role> roles) {
        for (Role r : roles) mask[static_cast<int>(r)] = true;
    }

    bool contains(Role r) const { return mask[static_cast<int>(r)]; }
    bool empty() const { return !mask[0] && !mask[1] && !mask[2]; }
    bool disjoint(const RoleSet& o) const {
        for (int i = 0; i < 3; ++i)
            if (mask[i] && o.mask[i]) return false;
        return true;
    }
    RoleSet united(const RoleSet& o) const {
        RoleSet r;
        for (int i = 0; i < 3; ++i) r.mask[i] = mask[i] || o.mask[i];
        return r;
    }
};

/// Finite tabular joint distribution p(m, x, y) over named alphabets.
/// Tensor is dense, indexed [m][x][y].
class DiscreteJoint {
public:
    DiscreteJoint(std::array<std::string, 3> var_names,
                  std::array<std::vector<std::string>, 3> alphabets,
                  std::vector<double> probs)
        : var_names_(std::move(var_names)),
          alphabets_(std::move(alphabets)),
          probs_(std::move(probs)) {
        for (const auto& a : alphabets_)
            if (a.empty()) throw std::invalid_argument("empty alphabet");
        const std::size_t expect = size(Role::M) * size(Role::X) * size(Role::Y);
        if (probs_.size() != expect)
            throw std::invalid_argument("probability tensor shape mismatch");
        double total = 0.0;
        for (double p : probs_) {
            if (p < -1e-12) throw std::invalid_argument("negative probability");
            total += p;
        }
        if (std::abs(total - 1.0) > 1e-9)
            throw std::invalid_argument("probabilities do not sum to 1");
    }

    std::size_t size(Role r) const { return alphabets_[static_cast<int>(r)].size(); }
    const std::array<std::string, 3>& var_names() const { return var_names_; }
    const std::vector<std::string>& alphabet(Role r) const {
        return alphabets_[static_cast<int>(r)];
    }
    const std::vector<double>& probs() const { return probs_; }

    double p(std::size_t m, std::size_t x, std::size_t y) const {
        return probs_[(m * size(Role::X) + x) * size(Role::Y) + y];
    }

    /// Joint with two roles exchanged (relabeling, probabilities permuted).
    DiscreteJoint swapped(Role a, Role b) const {
        const int ia = static_cast<int>(a), ib = static_cast<int>(b);
        std::array<int, 3> perm{0, 1, 2};
        std::swap(perm[ia], perm[ib]);
        std::array<std::string, 3> names;
        std::array<std::vector<std::string>, 3> alphas;
        for (int i = 0; i < 3; ++i) {
            names[i] = var_names_[perm[i]];
            alphas[i] = alphabets_[perm[i]];
        }
        const std::size_t n0 = alphas[0].size(), n1 = alphas[1].size(), n2 = alphas[2].size();
        std::vector<double> q(n0 * n1 * n2);
        for (std::size_t m = 0; m < size(Role::M); ++m)
            for (std::size_t x = 0; x < size(Role::X); ++x)
                for (std::size_t y = 0; y < size(Role::Y); ++y) {
                    std::array<std::size_t, 3> idx{m, x, y};
                    std::array<std::size_t, 3> out;
                    for (int i = 0; i < 3; ++i) out[i] = idx[perm[i]];
                    q[(out[0] * n1 + out[1]) * n2 + out[2]] = p(m, x, y);
                }
        return DiscreteJoint(names, alphas, std::move(q));
    }

    /// Marginal over the given subset, flattened in (m, x, y) nesting order.
    /// Returns the table and its shape (sizes of included roles, in order).
    std::pair<std::vector<double>, std::vector<std::size_t>> marginal(
        const RoleSet& roles) const {
        std::vector<std::size_t> shape;
        for (int i = 0; i < 3; ++i)
            if (roles.mask[i]) shape.push_back(alphabets_[i].size());
        std::size_t n = 1;
        for (std::size_t s : shape) n *= s;
        std::vector<double> out(n, 0.0);
        for (std::size_t m = 0; m < size(Role::M); ++m)
            for (std::size_t x = 0; x < size(Role::X); ++x)
                for (std::size_t y = 0; y < size(Role::Y); ++y) {
                    std::array<std::size_t, 3> idx{m, x, y};
                    std::size_t flat = 0;
                    for (int i = 0; i < 3; ++i)
                        if (roles.mask[i]) flat = flat * alphabets_[i].size() + idx[i];
                    out[flat] += p(m, x, y);
                }
        return {std::move(out), std::move(shape)};
    }

private:
    std::array<std::string, 3> var_names_;
    std::array<std::vector<std::string>, 3> alphabets_;
    std::vector<double> probs_;
};

namespace detail {

/// Shannon entropy of a flat table in nats, with 0 log 0 := 0.
inline double entropy_nats(const std::vector<double>& p) {
    double h = 0.0;
    for (double v : p)
        if (v > 0.0) h -= v * std::log(v);
    return h;
}

inline double clamp_nonneg(double v, double tol = 1e-9) {
    if (v >= 0.0) return v;
    if (v >= -tol) return 0.0;
    throw std::runtime_error("provably non-negative quantity came out negative: " +
                             std::to_string(v));
}

}  // namespace detail

/// H over the marginal of the given subset.
inline double entropy(const DiscreteJoint& joint, const RoleSet& vars,
                      InfoUnit unit = InfoUnit::bits) {
    if (vars.empty()) throw std::invalid_argument("entropy: empty role subset");
    auto [table, shape] = joint.marginal(vars);
    return from_nats(detail::entropy_nats(table), unit);
}

/// I(A;B) = H(A) + H(B) - H(A,B).
inline double mutual_information(const DiscreteJoint& joint, const RoleSet& a,
                                 const RoleSet& b, InfoUnit unit = InfoUnit::bits) {
    if (a.empty() || b.empty())
        throw std::invalid_argument("mutual_information: empty role subset");
    if (!a.disjoint(b))
        throw std::invalid_argument("mutual_information: overlapping role sets");
    double nats = detail::entropy_nats(joint.marginal(a).first) +
                  detail::entropy_nats(joint.marginal(b).first) -
                  detail::entropy_nats(joint.marginal(a.united(b)).first);
    return from_nats(detail::clamp_nonneg(nats), unit);
}

/// I(A;B|C) = H(A,C) + H(B,C) - H(A,B,C) - H(C). Empty C reduces to I(A;B).
inline double conditional_mutual_information(const DiscreteJoint& joint,
                                             const RoleSet& a, const RoleSet& b,
                                             const RoleSet& c,
                                             InfoUnit unit = InfoUnit::bits) {
    if (a.empty() || b.empty())
        throw std::invalid_argument("conditional_mutual_information: empty role subset");
    if (!a.disjoint(b) || !a.disjoint(c) || !b.disjoint(c))
        throw std::invalid_argument("conditional_mutual_information: overlapping role sets");
    if (c.empty()) return mutual_information(joint, a, b, unit);
    double nats = detail::entropy_nats(joint.marginal(a.united(c)).first) +
                  detail::entropy_nats(joint.marginal(b.united(c)).first) -
                  detail::entropy_nats(joint.marginal(a.united(b).united(c)).first) -
                  detail::entropy_nats(joint.marginal(c).first);
    return from_nats(detail::clamp_nonneg(nats), unit);
}

}  // namespace mui

#endif  // MUI_DISCRETE_HPP
