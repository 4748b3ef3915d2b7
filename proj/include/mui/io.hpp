#ifndef MUI_IO_HPP
#define MUI_IO_HPP

#include <json.hpp>

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

#include "mui/discrete.hpp"
#include "mui/discrete_ui.hpp"
#include "mui/gaussian.hpp"
#include "mui/gaussian_ui.hpp"
#include "mui/pid.hpp"
#include "mui/verify.hpp"

namespace mui::io {

using nlohmann::json;

/// Thrown on malformed or invalid input files; the CLI maps it to exit 2.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Discrete joint schema:
///   {"variables": {"M": [symbols], "X": [...], "Y": [...]},
///    "p": nested array indexed [m][x][y]}
inline DiscreteJoint parse_discrete_joint(const json& j) {
    if (!j.contains("variables") || !j.contains("p"))
        throw InputError("discrete joint: expected fields 'variables' and 'p'");
    const json& vars = j.at("variables");
    std::array<std::string, 3> names{"M", "X", "Y"};
    std::array<std::vector<std::string>, 3> alphabets;
    for (int i = 0; i < 3; ++i) {
        if (!vars.contains(names[i]))
            throw InputError("discrete joint: missing variable '" + names[i] + "'");
        for (const auto& s : vars.at(names[i]))
            alphabets[i].push_back(s.get<std::string>());
        if (alphabets[i].empty())
            throw InputError("discrete joint: empty alphabet for '" + names[i] + "'");
    }
    const json& p = j.at("p");
    std::vector<double> probs;
    double total = 0.0;
    if (p.size() != alphabets[0].size())
        throw InputError("discrete joint: 'p' outer size != |M| alphabet");
    for (const auto& pm : p) {
        if (pm.size() != alphabets[1].size())
            throw InputError("discrete joint: 'p' middle size != |X| alphabet");
        for (const auto& px : pm) {
            if (px.size() != alphabets[2].size())
                throw InputError("discrete joint: 'p' inner size != |Y| alphabet");
            for (const auto& v : px) {
                const double d = v.get<double>();
                if (d < 0.0) throw InputError("discrete joint: negative probability");
                probs.push_back(d);
                total += d;
            }
        }
    }
    if (std::abs(total - 1.0) > 1e-6)
        throw InputError("discrete joint: probabilities sum to " + std::to_string(total) +
                         ", expected 1 (tol 1e-6)");
    for (auto& v : probs) v /= total;
    try {
        return DiscreteJoint(names, alphabets, std::move(probs));
    } catch (const std::invalid_argument& e) {
        throw InputError(std::string("discrete joint: ") + e.what());
    }
}

/// Gaussian joint schema:
///   {"dims": {"M": dm, "X": dx, "Y": dy},
///    "cov": row-major flat array of length (dm+dx+dy)^2}
inline GaussianJoint parse_gaussian_joint(const json& j) {
    if (!j.contains("dims") || !j.contains("cov"))
        throw InputError("gaussian joint: expected fields 'dims' and 'cov'");
    const json& dj = j.at("dims");
    std::array<int, 3> dims;
    const char* keys[3] = {"M", "X", "Y"};
    for (int i = 0; i < 3; ++i) {
        if (!dj.contains(keys[i]))
            throw InputError(std::string("gaussian joint: missing dim '") + keys[i] + "'");
        dims[i] = dj.at(keys[i]).get<int>();
        if (dims[i] < 1)
            throw InputError(std::string("gaussian joint: dim '") + keys[i] + "' must be >= 1");
    }
    const int n = dims[0] + dims[1] + dims[2];
    const json& cj = j.at("cov");
    if (static_cast<int>(cj.size()) != n * n)
        throw InputError("gaussian joint: 'cov' must have length " + std::to_string(n * n));
    Eigen::MatrixXd cov(n, n);
    int k = 0;
    for (const auto& v : cj) {
        cov(k / n, k % n) = v.get<double>();
        ++k;
    }
    const double scale = std::max(1.0, cov.cwiseAbs().maxCoeff());
    if ((cov - cov.transpose()).cwiseAbs().maxCoeff() > 1e-8 * scale)
        throw InputError("gaussian joint: covariance not symmetric (tol 1e-8)");
    cov = 0.5 * (cov + cov.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov, Eigen::EigenvaluesOnly);
    const double emax = std::max(0.0, es.eigenvalues().maxCoeff());
    if (es.eigenvalues().minCoeff() < -1e-8 * std::max(emax, 1.0))
        throw InputError("gaussian joint: covariance not positive semidefinite (tol 1e-8)");
    try {
        return GaussianJoint(dims, cov);
    } catch (const std::invalid_argument& e) {
        throw InputError(std::string("gaussian joint: ") + e.what());
    }
}

inline json to_json(const GaussianJoint& g) {
    json j;
    j["dims"] = {{"M", g.dim(Role::M)}, {"X", g.dim(Role::X)}, {"Y", g.dim(Role::Y)}};
    std::vector<double> flat;
    for (int r = 0; r < g.total_dim(); ++r)
        for (int c = 0; c < g.total_dim(); ++c) flat.push_back(g.cov()(r, c));
    j["cov"] = flat;
    return j;
}

inline json to_json(const DiscreteJoint& d) {
    json vars;
    const char* keys[3] = {"M", "X", "Y"};
    for (int i = 0; i < 3; ++i) vars[keys[i]] = d.alphabet(static_cast<Role>(i));
    json p = json::array();
    for (std::size_t m = 0; m < d.size(Role::M); ++m) {
        json pm = json::array();
        for (std::size_t x = 0; x < d.size(Role::X); ++x) {
            json px = json::array();
            for (std::size_t y = 0; y < d.size(Role::Y); ++y) px.push_back(d.p(m, x, y));
            pm.push_back(px);
        }
        p.push_back(pm);
    }
    return json{{"variables", vars}, {"p", p}};
}

inline std::vector<double> row_major(const Eigen::MatrixXd& m) {
    std::vector<double> v;
    v.reserve(static_cast<std::size_t>(m.size()));
    for (int r = 0; r < m.rows(); ++r)
        for (int c = 0; c < m.cols(); ++c) v.push_back(m(r, c));
    return v;
}

inline json to_json(const GaussianUIResult& r) {
    return json{{"value", r.value},
                {"unit", unit_name(r.unit)},
                {"definition", definition_name(r.definition)},
                {"kernel_dim", r.kernel_dim},
                {"extractor_cross_cov", row_major(r.extractor_cross_cov)},
                {"diagnostics",
                 {{"whitened_ranks",
                   {r.whiten_record.ranks[0], r.whiten_record.ranks[1],
                    r.whiten_record.ranks[2]}}}}};
}

inline json to_json(const DiscreteUIResult& r) {
    return json{{"value", r.value},
                {"unit", unit_name(r.unit)},
                {"definition", definition_name(r.definition)},
                {"t_card", r.t_card},
                {"method", r.method == SolveMode::exact ? "exhaustive_vertex" : "sampled_vertex"},
                {"certified", r.certified},
                {"optimal_channel", row_major(r.optimal_channel.probs)},
                {"vertices_examined", r.vertices_examined}};
}

inline json to_json(const PIDTerms& t) {
    return json{{"unit", unit_name(t.unit)},
                {"i_mx", t.i_mx},
                {"i_my", t.i_my},
                {"i_mx_given_y", t.i_mx_given_y},
                {"i_my_given_x", t.i_my_given_x},
                {"ui_x", t.ui_x},
                {"ui_y", t.ui_y},
                {"r_x", t.r_x},
                {"r_y", t.r_y},
                {"s_x", t.s_x},
                {"s_y", t.s_y}};
}

/// Serialized reports omit wall-clock time so identical runs are
/// byte-identical.
inline json to_json(const SuiteReport& r) {
    json failures = json::array();
    for (const auto& f : r.failures)
        failures.push_back(
            {{"fingerprint", f.fingerprint}, {"observed", f.observed}, {"bound", f.bound}});
    return json{{"suite_name", r.suite_name},
                {"trials", r.trials},
                {"rng_seed", r.rng_seed},
                {"failures", failures},
                {"notes", r.notes},
                {"passed", r.passed()}};
}

}  // namespace mui::io

#endif  // MUI_IO_HPP
