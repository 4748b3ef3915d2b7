#include <doctest.h>

#include <random>

#include "mui/io.hpp"
#include "mui/mui.hpp"

using namespace mui;
using mui::io::InputError;
using nlohmann::json;

namespace {

json discrete_sample() {
    return json{{"variables",
                 {{"M", {"0", "1"}}, {"X", {"0", "1"}}, {"Y", {"0", "1"}}}},
                {"p",
                 {{{0.25, 0.0}, {0.0, 0.25}}, {{0.0, 0.25}, {0.25, 0.0}}}}};
}

json gaussian_sample() {
    return json{{"dims", {{"M", 1}, {"X", 1}, {"Y", 1}}},
                {"cov", {1.0, 0.6, 0.3, 0.6, 1.0, 0.0, 0.3, 0.0, 1.0}}};
}

}  // namespace

TEST_CASE("parse_discrete_joint") {
    SUBCASE("valid input parses") {
        DiscreteJoint j = io::parse_discrete_joint(discrete_sample());
        CHECK(j.size(Role::M) == 2);
        CHECK(j.p(0, 0, 0) == 0.25);
        CHECK(j.p(0, 1, 1) == 0.25);
    }
    SUBCASE("small normalization drift is renormalized") {
        json s = discrete_sample();
        s["p"][0][0][0] = 0.25 + 5e-7;
        DiscreteJoint j = io::parse_discrete_joint(s);
        double total = 0;
        for (double p : j.probs()) total += p;
        CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("rejections") {
        json s = discrete_sample();
        s.erase("p");
        CHECK_THROWS_AS(io::parse_discrete_joint(s), InputError);

        s = discrete_sample();
        s["p"][0][0][0] = 0.5;  // sum 1.25
        CHECK_THROWS_AS(io::parse_discrete_joint(s), InputError);

        s = discrete_sample();
        s["p"][0][0][0] = -0.25;
        CHECK_THROWS_AS(io::parse_discrete_joint(s), InputError);

        s = discrete_sample();
        s["variables"]["Y"] = {"0", "1", "2"};  // shape mismatch
        CHECK_THROWS_AS(io::parse_discrete_joint(s), InputError);

        s = discrete_sample();
        s["variables"].erase("X");
        CHECK_THROWS_AS(io::parse_discrete_joint(s), InputError);
    }
}

TEST_CASE("parse_gaussian_joint") {
    SUBCASE("valid input parses") {
        GaussianJoint g = io::parse_gaussian_joint(gaussian_sample());
        CHECK(g.total_dim() == 3);
        CHECK(g.block(RoleSet{Role::M}, RoleSet{Role::X})(0, 0) == 0.6);
    }
    SUBCASE("rejections") {
        json s = gaussian_sample();
        s["cov"][1] = 0.9;  // asymmetric
        CHECK_THROWS_AS(io::parse_gaussian_joint(s), InputError);

        s = gaussian_sample();
        s["cov"] = {1.0, 0.99, 0.99, 0.99, 1.0, -0.99, 0.99, -0.99, 1.0};  // indefinite
        CHECK_THROWS_AS(io::parse_gaussian_joint(s), InputError);

        s = gaussian_sample();
        s["cov"].erase(8);  // wrong length
        CHECK_THROWS_AS(io::parse_gaussian_joint(s), InputError);

        s = gaussian_sample();
        s["dims"]["X"] = 0;
        CHECK_THROWS_AS(io::parse_gaussian_joint(s), InputError);

        s = gaussian_sample();
        s.erase("dims");
        CHECK_THROWS_AS(io::parse_gaussian_joint(s), InputError);
    }
}

TEST_CASE("round trips") {
    SUBCASE("discrete") {
        std::mt19937_64 rng(5);
        for (int t = 0; t < 10; ++t) {
            DiscreteJoint j = gen::random_discrete_joint(rng, 3, 2, 2, t % 2 == 0);
            DiscreteJoint k = io::parse_discrete_joint(io::to_json(j));
            for (std::size_t i = 0; i < j.probs().size(); ++i)
                CHECK(k.probs()[i] == doctest::Approx(j.probs()[i]).epsilon(1e-12));
            CHECK(k.alphabet(Role::M) == j.alphabet(Role::M));
        }
    }
    SUBCASE("gaussian") {
        std::mt19937_64 rng(6);
        for (int t = 0; t < 10; ++t) {
            GaussianJoint g = gen::random_gaussian_joint(rng, 2, 1, 2);
            GaussianJoint h = io::parse_gaussian_joint(io::to_json(g));
            CHECK(h.dims() == g.dims());
            CHECK((h.cov() - g.cov()).cwiseAbs().maxCoeff() <= 1e-15);
        }
    }
}

TEST_CASE("result serialization fields") {
    GaussianJoint g = io::parse_gaussian_joint(gaussian_sample());
    json gr = io::to_json(ui_gaussian(g, UIDefinition::TMXY));
    for (const char* k :
         {"value", "unit", "definition", "kernel_dim", "extractor_cross_cov",
          "diagnostics"})
        CHECK(gr.contains(k));
    CHECK(gr["definition"] == "TMXY");
    CHECK(gr["unit"] == "bits");

    DiscreteJoint j = canonical_example(CanonicalName::AND);
    json dr = io::to_json(ui_discrete(j, UIDefinition::TMXY, 3));
    for (const char* k : {"value", "unit", "definition", "t_card", "method",
                          "certified", "optimal_channel", "vertices_examined"})
        CHECK(dr.contains(k));
    CHECK(dr["method"] == "exhaustive_vertex");
    CHECK(dr["certified"] == true);
    CHECK(dr["t_card"] == 3);

    json pr = io::to_json(pid_terms_gaussian(g, UIDefinition::TMXY));
    for (const char* k : {"unit", "i_mx", "i_my", "i_mx_given_y", "i_my_given_x",
                          "ui_x", "ui_y", "r_x", "r_y", "s_x", "s_y"})
        CHECK(pr.contains(k));

    json sr = io::to_json(nonnegativity_suite(Domain::gaussian, 2, 1));
    for (const char* k : {"suite_name", "trials", "rng_seed", "failures", "notes",
                          "passed"})
        CHECK(sr.contains(k));
    CHECK_FALSE(sr.contains("elapsed"));
    CHECK(sr["passed"] == true);
}
