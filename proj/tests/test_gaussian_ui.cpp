#include <doctest.h>

#include <random>

#include "mui/mui.hpp"

using namespace mui;

namespace {
const RoleSet M{Role::M}, X{Role::X}, Y{Role::Y};

GaussianJoint scalar_family(double rho_mx, double rho_my, double rho_xy) {
    Eigen::MatrixXd c(3, 3);
    c << 1, rho_mx, rho_my, rho_mx, 1, rho_xy, rho_my, rho_xy, 1;
    return GaussianJoint({1, 1, 1}, c);
}
}  // namespace

TEST_CASE("kernel_basis") {
    SUBCASE("zero matrix: everything is in the kernel") {
        KernelBasis kb = kernel_basis(Eigen::MatrixXd::Zero(2, 4));
        CHECK(kb.basis.cols() == 4);
        CHECK((kb.basis.transpose() * kb.basis - Eigen::MatrixXd::Identity(4, 4)).norm() <
              1e-10);
    }
    SUBCASE("coordinate kernel of a 1x2 row") {
        Eigen::MatrixXd m(1, 2);
        m << 1, 0;
        KernelBasis kb = kernel_basis(m);
        REQUIRE(kb.basis.cols() == 1);
        CHECK(kb.basis(0, 0) == doctest::Approx(0.0));
        CHECK(kb.basis(1, 0) == doctest::Approx(1.0));
    }
    SUBCASE("full-rank square input yields an empty basis") {
        Eigen::MatrixXd m(2, 2);
        m << 2, 1, 0, 1;
        CHECK(kernel_basis(m).basis.cols() == 0);
    }
    SUBCASE("random rank-2 2x4 matrix: residual and Gram checks") {
        std::mt19937_64 rng(3);
        std::normal_distribution<double> gauss(0.0, 1.0);
        for (int t = 0; t < 20; ++t) {
            Eigen::MatrixXd m(2, 4);
            for (int i = 0; i < 8; ++i) m(i / 4, i % 4) = gauss(rng);
            KernelBasis kb = kernel_basis(m);
            REQUIRE(kb.basis.cols() == 2);
            CHECK((m * kb.basis).norm() <= 1e-10 * m.norm());
            CHECK((kb.basis.transpose() * kb.basis - Eigen::MatrixXd::Identity(2, 2))
                      .norm() < 1e-10);
        }
    }
    SUBCASE("deterministic sign convention") {
        std::mt19937_64 rng(4);
        std::normal_distribution<double> gauss(0.0, 1.0);
        Eigen::MatrixXd m(2, 4);
        for (int i = 0; i < 8; ++i) m(i / 4, i % 4) = gauss(rng);
        KernelBasis a = kernel_basis(m), b = kernel_basis(m);
        CHECK((a.basis - b.basis).norm() == 0.0);
    }
}

TEST_CASE("ui_gaussian closed form") {
    SUBCASE("counterexample family: full-rank cross-covariance kills UI") {
        GaussianJoint g = counterexample_family(UIDefinition::TMXY, 0.6, 0.3);
        GaussianUIResult r = ui_gaussian(g, UIDefinition::TMXY);
        CHECK(r.value == doctest::Approx(0.0));
        CHECK(r.kernel_dim == 0);
        GaussianUIResult ry =
            ui_gaussian(g.swapped(Role::X, Role::Y), UIDefinition::TMXY);
        CHECK(ry.value == doctest::Approx(0.0));
    }
    SUBCASE("Y independent of M: UI reduces to full MI") {
        GaussianJoint g = scalar_family(0.6, 0.0, 0.0);
        GaussianUIResult r = ui_gaussian(g, UIDefinition::TMXY);
        CHECK(r.kernel_dim == 1);
        CHECK(r.value == doctest::Approx(gaussian_mi(g, M, X)).epsilon(1e-12));
        CHECK(r.value == doctest::Approx(-0.5 * std::log2(0.64)).epsilon(1e-12));
    }
    SUBCASE("M identical to Y: trivial kernel, UI 0") {
        Eigen::MatrixXd c(3, 3);
        c << 1, 0.4, 1, 0.4, 1, 0.4, 1, 0.4, 1;
        GaussianJoint g({1, 1, 1}, c);
        GaussianUIResult r = ui_gaussian(g, UIDefinition::TMXY);
        CHECK(r.value == doctest::Approx(0.0));
        CHECK(r.kernel_dim == 0);
    }
    SUBCASE("kernel-rank collapse: trivial kernel means exactly zero") {
        std::mt19937_64 rng(17);
        int seen = 0;
        for (int t = 0; t < 40; ++t) {
            GaussianJoint g = gen::random_gaussian_joint(rng, 2, 2, 2);
            GaussianUIResult r = ui_gaussian(g, UIDefinition::TMXY);
            if (r.kernel_dim == 0) {
                CHECK(r.value == 0.0);
                ++seen;
            }
        }
        CHECK(seen > 0);  // dy >= dm makes trivial kernels generic
    }
}

TEST_CASE("ui_gaussian invariance and bounds") {
    std::mt19937_64 rng(23);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_int_distribution<int> dim(1, 4);
    for (int t = 0; t < 30; ++t) {
        GaussianJoint g = gen::random_gaussian_joint(rng, dim(rng), dim(rng), dim(rng),
                                                     t % 4 == 3);
        const double ui = ui_gaussian(g, UIDefinition::TMXY, InfoUnit::nats).value;
        CHECK(ui <= gaussian_mi(g, M, X, InfoUnit::nats) + 1e-9);
        CHECK(ui <= gaussian_conditional_mi(g, M, X, Y, InfoUnit::nats) + 1e-9);
        // invariance under independent invertible transforms of each block
        const int n = g.total_dim();
        Eigen::MatrixXd big = Eigen::MatrixXd::Zero(n, n);
        int off = 0;
        for (int i = 0; i < 3; ++i) {
            const int d = g.dim(static_cast<Role>(i));
            Eigen::MatrixXd a(d, d);
            do {
                for (int k = 0; k < d * d; ++k) a(k / d, k % d) = gauss(rng);
            } while (std::abs(a.determinant()) < 0.1);
            big.block(off, off, d, d) = a;
            off += d;
        }
        GaussianJoint tg(g.dims(), big * g.cov() * big.transpose());
        const double tui = ui_gaussian(tg, UIDefinition::TMXY, InfoUnit::nats).value;
        CHECK(tui == doctest::Approx(ui).epsilon(1e-8));
    }
}

TEST_CASE("TMXY/MYXT duality") {
    std::mt19937_64 rng(31);
    std::uniform_int_distribution<int> dim(1, 3);
    for (int t = 0; t < 25; ++t) {
        GaussianJoint g = gen::random_gaussian_joint(rng, dim(rng), dim(rng), dim(rng));
        const double myxt = ui_gaussian(g, UIDefinition::MYXT, InfoUnit::nats).value;
        const double swapped =
            ui_gaussian(g.swapped(Role::M, Role::X), UIDefinition::TMXY, InfoUnit::nats)
                .value;
        CHECK(myxt == swapped);  // same computation by construction
    }
}

TEST_CASE("optimal_extractor") {
    SUBCASE("Y independent of M, scalar: T = M") {
        GaussianJoint g = scalar_family(0.6, 0.0, 0.0);
        GaussianExtractor e = optimal_extractor(g, UIDefinition::TMXY);
        REQUIRE_FALSE(e.degenerate);
        REQUIRE(e.t_dim == 1);
        CHECK(std::abs(e.cov(0, 1)) == doctest::Approx(1.0).epsilon(1e-12));  // Sigma_TM
        const double itx = detail::mi_nats_from_cov(e.cov, e.t_indices(), e.block_indices(1));
        CHECK(from_nats(itx, InfoUnit::bits) ==
              doctest::Approx(gaussian_mi(g, M, X)).epsilon(1e-9));
    }
    SUBCASE("counterexample family: degenerate, no extractor") {
        GaussianJoint g = counterexample_family(UIDefinition::TMXY, 0.6, 0.3);
        GaussianExtractor e = optimal_extractor(g, UIDefinition::TMXY);
        CHECK(e.degenerate);
        CHECK(e.t_dim == 0);
    }
    SUBCASE("whitened 2-dim M with Sigma_YM = [0.9 0]") {
        // M 2-dim white, X scalar, Y scalar; only the second M coordinate is
        // deniable, so UI depends on b alone.
        const double a = 0.3, b = 0.5;
        Eigen::MatrixXd c = Eigen::MatrixXd::Identity(4, 4);
        c(0, 2) = c(2, 0) = a;  // M1-X
        c(1, 2) = c(2, 1) = b;  // M2-X
        c(0, 3) = c(3, 0) = 0.9;  // M1-Y
        GaussianJoint g({2, 1, 1}, c);
        GaussianUIResult r = ui_gaussian(g, UIDefinition::TMXY, InfoUnit::nats);
        REQUIRE(r.kernel_dim == 1);
        CHECK(r.value == doctest::Approx(-0.5 * std::log(1 - b * b)).epsilon(1e-6));
        NumericUIReport num = numeric_ui_verify(g, UIDefinition::TMXY, 8, 99);
        CHECK(std::abs(num.gap_nats) < 1e-6);
    }
    SUBCASE("random instances with nontrivial kernel: markov + independence + value") {
        std::mt19937_64 rng(41);
        std::uniform_int_distribution<int> dm(2, 4), dsmall(1, 2);
        int checked = 0;
        for (int t = 0; t < 40 && checked < 25; ++t) {
            GaussianJoint g = gen::random_gaussian_joint(rng, dm(rng), dsmall(rng), 1);
            GaussianExtractor e = optimal_extractor(g, UIDefinition::TMXY, InfoUnit::nats);
            if (e.degenerate) continue;
            ++checked;
            // Sigma_TY vanishes
            Eigen::MatrixXd sty = e.cov(e.t_indices(), e.block_indices(2));
            CHECK(sty.norm() <= 1e-9);
            // Markov chain T - M - (X,Y)
            std::vector<int> ixy = e.block_indices(1);
            for (int i : e.block_indices(2)) ixy.push_back(i);
            auto mc = markov_check_cov(e.cov, e.t_indices(), e.block_indices(0), ixy, 1e-8);
            CHECK(mc.holds);
            // objective matches the closed form
            const double itx =
                detail::mi_nats_from_cov(e.cov, e.t_indices(), e.block_indices(1));
            CHECK(itx == doctest::Approx(e.ui.value).epsilon(1e-9));
            // output covariance is PSD
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(e.cov, Eigen::EigenvaluesOnly);
            CHECK(es.eigenvalues().minCoeff() >= -1e-9);
        }
        CHECK(checked == 25);
    }
}

TEST_CASE("numeric_ui_verify agrees with the closed form") {
    SUBCASE("trivial kernel: numeric value 0") {
        GaussianJoint g = counterexample_family(UIDefinition::TMXY, 0.6, 0.3);
        NumericUIReport r = numeric_ui_verify(g, UIDefinition::TMXY, 4, 1);
        CHECK(r.numeric_nats == 0.0);
        CHECK(r.gap_nats == 0.0);
    }
    SUBCASE("scalar with independent Y") {
        GaussianJoint g = scalar_family(0.6, 0.0, 0.0);
        NumericUIReport r = numeric_ui_verify(g, UIDefinition::TMXY, 8, 2);
        CHECK(from_nats(r.numeric_nats, InfoUnit::bits) ==
              doctest::Approx(-0.5 * std::log2(0.64)).epsilon(1e-6));
        CHECK(std::abs(r.gap_nats) <= 1e-6);
    }
    SUBCASE("random rectangular instances") {
        std::mt19937_64 rng(53);
        for (int t = 0; t < 10; ++t) {
            GaussianJoint g = gen::random_gaussian_joint(rng, 3, 3, 2);
            NumericUIReport r = numeric_ui_verify(g, UIDefinition::TMXY, 16, 100 + t);
            CHECK(r.numeric_nats <= r.closed_form_nats + 1e-9);
            CHECK(r.numeric_nats >= r.closed_form_nats - 1e-6);
        }
    }
}

TEST_CASE("counterexample_family construction") {
    GaussianJoint tm = counterexample_family(UIDefinition::TMXY, 0.6, 0.3);
    // spec'd display matrix is in (X, Y, M) order; ours is (M, X, Y)
    CHECK(tm.block(M, X)(0, 0) == doctest::Approx(0.6));
    CHECK(tm.block(M, Y)(0, 0) == doctest::Approx(0.3));
    CHECK(tm.block(X, Y)(0, 0) == doctest::Approx(0.0));
    GaussianJoint my = counterexample_family(UIDefinition::MYXT, 0.6, 0.3);
    CHECK(my.block(X, Y)(0, 0) == doctest::Approx(0.6));
    CHECK(my.block(M, X)(0, 0) == doctest::Approx(0.3));
    CHECK(my.block(M, Y)(0, 0) == doctest::Approx(0.0));
    CHECK_THROWS_AS(counterexample_family(UIDefinition::TMXY, 0.9, 0.8), std::domain_error);
    // (0,0) degenerates to full independence
    PIDTerms z = pid_terms_gaussian(counterexample_family(UIDefinition::TMXY, 0.0, 0.0),
                                    UIDefinition::TMXY);
    CHECK(std::abs(z.i_mx) < 1e-12);
    CHECK(std::abs(z.ui_x) < 1e-12);
    CHECK(std::abs(z.s_x) < 1e-12);
}

TEST_CASE("pid_terms_gaussian") {
    SUBCASE("TMXY counterexample family: asymmetric redundancy") {
        GaussianJoint g = counterexample_family(UIDefinition::TMXY, 0.6, 0.3);
        PIDTerms t = pid_terms_gaussian(g, UIDefinition::TMXY);
        CHECK(t.ui_x == doctest::Approx(0.0));
        CHECK(t.ui_y == doctest::Approx(0.0));
        CHECK(t.r_x == doctest::Approx(-0.5 * std::log2(0.64)).epsilon(1e-9));
        CHECK(t.r_y == doctest::Approx(-0.5 * std::log2(0.91)).epsilon(1e-9));
        CHECK(t.r_x != t.r_y);
        // subtraction identities exact by construction
        CHECK(t.r_x + t.ui_x == t.i_mx);
        CHECK(t.s_x + t.ui_x == t.i_mx_given_y);
    }
    SUBCASE("Sigma_MY = 0 family: redundancy and synergy vanish") {
        GaussianJoint g = scalar_family(0.6, 0.0, 0.0);
        PIDTerms t = pid_terms_gaussian(g, UIDefinition::TMXY);
        CHECK(t.r_x == doctest::Approx(0.0).epsilon(1e-9));
        CHECK(std::abs(t.s_x) < 1e-9);
        CHECK(t.ui_x == doctest::Approx(t.i_mx).epsilon(1e-12));
    }
}

TEST_CASE("determinant inequality from the proof") {
    std::mt19937_64 rng(61);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::uniform_int_distribution<int> dim(1, 4);
    for (int t = 0; t < 50; ++t) {
        const int n = dim(rng);
        Eigen::MatrixXd q = gen::random_orthogonal(rng, n);
        Eigen::VectorXd lam(n);
        for (int i = 0; i < n; ++i) lam(i) = unif(rng);
        Eigen::MatrixXd a = q * lam.asDiagonal() * q.transpose();
        Eigen::MatrixXd u = gen::random_orthogonal(rng, n), v = gen::random_orthogonal(rng, n);
        Eigen::VectorXd sv(n);
        for (int i = 0; i < n; ++i) sv(i) = unif(rng);
        Eigen::MatrixXd s = u * sv.asDiagonal() * v.transpose();
        Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(n, n);
        CHECK((eye - s.transpose() * a * s).determinant() >=
              (eye - a).determinant() - 1e-12);
    }
    // Sigma = 0 and Sigma = I endpoint cases
    Eigen::MatrixXd a(2, 2);
    a << 0.5, 0.1, 0.1, 0.3;
    Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(2, 2);
    CHECK(1.0 >= (eye - a).determinant());
    CHECK((eye - a).determinant() ==
          doctest::Approx((eye - eye.transpose() * a * eye).determinant()).epsilon(1e-14));
}
