#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"
#include "iafb/rxdesign.hpp"

using namespace iafb;

namespace {

struct Instance {
    std::vector<CMat> cross;
    std::vector<CVec> v;
};

Instance random_instance(std::mt19937& gen, int n_r, int n_t, int k) {
    Instance inst;
    for (int n = 0; n < k; ++n) {
        inst.cross.push_back(testutil::random_cmat(gen, n_r, n_t));
        inst.v.push_back(testutil::random_unit(gen, n_t));
    }
    return inst;
}

}  // namespace

TEST_CASE("interference_gram: zero, rank-one and trace identity") {
    std::mt19937 gen(10);
    CHECK(interference_gram({CMat::Zero(3, 2)}, {testutil::random_unit(gen, 2)}).norm() == 0.0);

    // K=1 with G v = e_1
    CMat g = CMat::Zero(3, 2);
    g(0, 0) = 1.0;
    CVec v(2);
    v << 1.0, 0.0;
    const CMat a = interference_gram({g}, {v});
    CHECK(a(0, 0).real() == Catch::Approx(1.0));
    CHECK(a.norm() == Catch::Approx(1.0));

    for (int it = 0; it < 50; ++it) {
        const Instance inst = random_instance(gen, 3, 2, 2);
        const CMat am = interference_gram(inst.cross, inst.v);
        double tr = 0.0;
        for (int n = 0; n < 2; ++n) tr += (inst.cross[n] * inst.v[n]).squaredNorm();
        REQUIRE(am.trace().real() == Catch::Approx(tr).margin(1e-9));
        REQUIRE((am - am.adjoint()).norm() < 1e-12);
    }
}

TEST_CASE("optimal_receive_basis: diagonal case selects the two smallest directions") {
    CMat a = CMat::Zero(3, 3);
    a(0, 0) = 5.0;
    a(1, 1) = 1.0;
    a(2, 2) = 2.0;
    const CMat u = optimal_receive_basis(a, 2);
    // span{e_2, e_3}: projector comparison, basis itself is free to rotate
    CMat p_expect = CMat::Zero(3, 3);
    p_expect(1, 1) = 1.0;
    p_expect(2, 2) = 1.0;
    CHECK((u * u.adjoint() - p_expect).norm() < 1e-9);

    const CMat u0 = optimal_receive_basis(CMat::Zero(3, 3), 2);
    CHECK((u0.adjoint() * u0 - CMat::Identity(2, 2)).norm() < 1e-9);
}

TEST_CASE("rho_k: diagonal cases and trace monotonicity") {
    CHECK(rho_k(CMat::Identity(3, 3), 2) == Catch::Approx(2.0));
    CMat d = CMat::Zero(3, 3);
    d(0, 0) = 4.0;
    d(1, 1) = 0.5;
    d(2, 2) = 1.0;
    CHECK(rho_k(d, 2) == Catch::Approx(1.5));

    std::mt19937 gen(3);
    for (int it = 0; it < 100; ++it) {
        const CMat a = testutil::random_psd(gen, 4, 3);
        const double tr = a.trace().real();
        REQUIRE(rho_k(a, 2) <= tr + 1e-9);
        REQUIRE(rho_k(a, 4) == Catch::Approx(tr).margin(1e-7 * std::max(1.0, tr)));
    }
}

TEST_CASE("residual_ici at the optimal basis equals rho_k") {
    std::mt19937 gen(8);
    for (int it = 0; it < 1000; ++it) {
        const int n_r = 3 + it % 2;
        const int k = 2;
        const Instance inst = random_instance(gen, n_r, 3, k);
        const CMat a = interference_gram(inst.cross, inst.v);
        const CMat u = optimal_receive_basis(a, k);
        REQUIRE(residual_ici(u, inst.cross, inst.v) ==
                Catch::Approx(rho_k(a, k)).margin(1e-7));
    }
}

TEST_CASE("residual_ici: optimal basis beats random bases") {
    std::mt19937 gen(12);
    for (int it = 0; it < 50; ++it) {
        const Instance inst = random_instance(gen, 3, 3, 2);
        const CMat a = interference_gram(inst.cross, inst.v);
        const CMat u_star = optimal_receive_basis(a, 2);
        const double best = residual_ici(u_star, inst.cross, inst.v);
        for (int j = 0; j < 20; ++j) {
            const CMat u = testutil::random_orthonormal(gen, 3, 2);
            REQUIRE(best <= residual_ici(u, inst.cross, inst.v) + 1e-9);
        }
    }
}

TEST_CASE("build_rx: zero-forcing and filter structure") {
    std::mt19937 gen(19);
    for (int it = 0; it < 100; ++it) {
        const int n_r = 3, k = 2;
        std::vector<CMat> direct, cross;
        std::vector<CVec> v_home, v_nb;
        for (int n = 0; n < k; ++n) {
            direct.push_back(testutil::random_cmat(gen, n_r, 3));
            cross.push_back(testutil::random_cmat(gen, n_r, 3));
            v_home.push_back(testutil::random_unit(gen, 3));
            v_nb.push_back(testutil::random_unit(gen, 3));
        }
        const CMat a = interference_gram(cross, v_nb);
        const CMat u = optimal_receive_basis(a, k);
        const RxDesign rx = build_rx(u, direct, v_home, cross, v_nb);

        REQUIRE((rx.u_basis.adjoint() * rx.u_basis - CMat::Identity(k, k)).norm() <
                tol::hermitian);
        for (const CVec& r : rx.filters)
            REQUIRE(std::abs(r.norm() - 1.0) < tol::unit_norm);
        REQUIRE(rx.residual == Catch::Approx(rho_k(a, k)).margin(1e-7));

        if (!rx.cond_flag) {
            // intra-cell interference vanishes: r_k^H U^H H_j v_j = 0, j != k
            for (int kk = 0; kk < k; ++kk)
                for (int j = 0; j < k; ++j) {
                    const cplx t =
                        rx.filters[kk].dot(rx.u_basis.adjoint() * (direct[j] * v_home[j]));
                    if (j == kk)
                        REQUIRE(std::abs(t) > 0.0);
                    else
                        REQUIRE(std::abs(t) < 1e-7);
                }
        }

        // per-user final ICI bounded by the overall residual ICI
        for (int kk = 0; kk < k; ++kk)
            REQUIRE(user_interference_power(rx, kk, cross, v_nb) <= rx.residual + 1e-9);
    }
}

TEST_CASE("build_rx: identity effective channel gives standard-basis filters") {
    // direct channels arranged so that U^H H_k v_k = e_k
    const int k = 2;
    CMat u = CMat::Zero(3, 2);
    u(0, 0) = 1.0;
    u(1, 1) = 1.0;
    std::vector<CMat> direct(k, CMat::Zero(3, 3));
    direct[0](0, 0) = 1.0;
    direct[1](1, 0) = 1.0;
    std::vector<CVec> v_home(k, CVec::Zero(3));
    v_home[0](0) = 1.0;
    v_home[1](0) = 1.0;
    std::vector<CMat> cross(k, CMat::Zero(3, 3));
    std::vector<CVec> v_nb(k, v_home[0]);
    const RxDesign rx = build_rx(u, direct, v_home, cross, v_nb);
    CHECK(std::abs(rx.filters[0](0) - cplx(1.0, 0.0)) < 1e-12);
    CHECK(std::abs(rx.filters[1](1) - cplx(1.0, 0.0)) < 1e-12);
    CHECK(rx.residual == 0.0);
}

TEST_CASE("build_rx: singular effective channel raises") {
    const int k = 2;
    const CMat u = CMat::Identity(3, 2);
    std::vector<CMat> direct(k, CMat::Zero(3, 3));  // all-zero desired channels
    std::vector<CVec> v(k, CVec::Unit(3, 0).cast<cplx>());
    CHECK_THROWS_AS(build_rx(u, direct, v, direct, v), SingularEffectiveChannelError);
}

TEST_CASE("per_user_rate: closed-form corner cases") {
    std::mt19937 gen(23);
    RxDesign rx;
    rx.u_basis = CMat::Identity(3, 2);
    rx.filters = {CVec::Unit(2, 0).cast<cplx>(), CVec::Unit(2, 1).cast<cplx>()};
    rx.eff_channel = CMat::Identity(2, 2);
    // H v = e_1 so |r^H U^H H v|^2 = 1; no interference
    CMat h = CMat::Zero(3, 3);
    h(0, 0) = 1.0;
    CVec v = CVec::Unit(3, 0).cast<cplx>();
    std::vector<CMat> cross(2, CMat::Zero(3, 3));
    std::vector<CVec> v_nb(2, v);
    CHECK(per_user_rate(rx, 0, h, v, cross, v_nb, 1.0) == Catch::Approx(1.0));
    CHECK(per_user_rate(rx, 0, h, v, cross, v_nb, 1e-12) == Catch::Approx(0.0).margin(1e-9));
}

TEST_CASE("perfect_feedback_rate: arithmetic and dominance over the interfered rate") {
    CMat u = CMat::Identity(3, 2);
    CVec r = CVec::Unit(2, 0).cast<cplx>();
    CMat h = CMat::Zero(3, 3);
    h(0, 0) = std::sqrt(3.0);
    CVec v = CVec::Unit(3, 0).cast<cplx>();
    CHECK(perfect_feedback_rate(h, v, u, r, 1.0) == Catch::Approx(2.0));

    // with the same transceivers, any nonzero interference only lowers the rate
    RxDesign rx;
    rx.u_basis = u;
    rx.filters = {r, CVec::Unit(2, 1).cast<cplx>()};
    std::mt19937 gen(2);
    std::vector<CMat> cross{testutil::random_cmat(gen, 3, 3)};
    std::vector<CVec> v_nb{testutil::random_unit(gen, 3)};
    CHECK(per_user_rate(rx, 0, h, v, cross, v_nb, 10.0) <=
          perfect_feedback_rate(h, v, u, r, 10.0));
}
