#include "nk6/verify.hpp"

#include <doctest.h>

#include <cmath>

using namespace nk6;

TEST_CASE("registry lists I1..I32 with tiers") {
    const auto& reg = identity_registry();
    REQUIRE(reg.size() == 32);
    for (std::size_t i = 0; i < reg.size(); ++i) CHECK(reg[i].id == "I" + std::to_string(i + 1));
    CHECK(identity_info("I14").tier == 3);
    CHECK(identity_info("I5").tier == 1);
    CHECK(identity_info("I19").tier == 2);
    CHECK_THROWS_AS(identity_info("I33"), std::invalid_argument);
    CHECK_THROWS_AS(identity_info("pde"), std::invalid_argument);
    CHECK(ToleranceTiers{}.for_tier(3) == 1e-3);
    CHECK_THROWS_AS(ToleranceTiers{}.for_tier(4), std::invalid_argument);
}

TEST_CASE("unknown identities are rejected before any sampling") {
    CHECK_THROWS_AS(run_identity("I0", backend_s6(), 1, 1), std::invalid_argument);
    CHECK_THROWS_AS(run_identity("X", nullptr, 1, 1), std::invalid_argument);
}

TEST_CASE("session input validation") {
    CHECK_THROWS_AS(Session(nullptr, 3, 1), std::invalid_argument);
    CHECK_THROWS_AS(Session(backend_s6(), 0, 1), std::invalid_argument);
    VerifyOptions o;
    o.draws = 0;
    CHECK_THROWS_AS(Session(backend_s6(), 2, 1, o), std::invalid_argument);
    std::vector<ManifoldPoint> bad{{{1, 1, 1, 1, 1, 1, 1}, "s6"}};
    CHECK_THROWS_AS(Session(backend_s6(), bad, 1), std::invalid_argument);
}

TEST_CASE("residual normalisation") {
    CHECK(relative_residual(0.0, 1e-7) == doctest::Approx(1e-7));
    CHECK(relative_residual(100.0, 101.0) == doctest::Approx(1.0 / 101.0));
    const auto psi = ext::model_su3_forms().psi_plus;
    CHECK(relative_residual(psi, psi) == 0.0);
}

TEST_CASE("mu estimate on spheres of radius 1 and 2") {
    const Session s1(backend_s6(), 4, 3);
    CHECK(s1.mu().value == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(s1.mu().spread < 1e-12);
    CHECK(s1.mu().samples >= 40);
    const Session s2(backend_s6(2.0), 4, 3);
    CHECK(s2.mu().value == doctest::Approx(0.5).epsilon(1e-12));
    const Session flat(backend_flat_kahler(), 2, 3);
    CHECK(flat.mu().value == 0.0);
}

TEST_CASE("complex coframe reproduces the SU(3) forms") {
    const Session s(backend_s6(), 1, 5);
    const SU3Frame f = build_su3_frame(s.point(0));
    const auto m = ext::model_su3_forms();
    CHECK((f.psi_plus - m.psi_plus).max_abs() < 1e-15);
    CHECK((f.psi_minus - m.psi_minus).max_abs() < 1e-15);
    // sigma = i sum f^k ^ conj f^k = 2 sum Re f^k ^ Im f^k
    ext::KForm sigma(2);
    for (int k = 0; k < 3; ++k) sigma += 2.0 * wedge(f.f_re[k], f.f_im[k]);
    CHECK((sigma - f.sigma).max_abs() < 1e-12);
    CHECK(f.aligned);
    CHECK(f.frame_mu == doctest::Approx(1.0));
}

TEST_CASE("lambda = -i sqrt2 mu") {
    for (double r : {1.0, 2.0}) {
        const Session s(backend_s6(r), 3, 9);
        const auto l = s.lambda();
        CHECK(std::abs(l.value - std::complex<double>(0.0, -std::sqrt(2.0) / r)) < 1e-12);
        CHECK(l.spread < 1e-12);
    }
}

TEST_CASE("serial reference path and parallel path agree bit for bit") {
    VerifyOptions par, ser;
    ser.execution = Execution::serial;
    const Session a(backend_perturbed(0.15), 6, 77, par);
    const Session b(backend_perturbed(0.15), 6, 77, ser);
    CHECK(a.mu() == b.mu());
    for (const auto& info : identity_registry()) CHECK(a.run(info.id) == b.run(info.id));
    CHECK(a.einstein() == b.einstein());
    CHECK(a.pde_pair() == b.pde_pair());
}

TEST_CASE("identity streams do not depend on the selection") {
    const Session s(backend_perturbed(0.1), 3, 4);
    const auto first = s.run("I10");
    s.run("I3");
    s.run("I1");
    CHECK(s.run("I10") == first);
}

TEST_CASE("flat Kaehler backend passes everything, with I32 vacuous") {
    const Session s(backend_flat_kahler(), 3, 2);
    for (const auto& info : identity_registry()) {
        const auto r = s.run(info.id);
        CAPTURE(r.id);
        CHECK(r.pass);
        CHECK(r.max_residual < 1e-10);
    }
    const auto r32 = s.run("I32");
    CHECK(r32.n == 0);
    CHECK_FALSE(r32.note.empty());
    CHECK(s.classify().label == "Kähler");
}

TEST_CASE("perturbed backend fails the nearly Kaehler identities") {
    const Session s(backend_perturbed(0.1), 5, 1);
    for (const char* id : {"I3", "I5", "I15", "I16", "I24", "I28"}) {
        CAPTURE(id);
        const auto r = s.run(id);
        CHECK_FALSE(r.pass);
        CHECK(r.max_residual > 10 * r.tol);
    }
    // identities valid for any almost Hermitian structure still hold
    for (const char* id : {"I6", "I18", "I20"}) CHECK(s.run(id).pass);
    CHECK(s.classify().label == "other");
    CHECK_FALSE(s.einstein().pass);
    CHECK_FALSE(s.pde_pair().first.pass);
}

TEST_CASE("Einstein data and classification on S6") {
    const Session s(backend_s6(), 4, 8);
    CHECK(s.einstein().pass);
    CHECK(s.scalar_curvature() == doctest::Approx(30.0).epsilon(1e-12));
    const auto c = s.classify();
    CHECK(c.label == "nearly Kähler");
    CHECK(c.nabla_sigma_norm == doctest::Approx(1.0));
    CHECK(c.complement_residual < 1e-12);
    CHECK(c.type_residual < 1e-12);
    const auto [ds, dpm] = s.pde_pair();
    CHECK(ds.pass);
    CHECK(dpm.pass);
    CHECK(s.classification_report().pass);
}

TEST_CASE("finite-difference path passes the curvature tiers on S6") {
    VerifyOptions o;
    o.derivatives.mode = DerivativeMode::finite_difference;
    const Session s(backend_s6(), 2, 12, o);
    for (const char* id : {"I1", "I3", "I5", "I10", "I15", "I19", "I24", "I14"}) {
        CAPTURE(id);
        const auto r = s.run(id);
        CHECK(r.max_residual < 1e-3);
    }
    CHECK(s.mu().value == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("the pair (X, JX) is degenerate for the mu quotient") {
    const Session s(backend_s6(), 1, 1);
    const auto& pg = s.point(0);
    Rng rng(2);
    const Vec6 x = random_unit(pg, rng);
    const Vec6 y = pg.J * x;
    const double gxy = pg.dot(x, y), sxy = pg.dot(pg.J * x, y);
    CHECK(std::abs(1.0 - gxy * gxy - sxy * sxy) < 1e-10);
    CHECK(pg.norm(nabla_J(pg, x, y)) < 1e-10);
}

TEST_CASE("lambda is constant across 20 points on S6 and zero on C3") {
    const Session s(backend_s6(), 20, 4);
    CHECK(s.lambda().spread < 1e-4);
    const Session flat(backend_flat_kahler(), 3, 4);
    CHECK(std::abs(flat.lambda().value) == 0.0);
}

TEST_CASE("golden cases for single identities") {
    const auto i8 = run_identity("I8", backend_flat_kahler(), 10, 1);
    CHECK(i8.max_residual == 0.0);
    const auto i15 = run_identity("I15", backend_s6(), 20, 1);
    CHECK(i15.pass);
    CHECK(i15.max_residual < 1e-4);
    CHECK_FALSE(run_identity("I3", backend_perturbed(0.1), 10, 1).pass);
    const auto [ds, dpm] = check_pde_pair(backend_perturbed(0.1), 4, 2);
    CHECK(std::max(ds.max_residual, dpm.max_residual) > 1e-2);
    CHECK(classify_gray_hervella_w1(backend_perturbed(0.1), 3, 2).label == "other");
    CHECK(check_einstein(backend_flat_kahler(), 2, 2).max_residual == 0.0);
}
