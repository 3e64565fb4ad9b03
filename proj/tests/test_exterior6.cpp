#include "nk6/exterior6.hpp"

#include <doctest.h>

#include <cmath>

using namespace nk6::ext;

TEST_CASE("standard SU(3) forms satisfy the algebraic normalisations exactly") {
    const ModelForms m = model_su3_forms();
    CHECK(wedge(m.psi_plus, m.psi_minus) == 4.0 * m.vol);
    CHECK(wedge(m.sigma, wedge(m.sigma, m.sigma)) == 6.0 * m.vol);
    CHECK(wedge(m.sigma, m.psi_plus).max_abs() == 0.0);
    CHECK(wedge(m.sigma, m.psi_minus).max_abs() == 0.0);
    CHECK(hodge_star(m.psi_plus) == m.psi_minus);
    CHECK(inner(m.psi_plus, m.psi_plus) == 4.0);
    CHECK(j_action(m.psi_plus) == -3.0 * m.psi_plus);
    CHECK(j_action(m.psi_minus) == -3.0 * m.psi_minus);
}

TEST_CASE("psi- is psi+ with one slot rotated by J") {
    const ModelForms m = model_su3_forms();
    CHECK(j_last_slot(m.psi_plus) == -1.0 * m.psi_minus);
    // group action: psi+(J^-1., J^-1., J^-1.) = -psi+(J., J., J.) = -psi-
    CHECK(j_pullback(m.psi_plus) == -1.0 * m.psi_minus);
    CHECK(j_pullback(m.sigma) == m.sigma);
}

TEST_CASE("wedge is graded commutative and associative") {
    const KForm a = KForm::basis({0, 3}) + 2.0 * KForm::basis({1, 5});
    const KForm b = KForm::basis({2}) - KForm::basis({4});
    const KForm c = KForm::basis({1, 2, 4});
    CHECK(wedge(a, b) == wedge(b, a));
    CHECK(wedge(b, KForm::basis({3})) == -1.0 * wedge(KForm::basis({3}), b));
    CHECK(wedge(wedge(a, b), KForm::basis({5})) == wedge(a, wedge(b, KForm::basis({5}))));
    CHECK_THROWS_AS(wedge(c, wedge(c, KForm::basis({0}))), std::invalid_argument);
}

TEST_CASE("hodge star squares to (-1)^(k(6-k))") {
    for (int k = 0; k <= 6; ++k) {
        const auto& ms = masks_of_degree(k);
        KForm f(k);
        for (std::size_t i = 0; i < ms.size(); ++i) f[i] = 0.5 + static_cast<double>(i);
        const double sign = (k * (6 - k)) % 2 == 0 ? 1.0 : -1.0;
        CHECK(hodge_star(hodge_star(f)) == sign * f);
        CHECK(wedge(f, hodge_star(f)) == inner(f, f) * KForm::volume());
    }
}

TEST_CASE("type projectors are complementary idempotents") {
    const auto p11 = projector_11(), p20 = projector_20(), p30 = projector_30(), p21 = projector_21();
    CHECK((p11 * p11 - p11).norm() < 1e-12);
    CHECK((p11 + p20 - Eigen::MatrixXd::Identity(15, 15)).norm() < 1e-12);
    CHECK((p30 * p30 - p30).norm() < 1e-12);
    CHECK((p30 + p21 - Eigen::MatrixXd::Identity(20, 20)).norm() < 1e-12);
    CHECK(p11.trace() == doctest::Approx(9.0));
    CHECK(p30.trace() == doctest::Approx(2.0));

    const ModelForms m = model_su3_forms();
    CHECK(split2(m.sigma).part_20.max_abs() < 1e-15);
    CHECK(split3(m.psi_plus).part_21.max_abs() < 1e-15);
    const KForm mixed = KForm::basis({0, 1, 2});
    CHECK(split3(mixed).part_30.max_abs() < 1e-15);
}

TEST_CASE("evaluation is antisymmetric and matches coefficients") {
    const KForm f = 3.0 * KForm::basis({0, 2, 5});
    std::array<Vector6, 3> v{basis_vector(0), basis_vector(2), basis_vector(5)};
    CHECK(f.evaluate(v) == 3.0);
    std::swap(v[0], v[1]);
    CHECK(f.evaluate(v) == -3.0);
    CHECK(f.coefficient({0, 2, 5}) == 3.0);
    CHECK(KForm::basis({5, 2, 0}) == -1.0 * KForm::basis({0, 2, 5}));
}

TEST_CASE("worked examples in the model basis") {
    // e1 = 0, Je1 = 1, e2 = 2, Je2 = 3, e3 = 4, Je3 = 5
    CHECK(wedge(KForm::basis({0, 1}), KForm::basis({2, 3})) == KForm::basis({0, 1, 2, 3}));
    CHECK(hodge_star(KForm::scalar(1.0)) == KForm::volume());
    CHECK(hodge_star(KForm::basis({0, 1})) == KForm::basis({2, 3, 4, 5}));
    const ModelForms m = model_su3_forms();
    CHECK(m.psi_minus.coefficient({0, 2, 5}) == 1.0);
    CHECK(j_action(m.sigma) == m.sigma);
    CHECK(split2(m.sigma).part_11 == m.sigma);
    CHECK(split3(m.psi_plus).part_30 == m.psi_plus);
    for (int i = 0; i < 6; ++i) CHECK(apply_j0(apply_j0(basis_vector(i))) == -basis_vector(i));
    CHECK(KForm::scalar(2.5).size() == 1);
    CHECK(KForm::volume().size() == 1);
}

TEST_CASE("J action on 2-forms agrees with brute-force evaluation") {
    KForm b(2);
    for (std::size_t i = 0; i < b.size(); ++i) b[i] = std::sin(1.0 + 3.0 * static_cast<double>(i));
    const KForm jb = j_action(b);
    for (int x = 0; x < 6; ++x)
        for (int y = 0; y < 6; ++y) {
            const std::array<Vector6, 2> direct{apply_j0(basis_vector(x)), apply_j0(basis_vector(y))};
            const std::array<Vector6, 2> plain{basis_vector(x), basis_vector(y)};
            CHECK(jb.evaluate(plain) == doctest::Approx(b.evaluate(direct)));
        }
}

TEST_CASE("type splits are J-eigenparts, orthogonal, and sum to the input") {
    KForm b2(2), b3(3);
    for (std::size_t i = 0; i < b2.size(); ++i) b2[i] = std::cos(0.7 * static_cast<double>(i));
    for (std::size_t i = 0; i < b3.size(); ++i) b3[i] = std::sin(0.3 + 1.1 * static_cast<double>(i));
    const auto s2 = split2(b2);
    CHECK((j_action(s2.part_11) - s2.part_11).max_abs() < 1e-14);
    CHECK((j_action(s2.part_20) + s2.part_20).max_abs() < 1e-14);
    CHECK((s2.part_11 + s2.part_20 - b2).max_abs() < 1e-14);
    CHECK(std::abs(inner(s2.part_11, s2.part_20)) < 1e-14);
    const auto s3 = split3(b3);
    CHECK((j_action(s3.part_30) + 3.0 * s3.part_30).max_abs() < 1e-13);
    CHECK((j_action(s3.part_21) - s3.part_21).max_abs() < 1e-13);
    CHECK((s3.part_30 + s3.part_21 - b3).max_abs() < 1e-14);
    CHECK(std::abs(inner(s3.part_30, s3.part_21)) < 1e-14);
}
