#include "nk6/geometry.hpp"
#include "nk6/octonion.hpp"

#include <doctest.h>

#include <Eigen/Cholesky>

#include <cmath>

using namespace nk6;

namespace {

using A7 = std::array<double, 7>;

A7 to_a7(const Eigen::VectorXd& v) {
    A7 a{};
    for (int i = 0; i < 7; ++i) a[i] = v[i];
    return a;
}

double dot7(const A7& a, const A7& b) {
    double s = 0;
    for (int i = 0; i < 7; ++i) s += a[i] * b[i];
    return s;
}

std::vector<BackendPtr> all_backends() {
    return {backend_s6(), backend_s6(2.0), backend_flat_kahler(), backend_perturbed(0.1), backend_perturbed(0.3)};
}

}  // namespace

TEST_CASE("published octonion table matches the compiled one") {
    const auto file = octonion::load_table(std::string(NK6_DATA_DIR) + "/octonion_table.json");
    CHECK(file == octonion::multiplication_table());
    const auto& t = octonion::multiplication_table();
    for (int a = 0; a < 7; ++a) {
        CHECK(t[a][a] == 0);
        for (int b = 0; b < 7; ++b)
            if (a != b) CHECK(t[a][b] == -t[b][a]);
    }
    for (const auto& l : octonion::fano_lines()) CHECK(t[l.a - 1][l.b - 1] == l.c);
}

TEST_CASE("seven-dimensional cross product is orthogonal and norm preserving") {
    Rng rng(3);
    std::normal_distribution<double> n;
    for (int k = 0; k < 20; ++k) {
        A7 u, v;
        for (int i = 0; i < 7; ++i) {
            u[i] = n(rng);
            v[i] = n(rng);
        }
        const A7 w = octonion::cross(u, v);
        CHECK(std::abs(dot7(w, u)) < 1e-12);
        CHECK(std::abs(dot7(w, v)) < 1e-12);
        const double uv = dot7(u, v);
        CHECK(dot7(w, w) == doctest::Approx(dot7(u, u) * dot7(v, v) - uv * uv));
        // u x (u x v) = -|u|^2 v + <u,v> u
        const A7 uuv = octonion::cross(u, w);
        for (int i = 0; i < 7; ++i) CHECK(uuv[i] == doctest::Approx(-dot7(u, u) * v[i] + uv * u[i]));
    }
}

TEST_CASE("every backend gives an orthogonal almost complex structure") {
    for (const auto& b : all_backends()) {
        CAPTURE(b->name());
        for (const auto& p : sample_points(*b, 5, 11)) {
            const Mat6 g = b->metric(p), J = b->complex_structure(p);
            CHECK((g - g.transpose()).cwiseAbs().maxCoeff() < 1e-14);
            CHECK(Eigen::LLT<Mat6>(g).info() == Eigen::Success);
            CHECK((J * J + Mat6::Identity()).cwiseAbs().maxCoeff() < 1e-12);
            CHECK((J.transpose() * g * J - g).cwiseAbs().maxCoeff() < 1e-12);
        }
    }
}

TEST_CASE("on the sphere J is the cross product with the unit normal") {
    const auto b = backend_s6(2.0);
    for (const auto& p : sample_points(*b, 3, 5)) {
        const Eigen::MatrixXd P = b->pushforward(p);
        const Mat6 J = b->complex_structure(p);
        A7 n{};
        for (int i = 0; i < 7; ++i) n[i] = p.ambient[i] / 2.0;
        for (int k = 0; k < 6; ++k) {
            const A7 lhs = to_a7(P * J.col(k));
            const A7 rhs = octonion::cross(n, to_a7(P.col(k)));
            for (int i = 0; i < 7; ++i) CHECK(lhs[i] == doctest::Approx(rhs[i]).epsilon(1e-12));
        }
    }
}

TEST_CASE("backend parameters and points are validated") {
    CHECK_THROWS_AS(backend_perturbed(0.0), std::invalid_argument);
    CHECK_THROWS_AS(backend_perturbed(0.5), std::invalid_argument);
    CHECK_THROWS_AS(backend_perturbed(-0.1), std::invalid_argument);
    CHECK_THROWS_AS(backend_perturbed(std::nan("")), std::invalid_argument);
    CHECK_THROWS_AS(backend_s6(0.0), std::invalid_argument);
    const auto s6 = backend_s6();
    CHECK_THROWS_AS(s6->check_point({{1, 0, 0}, "s6"}), std::invalid_argument);
    CHECK_THROWS_AS(s6->check_point({{2, 0, 0, 0, 0, 0, 0}, "s6"}), std::invalid_argument);
    CHECK_NOTHROW(s6->check_point({{0, 0, 0, 0, 0, 0, 1}, "s6"}));
    CHECK_THROWS_AS(backend_flat_kahler()->check_point({{1, 2}, "c3"}), std::invalid_argument);
}

TEST_CASE("point sampling is seeded") {
    const auto b = backend_perturbed(0.2);
    const auto a = sample_points(*b, 6, 99), c = sample_points(*b, 6, 99), d = sample_points(*b, 6, 100);
    for (int i = 0; i < 6; ++i) {
        CHECK(a[i].ambient == c[i].ambient);
        CHECK(a[i].ambient != d[i].ambient);
        CHECK_NOTHROW(b->check_point(a[i]));
    }
    // a prefix of a longer run is the shorter run
    const auto longer = sample_points(*b, 9, 99);
    CHECK(longer[5].ambient == a[5].ambient);
}

TEST_CASE("adapted frames are orthonormal and J-adapted") {
    for (const auto& b : all_backends()) {
        const auto p = sample_points(*b, 1, 4)[0];
        const AdaptedFrame f = adapted_frame(*b, p, 17);
        const Mat6 g = b->metric(p), J = b->complex_structure(p);
        CHECK((frame_gram(g, f) - Mat6::Identity()).cwiseAbs().maxCoeff() < 1e-12);
        for (int k = 0; k < 3; ++k) CHECK((J * f[2 * k] - f[2 * k + 1]).norm() < 1e-12);
        CHECK(std::abs(f.orientation) == 1);
        const AdaptedFrame again = adapted_frame(*b, p, 17);
        CHECK(again[4] == f[4]);
    }
}

TEST_CASE("derivative oracle: exact and finite-difference paths agree") {
    const auto b = backend_perturbed(0.2);
    const auto p = sample_points(*b, 1, 8)[0];
    DerivativeOptions exact{DerivativeMode::exact, {}};
    DerivativeOptions fd{DerivativeMode::finite_difference, {}};
    Rng rng(1);
    std::normal_distribution<double> n;
    std::array<Vec6, 3> dirs;
    for (auto& d : dirs)
        for (int i = 0; i < 6; ++i) d[i] = n(rng);
    for (auto field : {TensorField::metric, TensorField::complex_structure, TensorField::fundamental_form}) {
        for (std::size_t k = 1; k <= 3; ++k) {
            const std::span<const Vec6> s(dirs.data(), k);
            const Mat6 e = derivative_oracle(*b, field, p, s, exact);
            const Mat6 f = derivative_oracle(*b, field, p, s, fd);
            CHECK((e - f).cwiseAbs().maxCoeff() < 2e-3 * std::max(1.0, e.cwiseAbs().maxCoeff()));
        }
    }
    // symmetric in the order of directions
    const std::array<Vec6, 2> ab{dirs[0], dirs[1]}, ba{dirs[1], dirs[0]};
    CHECK((derivative_oracle(*b, TensorField::metric, p, ab, exact) -
           derivative_oracle(*b, TensorField::metric, p, ba, exact))
              .cwiseAbs()
              .maxCoeff() < 1e-12);
    CHECK_THROWS_AS(derivative_oracle(*b, TensorField::metric, p, std::span<const Vec6>{}, exact),
                    std::invalid_argument);
    const std::array<Vec6, 4> four{dirs[0], dirs[1], dirs[2], dirs[0]};
    CHECK_THROWS_AS(derivative_oracle(*b, TensorField::metric, p, four, exact), std::invalid_argument);
}

TEST_CASE("finite-difference error shrinks quadratically with the step") {
    const auto b = backend_s6();
    const auto p = sample_points(*b, 1, 2)[0];
    const Vec6 v = (Vec6() << 0.3, -0.5, 0.2, 0.7, -0.1, 0.4).finished();
    const std::array<Vec6, 1> dir{v};
    const Mat6 exact = derivative_oracle(*b, TensorField::complex_structure, p, dir, {DerivativeMode::exact, {}});
    double prev = 0.0;
    for (double h : {4e-3, 2e-3, 1e-3}) {
        const Mat6 fd =
            derivative_oracle(*b, TensorField::complex_structure, p, dir, {DerivativeMode::finite_difference, {h, 3 * h}});
        const double err = (fd - exact).cwiseAbs().maxCoeff();
        if (prev > 0.0) CHECK(prev / err == doctest::Approx(4.0).epsilon(0.25));
        prev = err;
    }
}

TEST_CASE("automatic derivative mode uses the exact path when available") {
    const auto b = backend_s6();
    const auto p = sample_points(*b, 1, 2)[0];
    CHECK(structure_jet(*b, p).exact);
    CHECK_FALSE(structure_jet(*b, p, {DerivativeMode::finite_difference, {}}).exact);
}

TEST_CASE("J at the first imaginary unit sends the second to the third") {
    const auto b = backend_s6();
    const ManifoldPoint p{{1, 0, 0, 0, 0, 0, 0}, "s6"};
    const Eigen::MatrixXd P = b->pushforward(p);
    const Mat6 J = b->complex_structure(p);
    // chart vector mapping to e2
    const Vec6 v = P.transpose() * Eigen::VectorXd::Unit(7, 1);
    const Eigen::VectorXd jv = P * (J * v);
    CHECK((jv - Eigen::VectorXd::Unit(7, 2)).norm() < 1e-12);
    CHECK((J * (J * v) + v).norm() < 1e-12);
}

TEST_CASE("flat metric has vanishing derivatives") {
    const auto b = backend_flat_kahler();
    const auto p = sample_points(*b, 1, 3)[0];
    const std::array<Vec6, 2> d{Vec6::Ones(), Vec6::Unit(2)};
    CHECK(derivative_oracle(*b, TensorField::metric, p, d).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(derivative_oracle(*b, TensorField::complex_structure, p, std::span(d.data(), 1)).cwiseAbs().maxCoeff() <
          1e-12);
}
