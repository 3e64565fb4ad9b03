// Acceptance gate: one PASS/FAIL line per criterion, exit status 0 iff all pass.

#include "nk6/report.hpp"

#include <Eigen/Cholesky>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>

using namespace nk6;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail += (detail.empty() ? "" : "; ") + what;
        }
    }
};

std::string num(const char* f, double x) {
    char b[64];
    std::snprintf(b, sizeof b, f, x);
    return b;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Outcome model_forms() {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    const auto m = ext::model_su3_forms();
    o.require(wedge(m.psi_plus, m.psi_minus) == 4.0 * m.vol, "psi+^psi- != 4 vol");
    o.require(wedge(m.sigma, wedge(m.sigma, m.sigma)) == 6.0 * m.vol, "sigma^3 != 6 vol");
    o.require(wedge(m.sigma, m.psi_plus).max_abs() == 0.0, "sigma^psi+ != 0");
    o.require(wedge(m.sigma, m.psi_minus).max_abs() == 0.0, "sigma^psi- != 0");
    o.require(hodge_star(m.psi_plus) == m.psi_minus, "*psi+ != psi-");
    o.require(ext::inner(m.psi_plus, m.psi_plus) == 4.0, "|psi+|^2 != 4");
    o.require(j_action(m.psi_plus) == -3.0 * m.psi_plus, "J psi+ != -3 psi+");
    const double t = seconds_since(t0);
    o.require(t < 1.0, "runtime " + num("%.2f", t) + " s");
    if (o.pass) o.detail = "all residuals exactly 0, " + num("%.4f", t) + " s";
    return o;
}

Outcome flat_control() {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    RunConfig c;
    c.backend = "c3";
    c.points = 10;
    c.seed = 1;
    c.identities = parse_identity_filter("all,classify");
    const RunReport r = run(c);
    double worst = 0.0;
    for (const auto& i : r.identities) {
        if (i.id == "I32" || i.id == "classify") continue;
        worst = std::max(worst, i.max_residual);
        o.require(i.pass && i.max_residual < 1e-10, i.id + " residual " + num("%.2e", i.max_residual));
    }
    o.require(r.classification == "Kähler", "classification " + r.classification);
    o.require(r.mu.value == 0.0, "mu " + num("%.3e", r.mu.value));
    const double t = seconds_since(t0);
    o.require(t < 10.0, "runtime " + num("%.2f", t) + " s");
    if (o.pass) o.detail = "I1-I31 max residual " + num("%.1e", worst) + ", Kähler, mu = 0, " + num("%.2f", t) + " s";
    return o;
}

Outcome round_sphere() {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    RunConfig c;
    c.backend = "s6";
    c.points = 20;
    c.draws = 10;
    c.seed = 7;
    c.derivatives = DerivativeMode::exact;
    c.serial = true;
    c.identities = parse_identity_filter("all,einstein,classify");
    const RunReport r = run(c);
    for (const auto& i : r.identities) o.require(i.pass, i.id + " failed (" + num("%.2e", i.max_residual) + ")");
    o.require(std::abs(r.mu.value - 1.0) < 1e-5, "mu " + num("%.8f", r.mu.value));
    o.require(r.mu.spread < 1e-5, "mu spread " + num("%.2e", r.mu.spread));
    o.require(std::abs(r.scalar_curvature - 30.0) < 1e-3, "scalar curvature " + num("%.6f", r.scalar_curvature));

    // Ric = 5 id in an orthonormal frame at every point
    const Session s(backend_s6(), 20, 7, {10, {DerivativeMode::exact, {}}, {}, Execution::serial});
    double ric_err = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const auto& pg = s.point(i);
        const CurvatureRecord rec = riemann(pg, pg.su3.center());
        ric_err = std::max(ric_err, (rec.ric - 5.0 * Mat6::Identity()).cwiseAbs().maxCoeff());
    }
    o.require(ric_err < 1e-4, "Ric - 5 id = " + num("%.2e", ric_err));
    const auto lam = r.lambda.value;
    o.require(std::abs(lam - std::complex<double>(0.0, -std::sqrt(2.0))) < 1e-4,
              "lambda " + num("%.6f", lam.real()) + num("%+.6fi", lam.imag()));
    o.require(r.classification == "nearly Kähler", "classification " + r.classification);
    const double t = seconds_since(t0);
    o.require(t < 120.0, "runtime " + num("%.1f", t) + " s");
    if (o.pass)
        o.detail = "32/32 identities at 20 points x 10 draws, mu = " + num("%.9f", r.mu.value) + " (spread " +
                   num("%.1e", r.mu.spread) + "), scal = " + num("%.6f", r.scalar_curvature) + ", lambda = " +
                   num("%.6f", lam.imag()) + "i, " + num("%.2f", t) + " s serial";
    return o;
}

Outcome fd_convergence() {
    Outcome o;
    const auto b = backend_s6();
    const auto pts = sample_points(*b, 5, 13);
    Rng rng(13);
    std::normal_distribution<double> n;
    double worst_ratio = 0.0, metric_floor = 0.0;
    for (const auto& p : pts) {
        Vec6 v;
        for (int i = 0; i < 6; ++i) v[i] = n(rng);
        const std::array<Vec6, 1> dir{v};
        // the chart is centred so that dg vanishes there: the metric only sees roundoff
        {
            const Mat6 fd = derivative_oracle(*b, TensorField::metric, p, dir, {DerivativeMode::finite_difference, {}});
            metric_floor = std::max(metric_floor, fd.cwiseAbs().maxCoeff());
        }
        for (auto field : {TensorField::complex_structure, TensorField::fundamental_form}) {
            const Mat6 exact = derivative_oracle(*b, field, p, dir, {DerivativeMode::exact, {}});
            double err[3];
            const double hs[3] = {4e-3, 2e-3, 1e-3};
            for (int k = 0; k < 3; ++k) {
                const Mat6 fd = derivative_oracle(*b, field, p, dir, {DerivativeMode::finite_difference, {hs[k], 3 * hs[k]}});
                err[k] = (fd - exact).cwiseAbs().maxCoeff();
                // C h^2 with a generous constant
                o.require(err[k] < 10.0 * hs[k] * hs[k] * std::max(1.0, v.squaredNorm() * v.norm()),
                          "error " + num("%.2e", err[k]) + " at h = " + num("%.0e", hs[k]));
            }
            for (int k = 0; k < 2; ++k) {
                const double ratio = err[k] / err[k + 1];
                o.require(std::abs(ratio - 4.0) <= 1.0, "ratio " + num("%.3f", ratio));
                worst_ratio = std::max(worst_ratio, std::abs(ratio - 4.0));
            }
        }
    }
    o.require(metric_floor < 1e-10, "metric derivative " + num("%.2e", metric_floor));
    if (o.pass)
        o.detail = "J and sigma: halving ratios 4 within " + num("%.1e", worst_ratio) +
                   "; metric derivative at chart centre is 0, FD gives " + num("%.1e", metric_floor);
    return o;
}

Outcome negative_control() {
    Outcome o;
    RunConfig c;
    c.backend = "perturbed";
    c.delta = 0.1;
    c.points = 10;
    c.seed = 7;
    c.identities = parse_identity_filter("I3,I5,I15,I16,I24,I28");
    const RunReport r = run(c);
    std::string fails;
    for (const auto& i : r.identities) {
        o.require(!i.pass && i.max_residual > i.tol, i.id + " unexpectedly passed");
        fails += i.id + "=" + num("%.1e", i.max_residual) + " ";
    }
    const auto b = make_backend(c);
    double inv = 0.0;
    for (const auto& p : sample_points(*b, c.points, c.seed)) {
        const Mat6 g = b->metric(p), J = b->complex_structure(p);
        o.require(Eigen::LLT<Mat6>(g).info() == Eigen::Success, "g not positive definite");
        inv = std::max({inv, (J * J + Mat6::Identity()).cwiseAbs().maxCoeff(),
                        (J.transpose() * g * J - g).cwiseAbs().maxCoeff(), (g - g.transpose()).cwiseAbs().maxCoeff()});
    }
    o.require(inv < 1e-12, "backend invariant residual " + num("%.2e", inv));
    if (o.pass) o.detail = "all six fail (" + fails + "), backend invariants " + num("%.1e", inv);
    return o;
}

Outcome homothety() {
    Outcome o;
    RunConfig c;
    c.backend = "s6";
    c.radius = 2.0;
    c.points = 20;
    c.seed = 7;
    c.identities = {"I32"};
    const RunReport r = run(c);
    o.require(std::abs(r.mu.value - 0.5) < 1e-4, "mu " + num("%.8f", r.mu.value));
    o.require(r.identities[0].pass, "I32 residual " + num("%.2e", r.identities[0].max_residual));
    if (o.pass)
        o.detail = "mu = " + num("%.9f", r.mu.value) + ", I32 residual " + num("%.1e", r.identities[0].max_residual);
    return o;
}

Outcome determinism() {
    Outcome o;
    RunConfig c;
    c.backend = "s6";
    c.points = 20;
    c.seed = 7;
    c.identities = parse_identity_filter("all,pde,einstein,classify");
    const std::string a = emit_json(run(c));
    const std::string b = emit_json(run(c));
    o.require(a == b, "json differs between identical runs");
    c.serial = true;
    const RunReport s = run(c);
    c.serial = false;
    o.require(s.identities == parse_json(a).identities && s.mu == parse_json(a).mu,
              "serial and parallel results differ");
    if (o.pass) o.detail = std::to_string(a.size()) + " bytes identical; serial path matches";
    return o;
}

}  // namespace

int main() {
    struct Criterion {
        const char* name;
        std::function<Outcome()> check;
    };
    const Criterion criteria[] = {
        {"model SU(3) forms", model_forms},
        {"flat Kähler control", flat_control},
        {"unit round S6, exact path", round_sphere},
        {"finite differences converge as h^2", fd_convergence},
        {"negative control, perturbed delta = 0.1", negative_control},
        {"homothety, radius-2 sphere", homothety},
        {"byte-identical json", determinism},
    };
    int failed = 0;
    int k = 0;
    for (const auto& c : criteria) {
        ++k;
        Outcome o;
        try {
            o = c.check();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        if (!o.pass) ++failed;
        std::printf("criterion %d  %s  %s: %s\n", k, o.pass ? "PASS" : "FAIL", c.name, o.detail.c_str());
    }
    std::printf("%d/%d criteria passed\n", k - failed, k);
    return failed == 0 ? 0 : 1;
}
