#include "identity_kernels.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>

namespace nk6::detail {
namespace {

using ext::KForm;

double sigma2(const PointGeometry& pg, const Vec6& u, const Vec6& v) { return pg.dot(pg.J * u, v); }

double contract(const Tensor4& t, const Vec6& w, const Vec6& x, const Vec6& y, const Vec6& z) {
    double s = 0.0;
    for (int a = 0; a < 6; ++a)
        for (int b = 0; b < 6; ++b) {
            const double ab = w[a] * x[b];
            for (int c = 0; c < 6; ++c) {
                const double abc = ab * y[c];
                for (int d = 0; d < 6; ++d) s += t[idx4(a, b, c, d)] * abc * z[d];
            }
        }
    return s;
}

double eval3(const KForm& f, const Vec6& x, const Vec6& y, const Vec6& z) {
    const std::array<Vec6, 3> v{x, y, z};
    return f.evaluate(v);
}

// J v for a constant chart vector v
JetVec j_field(const PointGeometry& pg, const Vec6& v) {
    // first-order jet of J v: enough for one covariant derivative
    JetVec out;
    for (int a = 0; a < 6; ++a) {
        double val = 0.0;
        for (int b = 0; b < 6; ++b) val += pg.J(a, b) * v[b];
        ExactJet e = ExactJet::constant(val, 1);
        for (int i = 0; i < 6; ++i) {
            double d = 0.0;
            for (int b = 0; b < 6; ++b) d += pg.dJ[i](a, b) * v[b];
            e.coeff(1 + i) = d;
        }
        out[a] = e;
    }
    return out;
}

JetVec scaled(const JetVec& v, double s) {
    JetVec out = v;
    for (auto& c : out) c = s * c;
    return out;
}

// complex vector as (re, im)
struct CVec {
    Vec6 re = Vec6::Zero();
    Vec6 im = Vec6::Zero();
};

// (0,1) part of a complex tangent vector: (V + iJV)/2
CVec part01(const PointGeometry& pg, const CVec& v) {
    return {0.5 * (v.re - pg.J * v.im), 0.5 * (v.im + pg.J * v.re)};
}

double cnorm(const PointGeometry& pg, const CVec& v) {
    return std::sqrt(std::max(pg.dot(v.re, v.re) + pg.dot(v.im, v.im), 0.0));
}

template <typename F>
std::vector<double> per_draw(int draws, F&& f) {
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(draws));
    for (int k = 0; k < draws; ++k) out.push_back(f());
    return out;
}

// ----------------------------------------------------------------------------

std::vector<double> i1(const PointGeometry& pg, Rng& rng, const KernelContext& c) {
    return per_draw(c.draws, [&] {
        const Vec6 x = random_unit(pg, rng), y = random_unit(pg, rng);
        return relative_residual(pg, nabla_J(pg, pg.J * x, y), -(pg.J * nabla_J(pg, x, y)));
    });
}

std::vector<double> i2(const PointGeometry& pg, Rng& rng, const KernelContext& c) {
    return per_draw(c.draws, [&] {
        const Vec6 x = random_unit(pg, rng), y = random_unit(pg, rng), z = random_unit(pg, rng);
        const double a = nabla_sigma(pg, pg.J * x, y, z);
        const double b = nabla_sigma(pg, x, pg.J * y, z);
        const double d = nabla_sigma(pg, x, y, pg.J * z);
        return std::max(relative_residual(a, b), relative_residual(b, d));
    });
}

std::vector<double> i3(const PointGeometry& pg, Rng& rng, const KernelContext& c) {
    return per_draw(c.draws, [&] {
        const Vec6 x = random_unit(pg, rng), y = random_unit(pg, rng), z = random_unit(pg, rng);
        const double b = nabla_sigma(pg, x, y, z);
        return std::max(relative_residual(b, -nabla_sigma(pg, y, x, z)),
                        relative_residual(b, -nabla_sigma(pg, x, z, y)));
    });
}

std::vector<double> i4(const PointGeometry& pg, Rng& rng, const KernelContext& c) {
    const Mat6& J = pg.J;
    return per_draw(c.draws, [&] {
        const Vec6 x = random_unit(pg, rng), y = random_unit(pg, rng), z = random_unit(pg, rng);
        const double lhs = nabla_sigma(pg, J * x, J * y, z) + nabla_sigma(pg, x, J * y, J * z) +
                           nabla_sigma(pg, J * x, y, J * z);
        return relative_residual(lhs, -3.0 * nabla_sigma(pg, x, y, z));
    });
}

std::vector<double> i5(const PointGeometry& pg, Rng& rng, const KernelContext& c) {
    return per_draw(c.draws, [&] {
        const Vec6 x = random_unit(pg, rng), y = random_unit(pg, rng), z = random_unit(pg, rng);
        return relative_residual(eval3(pg.dsigma, x, y, z), 3.0 * nabla_sigma(pg, x, y, z));
    });
}

std::vector<double> i6(const PointGeometry& pg, Rng& rng, const KernelContext& c) {
    return per_draw(c.draws, [&] {
        const Vec6 w = random_unit(pg, rng), x = random_unit(pg, rng), y = random_unit(pg, rng),
                   z = random_unit(pg, rng);
        const double lhs = nabla2_sigma(pg, w, x, y, z) - nabla2_sigma(pg, x, w, y, z);
        const double rhs = sigma2(pg, curvature(pg, x, w, y), z) + sigma2(pg, y, curvature(pg, x, w, z));
        return relative_residual(lhs, rhs);
    });
}

std::vector<double> i7(const PointGeometry& pg, Rng& rng, const KernelContext& c) {
    return per_draw(c.draws, [&] {
        const Vec6 x = random_unit(pg, rng), y = random_unit(pg, rng);
        const Vec6 n = nabla_J(pg, x, y);
        return relative_residual(nabla2_sigma(pg, x, x, pg.J * y, y), pg.dot(n, n));
    });
}

std::vector<double> i8(const PointGeometry& pg, Rng& rng, const KernelContext& c) {
    return per_draw(c.draws, [&] {
        const Vec6 x = random_unit(pg, rng), y = random_unit(pg, rng);
        const Vec6 n = nabla_J(pg, x, y);
        const double rhs = riemann4(pg, x, y, pg.J * x, pg.J * y) - riemann4(pg, x, y, x, y);
        return relative_residual(pg.dot(n, n), rhs);
    });
}

std::vector<double> i9(const PointGeometry& pg, Rng& rng, const KernelContext& c) {
    const Mat6& J = pg.J;
    return per_draw(c.draws, [&] {
        const Vec6 w = random_unit(pg, rng), x = random_unit(pg, rng), y = random_unit(pg, rng),
                   z = random_unit(pg, rng);
        return relative_residual(riemann4(pg, J * w, J * x, J * y, J * z), riemann4(pg, w, x, y, z));
    });
}

std::vector<double> i10(const PointGeometry& pg, Rng& rng, const KernelContext& c) {
    const Mat6& J = pg.J;
    return per_draw(c.draws, [&] {
        const Vec6 w = random_unit(pg, rng), x = random_unit(pg, rng), y = random_unit(pg, rng),
                   z = random_unit(pg, rng);
        const double lhs = pg.dot(nabla_J(pg, w, x), nabla_J(pg, y, z));
        const double rhs = riemann4(pg, w, x, J * y, J * z) - riemann4(pg, w, x, y, z);
        return relative_residual(lhs, rhs);
    });
}

std::vector<double> i11(const PointGeometry& pg, Rng& rng, const KernelContext& c) {
    const Mat6& J = pg.J;
    return per_draw(c.draws, [&] {
        const Vec6 w = random_unit(pg, rng), x = random_unit(pg, rng), y = random_unit(pg, rng),
                   z = random_unit(pg, rng);
        const Vec6 nwx = nabla_J(pg, w, x), nwy = nabla_J(pg, w, y), nwz = nabla_J(pg, w, z);
        const double cyc = pg.dot(nwx, nabla_J(pg, y, J * z)) + pg.dot(nwy, nabla_J(pg, z, J * x)) +
                           pg.dot(nwz, nabla_J(pg, x, J * y));
        return relative_residual(2.0 * nabla2_sigma(pg, w, x, y, z), -cyc);
    });
}

std::vector<double> i12(const PointGeometry& pg, Rng& rng, const KernelContext& c) {
    return per_draw(c.draws, [&] {
        const AdaptedFrame f = adapted_frame(pg.g, pg.J, rng());
        const Vec6 x = random_unit(pg, rng), y = random_unit(pg, rng);
        double rhs = 0.0;
        for (int i = 0; i < 6; ++i) rhs += pg.dot(nabla_J(pg, x, f[i]), nabla_J(pg, y, f[i]));
        return relative_residual(pg.dot(pg.ricci_diff * x, y), rhs);
    });
}

std::vector<double> i13(const PointGeometry& pg, Rng& rng, const KernelContext& c) {
    const Mat6& A = pg.ricci_diff;
    const Mat6& J = pg.J;
    return per_draw(c.draws, [&] {
        const Vec6 x = random_unit(pg, rng), y = random_unit(pg, rng);
        return std::max(relative_residual(pg.dot(A * x, y), pg.dot(x, A * y)),
                        relative_residual(pg, A * (J * x), J * (A * x)));
    });
}

std::vector<double> i14(const PointGeometry& pg, Rng& rng, const KernelContext& c) {
    const Mat6& A = pg.ricci_diff;
    const Mat6& J = pg.J;
    return per_draw(c.draws, [&] {
        const Vec6 x = random_unit(pg, rng), y = random_unit(pg, rng), z = random_unit(pg, rng);
        Mat6 nzA = Mat6::Zero();
        for (int i = 0; i < 6; ++i) nzA += z[i] * pg.nabla_ricci_diff[i];
        const double lhs = 2.0 * pg.dot(nzA * x, y);
        const double rhs = pg.dot(A * (J * x), nabla_J(pg, z, y)) + pg.dot(A * (J * y), nabla_J(pg, z, x));
        return relative_residual(lhs, rhs);
    });
}

std::vector<double> i15(const PointGeometry& pg, Rng& rng, const KernelContext& c) {
    return per_draw(c.draws, [&] {
        const Vec6 x = random_unit(pg, rng), y = random_unit(pg, rng);
        return relative_residual(pg.dot(pg.ricci_diff * x, y), 4.0 * c.mu * c.mu * pg.dot(x, y));
    });
}

std::vector<double> i17(const PointGeometry& pg, Rng& rng, const KernelContext& c) {
    return per_draw(c.draws, [&] {
        const Vec6 x = random_unit(pg, rng), y = random_unit(pg, rng);
        return relative_residual(pg, nijenhuis(pg, x, y), pg.J * nabla_J(pg, x, y));
    });
}

std::vector<double> i18(const PointGeometry& pg, Rng& rng, const KernelContext& c) {
    return per_draw(c.draws, [&] {
        const Vec6 x = random_unit(pg, rng), y = random_unit(pg, rng), z = random_unit(pg, rng);
        Mat6 ng = Mat6::Zero(), nj = Mat6::Zero();
        for (int i = 0; i < 6; ++i) {
            ng += x[i] * pg.hat_nabla_g[i];
            nj += x[i] * pg.hat_nabla_J[i];
        }
        return std::max(relative_residual(y.dot(ng * z), 0.0), relative_residual(pg, nj * y, Vec6::Zero()));
    });
}

std::vector<double> i19(const PointGeometry& pg, Rng& rng, const KernelContext& c) {
    return per_draw(c.draws, [&] {
        const Vec6 w = random_unit(pg, rng), x = random_unit(pg, rng), y = random_unit(pg, rng),
                   z = random_unit(pg, rng);
        return relative_residual(hat_riemann4(pg, w, x, y, z), hat_riemann_formula(pg, w, x, y, z));
    });
}

std::vector<double> i20(const PointGeometry& pg, Rng& rng, const KernelContext& c) {
    const Mat6& J = pg.J;
    return per_draw(c.draws, [&] {
        const Vec6 w = random_unit(pg, rng), x = random_unit(pg, rng), y = random_unit(pg, rng),
                   z = random_unit(pg, rng);
        return relative_residual(hat_riemann4(pg, w, x, J * y, J * z), hat_riemann4(pg, w, x, y, z));
    });
}

std::vector<double> i21(const PointGeometry& pg, Rng& rng, const KernelContext& c) {
    return per_draw(c.draws, [&] {
        const Vec6 w = random_unit(pg, rng), x = random_unit(pg, rng), y = random_unit(pg, rng),
                   z = random_unit(pg, rng);
        return relative_residual(hat_riemann4(pg, w, x, y, z), hat_riemann4(pg, y, z, w, x));
    });
}

std::vector<double> i22(const PointGeometry& pg, Rng& rng, const KernelContext& c) {
    return per_draw(c.draws, [&] {
        const AdaptedFrame f = adapted_frame(pg.g, pg.J, rng());
        const Vec6 y = random_unit(pg, rng);
        Vec6 lhs = Vec6::Zero();
        for (int j = 0; j < 6; ++j) lhs += nabla2_J(pg, f[j], f[j], y);
        return relative_residual(pg, lhs, -(pg.ricci_diff * (pg.J * y)));
    });
}

std::vector<double> i23(const PointGeometry& pg, Rng& rng, const KernelContext& c) {
    const Mat6& J = pg.J;
    return per_draw(c.draws, [&] {
        const AdaptedFrame f = adapted_frame(pg.g, pg.J, rng());
        const Vec6 w = random_unit(pg, rng), x = random_unit(pg, rng);
        double s = 0.0;
        for (int i = 0; i < 6; ++i)
            for (int j = 0; j < 6; ++j) {
                const double a = pg.dot(pg.ricci_diff * f[i], f[j]);
                if (a == 0.0) continue;
                s += a * (riemann4(pg, w, f[i], f[j], x) - 5.0 * riemann4(pg, w, f[i], J * f[j], J * x));
            }
        return relative_residual(s, 0.0);
    });
}

std::vector<double> i24(const PointGeometry& pg, Rng& rng, const KernelContext& c) {
    return per_draw(c.draws, [&] {
        const Vec6 x = random_unit(pg, rng), y = random_unit(pg, rng);
        const double ric = x.dot(pg.ric * y);
        return std::max(relative_residual(ric, 5.0 * x.dot(pg.ric_star * y)),
                        relative_residual(ric, 5.0 * c.mu * c.mu * pg.dot(x, y)));
    });
}

std::vector<double> i25(const PointGeometry& pg, Rng& rng, const KernelContext& c) {
    return per_draw(c.draws, [&] {
        const Vec6 a = random_unit(pg, rng), b = random_unit(pg, rng);
        // X = A - iJA, Y = B - iJB;  conj X = A + iJA
        const JetVec B = constant_field(b);
        const JetVec JB = j_field(pg, b);
        const Vec6 ja = pg.J * a;
        CVec v;
        v.re = nabla_vector(pg, a, B) + nabla_vector(pg, ja, JB);
        v.im = nabla_vector(pg, ja, B) - nabla_vector(pg, a, JB);
        return cnorm(pg, part01(pg, v));
    });
}

// F_k = (E_k - i JE_k)/sqrt2 as (re, im) jet fields
struct CField {
    JetVec re, im;
};

std::array<CField, 3> holomorphic_frame(const PointGeometry& pg) {
    const double s = 1.0 / std::sqrt(2.0);
    std::array<CField, 3> f;
    for (int k = 0; k < 3; ++k) {
        f[k].re = scaled(pg.su3.E[2 * k], s);
        f[k].im = scaled(pg.su3.E[2 * k + 1], -s);
    }
    return f;
}

std::vector<double> i26(const PointGeometry& pg, Rng&, const KernelContext&) {
    const auto F = holomorphic_frame(pg);
    const std::complex<double> lambda = estimate_lambda(pg);
    const std::complex<double> lb = std::conj(lambda);
    const double s = 1.0 / std::sqrt(2.0);
    std::vector<double> out;
    for (int i = 0; i < 3; ++i) {
        const int j = (i + 1) % 3, k = (i + 2) % 3;
        CVec br;
        br.re = bracket(F[i].re, F[j].re) - bracket(F[i].im, F[j].im);
        br.im = bracket(F[i].re, F[j].im) + bracket(F[i].im, F[j].re);
        const CVec lhs = part01(pg, br);
        // -conj(lambda) * conj(F_k), conj F_k = (E_k + i JE_k)/sqrt2
        Vec6 e;
        for (int a = 0; a < 6; ++a) e[a] = s * pg.su3.E[2 * k][a].value();
        const Vec6 je = pg.J * e;
        CVec rhs;
        rhs.re = -(lb.real() * e - lb.imag() * je);
        rhs.im = -(lb.real() * je + lb.imag() * e);
        CVec d{lhs.re - rhs.re, lhs.im - rhs.im};
        const double scale = std::max({1.0, cnorm(pg, lhs), cnorm(pg, rhs)});
        out.push_back(cnorm(pg, d) / scale);
    }
    return out;
}

std::vector<double> i27(const PointGeometry& pg, Rng&, const KernelContext& c) {
    const std::complex<double> lambda = estimate_lambda(pg);
    const std::complex<double> expected(0.0, -std::sqrt(2.0) * c.mu);
    const double scale = std::max({1.0, std::abs(lambda), std::abs(expected)});
    return {std::abs(lambda - expected) / scale};
}

std::vector<double> i28(const PointGeometry& pg, Rng&, const KernelContext& c) {
    const auto [a, b] = pde_residuals(pg, c.mu, 1.0);
    return {std::max(a, b)};
}

std::vector<double> i29(const PointGeometry& pg, Rng& rng, const KernelContext& c) {
    const Mat6& J = pg.J;
    return per_draw(c.draws, [&] {
        const Vec6 x = random_unit(pg, rng), y = random_unit(pg, rng), z = random_unit(pg, rng);
        const double m = eval3(pg.psi_minus, x, y, z);
        return std::max(relative_residual(m, eval3(pg.psi_plus, J * x, J * y, J * z)),
                        relative_residual(m, -eval3(pg.psi_plus, x, y, J * z)));
    });
}

std::vector<double> i30(const PointGeometry& pg, Rng&, const KernelContext&) {
    const SU3Frame f = build_su3_frame(pg);
    const KForm vol4 = 4.0 * KForm::volume();
    const KForm zero5(5);
    const KForm sigma = to_frame(pg.sigma.value(), f.frame);
    const KForm pp = to_frame(pg.psi_plus, f.frame);
    const KForm pm = to_frame(pg.psi_minus, f.frame);
    const double r = std::max({relative_residual(wedge(pp, pm), vol4),
                               relative_residual((2.0 / 3.0) * wedge(sigma, wedge(sigma, sigma)), vol4),
                               relative_residual(wedge(sigma, pp), zero5), relative_residual(wedge(sigma, pm), zero5),
                               relative_residual(ext::hodge_star(pp), pm),
                               relative_residual(pp, f.psi_plus), relative_residual(pm, f.psi_minus)});
    return {r};
}

std::vector<double> i31(const PointGeometry& pg, Rng& rng, const KernelContext& c) {
    return per_draw(c.draws, [&] {
        const Vec6 w = random_unit(pg, rng), x = random_unit(pg, rng), y = random_unit(pg, rng),
                   z = random_unit(pg, rng);
        return std::max({std::abs(contract(pg.hat_nabla_nabla_sigma, w, x, y, z)),
                         std::abs(contract(pg.hat_nabla_psi_plus, w, x, y, z)),
                         std::abs(contract(pg.hat_nabla_psi_minus, w, x, y, z))});
    });
}

std::vector<double> i32(const PointGeometry& pg, Rng&, const KernelContext& c) {
    const auto [a, b] = pde_residuals(pg, 1.0, c.mu);
    return {std::max(a, b)};
}

using Kernel = std::vector<double> (*)(const PointGeometry&, Rng&, const KernelContext&);

constexpr std::array<Kernel, 33> kKernels = {
    nullptr, i1,  i2,  i3,  i4,  i5,  i6,  i7,  i8,  i9,  i10, i11, i12, i13, i14, i15, nullptr,
    i17,     i18, i19, i20, i21, i22, i23, i24, i25, i26, i27, i28, i29, i30, i31, i32};

}  // namespace

std::vector<double> identity_residuals(int number, const PointGeometry& pg, Rng& rng, const KernelContext& ctx) {
    if (number < 1 || number > 32 || kKernels[static_cast<std::size_t>(number)] == nullptr)
        throw std::invalid_argument("no pointwise kernel for identity I" + std::to_string(number));
    return kKernels[static_cast<std::size_t>(number)](pg, rng, ctx);
}

std::pair<double, double> pde_residuals(const PointGeometry& pg, double mu, double scale) {
    const SU3Frame f = build_su3_frame(pg);
    // metric scaled by scale^2: sigma ~ scale^2, psi ~ scale^3, frame E/scale,
    // so d sigma and d psi- each pick up one net factor 1/scale
    const KForm ds = (1.0 / scale) * to_frame(pg.dsigma, f.frame);
    const KForm dpm = (1.0 / scale) * to_frame(pg.dpsi_minus, f.frame);
    const KForm& pp = f.psi_plus;
    const KForm ss = wedge(f.sigma, f.sigma);
    return {relative_residual(ds, 3.0 * mu * pp), relative_residual(dpm, -2.0 * mu * ss)};
}

}  // namespace nk6::detail
