#include "nk6/connection.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nk6 {

namespace {

using ext::KForm;

ExactJet zero_jet(int order) { return ExactJet::constant(0.0, order); }

Mat6 derivative_values(const JetMat& m, int i) {
    Mat6 r;
    for (int e = 0; e < 36; ++e) r(e / 6, e % 6) = m[e].derivative(i).value();
    return r;
}

JetMat mat_mul(const JetMat& a, const JetMat& b) {
    JetMat r;
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) {
            ExactJet s = a[6 * i] * b[j];
            for (int k = 1; k < 6; ++k) s += a[6 * i + k] * b[6 * k + j];
            r[6 * i + j] = s;
        }
    return r;
}

JetVec mat_vec(const JetMat& a, const JetVec& v) {
    JetVec r;
    for (int i = 0; i < 6; ++i) {
        ExactJet s = a[6 * i] * v[0];
        for (int k = 1; k < 6; ++k) s += a[6 * i + k] * v[k];
        r[i] = s;
    }
    return r;
}

ExactJet jet_dot(const JetMat& g, const JetVec& a, const JetVec& b) {
    ExactJet s = zero_jet(ExactJet::kMaxDegree);
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) s += g[6 * i + j] * a[i] * b[j];
    return s;
}

Vec6 values(const JetVec& v) {
    Vec6 r;
    for (int i = 0; i < 6; ++i) r[i] = v[i].value();
    return r;
}

// sign of the permutation sorting (i, j, k); 0 on repeats
int sort3(std::array<int, 3>& t) {
    if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2]) return 0;
    int s = 1;
    for (int pass = 0; pass < 2; ++pass)
        for (int q = 0; q < 2; ++q)
            if (t[q] > t[q + 1]) {
                std::swap(t[q], t[q + 1]);
                s = -s;
            }
    return s;
}

// full antisymmetric component array [i][j][k] of a 3-form field
std::vector<ExactJet> full3(const JetForm& f) {
    std::vector<ExactJet> r(216, zero_jet(f.coeffs.empty() ? 0 : f.coeffs[0].order()));
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j)
            for (int k = 0; k < 6; ++k) {
                std::array<int, 3> t{i, j, k};
                const int s = sort3(t);
                if (s == 0) continue;
                const auto mask = static_cast<std::uint8_t>((1u << t[0]) | (1u << t[1]) | (1u << t[2]));
                r[(i * 6 + j) * 6 + k] = static_cast<double>(s) * f.coeffs[ext::mask_position(mask)];
            }
    return r;
}

// hat nabla of a (0,3) tensor field at the center
Tensor4 hat_derivative3(const std::vector<ExactJet>& t, const std::array<Mat6, 6>& hg) {
    Tensor4 out{};
    auto at = [&](int i, int j, int k) { return t[(i * 6 + j) * 6 + k].value(); };
    for (int w = 0; w < 6; ++w)
        for (int i = 0; i < 6; ++i)
            for (int j = 0; j < 6; ++j)
                for (int k = 0; k < 6; ++k) {
                    double s = t[(i * 6 + j) * 6 + k].derivative(w).value();
                    for (int m = 0; m < 6; ++m)
                        s -= hg[w](m, i) * at(m, j, k) + hg[w](m, j) * at(i, m, k) + hg[w](m, k) * at(i, j, m);
                    out[idx4(w, i, j, k)] = s;
                }
    return out;
}

JetVec normalized(const JetMat& g, const JetVec& v) {
    const ExactJet inv = inverse(sqrt(jet_dot(g, v, v)));
    JetVec r;
    for (int i = 0; i < 6; ++i) r[i] = v[i] * inv;
    return r;
}

// v minus its g-projection on the unit fields in `basis`
JetVec project_out(const JetMat& g, JetVec v, const std::vector<const JetVec*>& basis) {
    for (const JetVec* e : basis) {
        const ExactJet c = jet_dot(g, *e, v);
        for (int i = 0; i < 6; ++i) v[i] -= c * (*e)[i];
    }
    return v;
}

SU3FrameField build_frame_field(const JetMat& g, const JetMat& J, const std::array<JetMat, 6>& nabla_J_jet,
                                const AdaptedFrame& seeds) {
    SU3FrameField f;
    auto& E = f.E;
    E[0] = normalized(g, constant_field(seeds[0]));
    E[1] = mat_vec(J, E[0]);
    E[2] = normalized(g, project_out(g, constant_field(seeds[2]), {&E[0], &E[1]}));
    E[3] = mat_vec(J, E[2]);

    // w = (nabla_{E1} J) E2 as a field
    JetVec w;
    for (int a = 0; a < 6; ++a) w[a] = zero_jet(2);
    for (int i = 0; i < 6; ++i) {
        const JetVec t = mat_vec(nabla_J_jet[i], E[2]);
        for (int a = 0; a < 6; ++a) w[a] += E[0][i] * t[a];
    }
    const JetVec w_perp = project_out(g, w, {&E[0], &E[1], &E[2], &E[3]});
    Mat6 g0;
    for (int e = 0; e < 36; ++e) g0(e / 6, e % 6) = g[e].value();
    const Vec6 wp0 = values(w_perp);
    constexpr double kAlignThreshold = 1e-8;
    if (std::sqrt(wp0.dot(g0 * wp0)) > kAlignThreshold) {
        f.aligned = true;
        E[4] = normalized(g, w_perp);
    } else {
        E[4] = normalized(g, project_out(g, constant_field(seeds[4]), {&E[0], &E[1], &E[2], &E[3]}));
    }
    E[5] = mat_vec(J, E[4]);
    f.frame_mu = values(w).dot(g0 * values(E[4]));

    // coframe e^a_i = g_ij E_a^j
    std::array<JetVec, 6> co;
    for (int a = 0; a < 6; ++a)
        for (int i = 0; i < 6; ++i) {
            ExactJet s = g[6 * i] * E[a][0];
            for (int j = 1; j < 6; ++j) s += g[6 * i + j] * E[a][j];
            co[a][i] = s;
        }

    const auto model = ext::model_su3_forms();
    auto build = [&](const KForm& m) {
        JetForm out;
        out.degree = 3;
        const auto& masks = ext::masks_of_degree(3);
        out.coeffs.assign(masks.size(), zero_jet(2));
        for (std::size_t mi = 0; mi < masks.size(); ++mi) {
            if (m[mi] == 0.0) continue;
            const auto abc = ext::mask_indices(masks[mi]);
            for (std::size_t ci = 0; ci < masks.size(); ++ci) {
                const auto ijk = ext::mask_indices(masks[ci]);
                const auto& u = co[abc[0]];
                const auto& v = co[abc[1]];
                const auto& x = co[abc[2]];
                // 3x3 determinant of rows u, v, x restricted to columns i, j, k
                const int i = ijk[0], j = ijk[1], k = ijk[2];
                ExactJet det = u[i] * (v[j] * x[k] - v[k] * x[j]) - u[j] * (v[i] * x[k] - v[k] * x[i]) +
                               u[k] * (v[i] * x[j] - v[j] * x[i]);
                out.coeffs[ci] += m[mi] * det;
            }
        }
        return out;
    };
    f.psi_plus = build(model.psi_plus);
    f.psi_minus = build(model.psi_minus);
    return f;
}

}  // namespace

// ----------------------------------------------------------------------------

JetVec constant_field(const Vec6& v) {
    JetVec r;
    for (int i = 0; i < 6; ++i) r[i] = ExactJet::constant(v[i]);
    return r;
}

KForm JetForm::value() const {
    KForm r(degree);
    for (std::size_t m = 0; m < coeffs.size(); ++m) r[m] = coeffs[m].value();
    return r;
}

JetForm exterior_derivative(const JetForm& form) {
    if (form.degree >= 6) throw std::invalid_argument("exterior derivative of a top-degree form");
    JetForm out;
    out.degree = form.degree + 1;
    const int order = form.coeffs.empty() ? 0 : std::max(form.coeffs[0].order() - 1, 0);
    const auto& masks = ext::masks_of_degree(out.degree);
    out.coeffs.assign(masks.size(), zero_jet(order));
    for (std::size_t mi = 0; mi < masks.size(); ++mi) {
        const auto idx = ext::mask_indices(masks[mi]);
        for (int m = 0; m < out.degree; ++m) {
            const auto rest = static_cast<std::uint8_t>(masks[mi] & ~(1u << idx[m]));
            const double sign = (m % 2 == 0) ? 1.0 : -1.0;
            out.coeffs[mi] += sign * form.coeffs[ext::mask_position(rest)].derivative(idx[m]);
        }
    }
    return out;
}

AdaptedFrame SU3FrameField::center() const {
    AdaptedFrame f;
    Mat6 m;
    for (int a = 0; a < 6; ++a) {
        f.vectors[a] = values(E[a]);
        m.col(a) = f.vectors[a];
    }
    f.orientation = m.determinant() > 0 ? 1 : -1;
    return f;
}

double PointGeometry::norm(const Vec6& a) const { return std::sqrt(std::max(dot(a, a), 0.0)); }

PointGeometry PointGeometry::build(const AlmostHermitianBackend& b, const ManifoldPoint& p, const AdaptedFrame& seeds,
                                   const DerivativeOptions& opts) {
    return build(b, p, structure_jet(b, p, opts), seeds);
}

PointGeometry PointGeometry::build(const AlmostHermitianBackend& b, const ManifoldPoint& p, const StructureJet& jet,
                                   const AdaptedFrame& seeds) {
    PointGeometry pg;
    pg.backend = &b;
    pg.point = p;
    pg.exact = jet.exact;

    const JetMat& g = jet.g;
    const JetMat& J = jet.J;
    const JetMat gi = inverse6(g);
    pg.g_jet = g;
    pg.g = values_of(g);
    pg.ginv = values_of(gi);
    pg.J = values_of(J);

    std::array<JetMat, 6> dg;
    for (int i = 0; i < 6; ++i)
        for (int e = 0; e < 36; ++e) dg[i][e] = g[e].derivative(i);

    // Christoffel symbols, order 2
    std::array<JetMat, 6> G;
    for (int i = 0; i < 6; ++i)
        for (int a = 0; a < 6; ++a)
            for (int bb = 0; bb < 6; ++bb) {
                ExactJet s = zero_jet(2);
                for (int l = 0; l < 6; ++l) s += gi[6 * a + l] * (dg[i][6 * bb + l] + dg[bb][6 * i + l] - dg[l][6 * i + bb]);
                G[i][6 * a + bb] = 0.5 * s;
            }

    // nabla_i J, order 2
    std::array<JetMat, 6> NJ;
    for (int i = 0; i < 6; ++i) {
        const JetMat GJ = mat_mul(G[i], J);
        const JetMat JG = mat_mul(J, G[i]);
        for (int e = 0; e < 36; ++e) NJ[i][e] = J[e].derivative(i) + GJ[e] - JG[e];
        pg.dJ[i] = derivative_values(J, i);
        pg.gamma[i] = values_of(G[i]);
        pg.nabla_J[i] = values_of(NJ[i]);
    }

    // second covariant derivative of J at the center
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) {
            Mat6 m = derivative_values(NJ[j], i);
            for (int q = 0; q < 6; ++q) m -= pg.gamma[i](q, j) * pg.nabla_J[q];
            m += pg.gamma[i] * pg.nabla_J[j] - pg.nabla_J[j] * pg.gamma[i];
            pg.nabla2_J[i][j] = m;
        }

    // Riemann tensor R^a_{bij}, order 1
    std::vector<ExactJet> R(1296);
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) {
            const JetMat GiGj = mat_mul(G[i], G[j]);
            const JetMat GjGi = mat_mul(G[j], G[i]);
            for (int a = 0; a < 6; ++a)
                for (int bb = 0; bb < 6; ++bb) {
                    const int e = 6 * a + bb;
                    R[idx4(a, bb, i, j)] = G[j][e].derivative(i) - G[i][e].derivative(j) + GiGj[e] - GjGi[e];
                }
        }
    for (int q = 0; q < 1296; ++q) pg.riemann[q] = R[q].value();

    // lowered tensor T(w,x,y,z) = g_za R^a_{y w x}
    std::vector<ExactJet> T(1296, zero_jet(1));
    for (int w = 0; w < 6; ++w)
        for (int x = 0; x < 6; ++x)
            for (int y = 0; y < 6; ++y)
                for (int z = 0; z < 6; ++z) {
                    ExactJet s = zero_jet(1);
                    for (int a = 0; a < 6; ++a) s += g[6 * z + a] * R[idx4(a, y, w, x)];
                    T[idx4(w, x, y, z)] = s;
                }

    // Ric_xy = g^{kl} T(x,k,l,y); Ric*_xy = g^{kl} T(x,k,Jl,Jy)
    JetMat P;  // P^{km} = g^{kl} J^m_l
    for (int k = 0; k < 6; ++k)
        for (int m = 0; m < 6; ++m) {
            ExactJet s = zero_jet(3);
            for (int l = 0; l < 6; ++l) s += gi[6 * k + l] * J[6 * m + l];
            P[6 * k + m] = s;
        }
    JetMat ric, ric_star;
    for (int x = 0; x < 6; ++x)
        for (int y = 0; y < 6; ++y) {
            ExactJet r = zero_jet(1), rs = zero_jet(1);
            for (int k = 0; k < 6; ++k)
                for (int l = 0; l < 6; ++l) r += gi[6 * k + l] * T[idx4(x, k, l, y)];
            for (int n = 0; n < 6; ++n) {
                ExactJet inner = zero_jet(1);
                for (int k = 0; k < 6; ++k)
                    for (int m = 0; m < 6; ++m) inner += P[6 * k + m] * T[idx4(x, k, m, n)];
                rs += J[6 * n + y] * inner;
            }
            ric[6 * x + y] = r;
            ric_star[6 * x + y] = rs;
        }
    pg.ric = values_of(ric);
    pg.ric_star = values_of(ric_star);

    JetMat diff;
    for (int e = 0; e < 36; ++e) diff[e] = ric[e] - ric_star[e];
    const JetMat A = mat_mul(gi, diff);
    pg.ricci_diff = values_of(A);
    for (int i = 0; i < 6; ++i)
        pg.nabla_ricci_diff[i] =
            derivative_values(A, i) + pg.gamma[i] * pg.ricci_diff - pg.ricci_diff * pg.gamma[i];

    // fundamental form and its coordinate exterior derivatives
    pg.sigma.degree = 2;
    for (auto m : ext::masks_of_degree(2)) {
        const auto ij = ext::mask_indices(m);
        ExactJet s = zero_jet(3);
        for (int k = 0; k < 6; ++k) s += J[6 * k + ij[0]] * g[6 * k + ij[1]];
        pg.sigma.coeffs.push_back(s);
    }
    const JetForm dsig = exterior_derivative(pg.sigma);
    pg.dsigma = dsig.value();
    pg.ddsigma = exterior_derivative(dsig).value();

    // nabla sigma_{ijk} = g((nabla_i J) d_j, d_k), order 2
    std::vector<ExactJet> NS(216);
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j)
            for (int k = 0; k < 6; ++k) {
                ExactJet s = zero_jet(2);
                for (int a = 0; a < 6; ++a) s += NJ[i][6 * a + j] * g[6 * a + k];
                NS[(i * 6 + j) * 6 + k] = s;
            }

    // canonical Hermitian connection
    std::array<JetMat, 6> HG;
    for (int i = 0; i < 6; ++i) {
        const JetMat JNJ = mat_mul(J, NJ[i]);
        for (int e = 0; e < 36; ++e) HG[i][e] = G[i][e] - 0.5 * JNJ[e];
        pg.hat_gamma[i] = values_of(HG[i]);
    }
    for (int i = 0; i < 6; ++i) {
        const Mat6& h = pg.hat_gamma[i];
        Mat6 ng = derivative_values(g, i);
        ng -= h.transpose() * pg.g + pg.g * h;
        pg.hat_nabla_g[i] = ng;
        pg.hat_nabla_J[i] = pg.dJ[i] + h * pg.J - pg.J * h;
    }
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) {
            const Mat6 prod = pg.hat_gamma[i] * pg.hat_gamma[j] - pg.hat_gamma[j] * pg.hat_gamma[i];
            const Mat6 dj = derivative_values(HG[j], i);
            const Mat6 di = derivative_values(HG[i], j);
            for (int a = 0; a < 6; ++a)
                for (int bb = 0; bb < 6; ++bb) pg.hat_riemann[idx4(a, bb, i, j)] = dj(a, bb) - di(a, bb) + prod(a, bb);
        }
    pg.hat_nabla_nabla_sigma = hat_derivative3(NS, pg.hat_gamma);

    // SU(3) frame fields and forms
    pg.su3 = build_frame_field(g, J, NJ, seeds);
    pg.psi_plus = pg.su3.psi_plus.value();
    pg.psi_minus = pg.su3.psi_minus.value();
    pg.dpsi_minus = exterior_derivative(pg.su3.psi_minus).value();
    pg.hat_nabla_psi_plus = hat_derivative3(full3(pg.su3.psi_plus), pg.hat_gamma);
    pg.hat_nabla_psi_minus = hat_derivative3(full3(pg.su3.psi_minus), pg.hat_gamma);
    return pg;
}

// ----------------------------------------------------------------------------

Vec6 nabla_J(const PointGeometry& pg, const Vec6& X, const Vec6& Y) {
    Vec6 r = Vec6::Zero();
    for (int i = 0; i < 6; ++i)
        if (X[i] != 0.0) r += X[i] * (pg.nabla_J[i] * Y);
    return r;
}

double nabla_sigma(const PointGeometry& pg, const Vec6& X, const Vec6& Y, const Vec6& Z) {
    return pg.dot(nabla_J(pg, X, Y), Z);
}

Vec6 nabla2_J(const PointGeometry& pg, const Vec6& W, const Vec6& X, const Vec6& Y) {
    Mat6 m = Mat6::Zero();
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) m += (W[i] * X[j]) * pg.nabla2_J[i][j];
    return m * Y;
}

double nabla2_sigma(const PointGeometry& pg, const Vec6& W, const Vec6& X, const Vec6& Y, const Vec6& Z) {
    return pg.dot(nabla2_J(pg, W, X, Y), Z);
}

namespace {
Vec6 apply_curvature(const Tensor4& t, const Vec6& X, const Vec6& Y, const Vec6& Z) {
    Vec6 r = Vec6::Zero();
    for (int a = 0; a < 6; ++a) {
        double s = 0.0;
        for (int b = 0; b < 6; ++b) {
            if (Z[b] == 0.0) continue;
            for (int i = 0; i < 6; ++i) {
                if (X[i] == 0.0) continue;
                for (int j = 0; j < 6; ++j) s += t[idx4(a, b, i, j)] * Z[b] * X[i] * Y[j];
            }
        }
        r[a] = s;
    }
    return r;
}
}  // namespace

Vec6 curvature(const PointGeometry& pg, const Vec6& X, const Vec6& Y, const Vec6& Z) {
    return apply_curvature(pg.riemann, X, Y, Z);
}

double riemann4(const PointGeometry& pg, const Vec6& W, const Vec6& X, const Vec6& Y, const Vec6& Z) {
    return pg.dot(curvature(pg, W, X, Y), Z);
}

double hat_riemann4(const PointGeometry& pg, const Vec6& W, const Vec6& X, const Vec6& Y, const Vec6& Z) {
    return pg.dot(apply_curvature(pg.hat_riemann, W, X, Y), Z);
}

double hat_riemann_formula(const PointGeometry& pg, const Vec6& W, const Vec6& X, const Vec6& Y, const Vec6& Z) {
    const Mat6& J = pg.J;
    return 0.25 * (3.0 * riemann4(pg, W, X, Y, Z) + 2.0 * riemann4(pg, W, X, J * Y, J * Z) +
                   riemann4(pg, W, Z, J * X, J * Y) + riemann4(pg, W, Y, J * Z, J * X));
}

Vec6 nabla_vector(const PointGeometry& pg, const Vec6& X, const JetVec& Y) {
    const Vec6 y0 = values(Y);
    Vec6 r = Vec6::Zero();
    for (int i = 0; i < 6; ++i) {
        if (X[i] == 0.0) continue;
        Vec6 dy;
        for (int a = 0; a < 6; ++a) dy[a] = Y[a].derivative(i).value();
        r += X[i] * (dy + pg.gamma[i] * y0);
    }
    return r;
}

Vec6 hat_nabla(const PointGeometry& pg, const Vec6& X, const JetVec& Y) {
    return nabla_vector(pg, X, Y) - 0.5 * (pg.J * nabla_J(pg, X, values(Y)));
}

Vec6 bracket(const JetVec& X, const JetVec& Y) {
    const Vec6 x0 = values(X), y0 = values(Y);
    Vec6 r = Vec6::Zero();
    for (int i = 0; i < 6; ++i)
        for (int a = 0; a < 6; ++a) r[a] += x0[i] * Y[a].derivative(i).value() - y0[i] * X[a].derivative(i).value();
    return r;
}

Vec6 nijenhuis(const PointGeometry& pg, const Vec6& X, const Vec6& Y) {
    // X, Y constant coordinate fields, so [X,Y] = 0 and only derivatives of J enter
    const Vec6 JX = pg.J * X, JY = pg.J * Y;
    Vec6 b_jj = Vec6::Zero(), b_jx_y = Vec6::Zero(), b_x_jy = Vec6::Zero();
    for (int i = 0; i < 6; ++i) {
        b_jj += JX[i] * (pg.dJ[i] * Y) - JY[i] * (pg.dJ[i] * X);
        b_jx_y -= Y[i] * (pg.dJ[i] * X);
        b_x_jy += X[i] * (pg.dJ[i] * Y);
    }
    return 0.25 * (-b_jj + pg.J * (b_jx_y + b_x_jy));
}

double koszul_residual(const PointGeometry& pg, const JetVec& X, const JetVec& Y, const JetVec& Z) {
    const Vec6 x = values(X), y = values(Y), z = values(Z);
    auto deriv = [&](const Vec6& dir, const JetVec& A, const JetVec& B) {
        const ExactJet f = jet_dot(pg.g_jet, A, B);
        double s = 0.0;
        for (int i = 0; i < 6; ++i) s += dir[i] * f.derivative(i).value();
        return s;
    };
    const double lhs = 2.0 * pg.dot(nabla_vector(pg, x, Y), z);
    const double rhs = deriv(x, Y, Z) + deriv(y, X, Z) - deriv(z, X, Y) + pg.dot(bracket(X, Y), z) -
                       pg.dot(bracket(X, Z), y) - pg.dot(bracket(Y, Z), x);
    return std::abs(lhs - rhs);
}

double torsion_residual(const PointGeometry& pg, const JetVec& X, const JetVec& Y) {
    const Vec6 t = nabla_vector(pg, values(X), Y) - nabla_vector(pg, values(Y), X) - bracket(X, Y);
    return pg.norm(t);
}

KForm to_frame(const KForm& coordinate_form, const AdaptedFrame& frame) {
    return KForm::from_values(coordinate_form.degree(), [&](const std::vector<int>& t) {
        std::vector<Vec6> v;
        v.reserve(t.size());
        for (int a : t) v.push_back(frame[a]);
        return coordinate_form.evaluate(v);
    });
}

CurvatureRecord riemann(const PointGeometry& pg, const AdaptedFrame& frame, double tol) {
    CurvatureRecord rec;
    // coordinate (0,4) tensor then change of basis one slot at a time
    Tensor4 c{};
    for (int w = 0; w < 6; ++w)
        for (int x = 0; x < 6; ++x)
            for (int y = 0; y < 6; ++y)
                for (int z = 0; z < 6; ++z) {
                    double s = 0.0;
                    for (int a = 0; a < 6; ++a) s += pg.g(z, a) * pg.riemann[idx4(a, y, w, x)];
                    c[idx4(w, x, y, z)] = s;
                }
    Mat6 F;
    for (int a = 0; a < 6; ++a) F.col(a) = frame[a];
    for (int slot = 0; slot < 4; ++slot) {
        Tensor4 n{};
        for (int q = 0; q < 1296; ++q) {
            int id[4] = {q / 216, (q / 36) % 6, (q / 6) % 6, q % 6};
            double s = 0.0;
            const int keep = id[slot];
            for (int m = 0; m < 6; ++m) {
                id[slot] = m;
                s += F(m, keep) * c[idx4(id[0], id[1], id[2], id[3])];
            }
            n[q] = s;
        }
        c = n;
    }
    rec.R4 = c;

    // J in frame components: J E_i = sum_c Jf(c, i) E_c
    Mat6 Jf;
    for (int i = 0; i < 6; ++i)
        for (int cc = 0; cc < 6; ++cc) Jf(cc, i) = pg.dot(frame[cc], pg.J * frame[i]);
    auto R = [&](int a, int b, int cc, int d) { return rec.R4[idx4(a, b, cc, d)]; };
    auto RJJ = [&](int a, int b, int cc, int d) {  // R(a, b, J c, J d)
        double s = 0.0;
        for (int m = 0; m < 6; ++m)
            for (int n = 0; n < 6; ++n) s += Jf(m, cc) * Jf(n, d) * R(a, b, m, n);
        return s;
    };
    for (int a = 0; a < 6; ++a)
        for (int b = 0; b < 6; ++b) {
            double r = 0.0, rs = 0.0;
            for (int i = 0; i < 6; ++i) {
                r += R(a, i, i, b);
                for (int m = 0; m < 6; ++m)
                    for (int n = 0; n < 6; ++n) rs += Jf(m, i) * Jf(n, b) * R(a, i, m, n);
            }
            rec.ric(a, b) = r;
            rec.ric_star(a, b) = rs;
        }
    for (int w = 0; w < 6; ++w)
        for (int x = 0; x < 6; ++x)
            for (int y = 0; y < 6; ++y)
                for (int z = 0; z < 6; ++z) {
                    // R(w,z,Jx,Jy) and R(w,y,Jz,Jx)
                    rec.rhat[idx4(w, x, y, z)] =
                        0.25 * (3.0 * R(w, x, y, z) + 2.0 * RJJ(w, x, y, z) + RJJ(w, z, x, y) + RJJ(w, y, z, x));
                }

    double scale = 1.0, worst = 0.0;
    for (double v : rec.R4) scale = std::max(scale, std::abs(v));
    for (int a = 0; a < 6; ++a)
        for (int b = 0; b < 6; ++b)
            for (int cc = 0; cc < 6; ++cc)
                for (int d = 0; d < 6; ++d) {
                    worst = std::max({worst, std::abs(R(a, b, cc, d) + R(b, a, cc, d)),
                                      std::abs(R(a, b, cc, d) + R(a, b, d, cc)),
                                      std::abs(R(a, b, cc, d) - R(cc, d, a, b)),
                                      std::abs(R(a, b, cc, d) + R(b, cc, a, d) + R(cc, a, b, d))});
                }
    rec.symmetry_residual = worst / scale;
    if (rec.symmetry_residual > 10.0 * tol)
        throw std::runtime_error("curvature symmetry residual " + std::to_string(rec.symmetry_residual) +
                                 " exceeds 10x tolerance: derivative path is broken");
    return rec;
}

}  // namespace nk6
