#pragma once

// Levi-Civita and canonical Hermitian connection data at one point.
//
// Everything is computed in the backend chart from the order-3 Taylor data of
// g and J.  Index conventions (chart components):
//   gamma[i](a, b)        = Gamma^a_{ib},  nabla_{d_i} d_b = Gamma^a_{ib} d_a
//   nabla_J[i](a, b)      = ((nabla_{d_i} J) d_b)^a
//   nabla2_J[i][j](a, b)  = ((nabla^2_{d_i, d_j} J) d_b)^a
//   riemann[a,b,i,j]      = R^a_{b i j},  R(d_i, d_j) d_b = R^a_{bij} d_a
// with R(X,Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_[X,Y] Z and
// R(W,X,Y,Z) = g(R(W,X)Y, Z).

#include "nk6/exterior6.hpp"
#include "nk6/geometry.hpp"

#include <array>
#include <vector>

namespace nk6 {

using Tensor4 = std::array<double, 1296>;
constexpr int idx4(int a, int b, int c, int d) { return ((a * 6 + b) * 6 + c) * 6 + d; }

using JetVec = std::array<ExactJet, 6>;
using JetMat = Mat6Of<ExactJet>;

/// Constant chart-coordinate vector field.
JetVec constant_field(const Vec6& v);

/// A k-form field in chart coordinates: one jet per increasing index tuple,
/// in the same order as ext::masks_of_degree(k).
struct JetForm {
    int degree = 0;
    std::vector<ExactJet> coeffs;

    ext::KForm value() const;
};

/// Coordinate exterior derivative: (d beta)_{i0..ik} = sum_m (-1)^m d_{i_m} beta_{..^i_m..}.
JetForm exterior_derivative(const JetForm& form);

/// Frame fields E1, JE1, E2, JE2, E3, JE3 extended over the chart, with the
/// associated SU(3) forms.
struct SU3FrameField {
    std::array<JetVec, 6> E;
    bool aligned = false;       // E3 follows (nabla_{E1} J) E2
    double frame_mu = 0.0;      // g((nabla_{E1} J) E2, E3) at the center
    JetForm psi_plus;
    JetForm psi_minus;

    AdaptedFrame center() const;
};

struct PointGeometry {
    const AlmostHermitianBackend* backend = nullptr;
    ManifoldPoint point;
    bool exact = true;

    JetMat g_jet;                    // order-3 metric jets, for directional derivatives of g(Y, Z)
    Mat6 g, ginv, J;
    std::array<Mat6, 6> dJ;          // d_i J^a_b
    std::array<Mat6, 6> gamma;
    std::array<Mat6, 6> nabla_J;
    std::array<std::array<Mat6, 6>, 6> nabla2_J;
    Tensor4 riemann{};
    Mat6 ric, ric_star;              // (0,2) forms
    Mat6 ricci_diff;                 // A = Ric - Ric* as an endomorphism A^a_b
    std::array<Mat6, 6> nabla_ricci_diff;

    std::array<Mat6, 6> hat_gamma;
    std::array<Mat6, 6> hat_nabla_g;   // (0,2): (hat nabla_i g)_{jk}
    std::array<Mat6, 6> hat_nabla_J;   // (1,1)
    Tensor4 hat_riemann{};             // from hat_gamma directly
    Tensor4 hat_nabla_nabla_sigma{};   // [w][i][j][k]

    JetForm sigma;       // sigma_ij = g(J d_i, d_j)
    ext::KForm dsigma;   // coordinate d
    ext::KForm ddsigma;

    SU3FrameField su3;
    ext::KForm psi_plus, psi_minus, dpsi_minus;
    Tensor4 hat_nabla_psi_plus{}, hat_nabla_psi_minus{};

    /// `seeds` supplies the constant directions used to extend E1, E2, E3.
    static PointGeometry build(const AlmostHermitianBackend& b, const ManifoldPoint& p, const AdaptedFrame& seeds,
                               const DerivativeOptions& opts = {});
    static PointGeometry build(const AlmostHermitianBackend& b, const ManifoldPoint& p, const StructureJet& jet,
                               const AdaptedFrame& seeds);

    double dot(const Vec6& a, const Vec6& b) const { return a.dot(g * b); }
    double norm(const Vec6& a) const;
};

// ----------------------------------------------------------------------------
// pointwise tensor queries (all vectors in chart components at the center)

/// (nabla_X J) Y
Vec6 nabla_J(const PointGeometry& pg, const Vec6& X, const Vec6& Y);
/// nabla sigma(X, Y, Z) = g((nabla_X J) Y, Z)
double nabla_sigma(const PointGeometry& pg, const Vec6& X, const Vec6& Y, const Vec6& Z);
/// (nabla^2_{W,X} J) Y
Vec6 nabla2_J(const PointGeometry& pg, const Vec6& W, const Vec6& X, const Vec6& Y);
/// nabla^2 sigma(W, X, Y, Z) = g((nabla^2_{W,X} J) Y, Z)
double nabla2_sigma(const PointGeometry& pg, const Vec6& W, const Vec6& X, const Vec6& Y, const Vec6& Z);
/// R(X, Y) Z
Vec6 curvature(const PointGeometry& pg, const Vec6& X, const Vec6& Y, const Vec6& Z);
/// R(W, X, Y, Z) = g(R(W,X)Y, Z)
double riemann4(const PointGeometry& pg, const Vec6& W, const Vec6& X, const Vec6& Y, const Vec6& Z);
/// Curvature of the canonical Hermitian connection, computed from its own Christoffel symbols.
double hat_riemann4(const PointGeometry& pg, const Vec6& W, const Vec6& X, const Vec6& Y, const Vec6& Z);
/// Closed expression 1/4 (3R(W,X,Y,Z) + 2R(W,X,JY,JZ) + R(W,Z,JX,JY) + R(W,Y,JZ,JX)).
double hat_riemann_formula(const PointGeometry& pg, const Vec6& W, const Vec6& X, const Vec6& Y, const Vec6& Z);

/// nabla_X Y for a vector field Y given as chart jets.
Vec6 nabla_vector(const PointGeometry& pg, const Vec6& X, const JetVec& Y);
/// nabla_X Y - 1/2 J (nabla_X J) Y
Vec6 hat_nabla(const PointGeometry& pg, const Vec6& X, const JetVec& Y);
/// Lie bracket of two chart vector fields at the center.
Vec6 bracket(const JetVec& X, const JetVec& Y);
/// Nijenhuis tensor from brackets of J applied to constant coordinate fields:
/// 4N(X,Y) = [X,Y] - [JX,JY] + J[JX,Y] + J[X,JY].  Uses dJ only, never the connection.
Vec6 nijenhuis(const PointGeometry& pg, const Vec6& X, const Vec6& Y);

/// |2g(nabla_X Y, Z) - Koszul expansion| for three vector fields.
double koszul_residual(const PointGeometry& pg, const JetVec& X, const JetVec& Y, const JetVec& Z);
/// g-norm of nabla_X Y - nabla_Y X - [X, Y].
double torsion_residual(const PointGeometry& pg, const JetVec& X, const JetVec& Y);

/// Frame components beta(E_a, E_b, ...) of a coordinate form.
ext::KForm to_frame(const ext::KForm& coordinate_form, const AdaptedFrame& frame);

struct CurvatureRecord {
    Tensor4 R4{};     // R(E_a, E_b, E_c, E_d)
    Mat6 ric;         // Ric(E_a, E_b)
    Mat6 ric_star;    // Ric*(E_a, E_b)
    Tensor4 rhat{};   // closed formula in R
    double symmetry_residual = 0.0;
};

/// Curvature in an adapted frame.  Throws std::runtime_error when the
/// antisymmetry, pair-symmetry or first Bianchi residual exceeds 10 * tol.
CurvatureRecord riemann(const PointGeometry& pg, const AdaptedFrame& frame, double tol = 1e-5);

}  // namespace nk6
