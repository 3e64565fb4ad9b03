#pragma once

// Almost Hermitian six-manifold backends.
//
// Every backend exposes a chart around each point: six coordinates x map to
// an ambient point phi(x), and the metric g_ij(x) and complex structure
// J^a_b(x) are expressed in the coordinate frame d/dx_i.  The chart maps are
// templated on the scalar type so the same code yields plain values, first
// order jets (for finite differences) and full order-3 jets (exact path).

#include "nk6/jet.hpp"
#include "nk6/rng.hpp"

#include <Eigen/Core>

#include <array>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace nk6 {

using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat6 = Eigen::Matrix<double, 6, 6>;

using ExactJet = Jet<4>;
using ValueJet = Jet<1>;

/// Row-major 6x6 array of scalars: entry (a, b) at 6a + b.
template <typename T>
using Mat6Of = std::array<T, 36>;

template <typename T>
struct ChartFields {
    Mat6Of<T> g;          // g(d_i, d_j)
    Mat6Of<T> J;          // J d_b = J^a_b d_a, stored at (a, b)
    std::vector<T> ambient;
};

struct ManifoldPoint {
    std::vector<double> ambient;
    std::string backend;
};

class AlmostHermitianBackend {
public:
    virtual ~AlmostHermitianBackend() = default;

    virtual std::string name() const = 0;
    virtual int ambient_dim() const = 0;
    /// Whether chart_jets gives exact derivatives (jet arithmetic through the chart).
    virtual bool has_exact_derivatives() const { return true; }
    virtual ManifoldPoint sample_point(Rng& rng) const = 0;
    /// Throws std::invalid_argument when p is not a point of this backend.
    virtual void check_point(const ManifoldPoint& p) const = 0;

    /// Jets of g and J at the chart center, valid to order 3.
    virtual ChartFields<ExactJet> chart_jets(const ManifoldPoint& p) const = 0;
    /// Values (order-0 jets) of g and J at chart coordinates `offset`.
    virtual ChartFields<ValueJet> chart_values(const ManifoldPoint& p, const Vec6& offset) const = 0;

    /// Ambient image of the chart coordinates.
    Eigen::VectorXd chart_point(const ManifoldPoint& p, const Vec6& x) const;
    /// Columns are the ambient images of d/dx_i at the chart center.
    Eigen::MatrixXd pushforward(const ManifoldPoint& p) const;
    Mat6 metric(const ManifoldPoint& p) const;
    Mat6 complex_structure(const ManifoldPoint& p) const;
};

using BackendPtr = std::shared_ptr<const AlmostHermitianBackend>;

/// Round sphere of the given radius in R^7 with J_p(v) = (p/|p|) x v.
BackendPtr backend_s6(double radius = 1.0);
/// R^6 with the identity metric and constant J0.
BackendPtr backend_flat_kahler();
/// Ellipsoid with semi-axes (1 + delta, 1, ..., 1), J from its unit normal.
/// Throws std::invalid_argument unless 0 < delta < 0.5.
BackendPtr backend_perturbed(double delta);

std::vector<ManifoldPoint> sample_points(const AlmostHermitianBackend& b, int count, std::uint64_t seed);

/// Orthonormal frame E1, JE1, E2, JE2, E3, JE3 in chart components at the center.
struct AdaptedFrame {
    std::array<Vec6, 6> vectors;
    int orientation = 1;  // sign of det[E] in chart coordinates

    const Vec6& operator[](int i) const { return vectors[i]; }
};

/// Seeded random adapted frame at p.  Throws std::runtime_error after 100
/// degenerate draws.
AdaptedFrame adapted_frame(const AlmostHermitianBackend& b, const ManifoldPoint& p, std::uint64_t seed);
AdaptedFrame adapted_frame(const Mat6& g, const Mat6& J, std::uint64_t seed);

/// Gram matrix g(E_a, E_b) of a frame.
Mat6 frame_gram(const Mat6& g, const AdaptedFrame& f);

// ----------------------------------------------------------------------------
// Derivative oracle

enum class DerivativeMode { automatic, exact, finite_difference };

struct FdSteps {
    double low_order = 1e-3;   // first and second derivatives
    double third_order = 3e-3;

    friend bool operator==(const FdSteps&, const FdSteps&) = default;
};

struct DerivativeOptions {
    DerivativeMode mode = DerivativeMode::automatic;
    FdSteps steps{};
};

/// Order-3 Taylor data of g and J at a chart center.
struct StructureJet {
    Mat6Of<ExactJet> g;
    Mat6Of<ExactJet> J;
    bool exact = true;
};

StructureJet structure_jet(const AlmostHermitianBackend& b, const ManifoldPoint& p,
                           const DerivativeOptions& opts = {});

/// Taylor data of g and J from nested central differences of chart values.
StructureJet finite_difference_jet(const AlmostHermitianBackend& b, const ManifoldPoint& p, const FdSteps& steps);

enum class TensorField { metric, complex_structure, fundamental_form };

/// k-th directional derivative (k = directions.size() in 1..3) of a tensor
/// field's chart components at p.  Throws std::invalid_argument otherwise.
Mat6 derivative_oracle(const AlmostHermitianBackend& b, TensorField field, const ManifoldPoint& p,
                       std::span<const Vec6> directions, const DerivativeOptions& opts = {});

// ----------------------------------------------------------------------------
// small dense helpers shared with the connection code

template <typename T>
Mat6Of<T> inverse6(Mat6Of<T> a) {
    Mat6Of<T> inv{};
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) inv[6 * i + j] = T(i == j ? 1.0 : 0.0);
    // Gauss-Jordan without pivoting: used on s.p.d. metrics
    for (int c = 0; c < 6; ++c) {
        const T piv = T(1.0) / a[6 * c + c];
        for (int k = 0; k < 6; ++k) {
            a[6 * c + k] = a[6 * c + k] * piv;
            inv[6 * c + k] = inv[6 * c + k] * piv;
        }
        for (int r = 0; r < 6; ++r) {
            if (r == c) continue;
            const T f = a[6 * r + c];
            for (int k = 0; k < 6; ++k) {
                a[6 * r + k] = a[6 * r + k] - f * a[6 * c + k];
                inv[6 * r + k] = inv[6 * r + k] - f * inv[6 * c + k];
            }
        }
    }
    return inv;
}

template <typename T>
Mat6 values_of(const Mat6Of<T>& m) {
    Mat6 r;
    for (int a = 0; a < 6; ++a)
        for (int b = 0; b < 6; ++b) r(a, b) = value_of(m[6 * a + b]);
    return r;
}

}  // namespace nk6
