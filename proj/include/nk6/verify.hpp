#pragma once

// Identity suite: sampled residuals of the nearly Kaehler identities.
//
// A Session samples points, builds the per-point connection data once (in
// parallel when OpenMP is available) and then evaluates identities on
// random vectors drawn from per-(identity, point) random streams.  Every
// statistic is folded in point order, so parallel and serial runs agree bit
// for bit.

#include "nk6/connection.hpp"

#include <complex>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace nk6 {

struct ToleranceTiers {
    double tier1 = 1e-6;  // first-order identities
    double tier2 = 1e-5;  // curvature identities
    double tier3 = 1e-3;  // derivative of curvature

    double for_tier(int tier) const;

    friend bool operator==(const ToleranceTiers&, const ToleranceTiers&) = default;
};

struct IdentityInfo {
    std::string id;
    int tier;
    std::string statement;
};

/// I1..I32 in order.
const std::vector<IdentityInfo>& identity_registry();
/// Registry entry; throws std::invalid_argument for an unknown id.
const IdentityInfo& identity_info(std::string_view id);
bool is_registry_id(std::string_view id);

struct IdentityReport {
    std::string id;
    int n = 0;
    double max_residual = 0.0;
    double mean_residual = 0.0;
    double tol = 0.0;
    bool pass = true;
    std::string note;  // set when an identity is vacuous on this backend

    friend bool operator==(const IdentityReport&, const IdentityReport&) = default;
};

struct MuEstimate {
    double value = 0.0;   // mean over all samples
    double spread = 0.0;  // max - min
    double min = 0.0;
    double max = 0.0;
    int samples = 0;

    friend bool operator==(const MuEstimate&, const MuEstimate&) = default;
};

struct LambdaEstimate {
    std::complex<double> value;  // mean over points
    double spread = 0.0;         // max - min of |lambda|

    friend bool operator==(const LambdaEstimate&, const LambdaEstimate&) = default;
};

/// Real and imaginary parts of the SU(3) data in frame components.
struct SU3Frame {
    AdaptedFrame frame;
    ext::KForm sigma;       // sigma(E_a, E_b)
    ext::KForm psi_plus;    // Re 2 sqrt2 f1 ^ f2 ^ f3
    ext::KForm psi_minus;   // Im 2 sqrt2 f1 ^ f2 ^ f3
    std::array<ext::KForm, 3> f_re, f_im;  // complex coframe f^k = (e^k + i Je^k)/sqrt2
    double frame_mu = 0.0;
    bool aligned = false;
};

enum class Execution { parallel, serial };

struct VerifyOptions {
    int draws = 10;  // random vector tuples per (identity, point)
    DerivativeOptions derivatives{};
    ToleranceTiers tolerances{};
    Execution execution = Execution::parallel;
};

struct Classification {
    std::string label;            // "Kaehler" | "nearly Kaehler" | "other"
    double nabla_sigma_norm = 0;  // max |nabla sigma(E_a, E_b, E_c)|
    double complement_residual = 0;  // distance from the totally skew (3,0)+(0,3) part
    double type_residual = 0;     // residual of nabla sigma(U,V,JZ) = nabla sigma(U,JV,Z)
};

class Session {
public:
    Session(BackendPtr backend, int point_count, std::uint64_t seed, VerifyOptions opts = {});
    Session(BackendPtr backend, std::vector<ManifoldPoint> points, std::uint64_t seed, VerifyOptions opts = {});

    const AlmostHermitianBackend& backend() const { return *backend_; }
    std::uint64_t seed() const { return seed_; }
    const VerifyOptions& options() const { return opts_; }
    std::size_t size() const { return geometry_.size(); }
    const PointGeometry& point(std::size_t i) const { return geometry_.at(i); }
    const AdaptedFrame& frame(std::size_t i) const { return frames_.at(i); }

    const MuEstimate& mu() const { return mu_; }
    LambdaEstimate lambda() const;
    Classification classify() const;

    /// One registry identity.  Throws std::invalid_argument for unknown ids.
    IdentityReport run(std::string_view id) const;
    std::pair<IdentityReport, IdentityReport> pde_pair() const;
    IdentityReport einstein() const;
    IdentityReport classification_report() const;
    double scalar_curvature() const;  // mean over points

private:
    template <typename F>
    IdentityReport collect(const std::string& id, double tol, F&& per_point) const;

    BackendPtr backend_;
    std::uint64_t seed_;
    VerifyOptions opts_;
    std::vector<PointGeometry> geometry_;
    std::vector<AdaptedFrame> frames_;
    MuEstimate mu_;
};

// ----------------------------------------------------------------------------
// pointwise building blocks

/// mu samples at one point: sqrt(|(nabla_X J)Y|^2 / bracket) for `pairs` non-degenerate draws.
/// Throws std::runtime_error when no pair is usable.
std::vector<double> mu_samples(const PointGeometry& pg, Rng& rng, int pairs);
MuEstimate estimate_mu(const std::vector<PointGeometry>& points, std::uint64_t seed, int pairs = 10);

/// Frame-component SU(3) data at the center of the point's frame field.
/// Throws std::runtime_error when the frame is not adapted.
SU3Frame build_su3_frame(const PointGeometry& pg);

/// lambda from -lambda = 2 g(nabla_{conj F1} conj F2, conj F3), F_k = (E_k - i JE_k)/sqrt2.
std::complex<double> estimate_lambda(const PointGeometry& pg);

/// Residual |L - R| / max(1, |L|, |R|).
double relative_residual(double lhs, double rhs);
double relative_residual(const PointGeometry& pg, const Vec6& lhs, const Vec6& rhs);
double relative_residual(const ext::KForm& lhs, const ext::KForm& rhs);

/// Random vector of unit g-length.
Vec6 random_unit(const PointGeometry& pg, Rng& rng);

// Convenience wrappers building a throwaway session.
IdentityReport run_identity(std::string_view id, BackendPtr backend, int points, std::uint64_t seed,
                            VerifyOptions opts = {});
std::pair<IdentityReport, IdentityReport> check_pde_pair(BackendPtr backend, int points, std::uint64_t seed);
IdentityReport check_einstein(BackendPtr backend, int points, std::uint64_t seed);
Classification classify_gray_hervella_w1(BackendPtr backend, int points, std::uint64_t seed);

}  // namespace nk6
