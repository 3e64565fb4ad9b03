#include "nk6/verify.hpp"

#include "identity_kernels.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <stdexcept>

namespace nk6 {

using ext::KForm;

double ToleranceTiers::for_tier(int tier) const {
    switch (tier) {
        case 1: return tier1;
        case 2: return tier2;
        case 3: return tier3;
        default: throw std::invalid_argument("tolerance tier must be 1, 2 or 3");
    }
}

const std::vector<IdentityInfo>& identity_registry() {
    static const std::vector<IdentityInfo> reg = {
        {"I1", 1, "(nabla_{JX} J) Y = -J (nabla_X J) Y"},
        {"I2", 1, "nabla sigma(JX,Y,Z) = nabla sigma(X,JY,Z) = nabla sigma(X,Y,JZ)"},
        {"I3", 1, "nabla sigma is totally skew"},
        {"I4", 1, "J-derivation of nabla sigma equals -3 nabla sigma"},
        {"I5", 1, "d sigma = 3 nabla sigma"},
        {"I6", 2, "Ricci identity for nabla^2 sigma"},
        {"I7", 2, "nabla^2 sigma(X,X,JY,Y) = |(nabla_X J) Y|^2"},
        {"I8", 2, "|(nabla_X J) Y|^2 = R(X,Y,JX,JY) - R(X,Y,X,Y)"},
        {"I9", 2, "R(JW,JX,JY,JZ) = R(W,X,Y,Z)"},
        {"I10", 2, "g((nabla_W J)X, (nabla_Y J)Z) = R(W,X,JY,JZ) - R(W,X,Y,Z)"},
        {"I11", 2, "2 nabla^2 sigma(W,X,Y,Z) = -cyclic sum g((nabla_W J)X, (nabla_Y J)JZ)"},
        {"I12", 2, "g(AX,Y) = sum_i g((nabla_X J)E_i, (nabla_Y J)E_i), A = Ric - Ric*"},
        {"I13", 2, "A is self-adjoint and commutes with J"},
        {"I14", 3, "2g((nabla_Z A)X,Y) = g(AJX,(nabla_Z J)Y) + g(AJY,(nabla_Z J)X)"},
        {"I15", 2, "A = 4 mu^2 id"},
        {"I16", 2, "|(nabla_X J)Y|^2 / (|X|^2|Y|^2 - g(X,Y)^2 - sigma(X,Y)^2) is constant"},
        {"I17", 1, "Nijenhuis tensor N(X,Y) = J (nabla_X J) Y"},
        {"I18", 1, "hat nabla g = 0 and hat nabla J = 0"},
        {"I19", 2, "hat R equals the closed expression in R"},
        {"I20", 2, "hat R(W,X,JY,JZ) = hat R(W,X,Y,Z)"},
        {"I21", 2, "hat R(W,X,Y,Z) = hat R(Y,Z,W,X)"},
        {"I22", 2, "sum_j (nabla^2_{E_j,E_j} J) Y = -AJY"},
        {"I23", 2, "sum g(AE_i,E_j)(R(W,E_i,E_j,X) - 5R(W,E_i,JE_j,JX)) = 0"},
        {"I24", 2, "Ric = 5 Ric* = 5 mu^2 g"},
        {"I25", 1, "nabla_{conj X} Y has no (0,1) part for X, Y of type (1,0)"},
        {"I26", 1, "[F_i,F_j]^{0,1} = -conj(lambda) conj(F_k)"},
        {"I27", 1, "lambda = -i sqrt2 mu"},
        {"I28", 2, "d sigma = 3 mu psi+, d psi- = -2 mu sigma^sigma"},
        {"I29", 1, "psi- = psi+(J.,J.,J.) = -psi+(.,.,J.)"},
        {"I30", 1, "SU(3) normalisations: psi+^psi- = (2/3)sigma^3 = 4 vol, sigma^psi = 0, *psi+ = psi-"},
        {"I31", 2, "hat nabla of nabla sigma, psi+ and psi- vanish"},
        {"I32", 2, "rescaled metric: d sigma = 3 psi+, d psi- = -2 sigma^sigma"},
    };
    return reg;
}

const IdentityInfo& identity_info(std::string_view id) {
    for (const auto& info : identity_registry())
        if (info.id == id) return info;
    throw std::invalid_argument("unknown identity '" + std::string(id) + "'");
}

bool is_registry_id(std::string_view id) {
    return std::any_of(identity_registry().begin(), identity_registry().end(),
                       [&](const IdentityInfo& i) { return i.id == id; });
}

// ----------------------------------------------------------------------------

double relative_residual(double lhs, double rhs) {
    return std::abs(lhs - rhs) / std::max({1.0, std::abs(lhs), std::abs(rhs)});
}

double relative_residual(const PointGeometry& pg, const Vec6& lhs, const Vec6& rhs) {
    return pg.norm(lhs - rhs) / std::max({1.0, pg.norm(lhs), pg.norm(rhs)});
}

double relative_residual(const KForm& lhs, const KForm& rhs) {
    return (lhs - rhs).max_abs() / std::max({1.0, lhs.max_abs(), rhs.max_abs()});
}

Vec6 random_unit(const PointGeometry& pg, Rng& rng) {
    std::normal_distribution<double> n;
    for (;;) {
        Vec6 v;
        for (int i = 0; i < 6; ++i) v[i] = n(rng);
        const double len = pg.norm(v);
        if (len > 1e-8) return v / len;
    }
}

std::vector<double> mu_samples(const PointGeometry& pg, Rng& rng, int pairs) {
    constexpr double kDegenerate = 1e-6;
    std::vector<double> out;
    const int attempts = 100 * std::max(pairs, 1);
    for (int k = 0; k < attempts && static_cast<int>(out.size()) < pairs; ++k) {
        const Vec6 x = random_unit(pg, rng), y = random_unit(pg, rng);
        const double gxy = pg.dot(x, y), sxy = pg.dot(pg.J * x, y);
        const double bracket = 1.0 - gxy * gxy - sxy * sxy;
        if (bracket < kDegenerate) continue;
        const Vec6 n = nabla_J(pg, x, y);
        out.push_back(std::sqrt(pg.dot(n, n) / bracket));
    }
    if (out.empty()) throw std::runtime_error("mu estimate: every sampled vector pair was degenerate");
    return out;
}

MuEstimate estimate_mu(const std::vector<PointGeometry>& points, std::uint64_t seed, int pairs) {
    if (points.empty()) throw std::invalid_argument("mu estimate needs at least one point");
    MuEstimate m;
    m.min = std::numeric_limits<double>::infinity();
    m.max = -m.min;
    double sum = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        Rng rng(stream_seed(seed, kMuStream, i));
        for (double s : mu_samples(points[i], rng, pairs)) {
            sum += s;
            m.min = std::min(m.min, s);
            m.max = std::max(m.max, s);
            ++m.samples;
        }
    }
    m.value = sum / m.samples;
    m.spread = m.max - m.min;
    return m;
}

SU3Frame build_su3_frame(const PointGeometry& pg) {
    constexpr double kAdapted = 1e-8;
    SU3Frame f;
    f.frame = pg.su3.center();
    f.aligned = pg.su3.aligned;
    f.frame_mu = pg.su3.frame_mu;

    const Mat6 gram = frame_gram(pg.g, f.frame);
    double err = (gram - Mat6::Identity()).cwiseAbs().maxCoeff();
    for (int k = 0; k < 3; ++k) err = std::max(err, pg.norm(pg.J * f.frame[2 * k] - f.frame[2 * k + 1]));
    if (!(err < kAdapted)) throw std::runtime_error("SU(3) frame is not adapted (residual " + std::to_string(err) + ")");

    const double s = 1.0 / std::sqrt(2.0);
    for (int k = 0; k < 3; ++k) {
        f.f_re[k] = KForm::basis({2 * k}, s);
        f.f_im[k] = KForm::basis({2 * k + 1}, s);
    }
    // (a + ib) ^ (c + id)
    auto cwedge = [](const KForm& a, const KForm& b, const KForm& c, const KForm& d) {
        return std::pair{wedge(a, c) - wedge(b, d), wedge(a, d) + wedge(b, c)};
    };
    const auto [re12, im12] = cwedge(f.f_re[0], f.f_im[0], f.f_re[1], f.f_im[1]);
    const auto [re, im] = cwedge(re12, im12, f.f_re[2], f.f_im[2]);
    f.psi_plus = 2.0 * std::sqrt(2.0) * re;
    f.psi_minus = 2.0 * std::sqrt(2.0) * im;
    f.sigma = to_frame(pg.sigma.value(), f.frame);
    return f;
}

std::complex<double> estimate_lambda(const PointGeometry& pg) {
    const auto& E = pg.su3.E;
    auto val = [](const JetVec& v) {
        Vec6 r;
        for (int a = 0; a < 6; ++a) r[a] = v[a].value();
        return r;
    };
    const Vec6 e1 = val(E[0]), je1 = val(E[1]), e3 = val(E[4]), je3 = val(E[5]);
    // nabla_{conj F1} conj F2 = 1/2 [(nabla_{E1} E2 - nabla_{JE1} JE2) + i (nabla_{E1} JE2 + nabla_{JE1} E2)]
    const Vec6 re = 0.5 * (nabla_vector(pg, e1, E[2]) - nabla_vector(pg, je1, E[3]));
    const Vec6 im = 0.5 * (nabla_vector(pg, e1, E[3]) + nabla_vector(pg, je1, E[2]));
    // complex bilinear g with conj F3 = (E3 + i JE3)/sqrt2
    const double s = 1.0 / std::sqrt(2.0);
    const std::complex<double> gv(s * (pg.dot(re, e3) - pg.dot(im, je3)), s * (pg.dot(re, je3) + pg.dot(im, e3)));
    return -2.0 * gv;
}

// ----------------------------------------------------------------------------

namespace {

// Runs f(i) for every point, in parallel when enabled; rethrows the first failure by index.
template <typename F>
void for_each_point(std::size_t n, bool parallel, F&& f) {
    std::vector<std::exception_ptr> errors(n);
    auto guarded = [&](std::size_t i) {
        try {
            f(i);
        } catch (...) {
            errors[i] = std::current_exception();
        }
    };
#ifdef NK6_USE_OPENMP
    if (parallel) {
        const long count = static_cast<long>(n);
#pragma omp parallel for schedule(dynamic)
        for (long i = 0; i < count; ++i) guarded(static_cast<std::size_t>(i));
    } else {
        for (std::size_t i = 0; i < n; ++i) guarded(i);
    }
#else
    (void)parallel;
    for (std::size_t i = 0; i < n; ++i) guarded(i);
#endif
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

constexpr std::uint64_t kEinsteinStream = kIdentityStream + 100;

}  // namespace

Session::Session(BackendPtr backend, int point_count, std::uint64_t seed, VerifyOptions opts)
    : Session(backend, backend ? sample_points(*backend, point_count, seed) : std::vector<ManifoldPoint>{}, seed,
              opts) {}

Session::Session(BackendPtr backend, std::vector<ManifoldPoint> points, std::uint64_t seed, VerifyOptions opts)
    : backend_(std::move(backend)), seed_(seed), opts_(opts) {
    if (!backend_) throw std::invalid_argument("session needs a backend");
    if (points.empty()) throw std::invalid_argument("session needs at least one point");
    if (opts_.draws < 1) throw std::invalid_argument("draws must be positive");
    for (const auto& p : points) backend_->check_point(p);

    geometry_.resize(points.size());
    frames_.resize(points.size());
    for_each_point(points.size(), opts_.execution == Execution::parallel, [&](std::size_t i) {
        frames_[i] = adapted_frame(*backend_, points[i], stream_seed(seed_, kFrameStream, i));
        geometry_[i] = PointGeometry::build(*backend_, points[i], frames_[i], opts_.derivatives);
    });
    mu_ = estimate_mu(geometry_, seed_);
}

template <typename F>
IdentityReport Session::collect(const std::string& id, double tol, F&& per_point) const {
    std::vector<std::vector<double>> res(size());
    for_each_point(size(), opts_.execution == Execution::parallel, [&](std::size_t i) { res[i] = per_point(i); });
    IdentityReport r;
    r.id = id;
    r.tol = tol;
    double sum = 0.0;
    bool nan = false;
    for (const auto& v : res)
        for (double x : v) {
            ++r.n;
            sum += x;
            if (std::isnan(x)) nan = true;
            else r.max_residual = std::max(r.max_residual, x);
        }
    if (nan) r.max_residual = std::numeric_limits<double>::quiet_NaN();  // reported as a failure
    r.mean_residual = r.n ? sum / r.n : 0.0;
    r.pass = std::isfinite(r.max_residual) && r.max_residual <= tol;
    return r;
}

IdentityReport Session::run(std::string_view id) const {
    const IdentityInfo& info = identity_info(id);
    const int number = std::stoi(info.id.substr(1));
    const double tol = opts_.tolerances.for_tier(info.tier);

    if (number == 16) {
        IdentityReport r;
        r.id = info.id;
        r.n = mu_.samples;
        r.max_residual = mu_.spread;
        r.mean_residual = mu_.spread;
        r.tol = tol;
        r.pass = std::isfinite(mu_.spread) && mu_.spread <= tol;
        return r;
    }
    constexpr double kVanishingMu = 1e-9;
    if (number == 32 && std::abs(mu_.value) < kVanishingMu) {
        IdentityReport r;
        r.id = info.id;
        r.tol = tol;
        r.note = "vacuous: mu = 0, no rescaling to the unit type constant";
        return r;
    }

    const detail::KernelContext ctx{opts_.draws, mu_.value};
    return collect(info.id, tol, [&](std::size_t i) {
        Rng rng(stream_seed(seed_, kIdentityStream + static_cast<std::uint64_t>(number), i));
        return detail::identity_residuals(number, geometry_[i], rng, ctx);
    });
}

std::pair<IdentityReport, IdentityReport> Session::pde_pair() const {
    const double tol = opts_.tolerances.tier2;
    std::vector<std::pair<double, double>> res(size());
    for_each_point(size(), opts_.execution == Execution::parallel,
                   [&](std::size_t i) { res[i] = detail::pde_residuals(geometry_[i], mu_.value, 1.0); });
    auto first = collect("pde.dsigma", tol, [&](std::size_t i) { return std::vector<double>{res[i].first}; });
    auto second = collect("pde.dpsi_minus", tol, [&](std::size_t i) { return std::vector<double>{res[i].second}; });
    return {first, second};
}

IdentityReport Session::einstein() const {
    const double mu2 = mu_.value * mu_.value;
    return collect("einstein", opts_.tolerances.tier2, [&](std::size_t i) {
        const PointGeometry& pg = geometry_[i];
        Rng rng(stream_seed(seed_, kEinsteinStream, i));
        std::vector<double> out;
        for (int k = 0; k < opts_.draws; ++k) {
            const Vec6 x = random_unit(pg, rng), y = random_unit(pg, rng);
            const double gxy = pg.dot(x, y);
            const double ric = x.dot(pg.ric * y);
            out.push_back(std::max({relative_residual(pg.dot(pg.ricci_diff * x, y), 4.0 * mu2 * gxy),
                                    relative_residual(ric, 5.0 * x.dot(pg.ric_star * y)),
                                    relative_residual(ric, 5.0 * mu2 * gxy)}));
        }
        return out;
    });
}

double Session::scalar_curvature() const {
    double s = 0.0;
    for (const auto& pg : geometry_) s += (pg.ginv * pg.ric).trace();
    return s / static_cast<double>(size());
}

LambdaEstimate Session::lambda() const {
    LambdaEstimate l;
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const auto& pg : geometry_) {
        const auto v = estimate_lambda(pg);
        l.value += v;
        lo = std::min(lo, std::abs(v));
        hi = std::max(hi, std::abs(v));
    }
    l.value /= static_cast<double>(size());
    l.spread = hi - lo;
    return l;
}

Classification Session::classify() const {
    const double tol = opts_.tolerances.tier1;
    Classification c;
    for (const auto& pg : geometry_) {
        const AdaptedFrame fr = pg.su3.center();
        double n[6][6][6];
        double norm = 0.0;
        for (int a = 0; a < 6; ++a)
            for (int b = 0; b < 6; ++b)
                for (int d = 0; d < 6; ++d) {
                    n[a][b][d] = nabla_sigma(pg, fr[a], fr[b], fr[d]);
                    norm = std::max(norm, std::abs(n[a][b][d]));
                }
        // totally skew part, then its (3,0)+(0,3) component
        const KForm alt = KForm::from_values(3, [&](const std::vector<int>& t) {
            const int i = t[0], j = t[1], k = t[2];
            return (n[i][j][k] + n[j][k][i] + n[k][i][j] - n[j][i][k] - n[i][k][j] - n[k][j][i]) / 6.0;
        });
        const KForm p30 = ext::split3(alt).part_30;
        double comp = 0.0, type = 0.0;
        for (int a = 0; a < 6; ++a)
            for (int b = 0; b < 6; ++b)
                for (int d = 0; d < 6; ++d) {
                    const std::array<Vec6, 3> e{ext::basis_vector(a), ext::basis_vector(b), ext::basis_vector(d)};
                    comp = std::max(comp, std::abs(n[a][b][d] - p30.evaluate(e)));
                    type = std::max(type, std::abs(nabla_sigma(pg, fr[a], fr[b], pg.J * fr[d]) -
                                                   nabla_sigma(pg, fr[a], pg.J * fr[b], fr[d])));
                }
        const double scale = std::max(1.0, norm);
        c.nabla_sigma_norm = std::max(c.nabla_sigma_norm, norm);
        c.complement_residual = std::max(c.complement_residual, comp / scale);
        c.type_residual = std::max(c.type_residual, type / scale);
    }
    if (c.nabla_sigma_norm < tol)
        c.label = "Kähler";
    else if (c.complement_residual <= tol)
        c.label = "nearly Kähler";
    else
        c.label = "other";
    return c;
}

IdentityReport Session::classification_report() const {
    const Classification c = classify();
    IdentityReport r;
    r.id = "classify";
    r.n = static_cast<int>(size());
    r.max_residual = c.complement_residual;
    r.mean_residual = c.complement_residual;
    r.tol = opts_.tolerances.tier1;
    r.pass = c.complement_residual <= r.tol;
    r.note = c.label;
    return r;
}

// ----------------------------------------------------------------------------

IdentityReport run_identity(std::string_view id, BackendPtr backend, int points, std::uint64_t seed,
                            VerifyOptions opts) {
    identity_info(id);  // reject unknown ids before any sampling
    return Session(std::move(backend), points, seed, opts).run(id);
}

std::pair<IdentityReport, IdentityReport> check_pde_pair(BackendPtr backend, int points, std::uint64_t seed) {
    return Session(std::move(backend), points, seed).pde_pair();
}

IdentityReport check_einstein(BackendPtr backend, int points, std::uint64_t seed) {
    return Session(std::move(backend), points, seed).einstein();
}

Classification classify_gray_hervella_w1(BackendPtr backend, int points, std::uint64_t seed) {
    return Session(std::move(backend), points, seed).classify();
}

}  // namespace nk6
