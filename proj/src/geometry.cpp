#include "nk6/geometry.hpp"

#include "nk6/octonion.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

namespace nk6 {

namespace {

template <typename T>
using Coords = std::array<T, 6>;

// Hypersurface {sum q_k^2 / a_k^2 = 1} in R^7.  The chart sends x to the
// radial projection of p + sum x_i v_i, with v_i an orthonormal basis of the
// tangent plane at p.  J is the cross product with the unit normal.
class QuadricBackend final : public AlmostHermitianBackend {
public:
    QuadricBackend(std::string name, std::array<double, 7> axes, bool round)
        : name_(std::move(name)), axes_(axes), round_(round) {}

    std::string name() const override { return name_; }
    int ambient_dim() const override { return 7; }

    ManifoldPoint sample_point(Rng& rng) const override {
        std::normal_distribution<double> n01;
        std::array<double, 7> q{};
        double norm2 = 0.0;
        do {
            norm2 = 0.0;
            for (double& c : q) {
                c = n01(rng);
                norm2 += c * c;
            }
        } while (norm2 < 1e-12);
        ManifoldPoint p{std::vector<double>(7), name_};
        if (round_) {
            const double s = axes_[0] / std::sqrt(norm2);
            for (int k = 0; k < 7; ++k) p.ambient[k] = q[k] * s;
        } else {
            const double rho = level(q);
            for (int k = 0; k < 7; ++k) p.ambient[k] = q[k] / rho;
        }
        return p;
    }

    void check_point(const ManifoldPoint& p) const override {
        if (p.ambient.size() != 7) throw std::invalid_argument(name_ + ": point must have 7 ambient components");
        std::array<double, 7> q{};
        std::copy(p.ambient.begin(), p.ambient.end(), q.begin());
        if (std::abs(level(q) - 1.0) > 1e-9) throw std::invalid_argument(name_ + ": point is not on the hypersurface");
    }

    ChartFields<ExactJet> chart_jets(const ManifoldPoint& p) const override {
        Coords<ExactJet> x;
        for (int i = 0; i < 6; ++i) x[i] = ExactJet::variable(i);
        return fields(p, x);
    }

    ChartFields<ValueJet> chart_values(const ManifoldPoint& p, const Vec6& offset) const override {
        Coords<ValueJet> x;
        for (int i = 0; i < 6; ++i) x[i] = ValueJet::variable(i, offset[i]);
        return fields(p, x);
    }

private:
    template <typename T>
    T level(const std::array<T, 7>& q) const {
        T s = T(0.0);
        for (int k = 0; k < 7; ++k) s = s + q[k] * q[k] * (1.0 / (axes_[k] * axes_[k]));
        return sqrt_any(s);
    }

    Eigen::Matrix<double, 7, 6> tangent_basis(const ManifoldPoint& p) const {
        check_point(p);
        Eigen::Matrix<double, 7, 1> n;
        for (int k = 0; k < 7; ++k) n[k] = p.ambient[k] / (axes_[k] * axes_[k]);
        Eigen::HouseholderQR<Eigen::Matrix<double, 7, 1>> qr(n);
        const Eigen::Matrix<double, 7, 7> q = qr.householderQ();
        return q.rightCols<6>();
    }

    template <int D>
    ChartFields<Jet<D>> fields(const ManifoldPoint& p, const Coords<Jet<D>>& x) const {
        using T = Jet<D>;
        const auto v = tangent_basis(p);
        std::array<T, 7> q;
        for (int k = 0; k < 7; ++k) {
            q[k] = T::constant(p.ambient[k], x[0].order());
            for (int i = 0; i < 6; ++i) q[k] += x[i] * v(k, i);
        }
        const T inv_rho = inverse(level(q));
        std::array<T, 7> phi;
        for (int k = 0; k < 7; ++k) phi[k] = q[k] * inv_rho;

        std::array<std::array<T, 7>, 6> dphi;
        for (int i = 0; i < 6; ++i)
            for (int k = 0; k < 7; ++k) dphi[i][k] = phi[k].derivative(i);

        std::array<T, 7> normal;
        T nn = T(0.0);
        for (int k = 0; k < 7; ++k) {
            normal[k] = phi[k] * (1.0 / (axes_[k] * axes_[k]));
            nn += normal[k] * normal[k];
        }
        const T inv_nn = inverse(sqrt_any(nn));
        for (auto& c : normal) c = c * inv_nn;

        ChartFields<T> out;
        Mat6Of<T> h;
        for (int j = 0; j < 6; ++j) {
            const auto w = octonion::cross(normal, dphi[j]);
            for (int i = 0; i < 6; ++i) {
                T gij = T(0.0), hij = T(0.0);
                for (int k = 0; k < 7; ++k) {
                    gij += dphi[i][k] * dphi[j][k];
                    hij += dphi[i][k] * w[k];
                }
                out.g[6 * i + j] = gij;
                h[6 * i + j] = hij;
            }
        }
        // J^a_b = g^{ac} h_cb with h_cb = <d_c, J d_b>
        const auto ginv = inverse6(out.g);
        for (int a = 0; a < 6; ++a)
            for (int b = 0; b < 6; ++b) {
                T s = T(0.0);
                for (int c = 0; c < 6; ++c) s += ginv[6 * a + c] * h[6 * c + b];
                out.J[6 * a + b] = s;
            }
        out.ambient.assign(phi.begin(), phi.end());
        return out;
    }

    std::string name_;
    std::array<double, 7> axes_;
    bool round_;
};

// R^6, identity metric, constant J0 (pairs (0,1), (2,3), (4,5))
class FlatBackend final : public AlmostHermitianBackend {
public:
    std::string name() const override { return "c3"; }
    int ambient_dim() const override { return 6; }

    ManifoldPoint sample_point(Rng& rng) const override {
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        ManifoldPoint p{std::vector<double>(6), "c3"};
        for (double& c : p.ambient) c = u(rng);
        return p;
    }

    void check_point(const ManifoldPoint& p) const override {
        if (p.ambient.size() != 6) throw std::invalid_argument("c3: point must have 6 components");
    }

    ChartFields<ExactJet> chart_jets(const ManifoldPoint& p) const override { return fields<4>(p, Vec6::Zero()); }
    ChartFields<ValueJet> chart_values(const ManifoldPoint& p, const Vec6& offset) const override {
        return fields<1>(p, offset);
    }

private:
    template <int D>
    ChartFields<Jet<D>> fields(const ManifoldPoint& p, const Vec6& offset) const {
        check_point(p);
        using T = Jet<D>;
        ChartFields<T> out;
        for (int a = 0; a < 6; ++a)
            for (int b = 0; b < 6; ++b) {
                out.g[6 * a + b] = T::constant(a == b ? 1.0 : 0.0, D - 1);
                double j = 0.0;
                if (a % 2 == 1 && b == a - 1) j = 1.0;
                if (a % 2 == 0 && b == a + 1) j = -1.0;
                out.J[6 * a + b] = T::constant(j, D - 1);
            }
        for (int i = 0; i < 6; ++i) out.ambient.push_back(T::variable(i, p.ambient[i] + offset[i]));
        return out;
    }
};

double g_dot(const Mat6& g, const Vec6& a, const Vec6& b) { return a.dot(g * b); }

}  // namespace

// ----------------------------------------------------------------------------

Eigen::VectorXd AlmostHermitianBackend::chart_point(const ManifoldPoint& p, const Vec6& x) const {
    const auto f = chart_values(p, x);
    Eigen::VectorXd r(static_cast<Eigen::Index>(f.ambient.size()));
    for (std::size_t k = 0; k < f.ambient.size(); ++k) r[static_cast<Eigen::Index>(k)] = f.ambient[k].value();
    return r;
}

Eigen::MatrixXd AlmostHermitianBackend::pushforward(const ManifoldPoint& p) const {
    const auto f = chart_values(p, Vec6::Zero());
    Eigen::MatrixXd r(static_cast<Eigen::Index>(f.ambient.size()), 6);
    for (std::size_t k = 0; k < f.ambient.size(); ++k)
        for (int i = 0; i < 6; ++i) r(static_cast<Eigen::Index>(k), i) = f.ambient[k].derivative(i).value();
    return r;
}

Mat6 AlmostHermitianBackend::metric(const ManifoldPoint& p) const { return values_of(chart_values(p, Vec6::Zero()).g); }

Mat6 AlmostHermitianBackend::complex_structure(const ManifoldPoint& p) const {
    return values_of(chart_values(p, Vec6::Zero()).J);
}

BackendPtr backend_s6(double radius) {
    if (!(radius > 0.0) || !std::isfinite(radius)) throw std::invalid_argument("s6: radius must be positive");
    std::array<double, 7> axes;
    axes.fill(radius);
    return std::make_shared<QuadricBackend>("s6", axes, true);
}

BackendPtr backend_flat_kahler() { return std::make_shared<FlatBackend>(); }

BackendPtr backend_perturbed(double delta) {
    if (!(delta > 0.0 && delta < 0.5)) {
        std::ostringstream os;
        os << "perturbed: delta must lie in (0, 0.5), got " << delta;
        throw std::invalid_argument(os.str());
    }
    std::array<double, 7> axes;
    axes.fill(1.0);
    axes[0] = 1.0 + delta;
    return std::make_shared<QuadricBackend>("perturbed", axes, false);
}

std::vector<ManifoldPoint> sample_points(const AlmostHermitianBackend& b, int count, std::uint64_t seed) {
    if (count < 0) throw std::invalid_argument("point count must be non-negative");
    std::vector<ManifoldPoint> pts;
    pts.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        Rng rng(stream_seed(seed, kPointStream, static_cast<std::uint64_t>(i)));
        pts.push_back(b.sample_point(rng));
    }
    return pts;
}

AdaptedFrame adapted_frame(const AlmostHermitianBackend& b, const ManifoldPoint& p, std::uint64_t seed) {
    return adapted_frame(b.metric(p), b.complex_structure(p), seed);
}

AdaptedFrame adapted_frame(const Mat6& g, const Mat6& J, std::uint64_t seed) {
    Rng rng(seed);
    std::normal_distribution<double> n01;
    constexpr double kDegenerate = 1e-3;

    for (int attempt = 0; attempt < 100; ++attempt) {
        AdaptedFrame f;
        bool ok = true;
        for (int k = 0; k < 3 && ok; ++k) {
            Vec6 v;
            for (int i = 0; i < 6; ++i) v[i] = n01(rng);
            const double n0 = std::sqrt(g_dot(g, v, v));
            for (int m = 0; m < 2 * k; ++m) v -= g_dot(g, f.vectors[m], v) * f.vectors[m];
            const double n1 = std::sqrt(g_dot(g, v, v));
            if (n1 < kDegenerate * n0) {
                ok = false;
                break;
            }
            f.vectors[2 * k] = v / n1;
            f.vectors[2 * k + 1] = J * f.vectors[2 * k];
        }
        if (!ok) continue;
        Mat6 m;
        for (int c = 0; c < 6; ++c) m.col(c) = f.vectors[c];
        f.orientation = m.determinant() > 0 ? 1 : -1;
        return f;
    }
    throw std::runtime_error("adapted_frame: 100 consecutive degenerate draws");
}

Mat6 frame_gram(const Mat6& g, const AdaptedFrame& f) {
    Mat6 r;
    for (int a = 0; a < 6; ++a)
        for (int b = 0; b < 6; ++b) r(a, b) = g_dot(g, f.vectors[a], f.vectors[b]);
    return r;
}

// ----------------------------------------------------------------------------

StructureJet structure_jet(const AlmostHermitianBackend& b, const ManifoldPoint& p, const DerivativeOptions& opts) {
    const bool exact = opts.mode == DerivativeMode::exact ||
                       (opts.mode == DerivativeMode::automatic && b.has_exact_derivatives());
    if (opts.mode == DerivativeMode::exact && !b.has_exact_derivatives())
        throw std::invalid_argument(b.name() + ": exact derivatives are not available");
    if (!exact) return finite_difference_jet(b, p, opts.steps);
    const auto f = b.chart_jets(p);
    return {f.g, f.J, true};
}

StructureJet finite_difference_jet(const AlmostHermitianBackend& b, const ManifoldPoint& p, const FdSteps& steps) {
    if (!(steps.low_order > 0.0) || !(steps.third_order > 0.0))
        throw std::invalid_argument("finite-difference steps must be positive");
    // stencil points are integer multiples of one step; cache per step
    using Key = std::pair<int, MultiIndex>;
    std::map<Key, std::pair<Mat6, Mat6>> cache;
    auto eval = [&](int step_id, const MultiIndex& k) -> const std::pair<Mat6, Mat6>& {
        const Key key{step_id, k};
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
        const double h = step_id == 0 ? steps.low_order : steps.third_order;
        Vec6 y;
        for (int i = 0; i < 6; ++i) y[i] = h * k[i];
        const auto f = b.chart_values(p, y);
        return cache.emplace(key, std::make_pair(values_of(f.g), values_of(f.J))).first->second;
    };

    StructureJet out;
    out.exact = false;
    for (auto& e : out.g) e = ExactJet::constant(0.0, 3);
    for (auto& e : out.J) e = ExactJet::constant(0.0, 3);

    const auto& t = detail::jet_tables<4>();
    for (int m = 0; m < t.degree_end[3]; ++m) {
        const MultiIndex& alpha = t.exps[m];
        std::vector<int> vars;
        double fact = 1.0;
        for (int v = 0; v < 6; ++v)
            for (int r = 0; r < alpha[v]; ++r) {
                vars.push_back(v);
                fact *= (r + 1);
            }
        const int k = static_cast<int>(vars.size());
        const int step_id = k == 3 ? 1 : 0;
        const double h = step_id == 0 ? steps.low_order : steps.third_order;
        // nested central first differences
        Mat6 dg = Mat6::Zero(), dj = Mat6::Zero();
        for (int s = 0; s < (1 << k); ++s) {
            MultiIndex off{};
            double w = 1.0;
            for (int j = 0; j < k; ++j) {
                const int sign = (s >> j) & 1 ? -1 : 1;
                off[vars[j]] += sign;
                w *= sign;
            }
            const auto& val = eval(step_id, off);
            dg += w * val.first;
            dj += w * val.second;
        }
        const double scale = 1.0 / (std::pow(2.0 * h, k) * fact);
        for (int e = 0; e < 36; ++e) {
            out.g[e].coeff(m) = dg(e / 6, e % 6) * scale;
            out.J[e].coeff(m) = dj(e / 6, e % 6) * scale;
        }
    }
    return out;
}

Mat6 derivative_oracle(const AlmostHermitianBackend& b, TensorField field, const ManifoldPoint& p,
                       std::span<const Vec6> directions, const DerivativeOptions& opts) {
    const int k = static_cast<int>(directions.size());
    if (k < 1 || k > 3) throw std::invalid_argument("derivative_oracle supports derivative orders 1 to 3");
    const StructureJet s = structure_jet(b, p, opts);

    Mat6Of<ExactJet> f;
    switch (field) {
        case TensorField::metric: f = s.g; break;
        case TensorField::complex_structure: f = s.J; break;
        case TensorField::fundamental_form:
            // sigma_ij = g(J d_i, d_j) = J^c_i g_cj
            for (int i = 0; i < 6; ++i)
                for (int j = 0; j < 6; ++j) {
                    ExactJet acc = ExactJet::constant(0.0, 3);
                    for (int c = 0; c < 6; ++c) acc += s.J[6 * c + i] * s.g[6 * c + j];
                    f[6 * i + j] = acc;
                }
            break;
    }

    Mat6 r = Mat6::Zero();
    int total = 1;
    for (int j = 0; j < k; ++j) total *= 6;
    for (int code = 0; code < total; ++code) {
        MultiIndex alpha{};
        double w = 1.0;
        int c = code;
        for (int j = 0; j < k; ++j) {
            const int i = c % 6;
            c /= 6;
            alpha[i] += 1;
            w *= directions[j][i];
        }
        if (w == 0.0) continue;
        for (int e = 0; e < 36; ++e) r(e / 6, e % 6) += w * f[e].partial(alpha);
    }
    return r;
}

}  // namespace nk6
