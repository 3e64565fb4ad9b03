#pragma once

// Truncated multivariate Taylor polynomials in the six chart coordinates.
//
// A Jet<D> stores the Taylor coefficients c_a of f(x) = sum_a c_a x^a for all
// multi-indices |a| <= D.  The runtime order() records how many of those
// degrees are meaningful: differentiating lowers it by one and arithmetic
// truncates to the smaller order of the operands.  Evaluating chart maps on
// jets gives the exact derivatives of metric and complex structure at the
// chart center without finite differences.

#include <algorithm>
#include <array>
#include <cassert>
#include <cmath>
#include <cstddef>
#include <vector>

namespace nk6 {

inline constexpr int kChartDim = 6;

constexpr int binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    long long r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return static_cast<int>(r);
}

using MultiIndex = std::array<int, kChartDim>;

namespace detail {

template <int D>
struct JetTables {
    static constexpr int kSize = binomial(kChartDim + D, D);

    std::vector<MultiIndex> exps;           // graded order
    std::array<int, D + 2> degree_end{};    // exps[0, degree_end[d]) have degree <= d
    // product pairs (i, j, k) with k = index(exps[i] + exps[j]), sorted by deg k
    struct Pair { int i, j, k; };
    std::vector<Pair> pairs;
    std::array<int, D + 2> pairs_end{};
    // raise[v][m]: index of exps[m] + e_v, or -1 past degree D
    std::array<std::vector<int>, kChartDim> raise;

    int index_of(const MultiIndex& a) const {
        for (std::size_t m = 0; m < exps.size(); ++m)
            if (exps[m] == a) return static_cast<int>(m);
        return -1;
    }

    JetTables() {
        for (int d = 0; d <= D; ++d) {
            enumerate(d, 0, MultiIndex{});
            degree_end[d] = static_cast<int>(exps.size());
        }
        degree_end[D + 1] = degree_end[D];
        const int n = static_cast<int>(exps.size());
        for (int d = 0; d <= D; ++d) {
            for (int i = 0; i < n; ++i) {
                for (int j = 0; j < n; ++j) {
                    MultiIndex s{};
                    int deg = 0;
                    for (int v = 0; v < kChartDim; ++v) {
                        s[v] = exps[i][v] + exps[j][v];
                        deg += s[v];
                    }
                    if (deg != d) continue;
                    pairs.push_back({i, j, index_of(s)});
                }
            }
            pairs_end[d] = static_cast<int>(pairs.size());
        }
        pairs_end[D + 1] = pairs_end[D];
        for (int v = 0; v < kChartDim; ++v) {
            raise[v].assign(n, -1);
            for (int m = 0; m < n; ++m) {
                MultiIndex a = exps[m];
                a[v] += 1;
                raise[v][m] = index_of(a);
            }
        }
    }

private:
    // lexicographic enumeration of exponents of a fixed total degree
    void enumerate(int remaining, int var, MultiIndex cur) {
        if (var == kChartDim - 1) {
            cur[var] = remaining;
            exps.push_back(cur);
            return;
        }
        for (int e = remaining; e >= 0; --e) {
            cur[var] = e;
            enumerate(remaining - e, var + 1, cur);
        }
    }
};

template <int D>
const JetTables<D>& jet_tables() {
    static const JetTables<D> t;
    return t;
}

}  // namespace detail

template <int D>
class Jet {
public:
    static constexpr int kMaxDegree = D;
    static constexpr int kSize = detail::JetTables<D>::kSize;

    Jet() = default;
    Jet(double value) : order_(D) { c_[0] = value; }  // NOLINT: implicit constant

    static Jet constant(double value, int order = D) {
        Jet r(value);
        r.order_ = order;
        return r;
    }
    // x_v shifted by `offset`, as a jet of the given order
    static Jet variable(int v, double offset = 0.0, int order = D) {
        Jet r = constant(offset, order);
        if (order >= 1) r.c_[1 + v] = 1.0;
        return r;
    }

    int order() const { return order_; }
    double value() const { return c_[0]; }
    double coeff(int m) const { return c_[m]; }
    double& coeff(int m) { return c_[m]; }
    Jet& set_order(int o) {
        for (int m = count(o); m < count(order_); ++m) c_[m] = 0.0;
        order_ = o;
        return *this;
    }

    // partial derivative d^a f(0) = a! c_a
    double partial(const MultiIndex& a) const {
        const auto& t = detail::jet_tables<D>();
        const int m = t.index_of(a);
        if (m < 0) return 0.0;
        double fact = 1.0;
        for (int v = 0; v < kChartDim; ++v)
            for (int k = 2; k <= a[v]; ++k) fact *= k;
        return fact * c_[m];
    }

    Jet derivative(int v) const {
        const auto& t = detail::jet_tables<D>();
        Jet r;
        r.order_ = order_ > 0 ? order_ - 1 : 0;
        if (order_ == 0) return r;
        for (int m = 0; m < count(r.order_); ++m) {
            const int up = t.raise[v][m];
            r.c_[m] = (t.exps[m][v] + 1) * c_[up];
        }
        return r;
    }

    Jet& operator+=(const Jet& o) {
        if (o.order_ < order_) set_order(o.order_);
        for (int m = 0; m < count(order_); ++m) c_[m] += o.c_[m];
        return *this;
    }
    Jet& operator-=(const Jet& o) {
        if (o.order_ < order_) set_order(o.order_);
        for (int m = 0; m < count(order_); ++m) c_[m] -= o.c_[m];
        return *this;
    }
    Jet& operator*=(double s) {
        for (int m = 0; m < count(order_); ++m) c_[m] *= s;
        return *this;
    }
    Jet& operator/=(double s) { return *this *= (1.0 / s); }
    Jet& operator*=(const Jet& o) {
        *this = *this * o;
        return *this;
    }

    friend Jet operator+(Jet a, const Jet& b) { return a += b; }
    friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
    friend Jet operator-(Jet a) {
        for (int m = 0; m < count(a.order_); ++m) a.c_[m] = -a.c_[m];
        return a;
    }
    friend Jet operator*(Jet a, double s) { return a *= s; }
    friend Jet operator*(double s, Jet a) { return a *= s; }
    friend Jet operator/(Jet a, double s) { return a /= s; }
    friend Jet operator+(Jet a, double s) {
        a.c_[0] += s;
        return a;
    }
    friend Jet operator-(Jet a, double s) {
        a.c_[0] -= s;
        return a;
    }

    friend Jet operator*(const Jet& a, const Jet& b) {
        const auto& t = detail::jet_tables<D>();
        Jet r;
        r.order_ = std::min(a.order_, b.order_);
        const int end = t.pairs_end[r.order_];
        for (int p = 0; p < end; ++p) {
            const auto& pr = t.pairs[p];
            r.c_[pr.k] += a.c_[pr.i] * b.c_[pr.j];
        }
        return r;
    }

    friend Jet operator/(const Jet& a, const Jet& b) { return a * inverse(b); }

    // Power series composition: sum_k coeffs[k] * (f - f(0))^k
    Jet compose(const std::vector<double>& coeffs) const {
        Jet u = *this;
        u.c_[0] = 0.0;
        const int n = std::min<int>(order_, static_cast<int>(coeffs.size()) - 1);
        Jet r = constant(coeffs[n], order_);
        for (int k = n - 1; k >= 0; --k) r = u * r + coeffs[k];
        return r;
    }

    friend Jet inverse(const Jet& f) {
        const double a = f.value();
        assert(a != 0.0);
        // 1/(a+u) = sum (-1)^k u^k / a^(k+1)
        std::vector<double> s(f.order_ + 1);
        double p = 1.0 / a;
        for (int k = 0; k <= f.order_; ++k) {
            s[k] = (k % 2 == 0 ? p : -p);
            p /= a;
        }
        return f.compose(s);
    }

    friend Jet sqrt(const Jet& f) {
        const double a = f.value();
        assert(a > 0.0);
        // sqrt(a+u) = sqrt(a) * sum binom(1/2,k) (u/a)^k
        std::vector<double> s(f.order_ + 1);
        double b = 1.0, p = std::sqrt(a);
        for (int k = 0; k <= f.order_; ++k) {
            s[k] = b * p;
            b *= (0.5 - k) / (k + 1);
            p /= a;
        }
        return f.compose(s);
    }

    static int count(int order) { return detail::jet_tables<D>().degree_end[order]; }

private:
    std::array<double, kSize> c_{};
    int order_ = D;
};

inline double value_of(double x) { return x; }
template <int D>
double value_of(const Jet<D>& x) { return x.value(); }

inline double sqrt_any(double x) { return std::sqrt(x); }
template <int D>
Jet<D> sqrt_any(const Jet<D>& x) { return sqrt(x); }

}  // namespace nk6
