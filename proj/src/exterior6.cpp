#include "nk6/exterior6.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace nk6::ext {

namespace {

struct MaskTables {
    std::array<std::vector<std::uint8_t>, kDim + 1> by_degree;
    std::array<int, 64> position{};

    MaskTables() {
        for (int k = 0; k <= kDim; ++k) {
            // lexicographic order on increasing tuples
            std::vector<int> idx(k);
            for (int i = 0; i < k; ++i) idx[i] = i;
            while (true) {
                std::uint8_t m = 0;
                for (int i : idx) m |= static_cast<std::uint8_t>(1u << i);
                position[m] = static_cast<int>(by_degree[k].size());
                by_degree[k].push_back(m);
                int i = k - 1;
                while (i >= 0 && idx[i] == kDim - k + i) --i;
                if (i < 0) break;
                ++idx[i];
                for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
            }
        }
    }
};

const MaskTables& tables() {
    static const MaskTables t;
    return t;
}

// sign of e^I ^ e^J relative to e^{I u J}; 0 if they overlap
int merge_sign(std::uint8_t a, std::uint8_t b) {
    if (a & b) return 0;
    int inversions = 0;
    for (int i = 0; i < kDim; ++i) {
        if (!(a & (1u << i))) continue;
        // elements of b smaller than i must move past i
        inversions += std::popcount(static_cast<unsigned>(b & ((1u << i) - 1u)));
    }
    return (inversions % 2 == 0) ? 1 : -1;
}

double det_small(const Eigen::MatrixXd& m) {
    if (m.rows() == 0) return 1.0;
    return m.determinant();
}

std::array<Vector6, kDim> j_basis() {
    std::array<Vector6, kDim> jb;
    for (int i = 0; i < kDim; ++i) jb[i] = apply_j0(basis_vector(i));
    return jb;
}

}  // namespace

const std::vector<std::uint8_t>& masks_of_degree(int k) { return tables().by_degree.at(k); }

int mask_position(std::uint8_t mask) { return tables().position[mask]; }

std::vector<int> mask_indices(std::uint8_t mask) {
    std::vector<int> r;
    for (int i = 0; i < kDim; ++i)
        if (mask & (1u << i)) r.push_back(i);
    return r;
}

Vector6 apply_j0(const Vector6& v) {
    Vector6 r;
    for (int i = 0; i < 3; ++i) {
        r[2 * i] = -v[2 * i + 1];
        r[2 * i + 1] = v[2 * i];
    }
    return r;
}

Vector6 basis_vector(int i) {
    Vector6 v = Vector6::Zero();
    v[i] = 1.0;
    return v;
}

KForm::KForm(int degree) : degree_(degree) {
    if (degree < 0 || degree > kDim) throw std::invalid_argument("form degree out of range");
    coeffs_.assign(masks_of_degree(degree).size(), 0.0);
}

KForm KForm::basis(std::initializer_list<int> indices, double coeff) {
    KForm r(static_cast<int>(indices.size()));
    std::uint8_t mask = 0;
    int sign = 1;
    for (int i : indices) {
        if (i < 0 || i >= kDim) throw std::invalid_argument("basis index out of range");
        const auto bit = static_cast<std::uint8_t>(1u << i);
        if (mask & bit) return KForm(static_cast<int>(indices.size()));
        sign *= merge_sign(mask, bit);
        mask |= bit;
    }
    r.coeffs_[mask_position(mask)] = sign * coeff;
    return r;
}

KForm KForm::scalar(double s) {
    KForm r(0);
    r.coeffs_[0] = s;
    return r;
}

KForm KForm::volume() { return basis({0, 1, 2, 3, 4, 5}); }

double KForm::coefficient(std::initializer_list<int> increasing) const {
    std::uint8_t mask = 0;
    for (int i : increasing) mask |= static_cast<std::uint8_t>(1u << i);
    if (std::popcount(static_cast<unsigned>(mask)) != degree_)
        throw std::invalid_argument("tuple length does not match form degree");
    return coeffs_[mask_position(mask)];
}

double KForm::evaluate(std::span<const Vector6> vectors) const {
    if (static_cast<int>(vectors.size()) != degree_)
        throw std::invalid_argument("wrong number of arguments for form evaluation");
    const auto& ms = masks_of_degree(degree_);
    double total = 0.0;
    Eigen::MatrixXd m(degree_, degree_);
    for (std::size_t p = 0; p < ms.size(); ++p) {
        if (coeffs_[p] == 0.0) continue;
        const auto idx = mask_indices(ms[p]);
        for (int r = 0; r < degree_; ++r)
            for (int c = 0; c < degree_; ++c) m(r, c) = vectors[c][idx[r]];
        total += coeffs_[p] * det_small(m);
    }
    return total;
}

KForm& KForm::operator+=(const KForm& o) {
    if (o.degree_ != degree_) throw std::invalid_argument("adding forms of different degree");
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
    return *this;
}

KForm& KForm::operator-=(const KForm& o) {
    if (o.degree_ != degree_) throw std::invalid_argument("subtracting forms of different degree");
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
    return *this;
}

KForm& KForm::operator*=(double s) {
    for (double& c : coeffs_) c *= s;
    return *this;
}

double KForm::max_abs() const {
    double m = 0.0;
    for (double c : coeffs_) m = std::max(m, std::abs(c));
    return m;
}

KForm wedge(const KForm& a, const KForm& b) {
    if (a.degree() + b.degree() > kDim) throw std::invalid_argument("wedge degree exceeds 6");
    KForm r(a.degree() + b.degree());
    const auto& ma = masks_of_degree(a.degree());
    const auto& mb = masks_of_degree(b.degree());
    for (std::size_t i = 0; i < ma.size(); ++i) {
        if (a[i] == 0.0) continue;
        for (std::size_t j = 0; j < mb.size(); ++j) {
            const int s = merge_sign(ma[i], mb[j]);
            if (s == 0 || b[j] == 0.0) continue;
            r[mask_position(ma[i] | mb[j])] += s * a[i] * b[j];
        }
    }
    return r;
}

KForm hodge_star(const KForm& a) {
    KForm r(kDim - a.degree());
    const auto& ms = masks_of_degree(a.degree());
    for (std::size_t i = 0; i < ms.size(); ++i) {
        const auto comp = static_cast<std::uint8_t>(~ms[i] & 0x3f);
        r[mask_position(comp)] += merge_sign(ms[i], comp) * a[i];
    }
    return r;
}

double inner(const KForm& a, const KForm& b) {
    if (a.degree() != b.degree()) throw std::invalid_argument("inner product of forms of different degree");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

KForm j_action(const KForm& a) {
    const auto jb = j_basis();
    if (a.degree() == 2) {
        return KForm::from_values(2, [&](const std::vector<int>& t) {
            const std::array<Vector6, 2> v{jb[t[0]], jb[t[1]]};
            return a.evaluate(v);
        });
    }
    if (a.degree() == 3) {
        return KForm::from_values(3, [&](const std::vector<int>& t) {
            const Vector6 x = basis_vector(t[0]), y = basis_vector(t[1]), z = basis_vector(t[2]);
            const std::array<Vector6, 3> v1{jb[t[0]], jb[t[1]], z};
            const std::array<Vector6, 3> v2{x, jb[t[1]], jb[t[2]]};
            const std::array<Vector6, 3> v3{jb[t[0]], y, jb[t[2]]};
            return a.evaluate(v1) + a.evaluate(v2) + a.evaluate(v3);
        });
    }
    throw std::invalid_argument("j_action is defined on 2-forms and 3-forms only");
}

KForm j_pullback(const KForm& a) {
    const auto jb = j_basis();
    const double sign = (a.degree() % 2 == 0) ? 1.0 : -1.0;  // J^-1 = -J in each slot
    return KForm::from_values(a.degree(), [&](const std::vector<int>& t) {
        std::vector<Vector6> v;
        for (int i : t) v.push_back(jb[i]);
        return sign * a.evaluate(v);
    });
}

KForm j_last_slot(const KForm& a) {
    if (a.degree() != 3) throw std::invalid_argument("j_last_slot expects a 3-form");
    const auto jb = j_basis();
    return KForm::from_values(3, [&](const std::vector<int>& t) {
        const std::array<Vector6, 3> v{basis_vector(t[0]), basis_vector(t[1]), jb[t[2]]};
        return a.evaluate(v);
    });
}

Eigen::MatrixXd j_action_matrix(int degree) {
    const auto n = static_cast<Eigen::Index>(masks_of_degree(degree).size());
    Eigen::MatrixXd m(n, n);
    for (Eigen::Index c = 0; c < n; ++c) {
        KForm e(degree);
        e[c] = 1.0;
        const KForm je = j_action(e);
        for (Eigen::Index r = 0; r < n; ++r) m(r, c) = je[r];
    }
    return m;
}

Eigen::MatrixXd projector_11() {
    const Eigen::MatrixXd j = j_action_matrix(2);
    return 0.5 * (Eigen::MatrixXd::Identity(j.rows(), j.cols()) + j);
}
Eigen::MatrixXd projector_20() {
    const Eigen::MatrixXd j = j_action_matrix(2);
    return 0.5 * (Eigen::MatrixXd::Identity(j.rows(), j.cols()) - j);
}
// eigenvalue -3 on [[L30]], +1 on [[L21]]
Eigen::MatrixXd projector_30() {
    const Eigen::MatrixXd j = j_action_matrix(3);
    return 0.25 * (Eigen::MatrixXd::Identity(j.rows(), j.cols()) - j);
}
Eigen::MatrixXd projector_21() {
    const Eigen::MatrixXd j = j_action_matrix(3);
    return 0.25 * (3.0 * Eigen::MatrixXd::Identity(j.rows(), j.cols()) + j);
}

TypeSplit2 split2(const KForm& a) {
    if (a.degree() != 2) throw std::invalid_argument("split2 expects a 2-form");
    const KForm ja = j_action(a);
    return {0.5 * (a + ja), 0.5 * (a - ja)};
}

TypeSplit3 split3(const KForm& a) {
    if (a.degree() != 3) throw std::invalid_argument("split3 expects a 3-form");
    const KForm ja = j_action(a);
    return {0.25 * (a - ja), 0.25 * (3.0 * a + ja)};
}

ModelForms model_su3_forms() {
    // e1=0, Je1=1, e2=2, Je2=3, e3=4, Je3=5
    ModelForms f;
    f.sigma = KForm::basis({0, 1}) + KForm::basis({2, 3}) + KForm::basis({4, 5});
    f.psi_plus = KForm::basis({0, 2, 4}) - KForm::basis({1, 3, 4}) - KForm::basis({0, 3, 5}) -
                 KForm::basis({1, 2, 5});
    f.psi_minus = KForm::basis({0, 2, 5}) - KForm::basis({1, 3, 5}) + KForm::basis({0, 3, 4}) +
                  KForm::basis({1, 2, 4});
    f.vol = KForm::volume();
    return f;
}

std::string to_string(const KForm& a) {
    static const char* names[kDim] = {"e1", "Je1", "e2", "Je2", "e3", "Je3"};
    std::ostringstream os;
    const auto& ms = masks_of_degree(a.degree());
    bool first = true;
    for (std::size_t i = 0; i < ms.size(); ++i) {
        if (a[i] == 0.0) continue;
        if (!first) os << " + ";
        first = false;
        os << a[i];
        for (int k : mask_indices(ms[i])) os << "*" << names[k];
    }
    if (first) os << "0";
    return os.str();
}

}  // namespace nk6::ext
