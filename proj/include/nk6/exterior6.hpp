#pragma once

// Exterior algebra of the model space (R^6, g0, J0).
//
// Basis order is e1, Je1, e2, Je2, e3, Je3 (indices 0..5); J0 maps
// index 2i to 2i+1 and 2i+1 to -(2i).  vol = e1^Je1^e2^Je2^e3^Je3 fixes the
// orientation.  A k-form stores one coefficient per strictly increasing
// index tuple, in lexicographic order.

#include <Eigen/Core>

#include <array>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace nk6::ext {

using Vector6 = Eigen::Matrix<double, 6, 1>;

inline constexpr int kDim = 6;

/// Index tuples of degree k as 6-bit masks, in lexicographic order.
const std::vector<std::uint8_t>& masks_of_degree(int k);
/// Position of a mask within masks_of_degree(popcount(mask)).
int mask_position(std::uint8_t mask);
/// Ordered index tuple for a mask.
std::vector<int> mask_indices(std::uint8_t mask);

/// J0 applied to a model vector.
Vector6 apply_j0(const Vector6& v);
Vector6 basis_vector(int i);

class KForm {
public:
    KForm() : KForm(0) {}
    explicit KForm(int degree);

    /// e^{i1} ^ ... ^ e^{ik} for distinct indices (any order; sign follows the permutation).
    static KForm basis(std::initializer_list<int> indices, double coeff = 1.0);
    static KForm scalar(double s);
    static KForm volume();
    /// Builds a k-form from its values on basis tuples f(i1 < ... < ik).
    template <typename F>
    static KForm from_values(int degree, F&& f) {
        KForm r(degree);
        const auto& ms = masks_of_degree(degree);
        for (std::size_t m = 0; m < ms.size(); ++m) r.coeffs_[m] = f(mask_indices(ms[m]));
        return r;
    }

    int degree() const { return degree_; }
    std::size_t size() const { return coeffs_.size(); }
    double operator[](std::size_t m) const { return coeffs_[m]; }
    double& operator[](std::size_t m) { return coeffs_[m]; }
    const std::vector<double>& coefficients() const { return coeffs_; }
    /// Coefficient on an increasing index tuple.
    double coefficient(std::initializer_list<int> increasing) const;

    /// Value on k vectors (fully antisymmetric).
    double evaluate(std::span<const Vector6> vectors) const;

    KForm& operator+=(const KForm& o);
    KForm& operator-=(const KForm& o);
    KForm& operator*=(double s);
    friend KForm operator+(KForm a, const KForm& b) { return a += b; }
    friend KForm operator-(KForm a, const KForm& b) { return a -= b; }
    friend KForm operator*(double s, KForm a) { return a *= s; }
    friend KForm operator*(KForm a, double s) { return a *= s; }
    friend bool operator==(const KForm&, const KForm&) = default;

    /// Largest absolute coefficient.
    double max_abs() const;

private:
    int degree_;
    std::vector<double> coeffs_;
};

/// a ^ b; throws std::invalid_argument when the degrees sum past 6.
KForm wedge(const KForm& a, const KForm& b);
/// Hodge star for g0 and the orientation vol.
KForm hodge_star(const KForm& a);
/// Induced inner product: sum of coefficient products over the orthonormal tuple basis.
double inner(const KForm& a, const KForm& b);

/// Derivation action of J: beta(J.,J.) in degree 2 and the sum of two-slot
/// insertions in degree 3.  Throws std::invalid_argument on other degrees.
KForm j_action(const KForm& a);
/// Group action beta(J^-1 ., ..., J^-1 .) on a form of any degree.
KForm j_pullback(const KForm& a);
/// beta(., ., J.) for a 3-form.
KForm j_last_slot(const KForm& a);

/// Matrix of j_action on the coefficient space (degree 2 or 3).
Eigen::MatrixXd j_action_matrix(int degree);

struct TypeSplit2 {
    KForm part_11;
    KForm part_20;
};
struct TypeSplit3 {
    KForm part_30;
    KForm part_21;
};

TypeSplit2 split2(const KForm& a);
TypeSplit3 split3(const KForm& a);

/// Eigenprojector matrices: (1,1) and (2,0)+(0,2) on 2-forms, (3,0)+(0,3) and (2,1)+(1,2) on 3-forms.
Eigen::MatrixXd projector_11();
Eigen::MatrixXd projector_20();
Eigen::MatrixXd projector_30();
Eigen::MatrixXd projector_21();

struct ModelForms {
    KForm sigma;
    KForm psi_plus;
    KForm psi_minus;
    KForm vol;
};

/// The standard SU(3) forms with integer coefficients.
ModelForms model_su3_forms();

std::string to_string(const KForm& a);

}  // namespace nk6::ext
