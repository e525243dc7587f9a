#pragma once

#include "qdeform/pairing.hpp"

namespace qdeform {

/// A character of the group generated by the omega_i, omega'_i, with
/// invertible Laurent values (weights of category-N modules may carry
/// t-powers).
class WeightChar {
public:
    WeightChar() = default;
    WeightChar(std::vector<LaurentScalar> values_w, std::vector<LaurentScalar> values_wp);

    static WeightChar trivial(int n, long ell, int working_order);

    int rank() const { return static_cast<int>(values_w_.size()); }
    const LaurentScalar& w(int i) const { return values_w_.at(i - 1); }
    const LaurentScalar& wp(int i) const { return values_wp_.at(i - 1); }

    /// Value on omega^a (omega')^b.
    LaurentScalar eval_group(const std::vector<int>& a, const std::vector<int>& b) const;
    /// Value on a group-only element of the algebra.
    LaurentScalar eval_element(const AlgebraElement& x) const;

    WeightChar operator*(const WeightChar& o) const;
    WeightChar inverse() const;

    friend bool operator==(const WeightChar& a, const WeightChar& b) {
        return a.values_w_ == b.values_w_ && a.values_wp_ == b.values_wp_;
    }
    friend bool operator!=(const WeightChar& a, const WeightChar& b) { return !(a == b); }
    friend bool operator<(const WeightChar& a, const WeightChar& b);

    std::string to_string() const;

private:
    std::vector<LaurentScalar> values_w_, values_wp_;
};

/// The character lambda-hat attached to a root-lattice element:
/// lambda^(omega_j) = r^<eps_j, lambda> s^<eps_{j+1}, lambda> and the
/// omega' companion with r and s exchanged.
WeightChar lambda_hat(const RootVector& lambda, const QGroup& ctx);

/// The twisting element F = sum_zeta F_zeta with
/// F_zeta = sum_k v_k^zeta (x) u_k^zeta over the dual bases of the
/// nondegenerately paired truncated spaces.
struct TwistElement {
    std::shared_ptr<const QGroup> ctx;
    std::map<RootVector, TensorElement> components;

    const TensorElement* component(const RootVector& zeta) const {
        auto it = components.find(zeta);
        return it == components.end() ? nullptr : &it->second;
    }
    /// All components summed into one tensor.
    TensorElement flatten() const;
};

TwistElement twisting_element(const Pairing& pairing);

/// The R-matrix factors of the restricted quantum group:
/// R_ef = sum eps (x) eps*, R_fe its flip, R_w = sum w (x) w*, R_wp its flip.
struct RFactors {
    TensorElement R_ef, R_fe, R_w, R_wp;
};

RFactors r_factors(const Pairing& pairing);

/// f_{chi,psi}(lambda, mu) = psi(omega_lambda^{-1}) chi(omega'_mu)
/// (omega'_mu | omega_lambda^{-1}).
LaurentScalar f_scalar(const WeightChar& chi, const WeightChar& psi, const RootVector& lambda,
                       const RootVector& mu, const Pairing& pairing);

/// xi(chi, psi) = sum_{w in Omega} chi(w*) psi(w); the scalar by which
/// R_{omega',omega} acts on a weight pair.
LaurentScalar xi(const WeightChar& chi, const WeightChar& psi, const Pairing& pairing);

}  // namespace qdeform
