#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "qdeform/exactmat.hpp"
#include "qdeform/ncalg.hpp"

namespace qdeform {

struct height_bound_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Parameters of U_{r,s}(sl_n) with r = theta^y, s = theta^z for theta a
/// primitive ell-th root of unity; `restricted` selects the quotient
/// u_{r,s}(sl_n) by the ideal generated by the ell-th powers.
struct QGroupParams {
    int n = 2;
    long ell = 2;
    long y = 0;
    long z = 1;
    bool restricted = false;
    int height_bound = 0;  // 0 selects the default bound

    static int default_height_bound(int n, long ell) {
        return static_cast<int>((ell - 1)) * n * (n - 1) / 2 + 2;
    }

    /// Throws std::invalid_argument unless r != s and ell is the lcm of the
    /// multiplicative orders of r and s.
    void validate() const;

    friend bool operator==(const QGroupParams& a, const QGroupParams& b) {
        return a.n == b.n && a.ell == b.ell && a.y == b.y && a.z == b.z &&
               a.restricted == b.restricted && a.height_bound == b.height_bound;
    }

    std::string to_string() const;
};

using RootPair = std::pair<int, int>;  // (i,j) with 1 <= j <= i < n

/// PBW basis monomial: F-part, group part, E-part in the normal order
/// U^- . U^0 . U^+.  Root-vector exponents are keyed by (i,j) in lex order.
struct PBWMonomial {
    std::map<RootPair, int> f_exp;
    std::vector<int> w_exp;   // omega_1..omega_{n-1}
    std::vector<int> wp_exp;  // omega'_1..omega'_{n-1}
    std::map<RootPair, int> e_exp;

    static PBWMonomial unit(int n) {
        PBWMonomial m;
        m.w_exp.assign(n - 1, 0);
        m.wp_exp.assign(n - 1, 0);
        return m;
    }

    bool is_unit() const;
    bool group_only() const;
    RootVector e_degree(int n) const;
    RootVector f_degree(int n) const;  // positive coordinates of -deg
    int height() const;                // e-height + f-height

    friend bool operator==(const PBWMonomial& a, const PBWMonomial& b) {
        return a.f_exp == b.f_exp && a.w_exp == b.w_exp && a.wp_exp == b.wp_exp &&
               a.e_exp == b.e_exp;
    }
    friend bool operator<(const PBWMonomial& a, const PBWMonomial& b);

    std::string to_string() const;  // "f1*F(2,1)^2*w1^-1*e2"
};

class QGroup;

/// Element of U_{r,s}(sl_n) (or its restricted quotient) written in the PBW
/// basis.  Immutable value; all nontrivial operations live on QGroup.
class AlgebraElement {
public:
    AlgebraElement() = default;
    explicit AlgebraElement(std::shared_ptr<const QGroup> ctx) : ctx_(std::move(ctx)) {}

    const std::shared_ptr<const QGroup>& context() const { return ctx_; }
    const std::map<PBWMonomial, LaurentScalar>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    void add_term(const PBWMonomial& m, const LaurentScalar& c);

    AlgebraElement operator-() const;
    AlgebraElement& operator+=(const AlgebraElement& o);
    AlgebraElement& operator-=(const AlgebraElement& o);
    friend AlgebraElement operator+(AlgebraElement a, const AlgebraElement& b) { return a += b; }
    friend AlgebraElement operator-(AlgebraElement a, const AlgebraElement& b) { return a -= b; }

    AlgebraElement scaled(const LaurentScalar& c) const;

    friend bool operator==(const AlgebraElement& a, const AlgebraElement& b) {
        return a.terms_ == b.terms_;
    }
    friend bool operator!=(const AlgebraElement& a, const AlgebraElement& b) { return !(a == b); }

    std::string to_string() const;

private:
    std::shared_ptr<const QGroup> ctx_;
    std::map<PBWMonomial, LaurentScalar> terms_;
};

/// Linear combination of 2- or 3-fold tensors of PBW monomials.
class TensorElement {
public:
    TensorElement() : arity_(2) {}
    TensorElement(int arity, std::shared_ptr<const QGroup> ctx)
        : arity_(arity), ctx_(std::move(ctx)) {}

    int arity() const { return arity_; }
    const std::shared_ptr<const QGroup>& context() const { return ctx_; }
    const std::map<std::vector<PBWMonomial>, LaurentScalar>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    void add_term(std::vector<PBWMonomial> slots, const LaurentScalar& c);

    TensorElement operator-() const;
    TensorElement& operator+=(const TensorElement& o);
    TensorElement& operator-=(const TensorElement& o);
    friend TensorElement operator+(TensorElement a, const TensorElement& b) { return a += b; }
    friend TensorElement operator-(TensorElement a, const TensorElement& b) { return a -= b; }
    TensorElement scaled(const LaurentScalar& c) const;

    friend bool operator==(const TensorElement& a, const TensorElement& b) {
        return a.arity_ == b.arity_ && a.terms_ == b.terms_;
    }
    friend bool operator!=(const TensorElement& a, const TensorElement& b) { return !(a == b); }

    std::string to_string() const;

private:
    int arity_;
    std::shared_ptr<const QGroup> ctx_;
    std::map<std::vector<PBWMonomial>, LaurentScalar> terms_;
};

/// Engine for one parameter set: normal forms, PBW enumeration, root
/// vectors, Hopf operations.  The per-degree reduction tables are memoized
/// behind a mutex; elements produced by an engine keep it alive via
/// shared_ptr.
class QGroup : public std::enable_shared_from_this<QGroup> {
public:
    static std::shared_ptr<QGroup> make(QGroupParams params,
                                        int working_order = LaurentScalar::kDefaultWorkingOrder);

    const QGroupParams& params() const { return params_; }
    int n() const { return params_.n; }
    long ell() const { return params_.ell; }
    int working_order() const { return working_order_; }

    CycScalar r() const { return r_; }
    CycScalar s() const { return s_; }
    /// omega_i e_j = rho(i,j) e_j omega_i  (relation scalars)
    CycScalar rho(int i, int j) const;
    /// omega'_i e_j = rho_p(i,j) e_j omega'_i
    CycScalar rho_p(int i, int j) const;
    /// <eps_a, alpha_j> for the orthonormal/simple-root pairing
    static int eps_alpha(int a, int j);

    LaurentScalar laurent_one() const { return LaurentScalar::one(params_.ell, working_order_); }
    LaurentScalar laurent(const CycScalar& c) const {
        return LaurentScalar::from_cyc(c, working_order_);
    }

    AlgebraElement zero_element() const;
    AlgebraElement one_element() const;
    AlgebraElement from_monomial(const PBWMonomial& m, const LaurentScalar& c) const;
    AlgebraElement from_monomial(const PBWMonomial& m) const;
    /// Group monomial omega^a (omega')^b.
    PBWMonomial group_monomial(const std::vector<int>& a, const std::vector<int>& b) const;

    /// Unique PBW expansion of a free polynomial; applies the ell-th power
    /// truncation when the parameters are restricted.
    AlgebraElement normal_form(const NCPoly& p) const;

    AlgebraElement mul(const AlgebraElement& a, const AlgebraElement& b) const;

    /// Root vectors as free polynomials / normal-form elements.
    NCPoly root_vector_free(GenKind side, int i, int j) const;
    AlgebraElement build_E(int i, int j) const;
    AlgebraElement build_F(int i, int j) const;

    /// Lex-ordered ell-truncated PBW monomials of U^+ in degree zeta (the
    /// basis of Ubar^+_zeta); the minus side is the mirror.
    std::vector<PBWMonomial> pbw_basis_plus(const RootVector& zeta) const;
    std::vector<PBWMonomial> pbw_basis_minus(const RootVector& zeta) const;
    /// Untruncated enumeration (basis of U^+_zeta).
    std::vector<PBWMonomial> pbw_monomials_unbounded(GenKind side, const RootVector& zeta) const;
    /// All ell-truncated E-monomials over every degree, lex order by degree.
    std::vector<PBWMonomial> truncated_monomials_plus() const;
    /// Degrees zeta with nonzero Ubar^+_zeta.
    std::vector<RootVector> truncated_degrees() const;

    /// Free-word expansion of a PBW monomial in normal order F.W.Wp.E.
    NCPoly expand(const PBWMonomial& m) const;

    TensorElement coproduct(const AlgebraElement& x) const;
    LaurentScalar counit(const AlgebraElement& x) const;
    AlgebraElement antipode(const AlgebraElement& x) const;

    /// Tensor product a (x) b of elements (2-fold).
    TensorElement tensor2(const AlgebraElement& a, const AlgebraElement& b) const;
    /// Slot-wise product of tensor elements of equal arity.
    TensorElement tensor_mul(const TensorElement& a, const TensorElement& b) const;

    /// Coproduct coefficients p_i(x), p'_i(x) of a homogeneous x in U^+_zeta.
    std::pair<AlgebraElement, AlgebraElement> extract_p(const AlgebraElement& x, int i) const;
    /// Mirror for homogeneous y in U^-_{-zeta}.
    std::pair<AlgebraElement, AlgebraElement> extract_p_minus(const AlgebraElement& y, int i) const;

    /// Rank of the degree-zeta Serre reduction equals the untruncated PBW
    /// count (certifies the normal form in that degree).
    bool pbw_dimension_check(GenKind side, const RootVector& zeta) const;

    /// Defining relations (R1)-(R7) as free polynomials (for compliance tests).
    std::vector<NCPoly> defining_relations() const;

    /// true when x is homogeneous with every monomial pure E-part (resp. F).
    bool is_plus_homogeneous(const AlgebraElement& x, RootVector* deg = nullptr) const;
    bool is_minus_homogeneous(const AlgebraElement& y, RootVector* deg = nullptr) const;

private:
    explicit QGroup(QGroupParams params, int working_order);

    struct SliceTable;
    const SliceTable& slice(GenKind side, const RootVector& zeta) const;
    std::vector<std::pair<std::map<RootPair, int>, CycScalar>> reduce_word(
        GenKind side, const std::vector<int>& letters) const;

    CycScalar group_move_scalar(const GenSymbol& g, const GenSymbol& target) const;

    QGroupParams params_;
    int working_order_;
    CycScalar r_, s_;
    CycScalar r_minus_s_inv_;  // 1/(r-s)

    // slice_mutex_ guards slices_; root_mutex_ guards root_vector_cache_.
    // reduce_word holds slice_mutex_ while expanding root vectors, so the
    // two caches use separate locks.
    mutable std::mutex slice_mutex_;
    mutable std::mutex root_mutex_;
    mutable std::map<std::pair<int, RootVector>, std::unique_ptr<SliceTable>> slices_;
    mutable std::map<std::pair<int, RootPair>, NCPoly> root_vector_cache_;
};

}  // namespace qdeform
