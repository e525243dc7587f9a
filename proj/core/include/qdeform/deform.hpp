#pragma once

#include "qdeform/modalg.hpp"

namespace qdeform {

/// Ordered tensor product of module algebras with a flat basis index.
struct TensorSpace {
    std::vector<std::shared_ptr<const ModuleAlgebra>> slots;

    int arity() const { return static_cast<int>(slots.size()); }
    int dim() const;
    int flat(const std::vector<int>& tuple) const;
    std::vector<int> tuple(int flat) const;

    friend bool operator==(const TensorSpace& a, const TensorSpace& b) {
        return a.slots == b.slots;
    }
};

/// Linear operator between tensor spaces, evaluated lazily column by column
/// (spaces can be large; checks only probe low-degree inputs).
class TensorOp {
public:
    using Column = std::map<int, LaurentScalar>;
    using Fn = std::function<Column(int)>;

    TensorOp() = default;
    TensorOp(TensorSpace from, TensorSpace to, Fn fn);

    static TensorOp identity(const TensorSpace& sp);
    /// Diagonal operator from per-tuple scalars.
    static TensorOp diagonal(const TensorSpace& sp, std::function<LaurentScalar(int)> scale);
    /// Swap slots i and j (0-based); the target space is permuted.
    static TensorOp tau(const TensorSpace& sp, int i, int j);
    /// Act an algebra element on one slot.
    static TensorOp slot_act(const TensorSpace& sp, int slot, const AlgebraElement& x);
    /// Act a 2-tensor (sum of m1 (x) m2) on slots (i, j).
    static TensorOp pair_act(const TensorSpace& sp, int i, int j, const TensorElement& f2);

    const TensorSpace& from() const { return from_; }
    const TensorSpace& to() const { return to_; }

    Column apply(int in) const;

    /// this o first (apply `first`, then this).
    TensorOp after(const TensorOp& first) const;
    TensorOp operator+(const TensorOp& o) const;
    TensorOp scaled(const LaurentScalar& c) const;

    /// Exact equality of the two operators on the given input indices;
    /// returns the first differing input when not equal.
    static std::optional<int> first_difference(const TensorOp& a, const TensorOp& b,
                                               const std::vector<int>& inputs);

private:
    TensorSpace from_, to_;
    Fn fn_;
    std::shared_ptr<std::map<int, Column>> memo_ = std::make_shared<std::map<int, Column>>();
    std::shared_ptr<std::mutex> mutex_ = std::make_shared<std::mutex>();
};

/// The scalar map f-tilde on slots (i, j): requires both slot modules to
/// carry the chi . lambda-hat weight view.
TensorOp ftilde_op(const TensorSpace& sp, int i, int j, const Pairing& pairing);

/// Braiding R_{M',M} = F o f-tilde o tau : M' (x) M -> M (x) M'.
struct BraidingMap {
    TensorSpace from, to;
    TensorOp op;
};

BraidingMap braiding(std::shared_ptr<const ModuleAlgebra> mprime,
                     std::shared_ptr<const ModuleAlgebra> m, const TwistElement& f,
                     const Pairing& pairing);

/// B . g = g . B for every generator g acting through the coproduct.
CheckReport check_module_hom(const BraidingMap& b);

/// R12 R23 R12 = R23 R12 R23 on M (x) M' (x) M''.
CheckReport check_qybe(std::shared_ptr<const ModuleAlgebra> m,
                       std::shared_ptr<const ModuleAlgebra> mp,
                       std::shared_ptr<const ModuleAlgebra> mpp, const TwistElement& f,
                       const Pairing& pairing);

/// Both hexagon identities for R = F o f-tilde o tau.
CheckReport check_hexagon(std::shared_ptr<const ModuleAlgebra> m,
                          std::shared_ptr<const ModuleAlgebra> mp,
                          std::shared_ptr<const ModuleAlgebra> mpp, const TwistElement& f,
                          const Pairing& pairing);

/// Per-component operator identities:
///   (w_i (x) w_i) F_zeta = F_zeta (w_i (x) w_i)   (and omega')
///   (e_i (x) 1) F_zeta + (w_i (x) e_i) F_{zeta-a_i}
///     = F_zeta (e_i (x) 1) + F_{zeta-a_i} (w'_i (x) e_i)
///   (1 (x) f_i) F_zeta + (f_i (x) w'_i) F_{zeta-a_i}
///     = F_zeta (1 (x) f_i) + F_{zeta-a_i} (f_i (x) w_i)
CheckReport check_wef(const RootVector& zeta, int i, std::shared_ptr<const ModuleAlgebra> m,
                      std::shared_ptr<const ModuleAlgebra> mp, const TwistElement& f);

/// Coproduct expansion identities of the twist components on triples,
/// including the f-tilde exchange rules.
CheckReport check_moreids(const RootVector& gamma, std::shared_ptr<const ModuleAlgebra> m,
                          std::shared_ptr<const ModuleAlgebra> mp,
                          std::shared_ptr<const ModuleAlgebra> mpp, const TwistElement& f,
                          const Pairing& pairing);

/// The multiplication mu o F truncated at a working order.
class DeformedProduct {
public:
    DeformedProduct(std::shared_ptr<const ModuleAlgebra> base, TensorElement twist,
                    int working_order);

    const ModuleAlgebra& base() const { return *base_; }
    const std::shared_ptr<const ModuleAlgebra>& base_ptr() const { return base_; }
    int working_order() const { return order_; }
    const TensorElement& twist() const { return twist_; }

    /// Twisted product of two basis labels (memoized).
    ModuleElement product(int a, int b) const;
    ModuleElement mul(const ModuleElement& x, const ModuleElement& y) const;

    /// t^i layer of the product table as an exact bilinear rule; the
    /// returned coefficients are t-free.
    ModuleElement coefficient(int i, int a, int b) const;

private:
    std::shared_ptr<const ModuleAlgebra> base_;
    TensorElement twist_;
    int order_;
    std::shared_ptr<std::map<std::pair<int, int>, ModuleElement>> memo_ =
        std::make_shared<std::map<std::pair<int, int>, ModuleElement>>();
    std::shared_ptr<std::mutex> mutex_ = std::make_shared<std::mutex>();
};

DeformedProduct twisted_product(std::shared_ptr<const ModuleAlgebra> a, const TwistElement& f,
                                int working_order);
DeformedProduct twisted_product(std::shared_ptr<const ModuleAlgebra> a, const TensorElement& f,
                                int working_order);

/// Exhaustive triple-product comparison over labels of grade <= degcap.
CheckReport check_associativity(const DeformedProduct& d, int degcap);

/// mu_0 equals the base product on labels of grade <= degcap.
CheckReport check_mod_t(const DeformedProduct& d, int degcap);

/// Hochschild 2-cocycle identity for a bilinear map on base labels.
using BilinearMap = std::function<ModuleElement(int, int)>;
CheckReport check_hochschild_cocycle(const BilinearMap& mu1, const ModuleAlgebra& a, int degcap);

/// [(Delta (x) id)(F)](F (x) id) = [(id (x) Delta)(F)](id (x) F) applied to
/// every basis triple with slot grades <= degcap.
CheckReport check_twist_identity(const TwistElement& f, std::shared_ptr<const ModuleAlgebra> a1,
                                 std::shared_ptr<const ModuleAlgebra> a2,
                                 std::shared_ptr<const ModuleAlgebra> a3, int degcap);

/// Every non-identity component of F raises the t-degree by at least one on
/// all basis pairs (the universal-deformation-formula degree condition).
CheckReport check_udf_degree(const TwistElement& f, const ModuleAlgebra& a);

/// Moyal-type sanity oracle: Q[x,y] twisted by exp(t d_x (x) d_y),
/// truncated at the working order.
class ExpDemo {
public:
    explicit ExpDemo(int working_order);

    using Mono = std::pair<int, int>;                 // (x-degree, y-degree)
    using Poly = std::map<Mono, LaurentScalar>;       // scalars over Q (ell = 1)

    int working_order() const { return order_; }
    Poly monomial(int a, int b) const;
    Poly base_mul(const Poly& p, const Poly& q) const;
    Poly star(const Poly& p, const Poly& q) const;

    /// Associativity on monomials of total degree <= degcap plus the pinned
    /// low-order identities (x*y = xy + t, y*x = yx, x*y - y*x = t).
    CheckReport verify(int degcap) const;

    static std::string poly_to_string(const Poly& p);

private:
    Poly dx(const Poly& p) const;
    Poly dy(const Poly& p) const;
    int order_;
};

}  // namespace qdeform
