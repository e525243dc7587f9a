#pragma once

#include <functional>
#include <optional>

#include "qdeform/rtwist.hpp"

namespace qdeform {

struct degree_overflow_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Element of a based module algebra: label index -> coefficient.
class ModuleElement {
public:
    ModuleElement() = default;

    bool is_zero() const { return terms_.empty(); }
    const std::map<int, LaurentScalar>& terms() const { return terms_; }

    void add_term(int label, const LaurentScalar& c);

    ModuleElement operator-() const;
    ModuleElement& operator+=(const ModuleElement& o);
    ModuleElement& operator-=(const ModuleElement& o);
    friend ModuleElement operator+(ModuleElement a, const ModuleElement& b) { return a += b; }
    friend ModuleElement operator-(ModuleElement a, const ModuleElement& b) { return a -= b; }
    ModuleElement scaled(const LaurentScalar& c) const;

    /// Smallest t-exponent over all coefficients; nullopt when zero.
    std::optional<int> min_t_degree() const;

    friend bool operator==(const ModuleElement& a, const ModuleElement& b) {
        return a.terms_ == b.terms_;
    }
    friend bool operator!=(const ModuleElement& a, const ModuleElement& b) { return !(a == b); }

private:
    std::map<int, LaurentScalar> terms_;
};

/// A based module algebra over U_{r,s}(sl_n): finite label set with grades,
/// a product rule, and a generator-action table.  Catalog constructors
/// below build the concrete instances.
class ModuleAlgebra {
public:
    struct Setup {
        std::string kind;
        std::shared_ptr<const QGroup> ctx;
        std::vector<std::string> labels;
        std::vector<int> grades;
        int unit = -1;  // -1: carries no product (module only)
        int maxdeg = 0;
        std::function<ModuleElement(const ModuleAlgebra&, int, int)> product_rule;
        std::function<ModuleElement(const ModuleAlgebra&, GenSymbol, int)> action_rule;
        std::vector<std::optional<WeightChar>> weights;  // per label when diagonal
        std::optional<WeightChar> base_char;             // weight view: chi
        std::vector<RootVector> lambdas;                 // weight view: label -> lambda
    };

    explicit ModuleAlgebra(Setup s);

    const std::string& kind() const { return setup_.kind; }
    const std::shared_ptr<const QGroup>& context() const { return setup_.ctx; }
    int size() const { return static_cast<int>(setup_.labels.size()); }
    const std::string& label(int i) const { return setup_.labels.at(i); }
    int label_index(const std::string& name) const;
    int grade(int i) const { return setup_.grades.at(i); }
    int maxdeg() const { return setup_.maxdeg; }

    bool has_product() const { return setup_.unit >= 0; }
    int unit() const;

    ModuleElement zero() const { return ModuleElement(); }
    ModuleElement basis(int i) const;
    ModuleElement unit_element() const { return basis(unit()); }

    /// Product of two basis labels (memoized).  Throws degree_overflow_error
    /// when the result would exceed maxdeg.
    ModuleElement product(int a, int b) const;
    ModuleElement mul(const ModuleElement& a, const ModuleElement& b) const;

    /// Action of one generator letter on a basis label (memoized).
    ModuleElement act_gen(GenSymbol g, int label) const;
    ModuleElement act_gen(GenSymbol g, const ModuleElement& m) const;
    /// Letters act right-to-left.
    ModuleElement act_word(const Word& w, const ModuleElement& m) const;
    ModuleElement act_poly(const NCPoly& p, const ModuleElement& m) const;
    /// Linear extension of the generator actions along the PBW factorization.
    ModuleElement act(const AlgebraElement& u, const ModuleElement& m) const;

    bool diagonal_weights() const;
    const WeightChar& label_weight(int i) const;

    /// Weight-module view chi . lambda-hat for braiding maps.
    bool has_weight_view() const { return setup_.base_char.has_value(); }
    const WeightChar& base_char() const;
    const RootVector& label_lambda(int i) const;

    std::string element_to_string(const ModuleElement& m) const;

private:
    struct Memo {
        std::mutex mutex;
        std::map<std::pair<int, int>, ModuleElement> prod;
        std::map<std::pair<std::pair<int, int>, int>, ModuleElement> act;
    };

    Setup setup_;
    std::map<std::string, int> index_;
    std::shared_ptr<Memo> memo_ = std::make_shared<Memo>();
};

// ------------------------------------------------------------------ catalog

/// The natural n-dimensional module (module only, no product).
ModuleAlgebra natural_module(std::shared_ptr<const QGroup> ctx);

/// Quantum plane K_r[x_1..x_n] with monomial basis up to total degree maxdeg.
ModuleAlgebra quantum_plane(std::shared_ptr<const QGroup> ctx, int maxdeg);

/// Tensor algebra T(V) of the natural module, word basis up to maxdeg.
ModuleAlgebra tensor_algebra(const ModuleAlgebra& v, int maxdeg);

/// Quotient of T(V) by the ideal of all words of length >= p.
ModuleAlgebra truncate_ideal(const ModuleAlgebra& tensor, int p);

/// T(V)/(two cubic relations): the down-up algebra quotient at n=2, ell=3,
/// {y,z} = {1,2}.
ModuleAlgebra downup_quotient(std::shared_ptr<const QGroup> ctx, int maxdeg);

/// T(V)/<Y> at n>=3, ell=3, {y,z}={1,2}; verifies the Y-span is stable
/// under the printed action tables before building the quotient.
ModuleAlgebra y_submodule_quotient(std::shared_ptr<const QGroup> ctx, int maxdeg);

/// Smash product T(V) # (Z/ell)^{n-1} with a_i . v_j = beta_i v_j and the
/// t-carrying action (e_i . v_j = delta_{i,j-1} v_{j-1} a_i t, ...).
ModuleAlgebra smash_product(std::shared_ptr<const QGroup> ctx, std::vector<CycScalar> beta,
                            int maxdeg);

/// Rescale a t-free action by the t-character: e -> t e, f -> f,
/// w^{+-1} -> t^{+-1} w^{+-1}, likewise w'.  Word-based algebras are rebuilt
/// from rescaled atoms; the quantum plane is rescaled at the label level.
ModuleAlgebra star_action(const ModuleAlgebra& a);

// ------------------------------------------------------------------ checks

/// Exhaustive (modalg1)/(modalg2) verification for generators against all
/// label pairs with grade sum <= degcap.
CheckReport check_module_algebra(const ModuleAlgebra& a, int degcap);

/// (N1) simultaneous eigen-decomposition for all omega, omega';
/// (N2) every E_{i,j}^ell and F_{i,j}^ell annihilates the algebra.
CheckReport check_category_N(const ModuleAlgebra& a);

/// Common eigenvectors of the omega/omega' action, grouped by weight.
std::map<std::string, std::vector<ModuleElement>> weight_decompose(const ModuleAlgebra& a);

}  // namespace qdeform
