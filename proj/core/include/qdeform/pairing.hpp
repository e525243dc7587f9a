#pragma once

#include <map>
#include <mutex>
#include <optional>

#include "qdeform/qgroup.hpp"
#include "qdeform/report.hpp"

namespace qdeform {

/// gcd(y^{n-1} - y^{n-2} z + ... + (-1)^{n-1} z^{n-1}, ell) == 1, the
/// nondegeneracy criterion for the pairing.
bool check_relprime(int n, long y, long z, long ell);

/// Gram matrix of the pairing in one degree: rows are the minus-side
/// truncated monomials, columns the plus side, in lex order.
struct GramMatrix {
    RootVector degree;
    std::vector<PBWMonomial> minus_basis;
    std::vector<PBWMonomial> plus_basis;
    CycMatrix entries;
};

/// The Hopf pairing (.|.) on U^{<=0} x U^{>=0}, evaluated recursively from
/// the generator values via the coproduct splitting rules.  Values are
/// root-of-unity expressions, so everything stays in Q(theta_ell).
class Pairing {
public:
    explicit Pairing(std::shared_ptr<const QGroup> ctx) : ctx_(std::move(ctx)) {}

    const std::shared_ptr<const QGroup>& context() const { return ctx_; }

    /// (yv | xv): yv supported on f / omega'-letters, xv on e / omega.
    CycScalar pair(const AlgebraElement& yv, const AlgebraElement& xv) const;
    /// Bilinear extension over free polynomials (f/omega' words vs e/omega).
    CycScalar pair_poly(const NCPoly& y, const NCPoly& x) const;
    /// Core recursion on a single pair of free words.
    CycScalar pair_words(const Word& y, const Word& x) const;
    /// Generator pairing (omega'_i | omega_j).
    CycScalar omega_pair(int i, int j) const;

    GramMatrix gram_plus(const RootVector& zeta) const;

    /// Dual basis {v_k} of Ubar^-_{-zeta} with (v_k | u_j) = delta_{kj}
    /// against pbw_basis_plus(zeta).  Throws std::domain_error when the
    /// Gram matrix is singular (nondegeneracy fails).
    std::vector<AlgebraElement> dual_basis_plus(const RootVector& zeta) const;

    /// Basis of KG' dual to Omega = {omega^a : 0 <= a_i < ell}; key is the
    /// exponent vector a.  Throws std::domain_error when singular.
    std::map<std::vector<int>, AlgebraElement> group_dual_basis() const;

    /// Pair each generator of the ideal I_n against every opposite-side
    /// monomial of matching degree (group parts over [0,ell)); all values
    /// must vanish.
    CheckReport radical_check() const;

private:
    CycScalar pair_letters(const GenSymbol& y, const GenSymbol& x) const;

    std::shared_ptr<const QGroup> ctx_;
    mutable std::mutex memo_mutex_;
    mutable std::map<std::pair<Word, Word>, CycScalar> memo_;
};

}  // namespace qdeform
