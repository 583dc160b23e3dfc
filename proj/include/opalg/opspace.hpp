#ifndef OPALG_OPSPACE_HPP
#define OPALG_OPSPACE_HPP

#include "opalg/linalg.hpp"

#include <vector>

namespace opalg {

/// A linear subspace of B(H1, H2) in canonical form: the basis is the
/// reduced-row-echelon basis of the row-major vectorized matrices, so value
/// equality is subspace equality. Elements are codDim x domDim matrices.
class OpSpace {
public:
    OpSpace() : vecSpan_(VecSubspace::span(0, {})) {}

    static OpSpace span(int domDim, int codDim, const std::vector<Mat>& mats);
    static OpSpace zero(int domDim, int codDim) { return span(domDim, codDim, {}); }
    /// All of B(H1, H2).
    static OpSpace full(int domDim, int codDim);

    int domDim() const { return domDim_; }
    int codDim() const { return codDim_; }
    int dim() const { return static_cast<int>(basis_.size()); }
    const std::vector<Mat>& basis() const { return basis_; }
    const VecSubspace& vecSpan() const { return vecSpan_; }

    bool contains(const Mat& m) const;
    bool contains(const OpSpace& other) const;
    std::optional<Vec> coordsOf(const Mat& m) const;

    OpSpace sum(const OpSpace& other) const;
    OpSpace intersect(const OpSpace& other) const;

    bool containsIdentity() const;
    bool isSelfadjoint() const;
    /// Every pairwise product of basis elements stays inside.
    bool isClosedUnderProducts() const;

    friend bool operator==(const OpSpace& a, const OpSpace& b) {
        return a.domDim_ == b.domDim_ && a.codDim_ == b.codDim_ && a.vecSpan_ == b.vecSpan_;
    }
    friend bool operator!=(const OpSpace& a, const OpSpace& b) { return !(a == b); }

private:
    OpSpace(int domDim, int codDim, std::vector<Mat> basis, VecSubspace vecSpan)
        : domDim_(domDim), codDim_(codDim), basis_(std::move(basis)), vecSpan_(std::move(vecSpan)) {}

    int domDim_ = 0, codDim_ = 0;
    std::vector<Mat> basis_;
    VecSubspace vecSpan_;
};

/// span{ x y : x in X, y in Y }, canonical.
OpSpace productSpan(const OpSpace& x, const OpSpace& y);

/// span of conjugate transposes; involutive.
OpSpace adjointSpace(const OpSpace& x);

/// An algebra of operators on one space. Unitality and selfadjointness are
/// computed, never assumed; non-unital algebras are first-class.
struct OpAlgebra {
    OpSpace space;
    bool unital = false;
    bool selfadjoint = false;

    /// Trusts that the span is product-closed (used on internally constructed
    /// spaces whose closure is guaranteed; property-tested).
    static OpAlgebra fromSpaceUnchecked(OpSpace s);
    /// Verifies product-closure exactly; for externally supplied data.
    static OpAlgebra fromSpaceChecked(OpSpace s);

    friend bool operator==(const OpAlgebra& a, const OpAlgebra& b) { return a.space == b.space; }
    friend bool operator!=(const OpAlgebra& a, const OpAlgebra& b) { return !(a == b); }
};

/// Smallest product-closed span containing x (with the identity when asked);
/// iterates productSpan to a fixed point, certified by stabilized dimension.
OpAlgebra generatedAlgebra(const OpSpace& x, bool unital);

/// {T : TA = AT for every A in x}; always unital.
OpAlgebra commutant(const OpSpace& x);

/// commutant(commutant(span(x u x*))), cross-checked against
/// generatedAlgebra(span(x u x* u {I})) -- the two routes must agree.
OpAlgebra bicommutant(const OpSpace& x);

/// a n a*, the largest selfadjoint subalgebra.
OpAlgebra diagonal(const OpAlgebra& a);

bool isIdealIn(const OpSpace& j, const OpAlgebra& a);
bool isBimoduleOver(const OpSpace& u, const OpAlgebra& left, const OpAlgebra& right);

} // namespace opalg

#endif
