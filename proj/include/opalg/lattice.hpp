#ifndef OPALG_LATTICE_HPP
#define OPALG_LATTICE_HPP

#include "opalg/opspace.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace opalg {

void requireProjection(const Mat& p, const std::string& who);

/// Projection onto the intersection of the ranges; valid for arbitrary
/// projections. For commuting inputs this equals the product (tested).
Mat projMeet(const Mat& p, const Mat& q);
/// Projection onto the sum of the ranges; for commuting inputs p + q - pq.
Mat projJoin(const Mat& p, const Mat& q);

constexpr int kCslClosureCap = 4096;

/// A finite commutative subspace lattice: commuting projections containing
/// 0 and I, closed under meet and join, with its atom decomposition. Members
/// and atoms are kept in a canonical order, so equal lattices compare equal.
class Csl {
public:
    /// Smallest CSL containing the generators. Non-commuting generators are
    /// rejected with the offending pair; families beyond the closure cap fail.
    static Csl closure(int dim, const std::vector<Mat>& gens);

    /// Validates an explicitly given member list (closed, commuting); the
    /// zero and identity projections are supplied if missing.
    static Csl fromMembers(int dim, const std::vector<Mat>& members);

    /// Block-diagonal realization from atom ranks and member index sets.
    static Csl fromAtomic(const std::vector<int>& atomRanks,
                          const std::vector<std::vector<int>>& memberSets);

    int dim() const { return dim_; }
    const std::vector<Mat>& members() const { return members_; }
    const std::vector<Mat>& atoms() const { return atoms_; }
    /// For each member, the set of atom indices it dominates (bit mask).
    const std::vector<std::uint64_t>& memberSets() const { return memberSets_; }
    int memberCount() const { return static_cast<int>(members_.size()); }
    int atomCount() const { return static_cast<int>(atoms_.size()); }

    int zeroIndex() const { return zeroIdx_; }
    int identityIndex() const { return identityIdx_; }

    /// Members L with the join of strictly smaller members < L; these
    /// contribute the atoms and generate the lattice under joins.
    const std::vector<int>& joinIrreducibles() const { return joinIrr_; }

    int atomRank(int atomIdx) const;
    int indexOfMember(const Mat& m) const;         // -1 when absent
    int indexOfMemberSet(std::uint64_t mask) const; // -1 when absent

    friend bool operator==(const Csl& a, const Csl& b) {
        return a.dim_ == b.dim_ && a.members_ == b.members_;
    }
    friend bool operator!=(const Csl& a, const Csl& b) { return !(a == b); }

private:
    Csl() = default;
    static Csl finalize(int dim, std::vector<Mat> boolAtoms, std::vector<std::uint64_t> famMasks);

    int dim_ = 0;
    std::vector<Mat> members_;
    std::vector<Mat> atoms_;
    std::vector<std::uint64_t> memberSets_;
    std::vector<int> joinIrr_;
    int zeroIdx_ = -1, identityIdx_ = -1;
};

/// An atom bijection between two CSLs together with the induced member map.
/// Atom ranks are deliberately ignored by the search; ranksMatch reports when
/// the bijection happens to preserve them as well.
struct LatticeIso {
    Csl source;
    Csl target;
    std::vector<int> atomMap;   // source atom index -> target atom index
    std::vector<int> memberMap; // source member index -> target member index
    bool ranksMatch = false;

    const Mat& applyToMember(int memberIdx) const { return target.members()[memberMap[memberIdx]]; }

    static LatticeIso identity(const Csl& s);
    /// Builds and validates the iso induced by an atom bijection; throws
    /// InputError when the bijection does not map the member-set family.
    static LatticeIso fromAtomMap(Csl source, Csl target, std::vector<int> atomMap);
};

struct NotIsoCert {
    bool memberCountMismatch = false;
    bool atomCountMismatch = false;
    bool atomDegreeProfileMismatch = false;
    bool memberCardinalityProfileMismatch = false;
    std::uint64_t bijectionsExamined = 0;
    bool searchExhausted = false;
};

struct IsoSearchResult {
    std::optional<LatticeIso> iso;
    NotIsoCert cert; // meaningful when iso is absent
};

/// Backtracking search over atom bijections, deterministic (lexicographically
/// first accepted bijection). Complete at the atom level.
IsoSearchResult findLatticeIso(const Csl& s1, const Csl& s2);

/// The atom transport formula
///   rho(A) = meet{ phi(L) : AL = A } - join{ phi(L) : AL = 0 },
/// evaluated with matrices; must reproduce the atomMap image.
Mat atomIsoFormula(const LatticeIso& phi, int atomIdx);

/// Alg(S) = { X : L^perp X L = 0 for all L in S }, solved exactly over the
/// join-irreducible members (which generate S under joins).
OpAlgebra algOfLattice(const Csl& s);

/// Invariant projections of a that are sums of frame atoms, via the reach
/// digraph on the frame. The frame must be an orthogonal decomposition of
/// the identity contained in a. The result is the full invariant projection
/// lattice whenever a contains the frame's block diagonal.
Csl latOfAlgebra(const OpAlgebra& a, const std::vector<Mat>& frame);

} // namespace opalg

#endif
