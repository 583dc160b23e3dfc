#ifndef OPALG_ERDOS_HPP
#define OPALG_ERDOS_HPP

#include "opalg/lattice.hpp"

#include <string>
#include <vector>

namespace opalg {

/// The map P |-> projection onto span{ T P y : T in U, y in H1 }, or the
/// same for U* when adjointDirection is set.
struct ErdosMap {
    OpSpace space;
    bool adjointDirection = false;
};

/// phi(p): p is a projection on H1 (forward) or H2 (adjoint direction).
Mat evalMap(const ErdosMap& m, const Mat& p);

/// Semilattices of U computed relative to explicit finite frames: s2 is the
/// join-closure of { phi(P) : P in frame1 } with 0, s1 the meet-closure of
/// { phi*(Q)^perp : Q in frame2 } with I. These are the restrictions of the
/// (generally infinite) semilattices to what the finite theorems consume.
struct SemilatticePair {
    std::vector<Mat> s1;
    std::vector<Mat> s2;
    bool mapBijective = false; // phi restricted to s1 is a bijection onto s2
};

SemilatticePair semilatticesOver(const OpSpace& u, const Csl& frame1, const Csl& frame2);

struct EssentialVerdict {
    bool essential = false;
    bool mapReachesIdentity = false;        // phi(I) = I
    bool adjointMapReachesIdentity = false; // phi*(I) = I
};

/// Both characterizations are evaluated: the Map-based one and the
/// unital-product-span one; they must agree (internal trap otherwise).
EssentialVerdict essentialVerdict(const OpSpace& u);
bool isEssential(const OpSpace& u);

struct RefVerdict {
    bool member = false;
    Vec witness;          // on NO: a vector x with Tx outside span(Ux)
    int lociSampled = 0;  // on YES: sampled rank-drop loci count
    std::vector<std::string> notes;
};

/// Membership of t in the reflexive hull of u. NO is exact (witness vector);
/// YES is certified exactly on the generic stratum by symbolic fraction-free
/// elimination plus exact rational samples on every detected rank-drop locus
/// of x |-> dim(Ux), recursing to depth 3.
RefVerdict refMembership(const OpSpace& u, const Mat& t, std::uint64_t seed, int samples);

/// Reflexive hull of a bimodule over the given atom frames, computed as the
/// block pattern space. Proper nonzero blocks are inflated only over masa
/// (rank-one) frames; otherwise the class is unsupported.
OpSpace refHullPattern(const OpSpace& u, const std::vector<Mat>& leftFrame,
                       const std::vector<Mat>& rightFrame);

/// A = Alg(Lat(A)) test. Requires a unital and containing the full block
/// diagonal of the frame (so that the frame-relative lattice is the whole
/// invariant projection lattice); otherwise the frame is too coarse.
bool isReflexiveAlgebra(const OpAlgebra& a, const std::vector<Mat>& frame);

} // namespace opalg

#endif
