#ifndef OPALG_TRO_HPP
#define OPALG_TRO_HPP

#include "opalg/erdos.hpp"

#include <optional>
#include <string>
#include <vector>

namespace opalg {

struct Check {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct CheckReport {
    std::vector<Check> checks;

    bool allPass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
    void add(const std::string& name, bool pass, const std::string& detail = "") {
        checks.push_back({name, pass, detail});
    }
    void merge(const CheckReport& other, const std::string& prefix) {
        for (const auto& c : other.checks) checks.push_back({prefix + c.name, c.pass, c.detail});
    }
    std::string firstFailure() const {
        for (const auto& c : checks)
            if (!c.pass) return c.name;
        return "";
    }
};

/// A verified ternary ring of operators: span with M M* M inside it.
struct Tro {
    OpSpace space;
    bool essential = false;
};

/// Checks the ternary axiom exactly; on failure reports the offending basis
/// triple. The essential flag is computed via the Erdos maps.
Tro verifyTro(const OpSpace& x);
bool isTroSpace(const OpSpace& x);

struct EssentializeResult {
    OpSpace space;   // N + Q B(H1,H2) P
    bool essential = false;
    Mat kernelProj;        // P
    Mat adjointKernelProj; // Q
    std::string note;      // set when the construction cannot be essential
};

/// N + Q B(H1,H2) P with P, Q the projections onto the joint kernels of the
/// basis and the adjoint basis. The result is essential except in the
/// degenerate corner where exactly one of P, Q vanishes; that corner is
/// reported, not hidden.
EssentializeResult essentialize(const OpSpace& n);

/// A verified TRO equivalence A ~ B via M; exists only when every identity
/// of the definition holds exactly.
struct TroWitness {
    OpAlgebra a; // on H1
    OpAlgebra b; // on H2
    Tro m;       // inside B(H1, H2)
};

struct WitnessResult {
    std::optional<TroWitness> witness;
    CheckReport report;
    bool ok() const { return witness.has_value(); }
};

/// All identities of the equivalence: the containments, the span equalities,
/// the diagonal equivalence, and (when lattices are supplied) the transport
/// of the invariant lattice under Map(M).
WitnessResult verifyWitness(const OpAlgebra& a, const OpAlgebra& b, const OpSpace& m,
                            const Csl* latA = nullptr, const Csl* latB = nullptr);

/// Exact *-isomorphism between two concretely represented algebras, stored by
/// the images of the canonical source basis.
struct StarIso {
    OpAlgebra source;
    OpAlgebra target;
    std::vector<Mat> images; // image of each canonical source basis element

    Mat apply(const Mat& x) const;
};

struct StarIsoResult {
    std::optional<StarIso> iso;
    CheckReport report;
    bool ok() const { return iso.has_value(); }
};

/// theta : (span M*M)' -> (span M M*)' defined by theta(T) = S iff SM = MT
/// for all M; unique by essentiality. Verifies multiplicativity, adjoints,
/// bijectivity, and that theta extends Map(M) on the supplied projections.
StarIsoResult thetaFromWitness(const Tro& m, const OpAlgebra& aPrime, const OpAlgebra& bPrime,
                               const std::vector<Mat>& frameProjections = {});

struct LinkingResult {
    OpAlgebra linking; // [A M*; M B] on H1 + H2
    CheckReport report;
};

/// The block algebra [A M*; M B] for A = span(M*M), B = span(M M*), verified
/// to equal the commutant of { X + theta(X) : X in A' }.
LinkingResult linkingAlgebra(const OpAlgebra& a, const OpAlgebra& b, const Tro& m);
LinkingResult linkingAlgebra(const Tro& m);

/// Composition through a common middle algebra: w1 : B ~ A, w2 : B ~ C gives
/// a verified witness A ~ C via span(Y Z*), including the equal-generated-
/// algebra check for Z and Y.
WitnessResult composeWitnesses(const TroWitness& w1, const TroWitness& w2);

/// Witness with M* on the opposite side: B ~ A from A ~ B.
TroWitness reverseWitness(const TroWitness& w);

struct EnlargeResult {
    std::optional<TroWitness> witness; // same algebras, enlarged TRO N
    CheckReport report;
    bool ok() const { return witness.has_value(); }
};

/// The enlargement N with span(N*N) = diag(A), span(N N*) = diag(B) and
/// A ~^N B; requires unital algebras.
EnlargeResult enlargeWitness(const TroWitness& w);

struct UnitalizeResult {
    OpAlgebra aM, bM;                  // span(A, M*M), span(B, M M*)
    std::optional<TroWitness> witness; // A_M ~^M B_M
    std::optional<Tro> enlarged;       // N with span(N*N) = diag(A_M), A ~^N B
    CheckReport report;
};

/// The unitalization A_M, B_M of a (possibly non-unital) equivalence, with
/// the ideal properties and the enlarged TRO of the construction.
UnitalizeResult unitalizeContext(const OpAlgebra& a, const OpAlgebra& b, const Tro& m);

struct TransportResult {
    OpSpace image; // span(M J M*)
    CheckReport report;
};

/// J |-> span(M J M*) on A-bimodules, with the exact round trip
/// span(M* F(J) M) = J and ideal-to-ideal transport.
TransportResult transportBimodule(const TroWitness& w, const OpSpace& j);

/// A spatial Morita context (A, B, U, V): BUA in U, AVB in V,
/// span(VU) = A, span(UV) = B.
struct MoritaContext {
    OpAlgebra a, b;
    OpSpace u; // in B(H1, H2)
    OpSpace v; // in B(H2, H1)
};

struct MoritaResult {
    std::optional<MoritaContext> context;
    CheckReport report;
    bool ok() const { return context.has_value(); }
};

/// U = {T : phi(L)^perp T L = 0}, V = {S : L^perp S phi(L) = 0} over the
/// members, with all four context identities verified exactly.
MoritaResult moritaFromLatticeIso(const LatticeIso& phi);

/// U = span(B M), V = span(M* B_M) from a witness, non-unital case included.
MoritaResult moritaFromWitness(const TroWitness& w);

/// Map(U), Map(V) against the invariant lattices: images land in Lat(B),
/// the restrictions are mutually inverse, plus seeded random projection
/// samples of the invariance identity.
CheckReport verifyMoritaContext(const MoritaContext& ctx, const Csl& latA, const Csl& latB,
                                std::uint64_t seed, int samples);

struct DecideResult {
    bool equivalent = false;
    std::optional<LatticeIso> iso;
    std::optional<TroWitness> witness;
    NotIsoCert cert; // populated on the negative answer
    CheckReport report;
};

/// The decider: lattice isomorphism search, then the intertwiner TRO
/// Delta(phi) = {T : TL = phi(L) T} verified as a witness between the CSL
/// algebras. The negative answer carries the lattice-level certificate.
DecideResult decideTroEquivalenceCSL(const Csl& s1, const Csl& s2);

struct Thm57Result {
    bool bothIntersectionsZero = false;
    int dimCornerB = -1, dimCornerA = -1;
    CheckReport report;
};

/// L'' built from the graph family {L + phi(L)}, intersected with the two
/// corner algebras; both intersections vanish for every valid iso.
Thm57Result checkThm57Conditions(const Csl& s1, const Csl& s2, const LatticeIso& phi);

/// Linear extension of the member map over a maximal independent member
/// subset: well-definedness on all members, multiplicativity, adjoints, and
/// exact spectrum containment are verified.
StarIsoResult extendLatticeIsoCStar(const LatticeIso& phi);

/// Extension from the atom bijection (the transport formula), verified to
/// send every member to its image; agrees with the C*-extension on span(S1).
StarIsoResult extendAtomIso(const LatticeIso& phi);

} // namespace opalg

#endif
