#ifndef OPALG_CORPUS_HPP
#define OPALG_CORPUS_HPP

#include "opalg/json_io.hpp"
#include "opalg/rng.hpp"

namespace opalg {

/// Nest with the given atom ranks (members are the rank prefixes).
Csl chainCsl(const std::vector<int>& atomRanks);
/// Full Boolean lattice on the given atoms.
Csl booleanCsl(const std::vector<int>& atomRanks);
/// The upper-triangular algebra on C^n.
OpAlgebra upperTriangular(int n);

/// The 2x2 amplification: B = [[A,A],[A,A]] on H+H and M = [diag(A); diag(A)]
/// (entries independent), a TRO equivalence of A with B.
struct AmplificationExample {
    OpAlgebra a;
    OpAlgebra b;
    OpSpace m;
};
AmplificationExample amplificationExample(const OpAlgebra& a);

/// Random CSL on C^dim with at most maxAtoms diagonal atoms.
Csl randomCsl(Rng& rng, int dim, int maxAtoms);

/// A lattice with the same abstract member family as s1 but freshly chosen
/// atom ranks and a relabeled atom order, together with an isomorphism
/// (obtained by the deterministic search; guaranteed to exist).
std::pair<Csl, LatticeIso> randomIsoInstance(Rng& rng, const Csl& s1, int maxDim);

/// Structured near-miss: adds or removes one member, or splits one atom.
/// The result may or may not be isomorphic to s; callers decide what to
/// do with it.
Csl perturbCsl(Rng& rng, const Csl& s);

struct CorpusOptions {
    int dimLo = 2;
    int dimHi = 6;
    int count = 10;
    std::uint64_t seed = 1;
};

/// Deterministic corpus: per index an isomorphic-by-construction CSL pair and
/// a structured perturbation of the first element.
std::vector<Instance> corpusGen(const CorpusOptions& opts);

} // namespace opalg

#endif
