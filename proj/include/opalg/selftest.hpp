#ifndef OPALG_SELFTEST_HPP
#define OPALG_SELFTEST_HPP

#include "opalg/corpus.hpp"

namespace opalg {

/// Exhaustive reference decision: tries every atom bijection and checks the
/// member-set family transport. Independent of the pruned backtracking search.
bool bruteForceLatticeIsoExists(const Csl& s1, const Csl& s2);

struct CriterionResult {
    std::string id;
    std::string name;
    bool pass = false;
    Json details;            // deterministic content only
    long long elapsedMs = 0; // never serialized into the canonical report
};

struct SelftestReport {
    std::uint64_t seed = 0;
    bool quick = false;
    std::vector<CriterionResult> criteria;
    bool allPass = false;

    Json toJson() const; // canonical, timing-free
};

/// Criteria 1..8 once.
SelftestReport runCriteria(std::uint64_t seed, bool quick, int parallel);

/// Criteria 1..8 twice plus the byte-identity determinism criterion.
SelftestReport runSelftest(std::uint64_t seed, bool quick, int parallel);

} // namespace opalg

#endif
