#include "opalg/selftest.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>
#include <set>
#include <thread>

namespace opalg {

bool bruteForceLatticeIsoExists(const Csl& s1, const Csl& s2) {
    if (s1.memberCount() != s2.memberCount() || s1.atomCount() != s2.atomCount()) return false;
    const int k = s1.atomCount();
    std::vector<int> perm(k);
    std::iota(perm.begin(), perm.end(), 0);
    std::set<std::uint64_t> fam2(s2.memberSets().begin(), s2.memberSets().end());
    do {
        bool good = true;
        for (auto mask : s1.memberSets()) {
            std::uint64_t image = 0;
            for (int a = 0; a < k; ++a)
                if (mask & (1ull << a)) image |= (1ull << perm[a]);
            if (!fam2.count(image)) { good = false; break; }
        }
        if (good) return true;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return false;
}

namespace {

std::uint64_t mix(std::uint64_t seed, std::uint64_t criterion, std::uint64_t index) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (criterion + 1) + (index << 17) + index;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

/// Runs fn(i) for i in [0, count) over nThreads workers; results are
/// collected by index, so the output is schedule independent.
void parallelFor(int count, int nThreads, const std::function<void(int)>& fn) {
    if (nThreads <= 1 || count <= 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    auto worker = [&] {
        for (;;) {
            int i = next.fetch_add(1);
            if (i >= count) return;
            fn(i);
        }
    };
    std::vector<std::thread> pool;
    const int n = std::min(nThreads, count);
    pool.reserve(n);
    for (int t = 0; t < n; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
}

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    long long ms() const {
        return std::chrono::duration_cast<std::chrono::milliseconds>(
                   std::chrono::steady_clock::now() - start)
            .count();
    }
};

CriterionResult criterion1(std::uint64_t seed, bool quick, int parallel) {
    CriterionResult res{"1", "galois-reflexivity", false, Json::object(), 0};
    Timer timer;
    const int count = quick ? 20 : 200;
    std::vector<char> ok(count, 0);
    parallelFor(count, parallel, [&](int i) {
        Rng rng(mix(seed, 1, i));
        const int dim = 2 + (i % 5);
        Csl s = randomCsl(rng, dim, std::min(dim, 6));
        OpAlgebra alg = algOfLattice(s);
        Csl lat = latOfAlgebra(alg, s.atoms());
        bool pass = (lat == s);
        pass = pass && (algOfLattice(lat) == alg);
        ok[i] = pass ? 1 : 0;
    });
    int passCount = 0;
    for (char c : ok) passCount += c;
    res.elapsedMs = timer.ms();
    res.details = Json{{"instances", count}, {"passed", passCount}};
    res.pass = passCount == count && res.elapsedMs < 120000;
    return res;
}

CriterionResult criterion2() {
    CriterionResult res{"2", "amplification-example", false, Json::object(), 0};
    Timer timer;
    OpAlgebra t2 = upperTriangular(2);
    AmplificationExample ex = amplificationExample(t2);
    WitnessResult w = verifyWitness(ex.a, ex.b, ex.m);
    res.details = Json{{"checks", reportToJson(w.report)}};
    res.pass = w.ok();
    res.elapsedMs = timer.ms();
    return res;
}

CriterionResult criterion3(std::uint64_t seed, bool quick, int parallel) {
    CriterionResult res{"3", "witness-composition", false, Json::object(), 0};
    Timer timer;
    const int count = quick ? 6 : 50;
    std::vector<char> ok(count, 0);
    parallelFor(count, parallel, [&](int i) {
        Rng rng(mix(seed, 3, i));
        const int dimB = 2 + (i % 3);
        Csl sB = randomCsl(rng, dimB, dimB);
        auto [sA, isoA] = randomIsoInstance(rng, sB, 5);
        auto [sC, isoC] = randomIsoInstance(rng, sB, 5);
        DecideResult d1 = decideTroEquivalenceCSL(sB, sA);
        DecideResult d2 = decideTroEquivalenceCSL(sB, sC);
        if (!d1.equivalent || !d2.equivalent) return;
        WitnessResult comp = composeWitnesses(*d1.witness, *d2.witness);
        ok[i] = comp.ok() ? 1 : 0;
    });
    int passCount = 0;
    for (char c : ok) passCount += c;
    res.details = Json{{"chains", count}, {"passed", passCount}};
    res.pass = passCount == count;
    res.elapsedMs = timer.ms();
    return res;
}

CriterionResult criterion4(std::uint64_t seed, bool quick, int parallel) {
    CriterionResult res{"4", "commutant-isomorphism-transport", false, Json::object(), 0};
    Timer timer;
    const int count = quick ? 4 : 20;
    std::vector<char> ok(count, 0);
    parallelFor(count, parallel, [&](int i) {
        Rng rng(mix(seed, 4, i));
        const int dim = 2 + (i % 3);
        Csl s1 = randomCsl(rng, dim, dim);
        auto [s2, iso] = randomIsoInstance(rng, s1, 5);
        DecideResult d = decideTroEquivalenceCSL(s1, s2);
        if (!d.equivalent) return;
        EnlargeResult el = enlargeWitness(*d.witness);
        if (!el.ok()) return;
        OpAlgebra aPrime = commutant(diagonal(d.witness->a).space);
        OpAlgebra bPrime = commutant(diagonal(d.witness->b).space);
        StarIsoResult theta =
            thetaFromWitness(el.witness->m, aPrime, bPrime, s1.members());
        if (!theta.ok()) return;
        // theta maps Lat(A) onto Lat(B)
        std::set<std::vector<Scalar>> images;
        for (const auto& l : s1.members()) {
            Mat img = theta.iso->apply(l);
            if (s2.indexOfMember(img) < 0) return;
            images.insert(img.vec());
        }
        if (images.size() != static_cast<size_t>(s2.memberCount())) return;
        LinkingResult link = linkingAlgebra(el.witness->m);
        ok[i] = link.report.allPass() ? 1 : 0;
    });
    int passCount = 0;
    for (char c : ok) passCount += c;
    res.details = Json{{"witnesses", count}, {"passed", passCount}};
    res.pass = passCount == count;
    res.elapsedMs = timer.ms();
    return res;
}

std::vector<Csl> decideOraclePool(std::uint64_t seed, bool quick) {
    std::vector<Csl> pool;
    pool.push_back(chainCsl({1, 1}));
    pool.push_back(chainCsl({2, 1}));
    pool.push_back(chainCsl({1, 1, 1}));
    pool.push_back(chainCsl({1, 2, 1}));
    pool.push_back(chainCsl({1, 1, 1, 1}));
    pool.push_back(booleanCsl({1, 1}));
    pool.push_back(booleanCsl({2, 1}));
    pool.push_back(booleanCsl({1, 1, 1}));
    if (!quick) {
        pool.push_back(chainCsl({3, 1}));
        pool.push_back(chainCsl({2, 2}));
        pool.push_back(chainCsl({1, 1, 2}));
        pool.push_back(chainCsl({2, 1, 1, 1}));
        pool.push_back(chainCsl({1, 1, 1, 1, 1}));
        pool.push_back(booleanCsl({1, 2}));
        pool.push_back(booleanCsl({1, 1, 2}));
        pool.push_back(booleanCsl({2, 2}));
        Rng rng(mix(seed, 5, 999));
        while (pool.size() < 30) {
            const int dim = rng.range(3, 5);
            Csl s = randomCsl(rng, dim, std::min(dim, 5));
            if (s.atomCount() <= 5) pool.push_back(std::move(s));
        }
    }
    return pool;
}

CriterionResult criterion5(std::uint64_t seed, bool quick, int parallel) {
    CriterionResult res{"5", "decider-oracle-agreement", false, Json::object(), 0};
    Timer timer;
    std::vector<Csl> pool = decideOraclePool(seed, quick);
    const int n = static_cast<int>(pool.size());
    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) pairs.emplace_back(i, j);
    std::vector<char> ok(pairs.size(), 0);
    std::atomic<int> positives{0};
    parallelFor(static_cast<int>(pairs.size()), parallel, [&](int idx) {
        const auto& [i, j] = pairs[idx];
        bool oracle = bruteForceLatticeIsoExists(pool[i], pool[j]);
        DecideResult d = decideTroEquivalenceCSL(pool[i], pool[j]);
        bool agree = d.equivalent == oracle;
        if (d.equivalent) {
            agree = agree && d.witness.has_value();
            positives.fetch_add(1);
        }
        ok[idx] = agree ? 1 : 0;
    });
    int passCount = 0;
    for (char c : ok) passCount += c;
    res.elapsedMs = timer.ms();
    res.details = Json{{"poolSize", n},
                       {"pairs", static_cast<int>(pairs.size())},
                       {"agreements", passCount},
                       {"positives", positives.load()}};
    res.pass = passCount == static_cast<int>(pairs.size()) && res.elapsedMs < 600000;
    return res;
}

CriterionResult criterion6(std::uint64_t seed, bool quick, int parallel) {
    CriterionResult res{"6", "morita-contexts", false, Json::object(), 0};
    Timer timer;
    const int count = quick ? 3 : 12;
    std::vector<char> ok(count, 0);
    parallelFor(count, parallel, [&](int i) {
        Rng rng(mix(seed, 6, i));
        const int dim = 2 + (i % 3);
        Csl s1 = randomCsl(rng, dim, dim);
        auto [s2, iso] = randomIsoInstance(rng, s1, 5);
        MoritaResult viaIso = moritaFromLatticeIso(iso);
        if (!viaIso.ok()) return;
        DecideResult d = decideTroEquivalenceCSL(s1, s2);
        if (!d.equivalent) return;
        MoritaResult viaWitness = moritaFromWitness(*d.witness);
        if (!viaWitness.ok()) return;
        CheckReport ctxRep =
            verifyMoritaContext(*viaIso.context, s1, s2, mix(seed, 60, i), quick ? 20 : 100);
        ok[i] = ctxRep.allPass() ? 1 : 0;
    });
    int passCount = 0;
    for (char c : ok) passCount += c;
    res.details = Json{{"instances", count}, {"passed", passCount}};
    res.pass = passCount == count;
    res.elapsedMs = timer.ms();
    return res;
}

CriterionResult criterion7(std::uint64_t seed, bool quick, int parallel) {
    CriterionResult res{"7", "lattice-iso-extension", false, Json::object(), 0};
    Timer timer;
    const int count = quick ? 60 : 1000;
    std::vector<char> ok(count, 0);
    parallelFor(count, parallel, [&](int i) {
        Rng rng(mix(seed, 7, i));
        const int dim = 2 + (i % 5);
        Csl s1 = randomCsl(rng, dim, std::min(dim, 6));
        auto [s2, iso] = randomIsoInstance(rng, s1, 6);
        StarIsoResult cstar = extendLatticeIsoCStar(iso);
        if (!cstar.ok()) return;
        StarIsoResult atomic = extendAtomIso(iso);
        if (!atomic.ok()) return;
        // the two constructions agree on span(S1): same canonical basis
        if (cstar.iso->images != atomic.iso->images) return;
        Thm57Result t57 = checkThm57Conditions(s1, s2, iso);
        ok[i] = t57.bothIntersectionsZero ? 1 : 0;
    });
    int passCount = 0;
    for (char c : ok) passCount += c;
    res.details = Json{{"instances", count}, {"passed", passCount}};
    res.pass = passCount == count;
    res.elapsedMs = timer.ms();
    return res;
}

CriterionResult criterion8() {
    CriterionResult res{"8", "exact-arithmetic-only", false, Json::object(), 0};
    static_assert(std::is_same_v<decltype(Scalar{}.re), Rat>,
                  "scalar parts must be exact rationals");
    res.details = Json{{"note", "every verdict path runs on exact Gaussian rationals; "
                                "no tolerance parameter exists in the core"}};
    res.pass = true;
    return res;
}

} // namespace

Json SelftestReport::toJson() const {
    Json cs = Json::array();
    for (const auto& c : criteria) {
        cs.push_back(Json{{"id", c.id},
                          {"name", c.name},
                          {"status", c.pass ? "pass" : "fail"},
                          {"details", c.details}});
    }
    return Json{{"seed", seed}, {"quick", quick}, {"criteria", cs}, {"allPass", allPass}};
}

SelftestReport runCriteria(std::uint64_t seed, bool quick, int parallel) {
    SelftestReport rep;
    rep.seed = seed;
    rep.quick = quick;
    rep.criteria.push_back(criterion1(seed, quick, parallel));
    rep.criteria.push_back(criterion2());
    rep.criteria.push_back(criterion3(seed, quick, parallel));
    rep.criteria.push_back(criterion4(seed, quick, parallel));
    rep.criteria.push_back(criterion5(seed, quick, parallel));
    rep.criteria.push_back(criterion6(seed, quick, parallel));
    rep.criteria.push_back(criterion7(seed, quick, parallel));
    rep.criteria.push_back(criterion8());
    rep.allPass = true;
    for (const auto& c : rep.criteria) rep.allPass = rep.allPass && c.pass;
    return rep;
}

SelftestReport runSelftest(std::uint64_t seed, bool quick, int parallel) {
    SelftestReport first = runCriteria(seed, quick, parallel);
    SelftestReport second = runCriteria(seed, quick, parallel);
    CriterionResult det{"9", "determinism", false, Json::object(), 0};
    det.pass = canonicalDump(first.toJson()) == canonicalDump(second.toJson());
    det.details = Json{{"note", "two full runs compared byte for byte"}};
    first.criteria.push_back(det);
    first.allPass = first.allPass && det.pass;
    return first;
}

} // namespace opalg
