#include "opalg/corpus.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace opalg {

Csl chainCsl(const std::vector<int>& atomRanks) {
    const int k = static_cast<int>(atomRanks.size());
    std::vector<std::vector<int>> sets;
    for (int len = 0; len <= k; ++len) {
        std::vector<int> s(len);
        std::iota(s.begin(), s.end(), 0);
        sets.push_back(std::move(s));
    }
    return Csl::fromAtomic(atomRanks, sets);
}

Csl booleanCsl(const std::vector<int>& atomRanks) {
    const int k = static_cast<int>(atomRanks.size());
    if (k > 16) throw InputError("booleanCsl: too many atoms");
    std::vector<std::vector<int>> sets;
    for (int mask = 0; mask < (1 << k); ++mask) {
        std::vector<int> s;
        for (int a = 0; a < k; ++a)
            if (mask & (1 << a)) s.push_back(a);
        sets.push_back(std::move(s));
    }
    return Csl::fromAtomic(atomRanks, sets);
}

OpAlgebra upperTriangular(int n) {
    std::vector<Mat> basis;
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) basis.push_back(Mat::unit(n, n, i, j));
    return OpAlgebra::fromSpaceUnchecked(OpSpace::span(n, n, basis));
}

AmplificationExample amplificationExample(const OpAlgebra& a) {
    if (!a.unital) throw InputError("amplificationExample: base algebra must be unital");
    const int n = a.space.domDim();
    auto embed = [&](const Mat& x, int br, int bc) {
        Mat r = Mat::zero(2 * n, 2 * n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (!x.at(i, j).isZero()) r.at(br * n + i, bc * n + j) = x.at(i, j);
        return r;
    };
    std::vector<Mat> bBasis;
    for (int br = 0; br < 2; ++br)
        for (int bc = 0; bc < 2; ++bc)
            for (const auto& x : a.space.basis()) bBasis.push_back(embed(x, br, bc));
    OpAlgebra b = OpAlgebra::fromSpaceUnchecked(OpSpace::span(2 * n, 2 * n, bBasis));

    OpAlgebra da = diagonal(a);
    std::vector<Mat> mBasis;
    for (int block = 0; block < 2; ++block)
        for (const auto& d : da.space.basis()) {
            Mat col = Mat::zero(2 * n, n);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    if (!d.at(i, j).isZero()) col.at(block * n + i, j) = d.at(i, j);
            mBasis.push_back(std::move(col));
        }
    return AmplificationExample{a, b, OpSpace::span(n, 2 * n, mBasis)};
}

Csl randomCsl(Rng& rng, int dim, int maxAtoms) {
    if (dim < 1) throw InputError("randomCsl: dimension must be positive");
    const int k = rng.range(1, std::max(1, std::min(dim, maxAtoms)));
    // assign each coordinate to an atom, every atom nonempty
    std::vector<int> owner(dim);
    for (int i = 0; i < k; ++i) owner[i] = i;
    for (int i = k; i < dim; ++i) owner[i] = rng.range(0, k - 1);
    for (int i = dim - 1; i > 0; --i) std::swap(owner[i], owner[rng.range(0, i)]);

    std::vector<Mat> atoms(k, Mat::zero(dim, dim));
    for (int c = 0; c < dim; ++c) atoms[owner[c]].at(c, c) = Scalar(1);

    // random member family over the atoms, closed under meet and join
    const std::uint32_t full = (1u << k) - 1;
    std::set<std::uint32_t> fam{0u, full};
    const int extra = rng.range(1, k + 2);
    for (int t = 0; t < extra; ++t) fam.insert(static_cast<std::uint32_t>(rng.u64()) & full);
    for (;;) {
        bool grew = false;
        std::vector<std::uint32_t> cur(fam.begin(), fam.end());
        for (auto x : cur)
            for (auto y : cur) {
                grew |= fam.insert(x & y).second;
                grew |= fam.insert(x | y).second;
            }
        if (!grew) break;
    }
    std::vector<Mat> members;
    members.reserve(fam.size());
    for (auto mask : fam) {
        Mat m = Mat::zero(dim, dim);
        for (int a = 0; a < k; ++a)
            if (mask & (1u << a)) m = m + atoms[a];
        members.push_back(std::move(m));
    }
    return Csl::fromMembers(dim, members);
}

std::pair<Csl, LatticeIso> randomIsoInstance(Rng& rng, const Csl& s1, int maxDim) {
    const int k = s1.atomCount();
    if (maxDim < k) throw InputError("randomIsoInstance: maxDim below the atom count");
    std::vector<int> relabel(k);
    std::iota(relabel.begin(), relabel.end(), 0);
    for (int i = k - 1; i > 0; --i) std::swap(relabel[i], relabel[rng.range(0, i)]);

    const int dim2 = rng.range(k, maxDim);
    std::vector<int> ranks(k, 1);
    for (int extra = 0; extra < dim2 - k; ++extra) ++ranks[rng.range(0, k - 1)];

    std::vector<std::vector<int>> sets;
    sets.reserve(s1.memberCount());
    for (auto mask : s1.memberSets()) {
        std::vector<int> s;
        for (int a = 0; a < k; ++a)
            if (mask & (1ull << a)) s.push_back(relabel[a]);
        std::sort(s.begin(), s.end());
        sets.push_back(std::move(s));
    }
    Csl s2 = Csl::fromAtomic(ranks, sets);
    IsoSearchResult found = findLatticeIso(s1, s2);
    if (!found.iso)
        throw InternalError("randomIsoInstance: relabeled lattice not found isomorphic");
    return {std::move(s2), std::move(*found.iso)};
}

Csl perturbCsl(Rng& rng, const Csl& s) {
    const int k = s.atomCount();
    for (int attempt = 0; attempt < 16; ++attempt) {
        const int op = rng.range(0, 2);
        if (op == 0 && k >= 2) {
            // add one random member and re-close
            std::uint64_t full = (1ull << k) - 1;
            std::uint64_t cand = rng.u64() & full;
            std::set<std::uint64_t> fam(s.memberSets().begin(), s.memberSets().end());
            if (fam.count(cand)) continue;
            fam.insert(cand);
            for (;;) {
                bool grew = false;
                std::vector<std::uint64_t> cur(fam.begin(), fam.end());
                for (auto x : cur)
                    for (auto y : cur) {
                        grew |= fam.insert(x & y).second;
                        grew |= fam.insert(x | y).second;
                    }
                if (!grew) break;
            }
            std::vector<int> ranks;
            for (int a = 0; a < k; ++a) ranks.push_back(s.atomRank(a));
            std::vector<std::vector<int>> sets;
            for (auto mask : fam) {
                std::vector<int> one;
                for (int a = 0; a < k; ++a)
                    if (mask & (1ull << a)) one.push_back(a);
                sets.push_back(std::move(one));
            }
            return Csl::fromAtomic(ranks, sets);
        }
        if (op == 1 && s.memberCount() > 2) {
            // remove one member; keep only masks generated by the rest
            std::vector<std::uint64_t> masks = s.memberSets();
            int victim = rng.range(0, s.memberCount() - 1);
            if (victim == s.zeroIndex() || victim == s.identityIndex()) continue;
            std::set<std::uint64_t> fam;
            std::uint64_t full = (1ull << k) - 1;
            fam.insert(0);
            fam.insert(full);
            for (int i = 0; i < s.memberCount(); ++i)
                if (i != victim) fam.insert(masks[i]);
            for (;;) {
                bool grew = false;
                std::vector<std::uint64_t> cur(fam.begin(), fam.end());
                for (auto x : cur)
                    for (auto y : cur) {
                        grew |= fam.insert(x & y).second;
                        grew |= fam.insert(x | y).second;
                    }
                if (!grew) break;
            }
            if (fam.count(masks[victim])) continue; // regenerated, not a real removal
            std::vector<int> ranks;
            for (int a = 0; a < k; ++a) ranks.push_back(s.atomRank(a));
            std::vector<std::vector<int>> sets;
            for (auto mask : fam) {
                std::vector<int> one;
                for (int a = 0; a < k; ++a)
                    if (mask & (1ull << a)) one.push_back(a);
                sets.push_back(std::move(one));
            }
            return Csl::fromAtomic(ranks, sets);
        }
        // split one atom of rank >= 2 into two
        std::vector<int> fat;
        for (int a = 0; a < k; ++a)
            if (s.atomRank(a) >= 2) fat.push_back(a);
        if (fat.empty()) continue;
        int split = fat[rng.range(0, static_cast<int>(fat.size()) - 1)];
        std::vector<int> ranks;
        for (int a = 0; a < k; ++a) {
            if (a == split) {
                int r = s.atomRank(a);
                ranks.push_back(r / 2);
                ranks.push_back(r - r / 2);
            } else {
                ranks.push_back(s.atomRank(a));
            }
        }
        auto newIndex = [&](int a) { return a <= split ? a : a + 1; };
        std::vector<std::vector<int>> sets;
        for (auto mask : s.memberSets()) {
            std::vector<int> one;
            for (int a = 0; a < k; ++a)
                if (mask & (1ull << a)) {
                    one.push_back(newIndex(a));
                    if (a == split) one.push_back(split + 1);
                }
            std::sort(one.begin(), one.end());
            sets.push_back(std::move(one));
        }
        return Csl::fromAtomic(ranks, sets);
    }
    return s; // no perturbation found (tiny lattice); caller may skip
}

std::vector<Instance> corpusGen(const CorpusOptions& opts) {
    if (opts.dimLo < 1 || opts.dimHi < opts.dimLo)
        throw InputError("corpusGen: bad dimension range");
    if (opts.count < 1) throw InputError("corpusGen: count must be positive");
    std::vector<Instance> out;
    char nameBuf[96];
    for (int i = 0; i < opts.count; ++i) {
        Rng rng(opts.seed * 0x9e3779b97f4a7c15ull + static_cast<std::uint64_t>(i) + 1);
        const int dim = opts.dimLo + (i % (opts.dimHi - opts.dimLo + 1));
        Csl s1 = randomCsl(rng, dim, std::min(dim, 6));
        auto [s2, iso] = randomIsoInstance(rng, s1, std::min(opts.dimHi, s1.atomCount() + 4));
        Csl neg = perturbCsl(rng, s1);

        std::snprintf(nameBuf, sizeof(nameBuf), "corpus-s%llu-i%03d",
                      static_cast<unsigned long long>(opts.seed), i);
        std::string base = nameBuf;
        out.push_back(Instance{"csl", base + "-a", opts.seed, "random", cslToJson(s1)});
        out.push_back(Instance{"csl", base + "-b", opts.seed,
                               "rank-inflated relabeling of " + base + "-a", cslToJson(s2)});
        out.push_back(Instance{"csl", base + "-neg", opts.seed,
                               "structured perturbation of " + base + "-a", cslToJson(neg)});
    }
    return out;
}

} // namespace opalg
