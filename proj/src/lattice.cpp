#include "opalg/lattice.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace opalg {

void requireProjection(const Mat& p, const std::string& who) {
    if (!p.isSquare()) throw InputError(who + ": matrix not square");
    if (!p.isHermitian()) throw InputError(who + ": matrix not Hermitian");
    if (p * p != p) throw InputError(who + ": matrix not idempotent");
}

static VecSubspace rangeOf(const Mat& p) {
    std::vector<Vec> cols;
    cols.reserve(p.cols());
    for (int j = 0; j < p.cols(); ++j) {
        Vec v(p.rows());
        for (int i = 0; i < p.rows(); ++i) v[i] = p.at(i, j);
        cols.push_back(std::move(v));
    }
    return VecSubspace::span(p.rows(), std::move(cols));
}

Mat projMeet(const Mat& p, const Mat& q) {
    if (p.rows() != q.rows() || p.cols() != q.cols())
        throw InputError("projMeet: dimension mismatch");
    return orthoProject(rangeOf(p).intersect(rangeOf(q)));
}

Mat projJoin(const Mat& p, const Mat& q) {
    if (p.rows() != q.rows() || p.cols() != q.cols())
        throw InputError("projJoin: dimension mismatch");
    return orthoProject(rangeOf(p).sum(rangeOf(q)));
}

// Joint eigenspace decomposition of a commuting projection family: orthogonal
// nonzero projections summing to I, each family member a sum of a subset.
static std::vector<Mat> booleanAtoms(int dim, const std::vector<Mat>& projs) {
    std::vector<Mat> atoms{Mat::identity(dim)};
    for (const auto& p : projs) {
        std::vector<Mat> next;
        next.reserve(atoms.size() * 2);
        for (const auto& e : atoms) {
            Mat inside = e * p; // projection: e and p commute
            if (inside.isZero()) {
                next.push_back(e);
            } else if (inside == e) {
                next.push_back(e);
            } else {
                next.push_back(inside);
                next.push_back(e - inside);
            }
        }
        atoms = std::move(next);
    }
    return atoms;
}

static std::uint64_t maskOver(const Mat& member, const std::vector<Mat>& boolAtoms) {
    std::uint64_t mask = 0;
    for (size_t i = 0; i < boolAtoms.size(); ++i)
        if (boolAtoms[i] * member == boolAtoms[i]) mask |= (1ull << i);
    return mask;
}

static void checkCommutingFamily(const std::vector<Mat>& projs, const std::string& who) {
    for (size_t i = 0; i < projs.size(); ++i)
        for (size_t j = i + 1; j < projs.size(); ++j)
            if (projs[i] * projs[j] != projs[j] * projs[i])
                throw InputError(who + ": projections " + std::to_string(i) + " and " +
                                 std::to_string(j) + " do not commute");
}

Csl Csl::finalize(int dim, std::vector<Mat> boolAtoms, std::vector<std::uint64_t> famMasks) {
    std::sort(famMasks.begin(), famMasks.end());
    famMasks.erase(std::unique(famMasks.begin(), famMasks.end()), famMasks.end());

    const size_t nb = boolAtoms.size();
    if (nb > 63) throw InputError("Csl: more than 63 joint eigenspaces");
    const std::uint64_t fullMask = nb == 0 ? 0 : ((nb == 63) ? ~0ull >> 1 : ((1ull << nb) - 1));

    // CSL atoms: for each member mask, subtract the join of strictly smaller
    // members; a nonzero remainder is an atom contributed by that member.
    std::vector<std::uint64_t> atomMasks;
    std::vector<size_t> atomFromFam;
    for (size_t mi = 0; mi < famMasks.size(); ++mi) {
        std::uint64_t flat = 0;
        for (size_t mj = 0; mj < famMasks.size(); ++mj)
            if (mj != mi && (famMasks[mj] & ~famMasks[mi]) == 0 && famMasks[mj] != famMasks[mi])
                flat |= famMasks[mj];
        std::uint64_t am = famMasks[mi] & ~flat;
        if (am == 0) continue;
        // distinct contributing members yield orthogonal, hence distinct atoms;
        // deduplicate anyway as a guard
        if (std::find(atomMasks.begin(), atomMasks.end(), am) == atomMasks.end()) {
            atomMasks.push_back(am);
            atomFromFam.push_back(mi);
        }
    }

    // atoms are pairwise orthogonal and sum to I
    std::uint64_t seen = 0;
    for (auto am : atomMasks) {
        if (seen & am) throw InternalError("Csl: atoms not pairwise orthogonal");
        seen |= am;
    }
    if (seen != fullMask) throw InternalError("Csl: atoms do not sum to the identity");
    for (auto fm : famMasks) {
        std::uint64_t cover = 0;
        for (auto am : atomMasks)
            if ((am & ~fm) == 0) cover |= am;
        if (cover != fm) throw InternalError("Csl: member is not the sum of its atoms");
    }

    auto matFromMask = [&](std::uint64_t mask) {
        Mat m = Mat::zero(dim, dim);
        for (size_t i = 0; i < nb; ++i)
            if (mask & (1ull << i)) m = m + boolAtoms[i];
        return m;
    };

    struct Entry {
        Mat mat;
        std::uint64_t boolMask;
        bool isJoinIrr;
    };
    std::vector<Entry> ms;
    ms.reserve(famMasks.size());
    for (size_t mi = 0; mi < famMasks.size(); ++mi) {
        bool jirr = std::find(atomFromFam.begin(), atomFromFam.end(), mi) != atomFromFam.end();
        ms.push_back({matFromMask(famMasks[mi]), famMasks[mi], jirr});
    }
    std::sort(ms.begin(), ms.end(), [](const Entry& a, const Entry& b) { return a.mat.cmpTotal(b.mat) < 0; });

    std::vector<std::pair<Mat, std::uint64_t>> atomEntries;
    atomEntries.reserve(atomMasks.size());
    for (auto am : atomMasks) atomEntries.emplace_back(matFromMask(am), am);
    std::sort(atomEntries.begin(), atomEntries.end(),
              [](const auto& a, const auto& b) { return a.first.cmpTotal(b.first) < 0; });

    Csl s;
    s.dim_ = dim;
    for (auto& e : ms) s.members_.push_back(std::move(e.mat));
    for (auto& e : atomEntries) s.atoms_.push_back(e.first);

    for (size_t mi = 0; mi < ms.size(); ++mi) {
        std::uint64_t set = 0;
        for (size_t ai = 0; ai < atomEntries.size(); ++ai)
            if ((atomEntries[ai].second & ~ms[mi].boolMask) == 0) set |= (1ull << ai);
        s.memberSets_.push_back(set);
        if (ms[mi].boolMask == 0) s.zeroIdx_ = static_cast<int>(mi);
        if (ms[mi].boolMask == fullMask) s.identityIdx_ = static_cast<int>(mi);
        if (ms[mi].isJoinIrr) s.joinIrr_.push_back(static_cast<int>(mi));
    }
    if (s.zeroIdx_ < 0 || s.identityIdx_ < 0) throw InternalError("Csl: missing 0 or I");

    // member -> memberSet is injective and turns meet/join into set ops
    std::set<std::uint64_t> distinct(s.memberSets_.begin(), s.memberSets_.end());
    if (distinct.size() != s.memberSets_.size()) throw InternalError("Csl: memberSets not injective");
    for (auto x : s.memberSets_)
        for (auto y : s.memberSets_) {
            if (!distinct.count(x & y) || !distinct.count(x | y))
                throw InternalError("Csl: member sets not closed under set operations");
        }
    return s;
}

Csl Csl::closure(int dim, const std::vector<Mat>& gens) {
    for (const auto& g : gens) {
        if (g.rows() != dim || g.cols() != dim)
            throw InputError("Csl::closure: generator of shape " + g.shapeStr() +
                             " in dimension " + std::to_string(dim));
        requireProjection(g, "Csl::closure");
    }
    checkCommutingFamily(gens, "Csl::closure");

    std::vector<Mat> ba = booleanAtoms(dim, gens);
    std::set<std::uint64_t> fam;
    const std::uint64_t fullMask = (ba.size() >= 63) ? throw InputError("Csl::closure: too many eigenspaces")
                                                     : ((1ull << ba.size()) - 1);
    fam.insert(0);
    fam.insert(fullMask);
    for (const auto& g : gens) fam.insert(maskOver(g, ba));

    // close under meet and join
    std::vector<std::uint64_t> work(fam.begin(), fam.end());
    while (!work.empty()) {
        std::uint64_t m = work.back();
        work.pop_back();
        std::vector<std::uint64_t> cur(fam.begin(), fam.end());
        for (auto x : cur) {
            for (auto y : {m & x, m | x}) {
                if (!fam.count(y)) {
                    if (static_cast<int>(fam.size()) >= kCslClosureCap)
                        throw InputError("Csl::closure: closure exceeds cap of " +
                                         std::to_string(kCslClosureCap) + " members");
                    fam.insert(y);
                    work.push_back(y);
                }
            }
        }
    }
    return finalize(dim, std::move(ba), std::vector<std::uint64_t>(fam.begin(), fam.end()));
}

Csl Csl::fromMembers(int dim, const std::vector<Mat>& members) {
    for (const auto& m : members) {
        if (m.rows() != dim || m.cols() != dim)
            throw InputError("Csl: member of shape " + m.shapeStr() + " in dimension " +
                             std::to_string(dim));
        requireProjection(m, "Csl");
    }
    checkCommutingFamily(members, "Csl");
    std::vector<Mat> ba = booleanAtoms(dim, members);
    if (ba.size() >= 63) throw InputError("Csl: too many eigenspaces");
    const std::uint64_t fullMask = (1ull << ba.size()) - 1;
    std::set<std::uint64_t> fam{0, fullMask};
    std::vector<std::uint64_t> masks;
    masks.reserve(members.size());
    for (const auto& m : members) {
        auto mask = maskOver(m, ba);
        masks.push_back(mask);
        fam.insert(mask);
    }
    for (size_t i = 0; i < masks.size(); ++i)
        for (size_t j = i + 1; j < masks.size(); ++j) {
            if (!fam.count(masks[i] & masks[j]))
                throw InputError("Csl: members " + std::to_string(i) + " and " + std::to_string(j) +
                                 " have no meet in the family (not a lattice)");
            if (!fam.count(masks[i] | masks[j]))
                throw InputError("Csl: members " + std::to_string(i) + " and " + std::to_string(j) +
                                 " have no join in the family (not a lattice)");
        }
    return finalize(dim, std::move(ba), std::vector<std::uint64_t>(fam.begin(), fam.end()));
}

Csl Csl::fromAtomic(const std::vector<int>& atomRanks, const std::vector<std::vector<int>>& memberSets) {
    int dim = 0;
    for (int r : atomRanks) {
        if (r <= 0) throw InputError("Csl::fromAtomic: atom ranks must be positive");
        dim += r;
    }
    const int k = static_cast<int>(atomRanks.size());
    if (k > 62) throw InputError("Csl::fromAtomic: too many atoms");
    std::vector<Mat> blockAtoms;
    int off = 0;
    for (int a = 0; a < k; ++a) {
        Mat p = Mat::zero(dim, dim);
        for (int r = 0; r < atomRanks[a]; ++r) p.at(off + r, off + r) = Scalar(1);
        blockAtoms.push_back(std::move(p));
        off += atomRanks[a];
    }
    std::vector<Mat> members;
    members.reserve(memberSets.size());
    for (const auto& set : memberSets) {
        Mat m = Mat::zero(dim, dim);
        for (int a : set) {
            if (a < 0 || a >= k) throw InputError("Csl::fromAtomic: atom index out of range");
            m = m + blockAtoms[a];
        }
        members.push_back(std::move(m));
    }
    return fromMembers(dim, members);
}

int Csl::atomRank(int atomIdx) const {
    const Scalar t = atoms_[atomIdx].trace();
    return static_cast<int>(t.re.get_num().get_si());
}

int Csl::indexOfMember(const Mat& m) const {
    for (size_t i = 0; i < members_.size(); ++i)
        if (members_[i] == m) return static_cast<int>(i);
    return -1;
}

int Csl::indexOfMemberSet(std::uint64_t mask) const {
    for (size_t i = 0; i < memberSets_.size(); ++i)
        if (memberSets_[i] == mask) return static_cast<int>(i);
    return -1;
}

LatticeIso LatticeIso::identity(const Csl& s) {
    std::vector<int> am(s.atomCount()), mm(s.memberCount());
    for (int i = 0; i < s.atomCount(); ++i) am[i] = i;
    for (int i = 0; i < s.memberCount(); ++i) mm[i] = i;
    return LatticeIso{s, s, std::move(am), std::move(mm), true};
}

LatticeIso LatticeIso::fromAtomMap(Csl source, Csl target, std::vector<int> atomMap) {
    if (source.atomCount() != target.atomCount() ||
        static_cast<int>(atomMap.size()) != source.atomCount())
        throw InputError("LatticeIso: atom map has wrong size");
    std::vector<bool> hit(atomMap.size(), false);
    for (int t : atomMap) {
        if (t < 0 || t >= target.atomCount() || hit[t])
            throw InputError("LatticeIso: atom map is not a bijection");
        hit[t] = true;
    }
    if (source.memberCount() != target.memberCount())
        throw InputError("LatticeIso: member counts differ");
    auto mapMask = [&](std::uint64_t mask) {
        std::uint64_t r = 0;
        for (size_t i = 0; i < atomMap.size(); ++i)
            if (mask & (1ull << i)) r |= (1ull << atomMap[i]);
        return r;
    };
    std::vector<int> memberMap(source.memberCount());
    for (int i = 0; i < source.memberCount(); ++i) {
        int t = target.indexOfMemberSet(mapMask(source.memberSets()[i]));
        if (t < 0)
            throw InputError("LatticeIso: atom bijection does not map the member-set family");
        memberMap[i] = t;
    }
    // induced map is automatically an order bijection; assert the endpoints
    if (memberMap[source.zeroIndex()] != target.zeroIndex() ||
        memberMap[source.identityIndex()] != target.identityIndex())
        throw InternalError("LatticeIso: endpoints not preserved");
    bool ranks = true;
    for (size_t i = 0; i < atomMap.size(); ++i)
        if (source.atomRank(static_cast<int>(i)) != target.atomRank(atomMap[i])) ranks = false;
    return LatticeIso{std::move(source), std::move(target), std::move(atomMap), std::move(memberMap), ranks};
}

namespace {

std::vector<int> atomDegrees(const Csl& s) {
    std::vector<int> deg(s.atomCount(), 0);
    for (auto mask : s.memberSets())
        for (int a = 0; a < s.atomCount(); ++a)
            if (mask & (1ull << a)) ++deg[a];
    return deg;
}

struct IsoSearch {
    const Csl& s1;
    const Csl& s2;
    std::vector<int> deg1, deg2;
    std::set<std::uint64_t> fam2;
    std::vector<int> assign;
    std::vector<bool> used;
    std::uint64_t examined = 0;

    IsoSearch(const Csl& a, const Csl& b)
        : s1(a), s2(b), deg1(atomDegrees(a)), deg2(atomDegrees(b)),
          fam2(b.memberSets().begin(), b.memberSets().end()),
          assign(a.atomCount(), -1), used(b.atomCount(), false) {}

    bool leafAccepts() {
        ++examined;
        for (auto mask : s1.memberSets()) {
            std::uint64_t image = 0;
            for (int i = 0; i < s1.atomCount(); ++i)
                if (mask & (1ull << i)) image |= (1ull << assign[i]);
            if (!fam2.count(image)) return false;
        }
        return true;
    }

    bool run(int pos) {
        if (pos == s1.atomCount()) return leafAccepts();
        for (int cand = 0; cand < s2.atomCount(); ++cand) {
            if (used[cand] || deg1[pos] != deg2[cand]) continue;
            assign[pos] = cand;
            used[cand] = true;
            if (run(pos + 1)) return true;
            used[cand] = false;
            assign[pos] = -1;
        }
        return false;
    }
};

} // namespace

IsoSearchResult findLatticeIso(const Csl& s1, const Csl& s2) {
    IsoSearchResult res;
    NotIsoCert& cert = res.cert;
    cert.memberCountMismatch = s1.memberCount() != s2.memberCount();
    cert.atomCountMismatch = s1.atomCount() != s2.atomCount();
    auto sortedDeg = [](const Csl& s) {
        auto d = atomDegrees(s);
        std::sort(d.begin(), d.end());
        return d;
    };
    auto sortedCard = [](const Csl& s) {
        std::vector<int> c;
        c.reserve(s.memberCount());
        for (auto m : s.memberSets()) c.push_back(__builtin_popcountll(m));
        std::sort(c.begin(), c.end());
        return c;
    };
    cert.atomDegreeProfileMismatch = sortedDeg(s1) != sortedDeg(s2);
    cert.memberCardinalityProfileMismatch = sortedCard(s1) != sortedCard(s2);
    if (cert.memberCountMismatch || cert.atomCountMismatch ||
        cert.atomDegreeProfileMismatch || cert.memberCardinalityProfileMismatch)
        return res;

    IsoSearch search(s1, s2);
    if (search.run(0)) {
        res.iso = LatticeIso::fromAtomMap(s1, s2, search.assign);
        return res;
    }
    cert.bijectionsExamined = search.examined;
    cert.searchExhausted = true;
    return res;
}

Mat atomIsoFormula(const LatticeIso& phi, int atomIdx) {
    const Csl& s1 = phi.source;
    if (atomIdx < 0 || atomIdx >= s1.atomCount())
        throw InputError("atomIsoFormula: atom index out of range");
    const Mat& a = s1.atoms()[atomIdx];
    Mat meetPart = Mat::identity(phi.target.dim());
    Mat joinCompl = Mat::identity(phi.target.dim()); // complement of the join
    for (int mi = 0; mi < s1.memberCount(); ++mi) {
        const Mat& img = phi.applyToMember(mi);
        const Mat al = a * s1.members()[mi];
        if (al == a) meetPart = meetPart * img; // AL = A
        else if (al.isZero()) joinCompl = joinCompl * (Mat::identity(phi.target.dim()) - img);
    }
    // the difference of the displayed formula is the relative complement
    // meet - (meet ^ join); outside nests the join need not sit below the meet
    return meetPart * joinCompl;
}

OpAlgebra algOfLattice(const Csl& s) {
    const int n = s.dim();
    std::vector<Vec> rows;
    for (int mi : s.joinIrreducibles()) {
        const Mat& l = s.members()[mi];
        Mat lp = Mat::identity(n) - l;
        // (L^perp X L)_{ij}: coefficient of X_{uv} is lp_{iu} * l_{vj}
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                Vec row(n * n);
                bool nonzero = false;
                for (int u = 0; u < n; ++u) {
                    const Scalar& c1 = lp.at(i, u);
                    if (c1.isZero()) continue;
                    for (int v = 0; v < n; ++v) {
                        const Scalar& c2 = l.at(v, j);
                        if (c2.isZero()) continue;
                        row[u * n + v] += c1 * c2;
                        nonzero = true;
                    }
                }
                if (nonzero) rows.push_back(std::move(row));
            }
    }
    VecSubspace sol = rows.empty() ? VecSubspace::full(n * n) : [&] {
        Mat m(static_cast<int>(rows.size()), n * n);
        for (int i = 0; i < m.rows(); ++i)
            for (int j = 0; j < n * n; ++j) m.at(i, j) = rows[i][j];
        return kernel(m);
    }();
    std::vector<Mat> basis;
    basis.reserve(sol.dim());
    for (const auto& row : sol.basis()) basis.push_back(Mat::unvec(row, n, n));
    return OpAlgebra::fromSpaceUnchecked(OpSpace::span(n, n, basis));
}

Csl latOfAlgebra(const OpAlgebra& a, const std::vector<Mat>& frame) {
    const int n = a.space.domDim();
    if (frame.empty()) throw InputError("latOfAlgebra: empty frame");
    Mat sum = Mat::zero(n, n);
    for (const auto& e : frame) {
        requireProjection(e, "latOfAlgebra frame");
        if (e.rows() != n) throw InputError("latOfAlgebra: frame dimension mismatch");
        sum = sum + e;
    }
    if (sum != Mat::identity(n))
        throw InputError("latOfAlgebra: frame projections do not sum to the identity");
    for (size_t i = 0; i < frame.size(); ++i)
        for (size_t j = i + 1; j < frame.size(); ++j)
            if (!(frame[i] * frame[j]).isZero())
                throw InputError("latOfAlgebra: frame projections not pairwise orthogonal");
    for (const auto& e : frame)
        if (!a.space.contains(e))
            throw InputError("latOfAlgebra: algebra does not contain the frame projection");

    const int k = static_cast<int>(frame.size());
    if (k > 20) throw InputError("latOfAlgebra: frame too large");
    // edge j -> i iff e_i X e_j != 0 for some basis element X
    std::vector<std::uint32_t> outMask(k, 0);
    for (const auto& x : a.space.basis()) {
        for (int j = 0; j < k; ++j) {
            Mat xj = x * frame[j];
            if (xj.isZero()) continue;
            for (int i = 0; i < k; ++i) {
                if (outMask[j] & (1u << i)) continue;
                if (!(frame[i] * xj).isZero()) outMask[j] |= (1u << i);
            }
        }
    }
    std::vector<Mat> members;
    for (std::uint32_t set = 0; set < (1u << k); ++set) {
        bool closed = true;
        for (int j = 0; j < k && closed; ++j)
            if ((set & (1u << j)) && (outMask[j] & ~set)) closed = false;
        if (!closed) continue;
        Mat m = Mat::zero(n, n);
        for (int i = 0; i < k; ++i)
            if (set & (1u << i)) m = m + frame[i];
        members.push_back(std::move(m));
    }
    return Csl::fromMembers(n, members);
}

} // namespace opalg
