#include "opalg/erdos.hpp"

#include "opalg/poly.hpp"
#include "opalg/rng.hpp"

#include <algorithm>
#include <set>

namespace opalg {

static std::vector<Vec> rangeBasis(const Mat& p) {
    std::vector<Vec> cols;
    cols.reserve(p.cols());
    for (int j = 0; j < p.cols(); ++j) {
        Vec v(p.rows());
        for (int i = 0; i < p.rows(); ++i) v[i] = p.at(i, j);
        cols.push_back(std::move(v));
    }
    auto piv = rref(cols);
    (void)piv;
    return cols;
}

Mat evalMap(const ErdosMap& m, const Mat& p) {
    const OpSpace space = m.adjointDirection ? adjointSpace(m.space) : m.space;
    if (p.rows() != space.domDim() || p.cols() != space.domDim())
        throw InputError("evalMap: projection dimension mismatch");
    requireProjection(p, "evalMap");
    std::vector<Vec> image;
    for (const auto& v : rangeBasis(p)) {
        Mat x(space.domDim(), 1);
        for (int i = 0; i < space.domDim(); ++i) x.at(i, 0) = v[i];
        for (const auto& t : space.basis()) {
            Mat tv = t * x;
            Vec w(space.codDim());
            for (int i = 0; i < space.codDim(); ++i) w[i] = tv.at(i, 0);
            image.push_back(std::move(w));
        }
    }
    return orthoProject(VecSubspace::span(space.codDim(), std::move(image)));
}

namespace {

// meet/join closure of a commuting family, with a hard cap
std::vector<Mat> closeFamily(std::vector<Mat> fam, bool underMeet, const Mat& seed) {
    auto key = [](const Mat& m) { return m.vec(); };
    std::vector<Mat> out;
    std::set<std::vector<Scalar>> seen;
    auto push = [&](const Mat& m) {
        auto k = key(m);
        if (seen.count(k)) return false;
        seen.insert(std::move(k));
        out.push_back(m);
        return true;
    };
    push(seed);
    for (const auto& m : fam) push(m);
    size_t next = 0;
    while (next < out.size()) {
        Mat cur = out[next++];
        const size_t snapshot = out.size();
        for (size_t i = 0; i < snapshot; ++i) {
            Mat combo = underMeet ? projMeet(cur, out[i]) : projJoin(cur, out[i]);
            if (static_cast<int>(out.size()) >= kCslClosureCap)
                throw InputError("semilatticesOver: closure cap exceeded");
            push(combo);
        }
    }
    std::sort(out.begin(), out.end(), [](const Mat& a, const Mat& b) { return a.cmpTotal(b) < 0; });
    return out;
}

} // namespace

SemilatticePair semilatticesOver(const OpSpace& u, const Csl& frame1, const Csl& frame2) {
    if (frame1.dim() != u.domDim() || frame2.dim() != u.codDim())
        throw InputError("semilatticesOver: frame dimensions do not match the space");
    ErdosMap fwd{u, false};
    ErdosMap adj{u, true};

    std::vector<Mat> s2raw;
    s2raw.reserve(frame1.memberCount());
    for (const auto& p : frame1.members()) s2raw.push_back(evalMap(fwd, p));
    std::vector<Mat> s1raw;
    s1raw.reserve(frame2.memberCount());
    for (const auto& q : frame2.members())
        s1raw.push_back(Mat::identity(u.domDim()) - evalMap(adj, q));

    SemilatticePair pair;
    pair.s2 = closeFamily(std::move(s2raw), /*underMeet=*/false, Mat::zero(u.codDim(), u.codDim()));
    pair.s1 = closeFamily(std::move(s1raw), /*underMeet=*/true, Mat::identity(u.domDim()));

    // phi restricted to s1 should biject onto s2; evaluated on the computed
    // finite families and reported, not assumed.
    std::set<std::vector<Scalar>> images, s2keys;
    bool allLand = true;
    for (const auto& p : pair.s1) {
        Mat img = evalMap(fwd, p);
        bool lands = false;
        for (const auto& q : pair.s2)
            if (q == img) { lands = true; break; }
        allLand = allLand && lands;
        images.insert(img.vec());
    }
    for (const auto& q : pair.s2) s2keys.insert(q.vec());
    pair.mapBijective = allLand && images.size() == pair.s1.size() && images == s2keys;
    return pair;
}

EssentialVerdict essentialVerdict(const OpSpace& u) {
    EssentialVerdict v;
    ErdosMap fwd{u, false};
    ErdosMap adj{u, true};
    v.mapReachesIdentity = evalMap(fwd, Mat::identity(u.domDim())) == Mat::identity(u.codDim());
    v.adjointMapReachesIdentity = evalMap(adj, Mat::identity(u.codDim())) == Mat::identity(u.domDim());
    v.essential = v.mapReachesIdentity && v.adjointMapReachesIdentity;

    // Second characterization: the algebras generated by span(U U*) and
    // span(U* U) contain the identity. The unit of the *-algebra generated by
    // span(U U*) is the projection onto the joint range, so the two
    // characterizations must agree.
    OpSpace ustar = adjointSpace(u);
    bool uuStarUnital = generatedAlgebra(productSpan(u, ustar), false).space.containsIdentity();
    bool uStarUUnital = generatedAlgebra(productSpan(ustar, u), false).space.containsIdentity();
    if (uuStarUnital != v.mapReachesIdentity || uStarUUnital != v.adjointMapReachesIdentity)
        throw InternalError("essentialVerdict: the two characterizations disagree");
    return v;
}

bool isEssential(const OpSpace& u) { return essentialVerdict(u).essential; }

namespace {

struct RefAnalysis {
    const OpSpace& u;
    const Mat& t;
    Rng rng;
    int samplesPerLocus;
    RefVerdict verdict;
    int nvars;

    RefAnalysis(const OpSpace& u_, const Mat& t_, std::uint64_t seed, int samples)
        : u(u_), t(t_), rng(seed), samplesPerLocus(samples), nvars(u_.domDim()) {
        verdict.member = true;
    }

    // one substitution level: variable var was replaced by num/den
    struct Subst {
        int var;
        Poly num, den;
    };

    bool exactMemberAt(const Vec& x) const {
        Mat xm(u.domDim(), 1);
        for (int i = 0; i < u.domDim(); ++i) xm.at(i, 0) = x[i];
        std::vector<Vec> cols;
        for (const auto& b : u.basis()) {
            Mat bx = b * xm;
            Vec w(u.codDim());
            for (int i = 0; i < u.codDim(); ++i) w[i] = bx.at(i, 0);
            cols.push_back(std::move(w));
        }
        Mat tx = t * xm;
        Vec w(u.codDim());
        for (int i = 0; i < u.codDim(); ++i) w[i] = tx.at(i, 0);
        return VecSubspace::span(u.codDim(), std::move(cols)).contains(w);
    }

    // resolve a full point from values of the free variables and the chain
    bool resolvePoint(std::vector<Scalar>& x, const std::vector<Subst>& chain) const {
        for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
            Scalar den = it->den.eval(x);
            if (den.isZero()) return false;
            x[it->var] = it->num.eval(x) / den;
        }
        return true;
    }

    Vec samplePoint(const std::vector<Subst>& chain, const std::vector<bool>& isFree) {
        for (int tries = 0; tries < 64; ++tries) {
            std::vector<Scalar> x(nvars);
            for (int v = 0; v < nvars; ++v)
                if (isFree[v]) x[v] = rng.smallScalar(5, 3);
            if (resolvePoint(x, chain)) return x;
        }
        return {};
    }

    void foundCounterexample(const Vec& x) {
        verdict.member = false;
        verdict.witness = x;
    }

    // returns false once a counterexample ends the analysis
    bool analyze(const std::vector<std::vector<Poly>>& s0,
                 const std::vector<std::vector<Poly>>& s1,
                 std::vector<Subst> chain, std::vector<bool> isFree, int depth) {
        BareissResult b0 = bareissRank(s0);
        BareissResult b1 = bareissRank(s1);
        if (b1.rank > b0.rank) {
            // generically off the hull on this stratum: materialize a witness
            for (int tries = 0; tries < 64; ++tries) {
                Vec x = samplePoint(chain, isFree);
                if (x.empty()) continue;
                if (!exactMemberAt(x)) {
                    foundCounterexample(x);
                    return false;
                }
            }
            throw InternalError("refMembership: generic rank excess produced no witness");
        }
        // exact on the generic stratum; probe each pivot locus
        for (const Poly& pivot : b0.pivots) {
            if (pivot.isConstant()) continue;
            if (depth < 3) {
                int linVar = -1;
                for (int v = 0; v < nvars && linVar < 0; ++v)
                    if (isFree[v] && pivot.degreeIn(v) == 1) linVar = v;
                if (linVar >= 0) {
                    // pivot = A x_v + B; substitute x_v -> -B/A and clear rows
                    Poly a(nvars), bPart(nvars);
                    for (const auto& [e, c] : pivot.terms()) {
                        Poly mono(nvars);
                        auto e2 = e;
                        if (e[linVar] == 1) {
                            e2[linVar] = 0;
                            mono = mono + Poly::constant(nvars, c) * monoOf(e2);
                            a = a + mono;
                        } else {
                            bPart = bPart + Poly::constant(nvars, c) * monoOf(e2);
                        }
                    }
                    auto sub0 = substituteMatrix(s0, linVar, -bPart, a);
                    auto sub1 = substituteMatrix(s1, linVar, -bPart, a);
                    auto chain2 = chain;
                    chain2.push_back({linVar, -bPart, a});
                    auto free2 = isFree;
                    free2[linVar] = false;
                    ++verdict.lociSampled;
                    if (!analyze(sub0, sub1, std::move(chain2), std::move(free2), depth + 1))
                        return false;
                    continue;
                }
            }
            if (!sampleLocusPoints(pivot, chain, isFree)) return false;
        }
        return true;
    }

    Poly monoOf(const Poly::Expo& e) const {
        Poly p = Poly::constant(nvars, Scalar(1));
        for (int v = 0; v < nvars; ++v)
            for (std::uint32_t k = 0; k < e[v]; ++k) p = p * Poly::variable(nvars, v);
        return p;
    }

    std::vector<std::vector<Poly>> substituteMatrix(const std::vector<std::vector<Poly>>& m,
                                                    int var, const Poly& num, const Poly& den) const {
        std::vector<std::vector<Poly>> out;
        out.reserve(m.size());
        for (const auto& row : m) {
            int rowDeg = 0;
            for (const auto& e : row) rowDeg = std::max(rowDeg, e.degreeIn(var));
            std::vector<Poly> newRow;
            newRow.reserve(row.size());
            for (const auto& e : row) {
                Poly s = e.substituteCleared(var, num, den);
                // uniform row scaling: bring every entry to den^rowDeg
                for (int k = e.degreeIn(var); k < rowDeg; ++k) s = s * den;
                newRow.push_back(std::move(s));
            }
            out.push_back(std::move(newRow));
        }
        return out;
    }

    // direct rational-point sampling on {pivot = 0}; returns false on counterexample
    bool sampleLocusPoints(const Poly& pivot, const std::vector<Subst>& chain,
                           const std::vector<bool>& isFree) {
        ++verdict.lociSampled;
        int found = 0;
        for (int v = 0; v < nvars && found < samplesPerLocus; ++v) {
            if (!isFree[v] || pivot.degreeIn(v) == 0) continue;
            for (int tries = 0; tries < 8 && found < samplesPerLocus; ++tries) {
                std::vector<Scalar> x(nvars);
                for (int w = 0; w < nvars; ++w)
                    if (isFree[w] && w != v) x[w] = rng.smallScalar(5, 3);
                // reduce pivot to a univariate polynomial in v
                Poly uni(nvars);
                for (const auto& [e, c] : pivot.terms()) {
                    Scalar coeff = c;
                    bool dead = false;
                    for (int w = 0; w < nvars; ++w) {
                        if (w == v) continue;
                        for (std::uint32_t k = 0; k < e[w]; ++k) coeff *= x[w];
                    }
                    if (dead || coeff.isZero()) continue;
                    Poly::Expo e2(nvars, 0);
                    e2[v] = e[v];
                    uni = uni + Poly::constant(nvars, coeff) * monoOf(e2);
                }
                for (const Scalar& root : univariateRationalRoots(uni, v)) {
                    x[v] = root;
                    std::vector<Scalar> full = x;
                    if (!resolvePoint(full, chain)) continue;
                    ++found;
                    if (!exactMemberAt(full)) {
                        foundCounterexample(full);
                        return false;
                    }
                    if (found >= samplesPerLocus) break;
                }
            }
        }
        if (found == 0)
            verdict.notes.push_back("locus with no rational sample points: " + pivot.str());
        return true;
    }

    std::vector<Scalar> univariateRationalRoots(const Poly& uni, int var) const {
        std::vector<Scalar> roots;
        auto cs = uni.univariateCoeffs(var);
        while (!cs.empty() && cs.back().isZero()) cs.pop_back();
        if (cs.size() <= 1) return roots; // constant: no roots (nonzero) or all roots (zero poly)
        if (cs.size() == 2) {
            roots.push_back(-(cs[0] / cs[1]));
            return roots;
        }
        // bounded probe set for higher degree
        static const int probes[][3] = {{0, 1, 0}, {1, 1, 0}, {-1, 1, 0}, {2, 1, 0}, {-2, 1, 0},
                                        {1, 2, 0}, {-1, 2, 0}, {0, 1, 1}, {0, 1, -1}, {1, 1, 1},
                                        {1, 1, -1}, {-1, 1, 1}, {-1, 1, -1}};
        for (const auto& pr : probes) {
            Scalar cand(Rat(pr[0], pr[1]), Rat(pr[2], 1));
            Scalar val;
            for (size_t k = cs.size(); k-- > 0;) val = val * cand + cs[k];
            if (val.isZero()) roots.push_back(cand);
        }
        return roots;
    }
};

} // namespace

RefVerdict refMembership(const OpSpace& u, const Mat& t, std::uint64_t seed, int samples) {
    if (t.rows() != u.codDim() || t.cols() != u.domDim())
        throw InputError("refMembership: operator shape mismatch");
    RefVerdict v;
    if (u.contains(t)) {
        v.member = true;
        v.notes.push_back("member of the span");
        return v;
    }
    const int n1 = u.domDim(), n2 = u.codDim(), k = u.dim();
    if (k == 0) {
        // Ref(0) = 0
        v.member = t.isZero();
        if (!v.member) {
            // any vector not killed by t witnesses
            for (int j = 0; j < n1; ++j) {
                Vec x(n1);
                x[j] = Scalar(1);
                Mat xm(n1, 1);
                xm.at(j, 0) = Scalar(1);
                if (!(t * xm).isZero()) {
                    v.witness = x;
                    break;
                }
            }
        }
        return v;
    }
    if (samples <= 0) samples = 2;

    // columns of S0 are B_l x, S1 appends Tx; entries linear in x
    std::vector<std::vector<Poly>> s0(n2, std::vector<Poly>(k, Poly(n1)));
    std::vector<std::vector<Poly>> s1(n2, std::vector<Poly>(k + 1, Poly(n1)));
    for (int l = 0; l < k; ++l) {
        const Mat& b = u.basis()[l];
        for (int i = 0; i < n2; ++i) {
            Poly e(n1);
            for (int j = 0; j < n1; ++j)
                if (!b.at(i, j).isZero())
                    e = e + Poly::constant(n1, b.at(i, j)) * Poly::variable(n1, j);
            s0[i][l] = e;
            s1[i][l] = std::move(e);
        }
    }
    for (int i = 0; i < n2; ++i) {
        Poly e(n1);
        for (int j = 0; j < n1; ++j)
            if (!t.at(i, j).isZero())
                e = e + Poly::constant(n1, t.at(i, j)) * Poly::variable(n1, j);
        s1[i][k] = std::move(e);
    }

    RefAnalysis analysis(u, t, seed, samples);
    analysis.analyze(s0, s1, {}, std::vector<bool>(n1, true), 0);
    return analysis.verdict;
}

OpSpace refHullPattern(const OpSpace& u, const std::vector<Mat>& leftFrame,
                       const std::vector<Mat>& rightFrame) {
    const int n1 = u.domDim(), n2 = u.codDim();
    auto validateFrame = [](const std::vector<Mat>& fr, int n, const char* side) {
        Mat sum = Mat::zero(n, n);
        for (const auto& e : fr) {
            requireProjection(e, std::string("refHullPattern ") + side + " frame");
            if (e.rows() != n) throw InputError("refHullPattern: frame dimension mismatch");
            sum = sum + e;
        }
        if (sum != Mat::identity(n))
            throw InputError(std::string("refHullPattern: ") + side + " frame does not sum to I");
    };
    validateFrame(leftFrame, n2, "left");
    validateFrame(rightFrame, n1, "right");

    OpAlgebra leftDiag = OpAlgebra::fromSpaceUnchecked(OpSpace::span(n2, n2, leftFrame));
    OpAlgebra rightDiag = OpAlgebra::fromSpaceUnchecked(OpSpace::span(n1, n1, rightFrame));
    if (!isBimoduleOver(u, leftDiag, rightDiag))
        throw InputError("refHullPattern: space is not a bimodule over the frame diagonals");

    bool masaFrames = true;
    for (const auto& e : leftFrame)
        if (!(e.trace() == Scalar(1))) masaFrames = false;
    for (const auto& e : rightFrame)
        if (!(e.trace() == Scalar(1))) masaFrames = false;

    std::vector<Mat> hull;
    for (const auto& f : leftFrame)
        for (const auto& e : rightFrame) {
            // block component f u e
            std::vector<Mat> block;
            for (const auto& b : u.basis()) {
                Mat c = f * b * e;
                if (!c.isZero()) block.push_back(std::move(c));
            }
            if (block.empty()) continue;
            OpSpace blockSpan = OpSpace::span(n1, n2, block);
            const int fullDim = rank(f) * rank(e);
            if (blockSpan.dim() == fullDim) {
                for (const auto& b : blockSpan.basis()) hull.push_back(b);
            } else if (masaFrames) {
                // rank-one frames: inflate the proper block to the full block
                for (int i = 0; i < n2; ++i)
                    for (int j = 0; j < n1; ++j) {
                        Mat unit = f * Mat::unit(n2, n1, i, j) * e;
                        if (!unit.isZero()) hull.push_back(std::move(unit));
                    }
            } else {
                throw InputError("refHullPattern: proper block over higher-rank atoms (unsupported class)");
            }
        }
    return OpSpace::span(n1, n2, hull);
}

bool isReflexiveAlgebra(const OpAlgebra& a, const std::vector<Mat>& frame) {
    if (!a.unital) throw InputError("isReflexiveAlgebra: algebra is not unital");
    const int n = a.space.domDim();
    // the frame-relative lattice is the whole invariant lattice only when the
    // algebra contains every full frame block; otherwise refuse
    for (const auto& e : frame) {
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                Mat blockUnit = e * Mat::unit(n, n, i, j) * e;
                if (!blockUnit.isZero() && !a.space.contains(blockUnit))
                    throw InputError("isReflexiveAlgebra: frame too coarse (block diagonal not inside the algebra)");
            }
    }
    Csl lat = latOfAlgebra(a, frame);
    return algOfLattice(lat) == a;
}

} // namespace opalg
