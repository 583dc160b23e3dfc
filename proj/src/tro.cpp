#include "opalg/tro.hpp"

#include "opalg/rng.hpp"

#include <algorithm>
#include <set>

namespace opalg {

namespace {

std::string shapeOf(const OpSpace& s) {
    return "B(" + std::to_string(s.domDim()) + "," + std::to_string(s.codDim()) + ")";
}

// {T : T X_k = Y_k T for all k}, T : H_from -> H_to.
OpSpace intertwinerSpace(const std::vector<Mat>& xs, const std::vector<Mat>& ys,
                         int fromDim, int toDim) {
    if (xs.size() != ys.size()) throw InternalError("intertwinerSpace: list size mismatch");
    std::vector<Vec> rows;
    for (size_t k = 0; k < xs.size(); ++k) {
        const Mat& x = xs[k];
        const Mat& y = ys[k];
        for (int i = 0; i < toDim; ++i)
            for (int j = 0; j < fromDim; ++j) {
                Vec row(static_cast<size_t>(toDim) * fromDim);
                bool nonzero = false;
                for (int v = 0; v < fromDim; ++v) {
                    const Scalar& c = x.at(v, j);
                    if (c.isZero()) continue;
                    row[static_cast<size_t>(i) * fromDim + v] += c;
                    nonzero = true;
                }
                for (int u = 0; u < toDim; ++u) {
                    const Scalar& c = y.at(i, u);
                    if (c.isZero()) continue;
                    row[static_cast<size_t>(u) * fromDim + j] -= c;
                    nonzero = true;
                }
                if (nonzero) rows.push_back(std::move(row));
            }
    }
    VecSubspace sol = rows.empty() ? VecSubspace::full(toDim * fromDim) : [&] {
        Mat m(static_cast<int>(rows.size()), toDim * fromDim);
        for (int i = 0; i < m.rows(); ++i)
            for (int j = 0; j < m.cols(); ++j) m.at(i, j) = rows[i][j];
        return kernel(m);
    }();
    std::vector<Mat> basis;
    basis.reserve(sol.dim());
    for (const auto& row : sol.basis()) basis.push_back(Mat::unvec(row, toDim, fromDim));
    return OpSpace::span(fromDim, toDim, basis);
}

// {T : L_k T R_k = 0 for all k}, T : H_from -> H_to.
OpSpace sandwichZeroSpace(const std::vector<std::pair<Mat, Mat>>& constraints,
                          int fromDim, int toDim) {
    std::vector<Vec> rows;
    for (const auto& [l, r] : constraints) {
        for (int i = 0; i < l.rows(); ++i)
            for (int j = 0; j < r.cols(); ++j) {
                Vec row(static_cast<size_t>(toDim) * fromDim);
                bool nonzero = false;
                for (int u = 0; u < toDim; ++u) {
                    const Scalar& c1 = l.at(i, u);
                    if (c1.isZero()) continue;
                    for (int v = 0; v < fromDim; ++v) {
                        const Scalar& c2 = r.at(v, j);
                        if (c2.isZero()) continue;
                        row[static_cast<size_t>(u) * fromDim + v] += c1 * c2;
                        nonzero = true;
                    }
                }
                if (nonzero) rows.push_back(std::move(row));
            }
    }
    VecSubspace sol = rows.empty() ? VecSubspace::full(toDim * fromDim) : [&] {
        Mat m(static_cast<int>(rows.size()), toDim * fromDim);
        for (int i = 0; i < m.rows(); ++i)
            for (int j = 0; j < m.cols(); ++j) m.at(i, j) = rows[i][j];
        return kernel(m);
    }();
    std::vector<Mat> basis;
    basis.reserve(sol.dim());
    for (const auto& row : sol.basis()) basis.push_back(Mat::unvec(row, toDim, fromDim));
    return OpSpace::span(fromDim, toDim, basis);
}

Mat embedBlock(const Mat& m, int bigRows, int bigCols, int rowOff, int colOff) {
    Mat r = Mat::zero(bigRows, bigCols);
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j)
            if (!m.at(i, j).isZero()) r.at(rowOff + i, colOff + j) = m.at(i, j);
    return r;
}

bool verifyStarIsoInto(StarIso& iso, CheckReport& rep, const std::string& prefix) {
    const OpSpace& src = iso.source.space;
    bool ok = true;
    // bijectivity: images independent and spanning the target
    OpSpace imageSpan = OpSpace::span(iso.target.space.domDim(), iso.target.space.codDim(), iso.images);
    bool bij = imageSpan.dim() == src.dim() && imageSpan == iso.target.space;
    rep.add(prefix + "bijective", bij);
    ok = ok && bij;

    bool mult = true;
    for (const auto& x : src.basis())
        for (const auto& y : src.basis()) {
            if (iso.apply(x * y) != iso.apply(x) * iso.apply(y)) { mult = false; break; }
        }
    rep.add(prefix + "multiplicative", mult);
    ok = ok && mult;

    bool adj = true;
    for (const auto& x : src.basis())
        if (iso.apply(x.adjoint()) != iso.apply(x).adjoint()) { adj = false; break; }
    rep.add(prefix + "adjoint_preserving", adj);
    ok = ok && adj;

    if (iso.source.unital) {
        bool unit = iso.apply(Mat::identity(src.domDim())) == Mat::identity(iso.target.space.domDim());
        rep.add(prefix + "unit_to_unit", unit);
        ok = ok && unit;
    }
    return ok;
}

} // namespace

Mat StarIso::apply(const Mat& x) const {
    auto coords = source.space.coordsOf(x);
    if (!coords) throw InputError("StarIso::apply: operator not in the source algebra");
    Mat r = Mat::zero(target.space.codDim(), target.space.domDim());
    for (size_t i = 0; i < coords->size(); ++i) {
        if ((*coords)[i].isZero()) continue;
        r = r + (*coords)[i] * images[i];
    }
    return r;
}

bool isTroSpace(const OpSpace& x) {
    OpSpace mmsm = productSpan(productSpan(x, adjointSpace(x)), x);
    return x.contains(mmsm);
}

Tro verifyTro(const OpSpace& x) {
    if (!isTroSpace(x)) {
        // name an offending triple for the report
        for (int i = 0; i < x.dim(); ++i)
            for (int j = 0; j < x.dim(); ++j)
                for (int k = 0; k < x.dim(); ++k) {
                    Mat t = x.basis()[i] * x.basis()[j].adjoint() * x.basis()[k];
                    if (!x.contains(t))
                        throw InputError("not a TRO: basis triple (" + std::to_string(i) + "," +
                                         std::to_string(j) + "," + std::to_string(k) +
                                         ") leaves the span");
                }
        throw InternalError("verifyTro: span check failed but no offending triple found");
    }
    return Tro{x, isEssential(x)};
}

EssentializeResult essentialize(const OpSpace& n) {
    const int n1 = n.domDim(), n2 = n.codDim();
    // joint kernel of the basis and of the adjoint basis
    Mat stacked(n.dim() * n2, n1);
    for (int k = 0; k < n.dim(); ++k)
        for (int i = 0; i < n2; ++i)
            for (int j = 0; j < n1; ++j) stacked.at(k * n2 + i, j) = n.basis()[k].at(i, j);
    Mat p = orthoProject(n.dim() == 0 ? VecSubspace::full(n1) : kernel(stacked));

    Mat stackedAdj(n.dim() * n1, n2);
    for (int k = 0; k < n.dim(); ++k) {
        Mat adj = n.basis()[k].adjoint();
        for (int i = 0; i < n1; ++i)
            for (int j = 0; j < n2; ++j) stackedAdj.at(k * n1 + i, j) = adj.at(i, j);
    }
    Mat q = orthoProject(n.dim() == 0 ? VecSubspace::full(n2) : kernel(stackedAdj));

    std::vector<Mat> gens = n.basis();
    for (int i = 0; i < n2; ++i)
        for (int j = 0; j < n1; ++j) {
            Mat g = q * Mat::unit(n2, n1, i, j) * p;
            if (!g.isZero()) gens.push_back(std::move(g));
        }
    EssentializeResult res{OpSpace::span(n1, n2, gens), false, p, q, ""};
    res.essential = isEssential(res.space);
    if (!res.essential) {
        res.note = "construction cannot be essential: exactly one of the joint kernels is nonzero";
    }
    return res;
}

WitnessResult verifyWitness(const OpAlgebra& a, const OpAlgebra& b, const OpSpace& m,
                            const Csl* latA, const Csl* latB) {
    const int n1 = a.space.domDim(), n2 = b.space.domDim();
    if (m.domDim() != n1 || m.codDim() != n2)
        throw InputError("verifyWitness: TRO shape " + shapeOf(m) + " does not match algebras");
    WitnessResult res;
    CheckReport& rep = res.report;

    bool troOk = isTroSpace(m);
    rep.add("tro_axiom", troOk);
    EssentialVerdict ess = essentialVerdict(m);
    rep.add("tro_essential", ess.essential);

    OpSpace mstar = adjointSpace(m);
    OpSpace mbm = productSpan(mstar, productSpan(b.space, m));
    OpSpace mam = productSpan(m, productSpan(a.space, mstar));
    rep.add("mstar_b_m_inside_a", a.space.contains(mbm));
    rep.add("m_a_mstar_inside_b", b.space.contains(mam));
    rep.add("a_equals_span_mstar_b_m", mbm == a.space);
    rep.add("b_equals_span_m_a_mstar", mam == b.space);

    OpAlgebra da = diagonal(a);
    OpAlgebra db = diagonal(b);
    OpSpace mdbm = productSpan(mstar, productSpan(db.space, m));
    OpSpace mdam = productSpan(m, productSpan(da.space, mstar));
    rep.add("diag_a_equals_span_mstar_diag_b_m", mdbm == da.space);
    rep.add("diag_b_equals_span_m_diag_a_mstar", mdam == db.space);

    if (latA && latB) {
        ErdosMap chi{m, false};
        bool transport = true;
        std::set<std::vector<Scalar>> images;
        for (const auto& l : latA->members()) {
            Mat img = evalMap(chi, l);
            if (latB->indexOfMember(img) < 0) { transport = false; break; }
            images.insert(img.vec());
        }
        transport = transport && images.size() == static_cast<size_t>(latB->memberCount());
        rep.add("map_m_carries_lat_a_onto_lat_b", transport);
    }

    if (rep.allPass())
        res.witness = TroWitness{a, b, Tro{m, ess.essential}};
    return res;
}

StarIsoResult thetaFromWitness(const Tro& m, const OpAlgebra& aPrime, const OpAlgebra& bPrime,
                               const std::vector<Mat>& frameProjections) {
    if (!m.essential) throw InputError("thetaFromWitness: TRO must be essential");
    const int n1 = m.space.domDim(), n2 = m.space.codDim();
    OpAlgebra expectA = commutant(productSpan(adjointSpace(m.space), m.space));
    OpAlgebra expectB = commutant(productSpan(m.space, adjointSpace(m.space)));
    if (aPrime != expectA)
        throw InputError("thetaFromWitness: aPrime is not the commutant of span(M*M)");
    if (bPrime != expectB)
        throw InputError("thetaFromWitness: bPrime is not the commutant of span(M M*)");

    StarIsoResult res;
    // One joint solve: S M_k = M_k T for all basis T of aPrime, unknown S per T.
    const int unknowns = n2 * n2;
    const int eqRows = m.space.dim() * n2 * n1;
    Mat coeff(eqRows, unknowns);
    Mat rhs(eqRows, aPrime.space.dim());
    int row = 0;
    for (int k = 0; k < m.space.dim(); ++k) {
        const Mat& mk = m.space.basis()[k];
        std::vector<Mat> prods;
        prods.reserve(aPrime.space.dim());
        for (int t = 0; t < aPrime.space.dim(); ++t) prods.push_back(mk * aPrime.space.basis()[t]);
        for (int i = 0; i < n2; ++i)
            for (int j = 0; j < n1; ++j) {
                for (int u = 0; u < n2; ++u) {
                    const Scalar& c = mk.at(u, j);
                    if (!c.isZero()) coeff.at(row, i * n2 + u) = c;
                }
                for (int t = 0; t < aPrime.space.dim(); ++t) rhs.at(row, t) = prods[t].at(i, j);
                ++row;
            }
    }
    // uniqueness holds because M is essential (S M = 0 forces S = 0)
    Mat sols = solveUnique(coeff, rhs);
    std::vector<Mat> images;
    images.reserve(aPrime.space.dim());
    for (int t = 0; t < aPrime.space.dim(); ++t) {
        Vec v(unknowns);
        for (int i = 0; i < unknowns; ++i) v[i] = sols.at(i, t);
        images.push_back(Mat::unvec(v, n2, n2));
    }
    StarIso iso{aPrime, bPrime, std::move(images)};
    bool ok = verifyStarIsoInto(iso, res.report, "theta_");

    if (!frameProjections.empty()) {
        ErdosMap chi{m.space, false};
        bool extends = true;
        for (const auto& p : frameProjections) {
            requireProjection(p, "thetaFromWitness frame");
            if (!aPrime.space.contains(p))
                throw InputError("thetaFromWitness: frame projection outside aPrime");
            if (iso.apply(p) != evalMap(chi, p)) { extends = false; break; }
        }
        res.report.add("theta_extends_map_on_frame", extends);
        ok = ok && extends;
    }
    if (ok) res.iso = std::move(iso);
    return res;
}

LinkingResult linkingAlgebra(const Tro& m) {
    OpAlgebra a = OpAlgebra::fromSpaceUnchecked(productSpan(adjointSpace(m.space), m.space));
    OpAlgebra b = OpAlgebra::fromSpaceUnchecked(productSpan(m.space, adjointSpace(m.space)));
    return linkingAlgebra(a, b, m);
}

LinkingResult linkingAlgebra(const OpAlgebra& a, const OpAlgebra& b, const Tro& m) {
    const int n1 = m.space.domDim(), n2 = m.space.codDim();
    if (a.space != productSpan(adjointSpace(m.space), m.space))
        throw InputError("linkingAlgebra: a must be span(M*M)");
    if (b.space != productSpan(m.space, adjointSpace(m.space)))
        throw InputError("linkingAlgebra: b must be span(M M*)");
    const int n = n1 + n2;
    std::vector<Mat> blocks;
    for (const auto& x : a.space.basis()) blocks.push_back(embedBlock(x, n, n, 0, 0));
    for (const auto& x : m.space.basis()) {
        blocks.push_back(embedBlock(x.adjoint(), n, n, 0, n1)); // M* upper right
        blocks.push_back(embedBlock(x, n, n, n1, 0));           // M lower left
    }
    for (const auto& x : b.space.basis()) blocks.push_back(embedBlock(x, n, n, n1, n1));
    OpSpace cSpace = OpSpace::span(n, n, blocks);

    LinkingResult res{OpAlgebra::fromSpaceUnchecked(cSpace), {}};
    res.report.add("linking_closed_under_products", cSpace.isClosedUnderProducts());

    OpAlgebra aPrime = commutant(a.space);
    OpAlgebra bPrime = commutant(b.space);
    StarIsoResult theta = thetaFromWitness(m, aPrime, bPrime);
    res.report.merge(theta.report, "linking_");
    if (theta.ok()) {
        std::vector<Mat> graph;
        graph.reserve(aPrime.space.dim());
        for (int t = 0; t < aPrime.space.dim(); ++t) {
            Mat g = embedBlock(aPrime.space.basis()[t], n, n, 0, 0) +
                    embedBlock(theta.iso->images[t], n, n, n1, n1);
            graph.push_back(std::move(g));
        }
        OpAlgebra commOfGraph = commutant(OpSpace::span(n, n, graph));
        res.report.add("linking_equals_commutant_of_graph", commOfGraph.space == cSpace);
    }
    return res;
}

TroWitness reverseWitness(const TroWitness& w) {
    Tro rev{adjointSpace(w.m.space), w.m.essential};
    return TroWitness{w.b, w.a, rev};
}

WitnessResult composeWitnesses(const TroWitness& w1, const TroWitness& w2) {
    if (w1.a != w2.a)
        throw InputError("composeWitnesses: the middle algebras do not coincide");
    const OpAlgebra& algB = w1.a;
    const OpAlgebra& algA = w1.b;
    const OpAlgebra& algC = w2.b;
    const OpSpace& mSpace = w1.m.space; // H_B -> H_A
    const OpSpace& nSpace = w2.m.space; // H_B -> H_C
    const int nB = algB.space.domDim();
    const int nA = algA.space.domDim();
    const int nC = algC.space.domDim();

    WitnessResult res;
    CheckReport& rep = res.report;

    OpAlgebra mPrime = commutant(productSpan(adjointSpace(mSpace), mSpace));
    OpAlgebra nPrime = commutant(productSpan(adjointSpace(nSpace), nSpace));
    OpAlgebra r = OpAlgebra::fromSpaceUnchecked(mPrime.space.intersect(nPrime.space));

    StarIsoResult thetaM = thetaFromWitness(w1.m, mPrime,
                                            commutant(productSpan(mSpace, adjointSpace(mSpace))));
    StarIsoResult thetaN = thetaFromWitness(w2.m, nPrime,
                                            commutant(productSpan(nSpace, adjointSpace(nSpace))));
    rep.add("theta_m_built", thetaM.ok());
    rep.add("theta_n_built", thetaN.ok());
    if (!thetaM.ok() || !thetaN.ok()) return res;

    std::vector<Mat> imagesM, imagesN;
    for (const auto& x : r.space.basis()) {
        imagesM.push_back(thetaM.iso->apply(x));
        imagesN.push_back(thetaN.iso->apply(x));
    }
    OpSpace z = intertwinerSpace(r.space.basis(), imagesM, nB, nA);
    OpSpace y = intertwinerSpace(r.space.basis(), imagesN, nB, nC);

    rep.add("z_contains_m", z.contains(mSpace));
    rep.add("y_contains_n", y.contains(nSpace));
    rep.add("z_is_tro", isTroSpace(z));
    rep.add("y_is_tro", isTroSpace(y));
    rep.add("z_essential", isEssential(z));
    rep.add("y_essential", isEssential(y));

    OpSpace zstarz = productSpan(adjointSpace(z), z);
    OpSpace ystary = productSpan(adjointSpace(y), y);
    OpAlgebra rPrime = commutant(r.space);
    rep.add("z_y_generate_equal_von_neumann_algebra", zstarz == ystary);
    rep.add("generated_algebra_is_commutant_of_r", zstarz == rPrime.space);

    WitnessResult wz = verifyWitness(algB, algA, z);
    rep.merge(wz.report, "b_a_via_z_");
    WitnessResult wy = verifyWitness(algB, algC, y);
    rep.merge(wy.report, "b_c_via_y_");

    OpSpace l = productSpan(y, adjointSpace(z)); // H_A -> H_C
    WitnessResult fin = verifyWitness(algA, algC, l);
    rep.merge(fin.report, "a_c_via_yzstar_");
    if (rep.allPass()) res.witness = fin.witness;
    return res;
}

EnlargeResult enlargeWitness(const TroWitness& w) {
    if (!w.a.unital || !w.b.unital)
        throw InputError("enlargeWitness: algebras must be unital");
    EnlargeResult res;
    CheckReport& rep = res.report;
    const int n1 = w.a.space.domDim(), n2 = w.b.space.domDim();

    OpAlgebra da = diagonal(w.a);
    OpAlgebra db = diagonal(w.b);
    OpSpace mstarm = productSpan(adjointSpace(w.m.space), w.m.space);
    rep.add("mstar_m_inside_diag_a", da.space.contains(mstarm));

    OpAlgebra aPrime = commutant(mstarm);
    OpAlgebra bPrime = commutant(productSpan(w.m.space, adjointSpace(w.m.space)));
    StarIsoResult theta = thetaFromWitness(w.m, aPrime, bPrime);
    rep.add("theta_built", theta.ok());
    if (!theta.ok()) return res;

    OpAlgebra r = commutant(da.space);
    rep.add("diag_a_commutant_inside_mstar_m_commutant", aPrime.space.contains(r.space));

    std::vector<Mat> images;
    images.reserve(r.space.dim());
    for (const auto& x : r.space.basis()) images.push_back(theta.iso->apply(x));
    OpSpace n = intertwinerSpace(r.space.basis(), images, n1, n2);

    rep.add("n_contains_m", n.contains(w.m.space));
    rep.add("n_is_tro", isTroSpace(n));
    EssentialVerdict ess = essentialVerdict(n);
    rep.add("n_essential", ess.essential);
    rep.add("diag_a_equals_span_nstar_n", productSpan(adjointSpace(n), n) == da.space);
    rep.add("diag_b_equals_span_n_nstar", productSpan(n, adjointSpace(n)) == db.space);

    OpSpace thetaR = OpSpace::span(n2, n2, images);
    rep.add("theta_carries_diag_a_commutant_onto_diag_b_commutant",
            thetaR == commutant(db.space).space);

    WitnessResult wr = verifyWitness(w.a, w.b, n);
    rep.merge(wr.report, "a_b_via_n_");
    if (rep.allPass()) res.witness = wr.witness;
    return res;
}

UnitalizeResult unitalizeContext(const OpAlgebra& a, const OpAlgebra& b, const Tro& m) {
    if (!m.essential) throw InputError("unitalizeContext: TRO must be essential");
    UnitalizeResult res;
    CheckReport& rep = res.report;

    OpSpace mstarm = productSpan(adjointSpace(m.space), m.space);
    OpSpace mmstar = productSpan(m.space, adjointSpace(m.space));
    rep.add("a_mstar_m_inside_a", a.space.contains(productSpan(a.space, mstarm)));
    rep.add("mstar_m_a_inside_a", a.space.contains(productSpan(mstarm, a.space)));
    rep.add("b_m_mstar_inside_b", b.space.contains(productSpan(b.space, mmstar)));
    rep.add("m_mstar_b_inside_b", b.space.contains(productSpan(mmstar, b.space)));

    OpSpace aMSpace = a.space.sum(mstarm);
    OpSpace bMSpace = b.space.sum(mmstar);
    rep.add("a_m_closed_under_products", aMSpace.isClosedUnderProducts());
    rep.add("b_m_closed_under_products", bMSpace.isClosedUnderProducts());
    res.aM = OpAlgebra::fromSpaceUnchecked(aMSpace);
    res.bM = OpAlgebra::fromSpaceUnchecked(bMSpace);
    rep.add("a_m_unital", res.aM.unital);
    rep.add("b_m_unital", res.bM.unital);

    rep.add("a_ideal_of_a_m", isIdealIn(a.space, res.aM));
    rep.add("b_ideal_of_b_m", isIdealIn(b.space, res.bM));

    WitnessResult wM = verifyWitness(res.aM, res.bM, m.space);
    rep.merge(wM.report, "a_m_b_m_via_m_");
    if (!wM.ok()) return res;

    EnlargeResult el = enlargeWitness(*wM.witness);
    rep.merge(el.report, "enlarge_");
    if (!el.ok()) return res;
    res.enlarged = el.witness->m;

    WitnessResult wN = verifyWitness(a, b, el.witness->m.space);
    rep.merge(wN.report, "a_b_via_n_");

    rep.add("a_n_equals_a_m",
            a.space.sum(productSpan(adjointSpace(el.witness->m.space), el.witness->m.space)) == aMSpace);
    rep.add("b_n_equals_b_m",
            b.space.sum(productSpan(el.witness->m.space, adjointSpace(el.witness->m.space))) == bMSpace);
    if (!rep.allPass()) res.enlarged.reset();
    if (rep.allPass()) res.witness = wM.witness;
    return res;
}

TransportResult transportBimodule(const TroWitness& w, const OpSpace& j) {
    if (j.domDim() != w.a.space.domDim() || j.codDim() != w.a.space.codDim())
        throw InputError("transportBimodule: bimodule must act on the space of A");
    if (!j.contains(productSpan(w.a.space, j)) || !j.contains(productSpan(j, w.a.space)))
        throw InputError("transportBimodule: J is not an A-bimodule");
    TransportResult res{productSpan(productSpan(w.m.space, j), adjointSpace(w.m.space)), {}};
    CheckReport& rep = res.report;
    rep.add("image_is_b_bimodule",
            res.image.contains(productSpan(w.b.space, res.image)) &&
                res.image.contains(productSpan(res.image, w.b.space)));
    OpSpace roundTrip = productSpan(productSpan(adjointSpace(w.m.space), res.image), w.m.space);
    rep.add("round_trip_recovers_j", roundTrip == j);
    if (isIdealIn(j, w.a)) rep.add("ideal_maps_to_ideal", isIdealIn(res.image, w.b));
    return res;
}

DecideResult decideTroEquivalenceCSL(const Csl& s1, const Csl& s2) {
    DecideResult res;
    IsoSearchResult search = findLatticeIso(s1, s2);
    if (!search.iso) {
        res.cert = search.cert;
        res.report.add("lattice_isomorphism_exists", false);
        return res;
    }
    res.iso = search.iso;
    res.report.add("lattice_isomorphism_exists", true);

    OpAlgebra a = algOfLattice(s1);
    OpAlgebra b = algOfLattice(s2);

    // Delta(phi) = {T : T L = phi(L) T}; join-irreducible members generate the
    // lattice under joins and the intertwining relation propagates to joins.
    std::vector<Mat> xs, ys;
    for (int mi : s1.joinIrreducibles()) {
        xs.push_back(s1.members()[mi]);
        ys.push_back(search.iso->applyToMember(mi));
    }
    OpSpace deltaPhi = intertwinerSpace(xs, ys, s1.dim(), s2.dim());

    WitnessResult wr = verifyWitness(a, b, deltaPhi, &s1, &s2);
    res.report.merge(wr.report, "delta_phi_");
    if (!wr.ok())
        throw InternalError("decideTroEquivalenceCSL: Delta(phi) witness failed to verify: " +
                            wr.report.firstFailure());
    res.witness = wr.witness;
    res.equivalent = true;
    return res;
}

Thm57Result checkThm57Conditions(const Csl& s1, const Csl& s2, const LatticeIso& phi) {
    if (phi.source != s1 || phi.target != s2)
        throw InputError("checkThm57Conditions: iso does not connect the given lattices");
    const int n1 = s1.dim(), n2 = s2.dim();
    const int n = n1 + n2;
    Thm57Result res;

    std::vector<Mat> pairs;
    pairs.reserve(s1.memberCount());
    for (int mi = 0; mi < s1.memberCount(); ++mi)
        pairs.push_back(embedBlock(s1.members()[mi], n, n, 0, 0) +
                        embedBlock(phi.applyToMember(mi), n, n, n1, n1));
    OpAlgebra graphBicomm = bicommutant(OpSpace::span(n, n, pairs));

    OpAlgebra a0bicomm = bicommutant(OpSpace::span(n1, n1, s1.members()));
    OpAlgebra b0bicomm = bicommutant(OpSpace::span(n2, n2, s2.members()));

    std::vector<Mat> cornerB, cornerA;
    for (const auto& x : b0bicomm.space.basis()) cornerB.push_back(embedBlock(x, n, n, n1, n1));
    for (const auto& x : a0bicomm.space.basis()) cornerA.push_back(embedBlock(x, n, n, 0, 0));

    OpSpace interB = graphBicomm.space.intersect(OpSpace::span(n, n, cornerB));
    OpSpace interA = graphBicomm.space.intersect(OpSpace::span(n, n, cornerA));
    res.dimCornerB = interB.dim();
    res.dimCornerA = interA.dim();
    res.report.add("graph_bicommutant_meets_corner_b_trivially", interB.dim() == 0,
                   "dim = " + std::to_string(interB.dim()));
    res.report.add("graph_bicommutant_meets_corner_a_trivially", interA.dim() == 0,
                   "dim = " + std::to_string(interA.dim()));
    res.bothIntersectionsZero = interB.dim() == 0 && interA.dim() == 0;
    return res;
}

namespace {

// coordinates of every member in the atom basis (0/1 vectors)
Vec atomCoordsOfMember(const Csl& s, int memberIdx) {
    Vec v(s.atomCount());
    for (int a = 0; a < s.atomCount(); ++a)
        if (s.memberSets()[memberIdx] & (1ull << a)) v[a] = Scalar(1);
    return v;
}

// eigenvalue list of an element of span(atoms), indexed by atom: x a = c a
// gives c = trace(x a) / rank(a); the reconstruction is verified exactly
Vec atomValues(const std::vector<Mat>& atoms, const Mat& x) {
    Vec v(atoms.size());
    Mat recon = Mat::zero(x.rows(), x.cols());
    for (size_t a = 0; a < atoms.size(); ++a) {
        Scalar tr = (x * atoms[a]).trace();
        v[a] = tr * atoms[a].trace().inverse();
        if (!v[a].isZero()) recon = recon + v[a] * atoms[a];
    }
    if (recon != x) throw InternalError("atomValues: element outside the atom span");
    return v;
}

} // namespace

StarIsoResult extendLatticeIsoCStar(const LatticeIso& phi) {
    const Csl& s1 = phi.source;
    const Csl& s2 = phi.target;
    StarIsoResult res;
    CheckReport& rep = res.report;

    OpAlgebra src = OpAlgebra::fromSpaceUnchecked(OpSpace::span(s1.dim(), s1.dim(), s1.members()));
    OpAlgebra tgt = OpAlgebra::fromSpaceUnchecked(OpSpace::span(s2.dim(), s2.dim(), s2.members()));

    // maximal linearly independent member subset, greedy in canonical order
    std::vector<int> chosen;
    {
        std::vector<Vec> rowsSoFar;
        for (int mi = 0; mi < s1.memberCount(); ++mi) {
            Vec v = atomCoordsOfMember(s1, mi);
            std::vector<Vec> candidate = rowsSoFar;
            candidate.push_back(v);
            if (static_cast<int>(rref(candidate).size()) > static_cast<int>(rowsSoFar.size())) {
                rowsSoFar = candidate;
                chosen.push_back(mi);
            }
        }
    }
    rep.add("member_basis_spans", static_cast<int>(chosen.size()) == src.space.dim());

    // expansion of an atom-coordinate vector in the chosen member basis
    const int k = s1.atomCount();
    Mat memberCols(k, static_cast<int>(chosen.size()));
    for (size_t c = 0; c < chosen.size(); ++c) {
        Vec col = atomCoordsOfMember(s1, chosen[c]);
        for (int r = 0; r < k; ++r) memberCols.at(r, static_cast<int>(c)) = col[r];
    }
    auto expandInMembers = [&](const Vec& atomCoords) {
        Mat rhs(k, 1);
        for (int r = 0; r < k; ++r) rhs.at(r, 0) = atomCoords[r];
        Mat y = solveUnique(memberCols, rhs);
        Vec out(chosen.size());
        for (size_t c = 0; c < chosen.size(); ++c) out[c] = y.at(static_cast<int>(c), 0);
        return out;
    };

    // rho on the canonical basis of span(S1)
    std::vector<Mat> images;
    images.reserve(src.space.dim());
    for (const auto& e : src.space.basis()) {
        Vec atomCoords = atomValues(s1.atoms(), e);
        Vec y = expandInMembers(atomCoords);
        Mat img = Mat::zero(s2.dim(), s2.dim());
        for (size_t c = 0; c < chosen.size(); ++c)
            if (!y[c].isZero()) img = img + y[c] * phi.applyToMember(chosen[c]);
        images.push_back(std::move(img));
    }
    StarIso iso{src, tgt, std::move(images)};

    // well-definedness: every member's expansion lands on its lattice image
    bool wellDefined = true;
    for (int mi = 0; mi < s1.memberCount(); ++mi)
        if (iso.apply(s1.members()[mi]) != phi.applyToMember(mi)) { wellDefined = false; break; }
    rep.add("well_defined_on_all_members", wellDefined);

    bool multMembers = true;
    for (int i = 0; i < s1.memberCount() && multMembers; ++i)
        for (int j = 0; j < s1.memberCount(); ++j) {
            Mat prod = s1.members()[i] * s1.members()[j];
            if (iso.apply(prod) != iso.apply(s1.members()[i]) * iso.apply(s1.members()[j])) {
                multMembers = false;
                break;
            }
        }
    rep.add("multiplicative_on_member_pairs", multMembers);

    bool starOk = verifyStarIsoInto(iso, rep, "rho_");

    // exact spectrum containment via the atomic decomposition
    bool spectra = true;
    std::vector<Mat> testSet = s1.members();
    {
        Mat combo1 = Mat::zero(s1.dim(), s1.dim());
        Mat combo2 = Mat::zero(s1.dim(), s1.dim());
        for (size_t c = 0; c < chosen.size(); ++c) {
            combo1 = combo1 + Scalar(static_cast<long>(c + 2)) * s1.members()[chosen[c]];
            combo2 = combo2 + Scalar(Rat(1), Rat(static_cast<long>(c + 1))) * s1.members()[chosen[c]];
        }
        testSet.push_back(combo1);
        testSet.push_back(combo2);
    }
    for (const auto& t : testSet) {
        Vec valsSrc = atomValues(s1.atoms(), t);
        Vec valsTgt = atomValues(s2.atoms(), iso.apply(t));
        std::set<std::pair<std::string, std::string>> specSrc, specTgt;
        for (const auto& v : valsSrc) specSrc.insert({v.re.get_str(), v.im.get_str()});
        for (const auto& v : valsTgt) specTgt.insert({v.re.get_str(), v.im.get_str()});
        for (const auto& v : specTgt)
            if (!specSrc.count(v)) { spectra = false; break; }
        if (!spectra) break;
    }
    rep.add("spectrum_contained", spectra);

    if (rep.allPass() && starOk) res.iso = std::move(iso);
    return res;
}

StarIsoResult extendAtomIso(const LatticeIso& phi) {
    const Csl& s1 = phi.source;
    const Csl& s2 = phi.target;
    StarIsoResult res;
    CheckReport& rep = res.report;

    bool formulaMatches = true;
    for (int a = 0; a < s1.atomCount(); ++a) {
        Mat viaFormula = atomIsoFormula(phi, a);
        if (viaFormula != s2.atoms()[phi.atomMap[a]]) { formulaMatches = false; break; }
    }
    rep.add("atom_formula_matches_atom_map", formulaMatches);

    OpAlgebra src = OpAlgebra::fromSpaceUnchecked(OpSpace::span(s1.dim(), s1.dim(), s1.members()));
    OpAlgebra tgt = OpAlgebra::fromSpaceUnchecked(OpSpace::span(s2.dim(), s2.dim(), s2.members()));

    std::vector<Mat> images;
    images.reserve(src.space.dim());
    for (const auto& e : src.space.basis()) {
        Vec atomCoords = atomValues(s1.atoms(), e);
        Mat img = Mat::zero(s2.dim(), s2.dim());
        for (int a = 0; a < s1.atomCount(); ++a)
            if (!atomCoords[a].isZero()) img = img + atomCoords[a] * s2.atoms()[phi.atomMap[a]];
        images.push_back(std::move(img));
    }
    StarIso iso{src, tgt, std::move(images)};

    bool carries = true;
    for (int mi = 0; mi < s1.memberCount(); ++mi)
        if (iso.apply(s1.members()[mi]) != phi.applyToMember(mi)) { carries = false; break; }
    rep.add("rho_carries_every_member_to_its_image", carries);

    bool starOk = verifyStarIsoInto(iso, rep, "rho_");
    if (rep.allPass() && starOk) res.iso = std::move(iso);
    return res;
}

MoritaResult moritaFromLatticeIso(const LatticeIso& phi) {
    const Csl& s1 = phi.source;
    const Csl& s2 = phi.target;
    const int n1 = s1.dim(), n2 = s2.dim();
    MoritaResult res;
    CheckReport& rep = res.report;

    OpAlgebra a = algOfLattice(s1);
    OpAlgebra b = algOfLattice(s2);

    std::vector<std::pair<Mat, Mat>> uCons, vCons;
    for (int mi : s1.joinIrreducibles()) {
        const Mat& l = s1.members()[mi];
        const Mat& fl = phi.applyToMember(mi);
        uCons.emplace_back(Mat::identity(n2) - fl, l);
        vCons.emplace_back(Mat::identity(n1) - l, fl);
    }
    OpSpace u = sandwichZeroSpace(uCons, n1, n2);
    OpSpace v = sandwichZeroSpace(vCons, n2, n1);

    rep.add("b_u_a_inside_u", u.contains(productSpan(productSpan(b.space, u), a.space)));
    rep.add("a_v_b_inside_v", v.contains(productSpan(productSpan(a.space, v), b.space)));
    OpSpace vu = productSpan(v, u);
    OpSpace uv = productSpan(u, v);
    rep.add("span_vu_ideal_in_a", vu.contains(productSpan(productSpan(a.space, vu), a.space)));
    rep.add("a_equals_span_vu", vu == a.space);
    rep.add("b_equals_span_uv", uv == b.space);
    if (rep.allPass()) res.context = MoritaContext{a, b, u, v};
    return res;
}

MoritaResult moritaFromWitness(const TroWitness& w) {
    MoritaResult res;
    CheckReport& rep = res.report;
    OpSpace mmstar = productSpan(w.m.space, adjointSpace(w.m.space));
    OpSpace bMSpace = w.b.space.sum(mmstar);
    rep.add("b_m_closed_under_products", bMSpace.isClosedUnderProducts());
    OpAlgebra bM = OpAlgebra::fromSpaceUnchecked(bMSpace);
    rep.add("b_m_unital", bM.unital);
    rep.add("b_ideal_of_b_m", isIdealIn(w.b.space, bM));

    OpSpace u = productSpan(w.b.space, w.m.space);           // H1 -> H2
    OpSpace v = productSpan(adjointSpace(w.m.space), bMSpace); // H2 -> H1

    rep.add("b_u_a_inside_u", u.contains(productSpan(productSpan(w.b.space, u), w.a.space)));
    rep.add("a_v_b_inside_v", v.contains(productSpan(productSpan(w.a.space, v), w.b.space)));
    rep.add("a_equals_span_vu", productSpan(v, u) == w.a.space);
    rep.add("b_equals_span_uv", productSpan(u, v) == w.b.space);
    if (rep.allPass()) res.context = MoritaContext{w.a, w.b, u, v};
    return res;
}

CheckReport verifyMoritaContext(const MoritaContext& ctx, const Csl& latA, const Csl& latB,
                                std::uint64_t seed, int samples) {
    CheckReport rep;
    const int n1 = ctx.a.space.domDim();
    const int n2 = ctx.b.space.domDim();
    if (latA.dim() != n1 || latB.dim() != n2)
        throw InputError("verifyMoritaContext: lattice dimensions do not match the context");

    ErdosMap phi{ctx.u, false};
    ErdosMap psi{ctx.v, false};

    bool phiIntoLatB = true;
    std::set<std::vector<Scalar>> phiImages;
    std::vector<Mat> phiOfMembers;
    for (const auto& l : latA.members()) {
        Mat img = evalMap(phi, l);
        phiOfMembers.push_back(img);
        if (latB.indexOfMember(img) < 0) phiIntoLatB = false;
        phiImages.insert(img.vec());
    }
    rep.add("phi_carries_lat_a_onto_lat_b",
            phiIntoLatB && phiImages.size() == static_cast<size_t>(latB.memberCount()));

    bool psiIntoLatA = true;
    std::set<std::vector<Scalar>> psiImages;
    std::vector<Mat> psiOfMembers;
    for (const auto& q : latB.members()) {
        Mat img = evalMap(psi, q);
        psiOfMembers.push_back(img);
        if (latA.indexOfMember(img) < 0) psiIntoLatA = false;
        psiImages.insert(img.vec());
    }
    rep.add("psi_carries_lat_b_onto_lat_a",
            psiIntoLatA && psiImages.size() == static_cast<size_t>(latA.memberCount()));

    bool inverse1 = true;
    for (int i = 0; i < latA.memberCount(); ++i)
        if (evalMap(psi, phiOfMembers[i]) != latA.members()[i]) { inverse1 = false; break; }
    rep.add("psi_of_phi_is_identity_on_lat_a", inverse1);
    bool inverse2 = true;
    for (int i = 0; i < latB.memberCount(); ++i)
        if (evalMap(phi, psiOfMembers[i]) != latB.members()[i]) { inverse2 = false; break; }
    rep.add("phi_of_psi_is_identity_on_lat_b", inverse2);

    // semilattice identities on the frames
    SemilatticePair sem = semilatticesOver(ctx.u, latA, latB);
    auto familyEquals = [](const std::vector<Mat>& fam, const std::vector<Mat>& members) {
        if (fam.size() != members.size()) return false;
        std::set<std::vector<Scalar>> a, b;
        for (const auto& m : fam) a.insert(m.vec());
        for (const auto& m : members) b.insert(m.vec());
        return a == b;
    };
    rep.add("semilattice_s2_equals_lat_b", familyEquals(sem.s2, latB.members()));
    // S_1 via the adjoint transport: { phi*(Q^perp)^perp : Q in Lat(B) } = Lat(A)
    ErdosMap phiAdj{ctx.u, true};
    {
        std::vector<Mat> s1fam;
        std::set<std::vector<Scalar>> seen;
        for (const auto& q : latB.members()) {
            Mat img = Mat::identity(n1) - evalMap(phiAdj, Mat::identity(n2) - q);
            if (seen.insert(img.vec()).second) s1fam.push_back(img);
        }
        rep.add("adjoint_semilattice_recovers_lat_a", familyEquals(s1fam, latA.members()));
    }

    // sampled projections: phi(P) must be invariant for B
    Rng rng(seed);
    bool sampled = true;
    for (int s = 0; s < samples && sampled; ++s) {
        Mat p = rng.randomProjection(n1);
        Mat img = evalMap(phi, p);
        Mat imgPerp = Mat::identity(n2) - img;
        for (const auto& x : ctx.b.space.basis())
            if (!(imgPerp * x * img).isZero()) { sampled = false; break; }
    }
    rep.add("sampled_projections_land_in_lat_b", sampled);
    return rep;
}

} // namespace opalg
