#include "opalg.h"

#include "opalg/selftest.hpp"

#include <cstring>
#include <new>

using namespace opalg;

struct opalg_obj {
    Instance inst;
};

namespace {

thread_local std::string g_lastError;

opalg_status fail(opalg_status st, const std::string& msg) {
    g_lastError = msg;
    return st;
}

opalg_status wrap(opalg_obj** out, Instance inst) {
    *out = new (std::nothrow) opalg_obj{std::move(inst)};
    return *out ? OPALG_OK : fail(OPALG_ERR_INTERNAL, "allocation failed");
}

template <typename Fn>
opalg_status guarded(Fn&& fn) {
    try {
        g_lastError.clear();
        return fn();
    } catch (const InputError& e) {
        return fail(OPALG_ERR_INPUT, e.what());
    } catch (const InternalError& e) {
        return fail(OPALG_ERR_INTERNAL, e.what());
    } catch (const std::exception& e) {
        return fail(OPALG_ERR_INTERNAL, e.what());
    }
}

opalg_status requireArgs(std::initializer_list<const void*> args) {
    for (const void* a : args)
        if (!a) return fail(OPALG_ERR_NULL, "null argument");
    return OPALG_OK;
}

Csl cslArg(const opalg_obj* h, const char* what) {
    if (h->inst.kind != "csl")
        throw InputError(std::string("expected a csl instance for ") + what + ", got '" +
                         h->inst.kind + "'");
    return cslFromJson(h->inst.payload, "/payload");
}

OpSpace spaceArg(const opalg_obj* h, const char* what) {
    if (h->inst.kind != "space" && h->inst.kind != "algebra")
        throw InputError(std::string("expected a space instance for ") + what + ", got '" +
                         h->inst.kind + "'");
    return spaceFromJson(h->inst.payload, "/payload");
}

OpAlgebra algebraArg(const opalg_obj* h, const char* what) {
    if (h->inst.kind != "algebra")
        throw InputError(std::string("expected an algebra instance for ") + what + ", got '" +
                         h->inst.kind + "'");
    return algebraFromJson(h->inst.payload, "/payload");
}

} // namespace

extern "C" {

const char* opalg_version(void) { return "1.0.0"; }

const char* opalg_last_error(void) { return g_lastError.c_str(); }

opalg_status opalg_parse(const char* json, opalg_obj** out) {
    if (opalg_status st = requireArgs({json, out})) return st;
    return guarded([&] { return wrap(out, parseInstanceText(json)); });
}

opalg_status opalg_to_json(const opalg_obj* h, char** json_out) {
    if (opalg_status st = requireArgs({h, json_out})) return st;
    return guarded([&] {
        std::string s = canonicalDump(instanceToJson(h->inst));
        char* buf = new (std::nothrow) char[s.size() + 1];
        if (!buf) return fail(OPALG_ERR_INTERNAL, "allocation failed");
        std::memcpy(buf, s.c_str(), s.size() + 1);
        *json_out = buf;
        return OPALG_OK;
    });
}

const char* opalg_kind(const opalg_obj* h) { return h ? h->inst.kind.c_str() : ""; }

void opalg_obj_free(opalg_obj* h) { delete h; }

void opalg_string_free(char* s) { delete[] s; }

opalg_status opalg_alg_of_lattice(const opalg_obj* csl, opalg_obj** out) {
    if (opalg_status st = requireArgs({csl, out})) return st;
    return guarded([&] {
        OpAlgebra a = algOfLattice(cslArg(csl, "alg"));
        return wrap(out, Instance{"algebra", "alg-of-" + csl->inst.name, 0, "", algebraToJson(a)});
    });
}

opalg_status opalg_lat_of_algebra(const opalg_obj* algebra, const opalg_obj* frame_csl,
                                  opalg_obj** out) {
    if (opalg_status st = requireArgs({algebra, frame_csl, out})) return st;
    return guarded([&] {
        OpAlgebra a = algebraArg(algebra, "lat");
        Csl frame = cslArg(frame_csl, "lat frame");
        Csl lat = latOfAlgebra(a, frame.atoms());
        return wrap(out, Instance{"csl", "lat-of-" + algebra->inst.name, 0, "", cslToJson(lat)});
    });
}

opalg_status opalg_commutant(const opalg_obj* space, opalg_obj** out) {
    if (opalg_status st = requireArgs({space, out})) return st;
    return guarded([&] {
        OpAlgebra c = commutant(spaceArg(space, "commutant"));
        return wrap(out, Instance{"algebra", "commutant-of-" + space->inst.name, 0, "",
                                  algebraToJson(c)});
    });
}

opalg_status opalg_bicommutant(const opalg_obj* space, opalg_obj** out) {
    if (opalg_status st = requireArgs({space, out})) return st;
    return guarded([&] {
        OpAlgebra c = bicommutant(spaceArg(space, "bicommutant"));
        return wrap(out, Instance{"algebra", "bicommutant-of-" + space->inst.name, 0, "",
                                  algebraToJson(c)});
    });
}

opalg_status opalg_diagonal(const opalg_obj* algebra, opalg_obj** out) {
    if (opalg_status st = requireArgs({algebra, out})) return st;
    return guarded([&] {
        OpAlgebra d = diagonal(algebraArg(algebra, "diagonal"));
        return wrap(out, Instance{"algebra", "diagonal-of-" + algebra->inst.name, 0, "",
                                  algebraToJson(d)});
    });
}

opalg_status opalg_tro_check(const opalg_obj* h, opalg_obj** report_out) {
    if (opalg_status st = requireArgs({h, report_out})) return st;
    return guarded([&]() -> opalg_status {
        Json payload;
        bool allPass = false;
        if (h->inst.kind == "witness") {
            WitnessParts parts = witnessPartsFromJson(h->inst.payload, "/payload");
            WitnessResult wr = verifyWitness(parts.a, parts.b, parts.m);
            payload = Json{{"checks", reportToJson(wr.report)}};
            allPass = wr.ok();
        } else {
            OpSpace s = spaceArg(h, "tro check");
            CheckReport rep;
            bool axiom = isTroSpace(s);
            rep.add("tro_axiom", axiom);
            if (axiom) rep.add("tro_essential", isEssential(s));
            payload = Json{{"checks", reportToJson(rep)}};
            allPass = rep.allPass();
        }
        opalg_status st =
            wrap(report_out, Instance{"report", "check-" + h->inst.name, 0, "", payload});
        if (st != OPALG_OK) return st;
        return allPass ? OPALG_OK : OPALG_NEGATIVE;
    });
}

opalg_status opalg_tro_essentialize(const opalg_obj* space, opalg_obj** out) {
    if (opalg_status st = requireArgs({space, out})) return st;
    return guarded([&]() -> opalg_status {
        OpSpace s = spaceArg(space, "essentialize");
        Tro t = verifyTro(s); // rejects non-TROs with the offending triple
        EssentializeResult res = essentialize(t.space);
        Json payload{{"space", spaceToJson(res.space)},
                     {"essential", res.essential},
                     {"kernelProjection", matToJson(res.kernelProj)},
                     {"adjointKernelProjection", matToJson(res.adjointKernelProj)}};
        if (!res.note.empty()) payload["note"] = res.note;
        opalg_status st = wrap(out, Instance{"space", "essentialize-" + space->inst.name, 0, "",
                                             payload});
        if (st != OPALG_OK) return st;
        return res.essential ? OPALG_OK : OPALG_NEGATIVE;
    });
}

opalg_status opalg_tro_compose(const opalg_obj* w1, const opalg_obj* w2, opalg_obj** out) {
    if (opalg_status st = requireArgs({w1, w2, out})) return st;
    return guarded([&]() -> opalg_status {
        WitnessParts p1 = witnessPartsFromJson(w1->inst.payload, "/payload");
        WitnessParts p2 = witnessPartsFromJson(w2->inst.payload, "/payload");
        WitnessResult v1 = verifyWitness(p1.a, p1.b, p1.m);
        if (!v1.ok()) throw InputError("first witness does not verify: " + v1.report.firstFailure());
        WitnessResult v2 = verifyWitness(p2.a, p2.b, p2.m);
        if (!v2.ok())
            throw InputError("second witness does not verify: " + v2.report.firstFailure());
        WitnessResult comp = composeWitnesses(*v1.witness, *v2.witness);
        Json payload = comp.ok() ? witnessToJson(*comp.witness, comp.report)
                                 : Json{{"checks", reportToJson(comp.report)}};
        opalg_status st = wrap(out, Instance{comp.ok() ? "witness" : "report",
                                             "compose-" + w1->inst.name + "-" + w2->inst.name, 0,
                                             "", payload});
        if (st != OPALG_OK) return st;
        return comp.ok() ? OPALG_OK : OPALG_NEGATIVE;
    });
}

opalg_status opalg_tro_theta(const opalg_obj* space, opalg_obj** star_iso_out) {
    if (opalg_status st = requireArgs({space, star_iso_out})) return st;
    return guarded([&]() -> opalg_status {
        OpSpace s = spaceArg(space, "theta");
        Tro t = verifyTro(s);
        if (!t.essential) throw InputError("theta: the TRO is not essential");
        OpAlgebra aPrime = commutant(productSpan(adjointSpace(s), s));
        OpAlgebra bPrime = commutant(productSpan(s, adjointSpace(s)));
        StarIsoResult theta = thetaFromWitness(t, aPrime, bPrime);
        Json payload;
        if (theta.ok()) {
            payload = starIsoToJson(*theta.iso);
            payload["checks"] = reportToJson(theta.report);
        } else {
            payload = Json{{"checks", reportToJson(theta.report)}};
        }
        opalg_status st = wrap(star_iso_out, Instance{"report", "theta-" + space->inst.name, 0,
                                                      "", payload});
        if (st != OPALG_OK) return st;
        return theta.ok() ? OPALG_OK : OPALG_NEGATIVE;
    });
}

opalg_status opalg_tro_enlarge(const opalg_obj* witness, opalg_obj** out) {
    if (opalg_status st = requireArgs({witness, out})) return st;
    return guarded([&]() -> opalg_status {
        WitnessParts parts = witnessPartsFromJson(witness->inst.payload, "/payload");
        WitnessResult wr = verifyWitness(parts.a, parts.b, parts.m);
        if (!wr.ok()) throw InputError("witness does not verify: " + wr.report.firstFailure());
        EnlargeResult el = enlargeWitness(*wr.witness);
        Json payload = el.ok() ? witnessToJson(*el.witness, el.report)
                               : Json{{"checks", reportToJson(el.report)}};
        opalg_status st = wrap(out, Instance{el.ok() ? "witness" : "report",
                                             "enlarge-" + witness->inst.name, 0, "", payload});
        if (st != OPALG_OK) return st;
        return el.ok() ? OPALG_OK : OPALG_NEGATIVE;
    });
}

opalg_status opalg_equiv_tro(const opalg_obj* csl1, const opalg_obj* csl2, opalg_obj** out) {
    if (opalg_status st = requireArgs({csl1, csl2, out})) return st;
    return guarded([&]() -> opalg_status {
        Csl s1 = cslArg(csl1, "equiv tro");
        Csl s2 = cslArg(csl2, "equiv tro");
        DecideResult d = decideTroEquivalenceCSL(s1, s2);
        Json payload;
        if (d.equivalent) {
            payload = witnessToJson(*d.witness, d.report);
            payload["iso"] = isoToJson(*d.iso);
        } else {
            payload = Json{{"certificate", certToJson(d.cert)}, {"checks", reportToJson(d.report)}};
        }
        opalg_status st = wrap(out, Instance{d.equivalent ? "witness" : "report",
                                             "equiv-tro-" + csl1->inst.name + "-" + csl2->inst.name,
                                             0, "", payload});
        if (st != OPALG_OK) return st;
        return d.equivalent ? OPALG_OK : OPALG_NEGATIVE;
    });
}

opalg_status opalg_equiv_morita(const opalg_obj* csl1, const opalg_obj* csl2, opalg_obj** out) {
    if (opalg_status st = requireArgs({csl1, csl2, out})) return st;
    return guarded([&]() -> opalg_status {
        Csl s1 = cslArg(csl1, "equiv morita");
        Csl s2 = cslArg(csl2, "equiv morita");
        IsoSearchResult found = findLatticeIso(s1, s2);
        if (!found.iso) {
            Json payload{{"certificate", certToJson(found.cert)}};
            opalg_status st =
                wrap(out, Instance{"report",
                                   "equiv-morita-" + csl1->inst.name + "-" + csl2->inst.name, 0,
                                   "", payload});
            if (st != OPALG_OK) return st;
            return OPALG_NEGATIVE;
        }
        MoritaResult mr = moritaFromLatticeIso(*found.iso);
        CheckReport full = mr.report;
        if (mr.ok()) full.merge(verifyMoritaContext(*mr.context, s1, s2, 7, 25), "map_");
        Json payload;
        if (mr.ok() && full.allPass()) {
            payload = contextToJson(*mr.context, full);
            payload["iso"] = isoToJson(*found.iso);
        } else {
            payload = Json{{"checks", reportToJson(full)}};
        }
        opalg_status st = wrap(out, Instance{mr.ok() ? "context" : "report",
                                             "equiv-morita-" + csl1->inst.name + "-" +
                                                 csl2->inst.name,
                                             0, "", payload});
        if (st != OPALG_OK) return st;
        return mr.ok() && full.allPass() ? OPALG_OK : OPALG_NEGATIVE;
    });
}

opalg_status opalg_extend_iso(const opalg_obj* iso, opalg_obj** report_out) {
    if (opalg_status st = requireArgs({iso, report_out})) return st;
    return guarded([&]() -> opalg_status {
        if (iso->inst.kind != "iso")
            throw InputError("expected an iso instance, got '" + iso->inst.kind + "'");
        LatticeIso phi = isoFromJson(iso->inst.payload, "/payload");
        StarIsoResult cstar = extendLatticeIsoCStar(phi);
        StarIsoResult atomic = extendAtomIso(phi);
        bool agree = cstar.ok() && atomic.ok() && cstar.iso->images == atomic.iso->images;
        Thm57Result t57 = checkThm57Conditions(phi.source, phi.target, phi);
        CheckReport all;
        all.merge(cstar.report, "cstar_");
        all.merge(atomic.report, "atomic_");
        all.add("constructions_agree_on_span", agree);
        all.merge(t57.report, "graph_");
        Json payload{{"checks", reportToJson(all)}};
        if (cstar.ok()) payload["extension"] = starIsoToJson(*cstar.iso);
        opalg_status st =
            wrap(report_out, Instance{"report", "extend-" + iso->inst.name, 0, "", payload});
        if (st != OPALG_OK) return st;
        return all.allPass() ? OPALG_OK : OPALG_NEGATIVE;
    });
}

opalg_status opalg_ref_membership(const opalg_obj* space, const opalg_obj* matrix,
                                  uint64_t seed, int samples, opalg_obj** verdict_out) {
    if (opalg_status st = requireArgs({space, matrix, verdict_out})) return st;
    return guarded([&]() -> opalg_status {
        OpSpace u = spaceArg(space, "ref membership");
        if (matrix->inst.kind != "matrix")
            throw InputError("expected a matrix instance, got '" + matrix->inst.kind + "'");
        Mat t = matFromJson(matrix->inst.payload, "/payload");
        RefVerdict v = refMembership(u, t, seed, samples);
        Json payload{{"member", v.member}, {"lociSampled", v.lociSampled}, {"notes", v.notes}};
        if (!v.member) {
            Json w = Json::array();
            for (const auto& x : v.witness) w.push_back(x.str());
            payload["witness"] = std::move(w);
        }
        opalg_status st = wrap(verdict_out, Instance{"report", "ref-" + matrix->inst.name, seed,
                                                     "", payload});
        if (st != OPALG_OK) return st;
        return v.member ? OPALG_OK : OPALG_NEGATIVE;
    });
}

opalg_status opalg_corpus_gen(int dim_lo, int dim_hi, int count, uint64_t seed,
                              opalg_obj** corpus_out) {
    if (opalg_status st = requireArgs({corpus_out})) return st;
    return guarded([&] {
        CorpusOptions opts{dim_lo, dim_hi, count, seed};
        std::vector<Instance> instances = corpusGen(opts);
        Json arr = Json::array();
        for (const auto& inst : instances) arr.push_back(instanceToJson(inst));
        return wrap(corpus_out, Instance{"corpus", "corpus", seed, "",
                                         Json{{"instances", std::move(arr)}}});
    });
}

opalg_status opalg_selftest(uint64_t seed, int quick, int parallel, opalg_obj** report_out) {
    if (opalg_status st = requireArgs({report_out})) return st;
    return guarded([&]() -> opalg_status {
        SelftestReport rep = runSelftest(seed, quick != 0, parallel);
        opalg_status st =
            wrap(report_out, Instance{"report", "selftest", seed, "", rep.toJson()});
        if (st != OPALG_OK) return st;
        return rep.allPass ? OPALG_OK : OPALG_NEGATIVE;
    });
}

} // extern "C"
