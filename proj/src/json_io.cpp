#include "opalg/json_io.hpp"

namespace opalg {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw InputError("at " + (path.empty() ? "/" : path) + ": " + what);
}

const Json& field(const Json& j, const char* key, const std::string& path) {
    if (!j.is_object()) fail(path, "expected an object");
    auto it = j.find(key);
    if (it == j.end()) fail(path, std::string("missing field '") + key + "'");
    return *it;
}

int intField(const Json& j, const char* key, const std::string& path) {
    const Json& f = field(j, key, path);
    if (!f.is_number_integer()) fail(path + "/" + key, "expected an integer");
    return f.get<int>();
}

Scalar scalarFromJson(const Json& j, const std::string& path) {
    if (!j.is_string()) fail(path, "expected a scalar string like \"a/b+c/di\"");
    try {
        return Scalar::parse(j.get<std::string>());
    } catch (const InputError& e) {
        fail(path, e.what());
    }
}

} // namespace

Json matToJson(const Mat& m) {
    Json entries = Json::array();
    for (int i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (int j = 0; j < m.cols(); ++j) row.push_back(m.at(i, j).str());
        entries.push_back(std::move(row));
    }
    return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"entries", std::move(entries)}};
}

Mat matFromJson(const Json& j, const std::string& path) {
    int rows = intField(j, "rows", path);
    int cols = intField(j, "cols", path);
    if (rows < 0 || cols < 0) fail(path, "negative matrix dimension");
    const Json& entries = field(j, "entries", path);
    if (!entries.is_array() || static_cast<int>(entries.size()) != rows)
        fail(path + "/entries", "expected " + std::to_string(rows) + " rows");
    Mat m(rows, cols);
    for (int i = 0; i < rows; ++i) {
        const Json& row = entries[i];
        std::string rowPath = path + "/entries/" + std::to_string(i);
        if (!row.is_array() || static_cast<int>(row.size()) != cols)
            fail(rowPath, "expected " + std::to_string(cols) + " entries");
        for (int c = 0; c < cols; ++c)
            m.at(i, c) = scalarFromJson(row[c], rowPath + "/" + std::to_string(c));
    }
    return m;
}

Json spaceToJson(const OpSpace& s) {
    Json basis = Json::array();
    for (const auto& b : s.basis()) basis.push_back(matToJson(b));
    return Json{{"domDim", s.domDim()}, {"codDim", s.codDim()}, {"basis", std::move(basis)}};
}

OpSpace spaceFromJson(const Json& j, const std::string& path) {
    int dom = intField(j, "domDim", path);
    int cod = intField(j, "codDim", path);
    const Json& basis = field(j, "basis", path);
    if (!basis.is_array()) fail(path + "/basis", "expected an array of matrices");
    std::vector<Mat> mats;
    mats.reserve(basis.size());
    for (size_t i = 0; i < basis.size(); ++i)
        mats.push_back(matFromJson(basis[i], path + "/basis/" + std::to_string(i)));
    try {
        return OpSpace::span(dom, cod, mats);
    } catch (const InputError& e) {
        fail(path, e.what());
    }
}

Json algebraToJson(const OpAlgebra& a) {
    Json j = spaceToJson(a.space);
    j["unital"] = a.unital;
    return j;
}

OpAlgebra algebraFromJson(const Json& j, const std::string& path) {
    OpSpace s = spaceFromJson(j, path);
    try {
        OpAlgebra a = OpAlgebra::fromSpaceChecked(std::move(s));
        if (j.contains("unital") && j["unital"].is_boolean() &&
            j["unital"].get<bool>() != a.unital)
            fail(path + "/unital", "declared unitality does not match the span");
        return a;
    } catch (const InputError& e) {
        fail(path, e.what());
    }
}

Json cslToJson(const Csl& s) {
    Json members = Json::array();
    for (const auto& m : s.members()) members.push_back(matToJson(m));
    Json atoms = Json::array();
    for (const auto& a : s.atoms()) atoms.push_back(matToJson(a));
    Json ranks = Json::array();
    for (int a = 0; a < s.atomCount(); ++a) ranks.push_back(s.atomRank(a));
    Json sets = Json::array();
    for (auto mask : s.memberSets()) {
        Json set = Json::array();
        for (int a = 0; a < s.atomCount(); ++a)
            if (mask & (1ull << a)) set.push_back(a);
        sets.push_back(std::move(set));
    }
    return Json{{"dim", s.dim()},
                {"members", std::move(members)},
                {"atoms", std::move(atoms)},
                {"atomRanks", std::move(ranks)},
                {"memberSets", std::move(sets)}};
}

Csl cslFromJson(const Json& j, const std::string& path) {
    if (!j.is_object()) fail(path, "expected an object");
    try {
        if (j.contains("members")) {
            int dim = intField(j, "dim", path);
            const Json& members = field(j, "members", path);
            if (!members.is_array()) fail(path + "/members", "expected an array of matrices");
            std::vector<Mat> mats;
            mats.reserve(members.size());
            for (size_t i = 0; i < members.size(); ++i)
                mats.push_back(matFromJson(members[i], path + "/members/" + std::to_string(i)));
            return Csl::fromMembers(dim, mats);
        }
        if (j.contains("atomRanks")) {
            const Json& ranks = field(j, "atomRanks", path);
            const Json& sets = field(j, "memberSets", path);
            if (!ranks.is_array()) fail(path + "/atomRanks", "expected an array of integers");
            if (!sets.is_array()) fail(path + "/memberSets", "expected an array of index sets");
            std::vector<int> rv;
            for (size_t i = 0; i < ranks.size(); ++i) {
                if (!ranks[i].is_number_integer())
                    fail(path + "/atomRanks/" + std::to_string(i), "expected an integer");
                rv.push_back(ranks[i].get<int>());
            }
            std::vector<std::vector<int>> sv;
            for (size_t i = 0; i < sets.size(); ++i) {
                if (!sets[i].is_array())
                    fail(path + "/memberSets/" + std::to_string(i), "expected an array");
                std::vector<int> one;
                for (size_t k = 0; k < sets[i].size(); ++k) {
                    const Json& e = sets[i][k];
                    if (!e.is_number_integer())
                        fail(path + "/memberSets/" + std::to_string(i) + "/" + std::to_string(k),
                             "expected an integer atom index");
                    one.push_back(e.get<int>());
                }
                sv.push_back(std::move(one));
            }
            return Csl::fromAtomic(rv, sv);
        }
    } catch (const InputError& e) {
        std::string w = e.what();
        if (w.rfind("at ", 0) == 0) throw; // already carries a path
        fail(path, w);
    }
    fail(path, "expected either 'members' or 'atomRanks'+'memberSets'");
}

Json isoToJson(const LatticeIso& iso) {
    return Json{{"source", cslToJson(iso.source)},
                {"target", cslToJson(iso.target)},
                {"atomMap", iso.atomMap},
                {"memberMap", iso.memberMap},
                {"ranksMatch", iso.ranksMatch}};
}

LatticeIso isoFromJson(const Json& j, const std::string& path) {
    Csl source = cslFromJson(field(j, "source", path), path + "/source");
    Csl target = cslFromJson(field(j, "target", path), path + "/target");
    const Json& am = field(j, "atomMap", path);
    if (!am.is_array()) fail(path + "/atomMap", "expected an array of atom indices");
    std::vector<int> atomMap;
    for (size_t i = 0; i < am.size(); ++i) {
        if (!am[i].is_number_integer())
            fail(path + "/atomMap/" + std::to_string(i), "expected an integer");
        atomMap.push_back(am[i].get<int>());
    }
    try {
        return LatticeIso::fromAtomMap(std::move(source), std::move(target), std::move(atomMap));
    } catch (const InputError& e) {
        fail(path, e.what());
    }
}

Json reportToJson(const CheckReport& rep) {
    Json checks = Json::array();
    for (const auto& c : rep.checks) {
        Json e{{"name", c.name}, {"status", c.pass ? "pass" : "fail"}};
        if (!c.detail.empty()) e["detail"] = c.detail;
        checks.push_back(std::move(e));
    }
    return checks;
}

Json certToJson(const NotIsoCert& cert) {
    return Json{{"memberCountMismatch", cert.memberCountMismatch},
                {"atomCountMismatch", cert.atomCountMismatch},
                {"atomDegreeProfileMismatch", cert.atomDegreeProfileMismatch},
                {"memberCardinalityProfileMismatch", cert.memberCardinalityProfileMismatch},
                {"bijectionsExamined", cert.bijectionsExamined},
                {"searchExhausted", cert.searchExhausted}};
}

Json witnessToJson(const TroWitness& w, const CheckReport& rep) {
    return Json{{"a", algebraToJson(w.a)},
                {"b", algebraToJson(w.b)},
                {"m", spaceToJson(w.m.space)},
                {"essential", w.m.essential},
                {"checks", reportToJson(rep)}};
}

WitnessParts witnessPartsFromJson(const Json& j, const std::string& path) {
    return WitnessParts{algebraFromJson(field(j, "a", path), path + "/a"),
                        algebraFromJson(field(j, "b", path), path + "/b"),
                        spaceFromJson(field(j, "m", path), path + "/m")};
}

Json contextToJson(const MoritaContext& ctx, const CheckReport& rep) {
    return Json{{"a", algebraToJson(ctx.a)},
                {"b", algebraToJson(ctx.b)},
                {"u", spaceToJson(ctx.u)},
                {"v", spaceToJson(ctx.v)},
                {"checks", reportToJson(rep)}};
}

Json starIsoToJson(const StarIso& iso) {
    Json images = Json::array();
    for (const auto& m : iso.images) images.push_back(matToJson(m));
    return Json{{"source", algebraToJson(iso.source)},
                {"target", algebraToJson(iso.target)},
                {"images", std::move(images)}};
}

Json instanceToJson(const Instance& inst) {
    return Json{{"kind", inst.kind},
                {"meta", Json{{"name", inst.name}, {"seed", inst.seed}, {"provenance", inst.provenance}}},
                {"payload", inst.payload}};
}

Instance instanceFromJson(const Json& j) {
    Instance inst;
    if (!j.is_object()) fail("", "expected a JSON object");
    const Json& kind = field(j, "kind", "");
    if (!kind.is_string()) fail("/kind", "expected a string");
    inst.kind = kind.get<std::string>();
    if (j.contains("meta") && j["meta"].is_object()) {
        const Json& meta = j["meta"];
        if (meta.contains("name") && meta["name"].is_string()) inst.name = meta["name"];
        if (meta.contains("seed") && meta["seed"].is_number_unsigned())
            inst.seed = meta["seed"].get<std::uint64_t>();
        if (meta.contains("provenance") && meta["provenance"].is_string())
            inst.provenance = meta["provenance"];
    }
    inst.payload = field(j, "payload", "");
    return inst;
}

Instance parseInstanceText(const std::string& text) {
    Json j = Json::parse(text, nullptr, false);
    if (j.is_discarded()) throw InputError("at /: not valid JSON");
    if (j.is_object() && !j.contains("kind")) {
        // bare payload: infer the kind from its shape
        std::string kind;
        if (j.contains("atomRanks") || (j.contains("members") && j.contains("dim"))) kind = "csl";
        else if (j.contains("atomMap") && j.contains("source")) kind = "iso";
        else if (j.contains("a") && j.contains("b") && j.contains("m")) kind = "witness";
        else if (j.contains("a") && j.contains("b") && j.contains("u")) kind = "context";
        else if (j.contains("basis") && j.contains("domDim"))
            kind = j.contains("unital") ? "algebra" : "space";
        else if (j.contains("entries") && j.contains("rows")) kind = "matrix";
        if (kind.empty()) fail("", "missing field 'kind' and the payload shape is not recognized");
        return Instance{kind, "", 0, "", std::move(j)};
    }
    return instanceFromJson(j);
}

std::string canonicalDump(const Json& j) {
    return j.dump(2) + "\n";
}

} // namespace opalg
