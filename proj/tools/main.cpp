// Command-line front end; talks to the core exclusively through the C API.

#include <opalg.h>

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>

namespace {

struct ObjDeleter {
    void operator()(opalg_obj* h) const { opalg_obj_free(h); }
};
using Handle = std::unique_ptr<opalg_obj, ObjDeleter>;

[[noreturn]] void die(int code, const std::string& msg) {
    std::cerr << "error: " << msg << "\n";
    std::exit(code);
}

int exitCodeFor(opalg_status st) {
    switch (st) {
        case OPALG_OK: return 0;
        case OPALG_NEGATIVE: return 1;
        case OPALG_ERR_INPUT: return 2;
        default: return 3;
    }
}

Handle loadInstance(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) die(2, "cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    opalg_obj* raw = nullptr;
    opalg_status st = opalg_parse(buf.str().c_str(), &raw);
    if (st != OPALG_OK) die(exitCodeFor(st), path + ": " + opalg_last_error());
    return Handle(raw);
}

void emit(const opalg_obj* h, const std::string& outDir) {
    char* json = nullptr;
    opalg_status st = opalg_to_json(h, &json);
    if (st != OPALG_OK) die(exitCodeFor(st), opalg_last_error());
    if (outDir.empty()) {
        std::cout << json;
    } else {
        std::filesystem::create_directories(outDir);
        std::string name = opalg_kind(h);
        std::string path = outDir + "/" + name + ".json";
        std::ofstream out(path, std::ios::binary);
        out << json;
        std::cout << path << "\n";
    }
    opalg_string_free(json);
}

// finishes a unary/binary operation: emit the result, exit with the verdict
[[noreturn]] void finish(opalg_status st, opalg_obj* result, const std::string& outDir) {
    Handle guard(result);
    if (st == OPALG_OK || st == OPALG_NEGATIVE) {
        if (result) emit(result, outDir);
        std::exit(exitCodeFor(st));
    }
    die(exitCodeFor(st), opalg_last_error());
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact workbench for TRO equivalence and Morita equivalence of CSL algebras"};
    app.require_subcommand(1);

    std::string outDir;
    app.add_option("--out", outDir, "directory for output files (default: stdout)");

    std::uint64_t seed = 0;
    int samples = 4;
    int parallel = 1;
    app.add_option("--seed", seed, "deterministic seed");
    app.add_option("--samples", samples, "sample count per rank-drop locus");
    app.add_option("--parallel", parallel, "worker threads for independent instances");

    // alg --lattice f
    auto* algCmd = app.add_subcommand("alg", "algebra of a lattice");
    std::string algLattice;
    algCmd->add_option("--lattice", algLattice, "csl instance file")->required();

    // lat --algebra f --frame g
    auto* latCmd = app.add_subcommand("lat", "invariant projection lattice of an algebra");
    std::string latAlgebra, latFrame;
    latCmd->add_option("--algebra", latAlgebra, "algebra instance file")->required();
    latCmd->add_option("--frame", latFrame, "csl instance file providing the atom frame")->required();

    auto* commCmd = app.add_subcommand("commutant", "commutant of a space");
    std::string commSpace;
    commCmd->add_option("--space", commSpace, "space instance file")->required();

    auto* bicommCmd = app.add_subcommand("bicommutant", "bicommutant of a space");
    std::string bicommSpace;
    bicommCmd->add_option("--space", bicommSpace, "space instance file")->required();

    auto* diagCmd = app.add_subcommand("diagonal", "diagonal of an algebra");
    std::string diagAlgebra;
    diagCmd->add_option("--algebra", diagAlgebra, "algebra instance file")->required();

    // tro check|essentialize|compose|theta|enlarge
    auto* troCmd = app.add_subcommand("tro", "TRO calculus");
    troCmd->require_subcommand(1);
    auto* troCheck = troCmd->add_subcommand("check", "ternary axiom / witness re-verification");
    std::string troCheckFile;
    troCheck->add_option("--space", troCheckFile, "space or witness instance file")->required();
    auto* troEss = troCmd->add_subcommand("essentialize", "essential enlargement");
    std::string troEssFile;
    troEss->add_option("--space", troEssFile, "space instance file")->required();
    auto* troCompose = troCmd->add_subcommand("compose", "compose two witnesses through B");
    std::string troW1, troW2;
    troCompose->add_option("--w1", troW1, "witness B ~ A")->required();
    troCompose->add_option("--w2", troW2, "witness B ~ C")->required();
    auto* troTheta = troCmd->add_subcommand("theta", "commutant isomorphism of an essential TRO");
    std::string troThetaFile;
    troTheta->add_option("--space", troThetaFile, "space instance file")->required();
    auto* troEnlarge = troCmd->add_subcommand("enlarge", "enlarge a unital witness");
    std::string troEnlargeFile;
    troEnlarge->add_option("--w", troEnlargeFile, "witness instance file")->required();

    // equiv tro|morita
    auto* equivCmd = app.add_subcommand("equiv", "equivalence deciders");
    equivCmd->require_subcommand(1);
    auto* equivTro = equivCmd->add_subcommand("tro", "TRO equivalence of CSL algebras");
    std::string equivA, equivB;
    equivTro->add_option("--a", equivA, "csl instance file")->required();
    equivTro->add_option("--b", equivB, "csl instance file")->required();
    auto* equivMorita = equivCmd->add_subcommand("morita", "spatial Morita equivalence");
    std::string moritaA, moritaB;
    equivMorita->add_option("--a", moritaA, "csl instance file")->required();
    equivMorita->add_option("--b", moritaB, "csl instance file")->required();

    auto* extendCmd = app.add_subcommand("extend-iso", "extend a lattice isomorphism");
    std::string extendPhi;
    extendCmd->add_option("--phi", extendPhi, "iso instance file")->required();

    auto* refCmd = app.add_subcommand("ref", "reflexive hull membership");
    refCmd->require_subcommand(1);
    auto* refMember = refCmd->add_subcommand("member", "is the operator in Ref(U)?");
    std::string refSpace, refOp;
    refMember->add_option("--space", refSpace, "space instance file")->required();
    refMember->add_option("--op", refOp, "matrix instance file")->required();

    // corpus gen --dims lo..hi --count N --seed S
    auto* corpusCmd = app.add_subcommand("corpus", "instance corpora");
    corpusCmd->require_subcommand(1);
    auto* corpusGenCmd = corpusCmd->add_subcommand("gen", "deterministic CSL pair corpus");
    std::string dims = "2..6";
    int count = 10;
    corpusGenCmd->add_option("--dims", dims, "dimension range lo..hi (default 2..6)");
    corpusGenCmd->add_option("--count", count, "number of instance triples");

    auto* selftestCmd = app.add_subcommand("selftest", "run the full acceptance suite");
    bool quick = false;
    selftestCmd->add_flag("--quick", quick, "reduced instance counts (smoke run, not the gate)");

    CLI11_PARSE(app, argc, argv);

    opalg_obj* result = nullptr;

    if (*algCmd) {
        Handle s = loadInstance(algLattice);
        finish(opalg_alg_of_lattice(s.get(), &result), result, outDir);
    }
    if (*latCmd) {
        Handle a = loadInstance(latAlgebra);
        Handle f = loadInstance(latFrame);
        finish(opalg_lat_of_algebra(a.get(), f.get(), &result), result, outDir);
    }
    if (*commCmd) {
        Handle s = loadInstance(commSpace);
        finish(opalg_commutant(s.get(), &result), result, outDir);
    }
    if (*bicommCmd) {
        Handle s = loadInstance(bicommSpace);
        finish(opalg_bicommutant(s.get(), &result), result, outDir);
    }
    if (*diagCmd) {
        Handle a = loadInstance(diagAlgebra);
        finish(opalg_diagonal(a.get(), &result), result, outDir);
    }
    if (*troCheck) {
        Handle s = loadInstance(troCheckFile);
        finish(opalg_tro_check(s.get(), &result), result, outDir);
    }
    if (*troEss) {
        Handle s = loadInstance(troEssFile);
        finish(opalg_tro_essentialize(s.get(), &result), result, outDir);
    }
    if (*troCompose) {
        Handle w1 = loadInstance(troW1);
        Handle w2 = loadInstance(troW2);
        finish(opalg_tro_compose(w1.get(), w2.get(), &result), result, outDir);
    }
    if (*troTheta) {
        Handle s = loadInstance(troThetaFile);
        finish(opalg_tro_theta(s.get(), &result), result, outDir);
    }
    if (*troEnlarge) {
        Handle w = loadInstance(troEnlargeFile);
        finish(opalg_tro_enlarge(w.get(), &result), result, outDir);
    }
    if (*equivTro) {
        Handle a = loadInstance(equivA);
        Handle b = loadInstance(equivB);
        finish(opalg_equiv_tro(a.get(), b.get(), &result), result, outDir);
    }
    if (*equivMorita) {
        Handle a = loadInstance(moritaA);
        Handle b = loadInstance(moritaB);
        finish(opalg_equiv_morita(a.get(), b.get(), &result), result, outDir);
    }
    if (*extendCmd) {
        Handle phi = loadInstance(extendPhi);
        finish(opalg_extend_iso(phi.get(), &result), result, outDir);
    }
    if (*refMember) {
        Handle s = loadInstance(refSpace);
        Handle t = loadInstance(refOp);
        finish(opalg_ref_membership(s.get(), t.get(), seed, samples, &result), result, outDir);
    }
    if (*corpusGenCmd) {
        auto sep = dims.find("..");
        if (sep == std::string::npos) die(2, "--dims expects lo..hi");
        int lo = 0, hi = 0;
        try {
            lo = std::stoi(dims.substr(0, sep));
            hi = std::stoi(dims.substr(sep + 2));
        } catch (...) {
            die(2, "--dims expects lo..hi");
        }
        finish(opalg_corpus_gen(lo, hi, count, seed, &result), result, outDir);
    }
    if (*selftestCmd) {
        finish(opalg_selftest(seed, quick ? 1 : 0, parallel, &result), result, outDir);
    }
    return 0;
}
