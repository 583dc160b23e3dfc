#ifndef OPALG_JSON_IO_HPP
#define OPALG_JSON_IO_HPP

#include "opalg/tro.hpp"

#include <json.hpp>

#include <string>

namespace opalg {

using Json = nlohmann::json;

/// The single interchange envelope: kind + meta + payload. Exact scalars are
/// strings throughout; round trips of canonical payloads are bit exact.
struct Instance {
    std::string kind;
    std::string name;
    std::uint64_t seed = 0;
    std::string provenance;
    Json payload;
};

Json matToJson(const Mat& m);
Mat matFromJson(const Json& j, const std::string& path);

Json spaceToJson(const OpSpace& s);
OpSpace spaceFromJson(const Json& j, const std::string& path);

Json algebraToJson(const OpAlgebra& a);
OpAlgebra algebraFromJson(const Json& j, const std::string& path);

Json cslToJson(const Csl& s);
Csl cslFromJson(const Json& j, const std::string& path);

Json isoToJson(const LatticeIso& iso);
LatticeIso isoFromJson(const Json& j, const std::string& path);

Json reportToJson(const CheckReport& rep);
Json certToJson(const NotIsoCert& cert);

Json witnessToJson(const TroWitness& w, const CheckReport& rep);
struct WitnessParts {
    OpAlgebra a, b;
    OpSpace m;
};
WitnessParts witnessPartsFromJson(const Json& j, const std::string& path);

Json contextToJson(const MoritaContext& ctx, const CheckReport& rep);
Json starIsoToJson(const StarIso& iso);

Json instanceToJson(const Instance& inst);
Instance instanceFromJson(const Json& j);
Instance parseInstanceText(const std::string& text);

/// Deterministic serialization used for every file and report the tools emit.
std::string canonicalDump(const Json& j);

} // namespace opalg

#endif
