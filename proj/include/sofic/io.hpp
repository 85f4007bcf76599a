#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"
#include "sofic/approx.hpp"
#include "sofic/oracle.hpp"

namespace sofic {

/// Key order is insertion order, which keeps every document byte-stable.
using Json = nlohmann::ordered_json;

/// {"num": p, "den": q, "decimal": "0.100000"}.
Json rational_json(const Rational& r);
/// Accepts "p/q", "p", an integer, or {"num": p, "den": q}.
Rational rational_from_json(const Json& j);

Json permutation_json(const Permutation& p);
Permutation permutation_from_json(const Json& j);

/// Exactly the report fields, in declaration order.
Json report_json(const VerificationReport& r);

std::string element_hex(const GroupElement& e);
/// Decodes and checks membership in `group`.
GroupElement element_from_hex(const std::string& hex, const Group& group);

/// {"group": ..., "carrier": n, "entries": [{"element": hex, "label": text, "perm": [...]}]}.
Json map_json(const SoficMap& m);
SoficMap map_from_json(const Json& j, const GroupPtr& group);

/// {"carrier": n, "S": [...], "labels": |B|, "E": [pointHex...], "pi": {"s": {pointHex: label}}}.
Json witness_json(const OrbitWitness& w, std::size_t carrier);
OrbitWitness witness_from_json(const Json& j);

Json oracle_json(const OracleResult& r, std::size_t carrier);

/// Writes through a temporary sibling and renames it into place.
void write_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace sofic
