#include "sofic/io.hpp"

#include <fstream>

#include "sofic/bytes.hpp"
#include "sofic/error.hpp"

namespace sofic {

Json rational_json(const Rational& r) {
  Json j;
  j["num"] = r.numerator();
  j["den"] = r.denominator();
  j["decimal"] = to_decimal(r);
  return j;
}

Rational rational_from_json(const Json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
  if (j.is_object() && j.contains("num") && j.contains("den") && j["num"].is_number_integer() &&
      j["den"].is_number_integer()) {
    if (j["den"].get<std::int64_t>() == 0) fail(ErrorCode::Parse, "rational with zero denominator");
    return Rational(j["num"].get<std::int64_t>(), j["den"].get<std::int64_t>());
  }
  fail(ErrorCode::Parse, "expected a rational, got " + j.dump());
}

Json permutation_json(const Permutation& p) {
  Json j = Json::array();
  for (std::uint32_t v : p.images()) j.push_back(v);
  return j;
}

Permutation permutation_from_json(const Json& j) {
  if (!j.is_array()) fail(ErrorCode::Parse, "permutation must be an array of indices");
  std::vector<std::uint32_t> images;
  for (const auto& v : j) {
    if (!v.is_number_unsigned()) fail(ErrorCode::Parse, "permutation entries must be nonnegative integers");
    images.push_back(v.get<std::uint32_t>());
  }
  return Permutation(std::move(images));
}

Json report_json(const VerificationReport& r) {
  Json j;
  j["unital"] = r.unital;
  j["mult_defect_max"] = rational_json(r.mult_defect_max);
  j["mult_pairs_checked"] = r.mult_pairs_checked;
  j["witness_fraction"] = rational_json(r.witness_fraction);
  j["equivariance_violations"] = r.equivariance_violations;
  j["separation_min"] = rational_json(r.separation_min);
  j["pass_mult"] = r.pass_mult;
  j["pass_witness"] = r.pass_witness;
  j["pass_separation"] = r.pass_separation;
  return j;
}

std::string element_hex(const GroupElement& e) { return to_hex(encode(e)); }

GroupElement element_from_hex(const std::string& hex, const Group& group) {
  GroupElement e = decode(from_hex(hex));
  group.require(e, ("element " + hex).c_str());
  return e;
}

Json map_json(const SoficMap& m) {
  Json j;
  j["group"] = m.group()->describe();
  j["carrier"] = m.carrier_size();
  Json entries = Json::array();
  for (std::size_t i = 0; i < m.permutations().size(); ++i) {
    const GroupElement& g = m.domain_window().elements()[i];
    Json e;
    e["element"] = element_hex(g);
    e["label"] = m.group()->format(g);
    e["perm"] = permutation_json(m.permutations()[i]);
    entries.push_back(std::move(e));
  }
  j["entries"] = std::move(entries);
  return j;
}

SoficMap map_from_json(const Json& j, const GroupPtr& group) {
  if (!j.is_object() || !j.contains("carrier") || !j.contains("entries")) {
    fail(ErrorCode::Parse, "map document needs 'carrier' and 'entries'");
  }
  if (j.contains("group") && j["group"] != group->describe()) {
    fail(ErrorCode::FamilyMismatch, "map is for " + j["group"].dump() + ", scenario group is " + group->describe());
  }
  const auto carrier = j["carrier"].get<std::size_t>();
  std::vector<GroupElement> domain;
  std::vector<Permutation> perms;
  for (const auto& e : j["entries"]) {
    domain.push_back(element_from_hex(e.at("element").get<std::string>(), *group));
    perms.push_back(permutation_from_json(e.at("perm")));
  }
  return SoficMap(group, carrier, std::move(domain), std::move(perms));
}

Json witness_json(const OrbitWitness& w, std::size_t carrier) {
  Json j;
  j["carrier"] = carrier;
  j["S"] = w.S;
  j["labels"] = w.labels_size;
  Json E = Json::array();
  for (const auto& p : w.E.points()) E.push_back(to_hex(p.bytes));
  j["E"] = std::move(E);
  Json pi = Json::object();
  for (std::size_t k = 0; k < w.S.size(); ++k) {
    Json row = Json::object();
    for (std::size_t x = 0; x < w.E.size(); ++x) row[to_hex(w.E.points()[x].bytes)] = w.pi[k][x];
    pi[std::to_string(w.S[k])] = std::move(row);
  }
  j["pi"] = std::move(pi);
  return j;
}

OrbitWitness witness_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("S") || !j.contains("labels") || !j.contains("E") || !j.contains("pi")) {
    fail(ErrorCode::Parse, "witness document needs 'S', 'labels', 'E' and 'pi'");
  }
  OrbitWitness w;
  w.S = j["S"].get<std::vector<std::uint32_t>>();
  w.labels_size = j["labels"].get<std::uint32_t>();
  std::vector<Point> pts;
  for (const auto& p : j["E"]) pts.push_back(Point{from_hex(p.get<std::string>())});
  w.E = PointWindow(std::move(pts));
  for (std::uint32_t s : w.S) {
    const std::string key = std::to_string(s);
    if (!j["pi"].contains(key)) fail(ErrorCode::MalformedWitness, "pi_" + key + " is missing");
    const auto& row = j["pi"][key];
    std::vector<std::uint32_t> labels;
    for (const auto& p : w.E.points()) {
      const std::string hex = to_hex(p.bytes);
      if (!row.contains(hex)) fail(ErrorCode::MalformedWitness, "pi_" + key + " is undefined at point " + hex);
      labels.push_back(row[hex].get<std::uint32_t>());
    }
    w.pi.push_back(std::move(labels));
  }
  return w;
}

Json oracle_json(const OracleResult& r, std::size_t carrier) {
  Json j;
  j["best_S_size"] = r.best_S_size;
  j["best_witness"] = r.best_witness ? witness_json(*r.best_witness, carrier) : Json();
  j["search_space_exhausted"] = r.search_space_exhausted;
  return j;
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("write to " + tmp.string() + " failed");
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace sofic
