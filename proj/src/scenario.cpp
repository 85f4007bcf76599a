#include "sofic/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "sofic/bytes.hpp"
#include "sofic/construct.hpp"
#include "sofic/error.hpp"

namespace sofic {

namespace {

// ---------------------------------------------------------------------------
// Strict JSON access

[[noreturn]] void bad(const std::string& where, const std::string& what) { fail(ErrorCode::Parse, where + ": " + what); }

void allow(const Json& j, std::initializer_list<std::string_view> keys, const std::string& where) {
  if (!j.is_object()) bad(where, "expected an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (std::find(keys.begin(), keys.end(), it.key()) == keys.end()) bad(where, "unknown field '" + it.key() + "'");
  }
}

const Json& need(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) bad(where, std::string("missing field '") + key + "'");
  return j[key];
}

std::int64_t as_int(const Json& j, const std::string& where) {
  if (!j.is_number_integer()) bad(where, "expected an integer, got " + j.dump());
  return j.get<std::int64_t>();
}

std::size_t as_count(const Json& j, const std::string& where, std::size_t min = 0) {
  const std::int64_t v = as_int(j, where);
  if (v < static_cast<std::int64_t>(min)) bad(where, "expected an integer >= " + std::to_string(min));
  return static_cast<std::size_t>(v);
}

std::string as_string(const Json& j, const std::string& where) {
  if (!j.is_string()) bad(where, "expected a string, got " + j.dump());
  return j.get<std::string>();
}

const Json& as_array(const Json& j, const std::string& where) {
  if (!j.is_array()) bad(where, "expected an array");
  return j;
}

struct Caps {
  std::size_t carrier = kDefaultCarrierCap;
  std::size_t closure = kDefaultClosureCap;
  std::size_t oracle = 10;
};

// ---------------------------------------------------------------------------
// Groups, elements, actions, points

GroupPtr parse_group(const Json& j, const std::string& where, const Caps& caps);
ActionPtr parse_action(const Json& j, const GroupPtr& G, const std::string& where, const Caps& caps);
Point parse_point(const Json& j, const Action& a, const std::string& where);

GroupElement parse_element(const Json& j, const GroupPtr& G, const std::string& where) {
  if (j.is_object() && j.contains("hex")) {
    allow(j, {"hex"}, where);
    return element_from_hex(as_string(j["hex"], where), *G);
  }
  if (const auto* za = dynamic_cast<const FreeAbelianGroup*>(G.get())) {
    if (j.is_number_integer() && za->rank() == 1) return za->element({j.get<std::int64_t>()});
    std::vector<std::int64_t> c;
    for (const auto& v : as_array(j, where)) c.push_back(as_int(v, where));
    if (c.size() != za->rank()) bad(where, "expected " + std::to_string(za->rank()) + " coordinates");
    return za->element(std::move(c));
  }
  if (const auto* fr = dynamic_cast<const FreeGroup*>(G.get())) return fr->parse_word(as_string(j, where));
  if (const auto* cy = dynamic_cast<const FiniteCyclicGroup*>(G.get())) return cy->element(as_int(j, where));
  if (dynamic_cast<const FinitePermGroup*>(G.get()) != nullptr) {
    GroupElement e(permutation_from_json(as_array(j, where)));
    G->require(e, where.c_str());
    return e;
  }
  if (const auto* ds = dynamic_cast<const DirectSumGroup*>(G.get())) {
    allow(j, {"lamps"}, where);
    std::vector<std::pair<Point, GroupElement>> entries;
    for (const auto& lamp : as_array(need(j, "lamps", where), where)) {
      if (!lamp.is_array() || lamp.size() != 2) bad(where, "a lamp is a [point, value] pair");
      Point p;
      if (const auto* act = dynamic_cast<const Action*>(ds->index().get())) {
        p = parse_point(lamp[0], *act, where);
      } else {
        p = label_point(static_cast<std::uint32_t>(as_count(lamp[0], where)));
      }
      entries.emplace_back(std::move(p), parse_element(lamp[1], ds->base(), where));
    }
    return ds->element(std::move(entries));
  }
  if (const auto* pw = dynamic_cast<const PermWreathGroup*>(G.get())) {
    allow(j, {"f", "sigma"}, where);
    SemidirectElement se;
    for (const auto& v : as_array(need(j, "f", where), where)) se.f.push_back(parse_element(v, pw->base(), where));
    se.sigma = permutation_from_json(need(j, "sigma", where));
    GroupElement e(std::move(se));
    G->require(e, where.c_str());
    return e;
  }
  if (const auto* wr = dynamic_cast<const WreathGroup*>(G.get())) {
    allow(j, {"lamps", "h"}, where);
    std::vector<std::pair<Point, GroupElement>> lamps;
    if (j.contains("lamps")) {
      for (const auto& lamp : as_array(j["lamps"], where)) {
        if (!lamp.is_array() || lamp.size() != 2) bad(where, "a lamp is a [point, value] pair");
        lamps.emplace_back(parse_point(lamp[0], *wr->action(), where), parse_element(lamp[1], wr->base(), where));
      }
    }
    GroupElement h = j.contains("h") ? parse_element(j["h"], wr->acting(), where) : wr->acting()->identity();
    return wr->element(std::move(lamps), std::move(h));
  }
  bad(where, "cannot parse elements of " + G->describe());
}

Point parse_point(const Json& j, const Action& a, const std::string& where) {
  if (j.is_object() && j.contains("hex")) {
    allow(j, {"hex"}, where);
    return Point{from_hex(as_string(j["hex"], where))};
  }
  switch (a.kind()) {
    case ActionKind::IntegerTranslation:
    case ActionKind::LeftTranslation:
      return element_point(parse_element(j, a.group(), where));
    case ActionKind::Coset:
      return static_cast<const CosetAction&>(a).coset_canonical(parse_element(j, a.group(), where));
    case ActionKind::NaturalFinite:
      return label_point(static_cast<std::uint32_t>(as_count(j, where)));
    case ActionKind::Restriction:
      return parse_point(j, *static_cast<const RestrictionAction&>(a).inner(), where);
    case ActionKind::Quotient:
      return parse_point(j, *static_cast<const QuotientAction&>(a).inner(), where);
    case ActionKind::DisjointUnion: {
      const auto& u = static_cast<const DisjointUnionAction&>(a);
      allow(j, {"part", "point"}, where);
      const std::size_t part = as_count(need(j, "part", where), where);
      if (part >= u.parts().size()) bad(where, "part index out of range");
      return u.embed(part, parse_point(need(j, "point", where), *u.parts()[part], where));
    }
  }
  bad(where, "unsupported action");
}

Homomorphism parse_hom(const Json& j, const GroupPtr& source, const GroupPtr& target, const std::string& where) {
  const std::string type = as_string(need(j, "type", where), where);
  Homomorphism h;
  if (type == "identity") {
    allow(j, {"type"}, where);
    h = identity_hom(source);
  } else if (type == "mod") {
    allow(j, {"type", "modulus"}, where);
    h = reduce_mod(source, static_cast<std::int64_t>(as_count(need(j, "modulus", where), where, 1)));
  } else if (type == "scale") {
    allow(j, {"type", "factor"}, where);
    h = scale_hom(source, as_int(need(j, "factor", where), where));
  } else if (type == "wreath_top") {
    allow(j, {"type"}, where);
    h = wreath_top(source);
  } else {
    bad(where, "unknown homomorphism type '" + type + "'");
  }
  if (!h.target->same_as(*target)) bad(where, "homomorphism lands in " + h.target->describe() + ", not " + target->describe());
  return h;
}

GroupPtr parse_group(const Json& j, const std::string& where, const Caps& caps) {
  const std::string type = as_string(need(j, "type", where), where);
  if (type == "free_abelian") {
    allow(j, {"type", "rank"}, where);
    return std::make_shared<FreeAbelianGroup>(as_count(need(j, "rank", where), where, 1));
  }
  if (type == "free") {
    allow(j, {"type", "rank"}, where);
    return std::make_shared<FreeGroup>(as_count(need(j, "rank", where), where, 1));
  }
  if (type == "cyclic") {
    allow(j, {"type", "modulus"}, where);
    return std::make_shared<FiniteCyclicGroup>(static_cast<std::int64_t>(as_count(need(j, "modulus", where), where, 1)));
  }
  if (type == "perm_group") {
    allow(j, {"type", "degree", "generators"}, where);
    std::vector<Permutation> gens;
    if (j.contains("generators")) {
      for (const auto& g : as_array(j["generators"], where)) gens.push_back(permutation_from_json(g));
    }
    return std::make_shared<FinitePermGroup>(as_count(need(j, "degree", where), where, 1), std::move(gens));
  }
  if (type == "direct_sum") {
    allow(j, {"type", "base", "labels"}, where);
    auto base = parse_group(need(j, "base", where), where + ".base", caps);
    return std::make_shared<DirectSumGroup>(
        base, std::make_shared<LabelSpace>(static_cast<std::uint32_t>(as_count(need(j, "labels", where), where, 1))));
  }
  if (type == "perm_wreath") {
    allow(j, {"type", "base", "carrier"}, where);
    auto base = parse_group(need(j, "base", where), where + ".base", caps);
    return std::make_shared<PermWreathGroup>(base, as_count(need(j, "carrier", where), where, 1));
  }
  if (type == "wreath") {
    allow(j, {"type", "base", "acting", "action"}, where);
    auto base = parse_group(need(j, "base", where), where + ".base", caps);
    auto acting = parse_group(need(j, "acting", where), where + ".acting", caps);
    auto action = parse_action(need(j, "action", where), acting, where + ".action", caps);
    return std::make_shared<WreathGroup>(base, acting, action);
  }
  bad(where, "unknown group type '" + type + "'");
}

ActionPtr parse_action(const Json& j, const GroupPtr& G, const std::string& where, const Caps& caps) {
  const std::string type = as_string(need(j, "type", where), where);
  ActionPtr out;
  if (type == "integer_translation") {
    allow(j, {"type", "rank"}, where);
    out = std::make_shared<IntegerTranslation>(as_count(need(j, "rank", where), where, 1));
  } else if (type == "left_translation") {
    allow(j, {"type"}, where);
    out = std::make_shared<LeftTranslation>(G);
  } else if (type == "coset") {
    allow(j, {"type", "subgroup", "subgroup_generators"}, where);
    if (j.contains("subgroup_generators")) {
      std::vector<GroupElement> gens;
      for (const auto& g : as_array(j["subgroup_generators"], where)) gens.push_back(parse_element(g, G, where));
      out = CosetAction::finite_subgroup(G, std::move(gens), caps.closure);
    } else {
      const std::string sub = as_string(need(j, "subgroup", where), where);
      if (sub == "wreath_base") {
        out = CosetAction::wreath_base(G);
      } else if (sub == "trivial") {
        out = CosetAction::trivial(G);
      } else {
        bad(where, "unknown subgroup '" + sub + "'");
      }
    }
  } else if (type == "natural") {
    allow(j, {"type"}, where);
    out = std::make_shared<NaturalFiniteAction>(G);
  } else if (type == "restrict" || type == "quotient") {
    allow(j, {"type", "hom", "inner"}, where);
    const Json& inner = need(j, "inner", where);
    allow(inner, {"group", "action"}, where + ".inner");
    auto inner_group = parse_group(need(inner, "group", where), where + ".inner.group", caps);
    auto inner_action = parse_action(need(inner, "action", where), inner_group, where + ".inner.action", caps);
    auto hom = parse_hom(need(j, "hom", where), G, inner_group, where + ".hom");
    if (type == "restrict") {
      out = std::make_shared<RestrictionAction>(inner_action, hom);
    } else {
      out = std::make_shared<QuotientAction>(inner_action, hom);
    }
  } else if (type == "disjoint_union") {
    allow(j, {"type", "parts"}, where);
    std::vector<ActionPtr> parts;
    const Json& ps = as_array(need(j, "parts", where), where);
    for (std::size_t k = 0; k < ps.size(); ++k) {
      parts.push_back(parse_action(ps[k], G, where + ".parts[" + std::to_string(k) + "]", caps));
    }
    out = std::make_shared<DisjointUnionAction>(std::move(parts));
  } else {
    bad(where, "unknown action type '" + type + "'");
  }
  if (!out->group()->same_as(*G)) {
    bad(where, "action is by " + out->group()->describe() + ", declared group is " + G->describe());
  }
  return out;
}

// ---------------------------------------------------------------------------
// Windows

Window parse_F(const Json& j, const GroupPtr& G, const std::string& where, const Caps& caps) {
  if (j.contains("ball")) {
    allow(j, {"ball"}, where);
    const Json& b = j["ball"];
    allow(b, {"generators", "radius"}, where + ".ball");
    std::vector<GroupElement> gens;
    const Json& gj = need(b, "generators", where);
    if (gj.is_string() && gj.get<std::string>() == "standard") {
      gens = G->generators();
    } else {
      for (const auto& g : as_array(gj, where)) gens.push_back(parse_element(g, G, where + ".ball.generators"));
    }
    return ball(G, gens, as_count(need(b, "radius", where), where));
  }
  if (j.contains("elements")) {
    allow(j, {"elements"}, where);
    std::vector<GroupElement> els;
    for (const auto& e : as_array(j["elements"], where)) els.push_back(parse_element(e, G, where));
    return Window(G, std::move(els));
  }
  if (j.contains("interval")) {
    allow(j, {"interval"}, where);
    const Json& iv = as_array(j["interval"], where);
    if (iv.size() != 2) bad(where, "interval is [lo, hi]");
    std::vector<GroupElement> els;
    for (std::int64_t v = as_int(iv[0], where); v <= as_int(iv[1], where); ++v) els.push_back(parse_element(Json(v), G, where));
    return Window(G, std::move(els));
  }
  if (j.contains("all")) {
    allow(j, {"all"}, where);
    return Window(G, enumerate_group(*G, caps.carrier));
  }
  bad(where, "expected one of 'ball', 'elements', 'interval', 'all'");
}

PointWindow parse_E(const Json& j, const Action& a, const std::string& where) {
  if (j.contains("points")) {
    allow(j, {"points"}, where);
    std::vector<Point> pts;
    for (const auto& p : as_array(j["points"], where)) pts.push_back(parse_point(p, a, where));
    return PointWindow(std::move(pts));
  }
  if (j.contains("interval")) {
    allow(j, {"interval"}, where);
    const Json& iv = as_array(j["interval"], where);
    if (iv.size() != 2) bad(where, "interval is [lo, hi]");
    std::vector<Point> pts;
    for (std::int64_t v = as_int(iv[0], where); v <= as_int(iv[1], where); ++v) pts.push_back(parse_point(Json(v), a, where));
    return PointWindow(std::move(pts));
  }
  if (j.contains("all")) {
    allow(j, {"all"}, where);
    auto pts = a.finite_points();
    if (!pts) bad(where, "the action's point set is infinite");
    return PointWindow(std::move(*pts));
  }
  bad(where, "expected one of 'points', 'interval', 'all'");
}

// ---------------------------------------------------------------------------
// Plans

struct Plan {
  std::string type;
  GroupPtr group;
  ActionPtr action;
  std::optional<Window> F;
  std::optional<PointWindow> E;
  Rational eps{0};
  std::vector<GroupElement> folner;
  CompletionPolicy policy = CompletionPolicy::CyclicFill;
  Json provider;
  std::optional<Homomorphism> hom;
  std::size_t fixture_carrier = 0;
  std::filesystem::path map_file;
  std::filesystem::path witness_file;
  std::vector<Plan> children;
};

Json parse_provider(const Json& j, const std::string& where) {
  const std::string type = as_string(need(j, "type", where), where);
  if (type == "finite_regular") {
    allow(j, {"type"}, where);
  } else if (type == "quotient_chain") {
    allow(j, {"type", "modulus"}, where);
    as_count(need(j, "modulus", where), where, 1);
  } else {
    bad(where, "unknown provider type '" + type + "'");
  }
  return j;
}

ProviderPtr make_provider(const Json& cfg, const GroupPtr& G, const Caps& caps) {
  if (cfg["type"] == "finite_regular") return std::make_shared<FiniteRegularProvider>(G, caps.carrier);
  return std::make_shared<QuotientChainProvider>(G, cfg["modulus"].get<std::int64_t>(), caps.carrier);
}

void parse_constructor(const Json& c, Plan& p, const std::filesystem::path& base_dir, const Caps& caps,
                       const std::string& where);

/// A nested {group?, action?, constructor, F, E, eps?} block.
Plan parse_subplan(const Json& j, GroupPtr group, ActionPtr action, const Rational& eps,
                   const std::filesystem::path& base_dir, const Caps& caps, const std::string& where) {
  allow(j, {"group", "action", "constructor", "F", "E", "eps"}, where);
  Plan p;
  p.group = j.contains("group") ? parse_group(j["group"], where + ".group", caps) : std::move(group);
  if (!p.group) bad(where, "missing field 'group'");
  p.action = j.contains("action") ? parse_action(j["action"], p.group, where + ".action", caps) : std::move(action);
  p.eps = j.contains("eps") ? rational_from_json(j["eps"]) : eps;
  if (j.contains("F")) p.F = parse_F(j["F"], p.group, where + ".F", caps);
  if (j.contains("E")) {
    if (!p.action) bad(where, "E needs an action");
    p.E = parse_E(j["E"], *p.action, where + ".E");
  }
  parse_constructor(need(j, "constructor", where), p, base_dir, caps, where + ".constructor");
  return p;
}

void require_for(const Plan& p, bool action, bool F, bool E, const std::string& where) {
  if (action && !p.action) bad(where, "constructor '" + p.type + "' needs an action");
  if (F && !p.F) bad(where, "constructor '" + p.type + "' needs F");
  if (E && !p.E) bad(where, "constructor '" + p.type + "' needs E");
}

CompletionPolicy parse_policy(const Json& c, const std::string& where) {
  if (!c.contains("policy")) return CompletionPolicy::CyclicFill;
  const std::string s = as_string(c["policy"], where);
  if (s == "cyclic_fill") return CompletionPolicy::CyclicFill;
  if (s == "seeded_shuffle") return CompletionPolicy::SeededShuffle;
  bad(where, "unknown completion policy '" + s + "'");
}

void parse_constructor(const Json& c, Plan& p, const std::filesystem::path& base_dir, const Caps& caps,
                       const std::string& where) {
  p.type = as_string(need(c, "type", where), where);
  if (p.type == "amenable") {
    allow(c, {"type", "folner", "policy"}, where);
    require_for(p, true, true, true, where);
    p.policy = parse_policy(c, where);
    const Json& f = need(c, "folner", where);
    if (f.contains("box")) {
      allow(f, {"box"}, where + ".folner");
      allow(f["box"], {"side"}, where + ".folner.box");
      const auto* za = dynamic_cast<const FreeAbelianGroup*>(p.group.get());
      if (za == nullptr) bad(where, "a Folner box needs Z^d");
      p.folner = folner_box(za->rank(), as_count(need(f["box"], "side", where), where, 1));
    } else {
      const Window w = parse_F(f, p.group, where + ".folner", caps);
      p.folner = w.elements();
    }
  } else if (p.type == "free") {
    allow(c, {"type", "policy"}, where);
    require_for(p, true, true, true, where);
    p.policy = parse_policy(c, where);
  } else if (p.type == "coset") {
    allow(c, {"type", "provider"}, where);
    require_for(p, true, true, true, where);
    if (dynamic_cast<const CosetAction*>(p.action.get()) == nullptr) bad(where, "coset constructor needs a coset action");
    p.provider = parse_provider(need(c, "provider", where), where + ".provider");
  } else if (p.type == "combine") {
    allow(c, {"type", "parts"}, where);
    require_for(p, true, true, false, where);
    const auto* u = dynamic_cast<const DisjointUnionAction*>(p.action.get());
    if (u == nullptr) bad(where, "combine needs a disjoint_union action");
    const Json& parts = as_array(need(c, "parts", where), where);
    if (parts.size() != u->parts().size()) bad(where, "one part per orbit is required");
    const Rational part_eps = combine_part_eps(p.eps, parts.size());
    for (std::size_t k = 0; k < parts.size(); ++k) {
      const std::string pw = where + ".parts[" + std::to_string(k) + "]";
      allow(parts[k], {"constructor", "E"}, pw);
      Plan child;
      child.group = p.group;
      child.action = u->parts()[k];
      child.F = p.F;
      child.eps = part_eps;
      child.E = parse_E(need(parts[k], "E", pw), *child.action, pw + ".E");
      parse_constructor(need(parts[k], "constructor", pw), child, base_dir, caps, pw + ".constructor");
      p.children.push_back(std::move(child));
    }
  } else if (p.type == "restrict_or_quotient") {
    allow(c, {"type", "hom", "inner"}, where);
    require_for(p, false, true, false, where);
    Plan child = parse_subplan(need(c, "inner", where), nullptr, nullptr, p.eps, base_dir, caps, where + ".inner");
    p.hom = parse_hom(need(c, "hom", where), p.group, child.group, where + ".hom");
    if (!p.action && child.action) p.action = std::make_shared<QuotientAction>(child.action, *p.hom);
    p.children.push_back(std::move(child));
  } else if (p.type == "wreath") {
    allow(c, {"type", "stage", "base_provider"}, where);
    require_for(p, false, true, false, where);
    const auto* w = dynamic_cast<const WreathGroup*>(p.group.get());
    if (w == nullptr) bad(where, "wreath constructor needs a wreath group");
    Plan stage = parse_subplan(need(c, "stage", where), w->acting(), w->action(), p.eps, base_dir, caps, where + ".stage");
    require_for(stage, true, true, true, where + ".stage");
    p.provider = c.contains("base_provider") ? parse_provider(c["base_provider"], where + ".base_provider")
                                             : Json{{"type", "finite_regular"}};
    p.children.push_back(std::move(stage));
  } else if (p.type == "fixture") {
    allow(c, {"type", "fixture", "carrier"}, where);
    require_for(p, false, true, false, where);
    if (as_string(need(c, "fixture", where), where) != "constant_identity") bad(where, "unknown fixture");
    p.fixture_carrier = as_count(need(c, "carrier", where), where, 1);
  } else if (p.type == "table") {
    allow(c, {"type", "map", "witness"}, where);
    p.map_file = base_dir / as_string(need(c, "map", where), where);
    if (c.contains("witness")) p.witness_file = base_dir / as_string(c["witness"], where);
  } else {
    bad(where, "unknown constructor type '" + p.type + "'");
  }
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::Parse, "cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return Json::parse(ss.str());
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::Parse, path.string() + ": " + e.what());
  }
}

/// A stored map or a whole report document carrying one.
SoficMap load_map(const std::filesystem::path& path, const GroupPtr& G) {
  Json j = read_json_file(path);
  return map_from_json(j.contains("map") ? j["map"] : j, G);
}

OrbitWitness load_witness(const std::filesystem::path& path) {
  Json j = read_json_file(path);
  return witness_from_json(j.contains("witness") ? j["witness"] : j);
}

// ---------------------------------------------------------------------------
// Execution

struct Executed {
  std::optional<Construction> construction;
  std::optional<WreathResult> wreath;
  Json stage;
};

Construction execute(const Plan& p, const Caps& caps, std::uint64_t seed);

WreathStage make_stage(const Plan& p, const Caps& caps, std::uint64_t seed) {
  const Plan& s = p.children.front();
  const auto& w = static_cast<const WreathGroup&>(*p.group);
  WreathStage stage{execute(s, caps, seed), *s.F, s.eps, nullptr};
  stage.base_provider = make_provider(p.provider, stage_base_group(w, stage), caps);
  return stage;
}

Construction execute(const Plan& p, const Caps& caps, std::uint64_t seed) {
  if (p.type == "amenable") return amenable_construct(*p.action, p.folner, *p.F, *p.E, p.policy, seed);
  if (p.type == "free") return free_construct(*p.action, *p.F, *p.E, p.policy, seed, caps.carrier);
  if (p.type == "coset") {
    const auto provider = make_provider(p.provider, p.group, caps);
    return coset_construct(static_cast<const CosetAction&>(*p.action), *provider, *p.F, *p.E, p.eps, caps.closure);
  }
  if (p.type == "combine") {
    std::vector<Construction> parts;
    for (const auto& c : p.children) parts.push_back(execute(c, caps, seed));
    std::vector<const Construction*> ptrs;
    for (const auto& c : parts) ptrs.push_back(&c);
    return combine_orbits(static_cast<const DisjointUnionAction&>(*p.action), ptrs, *p.F, caps.carrier);
  }
  if (p.type == "restrict_or_quotient") {
    return restrict_or_quotient(execute(p.children.front(), caps, seed), *p.hom, *p.F);
  }
  if (p.type == "fixture") {
    const Window domain = p.F->united(p.F->product(*p.F));
    std::vector<Permutation> perms(domain.size(), Permutation::identity(p.fixture_carrier));
    OrbitWitness w;
    if (p.E) w.E = *p.E;
    w.labels_size = static_cast<std::uint32_t>(w.E.size());
    for (std::uint32_t s = 0; s < p.fixture_carrier; ++s) {
      std::vector<std::uint32_t> row(w.E.size());
      for (std::uint32_t j = 0; j < row.size(); ++j) row[j] = j;
      w.S.push_back(s);
      w.pi.push_back(std::move(row));
    }
    return Construction(SoficMap(p.group, p.fixture_carrier, domain.elements(), std::move(perms)), std::move(w));
  }
  if (p.type == "table") {
    SoficMap m = load_map(p.map_file, p.group);
    OrbitWitness w;
    if (!p.witness_file.empty()) w = load_witness(p.witness_file);
    return Construction(std::move(m), std::move(w));
  }
  fail(ErrorCode::Contract, "constructor '" + p.type + "' cannot run here");
}

Json plan_json(const Plan& p) {
  Json j;
  j["type"] = p.type;
  j["group"] = p.group->describe();
  if (p.action) j["action"] = p.action->describe();
  if (p.F) j["F"] = p.F->size();
  if (p.E) j["E"] = p.E->size();
  j["eps"] = to_string(p.eps);
  if (!p.folner.empty()) j["folner"] = p.folner.size();
  if (!p.provider.is_null()) j["provider"] = p.provider;
  if (p.hom) j["hom"] = p.hom->name;
  if (!p.children.empty()) {
    Json kids = Json::array();
    for (const auto& c : p.children) kids.push_back(plan_json(c));
    j["children"] = std::move(kids);
  }
  return j;
}

const char* command_name(Command c) {
  switch (c) {
    case Command::Construct: return "construct";
    case Command::Verify: return "verify";
    case Command::Oracle: return "oracle";
    case Command::Explain: return "explain";
  }
  return "?";
}

struct Resolved {
  std::string name;
  Plan plan;
  Rational eps{0};
  std::uint64_t seed = 0;
  std::vector<std::string> checks;
  Caps caps;
  bool dump_map = false;
  bool dump_witness = false;
};

const std::vector<std::string> kChecks = {"multiplicative", "orbit_witness", "separation", "group_separation",
                                          "good_sets"};

Resolved resolve(const Json& s, const std::filesystem::path& base_dir, const RunOptions& options) {
  const std::string where = "scenario";
  allow(s, {"version", "name", "group", "action", "constructor", "F", "E", "eps", "seed", "checks", "caps", "dump"},
        where);
  if (as_int(need(s, "version", where), where + ".version") != 1) bad(where, "unsupported version");
  Resolved r;
  r.name = s.contains("name") ? as_string(s["name"], where + ".name") : "unnamed";
  if (s.contains("caps")) {
    allow(s["caps"], {"carrier", "closure", "oracle"}, where + ".caps");
    if (s["caps"].contains("carrier")) r.caps.carrier = as_count(s["caps"]["carrier"], where + ".caps", 1);
    if (s["caps"].contains("closure")) r.caps.closure = as_count(s["caps"]["closure"], where + ".caps", 1);
    if (s["caps"].contains("oracle")) r.caps.oracle = as_count(s["caps"]["oracle"], where + ".caps", 1);
  }
  if (options.carrier_cap) r.caps.carrier = *options.carrier_cap;
  r.eps = rational_from_json(need(s, "eps", where));
  if (!(r.eps > Rational(0) && r.eps < Rational(1))) bad(where + ".eps", "eps must lie strictly between 0 and 1");
  r.seed = s.contains("seed") ? static_cast<std::uint64_t>(as_count(s["seed"], where + ".seed")) : 0;
  if (options.seed) r.seed = *options.seed;
  if (s.contains("dump")) {
    allow(s["dump"], {"map", "witness"}, where + ".dump");
    r.dump_map = s["dump"].value("map", false);
    r.dump_witness = s["dump"].value("witness", false);
  }

  Plan& p = r.plan;
  p.group = parse_group(need(s, "group", where), where + ".group", r.caps);
  if (s.contains("action")) p.action = parse_action(s["action"], p.group, where + ".action", r.caps);
  p.eps = r.eps;
  p.F = parse_F(need(s, "F", where), p.group, where + ".F", r.caps);
  if (s.contains("E")) {
    if (!p.action) bad(where, "E needs an action");
    p.E = parse_E(s["E"], *p.action, where + ".E");
  }
  parse_constructor(need(s, "constructor", where), p, base_dir, r.caps, where + ".constructor");

  if (s.contains("checks")) {
    for (const auto& c : as_array(s["checks"], where + ".checks")) {
      const std::string name = as_string(c, where + ".checks");
      if (std::find(kChecks.begin(), kChecks.end(), name) == kChecks.end()) bad(where + ".checks", "unknown check '" + name + "'");
      r.checks.push_back(name);
    }
  } else if (p.type == "wreath") {
    r.checks = {"multiplicative", "separation"};
  } else {
    r.checks = {"multiplicative", "orbit_witness"};
  }
  for (const auto& c : r.checks) {
    const bool needs_witness = c == "orbit_witness" || c == "group_separation";
    if (needs_witness && p.type == "wreath") bad(where + ".checks", "check '" + c + "' needs an orbit witness");
    if (needs_witness && !p.action) bad(where + ".checks", "check '" + c + "' needs an action");
  }
  return r;
}

std::string yes(bool b) { return b ? "pass" : "FAIL"; }

int error_exit(const Error& e, int otherwise) { return e.code() == ErrorCode::CapOverflow ? kExitCap : otherwise; }

Json error_json(const std::string& code, const std::string& message) {
  Json j;
  j["code"] = code;
  j["message"] = message;
  return j;
}

}  // namespace

RunResult run_scenario(const Json& scenario, const std::filesystem::path& base_dir, Command command,
                       const RunOptions& options) {
  RunResult out;
  Json& doc = out.document;
  doc["scenario"] = scenario.is_object() && scenario.contains("name") && scenario["name"].is_string()
                        ? scenario["name"].get<std::string>()
                        : "unnamed";
  doc["command"] = command_name(command);

  std::optional<Resolved> resolved;
  try {
    resolved = resolve(scenario, base_dir, options);
  } catch (const Error& e) {
    out.exit_code = error_exit(e, kExitParse);
    doc["error"] = error_json(to_string(e.code()), e.what());
  } catch (const nlohmann::json::exception& e) {
    out.exit_code = kExitParse;
    doc["error"] = error_json("Parse", e.what());
  }
  if (!resolved) {
    doc["pass"] = false;
    out.summary = "error: " + doc["error"]["message"].get<std::string>() + "\n";
    return out;
  }
  const Resolved& r = *resolved;
  const Plan& p = r.plan;
  doc["seed"] = r.seed;
  doc["eps"] = rational_json(r.eps);
  doc["group"] = p.group->describe();
  doc["action"] = p.action ? Json(p.action->describe()) : Json();
  doc["checks"] = r.checks;
  std::ostringstream sum;
  sum << "scenario " << r.name << ": " << command_name(command) << " with " << p.type << " on "
      << (p.action ? p.action->describe() : p.group->describe()) << "\n";

  if (command == Command::Explain) {
    doc["plan"] = plan_json(p);
    doc["pass"] = true;
    sum << "  |F| " << p.F->size() << ", |E| " << (p.E ? p.E->size() : 0) << ", eps " << to_string(r.eps) << "\n";
    sum << "  checks:";
    for (const auto& c : r.checks) sum << " " << c;
    sum << "\n";
    out.exit_code = kExitPass;
    out.summary = sum.str();
    return out;
  }

  try {
    Diagnostics diag;
    std::optional<Construction> built;
    std::optional<WreathResult> wreath;
    std::optional<WreathStage> stage;
    if (p.type == "wreath") {
      stage = make_stage(p, r.caps, r.seed);
      wreath = wreath_sofic_map(static_cast<const WreathGroup&>(*p.group), *p.F, *stage, r.eps, r.caps.carrier);
    } else {
      built = execute(p, r.caps, r.seed);
    }
    if (command == Command::Verify) {
      if (options.map_path) {
        SoficMap m = load_map(*options.map_path, p.group);
        OrbitWitness w = built ? built->witness : OrbitWitness{};
        if (options.witness_path) w = load_witness(*options.witness_path);
        built.emplace(std::move(m), std::move(w));
        wreath.reset();
      } else if (options.witness_path && built) {
        built->witness = load_witness(*options.witness_path);
      }
    }
    const SoficMap& map = built ? built->map : wreath->map;
    const PointWindow E = p.E ? *p.E : (built ? built->witness.E : PointWindow{});

    Json cons;
    cons["type"] = p.type;
    if (built) {
      Json notes = Json::object();
      for (const auto& [k, v] : built->notes) notes[k] = v;
      cons["notes"] = std::move(notes);
    }
    doc["constructor"] = std::move(cons);
    doc["carrier"] = map.carrier_size();
    doc["domain_size"] = map.domain_window().size();

    if (command == Command::Oracle) {
      if (!p.action || !built) fail(ErrorCode::Contract, "the oracle needs an action and an orbit witness");
      OracleCaps oc;
      oc.carrier = r.caps.oracle;
      const OracleResult best = oracle_max_witness(map, *p.action, *p.F, E, oc);
      const bool independent = oracle_verify(map, built->witness, *p.action, *p.F, E, r.eps, oc);
      const VerificationReport rep = check_orbit_witness(map, built->witness, *p.action, *p.F, E, r.eps);
      doc["oracle"] = oracle_json(best, map.carrier_size());
      doc["constructor_S_size"] = built->witness.S.size();
      doc["verifiers_agree"] = independent == rep.pass_witness;
      const bool ok = built->witness.S.size() <= best.best_S_size && independent == rep.pass_witness;
      doc["pass"] = ok;
      sum << "  oracle best |S| " << best.best_S_size << ", constructor |S| " << built->witness.S.size()
          << ", verifiers agree: " << (independent == rep.pass_witness ? "yes" : "no") << "\n";
      sum << "result: " << (ok ? "PASS" : "FAIL") << "\n";
      out.exit_code = ok ? kExitPass : kExitFail;
      out.summary = sum.str();
      return out;
    }

    VerificationReport report;
    report.unital = map.unital();
    bool pass = report.unital;
    if (!report.unital) diag.add("table(identity) is not the identity permutation");
    for (const auto& c : r.checks) {
      if (c == "multiplicative") {
        const auto m = check_multiplicative(map, *p.F, r.eps, &diag);
        report.mult_defect_max = m.mult_defect_max;
        report.mult_pairs_checked = m.mult_pairs_checked;
        report.pass_mult = m.pass_mult;
        pass = pass && m.pass_mult;
        sum << "  multiplicative: defect " << to_string(m.mult_defect_max) << " over " << m.mult_pairs_checked
            << " pairs (" << yes(m.pass_mult) << ")\n";
      } else if (c == "orbit_witness") {
        const auto o = check_orbit_witness(map, built->witness, *p.action, *p.F, E, r.eps, &diag);
        report.witness_fraction = o.witness_fraction;
        report.equivariance_violations = o.equivariance_violations;
        report.pass_witness = o.pass_witness;
        pass = pass && o.pass_witness;
        sum << "  orbit witness: |S|/|A| = " << to_string(o.witness_fraction) << ", violations "
            << o.equivariance_violations << " (" << yes(o.pass_witness) << ")\n";
      } else if (c == "separation") {
        const auto sp = check_separation(map, *p.F, r.eps, &diag);
        report.separation_min = sp.separation_min;
        report.pass_separation = sp.pass_separation;
        pass = pass && sp.pass_separation;
        sum << "  separation: min d(1, phi(g)) = " << to_string(sp.separation_min) << " (" << yes(sp.pass_separation)
            << ")\n";
      } else if (c == "group_separation") {
        const auto gs = group_separation_from_action(map, built->witness, *p.action, *p.F, r.eps, &diag);
        Json g;
        g["label"] = "evidence";
        g["separation_min"] = rational_json(gs.separation_min);
        g["pass"] = gs.pass_separation;
        doc["group_separation"] = std::move(g);
        pass = pass && gs.pass_separation;
        sum << "  group separation evidence: moved fraction " << to_string(gs.separation_min) << " ("
            << yes(gs.pass_separation) << ")\n";
      } else if (c == "good_sets") {
        const auto gs = good_sets(map, *p.F);
        Json g;
        g["S1"] = gs.S1.size();
        g["S2"] = gs.S2.size();
        g["S"] = gs.S.size();
        doc["good_sets"] = std::move(g);
        sum << "  good sets: |S1| " << gs.S1.size() << ", |S2| " << gs.S2.size() << ", |S| " << gs.S.size() << "\n";
      }
    }
    doc["report"] = report_json(report);
    if (stage) {
      Json st;
      st["carrier"] = stage->stage.map.carrier_size();
      st["S"] = stage->stage.witness.S.size();
      st["labels"] = stage->stage.witness.labels_size;
      st["E"] = stage->stage.witness.E.size();
      st["eps_declared"] = rational_json(stage->eps_i);
      st["eps_measured"] = rational_json(wreath->stage_eps);
      st["budget"] = rational_json(Rational(5) * wreath->stage_eps);
      st["within_budget"] = wreath->mult.mult_defect_max <= Rational(5) * wreath->stage_eps;
      doc["stage"] = std::move(st);
      sum << "  stage: carrier " << stage->stage.map.carrier_size() << ", measured eps_i "
          << to_string(wreath->stage_eps) << "\n";
    }
    doc["diagnostics"] = diag.lines;
    doc["pass"] = pass;
    if (r.dump_map) doc["map"] = map_json(map);
    if (r.dump_witness && built) doc["witness"] = witness_json(built->witness, map.carrier_size());
    for (const auto& line : diag.lines) sum << "  - " << line << "\n";
    sum << "result: " << (pass ? "PASS" : "FAIL") << "\n";
    out.exit_code = pass ? kExitPass : kExitFail;
  } catch (const Error& e) {
    out.exit_code = error_exit(e, e.code() == ErrorCode::Parse ? kExitParse : kExitFail);
    doc["error"] = error_json(to_string(e.code()), e.what());
    doc["pass"] = false;
    sum << "error: " << e.what() << "\n";
  } catch (const std::exception& e) {
    out.exit_code = kExitFail;
    doc["error"] = error_json("Internal", e.what());
    doc["pass"] = false;
    sum << "error: " << e.what() << "\n";
  }
  out.summary = sum.str();
  return out;
}

RunResult run_scenario_file(const std::filesystem::path& path, Command command, const RunOptions& options) {
  Json scenario;
  try {
    scenario = read_json_file(path);
  } catch (const Error& e) {
    RunResult out;
    out.exit_code = kExitParse;
    out.document["scenario"] = path.filename().string();
    out.document["command"] = command_name(command);
    out.document["error"] = error_json(to_string(e.code()), e.what());
    out.document["pass"] = false;
    out.summary = std::string("error: ") + e.what() + "\n";
    return out;
  }
  return run_scenario(scenario, path.parent_path(), command, options);
}

}  // namespace sofic
