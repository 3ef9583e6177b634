// Copyright (c) 2026 The clocksched Authors.
// SPDX-License-Identifier: Apache-2.0

#include <clocksched/emit.hpp>

#include <json.hpp>

namespace clocksched {

using Json = nlohmann::ordered_json;

namespace {

constexpr const char *kFormat = "clocksched-schedule";

const char *role_name(NodeRole r) {
  switch (r) {
  case NodeRole::Clock:
    return "clock";
  case NodeRole::Tile:
    return "tile";
  case NodeRole::Lattice:
    break;
  }
  return "lattice";
}

NodeRole role_of(const std::string &s) {
  if (s == "clock")
    return NodeRole::Clock;
  if (s == "tile")
    return NodeRole::Tile;
  if (s == "lattice")
    return NodeRole::Lattice;
  throw Error("bad schedule document: unknown role '" + s + "'");
}

Json location_json(const AccessModel &access, LocationId l) {
  const auto [array, at] = access.decode(l);
  return Json{{"array", access.arrays()[static_cast<std::size_t>(array)].name},
              {"at", at}};
}

LocationId location_of(const AccessModel &access, const Json &j) {
  const int id = access.array_id(j.at("array").get<std::string>());
  if (id < 0)
    throw Error("bad schedule document: unknown array in temp plan");
  const LocationId l =
      access.location(id, j.at("at").get<std::vector<std::int64_t>>());
  if (l == kOutside)
    throw Error("bad schedule document: temp plan location out of range");
  return l;
}

Json node_json(const ScheduleTree &tree, const Nest &nest, std::size_t d) {
  const EnumNode &n = nest.nodes[d];
  Json guards = Json::array();
  for (const Guard &g : n.guards) {
    if (g.kind == Guard::Kind::Bound)
      guards.push_back({{"kind", "bound"}, {"index", g.index}, {"limit", g.limit}});
    else
      guards.push_back({{"kind", "orbit"}});
  }
  Json body;
  if (d + 1 < nest.nodes.size())
    body = node_json(tree, nest, d + 1);
  else
    body = {{"leaf", tree.spec ? "formulas" : "time_point"}};
  return Json{{"index", n.index},
              {"role", role_name(n.role)},
              {"step", n.step},
              {"lower", {{"bases", n.lower.bases}, {"constant", n.lower.constant}}},
              {"extent", n.extent},
              {"convolved", n.convolved},
              {"guard", guards},
              {"body", body}};
}

void read_nodes(const Json &j, std::vector<EnumNode> &out) {
  if (j.contains("leaf"))
    return;
  EnumNode n;
  n.index = j.at("index").get<std::string>();
  n.role = role_of(j.at("role").get<std::string>());
  n.step = j.at("step").get<std::int64_t>();
  n.lower.bases = j.at("lower").at("bases").get<std::vector<std::string>>();
  n.lower.constant = j.at("lower").at("constant").get<std::int64_t>();
  n.extent = j.at("extent").get<std::int64_t>();
  n.convolved = j.at("convolved").get<bool>();
  for (const Json &g : j.at("guard")) {
    const std::string kind = g.at("kind").get<std::string>();
    if (kind == "bound")
      n.guards.push_back({Guard::Kind::Bound, g.at("index").get<std::string>(),
                          g.at("limit").get<std::int64_t>()});
    else if (kind == "orbit")
      n.guards.push_back({Guard::Kind::OrbitRep, "", 0});
    else
      throw Error("bad schedule document: unknown guard kind '" + kind + "'");
  }
  out.push_back(std::move(n));
  read_nodes(j.at("body"), out);
}

// Event and read keys are rendered as (point, formula[, ref]).
Json plan_json(const ScheduleTree &tree) {
  const TempPlan &p = tree.temp_plan;
  Json j{{"locations", p.locations},
         {"pool", p.pool},
         {"minimal", p.minimal},
         {"unfold_width", p.unfold_width}};
  Json saves = Json::array(), reads = Json::array(), halo = Json::array(),
       priv = Json::array();
  if (tree.spec) {
    const AccessModel access(*tree.spec);
    const std::int64_t nf = access.formula_count(), nr = access.max_refs();
    for (const TempSave &s : p.saves)
      saves.push_back({{"point", access.point_of(s.event / nf)},
                       {"formula", s.event % nf},
                       {"location", location_json(access, s.location)},
                       {"cell", s.cell}});
    for (const TempRead &r : p.reads)
      reads.push_back({{"point", access.point_of(r.read / nr / nf)},
                       {"formula", (r.read / nr) % nf},
                       {"ref", r.read % nr},
                       {"cell", r.cell}});
    for (const HaloCell &h : p.halo)
      halo.push_back({{"location", location_json(access, h.location)},
                      {"cell", h.cell}});
    for (const PrivateCell &pc : p.privatized)
      priv.push_back({{"location", location_json(access, pc.location)},
                      {"copy", pc.copy},
                      {"cell", pc.cell}});
  }
  j["saves"] = saves;
  j["reads"] = reads;
  j["halo"] = halo;
  j["privatized"] = priv;
  return j;
}

TempPlan read_plan(const Json &j, const std::optional<ComputationSpec> &spec) {
  TempPlan p;
  p.locations = j.at("locations").get<int>();
  p.pool = j.at("pool").get<int>();
  p.minimal = j.at("minimal").get<int>();
  p.unfold_width = j.at("unfold_width").get<int>();
  if (!spec)
    return p;
  const AccessModel access(*spec);
  auto point_key = [&](const Json &pt) {
    const Point point = pt.get<Point>();
    if (!access.in_space(point))
      throw Error("bad schedule document: temp plan point outside the space");
    return access.point_key(point);
  };
  for (const Json &s : j.at("saves"))
    p.saves.push_back({access.event_key(point_key(s.at("point")),
                                        s.at("formula").get<int>()),
                       location_of(access, s.at("location")),
                       s.at("cell").get<int>()});
  for (const Json &r : j.at("reads"))
    p.reads.push_back({access.read_key(point_key(r.at("point")),
                                       r.at("formula").get<int>(),
                                       r.at("ref").get<int>()),
                       r.at("cell").get<int>()});
  for (const Json &h : j.at("halo"))
    p.halo.push_back({location_of(access, h.at("location")), h.at("cell").get<int>()});
  for (const Json &pc : j.at("privatized"))
    p.privatized.push_back({location_of(access, pc.at("location")),
                            pc.at("copy").get<int>(), pc.at("cell").get<int>()});
  return p;
}

Json points_json(const std::vector<Point> &ps) {
  Json j = Json::array();
  for (const Point &p : ps)
    j.push_back(p);
  return j;
}

} // namespace

std::string schedule_to_json(const ScheduleTree &tree) {
  Json j;
  j["format"] = kFormat;
  j["version"] = 1;
  j["spec"] = tree.spec ? Json(print_spec(*tree.spec)) : Json(nullptr);
  j["clock"] = tree.clock ? Json{{"graduations", tree.clock->graduations},
                                 {"rate", tree.clock->rate}}
                          : Json(nullptr);
  Json assignments = Json::array(), reps = Json::array();
  for (const auto &a : tree.mapping.assignments)
    assignments.push_back(
        {{"index", a.index}, {"graduation", a.graduation}, {"size", a.size}});
  for (const auto &[g, name] : tree.mapping.representatives)
    reps.push_back({{"graduation", g}, {"index", name}});
  j["mapping"] = {{"assignments", assignments}, {"representatives", reps}};
  Json rev = Json::array();
  for (const auto &rm : tree.reverse_map) {
    Json terms = Json::array();
    for (const auto &t : rm.terms)
      terms.push_back({{"node", t.node}, {"weight", t.weight}});
    rev.push_back({{"index", rm.index}, {"terms", terms}});
  }
  j["reverse_map"] = rev;
  j["orbit_formula"] =
      tree.orbit_formula ? Json(*tree.orbit_formula) : Json(nullptr);
  Json copies = Json::array();
  for (const Nest &nest : tree.nests)
    copies.push_back({{"copy", nest.copy},
                      {"root", nest.nodes.empty()
                                   ? Json{{"leaf", tree.spec ? "formulas"
                                                             : "time_point"}}
                                   : node_json(tree, nest, 0)}});
  j["copies"] = copies;
  j["temp_plan"] = plan_json(tree);
  return j.dump(2) + "\n";
}

ScheduleTree schedule_from_json(std::string_view text) {
  try {
    const Json j = Json::parse(text);
    if (j.at("format").get<std::string>() != kFormat)
      throw Error("bad schedule document: unexpected format");
    ScheduleTree t;
    if (!j.at("spec").is_null())
      t.spec = parse_spec(j.at("spec").get<std::string>());
    if (!j.at("clock").is_null())
      t.clock = Clock{j.at("clock").at("graduations").get<std::vector<std::int64_t>>(),
                      j.at("clock").at("rate").get<std::int64_t>()};
    for (const Json &a : j.at("mapping").at("assignments"))
      t.mapping.assignments.push_back({a.at("index").get<std::string>(),
                                       a.at("graduation").get<std::int64_t>(),
                                       a.at("size").get<std::int64_t>()});
    for (const Json &r : j.at("mapping").at("representatives"))
      t.mapping.representatives.emplace_back(r.at("graduation").get<std::int64_t>(),
                                             r.at("index").get<std::string>());
    for (const Json &rm : j.at("reverse_map")) {
      ReverseMap m{rm.at("index").get<std::string>(), {}};
      for (const Json &term : rm.at("terms"))
        m.terms.push_back({term.at("node").get<std::string>(),
                           term.at("weight").get<std::int64_t>()});
      t.reverse_map.push_back(std::move(m));
    }
    if (!j.at("orbit_formula").is_null())
      t.orbit_formula = j.at("orbit_formula").get<int>();
    for (const Json &c : j.at("copies")) {
      Nest nest;
      nest.copy = c.at("copy").get<int>();
      read_nodes(c.at("root"), nest.nodes);
      t.nests.push_back(std::move(nest));
    }
    t.temp_plan = read_plan(j.at("temp_plan"), t.spec);
    return t;
  } catch (const Json::exception &e) {
    throw Error(std::string("bad schedule document: ") + e.what());
  }
}

std::string trace_to_json(const VisitTrace &trace) {
  Json records = Json::array();
  for (const VisitRecord &r : trace.records)
    records.push_back({{"seq", r.seq},
                       {"time", r.time_point},
                       {"point", r.lattice_point},
                       {"time_value", r.time_value},
                       {"color", r.color},
                       {"level", r.level},
                       {"copy", r.copy}});
  Json convolved = Json::array();
  for (bool b : trace.convolved)
    convolved.push_back(b);
  Json j{{"coordinates", trace.coordinates},
         {"convolved", convolved},
         {"color_k", trace.color_k},
         {"empty_slots", trace.empty_slots},
         {"records", records}};
  return j.dump(2) + "\n";
}

std::string verify_to_json(const VerifyResult &r) {
  Json violations = Json::array();
  for (const auto &v : r.dependencies.violations)
    violations.push_back(
        {{"seq", v.seq}, {"location", v.location}, {"message", v.message}});
  const EquivalenceReport &e = r.equivalence;
  Json j{{"pass", r.pass()},
         {"coverage",
          {{"pass", r.coverage.pass()},
           {"expected", r.coverage.expected},
           {"visited", r.coverage.visited},
           {"missing", points_json(r.coverage.missing)},
           {"duplicated", points_json(r.coverage.duplicated)},
           {"outside", points_json(r.coverage.outside)}}},
         {"dependencies",
          {{"pass", r.dependencies.pass()},
           {"cells_used", r.dependencies.cells_used},
           {"commutes", r.dependencies.commutes}}},
         {"violations", violations},
         {"equivalence",
          {{"pass", e.pass()},
           {"trials", e.trials},
           {"seed", e.seed},
           {"failed_trial", e.failed_trial ? Json(*e.failed_trial) : Json(nullptr)},
           {"counterexample", e.counterexample}}}};
  return j.dump(2) + "\n";
}

std::string profile_to_json(const ParallelismProfile &p) {
  Json colors = Json::object(), measure = Json::object();
  for (const auto &[c, n] : p.colors)
    colors[std::to_string(c)] = n;
  for (const auto &[c, m] : p.measure)
    measure[std::to_string(c)] = m.text();
  Json j{{"total", p.total},
         {"widths", p.widths},
         {"colors", colors},
         {"locality", p.locality},
         {"measure", measure}};
  return j.dump(2) + "\n";
}

} // namespace clocksched
