// Copyright (c) 2026 The clocksched Authors.
// SPDX-License-Identifier: Apache-2.0
//
// clocksched command-line front end.

#include <clocksched/builder.hpp>
#include <clocksched/emit.hpp>

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace cs = clocksched;

namespace {

std::string read_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw cs::Error("cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_output(const std::string &path, const std::string &text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text))
    throw cs::Error("cannot write " + path);
}

std::vector<std::int64_t> int_list(const std::string &text) {
  std::vector<std::int64_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    long long v = 0;
    try {
      v = std::stoll(item, &used);
    } catch (const std::exception &) {
      used = 0;
    }
    if (used == 0 || used != item.size())
      throw cs::Error("bad number '" + item + "'");
    out.push_back(v);
  }
  return out;
}

// "KxR" (k graduations, rate R, smallest graduation `scale`) or an explicit
// graduation list "8,4,2" with an optional "/rate".
cs::Clock parse_clock(const std::string &text, std::int64_t scale = 1) {
  if (const auto x = text.find('x'); x != std::string::npos) {
    const auto k = int_list(text.substr(0, x));
    const auto r = int_list(text.substr(x + 1));
    if (k.size() != 1 || r.size() != 1)
      throw cs::Error("bad clock '" + text + "'");
    return cs::make_clock(static_cast<int>(k[0]), r[0], scale);
  }
  std::int64_t rate = 2;
  std::string grads = text;
  if (const auto slash = text.find('/'); slash != std::string::npos) {
    const auto r = int_list(text.substr(slash + 1));
    if (r.size() != 1)
      throw cs::Error("bad clock '" + text + "'");
    rate = r[0];
    grads = text.substr(0, slash);
  }
  return cs::clock_from_graduations(int_list(grads), rate);
}

std::vector<std::string> name_list(const std::string &text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty())
      out.push_back(item);
  return out;
}

int cmd_parse(const std::string &file) {
  const cs::ComputationSpec spec = cs::parse_spec(read_file(file));
  std::cout << cs::print_spec(spec);
  const cs::LegalityReport legal = cs::check_legality(spec);
  for (const auto &v : legal.violations)
    std::cerr << file << ":" << v.pos.line << ":" << v.pos.column << ": "
              << v.message << "\n";
  if (!legal.legal())
    return 1;
  const cs::DependencyGraph deps = cs::extract_dependencies(spec);
  std::cout << "# points: " << spec.point_count() << "\n";
  std::cout << "# dependency edges: " << deps.edges.size() << "\n";
  for (const auto &e : deps.edges) {
    std::cout << "#   " << e.array << ": formula " << e.def_formula
              << " -> formula " << e.use_formula;
    if (e.use_ref < 0)
      std::cout << " (accumulation)";
    else
      std::cout << " operand " << e.use_ref;
    std::cout << " displacement (";
    for (std::size_t i = 0; i < e.displacement.size(); ++i)
      std::cout << (i ? "," : "") << e.displacement[i];
    std::cout << ")\n";
  }
  for (const auto &c : deps.cycles)
    std::cout << "# cycle " << c.text() << " length " << c.length() << "\n";
  return 0;
}

struct TransformArgs {
  std::string file, clock, map, unfold, order, out;
  int convolutions = 0;
  std::optional<std::int64_t> budget;
};

int cmd_transform(const TransformArgs &a) {
  const cs::ComputationSpec spec = cs::parse_spec(read_file(a.file));
  cs::BuildOptions opt;
  opt.convolutions = a.convolutions;
  opt.temp_budget = a.budget;
  opt.order = name_list(a.order);
  if (!a.map.empty())
    opt.mapping = cs::parse_mapping(a.map);
  if (!a.clock.empty()) {
    std::int64_t scale = 1;
    for (std::size_t i = 0; i < opt.mapping.assignments.size(); ++i) {
      const auto g = opt.mapping.assignments[i].graduation;
      scale = i == 0 ? g : std::min(scale, g);
    }
    opt.clock = parse_clock(a.clock, scale);
  }
  if (!a.unfold.empty()) {
    const auto eq = a.unfold.find('=');
    if (eq == std::string::npos)
      throw cs::Error("--unfold expects INDEX=COPIES");
    opt.unfold_index = a.unfold.substr(0, eq);
    const auto n = int_list(a.unfold.substr(eq + 1));
    if (n.size() != 1)
      throw cs::Error("--unfold expects INDEX=COPIES");
    opt.unfold_copies = static_cast<int>(n[0]);
  }
  const cs::ScheduleTree tree = cs::build_schedule(spec, opt);
  write_output(a.out, cs::schedule_to_json(tree));
  return 0;
}

int cmd_emit(const std::string &file, const std::string &notation,
             const std::string &out) {
  const cs::ScheduleTree tree = cs::schedule_from_json(read_file(file));
  write_output(out, cs::emit(tree, cs::parse_notation(notation)));
  return 0;
}

int cmd_verify(const std::vector<std::string> &files, std::uint64_t seed,
               int trials, bool json) {
  if (files.empty() || files.size() > 2)
    throw cs::Error("verify expects [SPEC] SCHEDULE");
  const cs::ScheduleTree tree = cs::schedule_from_json(read_file(files.back()));
  std::optional<cs::ComputationSpec> spec = tree.spec;
  if (files.size() == 2) {
    spec = cs::parse_spec(read_file(files.front()));
    if (tree.spec && !(*tree.spec == *spec))
      throw cs::Error("schedule was built for a different spec");
  }
  if (!spec)
    throw cs::Error("schedule carries no computation spec; pass one");
  cs::ScheduleTree bound = tree;
  bound.spec = spec;
  const cs::VisitTrace trace = cs::enumerate(bound);
  cs::VerifyResult r;
  r.coverage = cs::check_coverage(trace, *spec);
  r.dependencies = cs::check_dependencies(trace, *spec, bound.temp_plan);
  if (r.coverage.pass())
    r.equivalence = cs::equivalent(*spec, cs::sequential_schedule(*spec), bound,
                                   trials, seed);
  else
    r.equivalence = {trials, seed, 0, "skipped: coverage failed"};
  if (json)
    std::cout << cs::verify_to_json(r);
  else
    std::cout << r.coverage.text() << "\n"
              << r.dependencies.text() << "\n"
              << r.equivalence.text() << "\n";
  return r.pass() ? 0 : 1;
}

int cmd_analyze(const std::string &file, const std::string &out) {
  const cs::ScheduleTree tree = cs::schedule_from_json(read_file(file));
  write_output(out, cs::profile_to_json(cs::analyze(cs::enumerate(tree))));
  return 0;
}

int cmd_sparse(const std::string &file, const std::string &unit, bool bfs,
               const std::string &out) {
  const auto graph = cs::SparseGraph::parse_edge_list(read_file(file));
  const auto trace = cs::enumerate_sparse(
      graph, parse_clock(unit),
      bfs ? cs::SparseOrder::BreadthFirst : cs::SparseOrder::DepthFirst);
  write_output(out, "{\n\"trace\": " + cs::trace_to_json(trace) +
                        ",\n\"profile\": " +
                        cs::profile_to_json(cs::analyze(trace)) + "}\n");
  return 0;
}

int cmd_skeleton(const std::string &clock, const std::string &unit,
                 int convolutions, const std::string &notation, bool json,
                 const std::string &out) {
  const cs::Clock c = parse_clock(clock);
  cs::ScheduleTree t;
  if (!unit.empty()) {
    t = cs::product_skeleton(cs::factorize(c, parse_clock(unit)),
                             convolutions > 0);
  } else {
    t = cs::apply_convolutions(cs::clock_skeleton(c), convolutions);
  }
  write_output(out, json ? cs::schedule_to_json(t)
                         : cs::emit(t, cs::parse_notation(notation)));
  return 0;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Clock-structured restructuring of map-reduce formulas"};
  app.require_subcommand(1);

  std::string file, out;
  auto *parse = app.add_subcommand("parse", "Parse and check a .mrspec file");
  parse->add_option("spec", file, "Spec file")->required();

  TransformArgs ta;
  std::int64_t budget = 0;
  auto *transform =
      app.add_subcommand("transform", "Build a schedule and write it as JSON");
  transform->add_option("spec", ta.file, "Spec file")->required();
  transform->add_option("--clock", ta.clock, "KxR or a graduation list 8,4,2[/rate]");
  transform->add_option("--map", ta.map, "Graduations, e.g. K=8,I=4,J=2");
  transform->add_option("--convolutions", ta.convolutions, "Convolution levels");
  transform->add_option("--unfold", ta.unfold, "INDEX=COPIES");
  auto *budget_opt =
      transform->add_option("--temp-budget", budget, "Temporary cell budget");
  transform->add_option("--order", ta.order, "Lexicographic order, e.g. K,I,J");
  transform->add_option("-o,--output", ta.out, "Output file");

  std::string notation = "for";
  auto *emit = app.add_subcommand("emit", "Render a schedule JSON as text");
  emit->add_option("schedule", file, "Schedule JSON")->required();
  emit->add_option("--notation", notation, "for, form or enum");
  emit->add_option("-o,--output", out, "Output file");

  std::vector<std::string> files;
  std::uint64_t seed = cs::kDefaultSeed;
  int trials = 10;
  bool json = false;
  auto *verify = app.add_subcommand("verify", "Check a schedule against its spec");
  verify->add_option("files", files, "[SPEC] SCHEDULE")->required();
  verify->add_option("--seed", seed, "Random store seed");
  verify->add_option("--trials", trials, "Random stores");
  verify->add_flag("--json", json, "Machine-readable report");

  auto *analyze = app.add_subcommand("analyze", "Parallelism profile of a schedule");
  analyze->add_option("schedule", file, "Schedule JSON")->required();
  analyze->add_option("-o,--output", out, "Output file");

  std::string unit;
  bool bfs = false;
  auto *sparse = app.add_subcommand("sparse", "Enumerate a DAG in unit clocks");
  sparse->add_option("edges", file, "Edge list")->required();
  sparse->add_option("--unit", unit, "Unit clock")->required();
  sparse->add_flag("--bfs", bfs, "Breadth-first discovery");
  sparse->add_option("-o,--output", out, "Output file");

  std::string clock;
  int convolutions = 0;
  auto *skeleton = app.add_subcommand("skeleton", "Emit a bare clock skeleton");
  skeleton->add_option("--clock", clock, "KxR or a graduation list")->required();
  skeleton->add_option("--unit", unit, "Factor through this unit clock");
  skeleton->add_option("--convolutions", convolutions, "Convolution levels");
  skeleton->add_option("--notation", notation, "for, form or enum");
  skeleton->add_flag("--json", json, "Emit schedule JSON");
  skeleton->add_option("-o,--output", out, "Output file");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*parse)
      return cmd_parse(file);
    if (*transform) {
      if (budget_opt->count())
        ta.budget = budget;
      return cmd_transform(ta);
    }
    if (*emit)
      return cmd_emit(file, notation, out);
    if (*verify)
      return cmd_verify(files, seed, trials, json);
    if (*analyze)
      return cmd_analyze(file, out);
    if (*sparse)
      return cmd_sparse(file, unit, bfs, out);
    if (*skeleton)
      return cmd_skeleton(clock, unit, convolutions, notation, json, out);
  } catch (const std::exception &e) {
    std::cerr << "clocksched: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
