// Copyright (c) 2026 The clocksched Authors.
// SPDX-License-Identifier: Apache-2.0

#include <clocksched/emit.hpp>

#include <map>
#include <memory>

namespace clocksched {

Notation parse_notation(std::string_view name) {
  if (name == "for")
    return Notation::For;
  if (name == "form")
    return Notation::Form;
  if (name == "enum")
    return Notation::Enum;
  throw Error("unknown notation '" + std::string(name) +
              "' (expected for, form or enum)");
}

namespace {

std::string join(const std::vector<std::string> &parts, const char *sep) {
  std::string s;
  for (std::size_t i = 0; i < parts.size(); ++i)
    s += (i ? sep : "") + parts[i];
  return s;
}

std::string lower_text(const EnumNode &n) {
  if (n.lower.bases.empty())
    return std::to_string(n.lower.constant);
  std::string s = join(n.lower.bases, "+");
  if (n.lower.constant)
    s += "+" + std::to_string(n.lower.constant);
  return s;
}

std::string upper_text(const EnumNode &n) {
  const std::int64_t hi = n.lower.constant + n.extent;
  if (n.lower.bases.empty())
    return std::to_string(hi);
  return join(n.lower.bases, "+") + "+" + std::to_string(hi);
}

// Value minus convolution bases: the node's time coordinate.
std::string offset_text(const EnumNode &n) {
  std::string s = n.index;
  for (const auto &b : n.lower.bases)
    s += "-" + b;
  return s;
}

bool compound(const std::string &s) {
  return s.find_first_of("+-/*") != std::string::npos;
}

class Renderer {
public:
  explicit Renderer(const ScheduleTree &tree) : tree_(tree) {
    if (tree.spec) {
      access_ = std::make_unique<AccessModel>(*tree.spec);
      if (tree.orbit_formula)
        orbit_ = std::make_unique<OrbitMap>(*tree.spec, *tree.orbit_formula);
    }
  }

  std::string render(Notation notation) {
    std::string out = header();
    const bool many = tree_.nests.size() > 1;
    for (const Nest &nest : tree_.nests) {
      if (many)
        out += "// copy " + std::to_string(nest.copy) + "\n";
      out += render_nest(nest, notation);
    }
    out += epilogue();
    return out;
  }

private:
  const ScheduleTree &tree_;
  std::unique_ptr<AccessModel> access_;
  std::unique_ptr<OrbitMap> orbit_;

  const EnumNode *node(const Nest &nest, const std::string &name) const {
    for (const auto &n : nest.nodes)
      if (n.index == name)
        return &n;
    return nullptr;
  }

  std::string digit_text(const Nest &nest, const std::string &name) const {
    const EnumNode *n = node(nest, name);
    if (!n)
      return name;
    std::string s = offset_text(*n);
    if (n->step == 1)
      return s;
    return (compound(s) ? "(" + s + ")" : s) + "/" + std::to_string(n->step);
  }

  std::string index_expr(const Nest &nest, const std::string &index) const {
    const ReverseMap *rm = tree_.reverse_of(index);
    if (!rm)
      return index;
    std::vector<std::string> parts;
    for (const DigitTerm &t : rm->terms) {
      std::string d = digit_text(nest, t.node);
      if (t.weight != 1)
        d = (compound(d) ? "(" + d + ")" : d) + "*" + std::to_string(t.weight);
      parts.push_back(d);
    }
    return parts.empty() ? "0" : join(parts, "+");
  }

  bool divides() const {
    for (const Nest &nest : tree_.nests)
      for (const ReverseMap &rm : tree_.reverse_map)
        for (const DigitTerm &t : rm.terms)
          if (const EnumNode *n = node(nest, t.node); n && n->step > 1)
            return true;
    return false;
  }

  std::string guard_text(const Nest &nest, const EnumNode &n) const {
    std::vector<std::string> conds;
    for (const Guard &g : n.guards) {
      if (g.kind == Guard::Kind::Bound) {
        const std::string e = index_expr(nest, g.index);
        conds.push_back((compound(e) ? "(" + e + ")" : e) + "<" +
                        std::to_string(g.limit));
        continue;
      }
      const auto [outer, inner] =
          orbit_ ? orbit_->swapped_pair() : std::pair<int, int>{-1, -1};
      if (outer >= 0) {
        const auto &idx = tree_.spec->indexes;
        conds.push_back(index_expr(nest, idx[static_cast<std::size_t>(inner)].name) +
                        "<=" +
                        index_expr(nest, idx[static_cast<std::size_t>(outer)].name));
      } else {
        conds.push_back("orbit_representative");
      }
    }
    if (conds.empty())
      return {};
    return " if (" + join(conds, "&&") + ")";
  }

  std::string ref_text(const Nest &nest, const ArrayRef &r) const {
    if (r.factors.empty())
      return r.array;
    std::vector<std::string> parts;
    for (const Factor &f : r.factors) {
      std::string e = index_expr(nest, f.index);
      if (f.displacement)
        e = (compound(e) ? "(" + e + ")" : e) + "+" + std::to_string(f.displacement);
      parts.push_back(e);
    }
    return r.array + "(" + join(parts, ",") + ")";
  }

  std::string items_text(const Nest &nest,
                         const std::vector<TermItem> &items) const {
    std::vector<std::string> parts;
    for (const TermItem &it : items)
      parts.push_back(it.grouped ? "(" + items_text(nest, it.group) + ")"
                                 : ref_text(nest, it.ref));
    return join(parts, "*");
  }

  std::vector<std::string> body(const Nest &nest) const {
    std::vector<std::string> lines;
    if (!tree_.spec) {
      std::vector<std::string> parts;
      for (const auto &n : nest.nodes)
        parts.push_back(offset_text(n));
      lines.push_back("(" + join(parts, ",") + ")");
      return lines;
    }
    if (orbit_)
      lines.push_back("// repeated at each orbit image of the point");
    for (const PrivateCell &pc : tree_.temp_plan.privatized)
      if (pc.copy == nest.copy)
        lines.push_back("// " + location(pc.location) + " accumulates into tmp(" +
                        std::to_string(pc.cell) + ") here");
    for (const Formula &f : tree_.spec->formulas) {
      std::vector<std::string> terms;
      for (const Term &t : f.operands)
        terms.push_back(items_text(nest, t.items));
      lines.push_back(ref_text(nest, f.result) +
                      (f.op == FormulaOp::Accumulate ? " += " : " = ") +
                      join(terms, "+"));
    }
    return lines;
  }

  std::string header() const {
    std::string s;
    if (tree_.spec && divides())
      s += "// x/2^l is a division by a power of two, i.e. x>>l\n";
    const TempPlan &p = tree_.temp_plan;
    if (p.locations > 0)
      s += "// temporaries: tmp(" + std::to_string(p.locations) + "), " +
           std::to_string(p.pool) + " per copy, " +
           std::to_string(p.halo.size()) + " halo, " +
           std::to_string(p.privatized.size()) + " private\n";
    for (const HaloCell &h : p.halo)
      s += "tmp(" + std::to_string(h.cell) + ")=" + location(h.location) + "\n";
    return s;
  }

  std::string epilogue() const {
    std::map<LocationId, std::vector<int>> sums;
    for (const PrivateCell &pc : tree_.temp_plan.privatized)
      sums[pc.location].push_back(pc.cell);
    if (sums.empty())
      return {};
    std::string s = "// epilogue\n";
    for (const auto &[l, cells] : sums) {
      std::vector<std::string> parts;
      for (int c : cells)
        parts.push_back("tmp(" + std::to_string(c) + ")");
      s += location(l) + " += " + join(parts, "+") + "\n";
    }
    return s;
  }

  std::string location(LocationId l) const {
    return access_ ? access_->describe(l) : "#" + std::to_string(l);
  }

  std::string render_nest(const Nest &nest, Notation notation) const {
    std::string s;
    const auto lines = body(nest);
    const std::size_t depth = nest.nodes.size();
    switch (notation) {
    case Notation::For:
      for (std::size_t d = 0; d < depth; ++d) {
        const EnumNode &n = nest.nodes[d];
        s += std::string(2 * d, ' ') + "for (" + n.index + "=" + lower_text(n) +
             ";" + n.index + "<" + upper_text(n) + ";" + n.index +
             "+=" + std::to_string(n.step) + ")" + guard_text(nest, n) + "\n";
      }
      for (const auto &line : lines)
        s += std::string(2 * depth, ' ') + line + "\n";
      break;
    case Notation::Enum:
      // one line of nested enum calls, body below
      for (std::size_t d = 0; d < depth; ++d) {
        const EnumNode &n = nest.nodes[d];
        s += (d ? " enum(" : "enum(") + n.index + "," + std::to_string(n.step) +
             ",[" + lower_text(n) + "," + upper_text(n) + "))" +
             guard_text(nest, n);
      }
      s += "\n";
      for (const auto &line : lines)
        s += "  " + line + "\n";
      break;
    case Notation::Form:
      for (std::size_t d = 0; d < depth; ++d) {
        const EnumNode &n = nest.nodes[d];
        s += d == 0 ? "form [" : "      ";
        s += "(" + n.index + "=" + lower_text(n) + ";" + n.index + "<" +
             upper_text(n) + ";" + n.index + "+=" + std::to_string(n.step) +
             ")" + guard_text(nest, n);
        s += d + 1 == depth ? "]\n" : "\n";
      }
      for (const auto &line : lines)
        s += "  " + line + "\n";
      break;
    }
    return s;
  }
};

} // namespace

std::string emit(const ScheduleTree &tree, Notation notation) {
  return Renderer(tree).render(notation);
}

} // namespace clocksched
