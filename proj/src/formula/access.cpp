// Copyright (c) 2026 The clocksched Authors.
// SPDX-License-Identifier: Apache-2.0

#include <clocksched/access.hpp>

#include <algorithm>
#include <map>

namespace clocksched {

std::int64_t ArrayInfo::volume() const {
  std::int64_t v = 1;
  for (auto e : extents)
    v *= e;
  return v;
}

AccessModel::AccessModel(const ComputationSpec &spec) : spec_(&spec) {
  std::map<std::string, int> ids;
  auto visit = [&](const ArrayRef &r) {
    auto [it, inserted] = ids.emplace(r.array, static_cast<int>(arrays_.size()));
    if (inserted)
      arrays_.push_back({r.array, std::vector<std::int64_t>(r.factors.size(), 0), 0});
    ArrayInfo &a = arrays_[static_cast<std::size_t>(it->second)];
    if (a.extents.size() != r.factors.size())
      throw Error("array '" + r.array + "' used with inconsistent arity");
    for (std::size_t i = 0; i < r.factors.size(); ++i)
      a.extents[i] = std::max(a.extents[i], spec.size_of(r.factors[i].index));
    return it->second;
  };
  for (const auto &f : spec.formulas) {
    FormulaAccess fa;
    fa.result_array = visit(f.result);
    for (const auto &fac : f.result.factors)
      fa.result_positions.push_back(spec.index_position(fac.index));
    fa.accumulate = f.op == FormulaOp::Accumulate;
    for (const auto &term : f.operands) {
      std::vector<int> nums;
      for (const ArrayRef *r : flatten(term)) {
        RefAccess ra;
        ra.array = visit(*r);
        for (const auto &fac : r->factors) {
          ra.positions.push_back(spec.index_position(fac.index));
          ra.displacement.push_back(fac.displacement);
        }
        ra.self = r->array == f.result.array;
        nums.push_back(static_cast<int>(fa.refs.size()));
        fa.refs.push_back(std::move(ra));
      }
      fa.terms.push_back(std::move(nums));
    }
    max_refs_ = std::max(max_refs_, static_cast<int>(fa.refs.size()));
    formulas_.push_back(std::move(fa));
  }
  LocationId base = 0;
  for (auto &a : arrays_) {
    a.base = base;
    base += a.volume();
  }
  location_count_ = base;
}

int AccessModel::array_id(const std::string &name) const {
  for (std::size_t i = 0; i < arrays_.size(); ++i)
    if (arrays_[i].name == name)
      return static_cast<int>(i);
  return -1;
}

std::int64_t AccessModel::point_key(const Point &p) const {
  std::int64_t key = 0;
  for (std::size_t i = 0; i < p.size(); ++i)
    key = key * spec_->indexes[i].size + p[i];
  return key;
}

Point AccessModel::point_of(std::int64_t key) const {
  Point p(spec_->indexes.size(), 0);
  for (std::size_t i = p.size(); i-- > 0;) {
    p[i] = key % spec_->indexes[i].size;
    key /= spec_->indexes[i].size;
  }
  return p;
}

bool AccessModel::in_space(const Point &p) const {
  if (p.size() != spec_->indexes.size())
    return false;
  for (std::size_t i = 0; i < p.size(); ++i)
    if (p[i] < 0 || p[i] >= spec_->indexes[i].size)
      return false;
  return true;
}

LocationId AccessModel::location(int array,
                                 const std::vector<std::int64_t> &at) const {
  const ArrayInfo &a = arrays_[static_cast<std::size_t>(array)];
  LocationId off = 0;
  for (std::size_t i = 0; i < at.size(); ++i) {
    if (at[i] < 0 || at[i] >= a.extents[i])
      return kOutside;
    off = off * a.extents[i] + at[i];
  }
  return a.base + off;
}

LocationId AccessModel::write_location(int formula, const Point &p) const {
  const FormulaAccess &fa = formulas_[static_cast<std::size_t>(formula)];
  std::vector<std::int64_t> at;
  at.reserve(fa.result_positions.size());
  for (int pos : fa.result_positions)
    at.push_back(p[static_cast<std::size_t>(pos)]);
  return location(fa.result_array, at);
}

LocationId AccessModel::read_location(int formula, int ref,
                                      const Point &p) const {
  const RefAccess &ra =
      formulas_[static_cast<std::size_t>(formula)].refs[static_cast<std::size_t>(ref)];
  std::vector<std::int64_t> at;
  at.reserve(ra.positions.size());
  for (std::size_t i = 0; i < ra.positions.size(); ++i)
    at.push_back(p[static_cast<std::size_t>(ra.positions[i])] + ra.displacement[i]);
  return location(ra.array, at);
}

std::pair<int, std::vector<std::int64_t>>
AccessModel::decode(LocationId id) const {
  for (std::size_t a = 0; a < arrays_.size(); ++a) {
    const ArrayInfo &info = arrays_[a];
    if (id < info.base || id >= info.base + info.volume())
      continue;
    std::int64_t off = id - info.base;
    std::vector<std::int64_t> at(info.extents.size(), 0);
    for (std::size_t i = at.size(); i-- > 0;) {
      at[i] = off % info.extents[i];
      off /= info.extents[i];
    }
    return {static_cast<int>(a), at};
  }
  throw Error("location id " + std::to_string(id) + " out of range");
}

std::string AccessModel::describe(LocationId id) const {
  const auto [array, at] = decode(id);
  std::string s = arrays_[static_cast<std::size_t>(array)].name;
  if (at.empty())
    return s;
  s += "(";
  for (std::size_t i = 0; i < at.size(); ++i)
    s += (i ? "," : "") + std::to_string(at[i]);
  return s + ")";
}

OrbitMap::OrbitMap(const ComputationSpec &spec, int formula)
    : formula_(formula) {
  const Formula &f = spec.formulas.at(static_cast<std::size_t>(formula));
  const ArrayRef *cyc = nullptr;
  for (const ArrayRef *r : operand_refs(f)) {
    if (r->array != f.result.array || r->factors.size() != f.result.factors.size())
      continue;
    bool identity = true;
    for (std::size_t i = 0; i < r->factors.size(); ++i)
      identity = identity && r->factors[i].index == f.result.factors[i].index;
    if (!identity) {
      cyc = r;
      break;
    }
  }
  if (!cyc)
    throw Error("formula " + std::to_string(formula) + " has no index cycle");
  std::vector<int> moved;
  for (std::size_t i = 0; i < cyc->factors.size(); ++i) {
    const int target = spec.index_position(f.result.factors[i].index);
    const int source = spec.index_position(cyc->factors[i].index);
    moves_.push_back({target, source});
    if (target != source)
      moved.push_back(target);
  }
  if (moved.size() == 2)
    swap_ = {std::min(moved[0], moved[1]), std::max(moved[0], moved[1])};
}

Point OrbitMap::apply(const Point &p) const {
  Point q = p;
  for (const auto &[target, source] : moves_)
    q[static_cast<std::size_t>(target)] = p[static_cast<std::size_t>(source)];
  return q;
}

std::vector<Point> OrbitMap::orbit(const Point &p) const {
  std::vector<Point> out{p};
  for (Point q = apply(p); q != p; q = apply(q)) {
    out.push_back(q);
    if (out.size() > 64)
      throw Error("orbit does not close");
  }
  return out;
}

bool OrbitMap::is_representative(const Point &p) const {
  for (const Point &q : orbit(p))
    if (q > p)
      return false;
  return true;
}

void VersionState::accumulate(std::int64_t event) {
  accums.insert(std::upper_bound(accums.begin(), accums.end(), event), event);
}

std::string describe_state(const VersionState &s) {
  std::string out = s.writer < 0 ? std::string("initial")
                                 : "write#" + std::to_string(s.writer);
  if (!s.accums.empty())
    out += "+" + std::to_string(s.accums.size()) + " accumulations";
  return out;
}

ReferenceModel::ReferenceModel(const AccessModel &access)
    : access_(&access),
      final_(static_cast<std::size_t>(access.location_count())) {
  const int nf = access.formula_count();
  std::unordered_map<std::int64_t, VersionState> snapshot;
  for_each_point(access.spec(), [&](const Point &p) {
    const std::int64_t pk = access.point_key(p);
    for (int f = 0; f < nf; ++f) {
      const auto &fa = access.formulas()[static_cast<std::size_t>(f)];
      for (int r = 0; r < static_cast<int>(fa.refs.size()); ++r) {
        const LocationId loc = access.read_location(f, r, p);
        if (loc == kOutside)
          continue;
        const VersionState *seen = &final_[static_cast<std::size_t>(loc)];
        if (fa.refs[static_cast<std::size_t>(r)].self) {
          auto it = snapshot.find(f * access.location_count() + loc);
          if (it != snapshot.end())
            seen = &it->second;
        }
        expected_.emplace(access.read_key(pk, f, r), *seen);
      }
      const LocationId w = access.write_location(f, p);
      VersionState &cur = final_[static_cast<std::size_t>(w)];
      snapshot.emplace(f * access.location_count() + w, cur);
      const std::int64_t ev = access.event_key(pk, f);
      if (fa.accumulate)
        cur.accumulate(ev);
      else
        cur = VersionState{ev, {}};
    }
  });
}

const VersionState *ReferenceModel::expected(std::int64_t read_key) const {
  auto it = expected_.find(read_key);
  return it == expected_.end() ? nullptr : &it->second;
}

const VersionState &ReferenceModel::final_state(LocationId id) const {
  return final_.at(static_cast<std::size_t>(id));
}

} // namespace clocksched
