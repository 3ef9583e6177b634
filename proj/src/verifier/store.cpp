// Copyright (c) 2026 The clocksched Authors.
// SPDX-License-Identifier: Apache-2.0

#include <clocksched/verifier.hpp>

#include <random>

namespace clocksched {

ArrayStore::ArrayStore(const AccessModel &access)
    : access_(&access),
      values_(static_cast<std::size_t>(access.location_count()), 0) {}

namespace {

LocationId locate(const AccessModel &access, const std::string &array,
                  const std::vector<std::int64_t> &at) {
  const int id = access.array_id(array);
  if (id < 0)
    throw Error("unknown array '" + array + "'");
  if (at.size() != access.arrays()[static_cast<std::size_t>(id)].extents.size())
    throw Error("wrong number of coordinates for '" + array + "'");
  const LocationId l = access.location(id, at);
  if (l == kOutside)
    throw Error("coordinates outside array '" + array + "'");
  return l;
}

} // namespace

const Value &ArrayStore::get(const std::string &array,
                            const std::vector<std::int64_t> &at) const {
  return this->at(locate(*access_, array, at));
}

void ArrayStore::set(const std::string &array,
                     const std::vector<std::int64_t> &at, Value v) {
  this->at(locate(*access_, array, at)) = std::move(v);
}

void ArrayStore::fill(const std::string &array,
                      const std::vector<std::int64_t> &values) {
  const int id = access_->array_id(array);
  if (id < 0)
    throw Error("unknown array '" + array + "'");
  const ArrayInfo &info = access_->arrays()[static_cast<std::size_t>(id)];
  if (static_cast<std::int64_t>(values.size()) != info.volume())
    throw Error("fill of '" + array + "' needs " +
                std::to_string(info.volume()) + " values");
  for (std::size_t i = 0; i < values.size(); ++i)
    values_[static_cast<std::size_t>(info.base) + i] = values[i];
}

std::string ArrayStore::diff(const ArrayStore &o) const {
  for (std::size_t i = 0; i < values_.size() && i < o.values_.size(); ++i)
    if (values_[i] != o.values_[i])
      return access_->describe(static_cast<LocationId>(i)) + ": " +
             values_[i].str() + " vs " + o.values_[i].str();
  if (values_.size() != o.values_.size())
    return "stores have different layouts";
  return {};
}

ArrayStore random_store(const AccessModel &access, std::uint64_t seed) {
  ArrayStore s(access);
  std::mt19937_64 gen(seed);
  for (LocationId l = 0; l < access.location_count(); ++l)
    s.at(l) = static_cast<std::int64_t>(gen() % 19) - 9;
  return s;
}

} // namespace clocksched
