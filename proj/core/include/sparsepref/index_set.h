// Copyright 2026 The sparsepref Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SPARSEPREF_INDEX_SET_H_
#define SPARSEPREF_INDEX_SET_H_

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace sparsepref {

// Sorted set of distinct coordinate indices in [0, d). Indices are 0-based
// throughout the library.
class IndexSet {
 public:
  IndexSet() = default;

  // Sorts `indices`; throws IndexError on duplicates or on entries outside
  // [0, dim).
  static IndexSet Make(std::vector<int> indices, int dim);
  static IndexSet Full(int dim);

  int size() const { return static_cast<int>(indices_.size()); }
  bool empty() const { return indices_.empty(); }
  int operator[](int i) const { return indices_[i]; }
  const std::vector<int>& indices() const { return indices_; }
  auto begin() const { return indices_.begin(); }
  auto end() const { return indices_.end(); }

  bool Contains(int j) const;
  // "{0,3,4}"
  std::string ToString() const;

  friend bool operator==(const IndexSet&, const IndexSet&) = default;
  friend auto operator<=>(const IndexSet&, const IndexSet&) = default;

 private:
  explicit IndexSet(std::vector<int> sorted) : indices_(std::move(sorted)) {}
  std::vector<int> indices_;
};

// Number of subsets S of {0..dim-1} with min_size <= |S| <= max_size,
// saturating at UINT64_MAX.
std::uint64_t CountSubsets(int dim, int min_size, int max_size);

// Calls visit(S) for every subset of {0..dim-1} of exactly `size` elements,
// in lexicographic order. Stops early when visit returns false.
void ForEachSubset(int dim, int size,
                   const std::function<bool(const IndexSet&)>& visit);

}  // namespace sparsepref

#endif  // SPARSEPREF_INDEX_SET_H_
