// Copyright 2026 The stochmatch Authors.
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Bipartite instances with weighted offline vertices, ordered online
// arrivals and per-edge success probabilities.
//
// InstanceData is the editable, string-keyed form used by the file format;
// Instance is the validated, immutable, index-based form used by the
// algorithms. Offline vertices keep their file order as index order, and
// online vertices arrive in index order.

#ifndef STOCHMATCH_INSTANCE_H_
#define STOCHMATCH_INSTANCE_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace stochmatch {

struct OfflineRecord {
  std::string id;
  double weight = 1.0;
  bool operator==(const OfflineRecord&) const = default;
};

struct EdgeRecord {
  std::string u;  // offline id
  std::string v;  // online id
  double p = 0.0;
  bool operator==(const EdgeRecord&) const = default;
};

struct InstanceData {
  std::vector<OfflineRecord> offline;
  std::vector<std::string> online;  // arrival order
  std::vector<EdgeRecord> edges;
  bool operator==(const InstanceData&) const = default;
};

// Every violation in `data`; empty when valid.
std::vector<std::string> Validate(const InstanceData& data);

struct Edge {
  int u = 0;
  int v = 0;
  double p = 0.0;
};

class Instance {
 public:
  // Throws ValidationError listing every violation.
  explicit Instance(InstanceData data);

  int num_offline() const { return static_cast<int>(weights_.size()); }
  int num_online() const { return static_cast<int>(data_.online.size()); }
  int num_edges() const { return static_cast<int>(edges_.size()); }

  const std::string& offline_id(int u) const { return data_.offline[u].id; }
  const std::string& online_id(int v) const { return data_.online[v]; }
  double weight(int u) const { return weights_[u]; }
  const std::vector<double>& weights() const { return weights_; }

  // Edges of arrival v, ordered by offline index.
  std::span<const Edge> online_edges(int v) const;
  // Edges of offline u, ordered by arrival index.
  std::span<const Edge> offline_edges(int u) const;
  std::optional<double> probability(int u, int v) const;

  double p_max() const { return p_max_; }
  // True when every edge carries the same probability.
  bool equal_probabilities() const { return equal_p_; }

  // Position of u when offline ids are sorted as strings; used for
  // lexicographic tie-breaking.
  int lex_rank(int u) const { return lex_rank_[u]; }

  std::optional<int> offline_index(const std::string& id) const;
  std::optional<int> online_index(const std::string& id) const;

  const InstanceData& data() const { return data_; }

  // Copies with every probability multiplied by `factor` (result must stay
  // within (0, 1]) or every weight multiplied by `factor`.
  Instance ScaleProbabilities(double factor) const;
  Instance ScaleWeights(double factor) const;

 private:
  InstanceData data_;
  std::vector<double> weights_;
  std::vector<Edge> edges_;           // grouped by arrival
  std::vector<int> online_begin_;     // size num_online + 1
  std::vector<Edge> offline_edges_;   // grouped by offline vertex
  std::vector<int> offline_begin_;    // size num_offline + 1
  std::unordered_map<std::string, int> offline_index_;
  std::unordered_map<std::string, int> online_index_;
  std::vector<int> lex_rank_;
  double p_max_ = 0.0;
  bool equal_p_ = true;
};

// min(sum of p_uv over v in S, 1). Throws std::invalid_argument when some
// v in S is not a neighbor of u.
double NeighborMass(const Instance& inst, int u, std::span<const int> s);
double NeighborMass(const Instance& inst, const std::string& u,
                    const std::vector<std::string>& s);

struct WeightScheme {
  enum Kind { kUniform, kGeometric } kind = kUniform;
  double ratio = 1.0;  // geometric: w_j = ratio^(j-1)

  static WeightScheme Uniform() { return {}; }
  static WeightScheme Geometric(double r) { return {kGeometric, r}; }
};

// n offline vertices u1..un; online block j (j = 1..n, arriving in that
// order) holds ceil(1/p) copies, each adjacent to u_j..u_n with probability
// p.
Instance GenUpperTriangular(int n, double p,
                            WeightScheme weights = WeightScheme::Uniform());

struct RandomInstanceParams {
  int num_offline = 10;
  int num_online = 20;
  double density = 0.5;
  double p_lo = 0.0;  // p drawn from (p_lo, p_hi]; p_lo == p_hi fixes p
  double p_hi = 0.1;
  double w_lo = 1.0;  // w drawn from [w_lo, w_hi]
  double w_hi = 1.0;
};

// Each (u, v) pair is an edge independently with probability `density`;
// arrival order is a seeded shuffle. Throws std::invalid_argument on empty
// or out-of-range parameter ranges.
Instance GenRandom(const RandomInstanceParams& params, uint64_t seed);

// Layered instance in which one displaced arrival forces 2^k displaced
// arrivals k layers down. Layer-k arrivals have a home edge of probability
// eps and an alternative edge of probability 2 eps into layer k+1; every
// offline vertex is topped up with exclusive eps edges to floor(1/eps) home
// edges. Deeper layers arrive first. Throws std::invalid_argument when
// depth < 1 or 2^depth * eps > 1.
Instance GenCascade(int depth, double eps);

// JSON: {"offline": [{"id", "weight"}], "online": [id], "edges": [{"u", "v",
// "p"}]}. Reading throws ParseError naming the offending field, then
// ValidationError for invariant violations.
InstanceData ParseInstanceJson(const std::string& text);
std::string InstanceToJson(const Instance& inst);
Instance ReadInstance(const std::string& path);
void WriteInstance(const Instance& inst, const std::string& path);

}  // namespace stochmatch

#endif  // STOCHMATCH_INSTANCE_H_
