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

#include "stochmatch/instance.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "json.hpp"
#include "stochmatch/errors.h"
#include "stochmatch/rng.h"

namespace stochmatch {

using nlohmann::json;

std::vector<std::string> Validate(const InstanceData& data) {
  std::vector<std::string> errors;
  std::set<std::string> offline_ids, online_ids;
  for (size_t i = 0; i < data.offline.size(); ++i) {
    const OfflineRecord& r = data.offline[i];
    if (!offline_ids.insert(r.id).second) {
      errors.push_back("duplicate id: offline '" + r.id + "'");
    }
    if (!std::isfinite(r.weight) || r.weight < 0.0) {
      errors.push_back("weight must be finite and non-negative: offline '" +
                       r.id + "'");
    }
  }
  for (const std::string& id : data.online) {
    if (!online_ids.insert(id).second) {
      errors.push_back("duplicate id: online '" + id + "'");
    }
  }
  std::set<std::pair<std::string, std::string>> seen;
  for (size_t i = 0; i < data.edges.size(); ++i) {
    const EdgeRecord& e = data.edges[i];
    const std::string where = "edge " + std::to_string(i) + " (" + e.u + ", " +
                              e.v + ")";
    if (!offline_ids.count(e.u)) {
      errors.push_back("dangling endpoint: " + where +
                       " references unknown offline id '" + e.u + "'");
    }
    if (!online_ids.count(e.v)) {
      errors.push_back("dangling endpoint: " + where +
                       " references unknown online id '" + e.v + "'");
    }
    if (std::isnan(e.p) || e.p <= 0.0) {
      errors.push_back("probability must be positive: " + where);
    } else if (e.p > 1.0) {
      errors.push_back("probability must be at most 1: " + where);
    }
    if (!seen.insert({e.u, e.v}).second) {
      errors.push_back("duplicate edge: " + where);
    }
  }
  return errors;
}

Instance::Instance(InstanceData data) : data_(std::move(data)) {
  std::vector<std::string> errors = Validate(data_);
  if (!errors.empty()) throw ValidationError(std::move(errors));

  const int n_off = static_cast<int>(data_.offline.size());
  const int n_on = static_cast<int>(data_.online.size());
  weights_.resize(n_off);
  for (int u = 0; u < n_off; ++u) {
    weights_[u] = data_.offline[u].weight;
    offline_index_[data_.offline[u].id] = u;
  }
  for (int v = 0; v < n_on; ++v) online_index_[data_.online[v]] = v;

  std::vector<Edge> all;
  all.reserve(data_.edges.size());
  for (const EdgeRecord& e : data_.edges) {
    all.push_back({offline_index_.at(e.u), online_index_.at(e.v), e.p});
  }
  std::sort(all.begin(), all.end(), [](const Edge& a, const Edge& b) {
    return std::tie(a.v, a.u) < std::tie(b.v, b.u);
  });
  edges_ = all;
  online_begin_.assign(n_on + 1, 0);
  for (const Edge& e : edges_) ++online_begin_[e.v + 1];
  std::partial_sum(online_begin_.begin(), online_begin_.end(),
                   online_begin_.begin());

  std::sort(all.begin(), all.end(), [](const Edge& a, const Edge& b) {
    return std::tie(a.u, a.v) < std::tie(b.u, b.v);
  });
  offline_edges_ = std::move(all);
  offline_begin_.assign(n_off + 1, 0);
  for (const Edge& e : offline_edges_) ++offline_begin_[e.u + 1];
  std::partial_sum(offline_begin_.begin(), offline_begin_.end(),
                   offline_begin_.begin());

  p_max_ = 0.0;
  equal_p_ = true;
  for (const Edge& e : edges_) {
    p_max_ = std::max(p_max_, e.p);
    if (e.p != edges_.front().p) equal_p_ = false;
  }

  std::vector<int> order(n_off);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return data_.offline[a].id < data_.offline[b].id;
  });
  lex_rank_.resize(n_off);
  for (int r = 0; r < n_off; ++r) lex_rank_[order[r]] = r;
}

std::span<const Edge> Instance::online_edges(int v) const {
  return {edges_.data() + online_begin_[v],
          static_cast<size_t>(online_begin_[v + 1] - online_begin_[v])};
}

std::span<const Edge> Instance::offline_edges(int u) const {
  return {offline_edges_.data() + offline_begin_[u],
          static_cast<size_t>(offline_begin_[u + 1] - offline_begin_[u])};
}

std::optional<double> Instance::probability(int u, int v) const {
  for (const Edge& e : online_edges(v)) {
    if (e.u == u) return e.p;
  }
  return std::nullopt;
}

std::optional<int> Instance::offline_index(const std::string& id) const {
  auto it = offline_index_.find(id);
  if (it == offline_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<int> Instance::online_index(const std::string& id) const {
  auto it = online_index_.find(id);
  if (it == online_index_.end()) return std::nullopt;
  return it->second;
}

Instance Instance::ScaleProbabilities(double factor) const {
  InstanceData d = data_;
  for (EdgeRecord& e : d.edges) e.p *= factor;
  return Instance(std::move(d));
}

Instance Instance::ScaleWeights(double factor) const {
  InstanceData d = data_;
  for (OfflineRecord& r : d.offline) r.weight *= factor;
  return Instance(std::move(d));
}

double NeighborMass(const Instance& inst, int u, std::span<const int> s) {
  double total = 0.0;
  for (int v : s) {
    std::optional<double> p = inst.probability(u, v);
    if (!p) {
      throw std::invalid_argument("neighbor_mass: online vertex '" +
                                  inst.online_id(v) +
                                  "' is not a neighbor of '" +
                                  inst.offline_id(u) + "'");
    }
    total += *p;
  }
  return std::min(total, 1.0);
}

double NeighborMass(const Instance& inst, const std::string& u,
                    const std::vector<std::string>& s) {
  std::optional<int> ui = inst.offline_index(u);
  if (!ui) throw std::invalid_argument("neighbor_mass: unknown offline '" + u + "'");
  std::vector<int> idx;
  for (const std::string& v : s) {
    std::optional<int> vi = inst.online_index(v);
    if (!vi) {
      throw std::invalid_argument("neighbor_mass: unknown online '" + v + "'");
    }
    idx.push_back(*vi);
  }
  return NeighborMass(inst, *ui, idx);
}

// Generators -----------------------------------------------------------------

Instance GenUpperTriangular(int n, double p, WeightScheme weights) {
  if (n < 1) throw std::invalid_argument("upper triangular: n must be >= 1");
  if (!(p > 0.0) || p > 1.0) {
    throw std::invalid_argument("upper triangular: p must lie in (0, 1]");
  }
  const int copies = static_cast<int>(std::ceil(1.0 / p - 1e-9));
  InstanceData d;
  double w = 1.0;
  for (int j = 1; j <= n; ++j) {
    d.offline.push_back({"u" + std::to_string(j), w});
    if (weights.kind == WeightScheme::kGeometric) w *= weights.ratio;
  }
  for (int j = 1; j <= n; ++j) {
    for (int c = 1; c <= copies; ++c) {
      const std::string v =
          copies == 1 ? "v" + std::to_string(j)
                      : "v" + std::to_string(j) + "_" + std::to_string(c);
      d.online.push_back(v);
      for (int k = j; k <= n; ++k) {
        d.edges.push_back({"u" + std::to_string(k), v, p});
      }
    }
  }
  return Instance(std::move(d));
}

Instance GenRandom(const RandomInstanceParams& q, uint64_t seed) {
  if (q.num_offline < 1 || q.num_online < 1) {
    throw std::invalid_argument("random instance: need at least one vertex per side");
  }
  if (!(q.density >= 0.0 && q.density <= 1.0)) {
    throw std::invalid_argument("random instance: density outside [0, 1]");
  }
  if (!(q.p_lo >= 0.0 && q.p_hi <= 1.0 && q.p_hi > 0.0 && q.p_lo <= q.p_hi)) {
    throw std::invalid_argument("random instance: empty probability range");
  }
  if (!(q.w_lo >= 0.0 && q.w_lo <= q.w_hi && std::isfinite(q.w_hi))) {
    throw std::invalid_argument("random instance: empty weight range");
  }
  Rng rng(seed, 0, Purpose::kInstance);
  InstanceData d;
  for (int u = 1; u <= q.num_offline; ++u) {
    const double w = q.w_lo + rng.Uniform() * (q.w_hi - q.w_lo);
    d.offline.push_back({"u" + std::to_string(u), w});
  }
  for (int v = 1; v <= q.num_online; ++v) {
    const std::string vid = "v" + std::to_string(v);
    d.online.push_back(vid);
    for (int u = 1; u <= q.num_offline; ++u) {
      if (rng.Uniform() < q.density) {
        const double p = q.p_hi - rng.Uniform() * (q.p_hi - q.p_lo);
        d.edges.push_back({"u" + std::to_string(u), vid, p});
      }
    }
  }
  for (size_t i = d.online.size(); i > 1; --i) {
    std::swap(d.online[i - 1], d.online[rng.Below(i)]);
  }
  return Instance(std::move(d));
}

Instance GenCascade(int depth, double eps) {
  if (depth < 1) throw std::invalid_argument("cascade: depth must be >= 1");
  if (!(eps > 0.0) || std::ldexp(eps, depth) > 1.0) {
    throw std::invalid_argument(
        "cascade: 2^depth * eps must not exceed 1 (probability > 1)");
  }
  auto off = [](int k, int j) {
    return "u" + std::to_string(k) + "_" + std::to_string(j);
  };
  InstanceData d;
  std::vector<std::vector<int>> homes(depth + 2);
  for (int k = 0; k <= depth + 1; ++k) {
    const int count = k == 0 ? 1 : 1 << (k - 1);
    homes[k].assign(count, 0);
    for (int j = 0; j < count; ++j) d.offline.push_back({off(k, j), 1.0});
  }
  struct Arrival {
    std::string id;
    std::vector<EdgeRecord> edges;
  };
  std::vector<Arrival> layers;
  for (int k = depth; k >= 0; --k) {
    for (int j = 0; j < (1 << k); ++j) {
      const std::string v = "v" + std::to_string(k) + "_" + std::to_string(j);
      const int home_k = k;
      const int home_j = k == 0 ? 0 : j / 2;
      ++homes[home_k][home_j];
      layers.push_back(
          {v, {{off(home_k, home_j), v, eps}, {off(k + 1, j), v, 2.0 * eps}}});
    }
  }
  const int capacity = static_cast<int>(std::floor(1.0 / eps + 1e-9));
  for (int k = 0; k <= depth + 1; ++k) {
    for (size_t j = 0; j < homes[k].size(); ++j) {
      for (int c = homes[k][j]; c < capacity; ++c) {
        const std::string v = "x" + std::to_string(k) + "_" +
                              std::to_string(j) + "_" + std::to_string(c);
        d.online.push_back(v);
        d.edges.push_back({off(k, static_cast<int>(j)), v, eps});
      }
    }
  }
  for (Arrival& a : layers) {
    d.online.push_back(a.id);
    for (EdgeRecord& e : a.edges) d.edges.push_back(std::move(e));
  }
  return Instance(std::move(d));
}

// JSON -----------------------------------------------------------------------

namespace {

const json& Field(const json& obj, const char* key, const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(path + "." + key, "missing field");
  return *it;
}

std::string AsString(const json& j, const std::string& path) {
  if (!j.is_string()) throw ParseError(path, "expected a string");
  return j.get<std::string>();
}

double AsNumber(const json& j, const std::string& path) {
  if (!j.is_number()) throw ParseError(path, "expected a number");
  return j.get<double>();
}

}  // namespace

InstanceData ParseInstanceJson(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError("byte " + std::to_string(e.byte), "malformed JSON");
  }
  if (!root.is_object()) throw ParseError("$", "expected an object");
  InstanceData d;
  const json& offline = Field(root, "offline", "$");
  if (!offline.is_array()) throw ParseError("$.offline", "expected an array");
  for (size_t i = 0; i < offline.size(); ++i) {
    const std::string path = "$.offline[" + std::to_string(i) + "]";
    const json& r = offline[i];
    if (!r.is_object()) throw ParseError(path, "expected an object");
    d.offline.push_back({AsString(Field(r, "id", path), path + ".id"),
                         AsNumber(Field(r, "weight", path), path + ".weight")});
  }
  const json& online = Field(root, "online", "$");
  if (!online.is_array()) throw ParseError("$.online", "expected an array");
  for (size_t i = 0; i < online.size(); ++i) {
    d.online.push_back(AsString(online[i], "$.online[" + std::to_string(i) + "]"));
  }
  const json& edges = Field(root, "edges", "$");
  if (!edges.is_array()) throw ParseError("$.edges", "expected an array");
  for (size_t i = 0; i < edges.size(); ++i) {
    const std::string path = "$.edges[" + std::to_string(i) + "]";
    const json& e = edges[i];
    if (!e.is_object()) throw ParseError(path, "expected an object");
    d.edges.push_back({AsString(Field(e, "u", path), path + ".u"),
                       AsString(Field(e, "v", path), path + ".v"),
                       AsNumber(Field(e, "p", path), path + ".p")});
  }
  return d;
}

std::string InstanceToJson(const Instance& inst) {
  json root;
  root["offline"] = json::array();
  for (const OfflineRecord& r : inst.data().offline) {
    root["offline"].push_back({{"id", r.id}, {"weight", r.weight}});
  }
  root["online"] = inst.data().online;
  root["edges"] = json::array();
  for (const EdgeRecord& e : inst.data().edges) {
    root["edges"].push_back({{"u", e.u}, {"v", e.v}, {"p", e.p}});
  }
  return root.dump(1) + "\n";
}

Instance ReadInstance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return Instance(ParseInstanceJson(ss.str()));
}

void WriteInstance(const Instance& inst, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << InstanceToJson(inst);
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace stochmatch
