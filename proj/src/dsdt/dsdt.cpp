// dsdt/dsdt.cpp

// Copyright 2026  The DAEME Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "daeme/dsdt/dsdt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>

#include "daeme/dsp/stft.hpp"

namespace daeme::dsdt {

using nlohmann::json;
using corpus::AttributeTag;
using corpus::SpeakerClass;

namespace {

std::string_view kind_name(Predicate::Kind k) {
  switch (k) {
    case Predicate::Kind::All: return "all";
    case Predicate::Kind::Speaker: return "speaker";
    case Predicate::Kind::SnrHigh: return "snr_high";
    case Predicate::Kind::SnrLow: return "snr_low";
    case Predicate::Kind::Random: return "random";
    case Predicate::Kind::Cluster: return "cluster";
  }
  return "?";
}

Predicate::Kind kind_from_name(std::string_view s) {
  for (auto k : {Predicate::Kind::All, Predicate::Kind::Speaker, Predicate::Kind::SnrHigh, Predicate::Kind::SnrLow,
                 Predicate::Kind::Random, Predicate::Kind::Cluster})
    if (kind_name(k) == s) return k;
  throw Error("unknown predicate kind '" + std::string(s) + "'");
}

std::string fmt_db(double v) {
  std::string s = std::to_string(v);
  s.erase(s.find_last_not_of('0') + 1);
  if (!s.empty() && s.back() == '.') s.pop_back();
  return s;
}

int add_node(Dsdt& t, int parent, std::string name, Predicate p, std::vector<std::string> members) {
  DsdtNode n;
  n.id = static_cast<int>(t.nodes.size());
  n.parent = parent;
  n.depth = parent < 0 ? 0 : t.nodes[parent].depth + 1;
  n.name = std::move(name);
  n.predicate = p;
  n.members = std::move(members);
  if (parent >= 0) t.nodes[parent].children.push_back(n.id);
  t.nodes.push_back(std::move(n));
  return t.nodes.back().id;
}

std::vector<std::string> ids_of(const PairList& pairs) {
  std::vector<std::string> ids;
  std::set<std::string> seen;
  for (const auto* p : pairs) {
    if (!seen.insert(p->id).second) throw Error("duplicate utterance id " + p->id);
    ids.push_back(p->id);
  }
  return ids;
}

}  // namespace

bool Predicate::matches(const AttributeTag& tag) const {
  switch (kind) {
    case Kind::All: return true;
    case Kind::Speaker: return tag.speaker && *tag.speaker == speaker;
    case Kind::SnrHigh: return tag.snr_db && *tag.snr_db >= threshold_db;
    case Kind::SnrLow: return tag.snr_db && *tag.snr_db < threshold_db;
    case Kind::Random:
    case Kind::Cluster: return false;
  }
  return false;
}

std::string Predicate::describe() const {
  switch (kind) {
    case Kind::All: return "all";
    case Kind::Speaker: return "speaker_class = " + std::string(corpus::to_string(speaker));
    case Kind::SnrHigh: return "snr_db >= " + fmt_db(threshold_db);
    case Kind::SnrLow: return "snr_db < " + fmt_db(threshold_db);
    case Kind::Random: return "random group " + std::to_string(group);
    case Kind::Cluster: return "cluster " + std::to_string(group);
  }
  return "?";
}

json Predicate::to_json() const {
  json j{{"kind", std::string(kind_name(kind))}};
  if (kind == Kind::Speaker) j["speaker"] = std::string(corpus::to_string(speaker));
  if (kind == Kind::SnrHigh || kind == Kind::SnrLow) j["threshold_db"] = threshold_db;
  if (kind == Kind::Random || kind == Kind::Cluster) j["group"] = group;
  return j;
}

Predicate Predicate::from_json(const json& j) {
  Predicate p;
  p.kind = kind_from_name(j.at("kind").get<std::string>());
  if (j.contains("speaker")) p.speaker = corpus::speaker_class_from_string(j.at("speaker").get<std::string>());
  p.threshold_db = j.value("threshold_db", 0.0);
  p.group = j.value("group", 0);
  return p;
}

std::string_view to_string(TreeKind k) {
  switch (k) {
    case TreeKind::UAT: return "UAT";
    case TreeKind::RT: return "RT";
    case TreeKind::NC: return "NC";
  }
  return "?";
}

TreeKind tree_kind_from_string(std::string_view s) {
  if (s == "UAT") return TreeKind::UAT;
  if (s == "RT") return TreeKind::RT;
  if (s == "NC") return TreeKind::NC;
  throw ConfigError("unknown tree kind '" + std::string(s) + "'");
}

const DsdtNode& Dsdt::node(int id) const {
  if (id < 0 || id >= static_cast<int>(nodes.size())) throw Error("unknown node id " + std::to_string(id));
  return nodes[id];
}

std::vector<int> Dsdt::nodes_at_depth(int depth) const {
  std::vector<int> out;
  for (const auto& n : nodes)
    if (n.depth == depth) out.push_back(n.id);
  return out;
}

std::vector<int> Dsdt::leaves() const {
  std::vector<int> out;
  for (const auto& n : nodes)
    if (n.children.empty()) out.push_back(n.id);
  return out;
}

bool Dsdt::path_matches(int id, const AttributeTag& tag) const {
  for (int cur = id; cur >= 0; cur = node(cur).parent)
    if (!node(cur).predicate.matches(tag)) return false;
  return true;
}

void Dsdt::validate() const {
  if (nodes.empty()) throw Error("dsdt: empty tree");
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const auto& n = nodes[i];
    if (n.id != static_cast<int>(i)) throw Error("dsdt: node ids must equal their position");
    if ((i == 0) != (n.parent < 0)) throw Error("dsdt: exactly node 0 may be the root");
    if (n.parent >= static_cast<int>(i)) throw Error("dsdt: parent must precede child");
    if (n.parent >= 0) {
      const auto& ch = nodes[n.parent].children;
      if (std::count(ch.begin(), ch.end(), n.id) != 1) throw Error("dsdt: parent/child links disagree");
      if (n.depth != nodes[n.parent].depth + 1) throw Error("dsdt: inconsistent depth");
    }
    if (n.children.empty()) continue;
    std::multiset<std::string> parent_set(n.members.begin(), n.members.end());
    std::multiset<std::string> union_set;
    for (int c : n.children) {
      const auto& m = node(c).members;
      union_set.insert(m.begin(), m.end());
    }
    if (union_set != parent_set)
      throw Error("dsdt: children of node " + n.name + " do not partition its members");
  }
}

json Dsdt::to_json() const {
  json j;
  j["kind"] = std::string(to_string(kind));
  j["snr_threshold_db"] = snr_threshold_db;
  j["layer_labels"] = layer_labels;
  json a = json::array();
  for (const auto& n : nodes)
    a.push_back({{"id", n.id},
                 {"depth", n.depth},
                 {"name", n.name},
                 {"predicate", n.predicate.to_json()},
                 {"members", n.members},
                 {"parent", n.parent},
                 {"children", n.children}});
  j["nodes"] = std::move(a);
  return j;
}

Dsdt Dsdt::from_json(const json& j) {
  Dsdt t;
  t.kind = tree_kind_from_string(j.at("kind").get<std::string>());
  t.snr_threshold_db = j.value("snr_threshold_db", 10.0);
  t.layer_labels = j.value("layer_labels", std::vector<std::string>{});
  for (const auto& e : j.at("nodes")) {
    DsdtNode n;
    n.id = e.at("id").get<int>();
    n.depth = e.at("depth").get<int>();
    n.name = e.at("name").get<std::string>();
    n.predicate = Predicate::from_json(e.at("predicate"));
    n.members = e.at("members").get<std::vector<std::string>>();
    n.parent = e.at("parent").get<int>();
    n.children = e.at("children").get<std::vector<int>>();
    t.nodes.push_back(std::move(n));
  }
  t.validate();
  return t;
}

Dsdt build_uat(const PairList& pairs, double snr_threshold_db) {
  if (!std::isfinite(snr_threshold_db)) throw ConfigError("dsdt: non-finite SNR threshold");
  for (const auto* p : pairs)
    if (!p->tag.tagged()) throw Error("untagged pair " + p->id);

  Dsdt t;
  t.kind = TreeKind::UAT;
  t.snr_threshold_db = snr_threshold_db;
  t.layer_labels = {"root", "gender", "gender x snr"};
  const int root = add_node(t, -1, "root", {}, ids_of(pairs));

  for (SpeakerClass spk : {SpeakerClass::A, SpeakerClass::B}) {
    Predicate ps;
    ps.kind = Predicate::Kind::Speaker;
    ps.speaker = spk;
    std::vector<std::string> members;
    for (const auto* p : pairs)
      if (ps.matches(p->tag)) members.push_back(p->id);
    const std::string sname(corpus::to_string(spk));
    const int g = add_node(t, root, sname, ps, members);
    for (auto kind : {Predicate::Kind::SnrHigh, Predicate::Kind::SnrLow}) {
      Predicate pr;
      pr.kind = kind;
      pr.threshold_db = snr_threshold_db;
      std::vector<std::string> sub;
      for (const auto* p : pairs)
        if (ps.matches(p->tag) && pr.matches(p->tag)) sub.push_back(p->id);
      add_node(t, g, sname + (kind == Predicate::Kind::SnrHigh ? "/high" : "/low"), pr, sub);
    }
  }
  t.validate();
  return t;
}

Dsdt build_rt(const PairList& pairs, std::uint64_t seed) {
  if (pairs.size() < 4) throw Error("build_rt: needs at least 4 pairs, got " + std::to_string(pairs.size()));
  const auto ids = ids_of(pairs);
  Rng rng(derive_seed(seed, "random-tree"));

  // Random halving; which half receives the odd element is itself random so
  // that every member is equally likely to land on either side.
  auto halve = [&](const std::vector<std::size_t>& idx) {
    std::vector<std::size_t> perm = idx;
    shuffle(std::span<std::size_t>(perm), rng);
    std::size_t n_left = perm.size() / 2;
    if (perm.size() % 2 == 1 && rng.index(2) == 0) ++n_left;
    std::vector<std::size_t> left(perm.begin(), perm.begin() + n_left), right(perm.begin() + n_left, perm.end());
    std::sort(left.begin(), left.end());
    std::sort(right.begin(), right.end());
    return std::pair{left, right};
  };
  auto names = [&](const std::vector<std::size_t>& idx) {
    std::vector<std::string> out;
    for (std::size_t i : idx) out.push_back(ids[i]);
    return out;
  };

  Dsdt t;
  t.kind = TreeKind::RT;
  t.layer_labels = {"root", "random", "random x random"};
  std::vector<std::size_t> all(ids.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  const int root = add_node(t, -1, "root", {}, ids);
  auto [l, r] = halve(all);
  int group = 0;
  for (const auto& [half, label] : {std::pair{l, std::string("R0")}, std::pair{r, std::string("R1")}}) {
    Predicate p;
    p.kind = Predicate::Kind::Random;
    p.group = group++;
    const int g = add_node(t, root, label, p, names(half));
    auto [ll, rr] = halve(half);
    int sub = 0;
    for (const auto& part : {ll, rr}) {
      Predicate q;
      q.kind = Predicate::Kind::Random;
      q.group = sub;
      add_node(t, g, label + "/" + std::to_string(sub), q, names(part));
      ++sub;
    }
  }
  t.validate();
  return t;
}

std::string_view to_string(SatMode m) {
  switch (m) {
    case SatMode::None: return "none";
    case SatMode::SS: return "SS";
    case SatMode::WD: return "WD";
  }
  return "?";
}

SatMode sat_mode_from_string(std::string_view s) {
  if (s == "none") return SatMode::None;
  if (s == "SS") return SatMode::SS;
  if (s == "WD") return SatMode::WD;
  throw ConfigError("unknown SAT mode '" + std::string(s) + "'");
}

std::string_view to_string(Band b) {
  switch (b) {
    case Band::Full: return "full";
    case Band::Low: return "low";
    case Band::High: return "high";
  }
  return "?";
}

std::vector<Branch> PartitionPlan::branches() const {
  std::vector<Branch> out;
  for (int id : node_ids) {
    if (sat_mode == SatMode::None) {
      out.push_back({id, Band::Full});
    } else {
      out.push_back({id, Band::Low});
      out.push_back({id, Band::High});
    }
  }
  return out;
}

json PartitionPlan::to_json() const {
  return {{"variant", variant}, {"node_ids", node_ids}, {"sat_mode", std::string(to_string(sat_mode))}};
}

PartitionPlan PartitionPlan::from_json(const json& j) {
  PartitionPlan p;
  p.variant = j.at("variant").get<std::string>();
  p.node_ids = j.at("node_ids").get<std::vector<int>>();
  p.sat_mode = sat_mode_from_string(j.at("sat_mode").get<std::string>());
  if (p.node_ids.empty()) throw Error("plan: no nodes selected");
  return p;
}

PlanVariant plan_variant_from_string(std::string_view s) {
  if (s == "UAT2") return PlanVariant::UAT2;
  if (s == "UAT4") return PlanVariant::UAT4;
  if (s == "UAT6") return PlanVariant::UAT6;
  if (s == "custom") return PlanVariant::Custom;
  throw ConfigError("unknown plan variant '" + std::string(s) + "'");
}

PartitionPlan select_plan(const Dsdt& tree, PlanVariant variant, const std::vector<int>& custom_ids) {
  PartitionPlan p;
  switch (variant) {
    case PlanVariant::UAT2:
      p.variant = "UAT2";
      p.node_ids = tree.nodes_at_depth(1);
      break;
    case PlanVariant::UAT4:
      p.variant = "UAT4";
      p.node_ids = tree.nodes_at_depth(2);
      break;
    case PlanVariant::UAT6:
      p.variant = "UAT6";
      p.node_ids = tree.nodes_at_depth(1);
      for (int id : tree.nodes_at_depth(2)) p.node_ids.push_back(id);
      break;
    case PlanVariant::Custom:
      p.variant = "custom";
      for (int id : custom_ids) {
        if (id < 0 || id >= static_cast<int>(tree.nodes.size()))
          throw Error("select_plan: unknown node id " + std::to_string(id));
        if (std::find(p.node_ids.begin(), p.node_ids.end(), id) != p.node_ids.end())
          throw Error("select_plan: node id " + std::to_string(id) + " listed twice");
        p.node_ids.push_back(id);
      }
      break;
  }
  if (p.node_ids.empty()) throw Error("select_plan: plan " + p.variant + " selects no nodes in this tree");
  return p;
}

PartitionPlan attach_sat(const PartitionPlan& plan, SatMode mode) {
  if (plan.sat_mode != SatMode::None) throw Error("attach_sat: SAT already attached to this plan");
  if (mode == SatMode::None) throw Error("attach_sat: mode must be SS or WD");
  PartitionPlan p = plan;
  p.sat_mode = mode;
  return p;
}

NcClustering kmeans(const Matrix& features, int J, std::uint64_t seed, int max_iter) {
  const Eigen::Index n = features.rows();
  if (J < 2) throw Error("nc_partition: J must be at least 2");
  if (n < J) throw Error("nc_partition: J = " + std::to_string(J) + " exceeds the number of pairs (" +
                         std::to_string(n) + ")");
  if (!features.allFinite()) throw Error("nc_partition: non-finite features");
  {
    std::set<std::vector<double>> distinct;
    for (Eigen::Index i = 0; i < n; ++i)
      distinct.insert(std::vector<double>(features.row(i).data(), features.row(i).data() + features.cols()));
    if (static_cast<int>(distinct.size()) < J)
      throw Error("nc_partition: only " + std::to_string(distinct.size()) + " distinct feature vectors for J = " +
                  std::to_string(J) + " clusters");
  }

  NcClustering c;
  c.J = J;
  c.seed = seed;
  c.features = features;
  Rng rng(derive_seed(seed, "kmeans"));

  // k-means++ seeding.
  c.centroids.resize(J, features.cols());
  c.centroids.row(0) = features.row(static_cast<Eigen::Index>(rng.index(n)));
  Vector d2 = (features.rowwise() - c.centroids.row(0)).rowwise().squaredNorm();
  for (int k = 1; k < J; ++k) {
    const double total = d2.sum();
    Eigen::Index pick = 0;
    double u = rng.uniform() * total;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (d2[i] <= 0.0) continue;
      pick = i;
      if ((u -= d2[i]) < 0.0) break;
    }
    c.centroids.row(k) = features.row(pick);
    d2 = d2.cwiseMin((features.rowwise() - c.centroids.row(k)).rowwise().squaredNorm());
  }

  c.assignments.assign(n, -1);
  for (int it = 0; it < max_iter; ++it) {
    bool changed = false;
    double wcss = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      int best = 0;
      double bd = std::numeric_limits<double>::infinity();
      for (int k = 0; k < J; ++k) {
        const double d = (features.row(i) - c.centroids.row(k)).squaredNorm();
        if (d < bd) {
          bd = d;
          best = k;
        }
      }
      wcss += bd;
      if (c.assignments[i] != best) changed = true;
      c.assignments[i] = best;
    }
    c.wcss_history.push_back(wcss);
    c.iterations = it + 1;

    std::vector<int> count(J, 0);
    Matrix sums = Matrix::Zero(J, features.cols());
    for (Eigen::Index i = 0; i < n; ++i) {
      ++count[c.assignments[i]];
      sums.row(c.assignments[i]) += features.row(i);
    }
    bool reseeded = false;
    for (int k = 0; k < J; ++k) {
      if (count[k] > 0) {
        c.centroids.row(k) = sums.row(k) / count[k];
        continue;
      }
      // Empty cluster: move it onto the point worst served by its centroid.
      Eigen::Index far = 0;
      double fd = -1.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        const double d = (features.row(i) - c.centroids.row(c.assignments[i])).squaredNorm();
        if (d > fd) {
          fd = d;
          far = i;
        }
      }
      c.centroids.row(k) = features.row(far);
      reseeded = true;
    }
    if (!changed && !reseeded && it > 0) break;
  }
  std::vector<int> count(J, 0);
  for (int a : c.assignments) ++count[a];
  for (int k = 0; k < J; ++k)
    if (count[k] == 0) throw Error("nc_partition: cluster " + std::to_string(k) + " is empty after k-means");
  return c;
}

Matrix noise_proxy_features(const PairList& pairs) {
  if (pairs.empty()) throw Error("nc_partition: no pairs");
  Matrix f(static_cast<Eigen::Index>(pairs.size()), 257);
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    auto [noisy, np] = dsp::stft_analyze(pairs[i]->noisy);
    auto [clean, cp] = dsp::stft_analyze(pairs[i]->clean);
    if (noisy.dims() != f.cols()) f.conservativeResize(Eigen::NoChange, noisy.dims());
    f.row(static_cast<Eigen::Index>(i)) = (noisy.frames - clean.frames).colwise().mean();
  }
  return f;
}

NcClustering nc_partition(const PairList& pairs, int J, std::uint64_t seed) {
  if (J < 2) throw Error("nc_partition: J must be at least 2");
  if (static_cast<int>(pairs.size()) < J)
    throw Error("nc_partition: J = " + std::to_string(J) + " exceeds the number of pairs (" +
                std::to_string(pairs.size()) + ")");
  NcClustering c = kmeans(noise_proxy_features(pairs), J, seed);
  c.ids = ids_of(pairs);
  return c;
}

Dsdt nc_tree(const NcClustering& c) {
  if (c.ids.size() != c.assignments.size()) throw Error("nc_tree: clustering has no utterance ids");
  Dsdt t;
  t.kind = TreeKind::NC;
  t.layer_labels = {"root", "cluster"};
  const int root = add_node(t, -1, "root", {}, c.ids);
  for (int k = 0; k < c.J; ++k) {
    Predicate p;
    p.kind = Predicate::Kind::Cluster;
    p.group = k;
    std::vector<std::string> members;
    for (std::size_t i = 0; i < c.ids.size(); ++i)
      if (c.assignments[i] == k) members.push_back(c.ids[i]);
    add_node(t, root, "C" + std::to_string(k), p, members);
  }
  t.validate();
  return t;
}

}  // namespace daeme::dsdt
