// daeme/dsdt/dsdt.hpp

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

#ifndef DAEME_DSDT_DSDT_HPP_
#define DAEME_DSDT_DSDT_HPP_

#include <string>
#include <vector>

#include "json.hpp"

#include "daeme/common.hpp"
#include "daeme/corpus/corpus.hpp"

namespace daeme::dsdt {

using PairList = std::vector<const corpus::UtterancePair*>;

/// Attribute test attached to a tree node. `Random` and `Cluster` nodes are
/// defined by their member lists alone and never match an attribute tag.
struct Predicate {
  enum class Kind { All, Speaker, SnrHigh, SnrLow, Random, Cluster };
  Kind kind = Kind::All;
  corpus::SpeakerClass speaker = corpus::SpeakerClass::A;
  double threshold_db = 0.0;
  int group = 0;

  /// Whether the tag satisfies this test in isolation (ancestors not checked).
  bool matches(const corpus::AttributeTag& tag) const;
  std::string describe() const;
  nlohmann::json to_json() const;
  static Predicate from_json(const nlohmann::json& j);
};

struct DsdtNode {
  int id = 0;
  int depth = 0;
  std::string name;
  Predicate predicate;
  std::vector<std::string> members;  ///< utterance ids, in corpus order
  int parent = -1;
  std::vector<int> children;
};

enum class TreeKind { UAT, RT, NC };

std::string_view to_string(TreeKind k);
TreeKind tree_kind_from_string(std::string_view s);

struct Dsdt {
  TreeKind kind = TreeKind::UAT;
  std::vector<DsdtNode> nodes;  ///< nodes[i].id == i; nodes[0] is the root
  std::vector<std::string> layer_labels;
  double snr_threshold_db = 10.0;

  const DsdtNode& node(int id) const;
  std::vector<int> nodes_at_depth(int depth) const;
  std::vector<int> leaves() const;
  /// True when the tag satisfies the predicates on the whole path root..id.
  bool path_matches(int id, const corpus::AttributeTag& tag) const;
  /// Throws unless the tree is connected, acyclic and every layer partitions
  /// its parent's members.
  void validate() const;

  nlohmann::json to_json() const;
  static Dsdt from_json(const nlohmann::json& j);
};

/// Root -> speaker class -> SNR regime (snr >= threshold is "high").
Dsdt build_uat(const PairList& pairs, double snr_threshold_db = 10.0);
/// UAT-shaped tree whose layers are seeded random halvings.
Dsdt build_rt(const PairList& pairs, std::uint64_t seed);

enum class SatMode { None, SS, WD };
enum class Band { Full, Low, High };

std::string_view to_string(SatMode m);
SatMode sat_mode_from_string(std::string_view s);
std::string_view to_string(Band b);

struct Branch {
  int node = 0;
  Band band = Band::Full;
};

struct PartitionPlan {
  std::string variant;  ///< "UAT2", "UAT4", "UAT6" or "custom"
  std::vector<int> node_ids;
  SatMode sat_mode = SatMode::None;

  int k() const { return sat_mode == SatMode::None ? 1 : 2; }
  /// Node-major, bands low before high.
  std::vector<Branch> branches() const;
  std::size_t branch_count() const { return node_ids.size() * static_cast<std::size_t>(k()); }

  nlohmann::json to_json() const;
  static PartitionPlan from_json(const nlohmann::json& j);
};

enum class PlanVariant { UAT2, UAT4, UAT6, Custom };

PlanVariant plan_variant_from_string(std::string_view s);

/// UAT2: depth-1 nodes; UAT4: depth-2 nodes; UAT6: both, depth-1 first.
PartitionPlan select_plan(const Dsdt& tree, PlanVariant variant, const std::vector<int>& custom_ids = {});
PartitionPlan attach_sat(const PartitionPlan& plan, SatMode mode);

struct NcClustering {
  int J = 0;
  std::uint64_t seed = 0;
  std::vector<std::string> ids;
  Matrix features;          ///< one row per utterance
  std::vector<int> assignments;
  Matrix centroids;         ///< J x dims
  std::vector<double> wcss_history;  ///< after every assignment step
  int iterations = 0;
};

/// Lloyd's k-means with k-means++ seeding. Ties go to the lowest cluster
/// index; a cluster that empties is re-seeded on the point farthest from
/// its current centroid. Throws when fewer than J distinct rows exist.
NcClustering kmeans(const Matrix& features, int J, std::uint64_t seed, int max_iter = 100);

/// Per-utterance noise proxy: mean over frames of noisy LPS minus clean LPS.
Matrix noise_proxy_features(const PairList& pairs);

NcClustering nc_partition(const PairList& pairs, int J, std::uint64_t seed);

/// Root plus one child per cluster, so NC branches reuse the plan machinery.
Dsdt nc_tree(const NcClustering& clustering);

}  // namespace daeme::dsdt

#endif  // DAEME_DSDT_DSDT_HPP_
