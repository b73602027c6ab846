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

// Attribute trees, random trees, partition plans and noise clustering.

#include <algorithm>
#include <set>

#include "doctest.h"

#include "daeme/dsdt/dsdt.hpp"

using namespace daeme;
using namespace daeme::dsdt;
using corpus::SpeakerClass;
using corpus::UtterancePair;

namespace {

UtterancePair tagged(std::string id, SpeakerClass spk, double snr) {
  UtterancePair p;
  p.id = std::move(id);
  p.tag.speaker = spk;
  p.tag.snr_db = snr;
  p.tag.noise_id = "white";
  return p;
}

std::vector<UtterancePair> toy8() {
  std::vector<UtterancePair> v;
  int i = 0;
  for (auto spk : {SpeakerClass::A, SpeakerClass::B})
    for (double snr : {15.0, 15.0, 0.0, 0.0}) v.push_back(tagged("u" + std::to_string(i++), spk, snr));
  return v;
}

PairList ptrs(const std::vector<UtterancePair>& v) {
  PairList out;
  for (const auto& p : v) out.push_back(&p);
  return out;
}

std::multiset<std::string> members(const Dsdt& t, const std::vector<int>& ids) {
  std::multiset<std::string> s;
  for (int id : ids) s.insert(t.node(id).members.begin(), t.node(id).members.end());
  return s;
}

void check_partition_law(const Dsdt& t) {
  for (const auto& n : t.nodes) {
    if (n.children.empty()) continue;
    std::multiset<std::string> parent(n.members.begin(), n.members.end());
    CHECK(members(t, n.children) == parent);
    for (std::size_t a = 0; a < n.children.size(); ++a)
      for (std::size_t b = a + 1; b < n.children.size(); ++b)
        for (const auto& m : t.node(n.children[a]).members) {
          const auto& other = t.node(n.children[b]).members;
          CHECK(std::find(other.begin(), other.end(), m) == other.end());
        }
  }
}

}  // namespace

TEST_CASE("build_uat splits by speaker class then by SNR regime") {
  auto v = toy8();
  Dsdt t = build_uat(ptrs(v));
  REQUIRE(t.nodes.size() == 7);
  CHECK(t.node(0).members.size() == 8);
  CHECK(t.nodes_at_depth(1).size() == 2);
  auto leaves = t.leaves();
  REQUIRE(leaves.size() == 4);
  for (int id : leaves) CHECK(t.node(id).members.size() == 2);
  CHECK(t.node(t.nodes_at_depth(1)[0]).name == "A");
  CHECK(t.node(leaves[0]).name == "A/high");
  CHECK(t.node(leaves[0]).members == std::vector<std::string>{"u0", "u1"});
  check_partition_law(t);
  CHECK(members(t, leaves) == members(t, {0}));
}

TEST_CASE("an SNR exactly at the threshold goes to the high child") {
  std::vector<UtterancePair> v = {tagged("x", SpeakerClass::B, 10.0), tagged("y", SpeakerClass::B, 9.999)};
  Dsdt t = build_uat(ptrs(v), 10.0);
  const auto& b = t.node(t.nodes_at_depth(1)[1]);
  CHECK(t.node(b.children[0]).name == "B/high");
  CHECK(t.node(b.children[0]).members == std::vector<std::string>{"x"});
  CHECK(t.node(b.children[1]).members == std::vector<std::string>{"y"});
}

TEST_CASE("UAT assignment depends on tags only") {
  auto v = toy8();
  Dsdt t1 = build_uat(ptrs(v));
  v[3].noisy.samples.assign(100, 0.3);
  v[5].clean.samples.assign(50, -0.1);
  Dsdt t2 = build_uat(ptrs(v));
  CHECK(t1.to_json() == t2.to_json());
}

TEST_CASE("build_uat rejects untagged pairs") {
  auto v = toy8();
  v[2].tag.snr_db.reset();
  CHECK_THROWS_WITH_AS(build_uat(ptrs(v)), doctest::Contains("untagged pair"), Error);
  v = toy8();
  v[6].tag.speaker.reset();
  CHECK_THROWS_AS(build_uat(ptrs(v)), Error);
}

TEST_CASE("build_rt halves each layer with balanced siblings") {
  auto v = toy8();
  Dsdt t = build_rt(ptrs(v), 5);
  REQUIRE(t.nodes.size() == 7);
  for (int id : t.nodes_at_depth(1)) CHECK(t.node(id).members.size() == 4);
  for (int id : t.leaves()) CHECK(t.node(id).members.size() == 2);
  check_partition_law(t);
  CHECK(build_rt(ptrs(v), 5).to_json() == t.to_json());

  std::vector<UtterancePair> odd;
  for (int i = 0; i < 11; ++i) odd.push_back(tagged("o" + std::to_string(i), SpeakerClass::A, 0.0));
  for (std::uint64_t s = 0; s < 20; ++s) {
    Dsdt r = build_rt(ptrs(odd), s);
    check_partition_law(r);
    for (const auto& n : r.nodes) {
      if (n.children.size() != 2) continue;
      const long a = static_cast<long>(r.node(n.children[0]).members.size());
      const long b = static_cast<long>(r.node(n.children[1]).members.size());
      CHECK(std::abs(a - b) <= 1);
    }
  }
}

TEST_CASE("build_rt membership is uniform over seeds") {
  auto v = toy8();
  std::vector<int> left(8, 0);
  for (std::uint64_t s = 0; s < 1000; ++s) {
    Dsdt t = build_rt(ptrs(v), s);
    for (const auto& id : t.node(t.nodes_at_depth(1)[0]).members) ++left[std::stoi(id.substr(1))];
  }
  for (int c : left) CHECK(std::abs(c / 1000.0 - 0.5) <= 0.05);
}

TEST_CASE("build_rt needs four pairs") {
  auto v = toy8();
  v.resize(3);
  CHECK_THROWS_AS(build_rt(ptrs(v), 1), Error);
}

TEST_CASE("select_plan variants") {
  auto v = toy8();
  Dsdt t = build_uat(ptrs(v));
  auto p2 = select_plan(t, PlanVariant::UAT2);
  auto p4 = select_plan(t, PlanVariant::UAT4);
  auto p6 = select_plan(t, PlanVariant::UAT6);
  CHECK(p2.node_ids == std::vector<int>{1, 4});
  CHECK(p4.node_ids.size() == 4);
  CHECK(p6.node_ids.size() == 6);
  CHECK(p6.branch_count() == 6);
  CHECK(p2.sat_mode == SatMode::None);
  std::set<int> s6(p6.node_ids.begin(), p6.node_ids.end());
  for (int id : p2.node_ids) CHECK(s6.count(id) == 1);
  for (int id : p4.node_ids) CHECK(s6.count(id) == 1);

  auto single = select_plan(t, PlanVariant::Custom, {0});
  CHECK(single.branch_count() == 1);
  CHECK_THROWS_AS(select_plan(t, PlanVariant::Custom, {9}), Error);
  CHECK_THROWS_AS(select_plan(t, PlanVariant::Custom, {}), Error);
}

TEST_CASE("attach_sat doubles the branches once") {
  auto v = toy8();
  Dsdt t = build_uat(ptrs(v));
  auto wd = attach_sat(select_plan(t, PlanVariant::UAT6), SatMode::WD);
  CHECK(wd.branch_count() == 12);
  auto br = wd.branches();
  REQUIRE(br.size() == 12);
  CHECK(br[0].band == Band::Low);
  CHECK(br[1].band == Band::High);
  CHECK(br[0].node == br[1].node);
  auto ss = attach_sat(select_plan(t, PlanVariant::UAT2), SatMode::SS);
  CHECK(ss.branch_count() == 4);
  CHECK_THROWS_AS(attach_sat(ss, SatMode::WD), Error);
}

TEST_CASE("path_matches finds the deepest consistent nodes") {
  auto v = toy8();
  Dsdt t = build_uat(ptrs(v));
  corpus::AttributeTag tag;
  tag.speaker = SpeakerClass::A;
  tag.snr_db = 15.0;
  std::vector<int> hits;
  for (const auto& n : t.nodes)
    if (t.path_matches(n.id, tag)) hits.push_back(n.id);
  CHECK(hits == std::vector<int>{0, 1, 2});
  Dsdt rt = build_rt(ptrs(v), 1);
  CHECK_FALSE(rt.path_matches(1, tag));
}

TEST_CASE("tree and plan JSON round trip") {
  auto v = toy8();
  for (const Dsdt& t : {build_uat(ptrs(v), 7.5), build_rt(ptrs(v), 3)}) {
    Dsdt back = Dsdt::from_json(nlohmann::json::parse(t.to_json().dump()));
    CHECK(back.to_json() == t.to_json());
    CHECK(back.nodes[2].predicate.describe() == t.nodes[2].predicate.describe());
  }
  auto p = attach_sat(select_plan(build_uat(ptrs(v)), PlanVariant::UAT4), SatMode::SS);
  auto q = PartitionPlan::from_json(p.to_json());
  CHECK(q.node_ids == p.node_ids);
  CHECK(q.sat_mode == SatMode::SS);

  nlohmann::json broken = build_uat(ptrs(v)).to_json();
  broken["nodes"][3]["members"].push_back("u7");
  CHECK_THROWS_AS(Dsdt::from_json(broken), Error);
}

TEST_CASE("kmeans separates two tight blobs and never increases WCSS") {
  Rng rng(11);
  Matrix f(40, 3);
  for (int i = 0; i < 40; ++i)
    for (int d = 0; d < 3; ++d) f(i, d) = (i % 2 == 0 ? 5.0 : -5.0) + 0.1 * rng.normal();
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    NcClustering c = kmeans(f, 2, seed);
    for (int i = 2; i < 40; ++i) CHECK(c.assignments[i] == c.assignments[i % 2]);
    CHECK(c.assignments[0] != c.assignments[1]);
    for (std::size_t k = 1; k < c.wcss_history.size(); ++k)
      CHECK(c.wcss_history[k] <= c.wcss_history[k - 1] + 1e-12);
  }
  NcClustering a = kmeans(f, 3, 4), b = kmeans(f, 3, 4);
  CHECK(a.assignments == b.assignments);
}

TEST_CASE("kmeans WCSS is monotone on unstructured data and no cluster is empty") {
  Rng rng(3);
  Matrix f(60, 4);
  for (Eigen::Index i = 0; i < f.size(); ++i) f.data()[i] = rng.normal();
  for (int J : {2, 3, 5, 8}) {
    NcClustering c = kmeans(f, J, 9);
    std::vector<int> count(J, 0);
    for (int a : c.assignments) ++count[a];
    for (int n : count) CHECK(n > 0);
    for (std::size_t k = 1; k < c.wcss_history.size(); ++k)
      CHECK(c.wcss_history[k] <= c.wcss_history[k - 1] + 1e-12);
    CHECK(c.iterations < 100);
  }
}

TEST_CASE("kmeans preconditions") {
  Matrix two(2, 2);
  two << 1, 2, 3, 4;
  NcClustering c = kmeans(two, 2, 1);
  CHECK(c.assignments[0] != c.assignments[1]);
  Matrix same(2, 2);
  same << 1, 2, 1, 2;
  CHECK_THROWS_AS(kmeans(same, 2, 1), Error);
  CHECK_THROWS_AS(kmeans(two, 1, 1), Error);
  CHECK_THROWS_AS(kmeans(two, 3, 1), Error);
}

TEST_CASE("nc_partition clusters noise kinds on a synthesized corpus") {
  corpus::CorpusConfig cfg;
  cfg.n_train = 12;
  cfg.n_test = 0;
  cfg.train_noises = {corpus::NoiseKind::White, corpus::NoiseKind::CarProxy};
  cfg.train_snrs = {0.0};
  cfg.test_noises = {corpus::NoiseKind::Pink};
  auto corp = corpus::build_corpus(cfg);
  auto pairs = corp.split(corpus::Split::Train);
  NcClustering c = nc_partition(pairs, 2, 1);
  REQUIRE(c.ids.size() == 12);
  for (std::size_t i = 0; i < pairs.size(); ++i)
    for (std::size_t j = 0; j < pairs.size(); ++j)
      if (pairs[i]->tag.noise_id == pairs[j]->tag.noise_id) CHECK(c.assignments[i] == c.assignments[j]);
  Dsdt t = nc_tree(c);
  CHECK(t.nodes.size() == 3);
  check_partition_law(t);
  CHECK(select_plan(t, PlanVariant::UAT2).branch_count() == 2);
  CHECK_THROWS_AS(nc_partition(pairs, 13, 1), Error);
}
