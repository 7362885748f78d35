/*
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "apvas/router_engine.hpp"

// Deterministic experiment harness: static advertisement over a topology,
// one synchronous FIFO queue (breadth-first, per-link order preserved), byte
// accounting per router, least-squares fits and cross-suite reports.

namespace apvas::netsim {

using router::CostModel;
using router::RibSnapshot;
using wire::Suite;

inline constexpr std::size_t kMaxPathCount = 250;

struct Advertisement {
  std::uint32_t origin_as = 0;
  std::size_t path_count = 0;
  std::uint64_t nlri_seed = 0;

  friend bool operator==(const Advertisement&, const Advertisement&) = default;
};

// JSON with // and /* */ comments:
//
//   {
//     "routers": [65001, 65002],
//     "links": [[65001, 65002]],
//     "advertisements": [{"origin_as": 65001, "path_count": 200, "nlri_seed": 1}],
//     "key_seed": 1,
//     "routing_entry_cost": 230,
//     "attr_fixed_cost": {"plain": 50, "conventional": 396, "apvas": 554}
//   }
//
// Every key except "routers" and "links" is optional.
struct TopologyConfig {
  std::vector<std::uint32_t> routers;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> links;
  std::vector<Advertisement> advertisements;
  std::uint64_t key_seed = 1;
  std::size_t routing_entry_cost = 230;
  std::map<Suite, std::size_t> attr_fixed_cost{{Suite::plain, 50}, {Suite::conventional, 396}, {Suite::apvas, 554}};

  // count routers 65001.. in a line, the first advertising path_count prefixes.
  static TopologyConfig line(std::size_t count, std::size_t path_count, std::uint64_t seed = 1);

  // Throws ConfigError naming the problem.
  static TopologyConfig parse(std::string_view json_text);
  // Throws IoError when the file cannot be read, ConfigError otherwise.
  static TopologyConfig load(const std::filesystem::path& path);

  // Throws ConfigError: duplicate or unknown AS, self link, disconnected
  // graph, unknown origin, more than 250 paths per advertisement, or more
  // prefixes than the 198.18.0.0/15 pool holds.
  void validate() const;

  // Replaces key_seed with seed and each nlri_seed with seed + index.
  void override_seeds(std::uint64_t seed);

  CostModel costs(Suite suite) const;
  std::map<std::uint32_t, std::vector<std::uint32_t>> adjacency() const;
  std::set<std::uint32_t> origins() const;

  nlohmann::json to_json() const;
  // Hex SHA-256 of the canonical JSON form.
  std::string digest() const;

  friend bool operator==(const TopologyConfig&, const TopologyConfig&) = default;
};

// Distinct /24 prefixes from 198.18.0.0/15 for each advertisement, in
// advertisement order. Seeded Fisher-Yates over the prefixes still unused.
std::vector<std::vector<wire::Nlri>> allocate_prefixes(const TopologyConfig& cfg);

struct LinearFit {
  double slope = 0;
  double intercept = 0;
  std::vector<double> residuals;
  double max_abs_residual = 0;

  double predict(double x) const { return slope * x + intercept; }
};

// Ordinary least squares. Throws RangeError unless there are two distinct x.
LinearFit least_squares_fit(std::span<const std::pair<double, double>> series);

// route_attr_bytes of a router holding `paths` routes of length L:
// fixed + paths * (per_hop * L + per_entry).
struct AttrModel {
  double fixed = 0;
  double per_hop = 0;
  double per_entry = 0;

  double at(double paths, double len) const { return (paths > 0 ? fixed : 0) + paths * (per_hop * len + per_entry); }
};
AttrModel attr_model(Suite suite, const CostModel& costs);

// Signature-block wire bytes: 1 + 118 L conventional, 67 + 20 L apvas.
double sig_block_bytes(Suite suite, double len);
// 1 - apvas / conventional signature-block bytes at length len.
double sig_block_reduction(double len);

struct RunStats {
  std::size_t originated = 0;
  std::size_t delivered = 0;
  std::size_t accepted = 0;
  std::size_t stored = 0;
  std::size_t rejected_signature = 0;
  std::size_t rejected_policy = 0;
  std::vector<std::string> conflicts;
};

struct ExperimentResult {
  Suite suite = Suite::plain;
  std::string config_digest;
  TopologyConfig config;
  std::map<std::uint32_t, RibSnapshot> per_router;  // every router, origins included
  std::vector<std::uint32_t> measured;                // routers that originate nothing
  std::vector<std::pair<double, double>> series;      // (avg_len, route_attr_bytes) per measured router
  std::optional<LinearFit> fit;                       // when the series has two distinct lengths
  std::optional<double> predicted_at_20;
  RunStats stats;

  // suite,as_number,path_count,avg_len,routing_table_bytes,route_attr_bytes,sig_block_bytes
  static std::string csv_header();
  std::string csv_rows() const;
  nlohmann::json to_json() const;
};

// Throws ConfigError for an invalid config.
ExperimentResult run_experiment(const TopologyConfig& cfg, Suite suite);

struct ReportDocument {
  nlohmann::json data;
  std::string text;
};

// Throws ConfigError when results is empty, a suite repeats, or the configs differ.
ReportDocument compare_report(std::span<const ExperimentResult> results);

// NIST full-route path counts (2020-2025, ECDSA-256 estimates) projected with
// the per-path byte model at the given average path length. Model output only.
nlohmann::json full_route_projection(const TopologyConfig& cfg, double avg_len);

// Writes results.csv, report.json, report.txt and rib/<suite>_<as>.txt under
// dir. Throws IoError.
void write_outputs(const std::filesystem::path& dir, std::span<const ExperimentResult> results);

}  // namespace apvas::netsim
