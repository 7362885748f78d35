/*
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "apvas/baseline_sig.hpp"
#include "apvas/bgpsec_wire.hpp"
#include "apvas/bimodal_sig.hpp"

// Per-AS route advertisement state machine: originate, receive and verify,
// best-path selection, re-sign and forward, then fold into storage.
//
// Forward-then-aggregate: a received claim is extended for every other
// neighbor while it is still a single chain, and only then merged into the
// router's stored aggregate. Stored routes cannot be re-advertised later.

namespace apvas::router {

using wire::Nlri;
using wire::SecurePathSegment;
using wire::Ski;
using wire::Suite;
using wire::UpdateMessage;

// Byte costs outside the signatures. Calibration constants, not measurements.
struct CostModel {
  std::size_t routing_entry_cost = 230;
  std::size_t attr_fixed_cost = 50;

  friend bool operator==(const CostModel&, const CostModel&) = default;
};

// plain 50, conventional 396, apvas 554 per entry; 230 per routing entry.
CostModel default_costs(Suite suite);

// Both key pairs of a router. Each suite signs with one of them.
struct RouterKeys {
  bimodal::KeyPair apvas;
  Ski apvas_ski{};
  baseline::SigningKey baseline;
  Ski baseline_ski{};
};

// Keys from std::mt19937_64 seeded with seed_seq{seed low, seed high, as_number}.
RouterKeys derive_keys(const bimodal::PublicParams& params, std::uint64_t seed, std::uint32_t as_number);

struct RouterConfig {
  std::uint32_t as_number = 0;
  Suite suite = Suite::apvas;
  std::vector<std::uint32_t> neighbors;
  RouterKeys keys;
  CostModel costs;

  const Ski& ski() const { return suite == Suite::conventional ? keys.baseline_ski : keys.apvas_ski; }
};

// Public keys of every router in a topology by SKI. Filled once before the
// routers start; read-only afterwards.
class KeyDirectory {
 public:
  void add(const RouterKeys& keys);

  const std::map<Ski, std::pair<bimodal::PublicKeyBytes, bimodal::PreparedPoint>>& apvas_keys() const {
    return apvas_;
  }
  const baseline::VerifyingKey* baseline_key(const Ski& ski) const;

 private:
  std::map<Ski, std::pair<bimodal::PublicKeyBytes, bimodal::PreparedPoint>> apvas_;
  std::map<Ski, baseline::VerifyingKey> baseline_;
};

struct RibEntry {
  Nlri nlri;
  std::vector<SecurePathSegment> secure_path;  // most recent AS first
  std::vector<Ski> ski_list;                   // same order; empty for plain
  std::uint32_t origin_as = 0;
  std::uint32_t from_as = 0;
  bool verified = false;
};

struct RibSnapshot {
  std::uint32_t as_number = 0;
  Suite suite = Suite::plain;
  std::vector<RibEntry> entries;  // ordered by nlri
  std::optional<bimodal::SignatureClaim> stored_claim;
  std::size_t stored_signatures_bytes = 0;
  std::size_t routing_table_bytes = 0;
  std::size_t route_attr_bytes = 0;

  std::size_t path_len_sum() const;
  double avg_len() const;
  // key=value lines, one header block then one line per entry.
  std::string to_text() const;
};

struct Forward {
  std::uint32_t to_as = 0;
  UpdateMessage msg;
};

struct ReceiveResult {
  bool accepted = false;
  bool stored = false;
  bool signature_failed = false;  // rejected by verification rather than by policy
  std::vector<Forward> forwarded;
  std::string reason;  // empty when accepted
};

class Router {
 public:
  Router(RouterConfig cfg, std::shared_ptr<const bimodal::PublicParams> params,
         std::shared_ptr<const KeyDirectory> directory);

  const RouterConfig& config() const { return cfg_; }

  // One-segment advertisement of nlri signed toward target_as.
  UpdateMessage originate(const Nlri& nlri, std::uint32_t target_as);
  // originate toward every neighbor in ascending AS order.
  std::vector<Forward> originate_all(const Nlri& nlri);

  // Throws RangeError if from_as is not a neighbor; decode errors propagate.
  ReceiveResult receive(const UpdateMessage& msg, std::uint32_t from_as);

  RibSnapshot snapshot_memory() const;

  // Routes dropped because folding their claim hit a repeated (pk, m).
  const std::vector<std::string>& conflicts() const { return conflicts_; }

 private:
  struct Verified {
    bool ok = false;
    std::string reason;
    bimodal::SignatureClaim claim;       // apvas only
    std::optional<bimodal::GtElement> head;  // apvas only
  };

  Verified verify_message(const UpdateMessage& msg) const;
  UpdateMessage extend(const UpdateMessage& msg, const Verified& v, std::uint32_t target_as);

  RouterConfig cfg_;
  std::shared_ptr<const bimodal::PublicParams> params_;
  std::shared_ptr<const KeyDirectory> directory_;
  mutable bimodal::KeyCache cache_;
  std::set<Nlri> owned_;
  std::map<Nlri, RibEntry> rib_;
  std::optional<bimodal::SignatureClaim> stored_claim_;
  std::vector<std::string> conflicts_;
};

}  // namespace apvas::router
