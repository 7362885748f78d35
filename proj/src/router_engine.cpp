/*
 * SPDX-License-Identifier: Apache-2.0
 */

#include "apvas/router_engine.hpp"

#include <algorithm>
#include <random>
#include <sstream>

namespace apvas::router {

namespace {

bool contains_as(const std::vector<SecurePathSegment>& path, std::uint32_t as) {
  return std::any_of(path.begin(), path.end(), [&](const SecurePathSegment& s) { return s.as_number == as; });
}

std::vector<Ski> skis_of(const wire::SignatureBlock& block) {
  std::vector<Ski> out;
  if (auto* a = std::get_if<wire::SignatureBlockApvas>(&block)) out = a->skis;
  if (auto* c = std::get_if<wire::SignatureBlockConventional>(&block)) {
    for (const auto& seg : c->segments) out.push_back(seg.ski);
  }
  return out;
}

std::string path_text(const std::vector<SecurePathSegment>& path) {
  std::string out;
  for (const auto& s : path) {
    if (!out.empty()) out += ' ';
    out += std::to_string(s.as_number);
  }
  return out;
}

}  // namespace

CostModel default_costs(Suite suite) {
  switch (suite) {
    case Suite::plain:
      return {230, 50};
    case Suite::conventional:
      return {230, 396};
    case Suite::apvas:
      return {230, 554};
  }
  return {};
}

RouterKeys derive_keys(const bimodal::PublicParams& params, std::uint64_t seed, std::uint32_t as_number) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), as_number};
  std::mt19937_64 rng(seq);
  RouterKeys keys;
  keys.apvas = bimodal::user_key_gen(params, rng);
  keys.apvas_ski = wire::ski_of(keys.apvas.pk_bytes);
  keys.baseline = baseline::SigningKey::generate(rng);
  keys.baseline_ski = wire::ski_of(keys.baseline.public_key());
  return keys;
}

void KeyDirectory::add(const RouterKeys& keys) {
  apvas_.try_emplace(keys.apvas_ski, keys.apvas.pk_bytes, bimodal::PreparedPoint(keys.apvas.pk));
  baseline_.try_emplace(keys.baseline_ski, baseline::VerifyingKey::from_bytes(keys.baseline.public_key()));
}

const baseline::VerifyingKey* KeyDirectory::baseline_key(const Ski& ski) const {
  auto it = baseline_.find(ski);
  return it == baseline_.end() ? nullptr : &it->second;
}

std::size_t RibSnapshot::path_len_sum() const {
  std::size_t n = 0;
  for (const auto& e : entries) n += e.secure_path.size();
  return n;
}

double RibSnapshot::avg_len() const {
  return entries.empty() ? 0.0 : static_cast<double>(path_len_sum()) / static_cast<double>(entries.size());
}

std::string RibSnapshot::to_text() const {
  std::ostringstream out;
  out << "as_number=" << as_number << '\n'
      << "suite=" << wire::suite_name(suite) << '\n'
      << "entry_count=" << entries.size() << '\n'
      << "path_len_sum=" << path_len_sum() << '\n'
      << "stored_chains=" << (stored_claim ? stored_claim->chains.size() : 0) << '\n'
      << "stored_signatures_bytes=" << stored_signatures_bytes << '\n'
      << "routing_table_bytes=" << routing_table_bytes << '\n'
      << "route_attr_bytes=" << route_attr_bytes << '\n';
  if (stored_claim) out << "stored_sigma=" << to_hex(stored_claim->sigma.to_bytes()) << '\n';
  for (const auto& e : entries) {
    out << "entry nlri=" << e.nlri.to_string() << " path=" << path_text(e.secure_path) << " origin=" << e.origin_as
        << " from=" << e.from_as << " verified=" << (e.verified ? 1 : 0) << '\n';
  }
  return out.str();
}

Router::Router(RouterConfig cfg, std::shared_ptr<const bimodal::PublicParams> params,
               std::shared_ptr<const KeyDirectory> directory)
    : cfg_(std::move(cfg)), params_(std::move(params)), directory_(std::move(directory)) {
  std::sort(cfg_.neighbors.begin(), cfg_.neighbors.end());
  cfg_.neighbors.erase(std::unique(cfg_.neighbors.begin(), cfg_.neighbors.end()), cfg_.neighbors.end());
  for (const auto& [ski, key] : directory_->apvas_keys()) cache_.insert(key.first, key.second);
}

UpdateMessage Router::originate(const Nlri& nlri, std::uint32_t target_as) {
  owned_.insert(nlri);
  UpdateMessage msg;
  msg.nlri = nlri;
  msg.secure_path.push_back({1, 0, cfg_.as_number});
  if (cfg_.suite == Suite::plain) return msg;

  if (cfg_.suite == Suite::apvas) {
    msg.sig_block = wire::SignatureBlockApvas{};
  } else {
    msg.sig_block = wire::SignatureBlockConventional{};
  }
  // The suite byte of the signed octets comes from the block type.
  const Bytes m = wire::build_signed_octets(target_as, msg, 1);
  if (cfg_.suite == Suite::apvas) {
    const auto claim = bimodal::seq_agg_sign(*params_, cfg_.keys.apvas, m, {}, bimodal::kNewChain);
    wire::SignatureBlockApvas block;
    block.sigma = claim.sigma.to_bytes();
    block.skis.push_back(cfg_.keys.apvas_ski);
    msg.sig_block = std::move(block);
  } else {
    const auto sig = cfg_.keys.baseline.sign(m);
    wire::SignatureBlockConventional block;
    block.segments.push_back({cfg_.keys.baseline_ski, Bytes(sig.begin(), sig.end())});
    msg.sig_block = std::move(block);
  }
  return msg;
}

std::vector<Forward> Router::originate_all(const Nlri& nlri) {
  std::vector<Forward> out;
  for (std::uint32_t n : cfg_.neighbors) out.push_back({n, originate(nlri, n)});
  return out;
}

Router::Verified Router::verify_message(const UpdateMessage& msg) const {
  Verified v;
  const std::size_t n = msg.secure_path.size();
  if (cfg_.suite == Suite::plain) {
    v.ok = true;
    return v;
  }
  const std::vector<Bytes> octets = wire::signed_octets_along_path(msg, cfg_.as_number);

  if (cfg_.suite == Suite::apvas) {
    const auto& block = std::get<wire::SignatureBlockApvas>(msg.sig_block);
    if (block.skis.size() != n) {
      v.reason = "signature block does not match secure_path length";
      return v;
    }
    bimodal::Chain chain;
    for (std::size_t k = 1; k <= n; ++k) {
      auto it = directory_->apvas_keys().find(block.skis[n - k]);
      if (it == directory_->apvas_keys().end()) {
        v.reason = "unknown SKI " + to_hex(block.skis[n - k]);
        return v;
      }
      chain.push_back({it->second.first, octets[k - 1]});
    }
    try {
      v.claim.sigma = bimodal::G1Point::from_bytes(block.sigma);
    } catch (const DecodeError&) {
      v.reason = "sigma is not a valid group element";
      return v;
    }
    v.claim.chains.push_back(std::move(chain));
    auto heads = bimodal::verify_chains(*params_, v.claim, &cache_);
    if (!heads) {
      v.reason = "aggregate signature does not verify";
      return v;
    }
    v.head = heads->front();
    v.ok = true;
    return v;
  }

  const auto& block = std::get<wire::SignatureBlockConventional>(msg.sig_block);
  if (block.segments.size() != n) {
    v.reason = "signature block does not match secure_path length";
    return v;
  }
  for (std::size_t k = 1; k <= n; ++k) {
    const auto& seg = block.segments[n - k];
    const baseline::VerifyingKey* key = directory_->baseline_key(seg.ski);
    if (!key) {
      v.reason = "unknown SKI " + to_hex(seg.ski);
      return v;
    }
    baseline::Signature sig{};
    if (seg.sig.size() != sig.size()) {
      v.reason = "signature at position " + std::to_string(k) + " is not 96 bytes";
      return v;
    }
    std::copy(seg.sig.begin(), seg.sig.end(), sig.begin());
    if (!key->verify(octets[k - 1], sig)) {
      v.reason = "signature at position " + std::to_string(k) + " does not verify";
      return v;
    }
  }
  v.ok = true;
  return v;
}

UpdateMessage Router::extend(const UpdateMessage& msg, const Verified& v, std::uint32_t target_as) {
  UpdateMessage out;
  out.nlri = msg.nlri;
  out.secure_path.reserve(msg.secure_path.size() + 1);
  out.secure_path.push_back({1, 0, cfg_.as_number});
  out.secure_path.insert(out.secure_path.end(), msg.secure_path.begin(), msg.secure_path.end());
  out.sig_block = msg.sig_block;
  if (cfg_.suite == Suite::plain) return out;

  const Bytes m = wire::build_signed_octets(target_as, out, out.secure_path.size());
  if (cfg_.suite == Suite::apvas) {
    const auto claim = bimodal::seq_agg_sign(*params_, cfg_.keys.apvas, m, v.claim, 0, &*v.head, &cache_);
    auto& block = std::get<wire::SignatureBlockApvas>(out.sig_block);
    block.sigma = claim.sigma.to_bytes();
    block.skis.insert(block.skis.begin(), cfg_.keys.apvas_ski);
  } else {
    const auto sig = cfg_.keys.baseline.sign(m);
    auto& block = std::get<wire::SignatureBlockConventional>(out.sig_block);
    block.segments.insert(block.segments.begin(), {cfg_.keys.baseline_ski, Bytes(sig.begin(), sig.end())});
  }
  return out;
}

ReceiveResult Router::receive(const UpdateMessage& msg, std::uint32_t from_as) {
  if (!std::binary_search(cfg_.neighbors.begin(), cfg_.neighbors.end(), from_as)) {
    throw RangeError("AS" + std::to_string(from_as) + " is not a neighbor of AS" + std::to_string(cfg_.as_number));
  }
  ReceiveResult result;
  if (msg.suite() != cfg_.suite) {
    result.reason = std::string("suite ") + wire::suite_name(msg.suite()) + " does not match " +
                    wire::suite_name(cfg_.suite);
    return result;
  }
  if (msg.secure_path.empty() || msg.secure_path.front().as_number != from_as) {
    result.reason = "secure_path does not start with the sending AS";
    return result;
  }
  if (contains_as(msg.secure_path, cfg_.as_number) || owned_.contains(msg.nlri)) {
    result.reason = "path loops through this AS";
    return result;
  }

  const Verified v = verify_message(msg);
  if (!v.ok) {
    result.reason = v.reason;
    result.signature_failed = true;
    return result;
  }

  auto existing = rib_.find(msg.nlri);
  if (existing != rib_.end()) {
    const auto& old = existing->second;
    const bool shorter = msg.secure_path.size() < old.secure_path.size();
    const bool tie_won = msg.secure_path.size() == old.secure_path.size() && from_as < old.from_as;
    if (!shorter && !tie_won) {
      result.reason = "existing route is preferred";
      return result;
    }
  }
  result.accepted = true;

  for (std::uint32_t n : cfg_.neighbors) {
    if (n == from_as) continue;
    result.forwarded.push_back({n, extend(msg, v, n)});
  }

  if (cfg_.suite == Suite::apvas) {
    try {
      stored_claim_ = stored_claim_ ? bimodal::agg_sign(*stored_claim_, v.claim) : v.claim;
    } catch (const DuplicateEntryError&) {
      conflicts_.push_back(msg.nlri.to_string() + " via " + path_text(msg.secure_path) +
                           ": repeated (pk, m) in stored aggregate, route not stored");
      return result;
    }
  }

  RibEntry entry;
  entry.nlri = msg.nlri;
  entry.secure_path = msg.secure_path;
  entry.ski_list = skis_of(msg.sig_block);
  entry.origin_as = msg.secure_path.back().as_number;
  entry.from_as = from_as;
  entry.verified = cfg_.suite != Suite::plain;
  rib_.insert_or_assign(msg.nlri, std::move(entry));
  result.stored = true;
  return result;
}

RibSnapshot Router::snapshot_memory() const {
  RibSnapshot s;
  s.as_number = cfg_.as_number;
  s.suite = cfg_.suite;
  s.entries.reserve(rib_.size());
  for (const auto& [nlri, e] : rib_) s.entries.push_back(e);
  s.stored_claim = stored_claim_;

  if (stored_claim_) {
    // Replaced routes leave their chain in the aggregate, so count chains rather than entries.
    s.stored_signatures_bytes = wire::kSigmaBytes;
    for (const auto& chain : stored_claim_->chains) s.stored_signatures_bytes += wire::kSkiBytes * chain.size();
  } else if (cfg_.suite == Suite::conventional) {
    s.stored_signatures_bytes = (wire::kSkiBytes + 2 + wire::kBaselineSigBytes) * s.path_len_sum();
  }
  s.routing_table_bytes = s.entries.size() * cfg_.costs.routing_entry_cost;
  s.route_attr_bytes = s.stored_signatures_bytes + wire::kSegmentBytes * s.path_len_sum() +
                       s.entries.size() * cfg_.costs.attr_fixed_cost;
  return s;
}

}  // namespace apvas::router
