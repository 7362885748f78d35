/*
 * SPDX-License-Identifier: Apache-2.0
 */

// Acceptance suite. One PASS/FAIL line per criterion; exit status 1 if any fail.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "apvas/baseline_sig.hpp"
#include "apvas/bgpsec_wire.hpp"
#include "apvas/bimodal_sig.hpp"
#include "apvas/errors.hpp"
#include "apvas/netsim.hpp"
#include "random_message.hpp"
#include "test_support.hpp"

namespace fs = std::filesystem;
using namespace apvas;
using bimodal::SignatureClaim;
using bn254::G1Point;
using bn254::GtElement;

namespace {

const bn254::PublicParams& params() {
  static const bn254::PublicParams p = bn254::setup("bn254");
  return p;
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::vector<bimodal::KeyPair> key_pool(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<bimodal::KeyPair> keys;
  for (std::size_t i = 0; i < n; ++i) keys.push_back(bimodal::user_key_gen(params(), rng));
  return keys;
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// Builds a claim of the given chain lengths. Chains grow in random order;
// partial claims are merged at random points, so sequential signing and
// aggregation interleave.
struct Builder {
  const std::vector<bimodal::KeyPair>& keys;
  std::mt19937_64& rng;
  std::size_t seq_calls = 0;
  std::size_t agg_calls = 0;

  struct Piece {
    SignatureClaim claim;
    std::vector<std::size_t> chain_ids;
  };

  SignatureClaim build(const std::vector<std::size_t>& lengths, const std::string& tag) {
    const std::size_t chains = lengths.size();
    std::vector<G1Point> chain_sigma(chains);
    std::vector<std::size_t> done(chains, 0);
    std::vector<bool> started(chains, false);
    std::vector<Piece> pieces;

    auto locate = [&](std::size_t id) {
      for (std::size_t p = 0; p < pieces.size(); ++p) {
        auto it = std::find(pieces[p].chain_ids.begin(), pieces[p].chain_ids.end(), id);
        if (it != pieces[p].chain_ids.end()) return std::pair{p, static_cast<std::size_t>(it - pieces[p].chain_ids.begin())};
      }
      throw std::logic_error("chain not placed");
    };
    auto message = [&](std::size_t id, std::size_t pos) {
      return to_bytes(tag + "/c" + std::to_string(id) + "/e" + std::to_string(pos));
    };
    auto sign_into = [&](Piece& piece, std::size_t index, std::size_t id) {
      const auto& kp = keys[rng() % keys.size()];
      const Bytes m = message(id, done[id]);
      const GtElement head = bn254::pairing(params(), chain_sigma[id], params().generator);
      SignatureClaim next = bimodal::seq_agg_sign(params(), kp, m, piece.claim, index, &head);
      chain_sigma[id] += next.sigma - piece.claim.sigma;
      piece.claim = std::move(next);
      ++done[id];
      ++seq_calls;
    };

    for (;;) {
      std::vector<std::size_t> unstarted, growing;
      for (std::size_t id = 0; id < chains; ++id) {
        if (!started[id]) unstarted.push_back(id);
        else if (done[id] < lengths[id]) growing.push_back(id);
      }
      const bool can_merge = pieces.size() >= 2;
      if (unstarted.empty() && growing.empty() && !can_merge) break;
      const std::size_t pick = rng() % 3;
      if (pick == 0 && !unstarted.empty()) {
        const std::size_t id = unstarted[rng() % unstarted.size()];
        started[id] = true;
        if (pieces.empty() || rng() % 2 == 0) {
          pieces.push_back(Piece{});
          pieces.back().chain_ids.push_back(id);
          sign_into(pieces.back(), bimodal::kNewChain, id);
        } else {
          Piece& piece = pieces[rng() % pieces.size()];
          piece.chain_ids.push_back(id);
          sign_into(piece, bimodal::kNewChain, id);
        }
      } else if (pick == 1 && !growing.empty()) {
        const std::size_t id = growing[rng() % growing.size()];
        auto [p, index] = locate(id);
        sign_into(pieces[p], index, id);
      } else if (pick == 2 && can_merge) {
        const std::size_t a = rng() % pieces.size();
        std::size_t b = rng() % (pieces.size() - 1);
        if (b >= a) ++b;
        Piece merged;
        merged.claim = bimodal::agg_sign(pieces[a].claim, pieces[b].claim);
        merged.chain_ids = pieces[a].chain_ids;
        merged.chain_ids.insert(merged.chain_ids.end(), pieces[b].chain_ids.begin(), pieces[b].chain_ids.end());
        pieces.erase(pieces.begin() + static_cast<std::ptrdiff_t>(std::max(a, b)));
        pieces.erase(pieces.begin() + static_cast<std::ptrdiff_t>(std::min(a, b)));
        pieces.push_back(std::move(merged));
        ++agg_calls;
      }
    }
    return pieces.front().claim;
  }
};

std::vector<std::size_t> trial_shape(std::size_t trial, std::mt19937_64& rng) {
  std::size_t chains, min_len, max_len;
  if (trial % 100 == 0) {
    chains = 50, min_len = 1, max_len = 3;
  } else if (trial % 100 == 50) {
    chains = 3, min_len = 20, max_len = 20;
  } else {
    chains = 1 + rng() % 12, min_len = 1, max_len = 5;
  }
  std::vector<std::size_t> lengths(chains);
  for (auto& l : lengths) l = min_len + rng() % (max_len - min_len + 1);
  return lengths;
}

Outcome c1_build_verify() {
  const auto keys = key_pool(64, 101);
  std::mt19937_64 rng(1001);
  Builder builder{keys, rng};
  bimodal::KeyCache cache;
  for (const auto& k : keys) cache.insert(k);
  const auto start = std::chrono::steady_clock::now();
  std::size_t ok = 0, entries = 0, longest = 0, widest = 0;
  for (std::size_t trial = 0; trial < 1000; ++trial) {
    const auto lengths = trial_shape(trial, rng);
    const SignatureClaim claim = builder.build(lengths, "t" + std::to_string(trial));
    const SignatureClaim wire = SignatureClaim::deserialize(claim.serialize());
    if (wire == claim && bimodal::verify(params(), wire, &cache)) ++ok;
    entries += claim.entry_count();
    longest = std::max(longest, *std::max_element(lengths.begin(), lengths.end()));
    widest = std::max(widest, lengths.size());
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  Outcome o;
  o.pass = ok == 1000 && secs <= 300.0 && longest <= 20 && widest <= 50;
  o.detail = std::to_string(ok) + "/1000 verified, " + std::to_string(entries) + " entries, " +
             std::to_string(builder.seq_calls) + " sequential signs, " + std::to_string(builder.agg_calls) +
             " aggregations, max chain " + std::to_string(longest) + ", max chains " + std::to_string(widest) + ", " +
             fmt("%.1f", secs) + " s";
  return o;
}

Outcome c2_tamper() {
  const auto keys = key_pool(32, 202);
  const auto outsiders = key_pool(8, 203);
  std::mt19937_64 rng(2002);
  Builder builder{keys, rng};
  bimodal::KeyCache cache;
  for (const auto& k : keys) cache.insert(k);
  for (const auto& k : outsiders) cache.insert(k);

  // rejected[kind] = {by verify false, by decode error}
  std::array<std::array<std::size_t, 2>, 4> rejected{};
  std::size_t baseline_ok = 0;
  auto check = [&](const Bytes& bytes, std::size_t kind) {
    try {
      if (!bimodal::verify(params(), SignatureClaim::deserialize(bytes), &cache)) ++rejected[kind][0];
    } catch (const DecodeError&) {
      ++rejected[kind][1];
    }
  };
  for (std::size_t i = 0; i < 500; ++i) {
    std::vector<std::size_t> lengths(1 + rng() % 3);
    for (auto& l : lengths) l = 1 + rng() % 3;
    lengths[rng() % lengths.size()] = 2 + rng() % 2;  // at least one chain to reorder
    const SignatureClaim claim = builder.build(lengths, "m" + std::to_string(i));
    if (bimodal::verify(params(), claim, &cache)) ++baseline_ok;

    Bytes flipped = claim.serialize();
    const std::size_t bit = rng() % (wire::kSigmaBytes * 8);
    flipped[bit / 8] ^= static_cast<std::uint8_t>(1u << (bit % 8));
    check(flipped, 0);

    auto pick_entry = [&](SignatureClaim& c) -> bimodal::ChainEntry& {
      auto& chain = c.chains[rng() % c.chains.size()];
      return chain[rng() % chain.size()];
    };
    SignatureClaim altered = claim;
    auto& entry = pick_entry(altered);
    entry.m[rng() % entry.m.size()] ^= static_cast<std::uint8_t>(1 + rng() % 255);
    check(altered.serialize(), 1);

    SignatureClaim swapped = claim;
    std::vector<std::size_t> reorderable;
    for (std::size_t c = 0; c < swapped.chains.size(); ++c) {
      if (swapped.chains[c].size() >= 2) reorderable.push_back(c);
    }
    auto& chain = swapped.chains[reorderable[rng() % reorderable.size()]];
    const std::size_t at = rng() % (chain.size() - 1);
    std::swap(chain[at], chain[at + 1]);
    check(swapped.serialize(), 2);

    SignatureClaim substituted = claim;
    pick_entry(substituted).pk = outsiders[rng() % outsiders.size()].pk_bytes;
    check(substituted.serialize(), 3);
  }
  const char* names[] = {"sigma bit flip", "altered m", "adjacent swap", "substituted pk"};
  Outcome o;
  o.pass = baseline_ok == 500;
  std::ostringstream d;
  d << "unmodified " << baseline_ok << "/500 valid";
  for (std::size_t k = 0; k < 4; ++k) {
    const std::size_t total = rejected[k][0] + rejected[k][1];
    o.pass = o.pass && total == 500;
    d << "; " << names[k] << " " << total << "/500 rejected (" << rejected[k][0] << " verify false, " << rejected[k][1]
      << " decode error)";
  }
  o.detail = d.str();
  return o;
}

Outcome c3_sizes() {
  const auto keys = key_pool(1, 303);
  const SignatureClaim claim = bimodal::seq_agg_sign(params(), keys[0], to_bytes("size"), SignatureClaim{},
                                                     bimodal::kNewChain);
  const std::size_t sigma_bytes = claim.sigma.to_bytes().size();
  std::mt19937_64 rng(3003);
  const auto baseline_key = baseline::SigningKey::generate(rng);
  const std::size_t baseline_bytes = baseline_key.sign(to_bytes("size")).size();

  wire::UpdateMessage msg = test::random_message(rng, wire::Suite::apvas, 4);
  const Bytes encoded = wire::encode_update(msg);
  const auto& block = std::get<wire::SignatureBlockApvas>(msg.sig_block);
  const bool sigma_on_wire = std::search(encoded.begin(), encoded.end(), block.sigma.begin(), block.sigma.end()) !=
                             encoded.end();
  Outcome o;
  o.pass = sigma_bytes == 64 && baseline_bytes == 96 && sigma_on_wire && wire::kSigmaBytes == 64;
  o.detail = "sigma " + std::to_string(sigma_bytes) + " bytes, baseline signature " + std::to_string(baseline_bytes) +
             " bytes";
  return o;
}

struct Experiments {
  netsim::TopologyConfig cfg = netsim::TopologyConfig::line(6, 200);
  netsim::ExperimentResult conventional = netsim::run_experiment(cfg, wire::Suite::conventional);
  netsim::ExperimentResult apvas = netsim::run_experiment(cfg, wire::Suite::apvas);
};

// Exact integer slope over the measured routers when every point lies on one
// line; -1 otherwise.
long long exact_slope(const netsim::ExperimentResult& r) {
  std::vector<std::pair<long long, long long>> pts;  // (path_len_sum, route_attr_bytes)
  std::size_t paths = 0;
  for (auto as : r.measured) {
    const auto& s = r.per_router.at(as);
    pts.emplace_back(static_cast<long long>(s.path_len_sum()), static_cast<long long>(s.route_attr_bytes));
    paths = s.entries.size();
  }
  if (pts.size() < 2 || paths == 0) return -1;
  const long long dx = pts[1].first - pts[0].first, dy = pts[1].second - pts[0].second;
  if (dx == 0 || (dy * static_cast<long long>(paths)) % dx != 0) return -1;
  for (const auto& p : pts) {
    if ((p.second - pts[0].second) * dx != (p.first - pts[0].first) * dy) return -1;
  }
  return dy * static_cast<long long>(paths) / dx;  // bytes per unit of average length
}

Outcome c4_linear(const Experiments& e) {
  const long long sa = exact_slope(e.apvas);
  const long long sc = exact_slope(e.conventional);
  bool flip = true;
  std::ostringstream rows;
  for (auto as : e.apvas.measured) {
    const auto& a = e.apvas.per_router.at(as);
    const auto& c = e.conventional.per_router.at(as);
    const double len = a.avg_len();
    if (len <= 1.0 && !(a.route_attr_bytes > c.route_attr_bytes)) flip = false;
    if (len >= 3.0 && !(a.route_attr_bytes < c.route_attr_bytes)) flip = false;
    rows << " L=" << fmt("%.0f", len) << ":" << a.route_attr_bytes << "/" << c.route_attr_bytes;
  }
  const bool has_l1 = std::any_of(e.apvas.measured.begin(), e.apvas.measured.end(),
                                  [&](auto as) { return e.apvas.per_router.at(as).avg_len() == 1.0; });
  const bool ratio = sa > 0 && sc > 0 && sa * 124 == sc * 26;
  Outcome o;
  o.pass = sa > 0 && sc > 0 && ratio && flip && has_l1;
  o.detail = "slopes apvas " + std::to_string(sa) + " conventional " + std::to_string(sc) + ", ratio " +
             (ratio ? "26/124" : "not 26/124") + ", apvas/conventional bytes" + rows.str();
  return o;
}

Outcome c5_reduction() {
  const double r20 = netsim::sig_block_reduction(20);
  const double r39 = netsim::sig_block_reduction(3.9);
  // Cross-check the model against encoded messages at L = 20.
  std::mt19937_64 rng(5005);
  auto encoded_block = [&](wire::Suite suite) {
    for (;;) {
      auto m = test::random_message(rng, suite, 20);
      if (m.secure_path.size() != 20) continue;
      if (auto* c = std::get_if<wire::SignatureBlockConventional>(&m.sig_block)) {
        for (auto& s : c->segments) s.sig.resize(wire::kBaselineSigBytes);
      }
      wire::UpdateMessage bare = m;
      bare.sig_block = std::monostate{};
      return wire::encode_update(m).size() - wire::encode_update(bare).size() + wire::sig_block_size(wire::Suite::plain, 20);
    }
  };
  const std::size_t apvas = encoded_block(wire::Suite::apvas);
  const std::size_t conv = encoded_block(wire::Suite::conventional);
  const double measured = 1.0 - static_cast<double>(apvas) / static_cast<double>(conv);
  Outcome o;
  o.pass = r20 >= 0.80 && std::abs(measured - r20) < 1e-12;
  o.detail = "reduction at L=20 " + fmt("%.2f", 100 * r20) + "% (encoded " + std::to_string(apvas) + " vs " +
             std::to_string(conv) + " bytes), at L=3.9 " + fmt("%.2f", 100 * r39) + "%";
  return o;
}

Outcome c6_fit(const Experiments& e) {
  bool exact = true;
  double worst = 0;
  std::ostringstream d;
  for (const auto* r : {&e.apvas, &e.conventional}) {
    if (!r->fit || !r->predicted_at_20) return {false, "no fit"};
    const auto model = netsim::attr_model(r->suite, r->config.costs(r->suite));
    const double closed = model.at(200, 20);
    worst = std::max(worst, r->fit->max_abs_residual);
    exact = exact && r->fit->max_abs_residual <= 1e-9 && std::abs(*r->predicted_at_20 - closed) <= 1e-9;
    d << wire::suite_name(r->suite) << " y = " << fmt("%.6f", r->fit->slope) << " L + "
      << fmt("%.6f", r->fit->intercept) << ", L=20 " << fmt("%.3f", *r->predicted_at_20) << " closed form "
      << fmt("%.3f", closed) << "; ";
  }
  // Random exact integer lines.
  std::mt19937_64 rng(6006);
  for (int i = 0; i < 200; ++i) {
    const double a = static_cast<double>(rng() % 100000), b = static_cast<double>(rng() % 1000000);
    std::vector<std::pair<double, double>> s;
    for (int x = 1; x <= 2 + static_cast<int>(rng() % 19); ++x) s.emplace_back(x, a * x + b);
    const auto f = netsim::least_squares_fit(s);
    worst = std::max(worst, f.max_abs_residual);
    exact = exact && f.max_abs_residual <= 1e-9 && std::abs(f.predict(20) - (a * 20 + b)) <= 1e-9;
  }
  d << "max residual " << fmt("%.3g", worst);
  return {exact, d.str()};
}

Outcome c7_roundtrip() {
  std::mt19937_64 rng(7007);
  std::ostringstream d;
  bool pass = true;
  for (auto suite : {wire::Suite::plain, wire::Suite::conventional, wire::Suite::apvas}) {
    std::size_t ok = 0;
    for (int i = 0; i < 10000; ++i) {
      const auto m = test::random_message(rng, suite);
      const Bytes bytes = wire::encode_update(m);
      const auto back = wire::decode_update(bytes);
      if (back == m && wire::encode_update(back) == bytes) ++ok;
    }
    std::size_t goldens = 0, golden_ok = 0;
    for (const auto& g : test::load_json("golden_messages.json")) {
      if (g["suite"] != wire::suite_name(suite)) continue;
      ++goldens;
      const Bytes bytes = from_hex(g["hex"].get<std::string>());
      try {
        const auto m = wire::decode_update(bytes);
        if (wire::encode_update(m) == bytes && bytes.size() == g["total_bytes"].get<std::size_t>()) ++golden_ok;
      } catch (const Error&) {
      }
    }
    pass = pass && ok == 10000 && goldens >= 3 && golden_ok == goldens;
    d << (suite == wire::Suite::plain ? "" : "; ") << wire::suite_name(suite) << " " << ok << "/10000 random, "
      << golden_ok << "/" << goldens << " golden";
  }
  return {pass, d.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome c8_determinism() {
  const fs::path base = fs::temp_directory_path() / "apvas_acceptance_c8";
  fs::remove_all(base);
  fs::create_directories(base);
  const std::string config = std::string(APVAS_SOURCE_DIR) + "/configs/linear6_200.json";
  auto simulate = [&](const std::string& out) {
    const std::string cmd = "APVAS_SEED=42 " + std::string(APVAS_CLI) + " simulate --quiet --suite all --config " +
                            config + " --out " + (base / out).string() + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  };
  const int a = simulate("run1");
  const int b = simulate("run2");
  const std::string csv1 = slurp(base / "run1/results.csv");
  const std::string csv2 = slurp(base / "run2/results.csv");
  const bool reports = slurp(base / "run1/report.json") == slurp(base / "run2/report.json");
  fs::remove_all(base);
  Outcome o;
  o.pass = a == 0 && b == 0 && !csv1.empty() && csv1 == csv2 && reports;
  o.detail = "exit codes " + std::to_string(a) + "/" + std::to_string(b) + ", results.csv " +
             std::to_string(csv1.size()) + " bytes, " + (csv1 == csv2 ? "identical" : "different") + ", report.json " +
             (reports ? "identical" : "different");
  return o;
}

}  // namespace

int main() {
  int failures = 0;
  auto report = [&](const char* id, const char* name, const std::function<Outcome()>& fn) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::cout << (o.pass ? "PASS " : "FAIL ") << id << " " << name << ": " << o.detail << std::endl;
  };
  report("C1", "randomized build and verify", c1_build_verify);
  report("C2", "tamper rejection", c2_tamper);
  report("C3", "signature sizes", c3_sizes);
  std::optional<Experiments> experiments;
  auto with_experiments = [&](Outcome (*fn)(const Experiments&)) {
    return [&, fn] {
      if (!experiments) experiments.emplace();
      return fn(*experiments);
    };
  };
  report("C4", "route attribute bytes linear in path length", with_experiments(c4_linear));
  report("C5", "signature block reduction", c5_reduction);
  report("C6", "least-squares fit and extrapolation", with_experiments(c6_fit));
  report("C7", "codec round trips", c7_roundtrip);
  report("C8", "simulation determinism", c8_determinism);
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
  return failures == 0 ? 0 : 1;
}
