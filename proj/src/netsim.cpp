/*
 * SPDX-License-Identifier: Apache-2.0
 */

#include "apvas/netsim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include <openssl/sha.h>

namespace apvas::netsim {

namespace {

using nlohmann::json;

constexpr std::size_t kPoolSize = 512;  // /24s in 198.18.0.0/15
constexpr double kExtrapolationLength = 20.0;

// NIST RIB size estimates with ECDSA-256: year, BGP paths, GB, BGPsec paths, GB.
struct NistRow {
  int year;
  std::uint64_t bgp_paths;
  double bgp_gb;
  std::uint64_t bgpsec_paths;
  double bgpsec_gb;
};
constexpr NistRow kNistRows[] = {
    {2020, 6332177, 0.13, 6332177, 2.79},   {2021, 4433446, 0.09, 10130562, 4.47},
    {2022, 2547235, 0.05, 14201374, 6.62},  {2023, 1149812, 0.02, 18111088, 7.99},
    {2024, 355617, 0.01, 21794419, 9.61},   {2025, 0, 0.0, 25472541, 11.23},
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string sha256_hex(std::string_view s) {
  std::array<std::uint8_t, SHA256_DIGEST_LENGTH> d{};
  SHA256(reinterpret_cast<const unsigned char*>(s.data()), s.size(), d.data());
  return to_hex(d);
}

// Uniform in [0, n) by rejection.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t n) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
  for (;;) {
    const std::uint64_t v = rng();
    if (v < limit) return v % n;
  }
}

template <class T>
T get_field(const json& j, const char* key, const std::string& where) {
  try {
    if constexpr (std::is_unsigned_v<T>) {
      if (!j.at(key).is_number_unsigned()) throw ConfigError(where + "." + key + ": expected a non-negative integer");
    }
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(where + "." + key + ": " + e.what());
  }
}

std::uint32_t as_value(const json& j, const std::string& where) {
  if (!j.is_number_unsigned() || j.get<std::uint64_t>() > 0xffffffffULL) {
    throw ConfigError(where + ": expected an AS number (unsigned 32-bit integer)");
  }
  return j.get<std::uint32_t>();
}

std::string suite_key(Suite s) { return wire::suite_name(s); }

// (delta route_attr_bytes, delta path_len_sum) between consecutive measured
// routers ordered by path_len_sum, when every pair has the same ratio.
std::optional<std::pair<long long, long long>> exact_slope(const ExperimentResult& r) {
  std::vector<const RibSnapshot*> snaps;
  for (auto as : r.measured) snaps.push_back(&r.per_router.at(as));
  std::sort(snaps.begin(), snaps.end(),
            [](const RibSnapshot* a, const RibSnapshot* b) { return a->path_len_sum() < b->path_len_sum(); });
  std::optional<std::pair<long long, long long>> first;
  for (std::size_t i = 1; i < snaps.size(); ++i) {
    const long long dy =
        static_cast<long long>(snaps[i]->route_attr_bytes) - static_cast<long long>(snaps[i - 1]->route_attr_bytes);
    const long long dx =
        static_cast<long long>(snaps[i]->path_len_sum()) - static_cast<long long>(snaps[i - 1]->path_len_sum());
    if (dx == 0 || snaps[i]->entries.size() != snaps[0]->entries.size()) return std::nullopt;
    if (!first) {
      first = {dy, dx};
    } else if (dy * first->second != first->first * dx) {
      return std::nullopt;
    }
  }
  return first;
}

// Common path count of the measured routers, if they agree.
std::optional<std::size_t> common_path_count(const ExperimentResult& r) {
  std::optional<std::size_t> n;
  for (auto as : r.measured) {
    const std::size_t c = r.per_router.at(as).entries.size();
    if (n && *n != c) return std::nullopt;
    n = c;
  }
  return n;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << content;
  if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace

TopologyConfig TopologyConfig::line(std::size_t count, std::size_t path_count, std::uint64_t seed) {
  TopologyConfig cfg;
  for (std::size_t i = 0; i < count; ++i) cfg.routers.push_back(static_cast<std::uint32_t>(65001 + i));
  for (std::size_t i = 0; i + 1 < count; ++i) cfg.links.emplace_back(cfg.routers[i], cfg.routers[i + 1]);
  if (count > 0) cfg.advertisements.push_back({cfg.routers[0], path_count, seed});
  cfg.key_seed = seed;
  return cfg;
}

TopologyConfig TopologyConfig::parse(std::string_view json_text) {
  json j;
  try {
    j = json::parse(json_text.begin(), json_text.end(), nullptr, true, true);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  static const std::set<std::string> known = {"routers", "links", "advertisements", "key_seed",
                                              "routing_entry_cost", "attr_fixed_cost"};
  for (const auto& [key, value] : j.items()) {
    if (!known.contains(key)) throw ConfigError("unknown config key '" + key + "'");
  }

  TopologyConfig cfg;
  if (!j.contains("routers") || !j["routers"].is_array()) throw ConfigError("config.routers must be an array");
  for (std::size_t i = 0; i < j["routers"].size(); ++i) {
    cfg.routers.push_back(as_value(j["routers"][i], "routers[" + std::to_string(i) + "]"));
  }
  if (!j.contains("links") || !j["links"].is_array()) throw ConfigError("config.links must be an array");
  for (std::size_t i = 0; i < j["links"].size(); ++i) {
    const auto& l = j["links"][i];
    const std::string where = "links[" + std::to_string(i) + "]";
    if (!l.is_array() || l.size() != 2) throw ConfigError(where + ": expected a pair of AS numbers");
    cfg.links.emplace_back(as_value(l[0], where), as_value(l[1], where));
  }
  if (j.contains("advertisements")) {
    if (!j["advertisements"].is_array()) throw ConfigError("config.advertisements must be an array");
    cfg.advertisements.clear();
    for (std::size_t i = 0; i < j["advertisements"].size(); ++i) {
      const auto& a = j["advertisements"][i];
      const std::string where = "advertisements[" + std::to_string(i) + "]";
      if (!a.is_object()) throw ConfigError(where + ": expected an object");
      Advertisement ad;
      ad.origin_as = as_value(a.value("origin_as", json()), where + ".origin_as");
      ad.path_count = get_field<std::size_t>(a, "path_count", where);
      ad.nlri_seed = a.contains("nlri_seed") ? get_field<std::uint64_t>(a, "nlri_seed", where) : i + 1;
      cfg.advertisements.push_back(ad);
    }
  }
  if (j.contains("key_seed")) cfg.key_seed = get_field<std::uint64_t>(j, "key_seed", "config");
  if (j.contains("routing_entry_cost")) cfg.routing_entry_cost = get_field<std::size_t>(j, "routing_entry_cost", "config");
  if (j.contains("attr_fixed_cost")) {
    const auto& c = j["attr_fixed_cost"];
    if (!c.is_object()) throw ConfigError("config.attr_fixed_cost must be an object keyed by suite");
    for (const auto& [key, value] : c.items()) {
      cfg.attr_fixed_cost[wire::parse_suite(key)] = get_field<std::size_t>(c, key.c_str(), "config.attr_fixed_cost");
    }
  }
  cfg.validate();
  return cfg;
}

TopologyConfig TopologyConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read config " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse(ss.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

void TopologyConfig::validate() const {
  std::set<std::uint32_t> ases;
  for (auto as : routers) {
    if (!ases.insert(as).second) throw ConfigError("router AS" + std::to_string(as) + " listed twice");
  }
  std::set<std::pair<std::uint32_t, std::uint32_t>> seen_links;
  for (auto [a, b] : links) {
    if (!ases.contains(a) || !ases.contains(b)) {
      throw ConfigError("link " + std::to_string(a) + "-" + std::to_string(b) + " names an unknown router");
    }
    if (a == b) throw ConfigError("link " + std::to_string(a) + "-" + std::to_string(b) + " is a self link");
    if (!seen_links.insert(std::minmax(a, b)).second) {
      throw ConfigError("link " + std::to_string(a) + "-" + std::to_string(b) + " listed twice");
    }
  }
  if (!routers.empty()) {
    const auto adj = adjacency();
    std::set<std::uint32_t> reached{routers.front()};
    std::deque<std::uint32_t> todo{routers.front()};
    while (!todo.empty()) {
      const auto as = todo.front();
      todo.pop_front();
      for (auto n : adj.at(as)) {
        if (reached.insert(n).second) todo.push_back(n);
      }
    }
    if (reached.size() != ases.size()) throw ConfigError("topology is disconnected");
  }
  std::size_t total = 0;
  for (const auto& ad : advertisements) {
    if (!ases.contains(ad.origin_as)) {
      throw ConfigError("advertisement origin AS" + std::to_string(ad.origin_as) + " is not a router");
    }
    if (ad.path_count > kMaxPathCount) {
      throw ConfigError("path_count " + std::to_string(ad.path_count) + " exceeds " + std::to_string(kMaxPathCount));
    }
    total += ad.path_count;
  }
  if (total > kPoolSize) throw ConfigError("advertisements need more than 512 distinct /24 prefixes");
  for (Suite s : {Suite::plain, Suite::conventional, Suite::apvas}) {
    if (!attr_fixed_cost.contains(s)) throw ConfigError(std::string("attr_fixed_cost missing ") + wire::suite_name(s));
  }
}

void TopologyConfig::override_seeds(std::uint64_t seed) {
  key_seed = seed;
  for (std::size_t i = 0; i < advertisements.size(); ++i) advertisements[i].nlri_seed = seed + i;
}

CostModel TopologyConfig::costs(Suite suite) const { return {routing_entry_cost, attr_fixed_cost.at(suite)}; }

std::map<std::uint32_t, std::vector<std::uint32_t>> TopologyConfig::adjacency() const {
  std::map<std::uint32_t, std::vector<std::uint32_t>> adj;
  for (auto as : routers) adj[as];
  for (auto [a, b] : links) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  for (auto& [as, n] : adj) std::sort(n.begin(), n.end());
  return adj;
}

std::set<std::uint32_t> TopologyConfig::origins() const {
  std::set<std::uint32_t> out;
  for (const auto& ad : advertisements) out.insert(ad.origin_as);
  return out;
}

json TopologyConfig::to_json() const {
  json j;
  j["routers"] = routers;
  j["links"] = json::array();
  for (auto [a, b] : links) j["links"].push_back({a, b});
  j["advertisements"] = json::array();
  for (const auto& ad : advertisements) {
    j["advertisements"].push_back({{"origin_as", ad.origin_as}, {"path_count", ad.path_count}, {"nlri_seed", ad.nlri_seed}});
  }
  j["key_seed"] = key_seed;
  j["routing_entry_cost"] = routing_entry_cost;
  for (const auto& [s, c] : attr_fixed_cost) j["attr_fixed_cost"][suite_key(s)] = c;
  return j;
}

std::string TopologyConfig::digest() const { return sha256_hex(to_json().dump()); }

std::vector<std::vector<wire::Nlri>> allocate_prefixes(const TopologyConfig& cfg) {
  std::vector<wire::Nlri> pool;
  pool.reserve(kPoolSize);
  for (std::size_t i = 0; i < kPoolSize; ++i) {
    pool.push_back({24, {198, static_cast<std::uint8_t>(18 + i / 256), static_cast<std::uint8_t>(i % 256), 0}});
  }
  std::vector<std::vector<wire::Nlri>> out;
  for (const auto& ad : cfg.advertisements) {
    if (ad.path_count > pool.size()) throw ConfigError("prefix pool exhausted");
    std::mt19937_64 rng(ad.nlri_seed);
    // Partial Fisher-Yates: the first path_count slots become the sample.
    for (std::size_t i = 0; i < ad.path_count; ++i) {
      const std::size_t j = i + uniform_below(rng, pool.size() - i);
      std::swap(pool[i], pool[j]);
    }
    out.emplace_back(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(ad.path_count));
    pool.erase(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(ad.path_count));
    std::sort(pool.begin(), pool.end());
  }
  return out;
}

LinearFit least_squares_fit(std::span<const std::pair<double, double>> series) {
  if (series.size() < 2) throw RangeError("least squares fit needs at least two points");
  const double n = static_cast<double>(series.size());
  double mx = 0, my = 0;
  for (auto [x, y] : series) {
    mx += x;
    my += y;
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (auto [x, y] : series) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
  }
  if (sxx == 0) throw RangeError("least squares fit needs two distinct x values");
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  for (auto [x, y] : series) {
    const double r = y - fit.predict(x);
    fit.residuals.push_back(r);
    fit.max_abs_residual = std::max(fit.max_abs_residual, std::abs(r));
  }
  return fit;
}

AttrModel attr_model(Suite suite, const CostModel& costs) {
  AttrModel m;
  m.per_entry = static_cast<double>(costs.attr_fixed_cost);
  m.per_hop = static_cast<double>(wire::kSegmentBytes);
  if (suite == Suite::apvas) {
    m.fixed = static_cast<double>(wire::kSigmaBytes);
    m.per_hop += static_cast<double>(wire::kSkiBytes);
  } else if (suite == Suite::conventional) {
    m.per_hop += static_cast<double>(wire::kSkiBytes + 2 + wire::kBaselineSigBytes);
  }
  return m;
}

double sig_block_bytes(Suite suite, double len) {
  switch (suite) {
    case Suite::plain:
      return 0;
    case Suite::conventional:
      return 1 + static_cast<double>(wire::kSkiBytes + 2 + wire::kBaselineSigBytes) * len;
    case Suite::apvas:
      return 3 + static_cast<double>(wire::kSigmaBytes) + static_cast<double>(wire::kSkiBytes) * len;
  }
  return 0;
}

double sig_block_reduction(double len) {
  return 1.0 - sig_block_bytes(Suite::apvas, len) / sig_block_bytes(Suite::conventional, len);
}

std::string ExperimentResult::csv_header() {
  return "suite,as_number,path_count,avg_len,routing_table_bytes,route_attr_bytes,sig_block_bytes\n";
}

std::string ExperimentResult::csv_rows() const {
  std::string out;
  for (auto as : measured) {
    const auto& s = per_router.at(as);
    out += std::string(wire::suite_name(suite)) + "," + std::to_string(as) + "," + std::to_string(s.entries.size()) +
           "," + fmt("%.6f", s.avg_len()) + "," + std::to_string(s.routing_table_bytes) + "," +
           std::to_string(s.route_attr_bytes) + "," + std::to_string(s.stored_signatures_bytes) + "\n";
  }
  return out;
}

json ExperimentResult::to_json() const {
  json j;
  j["suite"] = wire::suite_name(suite);
  j["config_digest"] = config_digest;
  j["routers"] = json::array();
  for (auto as : measured) {
    const auto& s = per_router.at(as);
    j["routers"].push_back({{"as_number", as},
                            {"path_count", s.entries.size()},
                            {"avg_len", s.avg_len()},
                            {"routing_table_bytes", s.routing_table_bytes},
                            {"route_attr_bytes", s.route_attr_bytes},
                            {"sig_block_bytes", s.stored_signatures_bytes}});
  }
  if (fit) {
    j["fit"] = {{"slope", fit->slope},
                {"intercept", fit->intercept},
                {"residuals", fit->residuals},
                {"max_abs_residual", fit->max_abs_residual}};
  }
  if (predicted_at_20) j["predicted_route_attr_bytes_at_20"] = *predicted_at_20;
  j["stats"] = {{"originated", stats.originated},
                {"delivered", stats.delivered},
                {"accepted", stats.accepted},
                {"stored", stats.stored},
                {"rejected_signature", stats.rejected_signature},
                {"rejected_policy", stats.rejected_policy},
                {"conflicts", stats.conflicts}};
  return j;
}

ExperimentResult run_experiment(const TopologyConfig& cfg, Suite suite) {
  cfg.validate();
  auto params = std::make_shared<const bimodal::PublicParams>(bn254::setup("bn254"));
  const auto adj = cfg.adjacency();

  auto directory = std::make_shared<router::KeyDirectory>();
  std::map<std::uint32_t, router::RouterKeys> keys;
  for (auto as : cfg.routers) {
    keys[as] = router::derive_keys(*params, cfg.key_seed, as);
    directory->add(keys[as]);
  }
  std::map<std::uint32_t, router::Router> routers;
  for (auto as : cfg.routers) {
    router::RouterConfig rc{as, suite, adj.at(as), keys.at(as), cfg.costs(suite)};
    routers.try_emplace(as, rc, params, directory);
  }

  ExperimentResult result;
  result.suite = suite;
  result.config = cfg;
  result.config_digest = cfg.digest();

  struct Delivery {
    std::uint32_t from;
    router::Forward f;
  };
  std::deque<Delivery> queue;
  const auto prefixes = allocate_prefixes(cfg);
  for (std::size_t i = 0; i < cfg.advertisements.size(); ++i) {
    auto& origin = routers.at(cfg.advertisements[i].origin_as);
    for (const auto& nlri : prefixes[i]) {
      for (auto& f : origin.originate_all(nlri)) {
        ++result.stats.originated;
        queue.push_back({origin.config().as_number, std::move(f)});
      }
    }
  }
  while (!queue.empty()) {
    Delivery d = std::move(queue.front());
    queue.pop_front();
    ++result.stats.delivered;
    auto r = routers.at(d.f.to_as).receive(d.f.msg, d.from);
    if (r.accepted) ++result.stats.accepted;
    if (r.stored) ++result.stats.stored;
    if (!r.accepted) ++(r.signature_failed ? result.stats.rejected_signature : result.stats.rejected_policy);
    for (auto& next : r.forwarded) queue.push_back({d.f.to_as, std::move(next)});
  }

  const auto origins = cfg.origins();
  for (auto& [as, r] : routers) {
    result.per_router.emplace(as, r.snapshot_memory());
    for (const auto& c : r.conflicts()) result.stats.conflicts.push_back("AS" + std::to_string(as) + ": " + c);
    if (!origins.contains(as)) {
      result.measured.push_back(as);
      const auto& s = result.per_router.at(as);
      result.series.emplace_back(s.avg_len(), static_cast<double>(s.route_attr_bytes));
    }
  }
  try {
    result.fit = least_squares_fit(result.series);
    result.predicted_at_20 = result.fit->predict(kExtrapolationLength);
  } catch (const RangeError&) {
  }
  return result;
}

json full_route_projection(const TopologyConfig& cfg, double avg_len) {
  json rows = json::array();
  const AttrModel plain = attr_model(Suite::plain, cfg.costs(Suite::plain));
  const AttrModel conv = attr_model(Suite::conventional, cfg.costs(Suite::conventional));
  const AttrModel apvas = attr_model(Suite::apvas, cfg.costs(Suite::apvas));
  const double entry = static_cast<double>(cfg.routing_entry_cost);
  for (const auto& row : kNistRows) {
    const double bgp = static_cast<double>(row.bgp_paths);
    const double sec = static_cast<double>(row.bgpsec_paths);
    const double plain_bytes = bgp * entry + plain.at(bgp, avg_len);
    const double conv_bytes = plain_bytes + sec * entry + conv.at(sec, avg_len);
    const double apvas_bytes = plain_bytes + sec * entry + apvas.at(sec, avg_len);
    rows.push_back({{"year", row.year},
                    {"bgp_paths", row.bgp_paths},
                    {"bgpsec_paths", row.bgpsec_paths},
                    {"nist_bgp_gb", row.bgp_gb},
                    {"nist_bgpsec_gb", row.bgpsec_gb},
                    {"model_conventional_gb", conv_bytes / 1e9},
                    {"model_apvas_gb", apvas_bytes / 1e9},
                    {"model_reduction", 1.0 - apvas_bytes / conv_bytes}});
  }
  return {{"avg_len", avg_len}, {"rows", rows}};
}

ReportDocument compare_report(std::span<const ExperimentResult> results) {
  if (results.empty()) throw ConfigError("compare_report needs at least one result");
  std::set<Suite> suites;
  for (const auto& r : results) {
    if (!suites.insert(r.suite).second) throw ConfigError(std::string("suite ") + wire::suite_name(r.suite) + " repeated");
    if (r.config_digest != results[0].config_digest) throw ConfigError("results come from different configs");
  }
  const TopologyConfig& cfg = results[0].config;
  const ExperimentResult* apvas = nullptr;
  const ExperimentResult* conv = nullptr;
  for (const auto& r : results) {
    if (r.suite == Suite::apvas) apvas = &r;
    if (r.suite == Suite::conventional) conv = &r;
  }

  ReportDocument doc;
  json& j = doc.data;
  std::ostringstream t;
  j["config_digest"] = results[0].config_digest;
  j["config"] = cfg.to_json();
  t << "config " << results[0].config_digest << "\n";

  std::map<Suite, std::optional<std::pair<long long, long long>>> slopes;
  for (const auto& r : results) {
    const std::string name = wire::suite_name(r.suite);
    json s = r.to_json();
    const auto slope = exact_slope(r);
    slopes[r.suite] = slope;
    s["affine"] = slope.has_value();
    if (slope) {
      s["slope_bytes_per_path_hop"] = static_cast<double>(slope->first) / static_cast<double>(slope->second);
    }
    const auto paths = common_path_count(r);
    if (paths) {
      const AttrModel m = attr_model(r.suite, cfg.costs(r.suite));
      s["model"] = {{"fixed", m.fixed}, {"per_hop", m.per_hop}, {"per_entry", m.per_entry}};
      s["closed_form_route_attr_bytes_at_20"] = m.at(static_cast<double>(*paths), kExtrapolationLength);
    }
    j["suites"][name] = s;

    t << "\n" << name << " (bytes per router)\n";
    t << "AS              ";
    for (auto as : r.measured) t << fmt("%10.0f", static_cast<double>(as));
    t << "\npaths           ";
    for (auto as : r.measured) t << fmt("%10.0f", static_cast<double>(r.per_router.at(as).entries.size()));
    t << "\navg path len    ";
    for (auto as : r.measured) t << fmt("%10.2f", r.per_router.at(as).avg_len());
    t << "\nrouting table   ";
    for (auto as : r.measured) t << fmt("%10.0f", static_cast<double>(r.per_router.at(as).routing_table_bytes));
    t << "\nroute attribute ";
    for (auto as : r.measured) t << fmt("%10.0f", static_cast<double>(r.per_router.at(as).route_attr_bytes));
    t << "\nsignatures      ";
    for (auto as : r.measured) t << fmt("%10.0f", static_cast<double>(r.per_router.at(as).stored_signatures_bytes));
    t << "\n";
    if (r.fit) {
      t << "fit route_attr = " << fmt("%.6f", r.fit->slope) << " * L + " << fmt("%.6f", r.fit->intercept)
        << " (max residual " << fmt("%.3g", r.fit->max_abs_residual) << ")\n";
      t << "fit at L=20: " << fmt("%.1f", *r.predicted_at_20);
      if (s.contains("closed_form_route_attr_bytes_at_20")) {
        t << ", closed form " << fmt("%.1f", s["closed_form_route_attr_bytes_at_20"].get<double>());
      }
      t << "\n";
    }
    if (slope) t << "slope per path per hop: " << fmt("%.6g", static_cast<double>(slope->first) / slope->second) << "\n";
    t << "deliveries " << r.stats.delivered << ", accepted " << r.stats.accepted << ", signature failures "
      << r.stats.rejected_signature << ", conflicts " << r.stats.conflicts.size() << "\n";
  }

  json red;
  for (double len : {1.0, 3.9, 4.0, 20.0}) {
    red.push_back({{"len", len},
                   {"apvas_bytes", sig_block_bytes(Suite::apvas, len)},
                   {"conventional_bytes", sig_block_bytes(Suite::conventional, len)},
                   {"reduction", sig_block_reduction(len)}});
  }
  j["sig_block_reduction"] = red;
  t << "\nsignature block wire bytes (apvas 67 + 20 L, conventional 1 + 118 L)\n";
  for (const auto& row : red) {
    t << "  L=" << fmt("%-4g", row["len"].get<double>()) << " apvas " << fmt("%7.1f", row["apvas_bytes"].get<double>())
      << "  conventional " << fmt("%7.1f", row["conventional_bytes"].get<double>()) << "  reduction "
      << fmt("%.2f%%", 100 * row["reduction"].get<double>()) << "\n";
  }
  j["wire_crossover_len"] = 1;
  t << "apvas signature block is smaller from L=1\n";

  if (apvas && conv) {
    json cmp;
    cmp["per_router"] = json::array();
    t << "\napvas vs conventional route attribute bytes\n";
    for (auto as : apvas->measured) {
      if (!conv->per_router.contains(as)) continue;
      const auto& a = apvas->per_router.at(as);
      const auto& c = conv->per_router.at(as);
      const char* smaller = a.route_attr_bytes < c.route_attr_bytes   ? "apvas"
                            : a.route_attr_bytes > c.route_attr_bytes ? "conventional"
                                                                      : "equal";
      cmp["per_router"].push_back({{"as_number", as},
                                   {"avg_len", a.avg_len()},
                                   {"apvas", a.route_attr_bytes},
                                   {"conventional", c.route_attr_bytes},
                                   {"smaller", smaller}});
      t << "  AS" << as << " L=" << fmt("%.2f", a.avg_len()) << " apvas " << a.route_attr_bytes << " conventional "
        << c.route_attr_bytes << " smaller " << smaller << "\n";
    }
    const auto& sa = slopes[Suite::apvas];
    const auto& sc = slopes[Suite::conventional];
    if (sa && sc && sa->second == sc->second) {
      cmp["slope_ratio"] = std::to_string(sa->first / sa->second) + "/" + std::to_string(sc->first / sc->second);
      cmp["slope_ratio_value"] = static_cast<double>(sa->first) / static_cast<double>(sc->first);
      t << "slope ratio apvas/conventional " << cmp["slope_ratio"].get<std::string>() << "\n";
    }
    const auto pa = common_path_count(*apvas);
    if (pa && *pa > 0) {
      const AttrModel ma = attr_model(Suite::apvas, cfg.costs(Suite::apvas));
      const AttrModel mc = attr_model(Suite::conventional, cfg.costs(Suite::conventional));
      const double p = static_cast<double>(*pa);
      const double cross = (ma.fixed - mc.fixed + p * (ma.per_entry - mc.per_entry)) / (p * (mc.per_hop - ma.per_hop));
      cmp["model_crossover_len"] = cross;
      t << "route attribute totals cross at L=" << fmt("%.4f", cross) << "\n";
    }
    j["apvas_vs_conventional"] = cmp;
  }

  j["full_route_projection"] = full_route_projection(cfg, 3.9);
  t << "\nfull-route projection at L=3.9 (model, GB)\n";
  for (const auto& row : j["full_route_projection"]["rows"]) {
    t << "  " << row["year"].get<int>() << " NIST " << fmt("%6.2f", row["nist_bgpsec_gb"].get<double>())
      << "  conventional " << fmt("%6.2f", row["model_conventional_gb"].get<double>()) << "  apvas "
      << fmt("%6.2f", row["model_apvas_gb"].get<double>()) << "\n";
  }
  doc.text = t.str();
  return doc;
}

void write_outputs(const std::filesystem::path& dir, std::span<const ExperimentResult> results) {
  std::error_code ec;
  std::filesystem::create_directories(dir / "rib", ec);
  if (ec) throw IoError("cannot create " + (dir / "rib").string() + ": " + ec.message());
  std::string csv = ExperimentResult::csv_header();
  for (const auto& r : results) csv += r.csv_rows();
  write_file(dir / "results.csv", csv);
  const ReportDocument doc = compare_report(results);
  write_file(dir / "report.json", doc.data.dump(2) + "\n");
  write_file(dir / "report.txt", doc.text);
  for (const auto& r : results) {
    for (const auto& [as, snap] : r.per_router) {
      write_file(dir / "rib" / (std::string(wire::suite_name(r.suite)) + "_" + std::to_string(as) + ".txt"),
                 snap.to_text());
    }
  }
}

}  // namespace apvas::netsim
