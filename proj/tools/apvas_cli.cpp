/*
 * SPDX-License-Identifier: Apache-2.0
 */

// apvas: key generation, signing, aggregation, verification, message
// inspection and experiments.
//
// Exit codes: 0 success, 1 verification false, 2 usage or config error,
// 3 I/O or decode error.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "apvas/baseline_sig.hpp"
#include "apvas/bgpsec_wire.hpp"
#include "apvas/bimodal_sig.hpp"
#include "apvas/netsim.hpp"

namespace {

using namespace apvas;
using nlohmann::json;

enum Exit { kOk = 0, kFalse = 1, kUsage = 2, kIo = 3 };

struct UsageError : Error {
  using Error::Error;
};

Bytes read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path);
  return Bytes(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void write_file(const std::string& path, ByteView data) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
  if (!out) throw IoError("failed writing " + path);
}

void write_text(const std::string& path, const std::string& text) { write_file(path, to_bytes(text)); }

json read_json(const std::string& path) {
  const Bytes b = read_file(path);
  try {
    return json::parse(b.begin(), b.end(), nullptr, true, true);
  } catch (const json::exception& e) {
    throw DecodeError(path + ": " + e.what(), 0);
  }
}

// APVAS_SEED wins over built-in defaults and config files; an explicit --seed wins over both.
std::optional<std::uint64_t> env_seed() {
  const char* v = std::getenv("APVAS_SEED");
  if (!v || !*v) return std::nullopt;
  try {
    std::size_t used = 0;
    const unsigned long long s = std::stoull(v, &used, 0);
    if (used != std::strlen(v)) throw std::invalid_argument(v);
    return s;
  } catch (const std::exception&) {
    throw ConfigError(std::string("APVAS_SEED is not an unsigned integer: ") + v);
  }
}

std::uint64_t pick_seed(const std::optional<std::uint64_t>& flag, std::uint64_t fallback) {
  if (flag) return *flag;
  if (auto e = env_seed()) return *e;
  return fallback;
}

const bimodal::PublicParams& params() {
  static const bimodal::PublicParams p = bn254::setup("bn254");
  return p;
}

bimodal::KeyPair load_apvas_key(const std::string& path) {
  const json j = read_json(path);
  if (j.value("scheme", "") != "apvas") throw ConfigError(path + ": not an apvas key file");
  try {
    const Bytes sk = from_hex(j.at("secret").get<std::string>());
    return bimodal::key_from_secret(params(), bimodal::Scalar::from_bytes(sk));
  } catch (const json::exception& e) {
    throw DecodeError(path + ": " + e.what(), 0);
  }
}

baseline::SigningKey load_baseline_key(const std::string& path) {
  const json j = read_json(path);
  if (j.value("scheme", "") != "baseline") throw ConfigError(path + ": not a baseline key file");
  try {
    const Bytes sk = from_hex(j.at("secret").get<std::string>());
    baseline::Secret d{};
    if (sk.size() != d.size()) throw DecodeError(path + ": secret must be 48 bytes", 0);
    std::copy(sk.begin(), sk.end(), d.begin());
    return baseline::SigningKey::from_secret(d);
  } catch (const json::exception& e) {
    throw DecodeError(path + ": " + e.what(), 0);
  }
}

Bytes message_bytes(const std::string& text, const std::string& hex, const std::string& file) {
  const int given = !text.empty() + !hex.empty() + !file.empty();
  if (given != 1) throw UsageError("give exactly one of --message, --message-hex, --message-file");
  if (!hex.empty()) return from_hex(hex);
  if (!file.empty()) return read_file(file);
  return to_bytes(text);
}

void print_result(bool ok, bool as_json) {
  if (as_json) {
    std::cout << json{{"valid", ok}}.dump() << "\n";
  } else {
    std::cout << (ok ? "true" : "false") << "\n";
  }
}

json golden_bimodal_vectors() {
  json out;
  std::vector<bimodal::KeyPair> keys;
  for (std::uint64_t seed : {1u, 2u}) {
    std::mt19937_64 rng(seed);
    keys.push_back(bimodal::user_key_gen(params(), rng));
    out["keygen"].push_back(
        {{"seed", seed}, {"sk", to_hex(keys.back().sk.to_bytes())}, {"pk", to_hex(keys.back().pk_bytes)}});
  }
  const bimodal::ChainEntry e1{keys[0].pk_bytes, to_bytes("A")};
  const bimodal::ChainEntry e2{keys[1].pk_bytes, to_bytes("B")};
  const std::vector<bimodal::ChainEntry> both{e1, e2};

  const bimodal::GtElement one;
  const auto c1 = bimodal::chain_commitment_from_head(params(), one, e1, std::span(both).first(1));
  const auto claim1 = bimodal::seq_agg_sign(params(), keys[0], e1.m, {}, bimodal::kNewChain);
  out["chain_start"] = {{"m", to_hex(e1.m)},
                        {"transcript", to_hex(bimodal::commitment_transcript(one, e1, std::span(both).first(1)))},
                        {"commitment", to_hex(c1.to_bytes())},
                        {"sigma", to_hex(claim1.sigma.to_bytes())}};

  const auto head = bn254::pairing(params(), claim1.sigma, params().generator);
  const auto c2 = bimodal::chain_commitment_from_head(params(), head, e2, both);
  const auto claim2 = bimodal::seq_agg_sign(params(), keys[1], e2.m, claim1, 0);
  out["chain_extend"] = {{"m", to_hex(e2.m)},
                         {"head", to_hex(head.to_bytes())},
                         {"commitment", to_hex(c2.to_bytes())},
                         {"sigma", to_hex(claim2.sigma.to_bytes())},
                         {"claim", to_hex(claim2.serialize())}};
  return out;
}

int run(int argc, char** argv) {
  CLI::App app{"APVAS path validation toolkit", "apvas"};
  app.require_subcommand(0, 1);

  std::string golden_dir;
  bool golden_confirm = false;
  app.add_option("--golden", golden_dir, "Regenerate frozen crypto vectors into this directory");
  app.add_flag("--confirm-overwrite", golden_confirm, "Required with --golden");

  // keygen
  auto* keygen = app.add_subcommand("keygen", "Generate a key pair");
  std::string kg_scheme = "apvas", kg_out;
  std::optional<std::uint64_t> kg_seed;
  keygen->add_option("--scheme", kg_scheme, "apvas or baseline")->check(CLI::IsMember({"apvas", "baseline"}));
  keygen->add_option("--seed", kg_seed, "RNG seed (default: APVAS_SEED, else 1)");
  keygen->add_option("--out", kg_out, "Key file to write")->required();

  // sign
  auto* sign = app.add_subcommand("sign", "Sign a message, starting or extending a claim");
  std::string sg_key, sg_text, sg_hex, sg_file, sg_claim, sg_chain, sg_out;
  sign->add_option("--key", sg_key, "Key file from keygen")->required();
  sign->add_option("--message", sg_text, "Message as text");
  sign->add_option("--message-hex", sg_hex, "Message as hex");
  sign->add_option("--message-file", sg_file, "Message file");
  sign->add_option("--claim", sg_claim, "Claim to extend (apvas keys)");
  sign->add_option("--chain", sg_chain, "Chain index to extend, or 'new'");
  sign->add_option("--out", sg_out, "Claim file (apvas) or 96-byte signature (baseline)")->required();

  // aggregate
  auto* aggregate = app.add_subcommand("aggregate", "Merge claims into one");
  std::vector<std::string> ag_claims;
  std::string ag_out;
  aggregate->add_option("--claim", ag_claims, "Claim file, repeat for each")->required();
  aggregate->add_option("--out", ag_out, "Claim file to write")->required();

  // verify
  auto* verify = app.add_subcommand("verify", "Verify a claim or a baseline signature");
  std::string vf_claim, vf_key, vf_sig, vf_text, vf_hex, vf_file;
  bool vf_json = false;
  verify->add_option("--claim", vf_claim, "Claim file");
  verify->add_option("--key", vf_key, "Baseline key file");
  verify->add_option("--sig", vf_sig, "Baseline signature file");
  verify->add_option("--message", vf_text, "Message as text");
  verify->add_option("--message-hex", vf_hex, "Message as hex");
  verify->add_option("--message-file", vf_file, "Message file");
  verify->add_flag("--json", vf_json, "Print {\"valid\": ...}");

  // inspect
  auto* inspect = app.add_subcommand("inspect", "Decode an update message");
  std::string in_msg, in_hex;
  bool in_json = false;
  inspect->add_option("--msg", in_msg, "Binary message file");
  inspect->add_option("--hex", in_hex, "Message as hex");
  inspect->add_flag("--json", in_json, "Print fields as JSON");

  // simulate
  auto* simulate = app.add_subcommand("simulate", "Run the route advertisement experiment");
  std::string sm_config, sm_suite = "all", sm_out;
  std::optional<std::uint64_t> sm_seed;
  bool sm_quiet = false;
  simulate->add_option("--config", sm_config, "Topology config (JSON, comments allowed)")->required();
  simulate->add_option("--suite", sm_suite, "plain, conventional, apvas or all")
      ->check(CLI::IsMember({"plain", "conventional", "apvas", "all"}));
  simulate->add_option("--out", sm_out, "Output directory")->required();
  simulate->add_option("--seed", sm_seed, "Overrides key and prefix seeds");
  simulate->add_flag("--quiet", sm_quiet, "Only list written files");

  // report
  auto* report = app.add_subcommand("report", "Model-only size report: reductions and full-route projection");
  std::string rp_config;
  std::vector<double> rp_lens{3.9, 20};
  bool rp_json = false;
  report->add_option("--config", rp_config, "Topology config for the cost constants");
  report->add_option("--len", rp_lens, "Path lengths for the signature-block ratio");
  report->add_flag("--json", rp_json, "Print JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  if (!golden_dir.empty()) {
    if (!golden_confirm) throw UsageError("--golden overwrites frozen vectors; add --confirm-overwrite");
    std::filesystem::create_directories(golden_dir);
    const std::string path = (std::filesystem::path(golden_dir) / "bimodal_vectors.json").string();
    write_text(path, golden_bimodal_vectors().dump(2) + "\n");
    std::cout << "wrote " << path << "\n";
    return kOk;
  }
  if (golden_confirm) throw UsageError("--confirm-overwrite only applies to --golden");

  if (*keygen) {
    std::mt19937_64 rng(pick_seed(kg_seed, 1));
    json j{{"scheme", kg_scheme}};
    if (kg_scheme == "apvas") {
      const auto kp = bimodal::user_key_gen(params(), rng);
      j["secret"] = to_hex(kp.sk.to_bytes());
      j["public_key"] = to_hex(kp.pk_bytes);
      j["ski"] = to_hex(wire::ski_of(kp.pk_bytes));
    } else {
      const auto key = baseline::SigningKey::generate(rng);
      j["secret"] = to_hex(key.secret());
      j["public_key"] = to_hex(key.public_key());
      j["ski"] = to_hex(wire::ski_of(key.public_key()));
    }
    write_text(kg_out, j.dump(2) + "\n");
    std::cout << j["ski"].get<std::string>() << "\n";
    return kOk;
  }

  if (*sign) {
    const Bytes m = message_bytes(sg_text, sg_hex, sg_file);
    const json kj = read_json(sg_key);
    if (kj.value("scheme", "") == "baseline") {
      if (!sg_claim.empty() || !sg_chain.empty()) throw UsageError("--claim and --chain need an apvas key");
      const auto sig = load_baseline_key(sg_key).sign(m);
      write_file(sg_out, sig);
      std::cout << to_hex(sig) << "\n";
      return kOk;
    }
    const auto kp = load_apvas_key(sg_key);
    bimodal::SignatureClaim claim;
    std::size_t chain = bimodal::kNewChain;
    if (!sg_claim.empty()) {
      claim = bimodal::SignatureClaim::deserialize(read_file(sg_claim));
      if (sg_chain.empty()) {
        if (claim.chains.size() != 1) throw UsageError("claim has several chains; pick one with --chain");
        chain = 0;
      }
    }
    if (!sg_chain.empty() && sg_chain != "new") {
      try {
        chain = std::stoul(sg_chain);
      } catch (const std::exception&) {
        throw UsageError("--chain takes an index or 'new'");
      }
    }
    if (sg_claim.empty() && chain != bimodal::kNewChain) throw UsageError("--chain needs --claim");
    const auto out = bimodal::seq_agg_sign(params(), kp, m, claim, chain);
    write_file(sg_out, out.serialize());
    std::cout << to_hex(out.sigma.to_bytes()) << "\n";
    return kOk;
  }

  if (*aggregate) {
    if (ag_claims.size() < 2) throw UsageError("aggregate needs at least two --claim files");
    auto claim = bimodal::SignatureClaim::deserialize(read_file(ag_claims[0]));
    for (std::size_t i = 1; i < ag_claims.size(); ++i) {
      claim = bimodal::agg_sign(claim, bimodal::SignatureClaim::deserialize(read_file(ag_claims[i])));
    }
    write_file(ag_out, claim.serialize());
    std::cout << to_hex(claim.sigma.to_bytes()) << "\n";
    return kOk;
  }

  if (*verify) {
    bool ok = false;
    if (!vf_claim.empty()) {
      if (!vf_key.empty() || !vf_sig.empty()) throw UsageError("--claim cannot be combined with --key or --sig");
      ok = bimodal::verify(params(), bimodal::SignatureClaim::deserialize(read_file(vf_claim)));
    } else {
      if (vf_key.empty() || vf_sig.empty()) throw UsageError("give --claim, or --key, --sig and a message");
      const Bytes m = message_bytes(vf_text, vf_hex, vf_file);
      const json kj = read_json(vf_key);
      if (kj.value("scheme", "") != "baseline") throw ConfigError(vf_key + ": not a baseline key file");
      const auto key = baseline::VerifyingKey::from_bytes(from_hex(kj.value("public_key", "")));
      const Bytes sig_bytes = read_file(vf_sig);
      baseline::Signature sig{};
      if (sig_bytes.size() == sig.size()) {
        std::copy(sig_bytes.begin(), sig_bytes.end(), sig.begin());
        ok = key.verify(m, sig);
      }
    }
    print_result(ok, vf_json);
    return ok ? kOk : kFalse;
  }

  if (*inspect) {
    if (in_msg.empty() == in_hex.empty()) throw UsageError("give exactly one of --msg, --hex");
    const Bytes b = in_msg.empty() ? from_hex(in_hex) : read_file(in_msg);
    std::vector<wire::FieldTrace> trace;
    const auto msg = wire::decode_update_traced(b, trace);
    if (in_json) {
      json j{{"suite", wire::suite_name(msg.suite())}, {"total_bytes", b.size()}, {"fields", json::array()}};
      for (const auto& f : trace) {
        j["fields"].push_back({{"offset", f.offset}, {"length", f.length}, {"name", f.name}, {"value", f.value}});
      }
      std::cout << j.dump(2) << "\n";
    } else {
      std::cout << "offset length field value\n";
      for (const auto& f : trace) {
        std::cout << f.offset << " " << f.length << " " << f.name << " " << f.value << "\n";
      }
      std::cout << "total " << b.size() << " bytes\n";
    }
    return kOk;
  }

  if (*simulate) {
    auto cfg = netsim::TopologyConfig::load(sm_config);
    if (sm_seed) {
      cfg.override_seeds(*sm_seed);
    } else if (auto e = env_seed()) {
      cfg.override_seeds(*e);
    }
    std::vector<wire::Suite> suites;
    if (sm_suite == "all") {
      suites = {wire::Suite::plain, wire::Suite::conventional, wire::Suite::apvas};
    } else {
      suites = {wire::parse_suite(sm_suite)};
    }
    std::vector<netsim::ExperimentResult> results;
    for (auto s : suites) results.push_back(netsim::run_experiment(cfg, s));
    netsim::write_outputs(sm_out, results);
    for (const auto& r : results) {
      if (r.stats.rejected_signature != 0) {
        std::cerr << "warning: " << r.stats.rejected_signature << " " << wire::suite_name(r.suite)
                  << " deliveries failed verification\n";
      }
    }
    if (!sm_quiet) std::cout << netsim::compare_report(results).text;
    const std::filesystem::path out(sm_out);
    std::cout << "wrote " << (out / "results.csv").string() << "\n"
              << "wrote " << (out / "report.json").string() << "\n"
              << "wrote " << (out / "report.txt").string() << "\n";
    return kOk;
  }

  if (*report) {
    netsim::TopologyConfig cfg = netsim::TopologyConfig::line(6, 200);
    if (!rp_config.empty()) cfg = netsim::TopologyConfig::load(rp_config);
    json j;
    for (double len : rp_lens) {
      if (!(len > 0)) throw UsageError("--len must be positive");
      j["sig_block_reduction"].push_back({{"len", len},
                                          {"apvas_bytes", netsim::sig_block_bytes(wire::Suite::apvas, len)},
                                          {"conventional_bytes", netsim::sig_block_bytes(wire::Suite::conventional, len)},
                                          {"reduction", netsim::sig_block_reduction(len)}});
    }
    j["full_route_projection"] = netsim::full_route_projection(cfg, 3.9);
    if (rp_json) {
      std::cout << j.dump(2) << "\n";
      return kOk;
    }
    char buf[160];
    std::cout << "signature block bytes (apvas 67 + 20 L, conventional 1 + 118 L)\n";
    for (const auto& row : j["sig_block_reduction"]) {
      std::snprintf(buf, sizeof buf, "  L=%-5g apvas %8.1f  conventional %8.1f  reduction %.2f%%\n",
                    row["len"].get<double>(), row["apvas_bytes"].get<double>(),
                    row["conventional_bytes"].get<double>(), 100 * row["reduction"].get<double>());
      std::cout << buf;
    }
    std::cout << "full-route projection at L=3.9 (model, GB)\n";
    for (const auto& row : j["full_route_projection"]["rows"]) {
      std::snprintf(buf, sizeof buf, "  %d NIST %6.2f  conventional %6.2f  apvas %6.2f\n", row["year"].get<int>(),
                    row["nist_bgpsec_gb"].get<double>(), row["model_conventional_gb"].get<double>(),
                    row["model_apvas_gb"].get<double>());
      std::cout << buf;
    }
    return kOk;
  }

  std::cerr << app.help();
  return kUsage;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kUsage;
  } catch (const DecodeError& e) {
    std::cerr << "decode error: " << e.what() << "\n";
    return kIo;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kIo;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kIo;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
}
