/*
 * SPDX-License-Identifier: Apache-2.0
 */

#include "apvas/bgpsec_wire.hpp"

#include <algorithm>
#include <cstdio>

#include <openssl/sha.h>

namespace apvas::wire {

namespace {

constexpr std::size_t kMaxSegments = (0xffff - 2) / kSegmentBytes;

std::string hex_u8(std::uint8_t v) {
  char buf[8];
  std::snprintf(buf, sizeof buf, "0x%02X", v);
  return buf;
}

void check_nlri(const Nlri& n) {
  if (n.prefix_len > 32) throw EncodeError("nlri.prefix_len", "must be at most 32");
  for (std::size_t bit = n.prefix_len; bit < 32; ++bit) {
    if (n.prefix[bit / 8] & (0x80 >> (bit % 8))) throw EncodeError("nlri.prefix", "bits beyond prefix_len must be zero");
  }
}

std::size_t path_count(const SignatureBlock& b) {
  if (auto* c = std::get_if<SignatureBlockConventional>(&b)) return c->segments.size();
  if (auto* a = std::get_if<SignatureBlockApvas>(&b)) return a->skis.size();
  return 0;
}

void check_message(const UpdateMessage& msg) {
  check_nlri(msg.nlri);
  if (msg.secure_path.size() > kMaxSegments) throw EncodeError("secure_path", "too many segments");
  for (const auto& s : msg.secure_path) {
    if (s.pcount < 1) throw EncodeError("secure_path.pcount", "must be at least 1");
  }
  if (std::holds_alternative<std::monostate>(msg.sig_block)) return;
  if (msg.secure_path.empty()) throw EncodeError("secure_path", "must not be empty when a signature block is present");
  if (path_count(msg.sig_block) != msg.secure_path.size()) {
    throw EncodeError("sig_block", "needs one entry per secure_path segment");
  }
  if (auto* c = std::get_if<SignatureBlockConventional>(&msg.sig_block)) {
    for (const auto& seg : c->segments) {
      if (seg.sig.size() > 0xffff) throw EncodeError("sig_block.sig", "longer than 65535 bytes");
    }
  }
}

// Reader that optionally records what it decoded.
class Tracer {
 public:
  Tracer(ByteView in, std::vector<FieldTrace>* trace) : r_(in), in_(in), trace_(trace) {}

  ByteReader& r() { return r_; }

  void note(std::size_t start, std::string name, std::string value) {
    if (trace_) trace_->push_back({start, r_.offset() - start, std::move(name), std::move(value)});
  }

  std::string hex_since(std::size_t start) const { return to_hex(in_.subspan(start, r_.offset() - start)); }

 private:
  ByteReader r_;
  ByteView in_;
  std::vector<FieldTrace>* trace_;
};

Nlri read_nlri(Tracer& t) {
  ByteReader& r = t.r();
  Nlri n;
  std::size_t at = r.offset();
  n.prefix_len = r.u8("nlri length");
  if (n.prefix_len > 32) throw DecodeError("nlri prefix length above 32", at);
  t.note(at, "nlri.prefix_len", std::to_string(n.prefix_len));
  at = r.offset();
  ByteView p = r.take((n.prefix_len + 7u) / 8u, "nlri prefix");
  std::copy(p.begin(), p.end(), n.prefix.begin());
  for (std::size_t bit = n.prefix_len; bit < p.size() * 8; ++bit) {
    if (n.prefix[bit / 8] & (0x80 >> (bit % 8))) throw DecodeError("nlri has bits set beyond prefix length", at);
  }
  t.note(at, "nlri.prefix", n.to_string());
  return n;
}

UpdateMessage decode_impl(ByteView bytes, std::vector<FieldTrace>* trace) {
  Tracer t(bytes, trace);
  ByteReader& r = t.r();
  UpdateMessage msg;

  std::size_t at = r.offset();
  const std::uint8_t suite_byte = r.u8("suite id");
  if (suite_byte != 0x00 && suite_byte != 0x01 && suite_byte != 0xA1) {
    throw DecodeError("unknown suite id " + hex_u8(suite_byte), at);
  }
  const auto suite = static_cast<Suite>(suite_byte);
  t.note(at, "suite", std::string(suite_name(suite)) + " (" + hex_u8(suite_byte) + ")");

  at = r.offset();
  const std::uint16_t path_len = r.u16("secure_path length");
  if (path_len < 2 || (path_len - 2) % kSegmentBytes != 0) {
    throw DecodeError("secure_path length must be 2 + 6N, got " + std::to_string(path_len), at);
  }
  const std::size_t n = (path_len - 2u) / kSegmentBytes;
  t.note(at, "secure_path.length", std::to_string(path_len) + " (" + std::to_string(n) + " segments)");
  msg.secure_path.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    at = r.offset();
    SecurePathSegment s;
    s.pcount = r.u8("pcount");
    if (s.pcount < 1) throw DecodeError("pcount must be at least 1", at);
    s.flags = r.u8("flags");
    s.as_number = r.u32("as number");
    t.note(at, "secure_path[" + std::to_string(i) + "]",
           "AS" + std::to_string(s.as_number) + " pcount=" + std::to_string(s.pcount) + " flags=" + hex_u8(s.flags));
    msg.secure_path.push_back(s);
  }

  if (suite != Suite::plain) {
    if (n == 0) throw DecodeError("signed message with empty secure_path", 1);
    at = r.offset();
    const std::uint8_t block_suite = r.u8("signature block suite id");
    if (block_suite != suite_byte) {
      throw DecodeError("signature block suite " + hex_u8(block_suite) + " does not match " + hex_u8(suite_byte), at);
    }
    t.note(at, "sig_block.suite", hex_u8(block_suite));
    if (suite == Suite::apvas) {
      SignatureBlockApvas b;
      at = r.offset();
      const std::uint16_t sig_len = r.u16("sigma length");
      if (sig_len != kSigmaBytes) throw DecodeError("sigma length must be 64, got " + std::to_string(sig_len), at);
      t.note(at, "sig_block.sig_len", std::to_string(sig_len));
      at = r.offset();
      ByteView sigma = r.take(kSigmaBytes, "sigma");
      std::copy(sigma.begin(), sigma.end(), b.sigma.begin());
      t.note(at, "sig_block.sigma", t.hex_since(at));
      for (std::size_t i = 0; i < n; ++i) {
        at = r.offset();
        ByteView ski = r.take(kSkiBytes, "ski");
        Ski s{};
        std::copy(ski.begin(), ski.end(), s.begin());
        b.skis.push_back(s);
        t.note(at, "sig_block.ski[" + std::to_string(i) + "]", t.hex_since(at));
      }
      msg.sig_block = std::move(b);
    } else {
      SignatureBlockConventional b;
      for (std::size_t i = 0; i < n; ++i) {
        SignatureSegment seg;
        at = r.offset();
        ByteView ski = r.take(kSkiBytes, "ski");
        std::copy(ski.begin(), ski.end(), seg.ski.begin());
        t.note(at, "sig_block.segment[" + std::to_string(i) + "].ski", t.hex_since(at));
        at = r.offset();
        const std::uint16_t sig_len = r.u16("signature length");
        t.note(at, "sig_block.segment[" + std::to_string(i) + "].sig_len", std::to_string(sig_len));
        at = r.offset();
        ByteView sig = r.take(sig_len, "signature");
        seg.sig.assign(sig.begin(), sig.end());
        t.note(at, "sig_block.segment[" + std::to_string(i) + "].sig", t.hex_since(at));
        b.segments.push_back(std::move(seg));
      }
      msg.sig_block = std::move(b);
    }
  }

  msg.nlri = read_nlri(t);
  r.expect_end();
  return msg;
}

}  // namespace

Ski ski_of(ByteView public_key) {
  std::array<std::uint8_t, SHA256_DIGEST_LENGTH> digest{};
  SHA256(public_key.data(), public_key.size(), digest.data());
  Ski out{};
  std::copy_n(digest.begin(), kSkiBytes, out.begin());
  return out;
}

const char* suite_name(Suite s) {
  switch (s) {
    case Suite::plain:
      return "plain";
    case Suite::conventional:
      return "conventional";
    case Suite::apvas:
      return "apvas";
  }
  return "unknown";
}

Suite parse_suite(std::string_view name) {
  if (name == "plain") return Suite::plain;
  if (name == "conventional") return Suite::conventional;
  if (name == "apvas") return Suite::apvas;
  throw ConfigError("unknown suite '" + std::string(name) + "' (expected plain, conventional or apvas)");
}

std::string Nlri::to_string() const {
  return std::to_string(prefix[0]) + "." + std::to_string(prefix[1]) + "." + std::to_string(prefix[2]) + "." +
         std::to_string(prefix[3]) + "/" + std::to_string(prefix_len);
}

Suite UpdateMessage::suite() const {
  if (std::holds_alternative<SignatureBlockConventional>(sig_block)) return Suite::conventional;
  if (std::holds_alternative<SignatureBlockApvas>(sig_block)) return Suite::apvas;
  return Suite::plain;
}

Bytes encode_nlri(const Nlri& nlri) {
  check_nlri(nlri);
  ByteWriter w;
  w.u8(nlri.prefix_len);
  w.bytes(ByteView(nlri.prefix.data(), (nlri.prefix_len + 7u) / 8u));
  return std::move(w).take();
}

Bytes encode_segments(std::span<const SecurePathSegment> segments) {
  ByteWriter w;
  for (const auto& s : segments) {
    w.u8(s.pcount);
    w.u8(s.flags);
    w.u32(s.as_number);
  }
  return std::move(w).take();
}

Bytes encode_update(const UpdateMessage& msg) {
  check_message(msg);
  ByteWriter w;
  const Suite suite = msg.suite();
  w.u8(static_cast<std::uint8_t>(suite));
  w.u16(static_cast<std::uint16_t>(2 + kSegmentBytes * msg.secure_path.size()));
  w.bytes(encode_segments(msg.secure_path));
  if (auto* a = std::get_if<SignatureBlockApvas>(&msg.sig_block)) {
    w.u8(static_cast<std::uint8_t>(Suite::apvas));
    w.u16(static_cast<std::uint16_t>(kSigmaBytes));
    w.bytes(a->sigma);
    for (const auto& ski : a->skis) w.bytes(ski);
  } else if (auto* c = std::get_if<SignatureBlockConventional>(&msg.sig_block)) {
    w.u8(static_cast<std::uint8_t>(Suite::conventional));
    for (const auto& seg : c->segments) {
      w.bytes(seg.ski);
      w.u16(static_cast<std::uint16_t>(seg.sig.size()));
      w.bytes(seg.sig);
    }
  }
  w.bytes(encode_nlri(msg.nlri));
  return std::move(w).take();
}

UpdateMessage decode_update(ByteView bytes) { return decode_impl(bytes, nullptr); }

UpdateMessage decode_update_traced(ByteView bytes, std::vector<FieldTrace>& trace) {
  return decode_impl(bytes, &trace);
}

std::size_t sig_block_size(Suite suite, std::size_t path_len) {
  switch (suite) {
    case Suite::plain:
      return 0;
    case Suite::conventional:
      return 1 + path_len * (kSkiBytes + 2 + kBaselineSigBytes);
    case Suite::apvas:
      return 1 + 2 + kSigmaBytes + path_len * kSkiBytes;
  }
  return 0;
}

Bytes build_signed_octets(std::uint32_t target_as, const UpdateMessage& msg, std::size_t signer_position) {
  const std::size_t n = msg.secure_path.size();
  if (signer_position == 0 || signer_position > n) {
    throw RangeError("signer position " + std::to_string(signer_position) + " outside path of length " +
                     std::to_string(n));
  }
  const Bytes segments = encode_segments(std::span(msg.secure_path).subspan(n - signer_position));
  ByteWriter w;
  w.u32(target_as);
  w.bytes(segments);
  w.u8(static_cast<std::uint8_t>(msg.suite()));
  w.bytes(encode_nlri(msg.nlri));
  return std::move(w).take();
}

std::vector<Bytes> signed_octets_along_path(const UpdateMessage& msg, std::uint32_t receiver_as) {
  const std::size_t n = msg.secure_path.size();
  std::vector<Bytes> out;
  out.reserve(n);
  for (std::size_t k = 1; k <= n; ++k) {
    // Position k + 1 sits at index n - k - 1 in wire order.
    const std::uint32_t target = k < n ? msg.secure_path[n - k - 1].as_number : receiver_as;
    out.push_back(build_signed_octets(target, msg, k));
  }
  return out;
}

}  // namespace apvas::wire
