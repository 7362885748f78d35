/*
 * SPDX-License-Identifier: Apache-2.0
 */

#include "apvas/router_engine.hpp"

#include <gtest/gtest.h>

#include <deque>

using namespace apvas;
using namespace apvas::router;

namespace {

const std::shared_ptr<const bimodal::PublicParams>& params() {
  static const auto p = std::make_shared<const bimodal::PublicParams>(bn254::setup("bn254"));
  return p;
}

Nlri prefix(std::uint8_t third) { return Nlri{24, {198, 18, third, 0}}; }

// Routers keyed by AS over an undirected link list.
struct Net {
  std::map<std::uint32_t, std::unique_ptr<Router>> routers;

  Net(Suite suite, const std::vector<std::pair<std::uint32_t, std::uint32_t>>& links) {
    std::map<std::uint32_t, std::vector<std::uint32_t>> adj;
    for (auto [a, b] : links) {
      adj[a].push_back(b);
      adj[b].push_back(a);
    }
    auto dir = std::make_shared<KeyDirectory>();
    std::map<std::uint32_t, RouterKeys> keys;
    for (const auto& [as, n] : adj) {
      keys[as] = derive_keys(*params(), 7, as);
      dir->add(keys[as]);
    }
    for (const auto& [as, n] : adj) {
      RouterConfig cfg{as, suite, n, keys[as], default_costs(suite)};
      routers[as] = std::make_unique<Router>(cfg, params(), dir);
    }
  }

  static std::vector<std::pair<std::uint32_t, std::uint32_t>> line(std::uint32_t count) {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> links;
    for (std::uint32_t i = 0; i + 1 < count; ++i) links.emplace_back(65001 + i, 65002 + i);
    return links;
  }

  Router& at(std::uint32_t as) { return *routers.at(as); }

  // Delivers everything breadth-first; returns the number of rejected deliveries.
  std::size_t run(std::uint32_t origin, const Nlri& nlri) {
    std::deque<std::pair<std::uint32_t, Forward>> queue;
    for (auto& f : at(origin).originate_all(nlri)) queue.emplace_back(origin, std::move(f));
    std::size_t rejected = 0;
    while (!queue.empty()) {
      auto [from, f] = std::move(queue.front());
      queue.pop_front();
      auto r = at(f.to_as).receive(f.msg, from);
      if (!r.accepted) ++rejected;
      for (auto& next : r.forwarded) queue.emplace_back(f.to_as, std::move(next));
    }
    return rejected;
  }
};

}  // namespace

TEST(RouterTest, OriginateApvasHasOneSegmentAnd87ByteBlock) {
  Net net(Suite::apvas, Net::line(2));
  UpdateMessage m = net.at(65001).originate(prefix(0), 65002);
  ASSERT_EQ(m.secure_path.size(), 1u);
  EXPECT_EQ(m.secure_path[0].as_number, 65001u);
  const Bytes wire_bytes = wire::encode_update(m);
  EXPECT_EQ(wire_bytes.size() - 3 - 6 - m.nlri.encoded_size(), 87u);
  EXPECT_EQ(wire::encode_update(net.at(65001).originate(prefix(0), 65002)), wire_bytes);
}

TEST(RouterTest, OriginatePlainHasNoSignatureBlock) {
  Net net(Suite::plain, Net::line(2));
  UpdateMessage m = net.at(65001).originate(prefix(0), 65002);
  EXPECT_TRUE(std::holds_alternative<std::monostate>(m.sig_block));
  EXPECT_EQ(wire::encode_update(m).size(), 3u + 6u + 4u);
}

TEST(RouterTest, OriginateConventionalSignsWith96Bytes) {
  Net net(Suite::conventional, Net::line(2));
  UpdateMessage m = net.at(65001).originate(prefix(0), 65002);
  const auto& block = std::get<wire::SignatureBlockConventional>(m.sig_block);
  ASSERT_EQ(block.segments.size(), 1u);
  EXPECT_EQ(block.segments[0].sig.size(), 96u);
}

class LinePropagation : public ::testing::TestWithParam<Suite> {};

TEST_P(LinePropagation, FourthRouterStoresThreeHopPathAndForwardsFour) {
  Net net(GetParam(), Net::line(5));
  std::deque<std::pair<std::uint32_t, Forward>> queue;
  for (auto& f : net.at(65001).originate_all(prefix(1))) queue.emplace_back(65001, std::move(f));
  std::optional<UpdateMessage> to_65005;
  while (!queue.empty()) {
    auto [from, f] = std::move(queue.front());
    queue.pop_front();
    auto r = net.at(f.to_as).receive(f.msg, from);
    ASSERT_TRUE(r.accepted) << r.reason;
    for (auto& next : r.forwarded) {
      if (f.to_as == 65004) {
        EXPECT_EQ(next.to_as, 65005u);
        to_65005 = next.msg;
      }
      queue.emplace_back(f.to_as, std::move(next));
    }
  }
  auto snap = net.at(65004).snapshot_memory();
  ASSERT_EQ(snap.entries.size(), 1u);
  const auto& path = snap.entries[0].secure_path;
  ASSERT_EQ(path.size(), 3u);
  EXPECT_EQ(path[0].as_number, 65003u);
  EXPECT_EQ(path[1].as_number, 65002u);
  EXPECT_EQ(path[2].as_number, 65001u);
  EXPECT_EQ(snap.entries[0].origin_as, 65001u);
  EXPECT_EQ(snap.entries[0].verified, GetParam() != Suite::plain);
  ASSERT_TRUE(to_65005);
  EXPECT_EQ(to_65005->secure_path.size(), 4u);
  EXPECT_TRUE(net.at(65001).snapshot_memory().entries.empty());
}

INSTANTIATE_TEST_SUITE_P(Suites, LinePropagation,
                         ::testing::Values(Suite::plain, Suite::conventional, Suite::apvas),
                         [](const auto& info) { return std::string(wire::suite_name(info.param)); });

TEST(RouterTest, FlippedSigmaBitIsRejected) {
  Net net(Suite::apvas, Net::line(3));
  UpdateMessage m = net.at(65001).originate(prefix(2), 65002);
  for (std::size_t bit : {0u, 7u, 300u, 511u}) {
    UpdateMessage bad = m;
    std::get<wire::SignatureBlockApvas>(bad.sig_block).sigma[bit / 8] ^= static_cast<std::uint8_t>(1u << (bit % 8));
    auto r = net.at(65002).receive(bad, 65001);
    EXPECT_FALSE(r.accepted);
    EXPECT_TRUE(r.forwarded.empty());
  }
  EXPECT_TRUE(net.at(65002).snapshot_memory().entries.empty());
}

TEST(RouterTest, SignedForAnotherTargetIsRejected) {
  Net net(Suite::conventional, Net::line(3));
  UpdateMessage m = net.at(65002).originate(prefix(2), 65001);
  EXPECT_FALSE(net.at(65003).receive(m, 65002).accepted);
}

TEST(RouterTest, TamperedConventionalSignatureIsRejected) {
  Net net(Suite::conventional, Net::line(3));
  UpdateMessage m = net.at(65001).originate(prefix(2), 65002);
  std::get<wire::SignatureBlockConventional>(m.sig_block).segments[0].sig[10] ^= 1;
  EXPECT_FALSE(net.at(65002).receive(m, 65001).accepted);
}

TEST(RouterTest, SecondCopyIsNotAccepted) {
  Net net(Suite::apvas, Net::line(3));
  UpdateMessage m = net.at(65001).originate(prefix(3), 65002);
  EXPECT_TRUE(net.at(65002).receive(m, 65001).accepted);
  auto again = net.at(65002).receive(m, 65001);
  EXPECT_FALSE(again.accepted);
  EXPECT_TRUE(again.forwarded.empty());
  EXPECT_EQ(net.at(65002).snapshot_memory().entries.size(), 1u);
}

TEST(RouterTest, ShorterPathWinsAndTiesGoToLowerNeighbor) {
  // 65004 hears 65001 through 65002 and through 65003.
  Net net(Suite::apvas, {{65001, 65002}, {65001, 65003}, {65002, 65004}, {65003, 65004}});
  auto from_origin = net.at(65001).originate_all(prefix(4));
  ASSERT_EQ(from_origin.size(), 2u);
  auto via2 = net.at(65002).receive(from_origin[0].msg, 65001);
  auto via3 = net.at(65003).receive(from_origin[1].msg, 65001);
  ASSERT_EQ(via2.forwarded.size(), 1u);
  ASSERT_EQ(via3.forwarded.size(), 1u);

  Router& r = net.at(65004);
  EXPECT_TRUE(r.receive(via3.forwarded[0].msg, 65003).accepted);
  auto tie = r.receive(via2.forwarded[0].msg, 65002);
  EXPECT_TRUE(tie.accepted);
  EXPECT_TRUE(tie.stored);
  EXPECT_FALSE(r.receive(via3.forwarded[0].msg, 65003).accepted);

  UpdateMessage longer = via2.forwarded[0].msg;
  longer.secure_path.insert(longer.secure_path.begin(), {1, 0, 65003});
  EXPECT_FALSE(r.receive(longer, 65003).accepted);

  auto snap = r.snapshot_memory();
  ASSERT_EQ(snap.entries.size(), 1u);
  EXPECT_EQ(snap.entries[0].from_as, 65002u);
  ASSERT_TRUE(snap.stored_claim);
  EXPECT_EQ(snap.stored_claim->chains.size(), 2u);
  EXPECT_EQ(snap.stored_signatures_bytes, 64u + 20u * 4u);
  EXPECT_TRUE(bimodal::verify(*params(), *snap.stored_claim));
  EXPECT_TRUE(r.conflicts().empty());
}

TEST(RouterTest, LoopAndNonNeighborHandling) {
  Net net(Suite::plain, Net::line(3));
  UpdateMessage m = net.at(65002).originate(prefix(5), 65001);
  EXPECT_THROW(net.at(65001).receive(m, 65003), RangeError);
  UpdateMessage looped = m;
  looped.secure_path.push_back({1, 0, 65001});
  EXPECT_FALSE(net.at(65001).receive(looped, 65002).accepted);
  UpdateMessage spoofed = m;
  spoofed.secure_path[0].as_number = 65003;
  EXPECT_FALSE(net.at(65001).receive(spoofed, 65002).accepted);
}

TEST(RouterTest, EmptyRibHasZeroCounters) {
  for (Suite s : {Suite::plain, Suite::conventional, Suite::apvas}) {
    Net net(s, Net::line(2));
    auto snap = net.at(65002).snapshot_memory();
    EXPECT_EQ(snap.stored_signatures_bytes, 0u);
    EXPECT_EQ(snap.routing_table_bytes, 0u);
    EXPECT_EQ(snap.route_attr_bytes, 0u);
    EXPECT_FALSE(snap.stored_claim);
  }
}

TEST(RouterTest, AccountingFollowsTheByteFormulas) {
  constexpr std::size_t kPaths = 12;
  for (Suite s : {Suite::plain, Suite::conventional, Suite::apvas}) {
    SCOPED_TRACE(wire::suite_name(s));
    Net net(s, Net::line(4));
    for (std::size_t i = 0; i < kPaths; ++i) ASSERT_EQ(net.run(65001, prefix(static_cast<std::uint8_t>(i))), 0u);
    const auto cost = default_costs(s);
    auto snap = net.at(65004).snapshot_memory();
    ASSERT_EQ(snap.entries.size(), kPaths);
    const std::size_t sig = s == Suite::apvas          ? 64 + kPaths * 60
                            : s == Suite::conventional ? kPaths * 354
                                                       : 0;
    EXPECT_EQ(snap.stored_signatures_bytes, sig);
    EXPECT_EQ(snap.routing_table_bytes, kPaths * 230);
    EXPECT_EQ(snap.route_attr_bytes, sig + kPaths * (18 + cost.attr_fixed_cost));
    if (s == Suite::apvas) {
      ASSERT_TRUE(snap.stored_claim);
      EXPECT_EQ(snap.stored_claim->chains.size(), kPaths);
      EXPECT_TRUE(bimodal::verify(*params(), *snap.stored_claim));
    }
    EXPECT_EQ(snap.to_text(), net.at(65004).snapshot_memory().to_text());
  }
}

TEST(RouterTest, StoredSignaturesInequalityAgainstConventional) {
  for (std::size_t sum = 1; sum <= 2000; ++sum) EXPECT_LT(64 + 20 * sum, 118 * sum);
}

TEST(RouterTest, SnapshotTextListsEntries) {
  Net net(Suite::apvas, Net::line(2));
  ASSERT_EQ(net.run(65001, prefix(9)), 0u);
  const std::string text = net.at(65002).snapshot_memory().to_text();
  EXPECT_NE(text.find("as_number=65002\nsuite=apvas\nentry_count=1\n"), std::string::npos);
  EXPECT_NE(text.find("stored_signatures_bytes=84\n"), std::string::npos);
  EXPECT_NE(text.find("entry nlri=198.18.9.0/24 path=65001 origin=65001 from=65001 verified=1\n"),
            std::string::npos);
}
