#include <doctest.h>

#include "svne/brite.hpp"
#include "svne/enhance.hpp"
#include "svne/netmodel.hpp"
#include "svne/serialize.hpp"

using namespace svne;

TEST_CASE("two-node round trip") {
  SubstrateNetwork net;
  net.add_node(0.25, 0.75, 3720);
  net.add_node(0.5, 0.5, 5320);
  net.add_link(0, 1, 101.5, 0.35);
  auto text = write_brite(to_brite(net));
  auto parsed = substrate_from_brite(parse_brite(text));
  CHECK(parsed == net);
}

TEST_CASE("edge referencing an unknown node is rejected with its line") {
  std::string text =
      "Topology: ( 2 Nodes, 1 Edges )\n"
      "Nodes: ( 2 ):\n"
      "0 0 0 1 1 -1 RT_NODE cpu=10\n"
      "1 1 1 1 1 -1 RT_NODE cpu=10\n"
      "Edges: ( 1 ):\n"
      "0 0 99 1 0 55 -1 -1 E_RT\n";
  try {
    parse_brite(text);
    FAIL("expected BriteParseError");
  } catch (const BriteParseError& e) {
    CHECK(std::string(e.what()).find("unknown node 99") != std::string::npos);
    CHECK(e.line == 6);
  }
}

TEST_CASE("malformed headers and negative capacities are rejected") {
  CHECK_THROWS_AS(parse_brite("Garbage: ( 1 )\n0 0 0\n"), BriteParseError);
  CHECK_THROWS_AS(parse_brite("Topology: ( 1 Nodes, 0 Edges )\n"
                              "Nodes: ( 1 ):\n"
                              "0 0 0 0 0 -1 RT_NODE cpu=-5\n"),
                  BriteParseError);
  // Count mismatch against the Topology header.
  CHECK_THROWS_AS(parse_brite("Topology: ( 2 Nodes, 0 Edges )\n"
                              "Nodes: ( 2 ):\n"
                              "0 0 0 0 0 -1 RT_NODE cpu=5\n"),
                  BriteParseError);
}

TEST_CASE("full-scale substrate round-trips bit-exactly") {
  auto net = waxman_generate(100, 500, 50, 150, {3720, 5320}, 0.15, 0.2, 12);
  auto text = write_brite(to_brite(net));
  auto reparsed = parse_brite(text);
  CHECK(write_brite(reparsed) == text);
  CHECK(substrate_from_brite(reparsed) == net);
}

TEST_CASE("virtual networks round trip through the same dialect") {
  for (int s = 0; s < 20; ++s) {
    auto vn = generate_vn_request(2, 12, 0.5, {2500, 2000, 1000, 500}, 1, 50, 300 + s);
    auto text = write_brite(to_brite(vn));
    auto parsed = vn_from_brite(parse_brite(text));
    CHECK(parsed == vn);
    CHECK(write_brite(to_brite(parsed)) == text);
  }
}

TEST_CASE("enhanced network document round-trips through JSON") {
  auto vn = generate_vn_request(3, 3, 0.8, {1000, 500}, 2, 9, 4242);
  auto enhanced = fip_enhance(vn, 1.5);
  auto text = enhanced_to_json(enhanced, enhanced.objective());
  auto back = enhanced_from_json(text);
  CHECK(back.base == enhanced.base);
  CHECK(back.plans == enhanced.plans);
  CHECK(back.alpha == enhanced.alpha);
  CHECK(back.c_e == enhanced.c_e);
  CHECK(back.b_e == enhanced.b_e);
  CHECK(back.objective() == doctest::Approx(enhanced.objective()));
  CHECK(verify_restorability(back).ok);
}
