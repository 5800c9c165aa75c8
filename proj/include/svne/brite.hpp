#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "svne/netmodel.hpp"

namespace svne {

struct BriteParseError : std::runtime_error {
  BriteParseError(int line_number, const std::string& message)
      : std::runtime_error("line " + std::to_string(line_number) + ": " + message),
        line(line_number) {}
  int line;
};

// Line-oriented BRITE dialect. Node lines carry a trailing cpu=<value> token;
// the edge bw column carries bandwidth. Floats are written with shortest
// round-trip precision, so write/parse is the identity.
//
//   Topology: ( <N> Nodes, <M> Edges )
//   Nodes: ( <N> ):
//   <id> <x> <y> <indeg> <outdeg> <as> <type> cpu=<float>
//   Edges: ( <M> ):
//   <id> <from> <to> <len> <delay> <bw> <asf> <ast> <type>
struct BriteNode {
  int id = 0;
  double x = 0.0, y = 0.0;
  int in_degree = 0, out_degree = 0;
  int as_id = -1;
  std::string type = "RT_NODE";
  double cpu = 0.0;
};

struct BriteEdge {
  int id = 0;
  int from = 0, to = 0;
  double length = 0.0, delay = 0.0, bw = 0.0;
  int as_from = -1, as_to = -1;
  std::string type = "E_RT";
};

struct BriteDocument {
  std::vector<BriteNode> nodes;
  std::vector<BriteEdge> edges;
};

BriteDocument parse_brite(std::string_view text);
std::string write_brite(const BriteDocument& doc);

BriteDocument to_brite(const SubstrateNetwork& net);
BriteDocument to_brite(const VirtualNetwork& vn);
SubstrateNetwork substrate_from_brite(const BriteDocument& doc);
VirtualNetwork vn_from_brite(const BriteDocument& doc);

std::string format_double(double v);  // shortest round-trip form

}  // namespace svne
