#include "svne/brite.hpp"

#include <charconv>
#include <sstream>
#include <system_error>

namespace svne {

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

namespace {

std::vector<std::string> split_ws(std::string_view line) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    if (i > start) out.emplace_back(line.substr(start, i - start));
  }
  return out;
}

double parse_number(const std::string& tok, int line_no, const char* what) {
  double v = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size())
    throw BriteParseError(line_no, std::string("bad ") + what + " '" + tok + "'");
  return v;
}

int parse_int(const std::string& tok, int line_no, const char* what) {
  int v = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size())
    throw BriteParseError(line_no, std::string("bad ") + what + " '" + tok + "'");
  return v;
}

}  // namespace

BriteDocument parse_brite(std::string_view text) {
  BriteDocument doc;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  enum class Section { kPreamble, kNodes, kEdges } section = Section::kPreamble;
  int declared_nodes = -1, declared_edges = -1;

  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (line.rfind("Topology:", 0) == 0) {
      int n = 0, m = 0;
      if (std::sscanf(line.c_str(), "Topology: ( %d Nodes, %d Edges )", &n, &m) != 2)
        throw BriteParseError(line_no, "malformed Topology header");
      declared_nodes = n;
      declared_edges = m;
      continue;
    }
    if (line.rfind("Nodes:", 0) == 0) {
      section = Section::kNodes;
      continue;
    }
    if (line.rfind("Edges:", 0) == 0) {
      section = Section::kEdges;
      continue;
    }
    auto tokens = split_ws(line);
    if (tokens.empty()) continue;
    switch (section) {
      case Section::kPreamble:
        throw BriteParseError(line_no, "unknown section header '" + tokens[0] + "'");
      case Section::kNodes: {
        if (tokens.size() != 8)
          throw BriteParseError(line_no, "node line needs 8 fields");
        BriteNode node;
        node.id = parse_int(tokens[0], line_no, "node id");
        node.x = parse_number(tokens[1], line_no, "x");
        node.y = parse_number(tokens[2], line_no, "y");
        node.in_degree = parse_int(tokens[3], line_no, "indeg");
        node.out_degree = parse_int(tokens[4], line_no, "outdeg");
        node.as_id = parse_int(tokens[5], line_no, "as id");
        node.type = tokens[6];
        if (tokens[7].rfind("cpu=", 0) != 0)
          throw BriteParseError(line_no, "node line missing cpu= token");
        node.cpu = parse_number(tokens[7].substr(4), line_no, "cpu");
        if (node.cpu < 0) throw BriteParseError(line_no, "negative capacity");
        if (node.id != static_cast<int>(doc.nodes.size()))
          throw BriteParseError(line_no, "node ids must be dense and in order");
        doc.nodes.push_back(node);
        break;
      }
      case Section::kEdges: {
        if (tokens.size() != 9)
          throw BriteParseError(line_no, "edge line needs 9 fields");
        BriteEdge edge;
        edge.id = parse_int(tokens[0], line_no, "edge id");
        edge.from = parse_int(tokens[1], line_no, "from");
        edge.to = parse_int(tokens[2], line_no, "to");
        edge.length = parse_number(tokens[3], line_no, "length");
        edge.delay = parse_number(tokens[4], line_no, "delay");
        edge.bw = parse_number(tokens[5], line_no, "bw");
        edge.as_from = parse_int(tokens[6], line_no, "as from");
        edge.as_to = parse_int(tokens[7], line_no, "as to");
        edge.type = tokens[8];
        if (edge.bw < 0) throw BriteParseError(line_no, "negative capacity");
        int n = static_cast<int>(doc.nodes.size());
        if (edge.from < 0 || edge.from >= n)
          throw BriteParseError(line_no, "unknown node " + std::to_string(edge.from));
        if (edge.to < 0 || edge.to >= n)
          throw BriteParseError(line_no, "unknown node " + std::to_string(edge.to));
        doc.edges.push_back(edge);
        break;
      }
    }
  }
  if (declared_nodes >= 0 && declared_nodes != static_cast<int>(doc.nodes.size()))
    throw BriteParseError(line_no, "node count does not match Topology header");
  if (declared_edges >= 0 && declared_edges != static_cast<int>(doc.edges.size()))
    throw BriteParseError(line_no, "edge count does not match Topology header");
  return doc;
}

std::string write_brite(const BriteDocument& doc) {
  std::string out;
  out += "Topology: ( " + std::to_string(doc.nodes.size()) + " Nodes, " +
         std::to_string(doc.edges.size()) + " Edges )\n";
  out += "Nodes: ( " + std::to_string(doc.nodes.size()) + " ):\n";
  for (const auto& n : doc.nodes) {
    out += std::to_string(n.id) + " " + format_double(n.x) + " " + format_double(n.y) + " " +
           std::to_string(n.in_degree) + " " + std::to_string(n.out_degree) + " " +
           std::to_string(n.as_id) + " " + n.type + " cpu=" + format_double(n.cpu) + "\n";
  }
  out += "Edges: ( " + std::to_string(doc.edges.size()) + " ):\n";
  for (const auto& e : doc.edges) {
    out += std::to_string(e.id) + " " + std::to_string(e.from) + " " + std::to_string(e.to) +
           " " + format_double(e.length) + " " + format_double(e.delay) + " " +
           format_double(e.bw) + " " + std::to_string(e.as_from) + " " +
           std::to_string(e.as_to) + " " + e.type + "\n";
  }
  return out;
}

BriteDocument to_brite(const SubstrateNetwork& net) {
  BriteDocument doc;
  std::vector<int> degree(net.node_count(), 0);
  for (const auto& l : net.links()) {
    ++degree[l.from];
    ++degree[l.to];
  }
  for (const auto& n : net.nodes())
    doc.nodes.push_back({n.id, n.x, n.y, degree[n.id], degree[n.id], -1, "RT_NODE",
                         n.cpu_capacity});
  for (const auto& l : net.links())
    doc.edges.push_back({l.id, l.from, l.to, l.length, 0.0, l.bw_capacity, -1, -1, "E_RT"});
  return doc;
}

BriteDocument to_brite(const VirtualNetwork& vn) {
  BriteDocument doc;
  int n = vn.node_count();
  std::vector<int> degree(n, 0);
  auto links = vn.links();
  for (const auto& [i, j] : links) {
    ++degree[i];
    ++degree[j];
  }
  for (int i = 0; i < n; ++i)
    doc.nodes.push_back({i, vn.coord_x.empty() ? 0.0 : vn.coord_x[i],
                         vn.coord_y.empty() ? 0.0 : vn.coord_y[i], degree[i], degree[i], -1,
                         "RT_NODE", vn.cpu[i]});
  int id = 0;
  for (const auto& [i, j] : links)
    doc.edges.push_back({id++, i, j, 0.0, 0.0, vn.bw[i][j], -1, -1, "E_RT"});
  return doc;
}

SubstrateNetwork substrate_from_brite(const BriteDocument& doc) {
  SubstrateNetwork net;
  for (const auto& n : doc.nodes) net.add_node(n.x, n.y, n.cpu);
  for (const auto& e : doc.edges) net.add_link(e.from, e.to, e.bw, e.length);
  return net;
}

VirtualNetwork vn_from_brite(const BriteDocument& doc) {
  VirtualNetwork vn;
  int n = static_cast<int>(doc.nodes.size());
  vn.cpu.resize(n);
  vn.coord_x.resize(n);
  vn.coord_y.resize(n);
  vn.bw.assign(n, std::vector<double>(n, 0.0));
  for (int i = 0; i < n; ++i) {
    vn.cpu[i] = doc.nodes[i].cpu;
    vn.coord_x[i] = doc.nodes[i].x;
    vn.coord_y[i] = doc.nodes[i].y;
  }
  for (const auto& e : doc.edges) {
    vn.bw[e.from][e.to] = e.bw;
    vn.bw[e.to][e.from] = e.bw;
  }
  vn.validate();
  return vn;
}

}  // namespace svne
