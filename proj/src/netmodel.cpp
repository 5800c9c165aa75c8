#include "svne/netmodel.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>

namespace svne {

std::optional<int> SubstrateNetwork::find_link(int u, int v) const {
  auto it = link_index_.find(std::minmax(u, v));
  if (it == link_index_.end()) return std::nullopt;
  return it->second;
}

int SubstrateNetwork::add_node(double x, double y, double cpu) {
  if (cpu < 0) throw std::invalid_argument("add_node: negative capacity");
  int id = node_count();
  nodes_.push_back({id, x, y, cpu, cpu});
  adjacency_.emplace_back();
  return id;
}

int SubstrateNetwork::add_link(int u, int v, double bw, double length) {
  if (u == v) throw std::invalid_argument("add_link: self-loop");
  if (u < 0 || u >= node_count() || v < 0 || v >= node_count())
    throw std::invalid_argument("add_link: unknown endpoint");
  if (bw < 0) throw std::invalid_argument("add_link: negative capacity");
  if (find_link(u, v)) throw std::invalid_argument("add_link: duplicate link");
  int id = link_count();
  links_.push_back({id, u, v, bw, bw, length});
  adjacency_[u].push_back(id);
  adjacency_[v].push_back(id);
  link_index_[std::minmax(u, v)] = id;
  return id;
}

bool SubstrateNetwork::connected() const {
  if (node_count() == 0) return true;
  std::vector<char> seen(node_count(), false);
  std::queue<int> frontier;
  frontier.push(0);
  seen[0] = true;
  int count = 1;
  while (!frontier.empty()) {
    int u = frontier.front();
    frontier.pop();
    for (int lid : adjacency_[u]) {
      const auto& l = links_[lid];
      int w = l.from == u ? l.to : l.from;
      if (!seen[w]) {
        seen[w] = true;
        ++count;
        frontier.push(w);
      }
    }
  }
  return count == node_count();
}

double SubstrateNetwork::total_cpu() const {
  double s = 0;
  for (const auto& n : nodes_) s += n.cpu_capacity;
  return s;
}

double SubstrateNetwork::total_bw() const {
  double s = 0;
  for (const auto& l : links_) s += l.bw_capacity;
  return s;
}

double SubstrateNetwork::used_cpu() const {
  double s = 0;
  for (const auto& n : nodes_) s += n.cpu_capacity - n.cpu_free;
  return s;
}

double SubstrateNetwork::used_bw() const {
  double s = 0;
  for (const auto& l : links_) s += l.bw_capacity - l.bw_free;
  return s;
}

void SubstrateNetwork::consume_cpu(int node, double amount) {
  double next = nodes_.at(node).cpu_free - amount;
  if (next < -1e-9 || next > nodes_[node].cpu_capacity + 1e-9)
    throw std::logic_error("consume_cpu: residual out of range");
  nodes_[node].cpu_free = std::clamp(next, 0.0, nodes_[node].cpu_capacity);
}

void SubstrateNetwork::consume_bw(int link, double amount) {
  double next = links_.at(link).bw_free - amount;
  if (next < -1e-9 || next > links_[link].bw_capacity + 1e-9)
    throw std::logic_error("consume_bw: residual out of range");
  links_[link].bw_free = std::clamp(next, 0.0, links_[link].bw_capacity);
}

bool operator==(const SubstrateNetwork& a, const SubstrateNetwork& b) {
  if (a.node_count() != b.node_count() || a.link_count() != b.link_count()) return false;
  for (int i = 0; i < a.node_count(); ++i) {
    const auto &na = a.node(i), &nb = b.node(i);
    if (na.x != nb.x || na.y != nb.y || na.cpu_capacity != nb.cpu_capacity) return false;
  }
  for (int i = 0; i < a.link_count(); ++i) {
    const auto &la = a.link(i), &lb = b.link(i);
    if (std::minmax(la.from, la.to) != std::minmax(lb.from, lb.to) ||
        la.bw_capacity != lb.bw_capacity)
      return false;
  }
  return true;
}

int VirtualNetwork::link_count() const { return static_cast<int>(links().size()); }

std::vector<std::pair<int, int>> VirtualNetwork::links() const {
  std::vector<std::pair<int, int>> out;
  for (int i = 0; i < node_count(); ++i)
    for (int j = i + 1; j < node_count(); ++j)
      if (bw[i][j] > 0) out.emplace_back(i, j);
  return out;
}

double VirtualNetwork::total_cpu() const {
  double s = 0;
  for (double c : cpu) s += c;
  return s;
}

double VirtualNetwork::total_bw() const {
  double s = 0;
  for (int i = 0; i < node_count(); ++i)
    for (int j = i + 1; j < node_count(); ++j) s += bw[i][j];
  return s;
}

void VirtualNetwork::validate() const {
  int n = node_count();
  if (n < 1) throw std::invalid_argument("VirtualNetwork: empty");
  if (static_cast<int>(bw.size()) != n) throw std::invalid_argument("VirtualNetwork: bw shape");
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(bw[i].size()) != n)
      throw std::invalid_argument("VirtualNetwork: bw shape");
    if (bw[i][i] != 0) throw std::invalid_argument("VirtualNetwork: nonzero diagonal");
    if (cpu[i] < 0) throw std::invalid_argument("VirtualNetwork: negative cpu demand");
    for (int j = 0; j < n; ++j) {
      if (bw[i][j] < 0) throw std::invalid_argument("VirtualNetwork: negative demand");
      if (bw[i][j] != bw[j][i]) throw std::invalid_argument("VirtualNetwork: asymmetric demands");
    }
  }
}

bool operator==(const VirtualNetwork& a, const VirtualNetwork& b) {
  return a.cpu == b.cpu && a.bw == b.bw;
}

double LedgerEntry::total_cpu() const {
  double s = 0;
  for (auto& [n, amt] : node_cpu) s += amt;
  return s;
}

double LedgerEntry::total_bw() const {
  double s = 0;
  for (auto& [l, amt] : link_bw) s += amt;
  return s;
}

std::optional<AllocationFailure> allocate(SubstrateNetwork& net, const LedgerEntry& entry) {
  // Validate everything first so failure leaves the network untouched.
  for (const auto& [node, amount] : entry.node_cpu)
    if (net.node(node).cpu_free < amount - 1e-9)
      return AllocationFailure{"node " + std::to_string(node)};
  for (const auto& [link, amount] : entry.link_bw)
    if (net.link(link).bw_free < amount - 1e-9)
      return AllocationFailure{"link " + std::to_string(link)};
  for (const auto& [node, amount] : entry.node_cpu) net.consume_cpu(node, amount);
  for (const auto& [link, amount] : entry.link_bw) net.consume_bw(link, amount);
  return std::nullopt;
}

void release(SubstrateNetwork& net, const LedgerEntry& entry) {
  for (const auto& [node, amount] : entry.node_cpu) net.consume_cpu(node, -amount);
  for (const auto& [link, amount] : entry.link_bw) net.consume_bw(link, -amount);
}

SubstrateNetwork waxman_generate(int node_count, int link_count, double bw_low, double bw_high,
                                 const std::vector<double>& cpu_options, double waxman_alpha,
                                 double waxman_beta, std::uint64_t seed) {
  if (node_count < 2) throw std::invalid_argument("waxman_generate: need at least 2 nodes");
  long max_links = static_cast<long>(node_count) * (node_count - 1) / 2;
  if (link_count < node_count - 1 || link_count > max_links)
    throw std::invalid_argument("waxman_generate: link count outside simple-graph range");
  if (bw_low > bw_high) throw std::invalid_argument("waxman_generate: bw_low > bw_high");
  if (cpu_options.empty()) throw std::invalid_argument("waxman_generate: no cpu options");

  Rng rng = Rng::stream(seed, "topology");
  const int kMaxAttempts = 200;
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    SubstrateNetwork net;
    for (int i = 0; i < node_count; ++i)
      net.add_node(rng.uniform01(), rng.uniform01(), rng.pick(cpu_options));

    double max_dist = 0;
    for (int i = 0; i < node_count; ++i)
      for (int j = i + 1; j < node_count; ++j)
        max_dist = std::max(max_dist, std::hypot(net.node(i).x - net.node(j).x,
                                                 net.node(i).y - net.node(j).y));
    if (max_dist == 0) max_dist = 1;

    // Waxman acceptance over shuffled candidate pairs, repeated until the
    // exact link count is hit.
    std::vector<std::pair<int, int>> pairs;
    pairs.reserve(max_links);
    for (int i = 0; i < node_count; ++i)
      for (int j = i + 1; j < node_count; ++j) pairs.emplace_back(i, j);
    rng.shuffle(pairs);

    int added = 0;
    for (int pass = 0; pass < 1000 && added < link_count; ++pass) {
      for (const auto& [u, v] : pairs) {
        if (added >= link_count) break;
        if (net.find_link(u, v)) continue;
        double dist = std::hypot(net.node(u).x - net.node(v).x, net.node(u).y - net.node(v).y);
        double p = waxman_alpha * std::exp(-dist / (waxman_beta * max_dist));
        if (rng.uniform01() < p) {
          net.add_link(u, v, rng.uniform(bw_low, bw_high), dist);
          ++added;
        }
      }
    }
    if (added == link_count && net.connected()) return net;
  }
  throw std::runtime_error("waxman_generate: failed to produce a connected topology");
}

VirtualNetwork generate_vn_request(int size_low, int size_high, double connectivity,
                                   const std::vector<double>& cpu_set, double bw_low,
                                   double bw_high, std::uint64_t seed) {
  if (size_low < 1 || size_low > size_high)
    throw std::invalid_argument("generate_vn_request: bad size bounds");
  if (connectivity <= 0 || connectivity > 1)
    throw std::invalid_argument("generate_vn_request: connectivity outside (0, 1]");
  if (cpu_set.empty()) throw std::invalid_argument("generate_vn_request: empty cpu set");
  if (bw_low > bw_high) throw std::invalid_argument("generate_vn_request: bw_low > bw_high");

  Rng rng = Rng::stream(seed, "demands");
  int n = static_cast<int>(rng.uniform_int(size_low, size_high));
  VirtualNetwork vn;
  vn.cpu.resize(n);
  vn.coord_x.resize(n);
  vn.coord_y.resize(n);
  vn.bw.assign(n, std::vector<double>(n, 0.0));
  for (int i = 0; i < n; ++i) {
    vn.cpu[i] = rng.pick(cpu_set);
    vn.coord_x[i] = rng.uniform01();
    vn.coord_y[i] = rng.uniform01();
  }
  if (n == 1) return vn;

  // Independent pair sampling at the target density, then a random spanning
  // tree over the components to guarantee connectivity.
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (rng.uniform01() < connectivity) {
        double b = rng.uniform(bw_low, bw_high);
        vn.bw[i][j] = vn.bw[j][i] = b;
      }

  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  rng.shuffle(order);
  std::vector<int> component(n);
  for (int i = 0; i < n; ++i) component[i] = i;
  auto find_root = [&](int x) {
    while (component[x] != x) x = component[x] = component[component[x]];
    return x;
  };
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (vn.bw[i][j] > 0) component[find_root(i)] = find_root(j);
  for (int idx = 1; idx < n; ++idx) {
    int a = order[idx - 1], b = order[idx];
    if (find_root(a) != find_root(b)) {
      double bw = rng.uniform(bw_low, bw_high);
      vn.bw[a][b] = vn.bw[b][a] = bw;
      component[find_root(a)] = find_root(b);
    }
  }
  vn.validate();
  return vn;
}

}  // namespace svne
