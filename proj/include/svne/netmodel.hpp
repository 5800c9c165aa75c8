#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "svne/rng.hpp"

namespace svne {

struct SubstrateNode {
  int id = 0;
  double x = 0.0, y = 0.0;
  double cpu_capacity = 0.0;
  double cpu_free = 0.0;
};

struct SubstrateLink {
  int id = 0;
  int from = 0, to = 0;
  double bw_capacity = 0.0;
  double bw_free = 0.0;
  double length = 0.0;  // geometric, carried for persistence only
};

// Weighted undirected simple graph with residual-capacity bookkeeping.
// Topology is immutable after generation; only the residual fields mutate,
// and only through allocate/release (single writer).
class SubstrateNetwork {
 public:
  int node_count() const { return static_cast<int>(nodes_.size()); }
  int link_count() const { return static_cast<int>(links_.size()); }

  const SubstrateNode& node(int id) const { return nodes_.at(id); }
  const SubstrateLink& link(int id) const { return links_.at(id); }
  const std::vector<SubstrateNode>& nodes() const { return nodes_; }
  const std::vector<SubstrateLink>& links() const { return links_; }
  const std::vector<int>& links_of(int node) const { return adjacency_.at(node); }

  // Link id for the unordered pair {u, v}, if present.
  std::optional<int> find_link(int u, int v) const;

  int add_node(double x, double y, double cpu);
  int add_link(int u, int v, double bw, double length = 0.0);

  bool connected() const;

  double total_cpu() const;
  double total_bw() const;
  double used_cpu() const;
  double used_bw() const;

  // Residual mutation, used by the allocation ops below.
  void consume_cpu(int node, double amount);
  void consume_bw(int link, double amount);

 private:
  std::vector<SubstrateNode> nodes_;
  std::vector<SubstrateLink> links_;
  std::vector<std::vector<int>> adjacency_;
  std::map<std::pair<int, int>, int> link_index_;
};

bool operator==(const SubstrateNetwork& a, const SubstrateNetwork& b);

// Virtual network request: CPU demand per node, symmetric bandwidth demand
// matrix (zero diagonal), plus workload timing.
struct VirtualNetwork {
  int id = 0;
  std::vector<double> cpu;
  std::vector<double> coord_x, coord_y;
  std::vector<std::vector<double>> bw;
  double arrival_time = 0.0;
  double lifetime = 0.0;

  int node_count() const { return static_cast<int>(cpu.size()); }
  double demand(int i, int j) const { return bw[i][j]; }
  int link_count() const;
  // (i, j) pairs with i < j and positive demand.
  std::vector<std::pair<int, int>> links() const;
  double total_cpu() const;
  double total_bw() const;  // each undirected link counted once
  void validate() const;    // symmetry, zero diagonal, nonnegative demands
};

bool operator==(const VirtualNetwork& a, const VirtualNetwork& b);

// Resources reserved for one accepted VN. Releasing an entry restores the
// residuals it consumed, exactly.
struct LedgerEntry {
  int vn_id = 0;
  std::vector<std::pair<int, double>> node_cpu;  // (substrate node, amount)
  std::vector<std::pair<int, double>> link_bw;   // (substrate link id, amount)
  double total_cpu() const;
  double total_bw() const;
};

struct AllocationFailure {
  std::string resource;  // first violated resource, e.g. "node 3" / "link 7"
};

// Atomic: either every resource in the entry is consumed or nothing is.
std::optional<AllocationFailure> allocate(SubstrateNetwork& net, const LedgerEntry& entry);
void release(SubstrateNetwork& net, const LedgerEntry& entry);

// Waxman random topology with exact node/link counts; bandwidths uniform in
// [bw_low, bw_high]; node CPUs drawn uniformly from cpu_options.
SubstrateNetwork waxman_generate(int node_count, int link_count, double bw_low, double bw_high,
                                 const std::vector<double>& cpu_options, double waxman_alpha,
                                 double waxman_beta, std::uint64_t seed);

// Connected random VN whose size is uniform on [size_low, size_high] and whose
// link density approximates `connectivity`.
VirtualNetwork generate_vn_request(int size_low, int size_high, double connectivity,
                                   const std::vector<double>& cpu_set, double bw_low,
                                   double bw_high, std::uint64_t seed);

}  // namespace svne
