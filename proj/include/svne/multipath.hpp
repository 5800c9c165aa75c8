#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "svne/enhance.hpp"
#include "svne/netmodel.hpp"
#include "svne/neurolp.hpp"

namespace svne {

// Eta mutually edge-disjoint simple paths between one substrate pair, with
// the aggregate length and the bottleneck free bandwidth over every
// participating link.
struct PathSet {
  int k = 0, l = 0;
  std::vector<std::vector<int>> paths;       // node sequences
  std::vector<std::vector<int>> path_links;  // matching link-id sequences
  int length = 0;                            // total hop count
  double band = 0.0;                         // min free bw over the union
};

// Minimum-total-hop edge-disjoint path system via successive shortest-path
// augmentation on a unit-capacity transform; links with free bandwidth below
// min_band do not participate. nullopt when fewer than eta disjoint paths
// exist.
std::optional<PathSet> disjoint_paths(const SubstrateNetwork& net, int k, int l, int eta,
                                      double min_band);

using PathTable = std::map<std::pair<int, int>, PathSet>;

// Table keyed by normalized (k, l); pairs without eta disjoint paths are
// absent. Recompute per request: band depends on live residuals.
PathTable build_path_table(const SubstrateNetwork& net,
                           const std::vector<std::pair<int, int>>& pairs, int eta,
                           double min_band = 0.0);

// CPU-feasible candidate nodes per slot, ranked by residual CPU times
// adjacent residual bandwidth, capped at cap_per_slot.
std::vector<std::vector<int>> select_candidates(const SubstrateNetwork& net,
                                                const EnhancedVn& enhanced, int cap_per_slot);

// Linearized multi-path embedding problem over stacked (X, Y) plus the layout
// needed to interpret a relaxed solution.
struct EmbeddingProblem {
  GeneralFormLp lp;
  int eta = 3;
  std::vector<std::vector<int>> candidates;  // slot -> substrate node ids
  std::vector<int> x_offset;                 // slot -> first x variable
  struct Link {
    int i, j;        // slot pair, i < j
    double demand;   // enhanced bandwidth b_e[i][j]
    int sum_row;     // index of its mass row (diagnostics)
  };
  std::vector<Link> links;
  struct YVar {
    int link;        // index into links
    int ti, tj;      // candidate positions within the two slots
    int var;         // LP variable index
  };
  std::vector<YVar> y_vars;

  int x_var(int slot, int t) const { return x_offset[slot] + t; }
};

// nullopt with a reason when some slot has no candidate or some virtual link
// has no usable candidate pair.
std::optional<EmbeddingProblem> build_embedding_lp(const EnhancedVn& enhanced,
                                                   const SubstrateNetwork& net, int eta,
                                                   const PathTable& table,
                                                   const std::vector<std::vector<int>>& candidates,
                                                   std::string* reason = nullptr);

// Maximum-weight matching on the relaxed X block, then bounded local repair
// against CPU and path-bandwidth feasibility. nullopt = rejection.
std::optional<std::vector<int>> round_assignment(std::span<const double> relaxed_primal,
                                                 const EmbeddingProblem& problem,
                                                 const EnhancedVn& enhanced,
                                                 const SubstrateNetwork& net,
                                                 const PathTable& table);

// Realized cost of a node map: sum over links of Length(paths) * demand;
// +infinity if some link has no usable path set.
double realized_cost(const std::vector<int>& node_map, const EnhancedVn& enhanced,
                     const PathTable& table, int eta);

struct Embedding {
  int vn_id = 0;
  int eta = 3;
  std::vector<int> node_map;  // slot -> substrate node
  struct Route {
    int i, j;            // slot pair
    double demand;       // original (enhanced) link bandwidth
    double per_path_bw;  // demand / (eta - 1)
    std::vector<std::vector<int>> paths;
    std::vector<std::vector<int>> path_links;
  };
  std::vector<Route> routes;
  double objective = 0.0;
  LedgerEntry ledger;
};

// Atomically reserves CPU and per-path bandwidth demand/(eta-1); on any
// shortfall nothing is consumed and the first violated resource is reported.
std::optional<Embedding> allocate_embedding(SubstrateNetwork& net, const EnhancedVn& enhanced,
                                            const std::vector<int>& node_map, int eta,
                                            const PathTable& table,
                                            std::string* reject_reason = nullptr);

// True iff every virtual link keeps reserved capacity >= its demand on paths
// avoiding the failed link.
bool survives_link_failure(const Embedding& embedding, int failed_link_id);

}  // namespace svne
