#pragma once

// Unit-capacity undirected max-flow (BFS augmentation): by Menger's theorem
// the value is the edge-disjoint path count, used to audit disjoint_paths.

#include <queue>
#include <vector>

#include "svne/netmodel.hpp"

namespace oracle {

inline int unit_max_flow(const svne::SubstrateNetwork& net, int source, int sink,
                         double min_band = 0.0) {
  // cap[e] in each direction; an undirected unit edge is one unit total,
  // modeled as antiparallel arcs with joint residual bookkeeping.
  int m = net.link_count();
  std::vector<int> flow(m, 0);  // -1, 0, +1 along from->to
  std::vector<char> usable(m);
  for (int e = 0; e < m; ++e) usable[e] = net.link(e).bw_free >= min_band;
  int value = 0;
  while (true) {
    std::vector<int> pred_link(net.node_count(), -1), pred_dir(net.node_count(), 0);
    std::vector<char> seen(net.node_count(), false);
    std::queue<int> q;
    q.push(source);
    seen[source] = true;
    while (!q.empty() && !seen[sink]) {
      int u = q.front();
      q.pop();
      for (int e : net.links_of(u)) {
        if (!usable[e]) continue;
        const auto& link = net.link(e);
        int w = link.from == u ? link.to : link.from;
        int dir = link.from == u ? +1 : -1;
        if (flow[e] == dir) continue;  // saturated this way
        if (seen[w]) continue;
        seen[w] = true;
        pred_link[w] = e;
        pred_dir[w] = dir;
        q.push(w);
      }
    }
    if (!seen[sink]) return value;
    for (int u = sink; u != source;) {
      int e = pred_link[u];
      flow[e] += pred_dir[u];
      const auto& link = net.link(e);
      u = link.from == u ? link.to : link.from;
    }
    ++value;
  }
}

}  // namespace oracle
