#include "svne/serialize.hpp"

#include <json.hpp>

namespace svne {

using nlohmann::json;

std::string enhanced_to_json(const EnhancedVn& enhanced, double fip_objective) {
  json doc;
  json base;
  base["cpu"] = enhanced.base.cpu;
  json base_links = json::array();
  for (const auto& [i, j] : enhanced.base.links())
    base_links.push_back({i, j, enhanced.base.bw[i][j]});
  base["links"] = base_links;
  doc["base"] = base;
  doc["alpha"] = enhanced.alpha;
  doc["c_e"] = enhanced.c_e;
  json upper = json::array();
  int nu = enhanced.slot_count();
  for (int i = 0; i < nu; ++i)
    for (int j = i + 1; j < nu; ++j)
      if (enhanced.b_e[i][j] > 0) upper.push_back({i, j, enhanced.b_e[i][j]});
  doc["b_e_upper"] = upper;
  doc["plans"] = enhanced.plans;
  doc["objective"] = enhanced.objective();
  doc["fip_objective"] = fip_objective;
  doc["fip_fallback"] = enhanced.fip_fallback;
  return doc.dump(2) + "\n";
}

EnhancedVn enhanced_from_json(const std::string& text) {
  json doc = json::parse(text);
  EnhancedVn e;
  e.base.cpu = doc.at("base").at("cpu").get<std::vector<double>>();
  int n = e.base.node_count();
  e.base.coord_x.assign(n, 0.0);
  e.base.coord_y.assign(n, 0.0);
  e.base.bw.assign(n, std::vector<double>(n, 0.0));
  for (const auto& link : doc.at("base").at("links")) {
    int i = link.at(0).get<int>(), j = link.at(1).get<int>();
    double b = link.at(2).get<double>();
    e.base.bw.at(i).at(j) = b;
    e.base.bw.at(j).at(i) = b;
  }
  e.alpha = doc.at("alpha").get<double>();
  e.c_e = doc.at("c_e").get<std::vector<double>>();
  int nu = e.slot_count();
  e.b_e.assign(nu, std::vector<double>(nu, 0.0));
  for (const auto& entry : doc.at("b_e_upper")) {
    int i = entry.at(0).get<int>(), j = entry.at(1).get<int>();
    double b = entry.at(2).get<double>();
    e.b_e.at(i).at(j) = b;
    e.b_e.at(j).at(i) = b;
  }
  e.plans = doc.at("plans").get<std::vector<std::vector<int>>>();
  e.fip_fallback = doc.value("fip_fallback", false);
  return e;
}

std::string embedding_to_json(const Embedding& embedding) {
  json doc;
  doc["vn_id"] = embedding.vn_id;
  doc["eta"] = embedding.eta;
  doc["node_map"] = embedding.node_map;
  doc["objective"] = embedding.objective;
  json routes = json::array();
  for (const auto& route : embedding.routes) {
    json r;
    r["slots"] = {route.i, route.j};
    r["demand"] = route.demand;
    r["per_path_bw"] = route.per_path_bw;
    r["paths"] = route.paths;
    routes.push_back(std::move(r));
  }
  doc["routes"] = routes;
  return doc.dump(2) + "\n";
}

}  // namespace svne
