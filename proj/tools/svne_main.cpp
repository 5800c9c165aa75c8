// Batch command-line surface: topology generation, enhancement, one-shot
// embedding, and the simulation/comparison runs, all reproducible from a
// config file plus seed.

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "svne/brite.hpp"
#include "svne/config.hpp"
#include "svne/serialize.hpp"
#include "svne/simulate.hpp"

namespace fs = std::filesystem;
using namespace svne;

namespace {

// Exit codes: 0 ok, 2 config/file problems, 3 infeasible embedding.
constexpr int kOk = 0;
constexpr int kConfigError = 2;
constexpr int kInfeasible = 3;

void write_file(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_manifest(const fs::path& out_dir, const ScenarioConfig& config) {
  write_file(out_dir / "manifest.cfg", print_config(config));
}

ScenarioConfig resolve_config(const std::string& config_path, std::uint64_t* seed_flag,
                              const std::string* strategy_flag) {
  ScenarioConfig config;
  if (!config_path.empty()) config = load_config_file(config_path);
  if (seed_flag) config.master_seed = *seed_flag;
  if (strategy_flag) {
    if (*strategy_flag == "cnd")
      config.strategy = Strategy::kCnd;
    else if (*strategy_flag == "fip")
      config.strategy = Strategy::kFip;
    else
      throw ConfigError("strategy must be cnd or fip");
  }
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Survivable virtual network embedding engine"};
  app.require_subcommand(0, 1);

  bool print_defaults = false;
  app.add_flag("--print-config", print_defaults, "print the default configuration and exit");

  // gen-substrate
  auto* gen_substrate = app.add_subcommand("gen-substrate", "generate a substrate topology");
  int gs_nodes = 100, gs_links = 500;
  double gs_bw_low = 50, gs_bw_high = 150, gs_alpha = 0.15, gs_beta = 0.2;
  std::vector<double> gs_cpu = {3720, 5320};
  std::uint64_t gs_seed = 1;
  std::string gs_out = "substrate.brite";
  gen_substrate->add_option("--nodes", gs_nodes);
  gen_substrate->add_option("--links", gs_links);
  gen_substrate->add_option("--bw-low", gs_bw_low);
  gen_substrate->add_option("--bw-high", gs_bw_high);
  gen_substrate->add_option("--cpu-options", gs_cpu)->delimiter(',');
  gen_substrate->add_option("--waxman-alpha", gs_alpha);
  gen_substrate->add_option("--waxman-beta", gs_beta);
  gen_substrate->add_option("--seed", gs_seed);
  gen_substrate->add_option("--out", gs_out);

  // gen-vns
  auto* gen_vns = app.add_subcommand("gen-vns", "generate virtual network requests");
  int gv_count = 10, gv_size_low = 2, gv_size_high = 20;
  double gv_connectivity = 0.5, gv_bw_low = 1, gv_bw_high = 50;
  std::vector<double> gv_cpu = {2500, 2000, 1000, 500};
  std::uint64_t gv_seed = 1;
  std::string gv_out = "vns";
  gen_vns->add_option("--count", gv_count);
  gen_vns->add_option("--size-low", gv_size_low);
  gen_vns->add_option("--size-high", gv_size_high);
  gen_vns->add_option("--connectivity", gv_connectivity);
  gen_vns->add_option("--cpu-set", gv_cpu)->delimiter(',');
  gen_vns->add_option("--bw-low", gv_bw_low);
  gen_vns->add_option("--bw-high", gv_bw_high);
  gen_vns->add_option("--seed", gv_seed);
  gen_vns->add_option("--out", gv_out, "output directory");

  // enhance
  auto* enhance_cmd = app.add_subcommand("enhance", "enhance one VN with backup resources");
  std::string en_vn, en_out = "enhanced.json", en_config, en_trace;
  double en_alpha = 1.0;
  std::uint64_t en_seed = 1;
  enhance_cmd->add_option("--vn", en_vn)->required();
  enhance_cmd->add_option("--alpha", en_alpha);
  enhance_cmd->add_option("--config", en_config);
  enhance_cmd->add_option("--seed", en_seed);
  enhance_cmd->add_option("--out", en_out);
  enhance_cmd->add_option("--round-csv", en_trace, "per-round swarm statistics CSV");

  // embed
  auto* embed_cmd = app.add_subcommand("embed", "enhance and embed one VN");
  std::string em_vn, em_substrate, em_out = "embedding.json", em_config, em_strategy = "cnd";
  std::string em_decision;
  std::uint64_t em_seed = 1;
  embed_cmd->add_option("--vn", em_vn)->required();
  embed_cmd->add_option("--substrate", em_substrate)->required();
  embed_cmd->add_option("--config", em_config);
  embed_cmd->add_option("--strategy", em_strategy)->check(CLI::IsMember({"cnd", "fip"}));
  embed_cmd->add_option("--seed", em_seed);
  embed_cmd->add_option("--out", em_out);
  embed_cmd->add_option("--decision-csv", em_decision, "one-line accept/reject record");

  // simulate
  auto* simulate_cmd = app.add_subcommand("simulate", "run one scenario");
  std::string sim_config, sim_out = "sim_out";
  std::uint64_t sim_seed = 0;
  bool sim_seed_set = false;
  simulate_cmd->add_option("--config", sim_config);
  simulate_cmd->add_option("--seed", sim_seed)->each([&](const std::string&) {
    sim_seed_set = true;
  });
  simulate_cmd->add_option("--out", sim_out);

  // compare
  auto* compare_cmd = app.add_subcommand("compare", "run CND and FIP on the same workload");
  std::string cmp_config, cmp_out = "compare_out";
  std::uint64_t cmp_seed = 0;
  bool cmp_seed_set = false;
  compare_cmd->add_option("--config", cmp_config);
  compare_cmd->add_option("--seed", cmp_seed)->each([&](const std::string&) {
    cmp_seed_set = true;
  });
  compare_cmd->add_option("--out", cmp_out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (print_defaults) {
      std::cout << print_config(ScenarioConfig{});
      return kOk;
    }
    if (app.get_subcommands().empty()) {
      std::cerr << "error: a subcommand is required (see --help)\n";
      return kConfigError;
    }

    if (gen_substrate->parsed()) {
      auto net = waxman_generate(gs_nodes, gs_links, gs_bw_low, gs_bw_high, gs_cpu, gs_alpha,
                                 gs_beta, gs_seed);
      write_file(gs_out, write_brite(to_brite(net)));
      std::cout << "substrate: " << net.node_count() << " nodes, " << net.link_count()
                << " links -> " << gs_out << "\n";
      return kOk;
    }

    if (gen_vns->parsed()) {
      fs::create_directories(gv_out);
      for (int i = 0; i < gv_count; ++i) {
        auto vn = generate_vn_request(gv_size_low, gv_size_high, gv_connectivity, gv_cpu,
                                      gv_bw_low, gv_bw_high,
                                      mix_seed(gv_seed, "vn-" + std::to_string(i)));
        vn.id = i;
        write_file(fs::path(gv_out) / ("vn_" + std::to_string(i) + ".brite"),
                   write_brite(to_brite(vn)));
      }
      std::cout << "wrote " << gv_count << " VN files to " << gv_out << "\n";
      return kOk;
    }

    if (enhance_cmd->parsed()) {
      ScenarioConfig config = resolve_config(en_config, &en_seed, nullptr);
      config.alpha = en_alpha;
      auto vn = vn_from_brite(parse_brite(read_file(en_vn)));
      CndConfig swarm = config.swarm;
      swarm.seed = mix_seed(config.master_seed, "swarm-cli");
      CndResult stats;
      EnhancedVn enhanced = enhance_vn(vn, config.alpha, config.solver, swarm, &stats);
      EnhancedVn fip = fip_enhance(vn, config.alpha);
      if (!en_trace.empty()) write_round_csv(stats, en_trace);
      write_file(en_out, enhanced_to_json(enhanced, fip.objective()));
      std::cout << "objective " << format_double(enhanced.objective()) << " vs fip "
                << format_double(fip.objective()) << " -> " << en_out << "\n";
      return kOk;
    }

    if (embed_cmd->parsed()) {
      ScenarioConfig config = resolve_config(em_config, &em_seed, &em_strategy);
      auto substrate = substrate_from_brite(parse_brite(read_file(em_substrate)));
      auto vn = vn_from_brite(parse_brite(read_file(em_vn)));
      auto write_decision = [&](const std::string& outcome, double objective, int paths) {
        if (em_decision.empty()) return;
        write_file(em_decision, "vn,outcome,objective,paths_used\n" + em_vn + "," + outcome +
                                    "," + format_double(objective) + "," +
                                    std::to_string(paths) + "\n");
      };
      CndConfig swarm = config.swarm;
      swarm.seed = mix_seed(config.master_seed, "swarm-cli");
      EnhancedVn enhanced = config.strategy == Strategy::kCnd
                                ? enhance_vn(vn, config.alpha, config.solver, swarm)
                                : fip_enhance(vn, config.alpha);

      auto candidates = select_candidates(substrate, enhanced, config.candidate_cap);
      double min_need = std::numeric_limits<double>::infinity();
      int nu = enhanced.slot_count();
      std::vector<std::pair<int, int>> pairs;
      for (int i = 0; i < nu; ++i)
        for (int j = i + 1; j < nu; ++j)
          if (enhanced.b_e[i][j] > 0) {
            min_need = std::min(min_need, enhanced.b_e[i][j] / (config.eta - 1));
            for (int a : candidates[i])
              for (int b : candidates[j])
                if (a != b) pairs.push_back(std::minmax(a, b));
          }
      if (!std::isfinite(min_need)) min_need = 0;
      std::sort(pairs.begin(), pairs.end());
      pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
      PathTable table = build_path_table(substrate, pairs, config.eta, min_need);

      std::string reason;
      auto problem =
          build_embedding_lp(enhanced, substrate, config.eta, table, candidates, &reason);
      if (!problem) {
        write_decision("reject", 0.0, 0);
        std::cerr << "error: infeasible: " << reason << "\n";
        return kInfeasible;
      }
      Rounder rounder = [&](std::span<const double> primal) {
        auto map = round_assignment(primal, *problem, enhanced, substrate, table);
        if (!map) return std::numeric_limits<double>::infinity();
        return realized_cost(*map, enhanced, table, config.eta);
      };
      CndResult result = cnd_solve(problem->lp, swarm, config.solver, rounder);
      if (!std::isfinite(result.best_objective)) {
        write_decision("reject", 0.0, 0);
        std::cerr << "error: infeasible: no feasible assignment found\n";
        return kInfeasible;
      }
      auto map = round_assignment(result.best_primal, *problem, enhanced, substrate, table);
      if (!map) {
        write_decision("reject", 0.0, 0);
        std::cerr << "error: infeasible: rounding rejected the relaxed solution\n";
        return kInfeasible;
      }
      auto embedding = allocate_embedding(substrate, enhanced, *map, config.eta, table, &reason);
      if (!embedding) {
        write_decision("reject", 0.0, 0);
        std::cerr << "error: infeasible: " << reason << "\n";
        return kInfeasible;
      }
      int paths_used = 0;
      for (const auto& route : embedding->routes)
        paths_used += static_cast<int>(route.paths.size());
      write_decision("accept", embedding->objective, paths_used);
      write_file(em_out, embedding_to_json(*embedding));
      std::cout << "accept objective " << format_double(embedding->objective) << " -> " << em_out
                << "\n";
      return kOk;
    }

    if (simulate_cmd->parsed()) {
      ScenarioConfig config = resolve_config(sim_config, sim_seed_set ? &sim_seed : nullptr,
                                             nullptr);
      fs::create_directories(sim_out);
      write_manifest(sim_out, config);
      Metrics metrics = run_scenario(config);
      write_file(fs::path(sim_out) / ("decisions_" + to_string(config.strategy) + ".csv"),
                 decision_csv(metrics));
      std::cout << "accept_ratio " << format_double(metrics.accept_ratio()) << " revenue "
                << format_double(metrics.revenue) << " -> " << sim_out << "\n";
      return kOk;
    }

    if (compare_cmd->parsed()) {
      ScenarioConfig config = resolve_config(cmp_config, cmp_seed_set ? &cmp_seed : nullptr,
                                             nullptr);
      fs::create_directories(cmp_out);
      write_manifest(cmp_out, config);
      auto [cnd, fip] = compare_strategies(config);
      write_file(fs::path(cmp_out) / "decisions_cnd.csv", decision_csv(cnd));
      write_file(fs::path(cmp_out) / "decisions_fip.csv", decision_csv(fip));
      write_file(fs::path(cmp_out) / "compare.csv", comparison_csv(cnd, fip));
      std::cout << "cnd accept_ratio " << format_double(cnd.accept_ratio()) << " revenue "
                << format_double(cnd.revenue) << "\n";
      std::cout << "fip accept_ratio " << format_double(fip.accept_ratio()) << " revenue "
                << format_double(fip.revenue) << "\n";
      return kOk;
    }
  } catch (const ConfigError& e) {
    std::cerr << "error: config: " << e.what() << "\n";
    return kConfigError;
  } catch (const BriteParseError& e) {
    std::cerr << "error: parse: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfigError;
  }
  return kOk;
}
