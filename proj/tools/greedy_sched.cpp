// Command-line front end: queueing simulation, stability-region checks,
// priority assignment, and independent-set decompositions on conflict graphs.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gsched/conflict_graph.hpp"
#include "gsched/em_assign.hpp"
#include "gsched/sim.hpp"
#include "gsched/stability.hpp"

namespace {

using gsched::ConflictGraph;

std::vector<double> resolve_rates(const ConflictGraph& g, const std::string& rates_path,
                                  double uniform) {
  if (!rates_path.empty()) return gsched::load_rates_csv(rates_path, g.num_links());
  if (uniform >= 0.0)
    return std::vector<double>(static_cast<std::size_t>(g.num_links()), uniform);
  throw std::invalid_argument("provide --rates <csv> or --uniform <r>");
}

std::vector<double> parse_rate_list(const std::string& text) {
  std::vector<double> rates;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    rates.push_back(std::stod(item));
  }
  return rates;
}

void write_or_print(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output file " + path);
  out << text;
}

std::string bool_str(bool b) { return b ? "true" : "false"; }

std::string perm_str(const gsched::PriorityVector& p) {
  std::string s;
  for (int i = 0; i < p.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(p.ranks()[i]);
  }
  return s;
}

void print_verdict(const std::string& region, const gsched::RegionVerdict& v) {
  std::cout << "region=" << region << " member=" << bool_str(v.member)
            << " value=" << v.value << " boundary=" << bool_str(v.boundary);
  if (v.certificate) std::cout << " certificate=" << perm_str(*v.certificate);
  std::cout << '\n';
}

int run(int argc, char** argv) {
  CLI::App app{"greedy maximal scheduling on conflict graphs"};
  app.require_subcommand(1);

  // simulate
  auto* sim_cmd = app.add_subcommand("simulate", "run the queueing simulator");
  std::string config_path, out_path, summary_path;
  gsched::SimConfig config;
  bool horizon_set = false, runs_set = false, sample_set = false, seed_set = false;
  std::string graph_arg, sched_arg, arr_arg;
  long long horizon_arg = 0, sample_arg = 0;
  int runs_arg = 0;
  std::uint64_t seed_arg = 0;
  sim_cmd->add_option("--config", config_path, "JSON config file (flags override)");
  sim_cmd->add_option("--graph", graph_arg, "ring:<n> | bipartite8 | edge-list path");
  sim_cmd->add_option("--scheduler", sched_arg,
                      "lqf | lqf:random | sp:<file> | spk:<file> | maxweight");
  sim_cmd->add_option("--arrivals", arr_arg,
                      "bernoulli:<r|csv> | ring6adv:[rho:]eps | bipadv:rho:eps | trace:<f>");
  sim_cmd->add_option("--horizon", horizon_arg, "slots per run")
      ->each([&](const std::string&) { horizon_set = true; });
  sim_cmd->add_option("--runs", runs_arg, "independent runs")
      ->each([&](const std::string&) { runs_set = true; });
  sim_cmd->add_option("--sample-every", sample_arg, "sampling stride in slots")
      ->each([&](const std::string&) { sample_set = true; });
  sim_cmd->add_option("--seed", seed_arg, "base seed; run r uses seed+r")
      ->each([&](const std::string&) { seed_set = true; });
  sim_cmd->add_option("--out", out_path, "trace CSV (run,slot,max_queue,total_queue)");
  sim_cmd->add_option("--summary", summary_path, "summary CSV path");

  // sweep
  auto* sweep_cmd = app.add_subcommand("sweep", "replicate over a list of uniform rates");
  std::string sweep_rates;
  sweep_cmd->add_option("--config", config_path, "JSON config file (flags override)");
  sweep_cmd->add_option("--graph", graph_arg, "graph specifier");
  sweep_cmd->add_option("--scheduler", sched_arg, "scheduler specifier");
  sweep_cmd->add_option("--arrivals", arr_arg, "arrival family to re-rate per point");
  sweep_cmd->add_option("--rates", sweep_rates, "comma-separated uniform rates")
      ->required();
  sweep_cmd->add_option("--horizon", horizon_arg, "slots per run")
      ->each([&](const std::string&) { horizon_set = true; });
  sweep_cmd->add_option("--runs", runs_arg, "independent runs per point")
      ->each([&](const std::string&) { runs_set = true; });
  sweep_cmd->add_option("--sample-every", sample_arg, "sampling stride in slots")
      ->each([&](const std::string&) { sample_set = true; });
  sweep_cmd->add_option("--seed", seed_arg, "base seed")
      ->each([&](const std::string&) { seed_set = true; });
  sweep_cmd->add_option("--out", out_path, "summary CSV path (default stdout)");

  // check
  auto* check_cmd = app.add_subcommand("check", "stability-region membership tests");
  std::string check_graph, check_rates, check_priority, check_spk;
  double check_uniform = -1.0, check_tol = 1e-9;
  check_cmd->add_option("--graph", check_graph, "graph specifier")->required();
  check_cmd->add_option("--rates", check_rates, "CSV link,rate");
  check_cmd->add_option("--uniform", check_uniform, "uniform per-link rate");
  check_cmd->add_option("--priority", check_priority,
                        "priority file: one line of n ranks (adds region=priority)");
  check_cmd->add_option("--spk", check_spk, "SP-K params JSON (adds region=sp)");
  check_cmd->add_option("--tol", check_tol, "boundary tolerance");

  // assign-em
  auto* em_cmd = app.add_subcommand("assign-em", "two-priority assignment heuristic");
  std::string em_graph, em_rates, em_out;
  double em_uniform = -1.0, em_tol = 1e-6;
  int em_max_iter = 100, em_restarts = 0;
  std::uint64_t em_seed = 1;
  em_cmd->add_option("--graph", em_graph, "graph specifier")->required();
  em_cmd->add_option("--rates", em_rates, "CSV link,rate");
  em_cmd->add_option("--uniform", em_uniform, "uniform per-link rate");
  em_cmd->add_option("--tol", em_tol, "convergence tolerance on t");
  em_cmd->add_option("--max-iter", em_max_iter, "iteration cap");
  em_cmd->add_option("--restarts", em_restarts, "seeded random restarts");
  em_cmd->add_option("--seed", em_seed, "restart seed");
  em_cmd->add_option("--out", em_out, "output JSON path (default stdout)");

  // decompose
  auto* dec_cmd = app.add_subcommand("decompose",
                                     "independent-set decomposition to SP-K params");
  std::string dec_graph, dec_rates, dec_out;
  double dec_uniform = -1.0;
  int dec_block = 100;
  dec_cmd->add_option("--graph", dec_graph, "graph specifier")->required();
  dec_cmd->add_option("--rates", dec_rates, "CSV link,rate");
  dec_cmd->add_option("--uniform", dec_uniform, "uniform per-link rate");
  dec_cmd->add_option("--block", dec_block, "block length in slots");
  dec_cmd->add_option("--out", dec_out, "output JSON path (default stdout)");

  CLI11_PARSE(app, argc, argv);

  if (sim_cmd->parsed() || sweep_cmd->parsed()) {
    if (!config_path.empty()) config = gsched::SimConfig::load(config_path);
    if (!graph_arg.empty()) config.graph = graph_arg;
    if (!sched_arg.empty()) config.scheduler = sched_arg;
    if (!arr_arg.empty()) config.arrivals = arr_arg;
    if (horizon_set) config.horizon = horizon_arg;
    if (runs_set) config.runs = runs_arg;
    if (sample_set) config.sample_every = sample_arg;
    if (seed_set) config.seed = seed_arg;
    if (config.graph.empty() || config.scheduler.empty() || config.arrivals.empty())
      throw std::invalid_argument("graph, scheduler and arrivals are required");
  }

  if (sim_cmd->parsed()) {
    const gsched::ReplicateResult result = gsched::replicate(config);
    if (!out_path.empty()) {
      std::ofstream out(out_path);
      if (!out) throw std::runtime_error("cannot open output file " + out_path);
      gsched::write_trace_csv(out, result);
    }
    std::vector<gsched::SweepRow> rows;
    const double rate = result.runs.front().departure_rate.empty()
                            ? 0.0
                            : gsched::ArrivalSpec::parse(config.arrivals).uniform_rate;
    for (std::size_t r = 0; r < result.runs.size(); ++r)
      rows.push_back({config.scheduler, rate, static_cast<int>(r + 1),
                      result.runs[r].final_max_queue, result.runs[r].growth_slope,
                      result.runs[r].departure_rate_error});
    if (!summary_path.empty()) {
      std::ofstream out(summary_path);
      if (!out) throw std::runtime_error("cannot open output file " + summary_path);
      gsched::write_summary_csv(out, rows);
    }
    std::cout << "runs=" << result.runs.size()
              << " mean_final_max_queue=" << result.mean_final_max_queue
              << " max_final_max_queue=" << result.max_final_max_queue
              << " mean_slope=" << result.mean_slope
              << " mean_departure_rate_error=" << result.mean_departure_rate_error
              << '\n';
    return 0;
  }

  if (sweep_cmd->parsed()) {
    const std::vector<double> rates = parse_rate_list(sweep_rates);
    const std::vector<gsched::SweepRow> rows = gsched::rate_sweep(config, rates);
    std::ostringstream text;
    gsched::write_summary_csv(text, rows);
    write_or_print(out_path, text.str());
    return 0;
  }

  if (check_cmd->parsed()) {
    const ConflictGraph g = ConflictGraph::from_spec(check_graph);
    const std::vector<double> rates = resolve_rates(g, check_rates, check_uniform);
    print_verdict("maximal", gsched::in_maximal_region(g, rates, check_tol));
    print_verdict("lqf", gsched::test_feasibility(g, rates, check_tol));
    if (!check_priority.empty()) {
      std::ifstream in(check_priority);
      if (!in) throw std::runtime_error("cannot open priority file " + check_priority);
      std::vector<int> ranks;
      int r;
      while (in >> r) ranks.push_back(r);
      print_verdict("priority", gsched::in_priority_region(
                                    g, gsched::PriorityVector(ranks), rates, check_tol));
    }
    if (!check_spk.empty())
      print_verdict("sp",
                    gsched::sp_condition(g, gsched::SPParams::load(check_spk), check_tol));
    return 0;
  }

  if (em_cmd->parsed()) {
    const ConflictGraph g = ConflictGraph::from_spec(em_graph);
    const std::vector<double> rates = resolve_rates(g, em_rates, em_uniform);
    const gsched::EMState state =
        gsched::em_assign(g, rates, em_tol, em_max_iter, em_restarts, em_seed);
    nlohmann::json j;
    j["t"] = state.t;
    j["x"] = state.x;
    j["p1"] = state.p1.ranks();
    j["p2"] = state.p2.ranks();
    j["trace"] = state.trace;
    j["stable"] = state.stable();
    write_or_print(em_out, j.dump(2) + "\n");
    return 0;
  }

  if (dec_cmd->parsed()) {
    const ConflictGraph g = ConflictGraph::from_spec(dec_graph);
    const std::vector<double> rates = resolve_rates(g, dec_rates, dec_uniform);
    const gsched::SPParams params = gsched::caratheodory_sp_params(g, rates, dec_block);
    write_or_print(dec_out, params.to_json_text() + "\n");
    return 0;
  }

  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const gsched::InvariantViolation& e) {
    std::cerr << "invariant violation (internal bug): " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
