#include "gsched/sim.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "gsched/rng.hpp"

namespace gsched {

namespace {

constexpr std::uint64_t kTieStream = 2;
constexpr std::uint64_t kSplitStream = 3;

void check_schedule(const ConflictGraph& g, const LinkSet& sched,
                    std::span<const long long> q, long long slot) {
  if (!g.is_independent(sched))
    throw InvariantViolation("schedule is not an independent set at slot " +
                             std::to_string(slot));
  for (std::size_t i = 0; i < q.size(); ++i) {
    const int link = static_cast<int>(i) + 1;
    if (sched.contains(link) && q[i] <= 0)
      throw InvariantViolation("scheduled link " + std::to_string(link) +
                               " has an empty queue at slot " + std::to_string(slot));
    if (q[i] > 0 && !sched.contains(link) &&
        (g.neighbor_mask(link) & sched.mask()) == 0)
      throw InvariantViolation("schedule not maximal: link " + std::to_string(link) +
                               " blocked by nothing at slot " + std::to_string(slot));
  }
}

double fit_slope(const std::vector<SamplePoint>& samples, long long horizon) {
  // least squares of max_queue over the last half of the horizon
  const long long cutoff = horizon / 2;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  long long count = 0;
  for (const auto& s : samples) {
    if (s.slot < cutoff) continue;
    const double x = static_cast<double>(s.slot);
    const double y = static_cast<double>(s.max_queue);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++count;
  }
  if (count < 2) return 0.0;
  const double denom = sxx - sx * sx / count;
  if (denom <= 0.0) return 0.0;
  return (sxy - sx * sy / count) / denom;
}

void finish_metrics(SimResult& result, std::span<const double> declared,
                    long long horizon) {
  result.final_max_queue =
      *std::max_element(result.final_queues.begin(), result.final_queues.end());
  result.departure_rate.resize(result.final_departures.size());
  result.departure_rate_error = 0.0;
  for (std::size_t i = 0; i < result.final_departures.size(); ++i) {
    result.departure_rate[i] =
        static_cast<double>(result.final_departures[i]) / static_cast<double>(horizon);
    result.departure_rate_error = std::max(
        result.departure_rate_error, std::abs(result.departure_rate[i] - declared[i]));
  }
  result.growth_slope = fit_slope(result.samples, horizon);
}

}  // namespace

void SimConfig::validate() const {
  if (horizon < 1) throw std::invalid_argument("horizon must be >= 1");
  if (runs < 1) throw std::invalid_argument("runs must be >= 1");
  if (sample_every < 1 || sample_every > horizon)
    throw std::invalid_argument("sample_every must lie in [1, horizon]");
}

SimConfig SimConfig::from_json_text(const std::string& text) {
  const nlohmann::json j = nlohmann::json::parse(text);
  SimConfig config;
  config.graph = j.value("graph", std::string{});
  config.scheduler = j.value("scheduler", std::string{});
  config.arrivals = j.value("arrivals", std::string{});
  config.horizon = j.value("horizon", config.horizon);
  config.runs = j.value("runs", config.runs);
  config.sample_every = j.value("sample_every", config.sample_every);
  config.seed = j.value("seed", config.seed);
  return config;
}

SimConfig SimConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return from_json_text(text.str());
}

SchedulerSpec SchedulerSpec::parse(const std::string& spec) {
  SchedulerSpec out;
  out.name = spec;
  if (spec == "lqf") {
    out.kind = Kind::lqf;
  } else if (spec == "lqf:random") {
    out.kind = Kind::lqf;
    out.tie = TieBreak::random;
  } else if (spec == "maxweight") {
    out.kind = Kind::maxweight;
  } else if (spec.rfind("sp:", 0) == 0) {
    out.kind = Kind::sp;
    const std::string path = spec.substr(3);
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open priority file " + path);
    std::vector<int> ranks;
    int r;
    while (in >> r) ranks.push_back(r);
    out.priority = PriorityVector(std::move(ranks));
  } else if (spec.rfind("spk:", 0) == 0) {
    out.kind = Kind::spk;
    out.params = SPParams::load(spec.substr(4));
  } else {
    throw std::invalid_argument("unknown scheduler specifier: " + spec);
  }
  return out;
}

ArrivalSpec ArrivalSpec::parse(const std::string& spec) {
  ArrivalSpec out;
  const auto split_colons = [](const std::string& s) {
    std::vector<std::string> parts;
    std::size_t pos = 0;
    while (true) {
      const std::size_t next = s.find(':', pos);
      parts.push_back(s.substr(pos, next - pos));
      if (next == std::string::npos) break;
      pos = next + 1;
    }
    return parts;
  };
  const auto as_number = [](const std::string& s, double& value) {
    try {
      std::size_t end = 0;
      value = std::stod(s, &end);
      return end == s.size();
    } catch (const std::exception&) {
      return false;
    }
  };
  const std::vector<std::string> parts = split_colons(spec);
  if (parts.empty()) throw std::invalid_argument("empty arrival specifier");
  if (parts[0] == "bernoulli" && parts.size() == 2) {
    out.kind = Kind::bernoulli;
    double r;
    if (as_number(parts[1], r))
      out.uniform_rate = r;
    else
      out.path = parts[1];
    return out;
  }
  if (parts[0] == "ring6adv" && (parts.size() == 2 || parts.size() == 3)) {
    out.kind = Kind::ring6adv;
    double a, b;
    if (parts.size() == 2) {
      if (!as_number(parts[1], a)) throw std::invalid_argument("bad epsilon: " + spec);
      out.epsilon = a;
    } else {
      if (!as_number(parts[1], a) || !as_number(parts[2], b))
        throw std::invalid_argument("bad rho/epsilon: " + spec);
      out.rho = a;
      out.epsilon = b;
    }
    return out;
  }
  if (parts[0] == "bipadv" && parts.size() == 3) {
    out.kind = Kind::bipadv;
    double a, b;
    if (!as_number(parts[1], a) || !as_number(parts[2], b))
      throw std::invalid_argument("bad rho/epsilon: " + spec);
    out.rho = a;
    out.epsilon = b;
    return out;
  }
  if (parts[0] == "trace" && parts.size() == 2) {
    out.kind = Kind::trace;
    out.path = parts[1];
    return out;
  }
  throw std::invalid_argument("unknown arrival specifier: " + spec);
}

ArrivalSpec ArrivalSpec::with_uniform_rate(double rate) const {
  ArrivalSpec out = *this;
  switch (kind) {
    case Kind::bernoulli:
      out.path.clear();
      out.rates.clear();
      out.uniform_rate = rate;
      break;
    case Kind::ring6adv:
      out.rho = std::min(rate, 1.0 / 3.0);
      out.epsilon = rate - out.rho;
      break;
    case Kind::bipadv:
      out.rho = std::min(rate, 0.25);
      out.epsilon = rate - out.rho;
      break;
    case Kind::trace:
      throw std::invalid_argument("trace arrivals cannot be re-rated for a sweep");
  }
  return out;
}

std::unique_ptr<ArrivalProcess> ArrivalSpec::make(int num_links,
                                                  std::uint64_t seed) const {
  switch (kind) {
    case Kind::bernoulli: {
      std::vector<double> r = rates;
      if (r.empty() && uniform_rate >= 0.0)
        r.assign(static_cast<std::size_t>(num_links), uniform_rate);
      if (r.empty() && !path.empty()) r = load_rates_csv(path, num_links);
      if (static_cast<int>(r.size()) != num_links)
        throw std::invalid_argument("bernoulli rates do not match the graph size");
      return bernoulli_process(std::move(r), seed);
    }
    case Kind::ring6adv:
      if (num_links != 6)
        throw std::invalid_argument("ring6adv arrivals need a 6-link graph");
      return ring6_adversarial(rho < 0.0 ? 1.0 / 3.0 : rho, epsilon, seed);
    case Kind::bipadv:
      if (num_links != 8)
        throw std::invalid_argument("bipadv arrivals need the 8-link bipartite graph");
      return bipartite_adversarial(rho < 0.0 ? 0.25 : rho, epsilon, seed);
    case Kind::trace:
      return load_trace(path, num_links);
  }
  throw std::invalid_argument("bad arrival specifier");
}

namespace {

SimResult simulate_single_queue(const ConflictGraph& g, const SchedulerSpec& scheduler,
                                std::unique_ptr<ArrivalProcess> proc, long long horizon,
                                long long sample_every, std::uint64_t seed) {
  const int n = g.num_links();
  const std::vector<double> declared = proc->declared_rate();
  const int a_max = proc->max_per_slot();
  Rng tie_rng(mix_seed(seed, kTieStream));

  SimResult result;
  std::vector<long long> q(n, 0), arrived(n, 0), departed(n, 0);
  for (long long t = 1; t <= horizon; ++t) {
    LinkSet sched;
    switch (scheduler.kind) {
      case SchedulerSpec::Kind::lqf:
        sched = lqf_step(g, q, scheduler.tie,
                         scheduler.tie == TieBreak::random ? &tie_rng : nullptr);
        break;
      case SchedulerSpec::Kind::sp:
        sched = sp_single_step(g, *scheduler.priority, q);
        break;
      case SchedulerSpec::Kind::maxweight:
        sched = max_weight_schedule(g, q);
        break;
      case SchedulerSpec::Kind::spk:
        throw std::logic_error("spk handled separately");
    }
    check_schedule(g, sched, q, t);
    ++result.invariant_checks;
    for (int link : sched.links()) {
      --q[link - 1];
      ++departed[link - 1];
    }
    const std::vector<int> arr = proc->next_slot();
    for (int i = 0; i < n; ++i) {
      if (arr[i] < 0 || arr[i] > a_max)
        throw InvariantViolation("arrival bound violated at slot " + std::to_string(t));
      q[i] += arr[i];
      arrived[i] += arr[i];
    }
    ++result.invariant_checks;
    if (t % sample_every == 0 || t == horizon) {
      long long max_q = 0, total_q = 0;
      for (int i = 0; i < n; ++i) {
        if (q[i] != arrived[i] - departed[i])
          throw InvariantViolation("queue conservation broken at slot " +
                                   std::to_string(t));
        max_q = std::max(max_q, q[i]);
        total_q += q[i];
      }
      ++result.invariant_checks;
      if (t % sample_every == 0) result.samples.push_back({t, max_q, total_q});
    }
  }
  result.final_queues = std::move(q);
  result.final_arrivals = std::move(arrived);
  result.final_departures = std::move(departed);
  finish_metrics(result, declared, horizon);
  return result;
}

SimResult simulate_spk(const ConflictGraph& g, const SPParams& params,
                       std::unique_ptr<ArrivalProcess> proc, long long horizon,
                       long long sample_every, std::uint64_t seed) {
  params.validate();
  const int n = g.num_links();
  const int K = params.num_blocks();
  if (params.num_links() != n)
    throw std::invalid_argument("SP params do not match the graph size");
  const std::vector<double> declared = proc->declared_rate();
  const int a_max = proc->max_per_slot();
  SplitSpec spec{params.rates, SplitMode::probabilistic};
  SplitStream split(std::move(proc), std::move(spec), mix_seed(seed, kSplitStream));

  SimResult result;
  std::vector<std::vector<long long>> sub_q(K, std::vector<long long>(n, 0));
  std::vector<std::vector<long long>> sub_arrived(K, std::vector<long long>(n, 0));
  std::vector<std::vector<long long>> sub_departed(K, std::vector<long long>(n, 0));
  std::vector<long long> arrived(n, 0), departed(n, 0);
  for (long long t = 1; t <= horizon; ++t) {
    const auto [sched, k] = sp_multi_step(g, params, sub_q, t);
    check_schedule(g, sched, sub_q[k], t);
    ++result.invariant_checks;
    for (int link : sched.links()) {
      --sub_q[k][link - 1];
      ++sub_departed[k][link - 1];
      ++departed[link - 1];
    }
    const std::vector<std::vector<int>> rows = split.next_slot();
    for (int i = 0; i < n; ++i) {
      int total = 0;
      for (int b = 0; b < K; ++b) {
        sub_q[b][i] += rows[b][i];
        sub_arrived[b][i] += rows[b][i];
        total += rows[b][i];
      }
      if (total < 0 || total > a_max)
        throw InvariantViolation("arrival bound violated at slot " + std::to_string(t));
      arrived[i] += total;
    }
    ++result.invariant_checks;
    if (t % sample_every == 0 || t == horizon) {
      long long max_q = 0, total_q = 0;
      for (int i = 0; i < n; ++i) {
        long long qi = 0;
        for (int b = 0; b < K; ++b) {
          if (sub_q[b][i] != sub_arrived[b][i] - sub_departed[b][i])
            throw InvariantViolation("sub-queue conservation broken at slot " +
                                     std::to_string(t));
          qi += sub_q[b][i];
        }
        if (qi != arrived[i] - departed[i])
          throw InvariantViolation("queue conservation broken at slot " +
                                   std::to_string(t));
        max_q = std::max(max_q, qi);
        total_q += qi;
      }
      ++result.invariant_checks;
      if (t % sample_every == 0) result.samples.push_back({t, max_q, total_q});
    }
  }
  result.final_queues.assign(n, 0);
  for (int i = 0; i < n; ++i)
    for (int b = 0; b < K; ++b) result.final_queues[i] += sub_q[b][i];
  result.final_arrivals = std::move(arrived);
  result.final_departures = std::move(departed);
  finish_metrics(result, declared, horizon);
  return result;
}

}  // namespace

SimResult simulate_run(const ConflictGraph& g, const SchedulerSpec& scheduler,
                       const ArrivalSpec& arrivals, long long horizon,
                       long long sample_every, std::uint64_t seed) {
  if (horizon < 1) throw std::invalid_argument("horizon must be >= 1");
  if (sample_every < 1) throw std::invalid_argument("sample_every must be >= 1");
  std::unique_ptr<ArrivalProcess> proc = arrivals.make(g.num_links(), seed);
  if (scheduler.kind == SchedulerSpec::Kind::spk)
    return simulate_spk(g, *scheduler.params, std::move(proc), horizon, sample_every,
                        seed);
  return simulate_single_queue(g, scheduler, std::move(proc), horizon, sample_every,
                               seed);
}

ReplicateResult replicate(const SimConfig& config) {
  config.validate();
  const ConflictGraph g = ConflictGraph::from_spec(config.graph);
  const SchedulerSpec scheduler = SchedulerSpec::parse(config.scheduler);
  const ArrivalSpec arrivals = ArrivalSpec::parse(config.arrivals);
  ReplicateResult out;
  for (int r = 0; r < config.runs; ++r)
    out.runs.push_back(simulate_run(g, scheduler, arrivals, config.horizon,
                                    config.sample_every, config.seed + r));
  for (const SimResult& run : out.runs) {
    out.mean_final_max_queue += static_cast<double>(run.final_max_queue);
    out.max_final_max_queue =
        std::max(out.max_final_max_queue, static_cast<double>(run.final_max_queue));
    out.mean_slope += run.growth_slope;
    out.max_slope = std::max(out.max_slope, run.growth_slope);
    out.mean_departure_rate_error += run.departure_rate_error;
  }
  const double count = static_cast<double>(out.runs.size());
  out.mean_final_max_queue /= count;
  out.mean_slope /= count;
  out.mean_departure_rate_error /= count;
  return out;
}

std::vector<SweepRow> rate_sweep(const SimConfig& config,
                                 const std::vector<double>& rates) {
  const ArrivalSpec base = ArrivalSpec::parse(config.arrivals);
  std::vector<SweepRow> rows;
  for (double rate : rates) {
    SimConfig point = config;
    point.validate();
    const ConflictGraph g = ConflictGraph::from_spec(point.graph);
    const SchedulerSpec scheduler = SchedulerSpec::parse(point.scheduler);
    const ArrivalSpec arrivals = base.with_uniform_rate(rate);
    for (int r = 0; r < point.runs; ++r) {
      const SimResult run = simulate_run(g, scheduler, arrivals, point.horizon,
                                         point.sample_every, point.seed + r);
      rows.push_back({scheduler.name, rate, r + 1, run.final_max_queue,
                      run.growth_slope, run.departure_rate_error});
    }
  }
  return rows;
}

bool empirically_stable(const SimResult& run, long long horizon) {
  return run.growth_slope <= 0.01 &&
         static_cast<double>(run.final_max_queue) <= 0.02 * static_cast<double>(horizon);
}

void write_trace_csv(std::ostream& out, const ReplicateResult& result) {
  out << "run,slot,max_queue,total_queue\n";
  for (std::size_t r = 0; r < result.runs.size(); ++r)
    for (const SamplePoint& s : result.runs[r].samples)
      out << (r + 1) << ',' << s.slot << ',' << s.max_queue << ',' << s.total_queue
          << '\n';
}

void write_summary_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "scheduler,rate,run,final_max_queue,slope,departure_rate_error\n";
  for (const SweepRow& row : rows)
    out << row.scheduler << ',' << row.rate << ',' << row.run << ','
        << row.final_max_queue << ',' << row.slope << ',' << row.departure_rate_error
        << '\n';
}

std::vector<double> load_rates_csv(const std::string& path, int num_links) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open rates file " + path);
  std::vector<double> rates(num_links, 0.0);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || !std::isdigit(static_cast<unsigned char>(line[0]))) continue;
    std::istringstream row(line);
    int link;
    char comma;
    double rate;
    if (!(row >> link >> comma >> rate))
      throw std::runtime_error("rates file: bad row: " + line);
    if (link < 1 || link > num_links)
      throw std::runtime_error("rates file: link id out of range: " + line);
    rates[link - 1] = rate;
  }
  return rates;
}

}  // namespace gsched
