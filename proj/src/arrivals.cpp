#include "gsched/arrivals.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace gsched {

namespace {

void check_probability(double p, const char* name) {
  if (!(p >= 0.0 && p <= 1.0))
    throw std::invalid_argument(std::string(name) + " must lie in [0,1]");
}

class BernoulliProcess final : public ArrivalProcess {
 public:
  BernoulliProcess(std::vector<double> rates, std::uint64_t seed)
      : rates_(std::move(rates)), rng_(seed) {
    if (rates_.empty()) throw std::invalid_argument("empty rate vector");
    for (double r : rates_) check_probability(r, "bernoulli rate");
  }

  int num_links() const override { return static_cast<int>(rates_.size()); }
  int max_per_slot() const override { return 1; }
  const std::vector<double>& declared_rate() const override { return rates_; }

  std::vector<int> next_slot() override {
    std::vector<int> arr(rates_.size(), 0);
    for (std::size_t i = 0; i < rates_.size(); ++i)
      if (rng_.bernoulli(rates_[i])) arr[i] = 1;
    return arr;
  }

 private:
  std::vector<double> rates_;
  Rng rng_;
};

// Shared shape of the two adversarial sources: a cyclic sequence of link sets
// where the current phase fires with probability fire_prob, plus one packet at
// every link with probability epsilon (single draw per slot).
class PhasedAdversarialProcess final : public ArrivalProcess {
 public:
  PhasedAdversarialProcess(int n, std::vector<std::vector<int>> phases,
                           double fire_prob, double epsilon, double per_link_rate,
                           std::uint64_t seed)
      : n_(n),
        phases_(std::move(phases)),
        fire_prob_(fire_prob),
        epsilon_(epsilon),
        rate_(n, per_link_rate),
        rng_(seed) {}

  int num_links() const override { return n_; }
  int max_per_slot() const override { return 2; }
  const std::vector<double>& declared_rate() const override { return rate_; }

  std::vector<int> next_slot() override {
    std::vector<int> arr(n_, 0);
    const auto& phase = phases_[slot_ % phases_.size()];
    ++slot_;
    const bool fires = fire_prob_ >= 1.0 || rng_.bernoulli(fire_prob_);
    if (fires)
      for (int link : phase) arr[link - 1] += 1;
    if (epsilon_ > 0.0 && rng_.bernoulli(epsilon_))
      for (int i = 0; i < n_; ++i) arr[i] += 1;
    return arr;
  }

 private:
  int n_;
  std::vector<std::vector<int>> phases_;
  double fire_prob_;
  double epsilon_;
  std::vector<double> rate_;
  Rng rng_;
  std::size_t slot_ = 0;
};

}  // namespace

std::unique_ptr<ArrivalProcess> bernoulli_process(std::vector<double> rates,
                                                  std::uint64_t seed) {
  return std::make_unique<BernoulliProcess>(std::move(rates), seed);
}

std::unique_ptr<ArrivalProcess> ring6_adversarial(double rho, double epsilon,
                                                  std::uint64_t seed) {
  check_probability(epsilon, "epsilon");
  if (!(rho >= 0.0 && rho <= 1.0 / 3.0 + 1e-12))
    throw std::invalid_argument("ring6 rho must lie in [0, 1/3]");
  double fire = 3.0 * rho;
  if (fire >= 1.0 - 1e-12) fire = 1.0;
  return std::make_unique<PhasedAdversarialProcess>(
      6, std::vector<std::vector<int>>{{1, 4}, {2, 5}, {3, 6}}, fire, epsilon,
      rho + epsilon, seed);
}

std::unique_ptr<ArrivalProcess> ring6_adversarial(double epsilon, std::uint64_t seed) {
  return ring6_adversarial(1.0 / 3.0, epsilon, seed);
}

std::unique_ptr<ArrivalProcess> bipartite_adversarial(double rho, double epsilon,
                                                      std::uint64_t seed) {
  check_probability(epsilon, "epsilon");
  if (!(rho >= 0.0 && rho <= 0.25 + 1e-12))
    throw std::invalid_argument("bipartite rho must lie in [0, 1/4]");
  double fire = 4.0 * rho;
  if (fire >= 1.0 - 1e-12) fire = 1.0;
  // cycles through the four maximal-but-minimum independent pairs {i, i+4},
  // the bipartite analogue of the ring pattern (1,4), (2,5), (3,6)
  return std::make_unique<PhasedAdversarialProcess>(
      8, std::vector<std::vector<int>>{{1, 5}, {2, 6}, {3, 7}, {4, 8}}, fire, epsilon,
      rho + epsilon, seed);
}

void SplitSpec::validate(const std::vector<double>& parent_rate, double tol) const {
  if (fractions.empty()) throw std::invalid_argument("split needs at least one block");
  const std::size_t n = parent_rate.size();
  for (const auto& x : fractions) {
    if (x.size() != n) throw std::invalid_argument("split fraction length mismatch");
    for (double v : x)
      if (v < -tol) throw std::invalid_argument("split fractions must be nonnegative");
  }
  for (std::size_t i = 0; i < n; ++i) {
    double sum = 0.0;
    for (const auto& x : fractions) sum += x[i];
    if (std::abs(sum - parent_rate[i]) > tol)
      throw std::invalid_argument("split fractions do not sum to the parent rate at link " +
                                  std::to_string(i + 1));
  }
}

SplitStream::SplitStream(std::unique_ptr<ArrivalProcess> parent, SplitSpec spec,
                         std::uint64_t seed)
    : parent_(std::move(parent)), spec_(std::move(spec)), rng_(seed) {
  spec_.validate(parent_->declared_rate());
  routed_.assign(parent_->num_links(),
                 std::vector<long long>(spec_.num_blocks(), 0));
  total_.assign(parent_->num_links(), 0);
}

std::vector<std::vector<int>> SplitStream::next_slot() {
  const int n = num_links();
  const int K = num_blocks();
  const auto& rate = parent_->declared_rate();
  std::vector<std::vector<int>> rows(K, std::vector<int>(n, 0));
  const std::vector<int> arr = parent_->next_slot();
  for (int i = 0; i < n; ++i) {
    for (int pkt = 0; pkt < arr[i]; ++pkt) {
      int dest = 0;
      if (rate[i] > 0.0) {
        if (spec_.mode == SplitMode::probabilistic) {
          const double u = rng_.next_double() * rate[i];
          double cum = 0.0;
          for (int k = 0; k < K; ++k) {
            cum += spec_.fractions[k][i];
            if (u < cum || k == K - 1) {
              dest = k;
              break;
            }
          }
        } else {
          // deterministic weighted round robin: largest remaining entitlement
          double best = -1.0;
          for (int k = 0; k < K; ++k) {
            const double deficit =
                spec_.fractions[k][i] / rate[i] * static_cast<double>(total_[i] + 1) -
                static_cast<double>(routed_[i][k]);
            if (deficit > best + 1e-12) {
              best = deficit;
              dest = k;
            }
          }
        }
      }
      rows[dest][i] += 1;
      routed_[i][dest] += 1;
      total_[i] += 1;
    }
  }
  return rows;
}

namespace {

struct SplitCore {
  SplitCore(std::unique_ptr<ArrivalProcess> parent, SplitSpec spec, std::uint64_t seed)
      : stream(std::move(parent), std::move(spec), seed),
        pending(stream.num_blocks()) {}
  SplitStream stream;
  std::vector<std::deque<std::vector<int>>> pending;
};

class SplitView final : public ArrivalProcess {
 public:
  SplitView(std::shared_ptr<SplitCore> core, int block, std::vector<double> rate)
      : core_(std::move(core)), block_(block), rate_(std::move(rate)) {}

  int num_links() const override { return core_->stream.num_links(); }
  int max_per_slot() const override { return core_->stream.max_per_slot(); }
  const std::vector<double>& declared_rate() const override { return rate_; }

  std::vector<int> next_slot() override {
    auto& mine = core_->pending[block_];
    if (mine.empty()) {
      auto rows = core_->stream.next_slot();
      for (int k = 0; k < core_->stream.num_blocks(); ++k)
        core_->pending[k].push_back(std::move(rows[k]));
    }
    std::vector<int> row = std::move(mine.front());
    mine.pop_front();
    return row;
  }

 private:
  std::shared_ptr<SplitCore> core_;
  int block_;
  std::vector<double> rate_;
};

}  // namespace

std::vector<std::unique_ptr<ArrivalProcess>> split_process(
    std::unique_ptr<ArrivalProcess> parent, const SplitSpec& spec, std::uint64_t seed) {
  auto core = std::make_shared<SplitCore>(std::move(parent), spec, seed);
  std::vector<std::unique_ptr<ArrivalProcess>> views;
  for (int k = 0; k < spec.num_blocks(); ++k)
    views.push_back(std::make_unique<SplitView>(core, k, spec.fractions[k]));
  return views;
}

void dump_trace(ArrivalProcess& process, long long slots, std::ostream& out) {
  out << "slot,link,count\n";
  for (long long t = 1; t <= slots; ++t) {
    const std::vector<int> arr = process.next_slot();
    for (std::size_t i = 0; i < arr.size(); ++i)
      if (arr[i] > 0) out << t << ',' << (i + 1) << ',' << arr[i] << '\n';
  }
}

namespace {

class ReplayProcess final : public ArrivalProcess {
 public:
  ReplayProcess(int n, std::vector<std::vector<int>> slots, int a_max,
                std::vector<double> rate)
      : n_(n), slots_(std::move(slots)), a_max_(a_max), rate_(std::move(rate)) {}

  int num_links() const override { return n_; }
  int max_per_slot() const override { return a_max_; }
  const std::vector<double>& declared_rate() const override { return rate_; }

  std::vector<int> next_slot() override {
    if (cursor_ < slots_.size()) return slots_[cursor_++];
    return std::vector<int>(n_, 0);  // past the recorded horizon
  }

 private:
  int n_;
  std::vector<std::vector<int>> slots_;
  int a_max_;
  std::vector<double> rate_;
  std::size_t cursor_ = 0;
};

}  // namespace

std::unique_ptr<ArrivalProcess> replay_trace(std::istream& in, int num_links) {
  std::vector<std::vector<int>> slots;
  std::string line;
  long long max_slot = 0;
  int a_max = 1;
  std::vector<long long> totals(num_links, 0);
  std::vector<std::tuple<long long, int, int>> rows;
  while (std::getline(in, line)) {
    if (line.empty() || !std::isdigit(static_cast<unsigned char>(line[0]))) continue;
    std::istringstream row(line);
    long long slot;
    int link, count;
    char comma;
    if (!(row >> slot >> comma >> link >> comma >> count))
      throw std::runtime_error("trace: bad row: " + line);
    if (link < 1 || link > num_links)
      throw std::runtime_error("trace: link id out of range: " + line);
    if (slot < 1 || count < 0) throw std::runtime_error("trace: bad slot/count: " + line);
    rows.emplace_back(slot, link, count);
    max_slot = std::max(max_slot, slot);
  }
  slots.assign(static_cast<std::size_t>(max_slot), std::vector<int>(num_links, 0));
  for (const auto& [slot, link, count] : rows) {
    slots[slot - 1][link - 1] += count;
    totals[link - 1] += count;
    a_max = std::max(a_max, slots[slot - 1][link - 1]);
  }
  std::vector<double> rate(num_links, 0.0);
  if (max_slot > 0)
    for (int i = 0; i < num_links; ++i)
      rate[i] = static_cast<double>(totals[i]) / static_cast<double>(max_slot);
  return std::make_unique<ReplayProcess>(num_links, std::move(slots), a_max,
                                         std::move(rate));
}

std::unique_ptr<ArrivalProcess> load_trace(const std::string& path, int num_links) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open trace file " + path);
  return replay_trace(in, num_links);
}

}  // namespace gsched
