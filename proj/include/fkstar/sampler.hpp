#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "fkstar/cluster.hpp"
#include "fkstar/config.hpp"
#include "fkstar/region.hpp"
#include "fkstar/rng.hpp"

namespace fkstar {

struct RCParams {
  double lambda = 1.0;
  double delta = 1.0;
  double q = 2.0;
  Boundary bc = Boundary::kFree;

  // InvalidArgument unless lambda >= 0, delta > 0, q >= 1 (all finite).
  void validate() const;
  friend bool operator==(const RCParams&, const RCParams&) = default;
};

enum class MoveKind {
  kBirthDeath,  // Metropolis-Hastings insert/delete moves
  kCluster,     // Edwards-Sokal sweep, q = 2 only
  kDirect,      // independent Poisson draws, q = 1 only
};

const char* to_string(MoveKind m);
MoveKind parse_move(std::string_view text);

// burn_in and thinning count steps of the chosen move: single MH steps,
// cluster sweeps, or independent draws.
struct Schedule {
  std::int64_t burn_in = 0;
  std::int64_t n_samples = 1000;
  std::int64_t thinning = 1;
  std::uint64_t seed = 1;
  MoveKind move = MoveKind::kBirthDeath;
};

// Birth-death: burn_in = 10^4 * lines, thinning = lines. Cluster: 10^3 sweeps
// and thinning 1. Direct: no burn-in.
Schedule default_schedule(const Region& r, MoveKind move, std::int64_t n_samples, std::uint64_t seed);

enum MoveType { kInsertBridge = 0, kDeleteBridge = 1, kInsertDeath = 2, kDeleteDeath = 3 };

struct MoveStats {
  std::int64_t proposed = 0;
  std::int64_t accepted = 0;
  double rate() const { return proposed ? static_cast<double>(accepted) / static_cast<double>(proposed) : 0.0; }
};

struct StepResult {
  MoveType move = kInsertBridge;
  bool accepted = false;
  int dk = 0;
  double ratio = 0.0;  // Metropolis-Hastings ratio before the min(1, .)
};

// Configuration of one chain plus its cluster labeling, rebuilt lazily.
class ChainState {
 public:
  ChainState(std::shared_ptr<const Region> region, LineEvents events);
  explicit ChainState(std::shared_ptr<const Region> region);

  const Region& region() const { return *region_; }
  const LineEvents& events() const { return events_; }
  void set_events(LineEvents events);

  // The labeling of the current configuration (rebuilt if stale).
  const ClusterLabeling& labeling();
  int k();

  std::size_t bridge_count() const { return n_bridges_; }
  std::size_t death_count() const { return n_deaths_; }
  double edge_length() const { return region_->edge_length(); }
  double vertex_length() const { return region_->vertex_length(); }
  std::int64_t steps() const { return steps_; }
  const std::array<MoveStats, 4>& move_stats() const { return stats_; }

 private:
  friend StepResult mcmc_step(ChainState& s, const RCParams& p, Rng& rng);
  friend void sw_sweep(ChainState& s, const RCParams& p, Rng& rng);

  void invalidate() { labeling_valid_ = false; }
  int pick_line(const std::vector<double>& cumulative, double u) const;

  std::shared_ptr<const Region> region_;
  LineEvents events_;
  ClusterLabeling labeling_;
  bool labeling_valid_ = false;
  std::size_t n_bridges_ = 0;
  std::size_t n_deaths_ = 0;
  std::vector<double> edge_cumulative_;
  std::vector<double> vertex_cumulative_;
  std::int64_t steps_ = 0;
  std::array<MoveStats, 4> stats_{};
  // scratch buffers for the cluster sweep
  std::vector<char> spin_;
  std::vector<std::vector<double>> next_;
};

// Bridges Poisson(lambda) per edge line, deaths Poisson(delta) per vertex line.
LineEvents sample_poisson_lines(const Region& r, double lambda, double delta, Rng& rng);
Configuration sample_poisson(const Region& r, const RCParams& p, Rng& rng);

// One birth/death Metropolis-Hastings step against q^k relative to mu.
StepResult mcmc_step(ChainState& s, const RCParams& p, Rng& rng);

// One Edwards-Sokal sweep. UnsupportedQ unless q == 2.
void sw_sweep(ChainState& s, const RCParams& p, Rng& rng);

// Change in the cluster count from the given single-event edit of a
// configuration, computed by breadth-first search over the segment graph
// of the edited configuration. Used by the MH step and by the tests.
int delta_k_bfs(const Region& r, LineEvents& ev, MoveType move, int line, double t);

struct SampleView {
  const Region& region;
  const LineEvents& events;
  const ClusterLabeling& labeling;
  std::int64_t index;
  int chain;
};

struct ChainDiagnostics {
  std::array<MoveStats, 4> moves{};
  std::vector<int> k_trace;
  std::int64_t steps = 0;
};

// InvalidArgument / UnsupportedQ for parameter, schedule or move mismatches.
void check_run(const Region& r, const RCParams& p, const Schedule& s);

// Runs one chain on stream `chain` of the schedule's seed and calls `visit` on
// every kept sample. Deterministic given (region, params, schedule, chain).
ChainDiagnostics run_chain(const Region& r, const RCParams& p, const Schedule& s,
                           const std::function<void(const SampleView&)>& visit, int chain = 0);

// Independent chains with per-chain accumulators merged in chain order, so the
// result does not depend on thread scheduling. Acc needs merge(const Acc&).
template <class Acc, class Visit>
Acc run_chains(const Region& r, const RCParams& p, const Schedule& s, int chains, const Acc& init, Visit visit) {
  if (chains < 1) throw Error(ErrorCode::kInvalidArgument, "need at least one chain");
  check_run(r, p, s);
  std::vector<Acc> parts(chains, init);
  auto work = [&](int c) { run_chain(r, p, s, [&](const SampleView& v) { visit(parts[c], v); }, c); };
  if (chains == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (int c = 0; c < chains; ++c) pool.emplace_back(work, c);
    for (auto& t : pool) t.join();
  }
  Acc out = parts[0];
  for (int c = 1; c < chains; ++c) out.merge(parts[c]);
  return out;
}

// JSON run manifest: params, region, schedule, seed.
std::string run_manifest(const Region& r, const RCParams& p, const Schedule& s, int chains = 1);

}  // namespace fkstar
