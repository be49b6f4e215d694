#ifndef CBT_SIMULATE_HPP
#define CBT_SIMULATE_HPP

// Monte Carlo engine for the dice process: throw the currently scored dice,
// keep the repeated successes, rethrow the blanks as a fresh trinomial round.
// Estimation jobs fan out over derived random streams and reduce integer
// counts in a fixed order, so results are bit-identical for a given seed no
// matter how the work is scheduled.
//
// Random numbers come from a counter-based generator (see CounterRng below);
// reproducing these exact outputs requires reproducing that generator, not
// just the seed.

#include <cstdint>
#include <utility>
#include <vector>

#include "cbt/chain.hpp"

namespace cbt {

// Counter-based generator. F is the 64-bit finalizer
//   z ^= z >> 30; z *= 0xbf58476d1ce4e5b9; z ^= z >> 27;
//   z *= 0x94d049bb133111eb; z ^= z >> 31;
// A stream is keyed by key = F(F(seed ^ 0x9e3779b97f4a7c15) + stream_id *
// 0xd1342543de82ef95), and draw n (counting from 1) is F(key + n *
// 0x9e3779b97f4a7c15). Uniform doubles take the top 53 bits.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream_id)
      : key_(finalize(finalize(seed ^ kGamma) + stream_id * kStride)) {}

  std::uint64_t next() { return finalize(key_ + (++n_) * kGamma); }
  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  static std::uint64_t finalize(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  static constexpr const char* name() { return "counter-splitmix64"; }

 private:
  static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;
  static constexpr std::uint64_t kStride = 0xd1342543de82ef95ULL;
  std::uint64_t key_;
  std::uint64_t n_ = 0;
};

// one Bernoulli comparison per trial, so a draw consumes exactly M uniforms
long sample_binomial(long M, double alpha, CounterRng& rng);

// conditioning: p1 ~ Binomial(M, b1), then p2 ~ Binomial(M - p1, b2/(1-b1))
std::pair<long, long> sample_trinomial(long M, double b1, double b2, CounterRng& rng);

// one transition of the chain from the given state
std::pair<long, long> step_once(std::pair<long, long> state, const ChainParams<double>& cp,
                                CounterRng& rng);

struct SimConfig {
  std::uint64_t seed = 0;
  long replicas = 1;
  long long steps_per_replica = 1;
  ChainParams<double> params;

  void validate() const {
    params.validate();
    if (replicas < 1 || steps_per_replica < 1)
      throw std::domain_error("replicas and steps_per_replica must be positive");
  }
};

struct EmpiricalKernel {
  StateSpace space;
  Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic> counts;  // (dest, source)
  std::vector<std::int64_t> totals;                                    // per source

  DenseMatrix<double> estimates() const;
};

// Independent single-step draws from every source state; stream id is
// replica * state_count + source_index, each stream contributing
// steps_per_replica draws, so totals are replicas * steps_per_replica.
EmpiricalKernel estimate_kernel(const SimConfig& config);

struct RunResult {
  Eigen::VectorXd occupancy;     // post-burn-in visit frequencies
  std::int64_t kept_steps = 0;   // per all replicas combined
  std::int64_t burned_steps = 0; // first 10% of each replica, discarded
  double tv_to_stationary = 0;
  double lag1_autocorrelation = 0;  // of the total score i1+i2, within replicas
};

// Trajectory simulation; stream id is the replica index.
RunResult run_chain(const SimConfig& config, std::pair<long, long> start = {0, 0});

double tv_distance(const Eigen::VectorXd& p, const Eigen::VectorXd& q);

}  // namespace cbt

#endif
