#include "cbt/simulate.hpp"

#include <cmath>
#include <stdexcept>

namespace cbt {

long sample_binomial(long M, double alpha, CounterRng& rng) {
  long k = 0;
  for (long i = 0; i < M; ++i)
    if (rng.unit() < alpha) ++k;
  return k;
}

std::pair<long, long> sample_trinomial(long M, double b1, double b2, CounterRng& rng) {
  long p1 = sample_binomial(M, b1, rng);
  long p2 = sample_binomial(M - p1, b2 / (1 - b1), rng);
  return {p1, p2};
}

std::pair<long, long> step_once(std::pair<long, long> state, const ChainParams<double>& cp,
                                CounterRng& rng) {
  long k1 = sample_binomial(state.first, cp.alpha1, rng);
  long k2 = sample_binomial(state.second, cp.alpha2, rng);
  auto [p1, p2] = sample_trinomial(cp.N - k1 - k2, cp.beta1, cp.beta2, rng);
  return {k1 + p1, k2 + p2};
}

DenseMatrix<double> EmpiricalKernel::estimates() const {
  DenseMatrix<double> e(counts.rows(), counts.cols());
  for (long c = 0; c < counts.cols(); ++c)
    for (long r = 0; r < counts.rows(); ++r)
      e(r, c) = static_cast<double>(counts(r, c)) / static_cast<double>(totals[c]);
  return e;
}

EmpiricalKernel estimate_kernel(const SimConfig& config) {
  config.validate();
  StateSpace sp(config.params.N);
  long n = sp.size();
  EmpiricalKernel out{sp, Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>::Zero(n, n),
                      std::vector<std::int64_t>(n, 0)};
  for (long rep = 0; rep < config.replicas; ++rep)
    for (long src = 0; src < n; ++src) {
      CounterRng rng(config.seed, static_cast<std::uint64_t>(rep) * n + src);
      for (long long s = 0; s < config.steps_per_replica; ++s) {
        auto [j1, j2] = step_once(sp.states[src], config.params, rng);
        ++out.counts(sp.index(j1, j2), src);
      }
      out.totals[src] += config.steps_per_replica;
    }
  return out;
}

RunResult run_chain(const SimConfig& config, std::pair<long, long> start) {
  config.validate();
  StateSpace sp(config.params.N);
  sp.index(start.first, start.second);  // validates the start state
  long n = sp.size();

  Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1> visits =
      Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1>::Zero(n);
  long long burn = config.steps_per_replica / 10;
  RunResult out;

  double ac_num = 0, ac_den = 0, mean_sum = 0;
  std::int64_t kept_total = 0;
  for (long rep = 0; rep < config.replicas; ++rep) {
    CounterRng rng(config.seed, static_cast<std::uint64_t>(rep));
    auto state = start;
    std::vector<double> score;
    score.reserve(static_cast<size_t>(config.steps_per_replica - burn));
    for (long long s = 0; s < config.steps_per_replica; ++s) {
      state = step_once(state, config.params, rng);
      if (s < burn) continue;
      ++visits(sp.index(state.first, state.second));
      score.push_back(static_cast<double>(state.first + state.second));
      ++kept_total;
    }
    double mean = 0;
    for (double v : score) mean += v;
    mean /= static_cast<double>(score.size());
    mean_sum += mean;
    for (size_t i = 0; i < score.size(); ++i) {
      double d = score[i] - mean;
      ac_den += d * d;
      if (i + 1 < score.size()) ac_num += d * (score[i + 1] - mean);
    }
  }

  out.kept_steps = kept_total;
  out.burned_steps = static_cast<std::int64_t>(burn) * config.replicas;
  out.occupancy = visits.cast<double>() / static_cast<double>(kept_total);
  out.lag1_autocorrelation = ac_den > 0 ? ac_num / ac_den : 0;
  out.tv_to_stationary = tv_distance(out.occupancy, stationary_distribution(config.params));
  return out;
}

double tv_distance(const Eigen::VectorXd& p, const Eigen::VectorXd& q) {
  if (p.size() != q.size()) throw std::domain_error("tv_distance needs equal-length vectors");
  return 0.5 * (p - q).lpNorm<1>();
}

}  // namespace cbt
