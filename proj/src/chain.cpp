#include "cbt/chain.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

namespace cbt {

std::vector<EigenvalueCandidate> eigenvalues_analytic(
    const ChainParams<double>& cp,
    const std::pair<FixedPointSolution<double>, FixedPointSolution<double>>& fp) {
  StateSpace sp(cp.N);
  auto product_form = [&](const FixedPointSolution<double>& s, const std::string& label) {
    EigenvalueCandidate c{label, {}};
    double f1 = 1 - cp.beta1 * s.t - cp.beta2 * s.u;
    double f2 = 1 - cp.beta1 * s.v - cp.beta2 * s.w;
    c.values.reserve(sp.states.size());
    for (auto [m, n] : sp.states) c.values.push_back(std::pow(f1, m) * std::pow(f2, n));
    return c;
  };

  std::vector<EigenvalueCandidate> out;
  if (fp.first.is_degenerate) {
    out.push_back(product_form(fp.first, "fixed-point product (degenerate t)"));
  } else {
    out.push_back(product_form(fp.first, "fixed-point product, plus-branch t"));
    out.push_back(product_form(fp.second, "fixed-point product, minus-branch t"));
  }

  double T = cp.alpha1 * (1 - cp.beta1) + cp.alpha2 * (1 - cp.beta2);
  double sd = std::sqrt(fp.first.discriminant);
  double mu_p = (T + sd) / 2, mu_m = (T - sd) / 2;

  EigenvalueCandidate split{"root-pair product", {}};
  EigenvalueCandidate power{"dominant-root power", {}};
  for (auto [m, n] : sp.states) {
    split.values.push_back(std::pow(mu_p, m) * std::pow(mu_m, n));
    power.values.push_back(std::pow(mu_p, m + n));
  }
  out.push_back(std::move(split));
  out.push_back(std::move(power));
  return out;
}

EigenCheck verify_eigen(const ChainParams<double>& cp, const FixedPointSolution<double>& fp,
                        long m, long n) {
  KernelMatrix<double> K = kernel_closed(cp);
  long sz = K.space.size();

  TUVWParams<double> par{fp.t, fp.u, fp.v, fp.w};
  Eigen::VectorXd phi(sz);
  for (long i = 0; i < sz; ++i)
    phi(i) = poly_P(m, n, K.space.states[i].first, K.space.states[i].second, cp.N, par);

  Eigen::VectorXd psi = stationary_distribution(cp);
  Eigen::VectorXd phiw = psi.cwiseProduct(phi);

  auto score = [](const Eigen::VectorXd& image, const Eigen::VectorXd& base,
                  const std::string& label) {
    OrientationResult r;
    r.label = label;
    r.lambda = base.dot(image) / base.dot(base);
    r.residual = (image - r.lambda * base).lpNorm<Eigen::Infinity>() /
                 base.lpNorm<Eigen::Infinity>();
    return r;
  };

  EigenCheck out;
  out.orientations[0] = score(K.M * phi, phi, "kernel applied to the polynomial vector");
  out.orientations[1] =
      score(K.M.transpose() * phi, phi, "transposed kernel applied to the polynomial vector");
  out.orientations[2] =
      score(K.M * phiw, phiw, "kernel applied to the stationary-weighted vector");
  out.orientations[3] = score(K.M.transpose() * phiw, phiw,
                              "transposed kernel applied to the stationary-weighted vector");
  out.best = 0;
  for (int i = 1; i < 4; ++i)
    if (out.orientations[i].residual < out.orientations[out.best].residual) out.best = i;
  return out;
}

SpectrumReport verify_spectrum(const ChainParams<double>& cp) {
  KernelMatrix<double> K = kernel_closed(cp);
  long sz = K.space.size();

  Eigen::VectorXd psi = stationary_distribution(cp);
  Eigen::VectorXd d = psi.cwiseSqrt();
  Eigen::MatrixXd S = d.cwiseInverse().asDiagonal() * K.M * d.asDiagonal();
  // reversibility makes S symmetric up to roundoff; fold the remainder away
  Eigen::MatrixXd Sym = (S + S.transpose()) / 2;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(Sym);
  SpectrumReport rep;
  rep.numeric.assign(solver.eigenvalues().data(), solver.eigenvalues().data() + sz);
  std::sort(rep.numeric.rbegin(), rep.numeric.rend());

  auto fp = solve_fixed_points(cp);
  for (auto& cand : eigenvalues_analytic(cp, fp)) {
    std::vector<double> vals = cand.values;
    std::sort(vals.rbegin(), vals.rend());
    double dev = 0;
    for (long i = 0; i < sz; ++i) dev = std::max(dev, std::abs(vals[i] - rep.numeric[i]));
    rep.candidates.push_back({cand.label, dev, dev < 1e-9});
  }

  std::string matched;
  for (const auto& c : rep.candidates)
    if (c.matched) matched += (matched.empty() ? "" : "; ") + c.label;
  rep.verdict = matched.empty()
                    ? "no analytic candidate matches; raw spectrum reported"
                    : "numeric spectrum matches: " + matched;
  return rep;
}

}  // namespace cbt
