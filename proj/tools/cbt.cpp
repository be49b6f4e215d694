// Command-line driver. Subcommands expose the kernel evaluators, the
// spectral machinery, polynomial tables, 9-j values, and the Monte Carlo
// engine as JSON documents (CSV for matrices on request).
//
// Exit codes: 0 all requested checks passed, 1 a check ran and failed
// (finding), 2 unusable input. Probability-like flags accept "a/b" or a
// decimal; rational inputs run on the exact backend unless --backend float
// is given, decimal inputs always run on doubles.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cbt/angular.hpp"
#include "cbt/chain.hpp"
#include "cbt/polynomials.hpp"
#include "cbt/simulate.hpp"

namespace {

using nlohmann::ordered_json;
using namespace cbt;

struct CliError {
  int code;
  std::string message;
};

std::string fstr(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string rat_text(const Rational& q) {
  Int num = numerator(q), den = denominator(q);
  return den == 1 ? num.str() : num.str() + "/" + den.str();
}

ordered_json rat_json(const Rational& q) {
  return ordered_json{{"num", numerator(q).str()}, {"den", denominator(q).str()}};
}

ordered_json surd_json(const Surd& s) {
  return ordered_json{{"coefficient", rat_json(s.coefficient())},
                      {"radicand", s.radicand().str()},
                      {"float", fstr(s.to_double())}};
}

ordered_json value_json(const Rational& v) { return rat_json(v); }
ordered_json value_json(double v) { return fstr(v); }

// ---- flag parsing -------------------------------------------------------

struct ProbValue {
  std::string flag, text;
  bool is_rational = false;
  Rational q;
  double d = 0;
};

ProbValue parse_prob(const std::string& flag, const std::string& text) {
  ProbValue v;
  v.flag = flag;
  v.text = text;
  if (auto q = parse_rational(text)) {
    v.is_rational = true;
    v.q = *q;
    v.d = to_double(*q);
    return v;
  }
  try {
    std::size_t pos = 0;
    v.d = std::stod(text, &pos);
    if (pos != text.size()) throw std::invalid_argument(text);
  } catch (...) {
    throw CliError{2, "flag " + flag + ": cannot parse '" + text +
                          "' as a rational a/b or a decimal"};
  }
  return v;
}

std::string echo(const ProbValue& v) { return v.is_rational ? rat_text(v.q) : fstr(v.d); }

void require_open01(const ProbValue& v) {
  bool ok = v.is_rational ? (v.q > 0 && v.q < 1) : (v.d > 0 && v.d < 1);
  if (!ok) throw CliError{2, "flag " + v.flag + " must lie strictly inside (0,1)"};
}

template <class S>
S prob_as(const ProbValue& v);
template <>
Rational prob_as<Rational>(const ProbValue& v) { return v.q; }
template <>
double prob_as<double>(const ProbValue& v) { return v.d; }

struct ChainFlags {
  long n = 1;
  std::string a1, a2, b1, b2;
  std::string backend;  // "", "exact", "float"

  void attach(CLI::App* cmd, bool with_backend) {
    cmd->add_option("--n", n, "number of dice N")->required()->check(CLI::PositiveNumber);
    cmd->add_option("--alpha1", a1, "repeat probability of face 1")->required();
    cmd->add_option("--alpha2", a2, "repeat probability of face 2")->required();
    cmd->add_option("--beta1", b1, "throw probability of face 1")->required();
    cmd->add_option("--beta2", b2, "throw probability of face 2")->required();
    if (with_backend)
      cmd->add_option("--backend", backend, "arithmetic backend")
          ->check(CLI::IsMember({"exact", "float"}));
  }
};

struct ChainProbs {
  ProbValue a1, a2, b1, b2;

  bool all_rational() const {
    return a1.is_rational && a2.is_rational && b1.is_rational && b2.is_rational;
  }
  const ProbValue* first_decimal() const {
    for (const ProbValue* v : {&a1, &a2, &b1, &b2})
      if (!v->is_rational) return v;
    return nullptr;
  }
};

ChainProbs parse_chain(const ChainFlags& f) {
  ChainProbs p{parse_prob("--alpha1", f.a1), parse_prob("--alpha2", f.a2),
               parse_prob("--beta1", f.b1), parse_prob("--beta2", f.b2)};
  require_open01(p.a1);
  require_open01(p.a2);
  require_open01(p.b1);
  require_open01(p.b2);
  bool sum_ok = (p.b1.is_rational && p.b2.is_rational) ? (p.b1.q + p.b2.q < 1)
                                                       : (p.b1.d + p.b2.d < 1);
  if (!sum_ok) throw CliError{2, "flags --beta1 and --beta2 must sum to less than 1"};
  return p;
}

bool pick_exact(const ChainFlags& f, const ChainProbs& p) {
  if (f.backend == "float") return false;
  if (f.backend == "exact") {
    if (const ProbValue* bad = p.first_decimal())
      throw CliError{2, "backend 'exact' needs rational inputs, but " + bad->flag + "='" +
                            bad->text + "' is a decimal"};
    return true;
  }
  return p.all_rational();
}

template <class S>
ChainParams<S> chain_params(long n, const ChainProbs& p) {
  ChainParams<S> cp{n, prob_as<S>(p.a1), prob_as<S>(p.a2), prob_as<S>(p.b1), prob_as<S>(p.b2)};
  cp.validate();
  return cp;
}

ordered_json chain_inputs(long n, const ChainProbs& p, const std::string& backend) {
  return ordered_json{{"n", n},
                      {"alpha1", echo(p.a1)},
                      {"alpha2", echo(p.a2)},
                      {"beta1", echo(p.b1)},
                      {"beta2", echo(p.b2)},
                      {"backend", backend}};
}

ordered_json states_json(const StateSpace& sp) {
  ordered_json a = ordered_json::array();
  for (const auto& [i1, i2] : sp.states) a.push_back(ordered_json::array({i1, i2}));
  return a;
}

template <class S>
ordered_json matrix_json(const DenseMatrix<S>& M) {
  ordered_json rows = ordered_json::array();
  for (long r = 0; r < M.rows(); ++r) {
    ordered_json row = ordered_json::array();
    for (long c = 0; c < M.cols(); ++c) row.push_back(value_json(M(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

int emit(ordered_json doc, int exit_code) {
  std::cout << doc.dump(2) << "\n";
  return exit_code;
}

// ---- kernel -------------------------------------------------------------

std::string csv_cell(const Rational& v) { return rat_text(v); }
std::string csv_cell(double v) { return fstr(v); }

// header row lists destination states, each following row is one source
// state, so cell (src, dst) transposes the column-stochastic matrix
template <class S>
void write_csv(const KernelMatrix<S>& km) {
  const StateSpace& sp = km.space;
  std::cout << "source";
  for (const auto& [i1, i2] : sp.states)
    std::cout << ",\"(" << i1 << "," << i2 << ")\"";
  std::cout << "\n";
  for (long c = 0; c < sp.size(); ++c) {
    std::cout << "\"(" << sp.states[c].first << "," << sp.states[c].second << ")\"";
    for (long r = 0; r < sp.size(); ++r) std::cout << "," << csv_cell(km.M(r, c));
    std::cout << "\n";
  }
}

template <class S>
int kernel_run(long n, const ChainProbs& probs, const std::string& evaluator,
               const std::string& format, const std::string& backend_name) {
  ChainParams<S> cp = chain_params<S>(n, probs);
  std::vector<std::pair<std::string, KernelMatrix<S>>> evals;
  if (evaluator == "conv" || evaluator == "all")
    evals.emplace_back("conv", kernel_convolution(cp));
  if (evaluator == "closed" || evaluator == "all")
    evals.emplace_back("closed", kernel_closed(cp));
  if (evaluator == "f3" || evaluator == "all") evals.emplace_back("f3", kernel_f3(cp));
  const KernelMatrix<S>& primary = evals.front().second;
  long sz = primary.space.size();

  bool sums_exact = true;
  double sums_dev = 0;
  for (long c = 0; c < sz; ++c) {
    S s(0);
    for (long r = 0; r < sz; ++r) s += primary.M(r, c);
    if constexpr (std::is_same_v<S, Rational>) {
      if (s != S(1)) sums_exact = false;
    } else {
      sums_dev = std::max(sums_dev, std::abs(s - 1.0));
    }
  }
  bool sums_ok = std::is_same_v<S, Rational> ? sums_exact : sums_dev < 1e-12;

  bool evals_equal = true;
  double evals_dev = 0;
  for (std::size_t e = 1; e < evals.size(); ++e)
    for (long c = 0; c < sz; ++c)
      for (long r = 0; r < sz; ++r) {
        S d = evals[e].second.M(r, c) - primary.M(r, c);
        if constexpr (std::is_same_v<S, Rational>) {
          if (d != S(0)) evals_equal = false;
          evals_dev = std::max(evals_dev, std::abs(to_double(d)));
        } else {
          evals_dev = std::max(evals_dev, std::abs(d));
        }
      }
  if constexpr (!std::is_same_v<S, Rational>) evals_equal = evals_dev < 1e-12;

  bool pass = sums_ok && (evals.size() < 2 || evals_equal);
  if (format == "csv") {
    write_csv(primary);
    if (!pass) std::cerr << "kernel checks failed (column sums or evaluator agreement)\n";
    return pass ? 0 : 1;
  }

  ordered_json doc;
  doc["schema_version"] = "1";
  doc["command"] = "kernel";
  ordered_json inputs = chain_inputs(n, probs, backend_name);
  inputs["evaluator"] = evaluator;
  inputs["format"] = format;
  doc["inputs"] = inputs;

  ordered_json res;
  res["orientation"] = "column-stochastic: matrix[r][c] = P(states[c] -> states[r])";
  res["states"] = states_json(primary.space);
  res["matrix"] = matrix_json(primary.M);
  if constexpr (std::is_same_v<S, Rational>) {
    res["column_sums_exact"] = sums_exact;
  } else {
    res["column_sums_max_deviation"] = fstr(sums_dev);
  }
  if (evals.size() > 1) {
    res["evaluators"] = ordered_json::array();
    for (const auto& [name, km] : evals) res["evaluators"].push_back(name);
    res["evaluator_max_discrepancy"] = fstr(evals_dev);
    res["evaluators_agree"] = evals_equal;
  }
  res["checks_pass"] = pass;
  doc["results"] = std::move(res);
  return emit(std::move(doc), pass ? 0 : 1);
}

// ---- spectrum -----------------------------------------------------------

const char* branch_name(RootBranch b) {
  switch (b) {
    case RootBranch::plus: return "plus";
    case RootBranch::minus: return "minus";
    default: return "degenerate";
  }
}

int spectrum_run(long n, const ChainProbs& probs, bool arbitrate) {
  ChainParams<double> cp = chain_params<double>(n, probs);
  auto fp = solve_fixed_points(cp);
  auto candidates = eigenvalues_analytic(cp, fp);
  StateSpace sp(n);

  ordered_json res;
  res["discriminant"] = fstr(fp.first.discriminant);
  double worst_residual = 0;
  auto sol_json = [&](const FixedPointSolution<double>& s) {
    auto r = fixed_point_residuals(s, cp);
    double mx = 0;
    ordered_json rj = ordered_json::array();
    for (double v : r) {
      mx = std::max(mx, std::abs(v));
      rj.push_back(fstr(v));
    }
    worst_residual = std::max(worst_residual, mx);
    return ordered_json{{"branch", branch_name(s.branch)}, {"t", fstr(s.t)},
                        {"u", fstr(s.u)},                  {"v", fstr(s.v)},
                        {"w", fstr(s.w)},                  {"residuals", std::move(rj)},
                        {"max_residual", fstr(mx)}};
  };
  res["fixed_points"] = ordered_json::array({sol_json(fp.first), sol_json(fp.second)});
  res["degree_pairs"] = states_json(sp);
  res["candidates"] = ordered_json::array();
  for (const auto& c : candidates) {
    ordered_json vals = ordered_json::array();
    for (double v : c.values) vals.push_back(fstr(v));
    res["candidates"].push_back(ordered_json{{"label", c.label}, {"values", std::move(vals)}});
  }

  bool resid_ok = worst_residual < 1e-10;
  bool match_ok = true;
  if (arbitrate) {
    SpectrumReport rep = verify_spectrum(cp);
    ordered_json nums = ordered_json::array();
    for (double v : rep.numeric) nums.push_back(fstr(v));
    res["numeric_spectrum"] = std::move(nums);
    ordered_json matches = ordered_json::array();
    bool any = false;
    for (const auto& c : rep.candidates) {
      any = any || c.matched;
      matches.push_back(ordered_json{{"label", c.label},
                                     {"max_deviation", fstr(c.max_deviation)},
                                     {"matched", c.matched}});
    }
    res["matches"] = std::move(matches);
    res["verdict"] = rep.verdict;
    match_ok = any;
  }
  bool pass = resid_ok && match_ok;
  res["checks_pass"] = pass;

  ordered_json doc;
  doc["schema_version"] = "1";
  doc["command"] = "spectrum";
  ordered_json inputs = chain_inputs(n, probs, "float");
  inputs["arbitrate"] = arbitrate;
  doc["inputs"] = inputs;
  doc["results"] = std::move(res);
  return emit(std::move(doc), pass ? 0 : 1);
}

// ---- poly ---------------------------------------------------------------

std::array<ProbValue, 4> parse_quad(const std::string& flag, const std::string& text) {
  std::vector<std::string> parts;
  std::string cur;
  for (char ch : text) {
    if (ch == ',') {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  parts.push_back(cur);
  if (parts.size() != 4)
    throw CliError{2, "flag " + flag + " needs exactly four comma-separated values"};
  return {parse_prob(flag, parts[0]), parse_prob(flag, parts[1]), parse_prob(flag, parts[2]),
          parse_prob(flag, parts[3])};
}

std::string echo_quad(const std::array<ProbValue, 4>& q) {
  return echo(q[0]) + "," + echo(q[1]) + "," + echo(q[2]) + "," + echo(q[3]);
}

template <class S>
ordered_json eta_json(const EtaPair<S>& e) {
  return ordered_json{{"eta1", value_json(e.eta1)},
                      {"eta2", value_json(e.eta2)},
                      {"complement", value_json(e.complement)}};
}

template <class S>
ordered_json tuvw_json(const TUVWParams<S>& t) {
  return ordered_json{{"t", value_json(t.t)},
                      {"u", value_json(t.u)},
                      {"v", value_json(t.v)},
                      {"w", value_json(t.w)}};
}

std::vector<std::pair<long, long>> degree_list(long N, long m, long mm, bool single) {
  if (single) {
    if (m < 0 || mm < 0 || m + mm > N)
      throw CliError{2, "flags --m/--mm must satisfy m >= 0, mm >= 0, m + mm <= N"};
    return {{m, mm}};
  }
  std::vector<std::pair<long, long>> d;
  for (long i = 0; i <= N; ++i)
    for (long j = 0; i + j <= N; ++j) d.emplace_back(i, j);
  return d;
}

// exact path: P and R tabulated in rational/surd arithmetic, Gram matrix
// checked for exact equality with the identity
int poly_run_exact_p(const PParams& pp, long N, const std::vector<std::pair<long, long>>& degrees,
                     bool full_gram, ordered_json inputs) {
  EtaPair<Rational> eta = eta_from_p(pp);
  EtaPair<Rational> etab = etabar_from_p(pp);
  TUVWParams<Rational> par = tuvw_from_p(pp);

  ordered_json table = ordered_json::array();
  for (const auto& [m, mm] : degrees) {
    ordered_json grid = ordered_json::array();
    for (long x = 0; x <= N; ++x)
      for (long y = 0; x + y <= N; ++y)
        grid.push_back(ordered_json{{"x", x},
                                    {"y", y},
                                    {"P", rat_json(poly_P(m, mm, x, y, N, par))},
                                    {"R", surd_json(orthonormal_R(m, mm, x, y, N, pp))}});
    table.push_back(ordered_json{{"m", m}, {"mm", mm}, {"grid", std::move(grid)}});
  }

  // Gram entries close under surd addition: the x,y-dependent part of each
  // product of two R values is a perfect square
  bool exact_ok = true;
  double max_dev = 0;
  std::size_t limit = full_gram ? degrees.size() : 1;
  for (std::size_t i = 0; i < limit; ++i)
    for (std::size_t j = i; j < (full_gram ? degrees.size() : i + 1); ++j) {
      Surd acc;
      for (long x = 0; x <= N; ++x)
        for (long y = 0; x + y <= N; ++y)
          acc += orthonormal_R(degrees[i].first, degrees[i].second, x, y, N, pp) *
                 orthonormal_R(degrees[j].first, degrees[j].second, x, y, N, pp);
      Surd target = (i == j) ? Surd(Rational(1)) : Surd();
      if (acc != target) {
        exact_ok = false;
        max_dev = std::max(max_dev, std::abs((acc - target).to_double()));
      }
    }

  ordered_json res;
  res["eta"] = eta_json(eta);
  res["etabar"] = eta_json(etab);
  res["tuvw"] = tuvw_json(par);
  res["table"] = std::move(table);
  res["orthonormality"] = ordered_json{{"scope", full_gram ? "full gram matrix" : "single degree norm"},
                                       {"exact", exact_ok},
                                       {"max_residual", exact_ok ? "0" : fstr(max_dev)}};
  res["checks_pass"] = exact_ok;

  ordered_json doc;
  doc["schema_version"] = "1";
  doc["command"] = "poly";
  doc["inputs"] = std::move(inputs);
  doc["results"] = std::move(res);
  return emit(std::move(doc), exact_ok ? 0 : 1);
}

// float path: same document shape with 17-digit strings, tolerance 1e-12
int poly_run_float_p(const std::array<double, 4>& p, long N,
                     const std::vector<std::pair<long, long>>& degrees, bool full_gram,
                     ordered_json inputs) {
  double S = p[0] + p[1] + p[2] + p[3];
  EtaPair<double> eta{p[0] * p[1] * S / ((p[0] + p[1]) * (p[0] + p[2]) * (p[1] + p[3])),
                      p[2] * p[3] * S / ((p[0] + p[2]) * (p[3] + p[1]) * (p[3] + p[2])), 0};
  eta.complement = 1 - eta.eta1 - eta.eta2;
  EtaPair<double> etab{p[0] * p[2] * S / ((p[0] + p[1]) * (p[0] + p[2]) * (p[2] + p[3])),
                       p[1] * p[3] * S / ((p[0] + p[1]) * (p[1] + p[3]) * (p[3] + p[2])), 0};
  etab.complement = 1 - etab.eta1 - etab.eta2;
  TUVWParams<double> par{(p[0] + p[1]) * (p[0] + p[2]) / (p[0] * S),
                         (p[0] + p[2]) * (p[3] + p[2]) / (p[2] * S),
                         (p[0] + p[1]) * (p[1] + p[3]) / (p[1] * S),
                         (p[3] + p[1]) * (p[3] + p[2]) / (p[3] * S)};
  auto R = [&](long m, long mm, long x, long y) {
    return std::sqrt(trinomial_pmf(x, y, N, eta) * trinomial_pmf(m, mm, N, etab) /
                     std::pow(eta.complement, static_cast<double>(N))) *
           poly_P(m, mm, x, y, N, par);
  };

  ordered_json table = ordered_json::array();
  for (const auto& [m, mm] : degrees) {
    ordered_json grid = ordered_json::array();
    for (long x = 0; x <= N; ++x)
      for (long y = 0; x + y <= N; ++y)
        grid.push_back(ordered_json{{"x", x},
                                    {"y", y},
                                    {"P", fstr(poly_P(m, mm, x, y, N, par))},
                                    {"R", fstr(R(m, mm, x, y))}});
    table.push_back(ordered_json{{"m", m}, {"mm", mm}, {"grid", std::move(grid)}});
  }

  double max_dev = 0;
  std::size_t limit = full_gram ? degrees.size() : 1;
  for (std::size_t i = 0; i < limit; ++i)
    for (std::size_t j = i; j < (full_gram ? degrees.size() : i + 1); ++j) {
      double acc = 0;
      for (long x = 0; x <= N; ++x)
        for (long y = 0; x + y <= N; ++y)
          acc += R(degrees[i].first, degrees[i].second, x, y) *
                 R(degrees[j].first, degrees[j].second, x, y);
      max_dev = std::max(max_dev, std::abs(acc - (i == j ? 1.0 : 0.0)));
    }
  bool pass = max_dev < 1e-12;

  ordered_json res;
  res["eta"] = eta_json(eta);
  res["etabar"] = eta_json(etab);
  res["tuvw"] = tuvw_json(par);
  res["table"] = std::move(table);
  res["orthonormality"] = ordered_json{{"scope", full_gram ? "full gram matrix" : "single degree norm"},
                                       {"exact", false},
                                       {"max_residual", fstr(max_dev)}};
  res["checks_pass"] = pass;

  ordered_json doc;
  doc["schema_version"] = "1";
  doc["command"] = "poly";
  doc["inputs"] = std::move(inputs);
  doc["results"] = std::move(res);
  return emit(std::move(doc), pass ? 0 : 1);
}

template <class S>
int poly_run_tuvw(const TUVWParams<S>& par, long N,
                  const std::vector<std::pair<long, long>>& degrees, ordered_json inputs) {
  ordered_json table = ordered_json::array();
  for (const auto& [m, mm] : degrees) {
    ordered_json grid = ordered_json::array();
    for (long x = 0; x <= N; ++x)
      for (long y = 0; x + y <= N; ++y)
        grid.push_back(
            ordered_json{{"x", x}, {"y", y}, {"P", value_json(poly_P(m, mm, x, y, N, par))}});
    table.push_back(ordered_json{{"m", m}, {"mm", mm}, {"grid", std::move(grid)}});
  }
  ordered_json res;
  res["tuvw"] = tuvw_json(par);
  res["table"] = std::move(table);
  res["checks_pass"] = true;

  ordered_json doc;
  doc["schema_version"] = "1";
  doc["command"] = "poly";
  doc["inputs"] = std::move(inputs);
  doc["results"] = std::move(res);
  return emit(std::move(doc), 0);
}

// ---- ninej --------------------------------------------------------------

int ninej_value_run(const std::vector<long>& args) {
  for (long v : args)
    if (v < 0) throw CliError{2, "flag --args: two_j values must be nonnegative"};
  NineJArgs a{HalfInt::from_twice(args[0]), HalfInt::from_twice(args[1]),
              HalfInt::from_twice(args[2]), HalfInt::from_twice(args[3]),
              HalfInt::from_twice(args[4]), HalfInt::from_twice(args[5]),
              HalfInt::from_twice(args[6]), HalfInt::from_twice(args[7]),
              HalfInt::from_twice(args[8])};
  Surd v = ninej(a);

  ordered_json doc;
  doc["schema_version"] = "1";
  doc["command"] = "ninej";
  doc["inputs"] = ordered_json{{"args", args}};
  doc["results"] = ordered_json{{"value", surd_json(v)}};
  return emit(std::move(doc), 0);
}

int ninej_ortho_run(long max_two_j) {
  if (max_two_j < 0) throw CliError{2, "flag --orthocheck: max two_j must be nonnegative"};
  NineJOrthogonalityReport rep = ninej_orthogonality_sweep(max_two_j);

  ordered_json doc;
  doc["schema_version"] = "1";
  doc["command"] = "ninej";
  doc["inputs"] = ordered_json{{"orthocheck", max_two_j}};
  doc["results"] = ordered_json{{"families", rep.families},
                                {"pair_checks", rep.pair_checks},
                                {"all_pass", rep.all_pass},
                                {"first_failure", rep.first_failure}};
  return emit(std::move(doc), rep.all_pass ? 0 : 1);
}

// ---- simulate -----------------------------------------------------------

int simulate_run(long n, const ChainProbs& probs, std::uint64_t seed, long long steps,
                 long replicas, const std::string& mode) {
  ChainParams<double> cp = chain_params<double>(n, probs);
  SimConfig cfg{seed, replicas, steps, cp};
  cfg.validate();

  ordered_json res;
  res["determinism"] =
      ordered_json{{"seed", seed},
                   {"generator", CounterRng::name()},
                   {"streams", "kernel mode keys stream replica*state_count+source_index, "
                               "stationary mode keys stream by replica; draw n is "
                               "finalize(key + n*0x9e3779b97f4a7c15)"}};

  bool pass = false;
  if (mode == "kernel") {
    EmpiricalKernel emp = estimate_kernel(cfg);
    KernelMatrix<double> exact = kernel_convolution(cp);
    DenseMatrix<double> est = emp.estimates();
    long sz = emp.space.size();
    double max_tv = 0;
    for (long c = 0; c < sz; ++c) {
      double tv = 0;
      for (long r = 0; r < sz; ++r) tv += std::abs(est(r, c) - exact.M(r, c));
      max_tv = std::max(max_tv, tv / 2);
    }
    pass = max_tv < 0.01;

    ordered_json counts = ordered_json::array();
    for (long r = 0; r < sz; ++r) {
      ordered_json row = ordered_json::array();
      for (long c = 0; c < sz; ++c) row.push_back(emp.counts(r, c));
      counts.push_back(std::move(row));
    }
    res["states"] = states_json(emp.space);
    res["draws_per_source"] = emp.totals.front();
    res["counts"] = std::move(counts);
    res["max_column_tv"] = fstr(max_tv);
    res["tolerance"] = "0.01";
  } else {
    RunResult rr = run_chain(cfg);
    pass = rr.tv_to_stationary < 0.01;
    ordered_json occ = ordered_json::array();
    for (long i = 0; i < rr.occupancy.size(); ++i) occ.push_back(fstr(rr.occupancy(i)));
    res["states"] = states_json(StateSpace(n));
    res["occupancy"] = std::move(occ);
    res["kept_steps"] = rr.kept_steps;
    res["burned_steps"] = rr.burned_steps;
    res["tv_to_stationary"] = fstr(rr.tv_to_stationary);
    res["lag1_autocorrelation"] = fstr(rr.lag1_autocorrelation);
    res["tolerance"] = "0.01";
  }
  res["checks_pass"] = pass;

  ordered_json doc;
  doc["schema_version"] = "1";
  doc["command"] = "simulate";
  ordered_json inputs = chain_inputs(n, probs, "float");
  inputs["seed"] = seed;
  inputs["steps"] = steps;
  inputs["replicas"] = replicas;
  inputs["mode"] = mode;
  doc["inputs"] = inputs;
  doc["results"] = std::move(res);
  return emit(std::move(doc), pass ? 0 : 1);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cumulative bivariate Bernoulli trials toolkit"};
  app.require_subcommand(1);

  auto* kernel_cmd = app.add_subcommand("kernel", "transition matrix of the dice chain");
  ChainFlags kf;
  kf.attach(kernel_cmd, true);
  std::string evaluator = "conv", format = "json";
  kernel_cmd->add_option("--evaluator", evaluator, "kernel evaluator, or 'all' to cross-check")
      ->check(CLI::IsMember({"conv", "closed", "f3", "all"}));
  kernel_cmd->add_option("--format", format, "output format")
      ->check(CLI::IsMember({"json", "csv"}));

  auto* spectrum_cmd =
      app.add_subcommand("spectrum", "fixed points and eigenvalue candidates of the kernel");
  ChainFlags sf;
  sf.attach(spectrum_cmd, false);
  bool arbitrate = false;
  spectrum_cmd->add_flag("--arbitrate", arbitrate,
                         "diagonalize the kernel and match candidates against it");

  auto* poly_cmd = app.add_subcommand("poly", "polynomial tables on the triangular grid");
  std::string p_text, tuvw_text;
  long poly_n = 0, deg_m = 0, deg_mm = 0;
  auto* p_opt = poly_cmd->add_option("--p", p_text, "weight parameters p1,p2,p3,p4");
  auto* tuvw_opt = poly_cmd->add_option("--tuvw", tuvw_text, "direct parameters t,u,v,w");
  p_opt->excludes(tuvw_opt);
  tuvw_opt->excludes(p_opt);
  poly_cmd->add_option("--n", poly_n, "grid size N")->required()->check(CLI::NonNegativeNumber);
  auto* m_opt = poly_cmd->add_option("--m", deg_m, "first degree index");
  auto* mm_opt = poly_cmd->add_option("--mm", deg_mm, "second degree index");
  m_opt->needs(mm_opt);
  mm_opt->needs(m_opt);

  auto* ninej_cmd = app.add_subcommand("ninej", "recoupling coefficients in exact surd form");
  std::vector<long> ninej_args;
  long ortho_max = -1;
  auto* args_opt =
      ninej_cmd->add_option("--args", ninej_args, "nine two_j integers, row-major")->expected(9);
  auto* ortho_opt = ninej_cmd->add_option("--orthocheck", ortho_max,
                                          "verify the delta identity for all two_j up to this");
  args_opt->excludes(ortho_opt);
  ortho_opt->excludes(args_opt);

  auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo runs against exact oracles");
  ChainFlags mf;
  mf.attach(sim_cmd, false);
  std::uint64_t seed = 0;
  long long steps = 10000;
  long replicas = 1;
  std::string mode = "kernel";
  sim_cmd->add_option("--seed", seed, "stream seed");
  sim_cmd->add_option("--steps", steps, "draws per source (kernel) or chain steps (stationary)")
      ->check(CLI::PositiveNumber);
  sim_cmd->add_option("--replicas", replicas, "independent replicas")
      ->check(CLI::PositiveNumber);
  sim_cmd->add_option("--mode", mode, "what to estimate")
      ->check(CLI::IsMember({"kernel", "stationary"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*kernel_cmd) {
      ChainProbs probs = parse_chain(kf);
      bool exact = pick_exact(kf, probs);
      return exact ? kernel_run<Rational>(kf.n, probs, evaluator, format, "exact")
                   : kernel_run<double>(kf.n, probs, evaluator, format, "float");
    }
    if (*spectrum_cmd) return spectrum_run(sf.n, parse_chain(sf), arbitrate);
    if (*poly_cmd) {
      bool single = m_opt->count() > 0;
      auto degrees = degree_list(poly_n, deg_m, deg_mm, single);
      if (p_opt->count() > 0) {
        auto quad = parse_quad("--p", p_text);
        bool exact = quad[0].is_rational && quad[1].is_rational && quad[2].is_rational &&
                     quad[3].is_rational;
        ordered_json inputs{{"p", echo_quad(quad)},
                            {"n", poly_n},
                            {"backend", exact ? "exact" : "float"}};
        if (single) {
          inputs["m"] = deg_m;
          inputs["mm"] = deg_mm;
        }
        if (exact) {
          PParams pp{quad[0].q, quad[1].q, quad[2].q, quad[3].q};
          if (pp.p1 <= 0 || pp.p2 <= 0 || pp.p3 <= 0 || pp.p4 <= 0)
            throw CliError{2, "flag --p: entries must be strictly positive"};
          if (pp.degenerate())
            throw CliError{2, "flag --p: degenerate weight (p1*p4 == p2*p3), "
                              "orthonormal functions are undefined"};
          return poly_run_exact_p(pp, poly_n, degrees, !single, std::move(inputs));
        }
        std::array<double, 4> pd{quad[0].d, quad[1].d, quad[2].d, quad[3].d};
        for (double v : pd)
          if (!(v > 0)) throw CliError{2, "flag --p: entries must be strictly positive"};
        if (pd[0] * pd[3] == pd[1] * pd[2])
          throw CliError{2, "flag --p: degenerate weight (p1*p4 == p2*p3), "
                            "orthonormal functions are undefined"};
        return poly_run_float_p(pd, poly_n, degrees, !single, std::move(inputs));
      }
      if (tuvw_opt->count() > 0) {
        auto quad = parse_quad("--tuvw", tuvw_text);
        bool exact = quad[0].is_rational && quad[1].is_rational && quad[2].is_rational &&
                     quad[3].is_rational;
        ordered_json inputs{{"tuvw", echo_quad(quad)},
                            {"n", poly_n},
                            {"backend", exact ? "exact" : "float"}};
        if (single) {
          inputs["m"] = deg_m;
          inputs["mm"] = deg_mm;
        }
        if (exact)
          return poly_run_tuvw(TUVWParams<Rational>{quad[0].q, quad[1].q, quad[2].q, quad[3].q},
                               poly_n, degrees, std::move(inputs));
        return poly_run_tuvw(TUVWParams<double>{quad[0].d, quad[1].d, quad[2].d, quad[3].d},
                             poly_n, degrees, std::move(inputs));
      }
      throw CliError{2, "poly needs --p or --tuvw"};
    }
    if (*ninej_cmd) {
      if (args_opt->count() > 0) return ninej_value_run(ninej_args);
      if (ortho_opt->count() > 0) return ninej_ortho_run(ortho_max);
      throw CliError{2, "ninej needs --args or --orthocheck"};
    }
    if (*sim_cmd) return simulate_run(mf.n, parse_chain(mf), seed, steps, replicas, mode);
  } catch (const CliError& e) {
    std::cerr << "error: " << e.message << "\n";
    return e.code;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
