#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "core.hpp"

namespace fptmix::bounds {

// x log x with 0 log 0 = 0.
inline double xlogx(double x) {
  if (x < 0) return std::numeric_limits<double>::quiet_NaN();
  return x == 0 ? 0.0 : x * std::log(x);
}

// e log b with 0 log b = 0 for any b >= 0.
inline double plog(double e, double b) {
  if (e == 0) return 0.0;
  return b > 0 ? e * std::log(b) : -std::numeric_limits<double>::infinity();
}

// log of c^(2-a) / (a^a (c - a)^(2 - 2a))
inline double log_g(double a, double c) { return (2 - a) * std::log(c) - xlogx(a) - plog(2 - 2 * a, c - a); }

// log of (c(1+b))^(5b-1) / ((3(1-b))^(3(1-b)) (c(1+b) - 3(1-b))^(4(2b-1)))
inline double log_h(double b, double c) {
  return plog(5 * b - 1, c * (1 + b)) - xlogx(3 * (1 - b)) - plog(4 * (2 * b - 1), c * (1 + b) - 3 * (1 - b));
}

struct Maximum {
  double arg = 0;
  double value = -std::numeric_limits<double>::infinity();
};

// Grid scan followed by golden-section refinement around the best grid point.
inline Maximum maximize(const std::function<double(double)>& f, double lo, double hi, int grid = 10000,
                        double tol = 1e-12) {
  if (!(lo <= hi)) throw InvalidInput("empty maximization interval");
  int best = 0;
  double best_v = -std::numeric_limits<double>::infinity();
  for (int t = 0; t <= grid; ++t) {
    double v = f(lo + (hi - lo) * t / grid);
    if (v > best_v) {
      best_v = v;
      best = t;
    }
  }
  double a = lo + (hi - lo) * std::max(0, best - 1) / grid;
  double b = lo + (hi - lo) * std::min(grid, best + 1) / grid;
  const double r = (std::sqrt(5.0) - 1) / 2;
  while (b - a > tol) {
    double x1 = b - r * (b - a), x2 = a + r * (b - a);
    if (f(x1) < f(x2))
      a = x1;
    else
      b = x2;
  }
  Maximum m{(a + b) / 2, f((a + b) / 2)};
  // keep the grid point if refinement wandered off an endpoint maximum
  double gp = lo + (hi - lo) * best / grid;
  if (best_v > m.value) m = {gp, best_v};
  return m;
}

inline const double kFour = std::pow(4.0, 1e-10);
inline const double kTwo = std::pow(2.0, 1e-10);

struct AlphaBetaRow {
  double c = 0;
  double alpha = 0;
  double first = 0;  // g(alpha)^(6/(3+alpha)) 4^(1e-10)
  double threshold = 0;
  double beta = 0;
  double second = 0;  // h(beta) 4^(1e-10)
};

inline AlphaBetaRow alpha_beta_row(double c) {
  if (c < 1) throw InvalidInput("c must be at least 1");
  AlphaBetaRow r;
  r.c = c;
  auto a = maximize([&](double x) { return log_g(x, c); }, 0, 1);
  r.alpha = a.arg;
  r.first = std::exp(a.value * 6 / (3 + r.alpha)) * kFour;
  r.threshold = (3 - r.alpha) / (3 + r.alpha);
  auto b = maximize([&](double x) { return log_h(x, c); }, r.threshold, 1);
  r.beta = b.arg;
  r.second = std::exp(b.value) * kFour;
  return r;
}

inline std::vector<AlphaBetaRow> alpha_beta_table(const std::vector<double>& cs) {
  std::vector<AlphaBetaRow> out;
  for (double c : cs) out.push_back(alpha_beta_row(c));
  return out;
}

// Out-branching bound with l* = 1/k.
inline double kiob_det_bound(double c) {
  auto r = alpha_beta_row(c);
  return std::max(r.first, r.second);
}

// Out-branching bound with l* = gamma k.
inline double kiob_rand_bound(double c, double gamma) {
  auto r = alpha_beta_row(c);
  if (r.beta <= gamma) return std::exp(log_h(gamma, c)) * kFour;
  if (r.threshold <= gamma) return r.second;
  return std::max(r.first, r.second);
}

// The cross term 2^(1 + gamma) of the randomized algorithm.
inline double kiob_rand_cross_term(double gamma) { return std::pow(2.0, 1 + gamma); }

struct KpathParams {
  double delta = 0.046;
  double gamma = 0.084;
  double c1 = 1.504;
  double c2 = 1.398;
  double cl = 1.092;
  double cr = 1.876;
};

struct KpathBound {
  double z = 0, z1 = 0, z2 = 0;
  double z1_arg = 0, z2_arg = 0;
  double alpha_l = 0, alpha_r = 0, beta2 = 0, alpha_prime = 0;
};

// printed_exponent uses (1/2 - delta) gamma on the c_r factor of the second branch, as printed;
// the default (1/2 + delta) gamma is the form that reproduces the tabulated Z_2 values.
inline KpathBound kpath_bound(const KpathParams& p, bool printed_exponent = false) {
  const double d = p.delta, g = p.gamma;
  KpathBound b;
  b.alpha_l = maximize([&](double a) { return log_g(a, p.cl); }, 0, 1).arg;
  b.alpha_r = maximize([&](double a) { return log_g(a, p.cr); }, 0, 1).arg;
  b.beta2 = maximize([&](double a) { return log_g(a, p.c2); }, 0, 1).arg;
  b.alpha_prime = std::max(0.0, (b.beta2 - 0.5 - d) / (0.5 - d));
  const double er = printed_exponent ? (0.5 - d) * g : (0.5 + d) * g;
  auto y1 = maximize([&](double a) { return (0.5 + d) * g * log_g(a, p.cl) + (1 - g) * log_g(a * (0.5 + d), p.c1); },
                     b.alpha_l, 1);
  auto y2 = maximize(
      [&](double a) { return er * log_g(a, p.cr) + (1 - g) * log_g(0.5 + d + a * (0.5 - d), p.c2); }, b.alpha_prime,
      b.alpha_r);
  const double binom = g * -(xlogx(0.5 - d) + xlogx(0.5 + d));
  b.z1 = std::exp(y1.value + binom) * kTwo;
  b.z2 = std::exp(y2.value + binom) * kTwo;
  b.z1_arg = y1.arg;
  b.z2_arg = y2.arg;
  b.z = std::max(b.z1, b.z2);
  return b;
}

struct StageBound {
  double value = 0;
  long i = 0;
  double alpha = 0;
  double T = 0;  // T(i - 1)
};

namespace detail {

// Maximizes exp(phi(alpha, T(i-1))) over i = 1..1/eps and alpha in [i-1, i].
inline StageBound stage_maximum(const std::vector<double>& T, const std::function<double(double, double)>& phi) {
  const long N = static_cast<long>(T.size()) - 1;
  StageBound best;
  double best_v = -std::numeric_limits<double>::infinity();
  for (long i = 1; i <= N; ++i)
    for (double a : {static_cast<double>(i - 1), i - 0.5, static_cast<double>(i)}) {
      double v = phi(a, T[i - 1]);
      if (v > best_v) {
        best_v = v;
        best.i = i;
      }
    }
  const double t = T[best.i - 1];
  auto m = maximize([&](double a) { return phi(a, t); }, static_cast<double>(best.i - 1), static_cast<double>(best.i), 64,
                    1e-9);
  best.alpha = m.arg;
  best.T = t;
  best.value = std::exp(std::max(m.value, best_v));
  return best;
}

}  // namespace detail

inline std::vector<double> wsp_T(double eps) {
  const long N = std::lround(1 / eps);
  std::vector<double> T(N + 1, 0.0);
  for (long i = 2; i <= N; ++i)
    T[i] = T[i - 1] + eps * (2 * (i - 1) * eps - T[i - 1]) / (3 * (1 - (i - 1) * eps));
  return T;
}

// Cut set-packing bound.
inline StageBound wsp_bound(double c, double eps = 1e-5) {
  if (c < 1) throw InvalidInput("c must be at least 1");
  const auto T = wsp_T(eps);
  return detail::stage_maximum(T, [&](double a, double t) {
    const double A = c * (3 - a * eps - t), B = 2 * a * eps - t;
    return (6 - 4 * a * eps - t) * std::log(A) - xlogx(B) - (6 - 6 * a * eps) * std::log(A - B);
  });
}

inline std::vector<double> p2p_T(double eps) {
  const long N = std::lround(1 / eps);
  std::vector<double> T(N + 1, 0.0);
  for (long j = 1; j <= N; ++j)
    T[j] = T[j - 1] + eps * (2 + 2 * (j - 1) * eps - T[j - 1]) / (3 * (1 - (j - 1) * eps));
  return T;
}

// Cut P2-packing bound.
inline StageBound p2p_bound(double eps = 1e-5) {
  const auto T = p2p_T(eps);
  return detail::stage_maximum(T, [&](double a, double t) {
    return 0.5 * (xlogx(6 - a * eps - t) - xlogx(2 + 2 * a * eps - t) - xlogx(4 - 3 * a * eps));
  });
}

// Tabulated values, for printing deltas.
struct PaperRow {
  std::vector<double> params;
  std::vector<double> values;
};

inline const std::vector<PaperRow>& table1_reference() {
  static const std::vector<PaperRow> rows = {
      {{1.0}, {0.55013, 5.873, 0.69008, 0.71350, 5.9441}},     {{1.4}, {0.54908, 5.094, 0.69058, 0.71582, 5.1552}},
      {{1.45}, {0.55302, 5.080, 0.68870, 0.71441, 5.1424}},    {{1.495}, {0.55692, 5.075, 0.68685, 0.71299, 5.13864}},
      {{1.496}, {0.55701, 5.075, 0.68681, 0.71296, 5.13864}},  {{1.497}, {0.55710, 5.075, 0.68677, 0.71293, 5.13863}},
      {{1.498}, {0.55719, 5.075, 0.68672, 0.71289, 5.13863}},  {{1.499}, {0.55729, 5.075, 0.68669, 0.71286, 5.13864}},
      {{1.5}, {0.55737, 5.075, 0.68664, 0.71283, 5.13865}},
  };
  return rows;
}

inline const std::vector<PaperRow>& table2_reference() {
  static const std::vector<PaperRow> rows = {
      {{1.0}, {5.9441}},    {{1.4}, {5.1552}},    {{1.45}, {5.1424}},   {{1.495}, {5.13864}}, {{1.496}, {5.13864}},
      {{1.497}, {5.13863}}, {{1.498}, {5.13863}}, {{1.499}, {5.13864}}, {{1.5}, {5.13865}},
  };
  return rows;
}

inline const std::vector<PaperRow>& table3_reference() {
  static const std::vector<PaperRow> rows = {
      {{0.8544, 1.763}, {3.617665566}}, {{0.8544, 1.764}, {3.617665007}}, {{0.8544, 1.765}, {3.617665035}},
      {{0.8544, 1.766}, {3.617665648}}, {{0.8545, 1.763}, {3.615894763}}, {{0.8545, 1.764}, {3.615894103}},
      {{0.8545, 1.765}, {3.615894029}}, {{0.8545, 1.766}, {3.615894539}},
  };
  return rows;
}

inline const std::vector<PaperRow>& table4_reference() {
  static const std::vector<PaperRow> rows = {
      {{0.046, 0.084, 1.504, 1.398, 1.092, 1.876}, {2.5960542, 2.5960542, 2.5960425}},
      {{0.045, 0.084, 1.504, 1.398, 1.092, 1.876}, {2.5965734, 2.5953152, 2.5965734}},
      {{0.047, 0.084, 1.504, 1.398, 1.092, 1.876}, {2.5967889, 2.5967889, 2.5955049}},
      {{0.046, 0.083, 1.504, 1.398, 1.092, 1.876}, {2.5960903, 2.5960421, 2.5960903}},
      {{0.046, 0.085, 1.504, 1.398, 1.092, 1.876}, {2.5960711, 2.5960711, 2.5959989}},
      {{0.046, 0.084, 1.503, 1.398, 1.092, 1.876}, {2.5960547, 2.5960547, 2.5960425}},
      {{0.046, 0.084, 1.505, 1.398, 1.092, 1.876}, {2.5960545, 2.5960545, 2.5960425}},
      {{0.046, 0.084, 1.504, 1.397, 1.092, 1.876}, {2.5960542, 2.5960542, 2.5960430}},
      {{0.046, 0.084, 1.504, 1.399, 1.092, 1.876}, {2.5960542, 2.5960542, 2.5960434}},
      {{0.046, 0.084, 1.504, 1.398, 1.091, 1.876}, {2.5960544, 2.5960544, 2.5960425}},
      {{0.046, 0.084, 1.504, 1.398, 1.093, 1.876}, {2.5960545, 2.5960545, 2.5960425}},
      {{0.046, 0.084, 1.504, 1.398, 1.092, 1.875}, {2.5960542, 2.5960542, 2.5960425}},
  };
  return rows;
}

inline const std::vector<PaperRow>& table5_reference() {
  static const std::vector<PaperRow> rows = {
      {{1.59}, {8.096400, 54511, 0.1476545}},
      {{1.591}, {8.096396, 54515, 0.1476821}},
      {{1.592}, {8.096397, 54518, 0.1477028}},
  };
  return rows;
}

inline const PaperRow& p2p_reference() {
  static const PaperRow row{{1e-5}, {6.77682, 6377, 0.04485}};
  return row;
}

// Named-parameter entry point used by the command line.
struct BoundValue {
  double base = 0;
  std::map<std::string, double> argmax;
};

inline BoundValue eval_bound(const std::string& which, const std::map<std::string, double>& params) {
  auto get = [&](const char* name, double dflt) {
    auto it = params.find(name);
    return it == params.end() ? dflt : it->second;
  };
  BoundValue out;
  if (which == "kiob-det") {
    auto r = alpha_beta_row(get("c", 1.497));
    out.base = std::max(r.first, r.second);
    out.argmax = {{"alpha", r.alpha}, {"beta", r.beta}};
  } else if (which == "kiob-rand") {
    const double c = get("c", 1.765), g = get("gamma", 0.8545);
    out.base = kiob_rand_bound(c, g);
    out.argmax = {{"beta", g}, {"cross_term", kiob_rand_cross_term(g)}};
  } else if (which == "kpath") {
    KpathParams p{get("delta", 0.046), get("gamma", 0.084), get("c1", 1.504),
                  get("c2", 1.398),    get("cl", 1.092),    get("cr", 1.876)};
    auto b = kpath_bound(p, get("printed", 0) != 0);
    out.base = b.z;
    out.argmax = {{"z1", b.z1}, {"z1_alpha", b.z1_arg}, {"z2", b.z2}, {"z2_alpha", b.z2_arg}};
  } else if (which == "wsp") {
    auto b = wsp_bound(get("c", 1.591), get("eps", 1e-5));
    out.base = b.value;
    out.argmax = {{"i", static_cast<double>(b.i)}, {"alpha", b.alpha}, {"T", b.T}};
  } else if (which == "p2p") {
    auto b = p2p_bound(get("eps", 1e-5));
    out.base = b.value;
    out.argmax = {{"i", static_cast<double>(b.i)}, {"alpha", b.alpha}, {"T", b.T}};
  } else {
    throw InvalidInput("unknown bound: " + which);
  }
  return out;
}

}  // namespace fptmix::bounds
