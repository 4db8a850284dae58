#include "shiftthermo/oracle.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <functional>
#include <map>
#include <numbers>
#include <numeric>
#include <queue>
#include <span>

namespace shiftthermo::oracle {

namespace {

// phi_n of the point whose edges are `word` (long enough for every window).
double birkhoff_of_word(const Potential& phi, const GraphModel& g, const std::vector<EdgeId>& word, std::size_t n) {
  const std::size_t k = phi.depth();
  double s = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    s += phi.value(g, std::span<const EdgeId>(word.data() + j, k));
  }
  return s;
}

}  // namespace

double enumerate_Ln(const Potential& phi, const GraphModel& g, const CylinderFunction& f, const BasePoint& x,
                    std::size_t n) {
  const std::size_t k = phi.depth();
  const auto x_head = x.first_edges(g, k + f.depth());
  double total = 0.0;
  for (const auto& [mu, weight] : f.terms()) {
    const double w = weight.to_double();
    const std::size_t d = mu.length();
    auto finish = [&](const std::vector<EdgeId>& p) {
      std::vector<EdgeId> word = p;
      word.insert(word.end(), x_head.begin(), x_head.end());
      for (std::size_t i = 0; i < d; ++i) {
        if (word[i] != mu.edges()[i]) return;
      }
      total += w * std::exp(birkhoff_of_word(phi, g, word, n));
    };
    if (n < d) {
      // p is forced to be the first n edges of mu.
      std::vector<EdgeId> p(mu.edges().begin(), mu.edges().begin() + static_cast<std::ptrdiff_t>(n));
      const VertexId end = n == 0 ? mu.source() : g.range(p.back());
      if (end == x.source()) finish(p);
      continue;
    }
    std::vector<EdgeId> p = mu.edges();
    std::function<void(VertexId)> walk = [&](VertexId v) {
      if (p.size() == n) {
        if (v == x.source()) finish(p);
        return;
      }
      for (EdgeId e : g.out_edges(v)) {
        p.push_back(e);
        walk(g.range(e));
        p.pop_back();
      }
    };
    walk(d == 0 ? mu.source() : mu.range());
  }
  return total;
}

double periodic_sum(const Potential& phi, const GraphModel& g, const FinitePath& mu, std::size_t n) {
  if (n == 0) throw Error(ErrorCode::InvalidInput, "period must be positive");
  const VertexId v0 = mu.source();
  const std::size_t k = phi.depth();
  double total = 0.0;
  std::vector<EdgeId> c;
  std::function<void(VertexId)> walk = [&](VertexId v) {
    if (c.size() == n) {
      if (v != v0) return;
      std::vector<EdgeId> word;
      while (word.size() < std::max(n + k, mu.length())) word.insert(word.end(), c.begin(), c.end());
      for (std::size_t i = 0; i < mu.length(); ++i) {
        if (word[i] != mu.edges()[i]) return;
      }
      total += std::exp(birkhoff_of_word(phi, g, word, n));
      return;
    }
    for (EdgeId e : g.out_edges(v)) {
      c.push_back(e);
      walk(g.range(e));
      c.pop_back();
    }
  };
  walk(v0);
  return total;
}

Perron perron(const GraphModel& g, const Potential& phi, double beta, const FinitePath& normalize_at) {
  const auto& edges = g.finite_edges();
  std::map<VertexId, std::vector<EdgeId>> out;
  for (const auto& e : edges) out[e.source].push_back(e.id);
  std::map<EdgeId, VertexId> range;
  for (const auto& e : edges) range[e.id] = e.range;

  Perron res;
  const std::size_t len = std::max<std::size_t>(phi.depth(), 1);
  // States: every path of length len inside the edge set, listed explicitly.
  std::vector<std::vector<EdgeId>> words;
  std::vector<EdgeId> cur;
  std::function<void(VertexId)> walk = [&](VertexId v) {
    if (cur.size() == len) {
      words.push_back(cur);
      return;
    }
    const auto it = out.find(v);
    if (it == out.end()) return;
    for (EdgeId e : it->second) {
      cur.push_back(e);
      walk(range[e]);
      cur.pop_back();
    }
  };
  for (const auto& [v, es] : out) walk(v);
  const auto n = static_cast<Eigen::Index>(words.size());
  if (n == 0) throw Error(ErrorCode::InvalidInput, "no states");
  std::map<std::vector<EdgeId>, Eigen::Index> index;
  for (Eigen::Index i = 0; i < n; ++i) index[words[static_cast<std::size_t>(i)]] = i;

  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& w = words[static_cast<std::size_t>(i)];
    const double weight = std::exp(-beta * phi.value(g, std::span<const EdgeId>(w.data(), phi.depth())));
    std::vector<EdgeId> next(w.begin() + 1, w.end());
    const VertexId end = range[w.back()];
    for (EdgeId e : out[end]) {
      next.push_back(e);
      T(i, index.at(next)) = weight;
      next.pop_back();
    }
  }

  // Period from breadth-first levels of the state graph.
  std::vector<long> level(static_cast<std::size_t>(n), -1);
  std::queue<Eigen::Index> q;
  level[0] = 0;
  q.push(0);
  while (!q.empty()) {
    const auto u = q.front();
    q.pop();
    for (Eigen::Index v = 0; v < n; ++v) {
      if (T(u, v) > 0.0 && level[static_cast<std::size_t>(v)] < 0) {
        level[static_cast<std::size_t>(v)] = level[static_cast<std::size_t>(u)] + 1;
        q.push(v);
      }
    }
  }
  long p = 0;
  for (Eigen::Index u = 0; u < n; ++u) {
    if (level[static_cast<std::size_t>(u)] < 0) throw Error(ErrorCode::InvalidInput, "graph is not irreducible");
    for (Eigen::Index v = 0; v < n; ++v) {
      if (T(u, v) > 0.0) {
        p = std::gcd(p, std::labs(level[static_cast<std::size_t>(u)] + 1 - level[static_cast<std::size_t>(v)]));
      }
    }
  }
  if (p == 0) p = 1;
  res.period = static_cast<int>(p);

  // Power iteration on T^p from a vector on one cyclic class.
  Eigen::MatrixXd B = Eigen::MatrixXd::Identity(n, n);
  for (long i = 0; i < p; ++i) B = B * T;
  Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (level[static_cast<std::size_t>(i)] % p == 0) v(i) = 1.0;
  }
  double rho_p = 0.0;
  for (int it = 0; it < 1000000; ++it) {
    Eigen::VectorXd w = B * v;
    const double norm = w.lpNorm<Eigen::Infinity>();
    w /= norm;
    const double change = (w - v).lpNorm<Eigen::Infinity>();
    v = w;
    rho_p = norm;
    if (change < 1e-14) break;
  }
  const double rho = std::pow(rho_p, 1.0 / static_cast<double>(p));
  Eigen::VectorXd full = v;
  Eigen::VectorXd term = v;
  for (long j = 1; j < p; ++j) {
    term = T * term / rho;
    full += term;
  }

  double norm = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& w = words[static_cast<std::size_t>(i)];
    const FinitePath path = FinitePath::from_edges(g, w);
    if (normalize_at.empty() ? path.source() == normalize_at.source() : path.starts_with(normalize_at)) {
      norm += full(i);
    }
  }
  if (!(norm > 0.0)) throw Error(ErrorCode::InvalidInput, "normalizing cylinder has no mass");
  res.log_radius = std::log(rho);
  for (Eigen::Index i = 0; i < n; ++i) {
    res.states.push_back(FinitePath::from_edges(g, words[static_cast<std::size_t>(i)]));
    res.vector.push_back(full(i) / norm);
  }
  return res;
}

double moran_solve(const std::vector<double>& weights) {
  if (weights.empty()) throw Error(ErrorCode::InvalidInput, "no weights");
  for (double w : weights) {
    if (!(w > 0.0 && w < 1.0)) throw Error(ErrorCode::InvalidInput, "Moran weights must lie in (0, 1)");
  }
  auto f = [&](double b) {
    double s = -1.0;
    for (double w : weights) s += std::pow(w, b);
    return s;
  };
  double lo = 0.0, hi = 1.0;
  while (f(hi) > 0.0) hi *= 2.0;
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    if (f(mid) > 0.0) lo = mid; else hi = mid;
  }
  return 0.5 * (lo + hi);
}

double ladder_pressure(double t_up, double t_down, double beta) {
  // First returns to 0 are u_0 ... u_{n-2} d_{n-1}; the renewal equation solves in closed form.
  return std::log(std::exp(-beta * t_up) + std::exp(-beta * t_down));
}

double ladder_vertex_mass(double t_up, double t_down, double beta, int n) {
  const double wu = std::exp(-beta * t_up), wd = std::exp(-beta * t_down);
  const double fixed = wd / (1.0 - wu);
  return fixed + (1.0 - fixed) * std::pow(wu, -n);
}

double ray_mass(const std::vector<double>& ray_levels, double beta, int level) {
  double s = 0.0;
  for (int j = 0; j < level; ++j) {
    s += ray_levels[std::min<std::size_t>(static_cast<std::size_t>(j), ray_levels.size() - 1)];
  }
  return std::exp(-beta * s);
}

std::pair<double, double> exp_two_level(double lambda, double beta, long K) {
  // Fixed point by plain bisection on [-log lambda, 50].
  double lo = -std::log(lambda), hi = 50.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (lambda * std::exp(mid) - mid < 0.0) lo = mid; else hi = mid;
  }
  const double x0 = 0.5 * (lo + hi);
  const double pi = std::numbers::pi;
  const double tail_int = [&] {
    // 2 * int_K^inf (2 pi s - pi)^{-beta} ds
    return 2.0 * std::pow(2.0 * pi * static_cast<double>(K) - pi, 1.0 - beta) / (2.0 * pi * (beta - 1.0));
  }();
  double inner_sum = 0.0, inner_tail = 0.0;
  for (long k = -K; k <= K; ++k) {
    const std::complex<double> y(x0, 2.0 * pi * static_cast<double>(k));
    const double wk = std::pow(std::abs(y), -beta);
    const auto c = std::log(y / lambda);
    double s = 0.0;
    for (long j = -K; j <= K; ++j) {
      s += std::pow(std::abs(c + std::complex<double>(0.0, 2.0 * pi * static_cast<double>(j))), -beta);
    }
    inner_sum += wk * s;
    inner_tail += wk * tail_int;
  }
  // Level-one branches beyond K: weight sum times a uniform bound on one more level.
  const double outer = 2.0 * std::pow(2.0 * pi * static_cast<double>(K), 1.0 - beta) / (2.0 * pi * (beta - 1.0));
  const double one_level = std::pow(x0, -beta) + 2.0 * std::pow(pi, -beta) +
                           2.0 * std::pow(pi, 1.0 - beta) / (2.0 * pi * (beta - 1.0));
  return {inner_sum, inner_sum + inner_tail + outer * one_level};
}

std::vector<OracleResult> reference_table() {
  std::vector<OracleResult> rows;
  auto add = [&](std::string name, std::string method, double v) {
    rows.push_back({std::move(method), v, std::move(name)});
  };
  const double log2 = std::log(2.0);

  const auto golden = GraphModel::explicit_finite({{0, 0, 0}, {1, 0, 1}, {2, 1, 0}});
  const auto zero = Potential::constant(0.0);
  for (std::size_t n : {1, 2, 3, 4}) {
    double trace = 0.0;
    for (VertexId v : golden.finite_vertices()) trace += periodic_sum(zero, golden, FinitePath::vertex(v), n);
    add("golden_mean.Z" + std::to_string(n), "enumeration", trace);
  }
  add("golden_mean.log_radius", "perron", perron(golden, zero, 1.0, FinitePath::vertex(0)).log_radius);

  const auto ladder = GraphModel::ladder();
  add("ladder.loops_at_0.len4", "enumeration", periodic_sum(zero, ladder, FinitePath::vertex(0), 4));

  const auto full2 = GraphModel::weighted_full_shift(2);
  const auto x = BasePoint::periodic(full2, FinitePath::vertex(0), FinitePath::from_edges(full2, {0}));
  add("full_shift2.L3_of_1", "enumeration",
      enumerate_Ln(zero, full2, CylinderFunction::indicator(FinitePath::vertex(0)), x, 3));

  const auto halves = perron(full2, Potential::constant(log2), 1.0, FinitePath::vertex(0));
  add("two_loops_half.log_radius", "perron", halves.log_radius);
  add("two_loops_half.m_edge0", "perron", halves.vector[0]);
  add("two_loops_half.m_edge1", "perron", halves.vector[1]);

  const auto cycle2 = GraphModel::explicit_finite({{0, 0, 1}, {1, 1, 0}});
  const auto per2 = perron(cycle2, zero, 1.0, FinitePath::vertex(0));
  add("two_cycle.period", "perron", per2.period);
  add("two_cycle.log_radius", "perron", per2.log_radius);

  add("moran.2^-b+4^-b", "moran", moran_solve({0.5, 0.25}));
  add("moran.2*2^-b", "moran", moran_solve({0.5, 0.5}));
  add("moran.ladder_const1", "moran", moran_solve({std::exp(-1.0), std::exp(-1.0)}));

  for (double b : {0.5, 1.0, 2.0}) {
    add("ladder.const_log2.pressure.beta" + std::to_string(b).substr(0, 3), "closed-form", ladder_pressure(log2, log2, b));
  }
  for (int n = 0; n <= 4; ++n) {
    add("ladder.const_log2.beta2.m" + std::to_string(n), "closed-form", ladder_vertex_mass(log2, log2, 2.0, n));
  }
  add("ladder.const_log2.beta2.m_u0", "closed-form", 0.25 * ladder_vertex_mass(log2, log2, 2.0, 1));
  add("core.ray_level1", "closed-form", ray_mass({1.0, 2.0}, 1.0, 1));
  add("core.ray_level2", "closed-form", ray_mass({1.0, 2.0}, 1.0, 2));
  const auto [elo, ehi] = exp_two_level(0.2, 2.0, 400);
  add("exp.lambda0.2.beta2.L2_lower", "enumeration", elo);
  add("exp.lambda0.2.beta2.L2_upper", "enumeration", ehi);
  return rows;
}

}  // namespace shiftthermo::oracle
