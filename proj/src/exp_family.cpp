#include "shiftthermo/exp_family.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace shiftthermo {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_lambda(double lambda) {
  if (!(lambda > 0.0) || !(lambda < std::exp(-1.0))) {
    throw Error(ErrorCode::InvalidInput, "lambda must lie in (0, 1/e)");
  }
}

struct Node {
  double re;
  double im;
  double logw;
};

}  // namespace

double repelling_fixed_point(double lambda) {
  check_lambda(lambda);
  auto f = [lambda](double x) { return lambda * std::exp(x) - x; };
  // f is negative at its minimum -log(lambda) > 1 and convex, so the larger root lies to the right.
  double lo = -std::log(lambda);
  double hi = lo + 1.0;
  while (f(hi) <= 0.0) hi = lo + 2.0 * (hi - lo);
  double x = hi;
  for (int it = 0; it < 200; ++it) {
    const double fx = f(x);
    if (fx > 0.0) hi = x; else lo = x;
    double next = x - fx / (lambda * std::exp(x) - 1.0);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::fabs(next - x) < 1e-15 * std::max(1.0, std::fabs(x))) return next;
    x = next;
  }
  return x;
}

double one_sided_tail(double s0, double a, double beta) {
  if (s0 < 0.0) throw Error(ErrorCode::InvalidInput, "tail start must be nonnegative");
  a = std::fabs(a);
  const double first = std::pow(a * a + s0 * s0, -0.5 * beta);
  double integral = std::pow(std::max(a, s0), 1.0 - beta) / (beta - 1.0);
  if (a > s0) integral += (a - s0) * std::pow(a, -beta);
  return first + integral / kTwoPi;
}

BranchSum branch_sum(double lambda, std::complex<double> x, double beta, long K) {
  check_lambda(lambda);
  if (!(beta > 1.0)) throw Error(ErrorCode::Divergent, "branch sums diverge for beta <= 1");
  if (x == 0.0) throw Error(ErrorCode::InvalidInput, "x must be nonzero");
  if (K < 0) throw Error(ErrorCode::InvalidInput, "K must be nonnegative");
  const auto c = std::log(x / lambda);
  const double a = c.real(), theta = c.imag();
  BranchSum out;
  for (long k = -K; k <= K; ++k) {
    const double im = theta + kTwoPi * static_cast<double>(k);
    out.value += std::pow(a * a + im * im, -0.5 * beta);
  }
  const double s = kTwoPi * static_cast<double>(K + 1);
  out.tail_bound = one_sided_tail(s + theta, a, beta) + one_sided_tail(s - theta, a, beta);
  return out;
}

double a_beta_bound(double lambda, double beta) {
  if (!(beta > 1.0)) throw Error(ErrorCode::Divergent, "A_beta is infinite for beta <= 1");
  const double x0 = repelling_fixed_point(lambda);
  constexpr long kExplicit = 2000;
  double s = std::pow(x0, -beta);
  for (long k = 1; k <= kExplicit; ++k) {
    const double im = kTwoPi * static_cast<double>(k) - std::numbers::pi;
    s += 2.0 * std::pow(x0 * x0 + im * im, -0.5 * beta);
  }
  s += 2.0 * one_sided_tail(kTwoPi * static_cast<double>(kExplicit + 1) - std::numbers::pi, x0, beta);
  return s;
}

namespace {

// Blocked bounds for sum_{j>=0} w(s_j) T(child(s_j)), s_j = s0 + 2 pi j,
// w(s) = (a^2 + s^2)^{-beta/2}, child(s) = log sqrt(a^2 + s^2) - log lambda, T nonincreasing.
// Blocks double in length; the upper sum ends with an unbounded block.
struct TailPlan {
  std::vector<std::pair<double, std::size_t>> upper;  // (weight bound, envelope cell)
  std::vector<std::pair<double, std::size_t>> lower;
};

constexpr double kLastBlock = 3.5e13;

double child_a(double a, double s, double log_lambda) { return 0.5 * std::log(a * a + s * s) - log_lambda; }

double power_integral(double s1, double s2, double beta) {
  // int_{s1}^{s2} s^{-beta} ds, s2 may be infinite
  const double hi = std::isinf(s2) ? 0.0 : std::pow(s2, 1.0 - beta);
  return (std::pow(s1, 1.0 - beta) - hi) / (beta - 1.0);
}

void plan_upper(const SubtreeEnvelope& env, double a, double s0, double beta, double log_lambda,
                std::vector<std::pair<double, std::size_t>>& out) {
  for (double j1 = 0.0;; j1 = 2.0 * j1 + 2.0) {
    const double s1 = s0 + kTwoPi * j1;
    const bool last = j1 > kLastBlock;
    const double s2 = last ? std::numeric_limits<double>::infinity() : s0 + kTwoPi * (2.0 * j1 + 1.0);
    const double w = std::pow(a * a + s1 * s1, -0.5 * beta) + power_integral(s1, s2, beta) / kTwoPi;
    out.emplace_back(w, env.cell_of(child_a(a, s1, log_lambda)));
    if (last) return;
  }
}

void plan_lower(const SubtreeEnvelope& env, double a, double s0, double beta, double log_lambda,
                std::vector<std::pair<double, std::size_t>>& out) {
  for (double j1 = 0.0; j1 <= kLastBlock; j1 = 2.0 * j1 + 2.0) {
    const double s1 = s0 + kTwoPi * j1;
    const double s2 = s0 + kTwoPi * (2.0 * j1 + 1.0);
    const double w = std::pow(1.0 + a * a / (s1 * s1), -0.5 * beta) * power_integral(s1, s2 + kTwoPi, beta) / kTwoPi;
    out.emplace_back(w, env.cell_of(child_a(a, s2, log_lambda)));
  }
}

double dot(const std::vector<std::pair<double, std::size_t>>& plan, const std::vector<double>& table) {
  double s = 0.0;
  for (const auto& [w, c] : plan) s += w * table[c];
  return s;
}

}  // namespace

std::size_t SubtreeEnvelope::cell_of(double a) const {
  const auto it = std::upper_bound(edges.begin(), edges.end(), a);
  return it == edges.begin() ? 0 : static_cast<std::size_t>(it - edges.begin()) - 1;
}

double SubtreeEnvelope::upper(std::size_t m, double a) const {
  return upper_rel.at(m)[cell_of(a)] * std::exp(upper_log_scale.at(m));
}

double SubtreeEnvelope::lower(std::size_t m, double a) const {
  return lower_rel.at(m)[cell_of(a)] * std::exp(lower_log_scale.at(m));
}

SubtreeEnvelope subtree_envelope(double lambda, double beta, std::size_t depth, const ExpOptions& opt) {
  check_lambda(lambda);
  if (!(beta > 1.0)) throw Error(ErrorCode::Divergent, "envelopes diverge for beta <= 1");
  if (!(opt.grid_ratio > 0.0) || opt.grid_angles == 0 || opt.grid_branches < 0) {
    throw Error(ErrorCode::InvalidInput, "bad envelope grid");
  }
  const double x0 = repelling_fixed_point(lambda);
  const double log_lambda = std::log(lambda);
  SubtreeEnvelope env;
  for (double e = x0; e < 1000.0; e *= 1.0 + opt.grid_ratio) env.edges.push_back(e);
  const std::size_t cells = env.edges.size();
  env.upper_rel.assign(1, std::vector<double>(cells, 1.0));
  env.lower_rel.assign(1, std::vector<double>(cells, 1.0));
  env.upper_log_scale.assign(1, 0.0);
  env.lower_log_scale.assign(1, 0.0);

  const long Kg = opt.grid_branches;
  const double width = kTwoPi / static_cast<double>(opt.grid_angles);
  for (std::size_t m = 1; m <= depth; ++m) {
    const auto& pu = env.upper_rel[m - 1];
    const auto& pl = env.lower_rel[m - 1];
    std::vector<double> nu(cells), nl(cells);
    for_each_task(opt.exec, cells, [&](std::size_t i) {
      const double a_lo = env.edges[i];
      const bool bounded = i + 1 < cells;
      const double a_hi = bounded ? env.edges[i + 1] : 0.0;
      double best_u = 0.0, best_l = std::numeric_limits<double>::infinity();
      std::vector<std::pair<double, std::size_t>> plan;
      for (std::size_t t = 0; t < opt.grid_angles; ++t) {
        const double th_l = -std::numbers::pi + width * static_cast<double>(t);
        const double th_h = th_l + width;
        double su = 0.0, sl = 0.0;
        for (long k = -Kg; k <= Kg; ++k) {
          const double e1 = th_l + kTwoPi * static_cast<double>(k);
          const double e2 = th_h + kTwoPi * static_cast<double>(k);
          const double smin = (e1 <= 0.0 && e2 >= 0.0) ? 0.0 : std::min(std::fabs(e1), std::fabs(e2));
          const double smax = std::max(std::fabs(e1), std::fabs(e2));
          const double qu = a_lo * a_lo + smin * smin;
          su += std::pow(qu, -0.5 * beta) * pu[env.cell_of(0.5 * std::log(qu) - log_lambda)];
          if (bounded) {
            const double ql = a_hi * a_hi + smax * smax;
            sl += std::pow(ql, -0.5 * beta) * pl[env.cell_of(0.5 * std::log(ql) - log_lambda)];
          }
        }
        const double far = kTwoPi * static_cast<double>(Kg + 1);
        plan.clear();
        plan_upper(env, a_lo, th_l + far, beta, log_lambda, plan);
        plan_upper(env, a_lo, far - th_h, beta, log_lambda, plan);
        su += dot(plan, pu);
        if (bounded) {
          plan.clear();
          plan_lower(env, a_hi, th_h + far, beta, log_lambda, plan);
          plan_lower(env, a_hi, far - th_l, beta, log_lambda, plan);
          sl += dot(plan, pl);
        }
        best_u = std::max(best_u, su);
        best_l = std::min(best_l, bounded ? sl : 0.0);
      }
      nu[i] = best_u;
      nl[i] = best_l;
    });
    auto push = [](std::vector<double>& v, double prev_scale, std::vector<std::vector<double>>& rel,
                   std::vector<double>& scale) {
      const double top = *std::max_element(v.begin(), v.end());
      if (top > 0.0) {
        for (double& x : v) x /= top;
        scale.push_back(prev_scale + std::log(top));
      } else {
        scale.push_back(kLogZero);
      }
      rel.push_back(std::move(v));
    };
    push(nu, env.upper_log_scale.back(), env.upper_rel, env.upper_log_scale);
    push(nl, env.lower_log_scale.back(), env.lower_rel, env.lower_log_scale);
  }
  return env;
}

ExpPressure exp_pressure(double lambda, double beta, const ExpOptions& opt) {
  check_lambda(lambda);
  if (!(beta > 1.0)) throw Error(ErrorCode::Divergent, "pressure series diverge for beta <= 1");
  if (opt.n_max < 1 || opt.K < 0 || opt.beam < 1) throw Error(ErrorCode::InvalidInput, "bad exp_pressure options");
  ExpPressure out;
  out.x0 = repelling_fixed_point(lambda);
  out.a_beta = a_beta_bound(lambda, beta);
  const double log_lambda = std::log(lambda);
  const long K = opt.K;
  const std::size_t n_max = opt.n_max;
  const auto env = subtree_envelope(lambda, beta, n_max - 1, opt);

  // Every chain of n branches either stays inside the kept beam and |k| <= K
  // up to its last step, or leaves it first at some level l: a dropped node
  // (l < n) or a branch with |k| > K (l <= n). The exits carry envelope bounds.
  std::vector<LogAccumulator> lo(n_max + 1), hi(n_max + 1), beam_lo(n_max + 1), beam_hi(n_max + 1);
  lo[0].add(0.0);
  hi[0].add(0.0);
  std::vector<Node> nodes{{out.x0, 0.0, 0.0}};

  struct Parent {
    double a, theta, logw;
    double sum;                    // sum over |k| <= K of the branch weights
    std::vector<double> tail_u, tail_l;  // [m], relative to logw and the envelope scale
    std::vector<double> drop_u, drop_l;  // [m]
  };

  for (std::size_t level = 1; level <= n_max; ++level) {
    const std::size_t rem = n_max - level;
    std::vector<Parent> parents(nodes.size());
    for_each_task(opt.exec, nodes.size(), [&](std::size_t i) {
      const auto& n = nodes[i];
      auto& p = parents[i];
      p.a = 0.5 * std::log(n.re * n.re + n.im * n.im) - log_lambda;
      p.theta = std::atan2(n.im, n.re);
      p.logw = n.logw;
      p.sum = 0.0;
      for (long k = -K; k <= K; ++k) {
        const double im = p.theta + kTwoPi * static_cast<double>(k);
        p.sum += std::pow(p.a * p.a + im * im, -0.5 * beta);
      }
      const double far = kTwoPi * static_cast<double>(K + 1);
      std::vector<std::pair<double, std::size_t>> up, dn;
      plan_upper(env, p.a, p.theta + far, beta, log_lambda, up);
      plan_upper(env, p.a, far - p.theta, beta, log_lambda, up);
      plan_lower(env, p.a, p.theta + far, beta, log_lambda, dn);
      plan_lower(env, p.a, far - p.theta, beta, log_lambda, dn);
      p.tail_u.resize(rem + 1);
      p.tail_l.resize(rem + 1);
      for (std::size_t m = 0; m <= rem; ++m) {
        p.tail_u[m] = dot(up, env.upper_rel[m]);
        p.tail_l[m] = dot(dn, env.lower_rel[m]);
      }
    });
    for (const auto& p : parents) {
      lo[level].add(p.logw + std::log(p.sum));
      hi[level].add(p.logw + std::log(p.sum));
      for (std::size_t m = 0; m <= rem; ++m) {
        if (p.tail_u[m] > 0.0) hi[level + m].add(p.logw + std::log(p.tail_u[m]) + env.upper_log_scale[m]);
        if (p.tail_l[m] > 0.0) lo[level + m].add(p.logw + std::log(p.tail_l[m]) + env.lower_log_scale[m]);
      }
    }
    if (level == n_max) break;

    // Children with log weight >= tau survive. For a parent with log weight W the
    // survivors are the k with (theta + 2 pi k)^2 <= exp(2 (W - tau) / beta) - a^2.
    auto k_range = [&](const Parent& p, double tau) -> std::pair<long, long> {
      if (tau == kLogZero) return {-K, K};
      const double r2 = std::exp(2.0 * (p.logw - tau) / beta) - p.a * p.a;
      if (!(r2 >= 0.0)) return {1, 0};
      const double r = std::sqrt(r2);
      const double kl = std::ceil((-r - p.theta) / kTwoPi);
      const double kh = std::floor((r - p.theta) / kTwoPi);
      const long lo_k = kl < -static_cast<double>(K) ? -K : static_cast<long>(kl);
      const long hi_k = kh > static_cast<double>(K) ? K : static_cast<long>(kh);
      return {lo_k, hi_k};
    };
    auto survivors = [&](double tau) {
      double total = 0.0;
      for (const auto& p : parents) {
        auto [l, h] = k_range(p, tau);
        if (h >= l) total += static_cast<double>(h - l + 1);
      }
      return total;
    };
    double tau = kLogZero;
    const double all = static_cast<double>(parents.size()) * static_cast<double>(2 * K + 1);
    if (all > static_cast<double>(opt.beam)) {
      double t_hi = kLogZero, t_lo = std::numeric_limits<double>::infinity();
      for (const auto& p : parents) {
        t_hi = std::max(t_hi, p.logw - beta * std::log(std::max(std::fabs(p.a), 1e-300)) + 1.0);
        const double far = std::fabs(p.theta) + kTwoPi * static_cast<double>(K);
        t_lo = std::min(t_lo, p.logw - 0.5 * beta * std::log(p.a * p.a + far * far) - 1.0);
      }
      for (int it = 0; it < 200 && t_hi - t_lo > 1e-12 * std::max(1.0, std::fabs(t_hi)); ++it) {
        const double mid = 0.5 * (t_lo + t_hi);
        if (survivors(mid) <= static_cast<double>(opt.beam)) t_hi = mid; else t_lo = mid;
      }
      tau = t_hi;
    }

    std::vector<std::vector<Node>> kids(parents.size());
    for_each_task(opt.exec, parents.size(), [&](std::size_t i) {
      auto& p = parents[i];
      const auto [l, h] = k_range(p, tau);
      p.drop_u.assign(rem + 1, 0.0);
      p.drop_l.assign(rem + 1, 0.0);
      for (long k = -K; k <= K; ++k) {
        const double im = p.theta + kTwoPi * static_cast<double>(k);
        const double q = p.a * p.a + im * im;
        const double w = std::pow(q, -0.5 * beta);
        if (k >= l && k <= h) {
          kids[i].push_back({p.a, im, p.logw + std::log(w)});
          continue;
        }
        const std::size_t c = env.cell_of(0.5 * std::log(q) - log_lambda);
        for (std::size_t m = 1; m <= rem; ++m) {
          p.drop_u[m] += w * env.upper_rel[m][c];
          p.drop_l[m] += w * env.lower_rel[m][c];
        }
      }
    });
    nodes.clear();
    for (std::size_t i = 0; i < parents.size(); ++i) {
      const auto& p = parents[i];
      for (std::size_t m = 1; m <= rem; ++m) {
        if (p.drop_u[m] > 0.0) {
          const double v = p.logw + std::log(p.drop_u[m]) + env.upper_log_scale[m];
          hi[level + m].add(v);
          beam_hi[level + m].add(v);
        }
        if (p.drop_l[m] > 0.0) {
          const double v = p.logw + std::log(p.drop_l[m]) + env.lower_log_scale[m];
          lo[level + m].add(v);
          beam_lo[level + m].add(v);
        }
      }
      nodes.insert(nodes.end(), kids[i].begin(), kids[i].end());
    }
    if (nodes.empty()) throw Error(ErrorCode::BeamOverflow, "beam kept no branches");
  }

  out.log_lo.resize(n_max + 1);
  out.log_hi.resize(n_max + 1);
  for (std::size_t n = 0; n <= n_max; ++n) {
    out.log_lo[n] = lo[n].value();
    out.log_hi[n] = hi[n].value();
  }
  const double base = out.log_lo[n_max];
  const double bh = beam_hi[n_max].empty() ? 0.0 : std::exp(beam_hi[n_max].value() - base);
  const double bl = beam_lo[n_max].empty() ? 0.0 : std::exp(beam_lo[n_max].value() - base);
  out.beam_fraction = bh - bl;
  if (out.beam_fraction > 0.5) {
    throw Error(ErrorCode::BeamOverflow, "discarded branches leave an uncertainty of " +
                                             std::to_string(out.beam_fraction) +
                                             " of the lower bound; widen the beam");
  }
  auto& est = out.estimate;
  est.method = PressureMethod::ExpFamily;
  est.N = n_max;
  for (std::size_t n = 1; n <= n_max; ++n) {
    const double mid = log_add(out.log_lo[n], out.log_hi[n]) - std::log(2.0);
    est.sequence.emplace_back(n, mid / static_cast<double>(n));
  }
  const double n = static_cast<double>(n_max);
  est.point = est.sequence.back().second;
  est.lo = out.log_lo[n_max] / n;
  est.hi = out.log_hi[n_max] / n;
  return out;
}

}  // namespace shiftthermo
