#include "shiftthermo/conformal.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>

namespace shiftthermo {

DivergingSequence diverging_sequence(const GraphModel& g, const CylinderFunction& h, std::size_t count) {
  if (h.empty() || !h.nonnegative()) {
    throw Error(ErrorCode::InvalidInput, "h must be nonnegative and nonzero");
  }
  if (g.kind() != GraphKind::Ladder && g.kind() != GraphKind::ZRay) {
    throw Error(ErrorCode::NotNonCompact,
                std::string(to_string(g.kind())) + " has pre-compact forward orbits of cylinders");
  }
  const FinitePath& anchor = h.terms().begin()->first;
  DivergingSequence seq;
  for (std::size_t i = 1; i <= count; ++i) {
    FinitePath w = anchor;
    VertexId target = 0;
    if (g.kind() == GraphKind::Ladder) {
      target = static_cast<VertexId>(i);
      if (w.range() != 0) w = w.extended(g, 2 * w.range() + 1);
      for (VertexId v = 0; v < target; ++v) w = w.extended(g, 2 * v);
    } else {
      target = anchor.range() - static_cast<VertexId>(i);
      while (w.range() != target) w = w.extended(g, w.range());
    }
    seq.points.push_back(BasePoint::greedy_ray(g, FinitePath::vertex(target)));
    seq.witnesses.push_back(std::move(w));
    seq.escape.push_back(target);
  }
  return seq;
}

std::vector<FinitePath> region_cylinders(const GraphModel& g, int radius, std::size_t depth) {
  std::vector<FinitePath> out;
  for (VertexId v : g.explored_vertices(radius)) {
    for (std::size_t len = 0; len <= depth; ++len) {
      auto layer = paths_from(g, v, len);
      out.insert(out.end(), layer.begin(), layer.end());
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

double relative_gap(double la, double lb) {
  if (la == kLogZero && lb == kLogZero) return 0.0;
  const double hi = std::max(la, lb);
  return std::fabs(std::exp(la - hi) - std::exp(lb - hi));
}

double log_integral(const CylinderMeasure& m, const CylinderFunction& h) {
  LogAccumulator acc;
  for (const auto& [mu, w] : h.terms()) {
    auto lv = m.log_value(mu);
    if (!lv) throw Error(ErrorCode::InvalidInput, "h is not supported on stored cylinders");
    acc.add(w.log_abs + *lv);
  }
  return acc.value();
}

CylinderMeasure shifted_log(const CylinderMeasure& m, double log_factor) {
  CylinderMeasure out(m.depth());
  out.finite_total = m.finite_total;
  for (const auto& [mu, lv] : m.log_values()) out.set_log(mu, lv == kLogZero ? kLogZero : lv + log_factor);
  return out;
}

}  // namespace

ConformalResult construct_fixed(const Potential& psi, const GraphModel& g, const CylinderFunction& h,
                                const DivergingSequence& seq, const ConstructOptions& opt) {
  ConformalResult res;
  res.method = "fixed";
  res.pressure = global_pressure(psi, g, opt.N);
  if (res.pressure->point >= 0.0 || res.pressure->hi > 1e-6) {
    throw Error(ErrorCode::NonnegativePressure,
                "P(psi) estimate " + std::to_string(res.pressure->point) + " is not below 0");
  }
  if (seq.points.size() < opt.tail_points || opt.tail_points == 0) {
    throw Error(ErrorCode::InvalidInput, "diverging sequence shorter than the tail window");
  }
  if (!h.nonnegative() || h.empty()) throw Error(ErrorCode::InvalidInput, "h must be nonnegative and nonzero");

  auto cylinders = region_cylinders(g, opt.region_radius, opt.depth);
  std::size_t depth = opt.depth;
  for (const auto& [mu, w] : h.terms()) {
    if (!std::binary_search(cylinders.begin(), cylinders.end(), mu)) {
      cylinders.insert(std::upper_bound(cylinders.begin(), cylinders.end(), mu), mu);
    }
    depth = std::max(depth, mu.length());
  }

  const std::size_t first = seq.points.size() - opt.tail_points;
  std::vector<std::vector<double>> ratios;  // [point][cylinder], log domain
  for (std::size_t p = first; p < seq.points.size(); ++p) {
    const auto parts = cylinder_series(psi, g, cylinders, seq.points[p], opt.series, opt.exec);
    LogAccumulator hsum;
    for (const auto& [mu, w] : h.terms()) {
      const auto idx = static_cast<std::size_t>(
          std::lower_bound(cylinders.begin(), cylinders.end(), mu) - cylinders.begin());
      hsum.add(w.log_abs + parts[idx].log_sum);
    }
    const double lh = hsum.value();
    if (lh == kLogZero) throw Error(ErrorCode::UnstableLimit, "resolvent of h vanishes at a sequence point");
    std::vector<double> row(cylinders.size());
    for (std::size_t i = 0; i < cylinders.size(); ++i) {
      row[i] = parts[i].log_sum == kLogZero ? kLogZero : parts[i].log_sum - lh;
      res.series_terms = std::max(res.series_terms, parts[i].terms);
      if (parts[i].log_sum != kLogZero && parts[i].log_tail_bound != kLogZero) {
        res.max_tail_relative = std::max(res.max_tail_relative,
                                         std::exp(parts[i].log_tail_bound - parts[i].log_sum));
      }
    }
    ratios.push_back(std::move(row));
  }

  CylinderMeasure m(depth);
  for (std::size_t i = 0; i < cylinders.size(); ++i) {
    const double last = ratios.back()[i];
    for (const auto& row : ratios) res.max_ratio_spread = std::max(res.max_ratio_spread, relative_gap(row[i], last));
    m.set_log(cylinders[i], last);
  }
  if (res.max_ratio_spread > opt.stability_tol) {
    throw Error(ErrorCode::UnstableLimit, "ratio spread " + std::to_string(res.max_ratio_spread) +
                                              " over the last sequence points");
  }
  const double li = log_integral(m, h);
  res.measure = shifted_log(m, -li);
  res.normalization = std::exp(log_integral(res.measure, h));
  res.residuals = verify(res.measure, psi.scaled(-1.0), 1.0, g);
  return res;
}

ConformalResult construct_limit(const Potential& phi, double beta, const GraphModel& g,
                                const CylinderFunction& h, const ConstructOptions& opt) {
  const Potential base = phi.scaled(-beta);
  auto p = global_pressure(base, g, opt.N);
  if (p.lo > 0.0) {
    throw Error(ErrorCode::PressurePositive,
                "P(-beta phi) = " + std::to_string(p.point) + " > 0; no conformal measure exists");
  }
  if (opt.eps_schedule.empty()) throw Error(ErrorCode::InvalidInput, "empty epsilon schedule");
  for (std::size_t i = 0; i < opt.eps_schedule.size(); ++i) {
    if (!(opt.eps_schedule[i] > 0) || (i > 0 && opt.eps_schedule[i] >= opt.eps_schedule[i - 1])) {
      throw Error(ErrorCode::InvalidInput, "epsilon schedule must be positive and decreasing");
    }
  }
  const std::size_t count = opt.sequence_count > 0
                                ? opt.sequence_count
                                : static_cast<std::size_t>(opt.region_radius) + opt.depth + 8;
  const auto seq = diverging_sequence(g, h, count);

  if (p.hi < 0.0) {
    // Strictly negative pressure: the epsilon family is continuous at 0, so take eps = 0 itself.
    auto res = construct_fixed(base, g, h, seq, opt);
    res.beta = beta;
    res.residuals = verify(res.measure, phi, beta, g);
    return res;
  }

  const std::size_t used = std::min<std::size_t>(3, opt.eps_schedule.size());
  const std::vector<double> eps(opt.eps_schedule.end() - static_cast<std::ptrdiff_t>(used), opt.eps_schedule.end());
  std::vector<ConformalResult> runs;
  for (double e : eps) runs.push_back(construct_fixed(base.shifted(-e), g, h, seq, opt));

  ConformalResult res;
  res.method = "limit";
  res.beta = beta;
  res.eps_schedule = opt.eps_schedule;
  res.pressure = p;
  CylinderMeasure m(runs.front().measure.depth());
  for (const auto& [mu, lv0] : runs.front().measure.log_values()) {
    std::vector<double> v;
    for (const auto& r : runs) v.push_back(r.measure.value(mu));
    double quad = v.back(), lin = v.back();
    if (used >= 2) {
      const double ea = eps[used - 2], eb = eps[used - 1];
      lin = v[used - 2] + (0.0 - ea) * (v[used - 1] - v[used - 2]) / (eb - ea);
      quad = lin;
    }
    if (used == 3) {
      quad = 0.0;
      for (std::size_t i = 0; i < 3; ++i) {
        double w = 1.0;
        for (std::size_t j = 0; j < 3; ++j) {
          if (j != i) w *= (0.0 - eps[j]) / (eps[i] - eps[j]);
        }
        quad += w * v[i];
      }
    }
    const double spread = std::fabs(quad - lin);
    res.extrapolation_spread[mu] = spread;
    const double scale = std::max(std::fabs(quad), 1e-300);
    res.max_extrapolation_spread = std::max(res.max_extrapolation_spread, spread / scale);
    m.set(mu, std::max(quad, 0.0));
    (void)lv0;
  }
  for (const auto& r : runs) {
    res.series_terms = std::max(res.series_terms, r.series_terms);
    res.max_ratio_spread = std::max(res.max_ratio_spread, r.max_ratio_spread);
    res.max_tail_relative = std::max(res.max_tail_relative, r.max_tail_relative);
  }
  const double li = log_integral(m, h);
  res.measure = shifted_log(m, -li);
  res.normalization = std::exp(log_integral(res.measure, h));
  res.residuals = verify(res.measure, phi, beta, g);
  return res;
}

ConformalResult eigenmeasure(const Potential& phi, double t, const GraphModel& g, const CylinderFunction& h,
                             const ConstructOptions& opt) {
  const auto p = global_pressure(phi, g, opt.N);
  if (t < p.lo) {
    throw Error(ErrorCode::BelowThreshold,
                "t = " + std::to_string(t) + " is below P(phi) = " + std::to_string(p.point));
  }
  // L*_phi m = e^t m  <=>  L*_{phi - t} m = m  <=>  m is (t - phi)-conformal.
  auto res = construct_limit(phi.scaled(-1.0).shifted(t), 1.0, g, h, opt);
  res.method = "eigen";
  return res;
}

ResidualReport verify(const CylinderMeasure& m, const Potential& phi, double beta, const GraphModel& g,
                      std::size_t depth) {
  const std::size_t k = phi.depth();
  const std::size_t d = depth == 0 ? m.depth() : depth;
  if (d > m.depth() || d < k) {
    throw Error(ErrorCode::DepthMismatch, "verify depth " + std::to_string(d) + " against measure depth " +
                                              std::to_string(m.depth()) + " and potential depth " +
                                              std::to_string(k));
  }
  ResidualReport rep;
  double total = 0.0;
  for (const auto& [mu, lv] : m.log_values()) {
    if (mu.length() < k || mu.length() > d) continue;
    const auto shifted = m.log_value(mu.dropped(g, 1));
    if (!shifted) continue;
    const double predicted =
        *shifted == kLogZero
            ? kLogZero
            : *shifted - beta * phi.value(g, std::span<const EdgeId>(mu.edges().data(), k));
    const double r = relative_gap(lv, predicted);
    ++rep.checked;
    total += r;
    if (!rep.worst || r > rep.max_relative) {
      rep.worst = mu;
      rep.max_relative = r;
    }
  }
  rep.mean_relative = rep.checked ? total / static_cast<double>(rep.checked) : 0.0;
  const auto add = m.additivity(g);
  rep.additivity_max = add.max_relative;
  rep.additivity_checked = add.checked;
  return rep;
}

CoreSpectrum core_spectrum(const Potential& phi, double beta, const GraphModel& g) {
  auto rep = nonwandering(g);
  if (rep.case_tag != NwCase::FiniteNonEmpty) {
    throw Error(ErrorCode::WrongCase, "core spectrum needs a finite non-empty NW_G");
  }
  std::vector<Edge> core;
  for (const auto& e : g.finite_edges()) {
    if (rep.contains(e.source) && rep.contains(e.range)) core.push_back(e);
  }
  const auto cg = GraphModel::explicit_finite(core);
  const std::size_t k = phi.depth();

  CoreSpectrum spec;
  for (VertexId v : cg.finite_vertices()) {
    auto layer = paths_from(cg, v, k - 1);
    spec.states.insert(spec.states.end(), layer.begin(), layer.end());
  }
  std::map<FinitePath, std::size_t> index;
  for (std::size_t i = 0; i < spec.states.size(); ++i) index.emplace(spec.states[i], i);

  struct Transition {
    std::size_t to;
    double weight;
  };
  std::vector<std::vector<Transition>> rows(spec.states.size());
  double shift = 0.0;
  for (std::size_t i = 0; i < spec.states.size(); ++i) {
    const auto& nu = spec.states[i];
    double row_sum = 0.0;
    cg.for_each_out_edge(nu.range(), [&](EdgeId e) {
      const auto window = nu.extended(cg, e);
      const double w = std::exp(-beta * phi.value(g, std::span<const EdgeId>(window.edges().data(), k)));
      rows[i].push_back({index.at(window.dropped(cg, 1)), w});
      row_sum += w;
    });
    shift = std::max(shift, row_sum);
  }

  // Power iteration on (shift·I + M): aperiodic, same Perron vector as M.
  std::vector<double> v(spec.states.size(), 1.0), next(v.size());
  for (int it = 0; it < 1000000; ++it) {
    double top = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
      double s = shift * v[i];
      for (const auto& t : rows[i]) s += t.weight * v[t.to];
      next[i] = s;
      top = std::max(top, s);
    }
    double change = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
      next[i] /= top;
      change = std::max(change, std::fabs(next[i] - v[i]));
    }
    v.swap(next);
    if (change < 1e-15) break;
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] > v[best]) best = i;
  }
  double mv = 0.0;
  for (const auto& t : rows[best]) mv += t.weight * v[t.to];
  spec.log_radius = std::log(mv / v[best]);
  spec.vector = std::move(v);
  return spec;
}

ConformalResult extend_from_core(const GraphModel& g, const Potential& phi, double beta, int levels,
                                 std::size_t depth, double pressure_tol) {
  const auto spec = core_spectrum(phi, beta, g);
  if (std::fabs(spec.log_radius) > pressure_tol) {
    throw Error(ErrorCode::PressureNotZero,
                "core pressure P(-beta phi) = " + std::to_string(spec.log_radius) + " is not 0");
  }
  const std::size_t k = phi.depth();
  const auto filt = h_filtration(g, levels);
  const auto& region = filt.levels.back();

  std::map<FinitePath, std::size_t> state_index;
  for (std::size_t i = 0; i < spec.states.size(); ++i) state_index.emplace(spec.states[i], i);

  std::map<FinitePath, double> memo;
  const std::size_t guard = static_cast<std::size_t>(levels) + depth + 2 * k + 16;
  std::function<double(const FinitePath&, std::size_t)> value = [&](const FinitePath& mu,
                                                                    std::size_t level) -> double {
    if (level > guard) throw Error(ErrorCode::WrongCase, "cylinder does not reach the core within the filtration");
    if (auto it = memo.find(mu); it != memo.end()) return it->second;
    double out = kLogZero;
    if (mu.length() >= k) {
      const double w = -beta * phi.value(g, std::span<const EdgeId>(mu.edges().data(), k));
      out = w + value(mu.dropped(g, 1), level + 1);
    } else if (mu.length() + 1 == k) {
      if (auto it = state_index.find(mu); it != state_index.end()) {
        out = std::log(spec.vector[it->second]);
      } else {
        LogAccumulator acc;
        g.for_each_out_edge(mu.range(), [&](EdgeId e) { acc.add(value(mu.extended(g, e), level + 1)); });
        out = acc.value();
      }
    } else {
      LogAccumulator acc;
      g.for_each_out_edge(mu.range(), [&](EdgeId e) { acc.add(value(mu.extended(g, e), level + 1)); });
      out = acc.value();
    }
    memo.emplace(mu, out);
    return out;
  };

  const auto& core_vertices = filt.levels.front();
  const double ref = value(FinitePath::vertex(core_vertices.front()), 0);

  ConformalResult res;
  res.method = "core";
  res.beta = beta;
  res.log_radius = spec.log_radius;
  res.measure = CylinderMeasure(depth);
  for (VertexId v : region) {
    for (std::size_t len = 0; len <= depth; ++len) {
      for (const auto& mu : paths_from(g, v, len)) res.measure.set_log(mu, value(mu, 0) - ref);
    }
  }
  res.normalization = res.measure.value(FinitePath::vertex(core_vertices.front()));
  if (depth >= k) res.residuals = verify(res.measure, phi, beta, g);
  return res;
}

}  // namespace shiftthermo
