#include "shiftthermo/pressure.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "shiftthermo/transfer.hpp"

namespace shiftthermo {

std::string_view to_string(PressureMethod m) {
  switch (m) {
    case PressureMethod::Gurevich: return "gurevich";
    case PressureMethod::Pointwise: return "pointwise";
    case PressureMethod::ExpFamily: return "exp_family";
  }
  return "?";
}

namespace {

std::optional<double> window_slope(const std::vector<double>& b, std::size_t from, std::size_t to) {
  std::optional<std::size_t> first, last;
  for (std::size_t n = std::max<std::size_t>(from, 1); n <= to && n < b.size(); ++n) {
    if (b[n] == kLogZero) continue;
    if (!first) first = n;
    last = n;
  }
  if (!first || *first == *last) return std::nullopt;
  return (b[*last] - b[*first]) / static_cast<double>(*last - *first);
}

}  // namespace

PressureEstimate estimate_growth(const std::vector<double>& log_terms, PressureMethod method,
                                 double extra_halfwidth) {
  PressureEstimate est;
  est.method = method;
  est.N = log_terms.empty() ? 0 : log_terms.size() - 1;
  const std::size_t N = est.N;
  double tail_max = kLogZero, any_max = kLogZero;
  const std::size_t half = (N + 1) / 2, quarter = (N + 3) / 4;
  for (std::size_t n = 1; n <= N; ++n) {
    const double a = log_terms[n] == kLogZero ? kLogZero : log_terms[n] / static_cast<double>(n);
    est.sequence.emplace_back(n, a);
    any_max = std::max(any_max, a);
    if (n >= half) tail_max = std::max(tail_max, a);
  }
  if (any_max == kLogZero) return est;  // identically zero: pressure -inf

  const auto sa = window_slope(log_terms, half, N);
  if (!sa) {
    const double p = tail_max != kLogZero ? tail_max : any_max;
    est.point = p;
    const double w = std::max(1.0, std::fabs(p)) + extra_halfwidth;
    est.lo = p - w;
    est.hi = p + w;
    return est;
  }
  const auto sb = window_slope(log_terms, quarter, half);
  double d = sb ? std::fabs(*sa - *sb) : std::fabs(*sa - tail_max);
  d = std::max(d, 1e-12 * std::max(1.0, std::fabs(*sa))) + extra_halfwidth;
  est.point = *sa;
  est.lo = *sa - d;
  est.hi = *sa + d;
  return est;
}

std::vector<double> periodic_log_sums(const Potential& phi, const GraphModel& g, const FinitePath& mu,
                                      std::size_t N) {
  const std::size_t k = phi.depth();
  const std::size_t L = std::max(mu.length(), k - 1);
  std::vector<LogAccumulator> acc(N + 1);

  // Short periods: enumerate cycles directly.
  for (std::size_t n = 1; n < L && n <= N; ++n) {
    for (const auto& p : paths_from(g, mu.source(), n)) {
      if (p.range() != mu.source()) continue;
      std::vector<EdgeId> y;
      while (y.size() < std::max(mu.length(), n + k - 1)) {
        for (EdgeId e : p.edges()) y.push_back(e);
      }
      if (!std::equal(mu.edges().begin(), mu.edges().end(), y.begin())) continue;
      double s = 0.0;
      for (std::size_t j = 0; j < n; ++j) s += phi.value(g, std::span<const EdgeId>(y.data() + j, k));
      acc[n].add(s);
    }
  }
  if (N >= L) {
    for (const auto& tail : paths_from(g, mu.range(), L - mu.length())) {
      const auto rho = mu.concatenated(g, tail);
      const auto x = BasePoint::greedy_ray(g, rho);
      const auto seq = iterate_sequence(phi, g, CylinderFunction::indicator(rho), x, N);
      for (std::size_t n = std::max<std::size_t>(L, 1); n <= N; ++n) {
        if (!seq[n].is_zero()) acc[n].add(seq[n].log_abs);
      }
    }
  }
  std::vector<double> out(N + 1, kLogZero);
  for (std::size_t n = 1; n <= N; ++n) out[n] = acc[n].value();
  return out;
}

PressureEstimate gurevich(const Potential& phi, const GraphModel& g, const FinitePath& mu, std::size_t N) {
  if (N < 4) throw Error(ErrorCode::InvalidInput, "gurevich needs N >= 4");
  auto rep = nonwandering(g);
  if (rep.case_tag == NwCase::Empty) throw Error(ErrorCode::EmptyNonWandering, "graph has no cycles");
  bool inside = rep.contains(mu.source());
  for (EdgeId e : mu.edges()) inside = inside && rep.contains(g.range(e));
  if (!inside) throw Error(ErrorCode::InvalidInput, "base cylinder leaves the non-wandering set");
  const auto logs = periodic_log_sums(phi, g, mu, N);
  if (std::all_of(logs.begin() + 1, logs.end(), [](double v) { return v == kLogZero; })) {
    throw Error(ErrorCode::EmptyNonWandering, "no periodic orbit meets the base cylinder up to N");
  }
  return estimate_growth(logs, PressureMethod::Gurevich, phi.truncation_variation);
}

PressureEstimate pointwise(const Potential& phi, const GraphModel& g, const BasePoint& x,
                           const CylinderFunction& f, std::size_t N) {
  if (f.empty() || !f.nonnegative()) {
    throw Error(ErrorCode::InvalidInput, "pointwise pressure needs a nonnegative nonzero function");
  }
  const auto seq = iterate_sequence(phi, g, f, x, N);
  std::vector<double> logs(N + 1, kLogZero);
  for (std::size_t n = 0; n <= N; ++n) logs[n] = seq[n].is_zero() ? kLogZero : seq[n].log_abs;
  return estimate_growth(logs, PressureMethod::Pointwise, phi.truncation_variation);
}

PressureEstimate global_pressure(const Potential& phi, const GraphModel& g, std::size_t N) {
  auto rep = nonwandering(g);
  if (rep.case_tag == NwCase::Empty) {
    PressureEstimate est;
    est.N = N;
    for (std::size_t n = 1; n <= N; ++n) est.sequence.emplace_back(n, kLogZero);
    return est;
  }
  return gurevich(phi, g, FinitePath::vertex(rep.vertices.front()), N);
}

PressureCurve pressure_of_beta(const Potential& phi, const GraphModel& g, const std::vector<double>& betas,
                               std::size_t N, Exec exec) {
  PressureCurve curve;
  std::tie(curve.a, curve.b) = phi.bounds(g);
  curve.samples.resize(betas.size());
  for_each_task(exec, betas.size(), [&](std::size_t i) {
    curve.samples[i] = {betas[i], global_pressure(phi.scaled(-betas[i]), g, N)};
  });
  auto order = curve.samples;
  std::sort(order.begin(), order.end(), [](const auto& l, const auto& r) { return l.beta < r.beta; });
  for (std::size_t i = 1; i < order.size(); ++i) {
    const auto& p = order[i - 1];
    const auto& q = order[i];
    if (!std::isfinite(p.p.point) || !std::isfinite(q.p.point)) continue;
    const double gap = q.beta - p.beta;
    const double drop = p.p.point - q.p.point;
    const double err = p.p.half_width() + q.p.half_width() + 1e-9;
    const double excess = std::max({0.0, gap * curve.a - drop - err, drop - gap * curve.b - err});
    curve.worst_sandwich_excess = std::max(curve.worst_sandwich_excess, excess);
  }
  curve.sandwich_holds = curve.worst_sandwich_excess == 0.0;
  return curve;
}

}  // namespace shiftthermo
