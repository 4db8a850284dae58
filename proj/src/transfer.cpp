#include "shiftthermo/transfer.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace shiftthermo {

namespace {

double window_value(const Potential& phi, const GraphModel& g, const EdgeId* begin) {
  return phi.value(g, std::span<const EdgeId>(begin, phi.depth()));
}

}  // namespace

ForwardSweep::ForwardSweep(const Potential& phi, const GraphModel& g, const BasePoint& x)
    : phi_(phi), g_(g), target_(x.source()), x_head_(x.first_edges(g, phi.depth() - 1)) {
  if (phi.depth() > kMaxPotentialDepth) throw Error(ErrorCode::InvalidInput, "potential depth too large");
}

SweepKey ForwardSweep::key_of(const Potential& phi, const FinitePath& mu) {
  SweepKey key;
  key.vertex = mu.range();
  const std::size_t keep = std::min(mu.length(), phi.depth() - 1);
  key.len = static_cast<std::uint8_t>(keep);
  const auto& e = mu.edges();
  std::copy(e.end() - static_cast<std::ptrdiff_t>(keep), e.end(), key.hist.begin());
  return key;
}

double ForwardSweep::inner_log_weight(const Potential& phi, const GraphModel& g, const FinitePath& mu) {
  const std::size_t k = phi.depth();
  if (mu.length() < k) return 0.0;
  double s = 0.0;
  for (std::size_t j = 0; j + k <= mu.length(); ++j) s += window_value(phi, g, mu.edges().data() + j);
  return s;
}

void ForwardSweep::seed(const FinitePath& mu, double log_weight) {
  seed(key_of(phi_, mu), log_weight + inner_log_weight(phi_, g_, mu));
}

void ForwardSweep::seed(const SweepKey& key, double log_weight) {
  if (log_weight == kLogZero) return;
  if (layer_.empty()) {
    log_scale_ = log_weight;
    layer_.emplace_back(key, 1.0);
    return;
  }
  if (log_weight > log_scale_) {
    const double f = std::exp(log_scale_ - log_weight);
    for (auto& entry : layer_) entry.second *= f;
    log_scale_ = log_weight;
  }
  const double w = std::exp(log_weight - log_scale_);
  auto it = std::lower_bound(layer_.begin(), layer_.end(), key,
                             [](const auto& entry, const SweepKey& k) { return entry.first < k; });
  if (it != layer_.end() && it->first == key) {
    it->second += w;
  } else {
    layer_.emplace(it, key, w);
  }
}

double ForwardSweep::close() const {
  const std::size_t k = phi_.depth();
  LogAccumulator acc;
  std::array<EdgeId, 2 * kMaxPotentialDepth> combined{};
  for (const auto& [key, w] : layer_) {
    if (key.vertex != target_ || w <= 0.0) continue;
    std::copy(key.hist.begin(), key.hist.begin() + key.len, combined.begin());
    std::copy(x_head_.begin(), x_head_.end(), combined.begin() + key.len);
    double extra = 0.0;
    for (std::size_t i = 0; i < key.len; ++i) extra += window_value(phi_, g_, combined.data() + i);
    acc.add(std::log(w) + extra);
  }
  (void)k;
  return acc.empty() ? kLogZero : log_scale_ + acc.value();
}

void ForwardSweep::step() {
  const std::size_t k = phi_.depth();
  const std::size_t full = k - 1;
  std::vector<std::pair<SweepKey, double>> next;
  next.reserve(layer_.size() * 2);
  std::array<EdgeId, kMaxPotentialDepth> window{};
  for (const auto& [key, w] : layer_) {
    const double lw = std::log(w);
    g_.for_each_out_edge(key.vertex, [&](EdgeId e) {
      SweepKey nk;
      nk.vertex = g_.range(e);
      double lf = 0.0;
      if (key.len == full) {
        std::copy(key.hist.begin(), key.hist.begin() + static_cast<std::ptrdiff_t>(full), window.begin());
        window[full] = e;
        lf = window_value(phi_, g_, window.data());
        nk.len = key.len;
        if (full > 0) {
          std::copy(window.begin() + 1, window.begin() + static_cast<std::ptrdiff_t>(k), nk.hist.begin());
        }
      } else {
        nk.len = static_cast<std::uint8_t>(key.len + 1);
        std::copy(key.hist.begin(), key.hist.begin() + key.len, nk.hist.begin());
        nk.hist[key.len] = e;
      }
      next.emplace_back(nk, lw + lf);
    });
  }
  std::stable_sort(next.begin(), next.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<std::pair<SweepKey, double>> merged;
  merged.reserve(next.size());
  for (const auto& entry : next) {
    if (!merged.empty() && merged.back().first == entry.first) {
      merged.back().second = log_add(merged.back().second, entry.second);
    } else {
      merged.push_back(entry);
    }
  }
  double top = kLogZero;
  for (const auto& entry : merged) top = std::max(top, entry.second);
  layer_.clear();
  if (top == kLogZero || !std::isfinite(top)) return;
  for (const auto& [key, lw] : merged) {
    const double w = std::exp(lw - top);
    if (w > 0.0) layer_.emplace_back(key, w);
  }
  log_scale_ += top;
}

namespace {

// L^n f(x) for n < d, where the path p is a proper prefix of a support cylinder.
double direct_term(const Potential& phi, const GraphModel& g, const FinitePath& mu, const BasePoint& x,
                   std::size_t n) {
  const std::size_t d = mu.length();
  const auto head = x.first_edges(g, std::max(d - n, phi.depth() - 1));
  if (!std::equal(mu.edges().begin() + static_cast<std::ptrdiff_t>(n), mu.edges().end(), head.begin())) {
    return kLogZero;
  }
  if (n == 0) return x.source() == mu.source() ? 0.0 : kLogZero;
  std::vector<EdgeId> combined(mu.edges().begin(), mu.edges().begin() + static_cast<std::ptrdiff_t>(n));
  combined.insert(combined.end(), head.begin(), head.begin() + static_cast<std::ptrdiff_t>(phi.depth() - 1));
  double s = 0.0;
  for (std::size_t j = 0; j < n; ++j) s += phi.value(g, std::span<const EdgeId>(combined.data() + j, phi.depth()));
  return s;
}

std::vector<double> nonnegative_sequence(const Potential& phi, const GraphModel& g,
                                         const CylinderFunction& f, const BasePoint& x,
                                         std::size_t n_max) {
  std::vector<double> out(n_max + 1, kLogZero);
  const std::size_t d = f.depth();
  for (std::size_t n = 0; n < d && n <= n_max; ++n) {
    LogAccumulator acc;
    for (const auto& [mu, w] : f.terms()) acc.add(w.log_abs + direct_term(phi, g, mu, x, n));
    out[n] = acc.value();
  }
  if (d > n_max || f.empty()) return out;
  ForwardSweep sweep(phi, g, x);
  for (const auto& [mu, w] : f.terms()) sweep.seed(mu, w.log_abs);
  for (std::size_t n = d; n <= n_max; ++n) {
    out[n] = sweep.close();
    if (n == n_max) break;
    sweep.step();
    if (sweep.exhausted()) break;
  }
  return out;
}

}  // namespace

std::vector<SignedLog> iterate_sequence(const Potential& phi, const GraphModel& g,
                                        const CylinderFunction& f, const BasePoint& x,
                                        std::size_t n_max) {
  auto [pos, neg] = f.split_signs();
  const auto p = nonnegative_sequence(phi, g, pos, x, n_max);
  const auto q = nonnegative_sequence(phi, g, neg, x, n_max);
  std::vector<SignedLog> out(n_max + 1);
  for (std::size_t n = 0; n <= n_max; ++n) {
    out[n] = SignedLog::from_log(p[n]) + -SignedLog::from_log(q[n]);
  }
  return out;
}

SignedLog apply_pointwise_log(const Potential& phi, const GraphModel& g, const CylinderFunction& f,
                              const BasePoint& x, std::size_t n) {
  return iterate_sequence(phi, g, f, x, n)[n];
}

double apply_pointwise(const Potential& phi, const GraphModel& g, const CylinderFunction& f,
                       const BasePoint& x, std::size_t n) {
  return apply_pointwise_log(phi, g, f, x, n).to_double();
}

CylinderFunction apply_functional(const Potential& phi, const GraphModel& g, const CylinderFunction& f) {
  const std::size_t d = f.depth();
  if (d < std::max<std::size_t>(phi.depth(), 1)) {
    throw Error(ErrorCode::DepthUnderflow, "function depth " + std::to_string(d) +
                                               " is below the potential depth; refine first");
  }
  CylinderFunction out(d - 1);
  for (const auto& [mu, w] : f.terms()) {
    const double lf = phi.value(g, std::span<const EdgeId>(mu.edges().data(), phi.depth()));
    out.add(mu.dropped(g, 1), w.scaled_log(lf));
  }
  return out;
}

namespace {

SeriesResult run_series(ForwardSweep& sweep, const SeriesOptions& opt) {
  SeriesResult res;
  std::vector<double> terms;
  LogAccumulator partial;
  const double log_tol = std::log(opt.rel_tol);
  bool exact = false;
  for (std::size_t m = 0;; ++m) {
    const double t = sweep.close();
    terms.push_back(t);
    partial.add(t);
    const std::size_t count = m + 1;
    if (count >= opt.max_terms) {
      res.converged = false;
      break;
    }
    if (!partial.empty() && count >= std::max(opt.min_terms, opt.window)) {
      double recent = kLogZero;
      for (std::size_t i = count - opt.window; i < count; ++i) recent = std::max(recent, terms[i]);
      if (recent < partial.value() + log_tol) break;
    }
    if (partial.empty() && count >= opt.zero_cutoff) {
      res.converged = false;
      break;
    }
    sweep.step();
    if (sweep.exhausted()) {
      exact = true;
      break;
    }
  }
  res.log_sum = partial.value();
  res.terms = terms.size();
  if (exact) {
    res.log_tail_bound = kLogZero;
    return res;
  }
  // Geometric tail from the last two positive terms at least ten apart.
  std::ptrdiff_t last = static_cast<std::ptrdiff_t>(terms.size()) - 1;
  while (last >= 0 && terms[static_cast<std::size_t>(last)] == kLogZero) --last;
  std::ptrdiff_t prev = last - 10;
  while (prev >= 0 && terms[static_cast<std::size_t>(prev)] == kLogZero) --prev;
  if (last < 0 || prev < 0) {
    res.log_tail_bound = partial.empty() ? kLogZero : std::numeric_limits<double>::infinity();
    return res;
  }
  const double lr = (terms[static_cast<std::size_t>(last)] - terms[static_cast<std::size_t>(prev)]) /
                    static_cast<double>(last - prev);
  res.decay_ratio = std::exp(lr);
  if (lr < 0) {
    res.log_tail_bound = terms[static_cast<std::size_t>(last)] + lr - std::log(-std::expm1(lr));
  } else {
    res.log_tail_bound = std::numeric_limits<double>::infinity();
  }
  return res;
}

}  // namespace

std::vector<SeriesResult> cylinder_series(const Potential& phi, const GraphModel& g,
                                          const std::vector<FinitePath>& cylinders,
                                          const BasePoint& x, const SeriesOptions& opt, Exec exec) {
  std::map<SweepKey, std::size_t> key_index;
  std::vector<SweepKey> keys;
  std::vector<std::size_t> slot(cylinders.size());
  for (std::size_t i = 0; i < cylinders.size(); ++i) {
    const auto key = ForwardSweep::key_of(phi, cylinders[i]);
    auto [it, fresh] = key_index.emplace(key, keys.size());
    if (fresh) keys.push_back(key);
    slot[i] = it->second;
  }
  std::vector<SeriesResult> tails(keys.size());
  for_each_task(exec, keys.size(), [&](std::size_t i) {
    ForwardSweep sweep(phi, g, x);
    sweep.seed(keys[i], 0.0);
    tails[i] = run_series(sweep, opt);
  });
  std::vector<SeriesResult> out(cylinders.size());
  for (std::size_t i = 0; i < cylinders.size(); ++i) {
    const auto& mu = cylinders[i];
    const auto& tail = tails[slot[i]];
    LogAccumulator acc;
    for (std::size_t n = 0; n < mu.length(); ++n) acc.add(direct_term(phi, g, mu, x, n));
    const double inner = ForwardSweep::inner_log_weight(phi, g, mu);
    acc.add(tail.log_sum == kLogZero ? kLogZero : inner + tail.log_sum);
    auto& r = out[i];
    r.log_sum = acc.value();
    r.terms = mu.length() + tail.terms;
    r.log_tail_bound = tail.log_tail_bound == kLogZero ? kLogZero : inner + tail.log_tail_bound;
    r.converged = tail.converged;
    r.decay_ratio = tail.decay_ratio;
  }
  return out;
}

SeriesResult function_series(const Potential& phi, const GraphModel& g, const CylinderFunction& f,
                             const BasePoint& x, const SeriesOptions& opt, Exec exec) {
  if (!f.nonnegative()) throw Error(ErrorCode::InvalidInput, "series needs a nonnegative function");
  std::vector<FinitePath> cyl;
  std::vector<double> weights;
  for (const auto& [mu, w] : f.terms()) {
    cyl.push_back(mu);
    weights.push_back(w.log_abs);
  }
  const auto parts = cylinder_series(phi, g, cyl, x, opt, exec);
  SeriesResult res;
  LogAccumulator sum, tail;
  res.converged = true;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (parts[i].log_sum != kLogZero) sum.add(weights[i] + parts[i].log_sum);
    if (parts[i].log_tail_bound != kLogZero) tail.add(weights[i] + parts[i].log_tail_bound);
    res.terms = std::max(res.terms, parts[i].terms);
    res.converged = res.converged && parts[i].converged;
    res.decay_ratio = std::max(res.decay_ratio, parts[i].decay_ratio);
  }
  res.log_sum = sum.value();
  res.log_tail_bound = tail.value();
  return res;
}

}  // namespace shiftthermo
