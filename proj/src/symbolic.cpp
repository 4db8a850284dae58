#include "shiftthermo/symbolic.hpp"

#include <algorithm>
#include <cmath>

namespace shiftthermo {

FinitePath FinitePath::vertex(VertexId v) {
  FinitePath p;
  p.start_ = v;
  p.end_ = v;
  return p;
}

FinitePath FinitePath::from_edges(const GraphModel& g, std::vector<EdgeId> edges) {
  if (edges.empty()) throw Error(ErrorCode::InvalidInput, "use FinitePath::vertex for empty paths");
  for (EdgeId e : edges) {
    if (!g.has_edge(e)) throw Error(ErrorCode::InvalidInput, "unknown edge " + std::to_string(e));
  }
  for (std::size_t i = 1; i < edges.size(); ++i) {
    if (g.range(edges[i - 1]) != g.source(edges[i])) {
      throw Error(ErrorCode::InvalidInput, "edges " + g.edge_label(edges[i - 1]) + " and " +
                                               g.edge_label(edges[i]) + " do not compose");
    }
  }
  FinitePath p;
  p.start_ = g.source(edges.front());
  p.end_ = g.range(edges.back());
  p.edges_ = std::move(edges);
  return p;
}

FinitePath FinitePath::extended(const GraphModel& g, EdgeId e) const {
  if (g.source(e) != end_) {
    throw Error(ErrorCode::InvalidInput, "edge " + g.edge_label(e) + " does not leave the path end");
  }
  FinitePath p = *this;
  p.edges_.push_back(e);
  p.end_ = g.range(e);
  return p;
}

FinitePath FinitePath::dropped(const GraphModel& g, std::size_t count) const {
  if (count == 0) return *this;
  if (count >= edges_.size()) return vertex(end_);
  return from_edges(g, std::vector<EdgeId>(edges_.begin() + static_cast<std::ptrdiff_t>(count), edges_.end()));
}

FinitePath FinitePath::truncated(const GraphModel& g, std::size_t length) const {
  if (length >= edges_.size()) return *this;
  if (length == 0) return vertex(start_);
  return from_edges(g, std::vector<EdgeId>(edges_.begin(), edges_.begin() + static_cast<std::ptrdiff_t>(length)));
}

FinitePath FinitePath::concatenated(const GraphModel& g, const FinitePath& other) const {
  if (other.start_ != end_) throw Error(ErrorCode::InvalidInput, "paths do not compose");
  if (other.empty()) return *this;
  if (empty()) return other;
  auto edges = edges_;
  edges.insert(edges.end(), other.edges_.begin(), other.edges_.end());
  return from_edges(g, std::move(edges));
}

bool FinitePath::starts_with(const FinitePath& prefix) const {
  if (prefix.start_ != start_ || prefix.edges_.size() > edges_.size()) return false;
  return std::equal(prefix.edges_.begin(), prefix.edges_.end(), edges_.begin());
}

std::vector<FinitePath> paths_from(const GraphModel& g, VertexId v, std::size_t length) {
  std::vector<FinitePath> layer{FinitePath::vertex(v)};
  for (std::size_t i = 0; i < length; ++i) {
    std::vector<FinitePath> next;
    for (const auto& p : layer) {
      g.for_each_out_edge(p.range(), [&](EdgeId e) { next.push_back(p.extended(g, e)); });
    }
    layer = std::move(next);
  }
  return layer;
}

BasePoint BasePoint::periodic(const GraphModel& g, FinitePath prefix, FinitePath loop) {
  if (loop.empty()) throw Error(ErrorCode::InvalidInput, "loop of a base point must be non-empty");
  if (loop.source() != loop.range() || loop.source() != prefix.range()) {
    throw Error(ErrorCode::InvalidInput, "loop must start and end at the end of the prefix");
  }
  (void)g;
  BasePoint x;
  x.prefix_ = std::move(prefix);
  x.loop_ = std::move(loop);
  x.tail_ = Tail::Loop;
  return x;
}

BasePoint BasePoint::greedy_ray(const GraphModel& g, FinitePath prefix) {
  if (!g.has_vertex(prefix.range())) throw Error(ErrorCode::InvalidInput, "prefix ends outside the graph");
  BasePoint x;
  x.prefix_ = std::move(prefix);
  x.loop_ = FinitePath::vertex(x.prefix_.range());
  x.tail_ = Tail::GreedyRay;
  return x;
}

EdgeId BasePoint::edge_at(const GraphModel& g, std::size_t i) const {
  const auto& pre = prefix_.edges();
  if (i < pre.size()) return pre[i];
  i -= pre.size();
  if (tail_ == Tail::Loop) return loop_.edges()[i % loop_.length()];
  VertexId v = prefix_.range();
  EdgeId e = -1;
  for (std::size_t step = 0; step <= i; ++step) {
    bool first = true;
    g.for_each_out_edge(v, [&](EdgeId cand) {
      if (first) e = cand;
      first = false;
    });
    v = g.range(e);
  }
  return e;
}

std::vector<EdgeId> BasePoint::first_edges(const GraphModel& g, std::size_t count) const {
  std::vector<EdgeId> out;
  out.reserve(count);
  const auto& pre = prefix_.edges();
  for (std::size_t i = 0; i < count && i < pre.size(); ++i) out.push_back(pre[i]);
  if (out.size() == count) return out;
  if (tail_ == Tail::Loop) {
    for (std::size_t i = 0; out.size() < count; ++i) out.push_back(loop_.edges()[i % loop_.length()]);
    return out;
  }
  VertexId v = prefix_.range();
  while (out.size() < count) {
    bool first = true;
    g.for_each_out_edge(v, [&](EdgeId e) {
      if (first) out.push_back(e);
      first = false;
    });
    v = g.range(out.back());
  }
  return out;
}

BasePoint BasePoint::shifted(const GraphModel& g) const {
  BasePoint x = *this;
  if (!prefix_.empty()) {
    x.prefix_ = prefix_.dropped(g, 1);
    return x;
  }
  if (tail_ == Tail::Loop) {
    auto edges = loop_.edges();
    std::rotate(edges.begin(), edges.begin() + 1, edges.end());
    x.loop_ = FinitePath::from_edges(g, std::move(edges));
    x.prefix_ = FinitePath::vertex(x.loop_.source());
    return x;
  }
  const EdgeId e = edge_at(g, 0);
  return greedy_ray(g, FinitePath::vertex(g.range(e)));
}

bool BasePoint::in_cylinder(const GraphModel& g, const FinitePath& mu) const {
  if (mu.source() != source()) return false;
  const auto head = first_edges(g, mu.length());
  return std::equal(head.begin(), head.end(), mu.edges().begin());
}

CylinderFunction CylinderFunction::indicator(const FinitePath& mu) {
  CylinderFunction f(mu.length());
  f.add(mu, 1.0);
  return f;
}

bool CylinderFunction::nonnegative() const {
  return std::all_of(terms_.begin(), terms_.end(), [](const auto& t) { return t.second.sign > 0; });
}

void CylinderFunction::add(const FinitePath& mu, SignedLog weight) {
  if (mu.length() != depth_) {
    throw Error(ErrorCode::InvalidInput, "cylinder of length " + std::to_string(mu.length()) +
                                             " in a depth-" + std::to_string(depth_) + " function");
  }
  if (weight.is_zero()) return;
  auto it = terms_.find(mu);
  if (it == terms_.end()) {
    terms_.emplace(mu, weight);
    return;
  }
  it->second = it->second + weight;
  if (it->second.is_zero()) terms_.erase(it);
}

CylinderFunction CylinderFunction::scaled(double factor) const {
  CylinderFunction out(depth_);
  if (factor == 0.0) return out;
  const auto f = SignedLog::from_double(factor);
  for (const auto& [mu, w] : terms_) out.terms_.emplace(mu, w * f);
  return out;
}

CylinderFunction CylinderFunction::refined(const GraphModel& g, std::size_t new_depth) const {
  if (new_depth < depth_) throw Error(ErrorCode::InvalidInput, "cannot refine to a smaller depth");
  CylinderFunction out(new_depth);
  for (const auto& [mu, w] : terms_) {
    for (const auto& tail : paths_from(g, mu.range(), new_depth - depth_)) {
      out.add(mu.concatenated(g, tail), w);
    }
  }
  return out;
}

std::pair<CylinderFunction, CylinderFunction> CylinderFunction::split_signs() const {
  CylinderFunction pos(depth_), neg(depth_);
  for (const auto& [mu, w] : terms_) {
    if (w.sign > 0) pos.terms_.emplace(mu, w);
    if (w.sign < 0) neg.terms_.emplace(mu, -w);
  }
  return {pos, neg};
}

CylinderFunction linear_combination(const GraphModel& g, double alpha, const CylinderFunction& f,
                                    double beta, const CylinderFunction& h) {
  const auto depth = std::max(f.depth(), h.depth());
  auto fa = f.refined(g, depth).scaled(alpha);
  auto hb = h.refined(g, depth).scaled(beta);
  for (const auto& [mu, w] : hb.terms()) fa.add(mu, w);
  return fa;
}

double evaluate(const GraphModel& g, const CylinderFunction& f, const BasePoint& x) {
  const auto head = x.first_edges(g, f.depth());
  FinitePath key = head.empty() ? FinitePath::vertex(x.source()) : FinitePath::from_edges(g, head);
  auto it = f.terms().find(key);
  return it == f.terms().end() ? 0.0 : it->second.to_double();
}

void CylinderMeasure::set_log(const FinitePath& mu, double log_value) {
  if (mu.length() > depth_) throw Error(ErrorCode::InvalidInput, "cylinder deeper than the measure");
  if (std::isnan(log_value)) throw Error(ErrorCode::InvalidInput, "NaN measure value");
  values_[mu] = log_value;
}

void CylinderMeasure::set(const FinitePath& mu, double value) {
  if (value < 0) throw Error(ErrorCode::InvalidInput, "negative measure value");
  set_log(mu, value == 0.0 ? kLogZero : std::log(value));
}

std::optional<double> CylinderMeasure::log_value(const FinitePath& mu) const {
  auto it = values_.find(mu);
  if (it == values_.end()) return std::nullopt;
  return it->second;
}

double CylinderMeasure::value(const FinitePath& mu) const {
  auto lv = log_value(mu);
  if (!lv) throw Error(ErrorCode::InvalidInput, "cylinder not stored in the measure");
  return std::exp(*lv);
}

CylinderMeasure CylinderMeasure::restrict_depth(std::size_t d) const {
  CylinderMeasure out(std::min(d, depth_));
  out.finite_total = finite_total;
  for (const auto& [mu, lv] : values_) {
    if (mu.length() <= d) out.values_.emplace(mu, lv);
  }
  return out;
}

CylinderMeasure CylinderMeasure::rescaled(double factor) const {
  if (!(factor > 0)) throw Error(ErrorCode::InvalidInput, "measure rescale factor must be positive");
  CylinderMeasure out(depth_);
  out.finite_total = finite_total;
  const double lf = std::log(factor);
  for (const auto& [mu, lv] : values_) out.values_.emplace(mu, lv + lf);
  return out;
}

double CylinderMeasure::integrate(const CylinderFunction& f) const {
  SignedLog acc;
  for (const auto& [mu, w] : f.terms()) {
    auto lv = log_value(mu);
    if (!lv) throw Error(ErrorCode::InvalidInput, "integrand cylinder not stored in the measure");
    acc = acc + w.scaled_log(*lv);
  }
  return acc.to_double();
}

CylinderMeasure::Additivity CylinderMeasure::additivity(const GraphModel& g) const {
  Additivity rep;
  for (const auto& [mu, lv] : values_) {
    if (mu.length() >= depth_) continue;
    LogAccumulator children;
    bool complete = true;
    g.for_each_out_edge(mu.range(), [&](EdgeId e) {
      if (!complete) return;
      auto child = log_value(mu.extended(g, e));
      if (!child) {
        complete = false;
        return;
      }
      children.add(*child);
    });
    if (!complete) continue;
    ++rep.checked;
    const double a = lv, b = children.value();
    if (a == kLogZero && b == kLogZero) continue;
    const double hi = std::max(a, b);
    const double rel = std::fabs(std::exp(a - hi) - std::exp(b - hi));
    rep.max_relative = std::max(rep.max_relative, rel);
  }
  return rep;
}

}  // namespace shiftthermo
