#include "shiftthermo/dissipativity.hpp"

#include <cmath>

#include "shiftthermo/transfer.hpp"

namespace shiftthermo {

std::string_view to_string(Verdict v) {
  return v == Verdict::DissipativeCertified ? "DISSIPATIVE_CERTIFIED" : "INCONCLUSIVE";
}

DissipativityReport dissipativity_test(const Potential& phi, double beta, const GraphModel& g,
                                       const CylinderFunction& f, const std::vector<BasePoint>& points,
                                       std::size_t N, Exec exec) {
  if (!f.nonnegative() || f.empty()) throw Error(ErrorCode::InvalidInput, "f must be nonnegative and nonzero");
  const Potential psi = phi.scaled(-beta);
  DissipativityReport rep;
  rep.pressure = global_pressure(psi, g, N);
  rep.verdict = rep.pressure.hi < 0.0 ? Verdict::DissipativeCertified : Verdict::Inconclusive;

  rep.samples.resize(points.size());
  for_each_task(exec, points.size(), [&](std::size_t i) {
    auto& s = rep.samples[i];
    s.point = points[i];
    const auto terms = iterate_sequence(psi, g, f, points[i], N);
    LogAccumulator acc;
    for (const auto& t : terms) {
      if (!t.is_zero()) acc.add(t.log_abs);
      s.log_partial_sums.push_back(acc.value());
    }
    // Last positive term against the last positive one at least ten steps earlier.
    std::ptrdiff_t last = static_cast<std::ptrdiff_t>(terms.size()) - 1;
    while (last >= 0 && terms[static_cast<std::size_t>(last)].is_zero()) --last;
    std::ptrdiff_t prev = last - 10;
    while (prev >= 0 && terms[static_cast<std::size_t>(prev)].is_zero()) --prev;
    if (last >= 0 && prev >= 0) {
      const double lr = (terms[static_cast<std::size_t>(last)].log_abs - terms[static_cast<std::size_t>(prev)].log_abs) /
                        static_cast<double>(last - prev);
      s.decay_ratio = std::exp(lr);
      s.diverging = lr > -1e-9;
    }
  });
  return rep;
}

}  // namespace shiftthermo
