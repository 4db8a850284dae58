#include <random>
#include <string>

#include "doctest.h"
#include "shiftthermo/io.hpp"

using namespace shiftthermo;

namespace {

const std::string kGraphs[] = {
    R"({"kind": "Ladder"})",
    R"({"kind": "ExplicitFinite", "params": {"edges": [[0, 0, 0], [1, 0, 1], [2, 1, 0]]}})",
    R"({"kind": "CoreWithInwardRays", "params": {"core_edges": [[0, 0, 0], [1, 0, 0]], "rays": 1}})",
    R"({"kind": "WeightedFullShift", "params": {"symbols": 2}})",
};
const std::string kPotentials[] = {
    R"j({"family_rule": {"constant": "log(2)"}})j",
    R"j({"family_rule": {"up": 0.5, "down": "log(4)"}})j",
    R"j({"depth": 2, "table": {"0 0": 0.1, "0 1": 0.3, "1 2": -0.2, "2 0": 0.5, "2 1": 0.0}})j",
    R"j({"family_rule": {"core_edges": {"0": 1, "1": 2}, "ray_levels": [1, 2]}, "truncation_variation": 0})j",
};

std::string mutate(std::string s, std::mt19937_64& rng) {
  static const std::string alphabet = "{}[]\":,0123456789.-eE abcdlogxyz_\\\n";
  const int edits = std::uniform_int_distribution<int>(1, 4)(rng);
  for (int i = 0; i < edits; ++i) {
    if (s.empty()) s = "{";
    const auto pos = std::uniform_int_distribution<std::size_t>(0, s.size() - 1)(rng);
    const char c = alphabet[std::uniform_int_distribution<std::size_t>(0, alphabet.size() - 1)(rng)];
    switch (rng() % 4) {
      case 0: s[pos] = c; break;
      case 1: s.insert(s.begin() + static_cast<long>(pos), c); break;
      case 2: s.erase(pos, 1); break;
      default: s.resize(pos); break;
    }
  }
  return s;
}

// Outcome of a parse: accepted, or rejected with a library error. Anything
// else (another exception type, a crash) fails the test.
template <class Fn>
bool clean(Fn&& fn) {
  try {
    fn();
    return true;
  } catch (const Error& e) {
    return !is_refusal(e.code());
  } catch (...) {
    return false;
  }
}

}  // namespace

TEST_CASE("mutated graph specs never escape as foreign exceptions") {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 4000; ++i) {
    const auto text = mutate(kGraphs[i % 4], rng);
    CAPTURE(text);
    CHECK(clean([&] { io::parse_graph(text); }));
  }
}

TEST_CASE("mutated potential specs never escape as foreign exceptions") {
  std::mt19937_64 rng(2);
  const GraphModel graphs[] = {GraphModel::ladder(), GraphModel::explicit_finite({{0, 0, 0}, {1, 0, 1}, {2, 1, 0}}),
                               GraphModel::core_with_inward_rays({{0, 0, 0}, {1, 0, 0}}, 1),
                               GraphModel::weighted_full_shift(2)};
  for (int i = 0; i < 4000; ++i) {
    const auto text = mutate(kPotentials[i % 4], rng);
    CAPTURE(text);
    CHECK(clean([&] { io::parse_potential(text, graphs[(i / 4) % 4]); }));
  }
}

TEST_CASE("mutated paths, points and measure tables") {
  std::mt19937_64 rng(3);
  const auto g = GraphModel::ladder();
  for (int i = 0; i < 3000; ++i) {
    const auto path = mutate("u_0 u_1 d_2", rng);
    const auto point = mutate("[3] | d_3 u_0 u_1 u_2", rng);
    const auto table = mutate("[0]\t0\nu_0\t-0.125\nd_0\t-inf\n", rng);
    CAPTURE(path);
    CAPTURE(point);
    CAPTURE(table);
    CHECK(clean([&] { io::parse_path(g, path); }));
    CHECK(clean([&] { io::parse_point(g, point); }));
    CHECK(clean([&] { io::read_measure_tsv(table, g); }));
  }
}
