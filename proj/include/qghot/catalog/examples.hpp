#pragma once

// Named graph families. Every builder is deterministic in its parameters.
//
//   path               length=1 | lengths=a:b:...   (collinear pieces)
//   cycle              length=1 | lengths=...       (one piece: a loop)
//   pumpkin            E=3, length=1 | lengths=...  (parallel edges v1 - v2)
//   star               E=3, length=1 | lengths=...
//   flower             petals=2, length=1 | lengths=...
//   complete           V=4, length=1
//   lasso              loop=1, tail=1
//   figure8            lengths=1:1
//   perturbed_figure8  eps=0.05                     (loops pi, two pendants eps)
//   loop_dumbbell      loop=0.1, bar=pi             (bar with a loop at each end)
//   krpamm_tree        eps=0.05, m=5, delta=0
//   n_star_long_short  n=5, eps=0.1                 (one unit edge, n-1 of length eps)
//   pumpkin_on_stick   lengths=1:1:1:1:1            (stick, three parallel edges, stick)
//   pumpkin_necklace   thickness=4, lengths=...     (two pumpkins, a gap edge, a 5-edge ring)
//   fig_m3             lengths=3:0.3:0.4:0.6:0.8    (e-, e0, e1, e2, e3)

#include <string>
#include <vector>

#include "qghot/catalog/krpamm.hpp"
#include "qghot/catalog/params.hpp"
#include "qghot/graph.hpp"

namespace qghot {

namespace detail {

inline std::vector<double> lengths_param(const Params& p, std::size_t count) {
  double unit = p.number("length", 1.0);
  auto out = p.list("lengths", std::vector<double>(count, unit));
  if (out.size() != count) {
    fail(ErrorCode::BadParameter, "expected " + std::to_string(count) + " lengths, got " + std::to_string(out.size()));
  }
  return out;
}

inline std::size_t count_param(const Params& p, const std::string& key, long fallback, long minimum) {
  long n = p.integer(key, fallback);
  if (p.has("lengths") && !p.has(key)) n = static_cast<long>(p.list("lengths", {}).size());
  if (n < minimum) fail(ErrorCode::BadParameter, key + " must be at least " + std::to_string(minimum));
  return static_cast<std::size_t>(n);
}

inline std::string vname(const std::string& base, std::size_t i) { return base + std::to_string(i); }

}  // namespace detail

inline MetricGraph path_graph(const std::vector<double>& lengths) {
  GraphDescription d{"path", {}, {}};
  for (std::size_t i = 0; i <= lengths.size(); ++i) d.vertices.push_back(detail::vname("v", i));
  for (std::size_t i = 0; i < lengths.size(); ++i)
    d.edges.push_back({detail::vname("e", i + 1), d.vertices[i], d.vertices[i + 1], lengths[i]});
  return build_graph(d);
}

inline MetricGraph cycle_graph(const std::vector<double>& lengths) {
  GraphDescription d{"cycle", {}, {}};
  const std::size_t n = lengths.size();
  for (std::size_t i = 0; i < n; ++i) d.vertices.push_back(detail::vname("v", i));
  for (std::size_t i = 0; i < n; ++i)
    d.edges.push_back({detail::vname("e", i + 1), d.vertices[i], d.vertices[(i + 1) % n], lengths[i]});
  return build_graph(d);
}

inline MetricGraph pumpkin_graph(const std::vector<double>& lengths) {
  GraphDescription d{"pumpkin", {"v1", "v2"}, {}};
  for (std::size_t i = 0; i < lengths.size(); ++i) d.edges.push_back({detail::vname("e", i + 1), "v1", "v2", lengths[i]});
  return build_graph(d);
}

inline MetricGraph star_graph(const std::vector<double>& lengths) {
  GraphDescription d{"star", {"v0"}, {}};
  for (std::size_t i = 0; i < lengths.size(); ++i) {
    d.vertices.push_back(detail::vname("v", i + 1));
    d.edges.push_back({detail::vname("e", i + 1), "v0", d.vertices.back(), lengths[i]});
  }
  return build_graph(d);
}

inline MetricGraph flower_graph(const std::vector<double>& lengths) {
  GraphDescription d{"flower", {"v0"}, {}};
  for (std::size_t i = 0; i < lengths.size(); ++i) d.edges.push_back({detail::vname("e", i + 1), "v0", "v0", lengths[i]});
  return build_graph(d);
}

inline MetricGraph complete_graph(std::size_t vertices, double length = 1.0) {
  GraphDescription d{"complete", {}, {}};
  for (std::size_t i = 0; i < vertices; ++i) d.vertices.push_back(detail::vname("v", i));
  std::size_t id = 1;
  for (std::size_t i = 0; i < vertices; ++i)
    for (std::size_t j = i + 1; j < vertices; ++j)
      d.edges.push_back({detail::vname("e", id++), d.vertices[i], d.vertices[j], length});
  return build_graph(d);
}

inline MetricGraph lasso_graph(double loop = 1.0, double tail = 1.0) {
  return build_graph({"lasso", {"v0", "v1"}, {{"loop", "v0", "v0", loop}, {"tail", "v0", "v1", tail}}});
}

inline MetricGraph perturbed_figure8(double eps) {
  return build_graph({"perturbed_figure8",
                      {"v0", "v1", "v2"},
                      {{"loop1", "v0", "v0", M_PI}, {"loop2", "v0", "v0", M_PI}, {"tail1", "v0", "v1", eps},
                       {"tail2", "v0", "v2", eps}}});
}

inline MetricGraph loop_dumbbell(double loop, double bar) {
  return build_graph({"loop_dumbbell",
                      {"v1", "v2"},
                      {{"loop1", "v1", "v1", loop}, {"bar", "v1", "v2", bar}, {"loop2", "v2", "v2", loop}}});
}

inline MetricGraph n_star_long_short(std::size_t n, double eps) {
  std::vector<double> lengths(n, eps);
  lengths[0] = 1.0;
  auto g = star_graph(lengths);
  auto d = describe(g);
  d.name = "n_star_long_short";
  return build_graph(d);
}

/// Edge order: stick a (leaf a - b), three parallel edges b - c, stick c - leaf d.
inline MetricGraph pumpkin_on_stick(const std::vector<double>& lengths) {
  if (lengths.size() != 5) fail(ErrorCode::BadParameter, "pumpkin_on_stick needs 5 lengths");
  return build_graph({"pumpkin_on_stick",
                      {"a", "b", "c", "d"},
                      {{"s1", "a", "b", lengths[0]},
                       {"p1", "b", "c", lengths[1]},
                       {"p2", "b", "c", lengths[2]},
                       {"p3", "b", "c", lengths[3]},
                       {"s2", "c", "d", lengths[4]}}});
}

/// Lengths: t edges of pumpkin a-b, gap edge b-c, t edges of pumpkin c-d,
/// then the ring a-r1-r2-r3-r4-d.
inline MetricGraph pumpkin_necklace(std::size_t thickness, const std::vector<double>& lengths) {
  if (lengths.size() != 2 * thickness + 6) {
    fail(ErrorCode::BadParameter, "pumpkin_necklace needs 2*thickness + 6 lengths");
  }
  GraphDescription d{"pumpkin_necklace", {"a", "b", "c", "d", "r1", "r2", "r3", "r4"}, {}};
  std::size_t i = 0;
  for (std::size_t j = 0; j < thickness; ++j) d.edges.push_back({detail::vname("p", j + 1), "a", "b", lengths[i++]});
  d.edges.push_back({"gap", "b", "c", lengths[i++]});
  for (std::size_t j = 0; j < thickness; ++j) d.edges.push_back({detail::vname("q", j + 1), "c", "d", lengths[i++]});
  const char* ring[] = {"a", "r1", "r2", "r3", "r4", "d"};
  for (std::size_t j = 0; j < 5; ++j) d.edges.push_back({detail::vname("r", j + 1) + "e", ring[j], ring[j + 1], lengths[i++]});
  return build_graph(d);
}

inline MetricGraph fig_m3(const std::vector<double>& lengths) {
  if (lengths.size() != 5) fail(ErrorCode::BadParameter, "fig_m3 needs 5 lengths (e-, e0, e1, e2, e3)");
  return build_graph({"fig_m3",
                      {"v-", "v0", "w", "v1", "v2", "v3"},
                      {{"e-", "v-", "v0", lengths[0]},
                       {"e0", "v0", "w", lengths[1]},
                       {"e1", "w", "v1", lengths[2]},
                       {"e2", "w", "v2", lengths[3]},
                       {"e3", "v0", "v3", lengths[4]}}});
}

inline const std::vector<std::string>& example_ids() {
  static const std::vector<std::string> ids = {
      "path",        "cycle",         "pumpkin",          "star",           "flower",
      "complete",    "lasso",         "figure8",          "perturbed_figure8", "loop_dumbbell",
      "krpamm_tree", "n_star_long_short", "pumpkin_on_stick", "pumpkin_necklace", "fig_m3"};
  return ids;
}

inline MetricGraph build_example(const std::string& id, const Params& p = {}) {
  using detail::count_param;
  using detail::lengths_param;
  if (id == "path") {
    p.restrict_to({"length", "lengths"}, id);
    return path_graph(p.list("lengths", {p.number("length", 1.0)}));
  }
  if (id == "cycle") {
    p.restrict_to({"length", "lengths"}, id);
    return cycle_graph(p.list("lengths", {p.number("length", 1.0)}));
  }
  if (id == "pumpkin") {
    p.restrict_to({"E", "length", "lengths"}, id);
    return pumpkin_graph(lengths_param(p, count_param(p, "E", 3, 2)));
  }
  if (id == "star") {
    p.restrict_to({"E", "length", "lengths"}, id);
    return star_graph(lengths_param(p, count_param(p, "E", 3, 2)));
  }
  if (id == "flower") {
    p.restrict_to({"petals", "length", "lengths"}, id);
    return flower_graph(lengths_param(p, count_param(p, "petals", 2, 1)));
  }
  if (id == "complete") {
    p.restrict_to({"V", "length"}, id);
    long v = p.integer("V", 4);
    if (v < 3) fail(ErrorCode::BadParameter, "complete graph needs V >= 3");
    return complete_graph(static_cast<std::size_t>(v), p.number("length", 1.0));
  }
  if (id == "lasso") {
    p.restrict_to({"loop", "tail"}, id);
    return lasso_graph(p.number("loop", 1.0), p.number("tail", 1.0));
  }
  if (id == "figure8") {
    p.restrict_to({"lengths", "length"}, id);
    auto g = flower_graph(lengths_param(p, 2));
    auto d = describe(g);
    d.name = "figure8";
    return build_graph(d);
  }
  if (id == "perturbed_figure8") {
    p.restrict_to({"eps"}, id);
    return perturbed_figure8(p.number("eps", 0.05));
  }
  if (id == "loop_dumbbell") {
    p.restrict_to({"loop", "bar"}, id);
    return loop_dumbbell(p.number("loop", 0.1), p.number("bar", M_PI));
  }
  if (id == "krpamm_tree") {
    p.restrict_to({"eps", "m", "delta"}, id);
    return krpamm_tree(p.number("eps", 0.05), p.integer("m", 5), p.number("delta", 0.0));
  }
  if (id == "n_star_long_short") {
    p.restrict_to({"n", "eps"}, id);
    long n = p.integer("n", 5);
    if (n < 2) fail(ErrorCode::BadParameter, "n_star_long_short needs n >= 2");
    return n_star_long_short(static_cast<std::size_t>(n), p.number("eps", 0.1));
  }
  if (id == "pumpkin_on_stick") {
    p.restrict_to({"lengths"}, id);
    return pumpkin_on_stick(p.list("lengths", {1.0, 1.0, 1.0, 1.0, 1.0}));
  }
  if (id == "pumpkin_necklace") {
    p.restrict_to({"thickness", "lengths"}, id);
    long t = p.integer("thickness", 4);
    if (t < 1) fail(ErrorCode::BadParameter, "pumpkin_necklace needs thickness >= 1");
    std::vector<double> fallback(2 * static_cast<std::size_t>(t), 0.1);
    fallback.insert(fallback.begin() + t, 0.05);
    for (int i = 0; i < 5; ++i) fallback.push_back(0.4);
    return pumpkin_necklace(static_cast<std::size_t>(t), p.list("lengths", fallback));
  }
  if (id == "fig_m3") {
    p.restrict_to({"lengths"}, id);
    return fig_m3(p.list("lengths", {3.0, 0.3, 0.4, 0.6, 0.8}));
  }
  fail(ErrorCode::UnknownExample, "unknown example '" + id + "'");
}

}  // namespace qghot
