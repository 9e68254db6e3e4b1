#include "vroad/wayfinding.hpp"

#include "vroad/errors.hpp"

#include <algorithm>
#include <limits>
#include <optional>
#include <queue>

namespace vroad {

namespace {

struct Arc {
  std::size_t to;
  double weight;
  std::size_t edge;
};

struct IndexedGraph {
  std::vector<std::string> ids;
  std::vector<Point2> positions;
  std::vector<std::vector<Arc>> adjacency;

  std::size_t index_of(const std::string& id) const {
    auto it = std::find(ids.begin(), ids.end(), id);
    if (it == ids.end()) throw UnknownNode(id);
    return static_cast<std::size_t>(it - ids.begin());
  }
};

// Parallel edges between the same pair collapse to the lightest one.
IndexedGraph index_graph(const PoIGraph& graph) {
  IndexedGraph g;
  for (const auto& n : graph.nodes()) {
    g.ids.push_back(n.id);
    g.positions.push_back(n.position);
  }
  g.adjacency.resize(g.ids.size());
  auto add = [&](std::size_t a, std::size_t b, double w, std::size_t e) {
    for (auto& arc : g.adjacency[a]) {
      if (arc.to == b) {
        if (w < arc.weight) arc = Arc{b, w, e};
        return;
      }
    }
    g.adjacency[a].push_back(Arc{b, w, e});
  };
  for (std::size_t e = 0; e < graph.edges().size(); ++e) {
    const auto& edge = graph.edges()[e];
    const std::size_t a = g.index_of(edge.from);
    const std::size_t b = g.index_of(edge.to);
    add(a, b, edge.weight, e);
    add(b, a, edge.weight, e);
  }
  for (auto& arcs : g.adjacency) {
    std::sort(arcs.begin(), arcs.end(), [&](const Arc& x, const Arc& y) { return g.ids[x.to] < g.ids[y.to]; });
  }
  return g;
}

bool ids_less(const IndexedGraph& g, const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(),
                                      [&](std::size_t x, std::size_t y) { return g.ids[x] < g.ids[y]; });
}

NodeRoute to_route(const IndexedGraph& g, const std::vector<std::size_t>& path, double cost) {
  NodeRoute r;
  r.total_cost = cost;
  for (auto i : path) r.node_ids.push_back(g.ids[i]);
  return r;
}

struct Label {
  double g = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> path;
};

}  // namespace

NodeRoute astar(const PoIGraph& graph, const std::string& start, const std::string& goal) {
  const IndexedGraph g = index_graph(graph);
  const std::size_t s = g.index_of(start);
  const std::size_t t = g.index_of(goal);
  if (s == t) return NodeRoute{{start}, 0.0};

  auto heuristic = [&](std::size_t n) { return (g.positions[n] - g.positions[t]).norm(); };

  struct Entry {
    double f;
    double g;
    std::size_t node;
    std::vector<std::size_t> path;
  };
  auto worse = [&](const Entry& a, const Entry& b) {
    if (a.f != b.f) return a.f > b.f;
    return ids_less(g, b.path, a.path);
  };
  std::priority_queue<Entry, std::vector<Entry>, decltype(worse)> open(worse);

  std::vector<Label> best(g.ids.size());
  best[s] = Label{0.0, {s}};
  open.push(Entry{heuristic(s), 0.0, s, {s}});

  while (!open.empty()) {
    const Entry& top = open.top();
    const Label& goal_label = best[t];
    // Keep expanding entries that tie with the incumbent so the lexicographic
    // tie-break sees every equal-cost route. The slack absorbs heuristic rounding.
    if (!goal_label.path.empty() && top.f > goal_label.g + 1e-9 * std::max(1.0, goal_label.g)) break;

    Entry cur = top;
    open.pop();
    const Label& label = best[cur.node];
    if (cur.g != label.g || cur.path != label.path) continue;
    if (cur.node == t) continue;

    for (const Arc& arc : g.adjacency[cur.node]) {
      if (std::find(cur.path.begin(), cur.path.end(), arc.to) != cur.path.end()) continue;
      const double ng = cur.g + arc.weight;
      std::vector<std::size_t> npath = cur.path;
      npath.push_back(arc.to);
      Label& other = best[arc.to];
      if (ng < other.g || (ng == other.g && ids_less(g, npath, other.path))) {
        other = Label{ng, npath};
        open.push(Entry{ng + heuristic(arc.to), ng, arc.to, std::move(npath)});
      }
    }
  }

  if (best[t].path.empty()) throw NoPath(start, goal);
  return to_route(g, best[t].path, best[t].g);
}

NodeRoute brute_force_shortest(const PoIGraph& graph, const std::string& start, const std::string& goal) {
  const IndexedGraph g = index_graph(graph);
  const std::size_t s = g.index_of(start);
  const std::size_t t = g.index_of(goal);

  std::optional<Label> best;
  std::vector<std::size_t> path{s};
  std::vector<bool> on_path(g.ids.size(), false);
  on_path[s] = true;

  auto dfs = [&](auto&& self, std::size_t node, double cost) -> void {
    if (node == t) {
      if (!best || cost < best->g || (cost == best->g && ids_less(g, path, best->path))) {
        best = Label{cost, path};
      }
      return;
    }
    for (const Arc& arc : g.adjacency[node]) {
      if (on_path[arc.to]) continue;
      on_path[arc.to] = true;
      path.push_back(arc.to);
      self(self, arc.to, cost + arc.weight);
      path.pop_back();
      on_path[arc.to] = false;
    }
  };
  dfs(dfs, s, 0.0);

  if (!best) throw NoPath(start, goal);
  return to_route(g, best->path, best->g);
}

GlobalPath expand_path(const PoIGraph& graph, const NodeRoute& route, double path_spacing) {
  if (route.node_ids.empty()) throw ValidationError("empty route");
  const IndexedGraph g = index_graph(graph);

  std::vector<Point2> pts{graph.node(route.node_ids.front()).position};
  for (std::size_t k = 1; k < route.node_ids.size(); ++k) {
    const std::size_t a = g.index_of(route.node_ids[k - 1]);
    const std::size_t b = g.index_of(route.node_ids[k]);
    auto arc = std::find_if(g.adjacency[a].begin(), g.adjacency[a].end(), [&](const Arc& x) { return x.to == b; });
    if (arc == g.adjacency[a].end()) {
      throw ValidationError("route step " + route.node_ids[k - 1] + "->" + route.node_ids[k] + " has no edge");
    }
    const PoIEdge& edge = graph.edges()[arc->edge];
    std::vector<Point2> seg = edge.segment.points();
    if (edge.from != route.node_ids[k - 1]) std::reverse(seg.begin(), seg.end());
    if ((seg.front() - pts.back()).norm() > 1e-6) {
      throw ValidationError("edge " + edge.from + "-" + edge.to + " segment is not oriented at its node");
    }
    pts.insert(pts.end(), seg.begin() + 1, seg.end());
  }
  return GlobalPath{resample(Polyline(std::move(pts)), path_spacing)};
}

}  // namespace vroad
