#include "cachecap/maxflow.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>

namespace cachecap {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

MaxFlow::MaxFlow(int num_nodes) : out_(num_nodes), level_(num_nodes), cursor_(num_nodes) {}

int MaxFlow::AddArc(int tail, int head, double capacity, double reverse_capacity) {
  if (capacity < 0 || reverse_capacity < 0) throw std::invalid_argument("negative capacity");
  const int id = static_cast<int>(arcs_.size());
  arcs_.push_back({head, capacity, 0.0});
  arcs_.push_back({tail, reverse_capacity, 0.0});
  out_[tail].push_back(id);
  out_[head].push_back(id + 1);
  for (double c : {capacity, reverse_capacity}) {
    if (std::isfinite(c)) scale_ = std::max(scale_, c);
  }
  return id;
}

bool MaxFlow::Levels(int source, int sink) {
  const double eps = 1e-12 * scale_;
  std::fill(level_.begin(), level_.end(), -1);
  std::queue<int> queue;
  level_[source] = 0;
  queue.push(source);
  while (!queue.empty()) {
    const int v = queue.front();
    queue.pop();
    for (int a : out_[v]) {
      const Arc& arc = arcs_[a];
      if (arc.residual > eps && level_[arc.head] < 0) {
        level_[arc.head] = level_[v] + 1;
        queue.push(arc.head);
      }
    }
  }
  return level_[sink] >= 0;
}

double MaxFlow::Augment(int v, int sink, double limit) {
  if (v == sink) return limit;
  const double eps = 1e-12 * scale_;
  for (std::size_t& i = cursor_[v]; i < out_[v].size(); ++i) {
    const int a = out_[v][i];
    Arc& arc = arcs_[a];
    if (arc.residual <= eps || level_[arc.head] != level_[v] + 1) continue;
    const double pushed = Augment(arc.head, sink, std::min(limit, arc.residual));
    if (pushed > 0.0) {
      arc.residual -= pushed;
      arc.flow += pushed;
      arcs_[a ^ 1].residual += pushed;
      arcs_[a ^ 1].flow -= pushed;
      return pushed;
    }
  }
  return 0.0;
}

double MaxFlow::Run(int source, int sink) {
  double total = 0.0;
  while (Levels(source, sink)) {
    std::fill(cursor_.begin(), cursor_.end(), 0);
    while (true) {
      const double pushed = Augment(source, sink, kInf);
      if (pushed <= 0.0) break;
      total += pushed;
      if (std::isinf(pushed)) return kInf;
    }
  }
  return total;
}

double MaxFlow::Flow(int arc) const { return arcs_[arc].flow; }

std::vector<char> MaxFlow::SourceSide(int source) const {
  const double eps = 1e-12 * scale_;
  std::vector<char> seen(out_.size(), 0);
  std::vector<int> stack{source};
  seen[source] = 1;
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    for (int a : out_[v]) {
      const Arc& arc = arcs_[a];
      if (arc.residual > eps && !seen[arc.head]) {
        seen[arc.head] = 1;
        stack.push_back(arc.head);
      }
    }
  }
  return seen;
}

namespace {

struct Network {
  MaxFlow flow;
  std::vector<int> edge_arc;
  std::vector<int> source_arc;
  std::vector<int> sink_arc;
  int source;
  int sink;
};

Network BuildNetwork(const TreeGraph& tree, const std::vector<char>& is_source,
                     const std::vector<double>& leaf_weight, double phi) {
  const int vertices = tree.num_vertices();
  Network net{MaxFlow(vertices + 2), {}, {}, {}, vertices, vertices + 1};
  net.edge_arc.resize(tree.num_edges());
  for (int e = 0; e < tree.num_edges(); ++e) {
    net.edge_arc[e] = net.flow.AddArc(tree.EdgeChild(e), tree.EdgeParent(e),
                                      tree.capacity(e), tree.capacity(e));
  }
  net.source_arc.assign(tree.n(), -1);
  net.sink_arc.assign(tree.n(), -1);
  for (int u = 0; u < tree.n(); ++u) {
    if (is_source[u]) {
      net.source_arc[u] = net.flow.AddArc(net.source, tree.LeafVertex(u), kInf);
    } else if (leaf_weight[u] > 0.0) {
      net.sink_arc[u] = net.flow.AddArc(tree.LeafVertex(u), net.sink, phi * leaf_weight[u]);
    }
  }
  return net;
}

std::vector<char> SourceMask(const TreeGraph& tree, const std::vector<int>& sources) {
  std::vector<char> mask(tree.n(), 0);
  for (int u : sources) {
    if (u < 0 || u >= tree.n()) throw std::invalid_argument("source is not a leaf");
    mask[u] = 1;
  }
  return mask;
}

double CrossingCapacity(const TreeGraph& tree, const std::vector<char>& side) {
  double total = 0.0;
  for (int e = 0; e < tree.num_edges(); ++e) {
    if (side[tree.EdgeChild(e)] != side[tree.EdgeParent(e)]) total += tree.capacity(e);
  }
  return total;
}

}  // namespace

RatioCut SingleSourceRatioCut(const TreeGraph& tree,
                              const std::vector<int>& source_leaves,
                              const std::vector<double>& leaf_weight) {
  if (static_cast<int>(leaf_weight.size()) != tree.n()) {
    throw std::invalid_argument("one weight per leaf expected");
  }
  const std::vector<char> is_source = SourceMask(tree, source_leaves);
  double outside = 0.0;
  for (int w = 0; w < tree.n(); ++w) {
    if (!is_source[w]) outside += leaf_weight[w];
  }
  RatioCut result;
  result.source_side.assign(tree.num_vertices(), 0);
  for (int u = 0; u < tree.n(); ++u) {
    if (is_source[u]) result.source_side[tree.LeafVertex(u)] = 1;
  }
  if (!(outside > 0.0)) {
    result.infinite = true;
    result.ratio = kInf;
    return result;
  }
  double phi = CrossingCapacity(tree, result.source_side) / outside;
  for (int iteration = 0; iteration < 200; ++iteration) {
    Network net = BuildNetwork(tree, is_source, leaf_weight, phi);
    const double value = net.flow.Run(net.source, net.sink);
    if (value >= phi * outside * (1.0 - 1e-12)) break;
    const std::vector<char> reach = net.flow.SourceSide(net.source);
    std::vector<char> side(reach.begin(), reach.begin() + tree.num_vertices());
    double left = 0.0;
    for (int w = 0; w < tree.n(); ++w) {
      if (!side[tree.LeafVertex(w)]) left += leaf_weight[w];
    }
    if (!(left > 0.0)) break;
    const double next = CrossingCapacity(tree, side) / left;
    if (!(next < phi * (1.0 - 1e-14))) break;
    phi = next;
    result.source_side = std::move(side);
  }
  result.ratio = phi;
  return result;
}

SingleSourceFlow RouteSingleSource(const TreeGraph& tree,
                                   const std::vector<int>& source_leaves,
                                   const std::vector<double>& leaf_weight,
                                   double phi) {
  const std::vector<char> is_source = SourceMask(tree, source_leaves);
  Network net = BuildNetwork(tree, is_source, leaf_weight, phi);
  net.flow.Run(net.source, net.sink);
  SingleSourceFlow out;
  out.edge_flow.resize(tree.num_edges());
  for (int e = 0; e < tree.num_edges(); ++e) out.edge_flow[e] = net.flow.Flow(net.edge_arc[e]);
  out.source_out.assign(tree.n(), 0.0);
  out.delivered.assign(tree.n(), 0.0);
  for (int u = 0; u < tree.n(); ++u) {
    if (net.source_arc[u] >= 0) out.source_out[u] = net.flow.Flow(net.source_arc[u]);
    if (net.sink_arc[u] >= 0) out.delivered[u] = net.flow.Flow(net.sink_arc[u]);
  }
  return out;
}

}  // namespace cachecap
