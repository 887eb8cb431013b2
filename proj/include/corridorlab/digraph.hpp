#ifndef CORRIDORLAB_DIGRAPH_HPP_
#define CORRIDORLAB_DIGRAPH_HPP_

#include <cstddef>
#include <functional>
#include <vector>

namespace corridorlab {

  using Adjacency = std::vector<std::vector<std::size_t>>;

  // Strongly connected components of a digraph on nodes 0..n-1, each
  // sorted, listed so that every arc u -> v between distinct components
  // has v's component before u's ("sinks first"). Among components whose
  // predecessors are all placed, the one preferred by `before` comes
  // first; the default prefers the smallest node.
  std::vector<std::vector<std::size_t>> strongly_connected_components(
      Adjacency const& arcs,
      std::function<bool(std::vector<std::size_t> const&,
                         std::vector<std::size_t> const&)> const& before
      = nullptr);

  // Nodes reachable from `source`, including itself, sorted.
  std::vector<std::size_t> reachable(Adjacency const& arcs,
                                     std::size_t      source);

  // Period of an SCC: gcd of its cycle lengths (0 if it has no cycle).
  std::size_t period(Adjacency const& arcs,
                     std::vector<std::size_t> const& component);

}  // namespace corridorlab

#endif  // CORRIDORLAB_DIGRAPH_HPP_
