#include "corridorlab/digraph.hpp"

#include <algorithm>
#include <numeric>
#include <queue>

namespace corridorlab {

  std::vector<std::vector<std::size_t>> strongly_connected_components(
      Adjacency const& arcs,
      std::function<bool(std::vector<std::size_t> const&,
                         std::vector<std::size_t> const&)> const& before) {
    auto const               n = arcs.size();
    constexpr std::size_t    unset = static_cast<std::size_t>(-1);
    std::vector<std::size_t> index(n, unset), low(n, 0), comp(n, unset);
    std::vector<bool>        on_stack(n, false);
    std::vector<std::size_t> stack;
    std::vector<std::vector<std::size_t>> comps;
    std::size_t                           counter = 0;

    // Iterative Tarjan.
    for (std::size_t root = 0; root < n; ++root) {
      if (index[root] != unset) {
        continue;
      }
      std::vector<std::pair<std::size_t, std::size_t>> work{{root, 0}};
      while (!work.empty()) {
        auto& [v, next] = work.back();
        if (next == 0) {
          index[v] = low[v] = counter++;
          stack.push_back(v);
          on_stack[v] = true;
        }
        if (next < arcs[v].size()) {
          auto w = arcs[v][next++];
          if (index[w] == unset) {
            work.emplace_back(w, 0);
          } else if (on_stack[w]) {
            low[v] = std::min(low[v], index[w]);
          }
          continue;
        }
        if (low[v] == index[v]) {
          std::vector<std::size_t> c;
          std::size_t              w;
          do {
            w = stack.back();
            stack.pop_back();
            on_stack[w] = false;
            comp[w]     = comps.size();
            c.push_back(w);
          } while (w != v);
          std::sort(c.begin(), c.end());
          comps.push_back(std::move(c));
        }
        auto done = v;
        work.pop_back();
        if (!work.empty()) {
          auto u = work.back().first;
          low[u] = std::min(low[u], low[done]);
        }
      }
    }

    // Kahn's algorithm on the condensation, sinks first.
    auto const                            k = comps.size();
    std::vector<std::vector<std::size_t>> preds(k);
    std::vector<std::size_t>              pending(k, 0);
    for (std::size_t u = 0; u < n; ++u) {
      for (auto v : arcs[u]) {
        if (comp[u] != comp[v]) {
          preds[comp[v]].push_back(comp[u]);
          ++pending[comp[u]];
        }
      }
    }
    auto cmp = [&](std::size_t a, std::size_t b) {
      if (before) {
        if (before(comps[a], comps[b])) {
          return false;
        }
        if (before(comps[b], comps[a])) {
          return true;
        }
      }
      return comps[a].front() > comps[b].front();
    };
    std::priority_queue<std::size_t, std::vector<std::size_t>, decltype(cmp)>
        ready(cmp);
    for (std::size_t c = 0; c < k; ++c) {
      if (pending[c] == 0) {
        ready.push(c);
      }
    }
    std::vector<std::vector<std::size_t>> ordered;
    while (!ready.empty()) {
      auto c = ready.top();
      ready.pop();
      ordered.push_back(comps[c]);
      for (auto p : preds[c]) {
        if (--pending[p] == 0) {
          ready.push(p);
        }
      }
    }
    return ordered;
  }

  std::vector<std::size_t> reachable(Adjacency const& arcs,
                                     std::size_t      source) {
    std::vector<bool>        seen(arcs.size(), false);
    std::vector<std::size_t> todo{source}, out;
    seen[source] = true;
    while (!todo.empty()) {
      auto v = todo.back();
      todo.pop_back();
      out.push_back(v);
      for (auto w : arcs[v]) {
        if (!seen[w]) {
          seen[w] = true;
          todo.push_back(w);
        }
      }
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  std::size_t period(Adjacency const&                arcs,
                     std::vector<std::size_t> const& component) {
    std::vector<long> level(arcs.size(), -1);
    std::vector<bool> inside(arcs.size(), false);
    for (auto v : component) {
      inside[v] = true;
    }
    std::queue<std::size_t> q;
    level[component.front()] = 0;
    q.push(component.front());
    std::size_t g = 0;
    while (!q.empty()) {
      auto v = q.front();
      q.pop();
      for (auto w : arcs[v]) {
        if (!inside[w]) {
          continue;
        }
        if (level[w] < 0) {
          level[w] = level[v] + 1;
          q.push(w);
        } else {
          auto d = level[v] + 1 - level[w];
          g      = std::gcd(g, static_cast<std::size_t>(d < 0 ? -d : d));
        }
      }
    }
    return g;
  }

}  // namespace corridorlab
