#include "corridorlab/graphmap.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "corridorlab/digraph.hpp"
#include "corridorlab/errors.hpp"
#include "text_util.hpp"

namespace corridorlab {

  ////////////////////////////////////////////////////////////////////////
  // Graph and GraphMap
  ////////////////////////////////////////////////////////////////////////

  Graph::Graph(std::size_t vertices, Alphabet edges,
               std::vector<std::size_t> init, std::vector<std::size_t> term)
      : _vertices(vertices),
        _edges(std::move(edges)),
        _init(std::move(init)),
        _term(std::move(term)) {
    if (_vertices == 0) {
      throw std::invalid_argument("a graph needs a vertex");
    }
    if (_init.size() != _edges.size() || _term.size() != _edges.size()) {
      throw std::invalid_argument("incidence does not match the edges");
    }
    for (std::size_t i = 0; i < _init.size(); ++i) {
      if (_init[i] >= _vertices || _term[i] >= _vertices) {
        throw std::invalid_argument("edge " + _edges.name(i + 1)
                                    + " has an endpoint out of range");
      }
    }
  }

  Graph Graph::rose(Alphabet edges) {
    auto n = edges.size();
    return Graph(1, std::move(edges), std::vector<std::size_t>(n, 0),
                 std::vector<std::size_t>(n, 0));
  }

  std::size_t Graph::init(Letter e) const {
    return e.positive() ? _init.at(e.index() - 1) : _term.at(e.index() - 1);
  }

  std::size_t Graph::term(Letter e) const {
    return e.positive() ? _term.at(e.index() - 1) : _init.at(e.index() - 1);
  }

  bool Graph::is_path(std::span<Letter const> path) const {
    for (auto l : path) {
      if (!_edges.contains(l)) {
        return false;
      }
    }
    for (std::size_t i = 1; i < path.size(); ++i) {
      if (term(path[i - 1]) != init(path[i])) {
        return false;
      }
    }
    return true;
  }

  std::vector<Letter> Graph::oriented_edges() const {
    std::vector<Letter> out;
    for (std::uint32_t i = 1; i <= _edges.size(); ++i) {
      out.emplace_back(i, 1);
      out.emplace_back(i, -1);
    }
    return out;
  }

  Word GraphMap::image(Letter e) const {
    auto const& w = _images.at(e.index() - 1);
    return e.positive() ? w : invert(w);
  }

  std::size_t GraphMap::L() const noexcept {
    std::size_t m = 0;
    for (auto const& w : _images) {
      m = std::max(m, w.size());
    }
    return m;
  }

  Letter GraphMap::Df(Letter e) const {
    auto const& w = _images.at(e.index() - 1);
    return e.positive() ? w.front() : w.back().inverse();
  }

  GraphMap make_graph_map(Graph graph, std::vector<std::size_t> vertex_map,
                          std::vector<Word> images) {
    if (vertex_map.size() != graph.vertices()) {
      throw std::invalid_argument("vertex map has the wrong size");
    }
    for (auto v : vertex_map) {
      if (v >= graph.vertices()) {
        throw std::invalid_argument("vertex map out of range");
      }
    }
    if (images.size() != graph.edge_count()) {
      throw std::invalid_argument("edge map has the wrong size");
    }
    for (std::uint32_t i = 1; i <= images.size(); ++i) {
      auto const& w    = images[i - 1];
      auto const& name = graph.edges().name(i);
      if (w.empty()) {
        throw std::invalid_argument("image of " + name + " is empty");
      }
      if (!graph.is_path(w.letters())) {
        throw std::invalid_argument("image of " + name + " is not a path");
      }
      Letter e(i, 1);
      if (graph.init(w.front()) != vertex_map[graph.init(e)]
          || graph.term(w.back()) != vertex_map[graph.term(e)]) {
        throw std::invalid_argument(
            "image of " + name + " does not join the images of its endpoints");
      }
    }
    return GraphMap(std::move(graph), std::move(vertex_map),
                    std::move(images));
  }

  GraphMap from_substitution(Automorphism const& phi) {
    return make_graph_map(Graph::rose(phi.alphabet()), {0}, phi.forward());
  }

  Word tighten(GraphMap const& f, Word const& path) {
    ReducedProduct    p;
    std::vector<Word> keep;
    keep.reserve(path.size());
    for (auto e : path) {
      if (e.positive()) {
        p.append(f.image(e.index()).letters());
      } else {
        keep.push_back(f.image(e));
        p.append(keep.back().letters());
      }
    }
    return p.to_word();
  }

  Word tighten_power(GraphMap const& f, Word const& path, std::size_t k,
                     std::size_t cap) {
    Word w = path;
    for (std::size_t i = 0; i < k; ++i) {
      if (w.size() * f.L() > cap) {
        w = tighten(f, w);
        if (w.size() > cap) {
          throw BudgetExceeded("f_#^" + std::to_string(k) + " exceeds "
                               + std::to_string(cap) + " edges");
        }
      } else {
        w = tighten(f, w);
      }
    }
    return w;
  }

  LetterSeq naive_image(GraphMap const& f, std::span<Letter const> path,
                        std::size_t k, std::size_t cap) {
    LetterSeq cur(path.begin(), path.end());
    for (std::size_t i = 0; i < k; ++i) {
      std::size_t n = 0;
      for (auto e : cur) {
        n += f.image(e.index()).size();
      }
      if (n > cap) {
        throw BudgetExceeded("f^" + std::to_string(k) + " exceeds "
                             + std::to_string(cap) + " edges");
      }
      LetterSeq next;
      next.reserve(n);
      for (auto e : cur) {
        auto const& w = f.image(e.index());
        if (e.positive()) {
          next.insert(next.end(), w.begin(), w.end());
        } else {
          for (auto it = w.letters().rbegin(); it != w.letters().rend(); ++it) {
            next.push_back(it->inverse());
          }
        }
      }
      cur = std::move(next);
    }
    return cur;
  }

  GraphMap power_map(GraphMap const& f, std::size_t d, std::size_t cap) {
    std::vector<Word> images;
    for (std::uint32_t i = 1; i <= f.graph().edge_count(); ++i) {
      images.push_back(tighten_power(f, Word{Letter(i, 1)}, d, cap));
    }
    auto vmap = f.vertex_map();
    for (std::size_t v = 0; v < vmap.size(); ++v) {
      auto w = v;
      for (std::size_t i = 0; i < d; ++i) {
        w = f.vertex_map()[w];
      }
      vmap[v] = w;
    }
    return make_graph_map(f.graph(), std::move(vmap), std::move(images));
  }

  ////////////////////////////////////////////////////////////////////////
  // Text format
  ////////////////////////////////////////////////////////////////////////

  namespace {

    std::vector<std::string_view> split_ws(std::string_view s) {
      std::vector<std::string_view> out;
      std::size_t                   i = 0;
      while (i < s.size()) {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) {
          ++i;
        }
        auto j = i;
        while (j < s.size() && s[j] != ' ' && s[j] != '\t') {
          ++j;
        }
        if (j > i) {
          out.push_back(s.substr(i, j - i));
        }
        i = j;
      }
      return out;
    }

    std::optional<std::size_t> to_index(std::string_view s) {
      if (s.empty() || s.size() > 9
          || s.find_first_not_of("0123456789") != std::string_view::npos) {
        return std::nullopt;
      }
      return static_cast<std::size_t>(std::stoul(std::string(s)));
    }

    bool tight(std::span<Letter const> p) {
      for (std::size_t i = 1; i < p.size(); ++i) {
        if (p[i].is_inverse_of(p[i - 1])) {
          return false;
        }
      }
      return true;
    }

  }  // namespace

  GraphMap parse_graph_map(std::string_view text) {
    enum class Section { none, edges, map, vmap };
    struct EdgeLine {
      std::string name;
      std::size_t init, term, line, column;
    };
    struct MapLine {
      std::string                name;
      std::vector<detail::Token> tokens;
      std::size_t                line, column;
    };
    std::optional<std::size_t>   vertices;
    std::vector<EdgeLine>        edges;
    std::vector<MapLine>         maps;
    std::map<std::size_t, std::pair<std::size_t, std::size_t>> vmap_lines;
    Section                      section = Section::none;
    std::size_t                  last    = 0;

    auto entry = [&](std::size_t lineno, std::string_view raw,
                     std::string_view body) {
      auto col = detail::column_of(raw, body);
      switch (section) {
        case Section::none:
          throw ParseError(lineno, col,
                           "expected 'vertices:', 'edges:', 'map:' or 'vmap:'");
        case Section::edges: {
          auto parts = split_ws(body);
          if (parts.size() != 3) {
            throw ParseError(lineno, col, "expected 'name init term'");
          }
          auto a = to_index(parts[1]), b = to_index(parts[2]);
          if (!a || !b) {
            throw ParseError(lineno, detail::column_of(raw, a ? parts[2]
                                                              : parts[1]),
                             "expected a vertex number");
          }
          edges.push_back({std::string(parts[0]), *a, *b, lineno, col});
          break;
        }
        case Section::map:
        case Section::vmap: {
          auto arrow = body.find("->");
          if (arrow == std::string_view::npos) {
            throw ParseError(lineno, col, "expected 'x -> y'");
          }
          auto lhs = detail::trim(body.substr(0, arrow));
          auto rhs = body.substr(arrow + 2);
          if (section == Section::map) {
            maps.push_back({std::string(lhs),
                            detail::tokenize(rhs, lineno,
                                             detail::column_of(raw, rhs) - 1),
                            lineno, col});
          } else {
            auto a = to_index(lhs), b = to_index(detail::trim(rhs));
            if (!a || !b) {
              throw ParseError(lineno, col, "expected 'vertex -> vertex'");
            }
            if (vmap_lines.count(*a)) {
              throw ParseError(lineno, col, "duplicate vertex entry");
            }
            vmap_lines[*a] = {*b, lineno};
          }
          break;
        }
      }
    };

    detail::for_each_line(text, [&](std::size_t lineno, std::string_view raw,
                                    std::string_view line) {
      last = lineno;
      auto header = [&](std::string_view key, Section s) {
        if (!line.starts_with(key)) {
          return false;
        }
        section   = s;
        auto rest = detail::trim(line.substr(key.size()));
        if (s == Section::none) {
          auto n = to_index(rest);
          if (!n || *n == 0) {
            throw ParseError(lineno, detail::column_of(raw, line) + key.size(),
                             "expected a positive vertex count");
          }
          vertices = n;
        } else if (!rest.empty()) {
          entry(lineno, raw, rest);
        }
        return true;
      };
      if (header("vertices:", Section::none) || header("edges:", Section::edges)
          || header("vmap:", Section::vmap) || header("map:", Section::map)) {
        return;
      }
      entry(lineno, raw, line);
    });

    if (!vertices) {
      throw ParseError(last + 1, 1, "missing 'vertices:'");
    }
    if (edges.empty()) {
      throw ParseError(last + 1, 1, "missing edges");
    }
    std::vector<std::string> names;
    std::vector<std::size_t> init, term;
    for (auto const& e : edges) {
      if (e.init >= *vertices || e.term >= *vertices) {
        throw ParseError(e.line, e.column, "vertex out of range");
      }
      names.push_back(e.name);
      init.push_back(e.init);
      term.push_back(e.term);
    }
    std::optional<Alphabet> alphabet;
    try {
      alphabet.emplace(names);
    } catch (std::invalid_argument const& err) {
      throw ParseError(edges.front().line, edges.front().column, err.what());
    }
    Graph g(*vertices, *alphabet, init, term);

    std::vector<std::optional<Word>> images(names.size());
    for (auto const& m : maps) {
      auto i = alphabet->find(m.name);
      if (i == 0) {
        throw ParseError(m.line, m.column, "unknown edge \"" + m.name + "\"");
      }
      if (images[i - 1]) {
        throw ParseError(m.line, m.column,
                         "duplicate entry for \"" + m.name + "\"");
      }
      LetterSeq letters;
      for (auto const& tok : m.tokens) {
        auto j = alphabet->find(tok.name);
        if (j == 0) {
          throw ParseError(m.line, tok.column,
                           "unknown edge \"" + tok.name + "\"");
        }
        for (int r = 0; r < std::abs(tok.exponent); ++r) {
          letters.emplace_back(j, tok.exponent < 0 ? -1 : 1);
        }
      }
      if (letters.empty()) {
        throw ParseError(m.line, m.column, "image must be nonempty");
      }
      if (!tight(letters)) {
        throw ParseError(m.line, m.column, "image is not tight");
      }
      if (!g.is_path(letters)) {
        throw ParseError(m.line, m.column, "image is not an edge-path");
      }
      images[i - 1] = Word::from_reduced(std::move(letters));
    }
    std::vector<Word> imgs;
    for (std::size_t i = 0; i < images.size(); ++i) {
      if (!images[i]) {
        throw ParseError(last + 1, 1, "no image for edge " + names[i]);
      }
      imgs.push_back(*images[i]);
    }

    // Vertex map: explicit entries, then whatever the images force.
    std::vector<std::optional<std::size_t>> vmap(*vertices);
    for (auto const& [v, target] : vmap_lines) {
      if (v >= *vertices || target.first >= *vertices) {
        throw ParseError(target.second, 1, "vertex out of range");
      }
      vmap[v] = target.first;
    }
    for (std::uint32_t i = 1; i <= imgs.size(); ++i) {
      Letter e(i, 1);
      for (auto [v, w] : {std::pair{g.init(e), g.init(imgs[i - 1].front())},
                          std::pair{g.term(e), g.term(imgs[i - 1].back())}}) {
        if (!vmap[v]) {
          vmap[v] = w;
        } else if (*vmap[v] != w) {
          auto line = maps.empty() ? last : maps.front().line;
          for (auto const& m : maps) {
            if (m.name == names[i - 1]) {
              line = m.line;
            }
          }
          throw ParseError(line, 1,
                           "image of " + names[i - 1]
                               + " does not join the images of its endpoints");
        }
      }
    }
    std::vector<std::size_t> vm;
    for (std::size_t v = 0; v < vmap.size(); ++v) {
      if (!vmap[v]) {
        throw ParseError(last + 1, 1,
                         "no image for vertex " + std::to_string(v));
      }
      vm.push_back(*vmap[v]);
    }
    return make_graph_map(std::move(g), std::move(vm), std::move(imgs));
  }

  GraphMap load_graph_map(std::string const& path) {
    return parse_graph_map(detail::read_file(path));
  }

  std::string format_graph_map(GraphMap const& f) {
    auto const&        g = f.graph();
    std::ostringstream out;
    out << "vertices: " << g.vertices() << "\nedges:\n";
    for (std::uint32_t i = 1; i <= g.edge_count(); ++i) {
      Letter e(i, 1);
      out << "  " << g.edges().name(i) << ' ' << g.init(e) << ' ' << g.term(e)
          << '\n';
    }
    out << "map:\n";
    for (std::uint32_t i = 1; i <= g.edge_count(); ++i) {
      out << "  " << g.edges().name(i) << " -> "
          << g.edges().format(f.image(i)) << '\n';
    }
    out << "vmap:\n";
    for (std::size_t v = 0; v < g.vertices(); ++v) {
      out << "  " << v << " -> " << f.vertex_map()[v] << '\n';
    }
    return out.str();
  }

  Word parse_path(Graph const& g, std::string_view text) {
    auto letters = g.edges().parse_letters(text);
    if (!tight(letters)) {
      throw std::invalid_argument("path is not tight");
    }
    if (!g.is_path(letters)) {
      throw std::invalid_argument("edges are not composable");
    }
    return Word::from_reduced(std::move(letters));
  }

  ////////////////////////////////////////////////////////////////////////
  // Strata
  ////////////////////////////////////////////////////////////////////////

  char const* to_string(StratumKind k) {
    switch (k) {
      case StratumKind::zero: return "zero";
      case StratumKind::parabolic: return "parabolic";
      case StratumKind::exponential: return "exponential";
    }
    return "?";
  }

  std::vector<std::vector<std::uint64_t>> transition_matrix(
      GraphMap const& f) {
    auto n = f.graph().edge_count();
    std::vector<std::vector<std::uint64_t>> m(n,
                                              std::vector<std::uint64_t>(n, 0));
    for (std::size_t j = 0; j < n; ++j) {
      for (auto e : f.images()[j]) {
        ++m[e.index() - 1][j];
      }
    }
    return m;
  }

  double pf_eigenvalue(std::vector<std::vector<std::uint64_t>> const& m,
                       double tol) {
    auto const n = m.size();
    if (n == 0) {
      return 0;
    }
    // m + I is primitive when m is irreducible, so the iteration converges
    // even for periodic m.
    std::vector<double> v(n, 1.0 / static_cast<double>(n)), w(n);
    double              lambda = 0;
    int                 stable = 0;
    for (int iter = 0; iter < 1'000'000 && stable < 3; ++iter) {
      double total = 0;
      for (std::size_t i = 0; i < n; ++i) {
        w[i] = v[i];
        for (std::size_t j = 0; j < n; ++j) {
          w[i] += static_cast<double>(m[i][j]) * v[j];
        }
        total += w[i];
      }
      if (total == 0) {
        return 0;
      }
      auto next = total;  // v sums to 1
      stable    = std::abs(next - lambda) <= tol * next ? stable + 1 : 0;
      lambda    = next;
      for (std::size_t i = 0; i < n; ++i) {
        v[i] = w[i] / total;
      }
    }
    return lambda - 1;
  }

  std::vector<Stratum> stratify(GraphMap const& f) {
    auto const m = transition_matrix(f);
    auto const n = m.size();
    Adjacency  arcs(n);  // j -> i when f(E_j) crosses E_i
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t i = 0; i < n; ++i) {
        if (m[i][j] != 0) {
          arcs[j].push_back(i);
        }
      }
    }
    auto describe = [&](std::vector<std::size_t> const& comp) {
      Stratum s;
      std::vector<std::vector<std::uint64_t>> sub(
          comp.size(), std::vector<std::uint64_t>(comp.size(), 0));
      bool zero = true;
      for (std::size_t a = 0; a < comp.size(); ++a) {
        s.edges.push_back(static_cast<std::uint32_t>(comp[a] + 1));
        for (std::size_t b = 0; b < comp.size(); ++b) {
          sub[a][b] = m[comp[a]][comp[b]];
          zero      = zero && sub[a][b] == 0;
        }
      }
      if (zero) {
        return s;
      }
      s.pf_eigenvalue = pf_eigenvalue(sub);
      s.kind          = *s.pf_eigenvalue > 1 + 1e-9 ? StratumKind::exponential
                                                    : StratumKind::parabolic;
      s.period        = period(arcs, comp);
      return s;
    };
    std::vector<bool> exponential(n, false);
    for (auto const& c : strongly_connected_components(arcs)) {
      if (describe(c).kind == StratumKind::exponential) {
        for (auto v : c) {
          exponential[v] = true;
        }
      }
    }
    auto before = [&](std::vector<std::size_t> const& a,
                      std::vector<std::size_t> const& b) {
      return !exponential[a.front()] && exponential[b.front()];
    };
    std::vector<Stratum> out;
    for (auto const& c : strongly_connected_components(arcs, before)) {
      out.push_back(describe(c));
    }
    return out;
  }

  std::vector<std::size_t> edge_heights(std::vector<Stratum> const& strata,
                                        std::size_t edge_count) {
    std::vector<std::size_t> h(edge_count, 0);
    for (std::size_t r = 0; r < strata.size(); ++r) {
      for (auto e : strata[r].edges) {
        h[e - 1] = r;
      }
    }
    return h;
  }

  ////////////////////////////////////////////////////////////////////////
  // Turns
  ////////////////////////////////////////////////////////////////////////

  Turn Tf(GraphMap const& f, Turn t) {
    return Turn(f.Df(t.first), f.Df(t.second));
  }

  bool TurnTable::is_legal(Turn t) const {
    auto it = std::lower_bound(turns.begin(), turns.end(), t);
    if (it == turns.end() || *it != t) {
      throw std::invalid_argument("not a turn of this graph");
    }
    return legal[static_cast<std::size_t>(it - turns.begin())];
  }

  TurnTable turn_analysis(GraphMap const& f) {
    TurnTable   table;
    auto const& g    = f.graph();
    auto        dirs = g.oriented_edges();
    std::sort(dirs.begin(), dirs.end());
    for (std::size_t a = 0; a < dirs.size(); ++a) {
      for (std::size_t b = a; b < dirs.size(); ++b) {
        if (g.init(dirs[a]) == g.init(dirs[b])) {
          table.turns.emplace_back(dirs[a], dirs[b]);
        }
      }
    }
    std::sort(table.turns.begin(), table.turns.end());
    table.legal.assign(table.turns.size(), false);
    for (std::size_t i = 0; i < table.turns.size(); ++i) {
      std::set<Turn> seen;
      auto           t     = table.turns[i];
      bool           legal = false;
      for (std::size_t step = 0; step <= table.turns.size(); ++step) {
        if (t.degenerate()) {
          break;
        }
        if (!seen.insert(t).second) {
          legal = true;
          break;
        }
        t = Tf(f, t);
      }
      table.legal[i] = legal;
    }
    return table;
  }

  namespace {

    // Calls visit(path) on every tight path of 1..max_len edges whose edges
    // satisfy `allowed` and whose consecutive pairs satisfy `joins`, starting
    // from the given vertices. Stops early when visit returns false.
    template <typename Allowed, typename Joins, typename Visit>
    void for_each_path(Graph const& g, std::vector<bool> const& starts,
                       std::size_t max_len, Allowed allowed, Joins joins,
                       Visit visit) {
      auto      dirs = g.oriented_edges();
      LetterSeq cur;
      bool      go = true;
      std::function<void()> rec = [&]() {
        if (!go) {
          return;
        }
        if (!cur.empty() && !visit(cur)) {
          go = false;
          return;
        }
        if (cur.size() == max_len) {
          return;
        }
        for (auto e : dirs) {
          if (!allowed(e)) {
            continue;
          }
          if (cur.empty()) {
            if (!starts[g.init(e)]) {
              continue;
            }
          } else if (g.term(cur.back()) != g.init(e)
                     || cur.back().is_inverse_of(e) || !joins(cur.back(), e)) {
            continue;
          }
          cur.push_back(e);
          rec();
          cur.pop_back();
          if (!go) {
            return;
          }
        }
      };
      rec();
    }

  }  // namespace

  RttReport check_rtt(GraphMap const& f, std::size_t sample_budget) {
    RttReport   rep;
    auto const& g       = f.graph();
    auto        strata  = stratify(f);
    auto        heights = edge_heights(strata, g.edge_count());
    auto        turns   = turn_analysis(f);
    auto        name    = [&](std::span<Letter const> p) {
      return g.edges().format(p);
    };
    auto violate = [&](std::string what) {
      if (rep.violations.size() < 32) {
        rep.violations.push_back(std::move(what));
      }
    };

    for (std::size_t r = 0; r < strata.size(); ++r) {
      if (strata[r].kind != StratumKind::exponential) {
        continue;
      }
      rep.has_exponential = true;
      auto in_r = [&](Letter e) { return heights[e.index() - 1] == r; };
      auto below = [&](Letter e) { return heights[e.index() - 1] < r; };

      // (i)
      for (auto e : strata[r].edges) {
        for (int s : {1, -1}) {
          Letter d(e, s);
          if (!in_r(f.Df(d))) {
            rep.rtt_i = false;
            violate("RTT-(i): Df(" + g.edges().format(d) + ") = "
                    + g.edges().format(f.Df(d)) + " leaves the stratum");
          }
        }
      }

      // (iii)
      std::vector<bool> every(g.vertices(), true);
      for_each_path(
          g, every, 4, in_r,
          [&](Letter a, Letter b) { return turns.is_legal(turn_of(a, b)); },
          [&](LetterSeq const& beta) {
            auto img = naive_image(f, beta, 1);
            for (std::size_t i = 1; i < img.size(); ++i) {
              if (in_r(img[i - 1]) && in_r(img[i])
                  && !turns.is_legal(turn_of(img[i - 1], img[i]))) {
                rep.rtt_iii = false;
                violate("RTT-(iii): f(" + name(beta)
                        + ") has an illegal turn");
                return true;
              }
            }
            return true;
          });

      // (ii)
      std::vector<bool> top(g.vertices(), false), low(g.vertices(), false),
          meet(g.vertices(), false);
      for (std::uint32_t i = 1; i <= g.edge_count(); ++i) {
        Letter e(i, 1);
        auto&  mark = heights[i - 1] == r ? top : low;
        if (heights[i - 1] <= r) {
          mark[g.init(e)] = mark[g.term(e)] = true;
        }
      }
      bool any = false;
      for (std::size_t v = 0; v < g.vertices(); ++v) {
        meet[v] = top[v] && low[v];
        any     = any || meet[v];
      }
      if (!any) {
        continue;
      }
      std::size_t seen = 0;
      for_each_path(
          g, meet, 6, below, [](Letter, Letter) { return true; },
          [&](LetterSeq const& alpha) {
            if (!meet[g.term(alpha.back())]) {
              return true;
            }
            ++rep.sampled_paths;
            auto img = tighten(f, Word::from_reduced(alpha));
            auto a   = f.vertex_map()[g.init(alpha.front())];
            auto b   = f.vertex_map()[g.term(alpha.back())];
            if (img.empty() || !meet[a] || !meet[b]) {
              rep.rtt_ii = false;
              violate("RTT-(ii): f_#(" + name(alpha) + ") = "
                      + (img.empty() ? std::string("trivial path")
                                     : g.edges().format(img)));
            }
            return ++seen < sample_budget;
          });
    }
    return rep;
  }

  ////////////////////////////////////////////////////////////////////////
  // Nielsen paths
  ////////////////////////////////////////////////////////////////////////

  std::optional<std::size_t> nielsen_period(GraphMap const& f,
                                            Word const&     path,
                                            std::size_t     max_period) {
    if (path.empty()) {
      return std::nullopt;
    }
    Word cur = path;
    for (std::size_t p = 1; p <= max_period; ++p) {
      cur = tighten(f, cur);
      if (cur == path) {
        return p;
      }
      if (cur.size() > kDefaultSymbolCap) {
        throw BudgetExceeded("Nielsen test exceeds the symbol cap");
      }
    }
    return std::nullopt;
  }

  std::vector<NielsenPath> find_nielsen_paths(GraphMap const& f,
                                              std::size_t     max_len,
                                              std::size_t     max_period,
                                              std::size_t     budget) {
    auto const& g = f.graph();
    std::map<Word, std::size_t> found;
    std::size_t                 tried = 0;
    std::vector<bool>           every(g.vertices(), true);
    for_each_path(
        g, every, max_len, [](Letter) { return true; },
        [](Letter, Letter) { return true; },
        [&](LetterSeq const& p) {
          if (++tried > budget) {
            throw BudgetExceeded("Nielsen search exceeds "
                                 + std::to_string(budget) + " paths");
          }
          auto w = Word::from_reduced(p);
          if (auto period = nielsen_period(f, w, max_period)) {
            found.emplace(std::move(w), *period);
          }
          return true;
        });

    std::vector<NielsenPath> out;
    for (auto const& [w, period] : found) {
      NielsenPath np{w, period, true, {}};
      // Greedy shortest Nielsen prefix whose remainder is Nielsen; every
      // subpath is short enough to have been enumerated.
      std::size_t start = 0;
      while (start < w.size()) {
        std::size_t cut = w.size();
        for (auto i = start + 1; i < w.size(); ++i) {
          if (found.count(w.slice(start, i))
              && found.count(w.slice(i, w.size()))) {
            cut = i;
            break;
          }
        }
        np.factors.push_back(w.slice(start, cut));
        start = cut;
      }
      np.indivisible = np.factors.size() == 1;
      out.push_back(std::move(np));
    }
    return out;
  }

  ////////////////////////////////////////////////////////////////////////
  // Hard splittings
  ////////////////////////////////////////////////////////////////////////

  namespace {

    // Lifts of paths into the universal cover, as a trie of reduced edge
    // sequences from a base vertex. A tree edge is named by its lower
    // endpoint's node id.
    class CoverTree {
     public:
      CoverTree() : _parent{0}, _via{Letter()} {}

      // Walks `steps` from the base vertex, calling mark(edge) on every
      // tree edge crossed; stops when mark returns false.
      template <typename Mark>
      bool walk(std::span<Letter const> steps, bool reversed, Mark mark) {
        std::size_t cur = 0;
        for (std::size_t i = 0; i < steps.size(); ++i) {
          auto e = reversed ? steps[steps.size() - 1 - i].inverse() : steps[i];
          std::size_t edge;
          if (cur != 0 && _via[cur].is_inverse_of(e)) {
            edge = cur;
            cur  = _parent[cur];
          } else {
            auto key = (static_cast<std::uint64_t>(cur) << 32)
                       | static_cast<std::uint32_t>(e.code());
            auto [it, fresh] = _child.try_emplace(key, _parent.size());
            if (fresh) {
              _parent.push_back(cur);
              _via.push_back(e);
            }
            edge = it->second;
            cur  = edge;
          }
          if (!mark(edge)) {
            return false;
          }
        }
        return true;
      }

      std::size_t size() const noexcept { return _parent.size(); }

     private:
      std::vector<std::size_t>                        _parent;
      std::vector<Letter>                             _via;
      std::unordered_map<std::uint64_t, std::size_t>  _child;
    };

    std::size_t saturating_walk(std::size_t L, std::size_t k,
                                std::size_t len) {
      std::size_t n = len;
      for (std::size_t i = 0; i < k; ++i) {
        if (L != 0 && n > std::numeric_limits<std::size_t>::max() / L) {
          return std::numeric_limits<std::size_t>::max();
        }
        n *= L;
      }
      return n;
    }

  }  // namespace

  bool is_hard_k_splitting(GraphMap const& f, Word const& rho1,
                           Word const& rho2, std::size_t k,
                           std::size_t walk_budget) {
    if (rho1.empty() || rho2.empty()) {
      return true;
    }
    auto const& g = f.graph();
    if (!g.is_path(rho1.letters()) || !g.is_path(rho2.letters())
        || g.term(rho1.back()) != g.init(rho2.front())
        || rho1.back().is_inverse_of(rho2.front())) {
      throw std::invalid_argument("the two paths do not form a tight path");
    }
    if (saturating_walk(f.L(), k, rho1.size() + rho2.size()) > walk_budget) {
      throw BudgetExceeded("hard splitting walk of depth " + std::to_string(k)
                           + " exceeds " + std::to_string(walk_budget)
                           + " edges");
    }
    auto a = naive_image(f, rho1.letters(), k, walk_budget);
    auto b = naive_image(f, rho2.letters(), k, walk_budget);

    CoverTree         tree;
    std::vector<bool> left;
    tree.walk(a, true, [&](std::size_t e) {
      if (left.size() <= e) {
        left.resize(e + 1, false);
      }
      left[e] = true;
      return true;
    });
    return tree.walk(b, false, [&](std::size_t e) {
      return !(e < left.size() && left[e]);
    });
  }

  bool is_hard_splitting(GraphMap const& f, Word const& rho1,
                         Word const& rho2, std::size_t k_max,
                         std::size_t walk_budget) {
    for (std::size_t k = 1; k <= k_max; ++k) {
      if (!is_hard_k_splitting(f, rho1, rho2, k, walk_budget)) {
        return false;
      }
    }
    return true;
  }

  HardSplitting maximal_hard_splitting(GraphMap const& f, Word const& rho,
                                       std::size_t k_max, ScanDirection dir,
                                       std::size_t walk_budget) {
    HardSplitting out;
    out.depth    = k_max;
    auto const n = rho.size();
    if (n <= 1) {
      if (n == 1) {
        out.factors.push_back(rho);
      }
      return out;
    }
    if (dir == ScanDirection::left_to_right) {
      std::size_t start = 0;
      for (std::size_t i = 1; i < n; ++i) {
        if (is_hard_splitting(f, rho.slice(start, i), rho.slice(i, n), k_max,
                              walk_budget)) {
          out.factors.push_back(rho.slice(start, i));
          start = i;
        }
      }
      out.factors.push_back(rho.slice(start, n));
    } else {
      std::size_t end = n;
      for (std::size_t i = n - 1; i >= 1; --i) {
        if (is_hard_splitting(f, rho.slice(0, i), rho.slice(i, end), k_max,
                              walk_budget)) {
          out.factors.push_back(rho.slice(i, end));
          end = i;
        }
      }
      out.factors.push_back(rho.slice(0, end));
      std::reverse(out.factors.begin(), out.factors.end());
    }
    return out;
  }

  ////////////////////////////////////////////////////////////////////////
  // Beads
  ////////////////////////////////////////////////////////////////////////

  char const* to_string(BeadTag t) {
    switch (t) {
      case BeadTag::NielsenEdge: return "NielsenEdge";
      case BeadTag::NielsenExp: return "NielsenExp";
      case BeadTag::NielsenParabolic: return "NielsenParabolic";
      case BeadTag::GEP: return "GEP";
      case BeadTag::PsiEP: return "PsiEP";
      case BeadTag::Atom: return "Atom";
      case BeadTag::UnclassifiedLong: return "UnclassifiedLong";
    }
    return "?";
  }

  namespace {

    Word primitive_root(Word const& u) {
      auto n = u.size();
      for (std::size_t p = 1; p < n; ++p) {
        if (n % p != 0) {
          continue;
        }
        bool ok = true;
        for (std::size_t i = p; i < n && ok; ++i) {
          ok = u[i] == u[i - p];
        }
        if (ok) {
          return u.slice(0, p);
        }
      }
      return u;
    }

    // An oriented edge E with f(E) = E tau^m, tau a primitive Nielsen
    // path, E alone in a parabolic stratum and the splitting E . tau^m
    // hard to the given depth.
    struct LinearEdge {
      Letter      edge;
      Word        tau;
      std::size_t m = 0;
    };

    class BeadContext {
     public:
      BeadContext(GraphMap const& f, std::size_t depth) : _f(f) {
        auto strata  = stratify(f);
        auto heights = edge_heights(strata, f.graph().edge_count());
        _exponential.assign(f.graph().edge_count(), false);
        for (std::uint32_t i = 1; i <= f.graph().edge_count(); ++i) {
          auto const& s         = strata[heights[i - 1]];
          _exponential[i - 1]   = s.kind == StratumKind::exponential;
          bool linear_candidate = s.kind == StratumKind::parabolic
                                  && s.edges.size() == 1;
          for (int sign : {1, -1}) {
            Letter d(i, sign);
            if (!linear_candidate) {
              continue;
            }
            auto img = f.image(d);
            if (img.size() < 2 || img.front() != d) {
              continue;
            }
            auto u   = img.slice(1, img.size());
            auto tau = primitive_root(u);
            if (tighten(f, tau) != tau) {
              continue;
            }
            try {
              if (!is_hard_splitting(f, Word{d}, u, depth)) {
                continue;
              }
            } catch (BudgetExceeded const&) {
              continue;
            }
            _linear.emplace(d.code(), LinearEdge{d, tau, u.size() / tau.size()});
          }
        }
      }

      GraphMap const& map() const noexcept { return _f; }

      LinearEdge const* linear(Letter d) const {
        auto it = _linear.find(d.code());
        return it == _linear.end() ? nullptr : &it->second;
      }

      // Largest n over linear edges with root tau.
      std::size_t max_power(Word const& tau) const {
        std::size_t n = 0;
        for (auto const& [code, le] : _linear) {
          if (le.tau == tau) {
            n = std::max(n, le.m);
          }
        }
        return n;
      }

      bool touches_exponential(Word const& p) const {
        return std::any_of(p.begin(), p.end(), [&](Letter e) {
          return _exponential[e.index() - 1];
        });
      }

      std::optional<GepParams> match_gep(Word const& s) const {
        if (s.size() < 3) {
          return std::nullopt;
        }
        auto const* ei = linear(s.front());
        auto const* ej = linear(s.back().inverse());
        if (!ei || !ej || ei->tau != ej->tau || !(ej->m > ei->m)) {
          return std::nullopt;
        }
        auto middle = s.slice(1, s.size() - 1);
        auto bar    = invert(ei->tau);
        for (std::size_t k = 1;; ++k) {
          auto p = power(bar, k);
          if (p.size() > middle.size()) {
            return std::nullopt;
          }
          if (p == middle) {
            return GepParams{ei->edge, ei->tau, k,     ej->edge,
                             ei->m,    ej->m,   false};
          }
        }
      }

      std::optional<PsiParams> match_psi(Word const& s) const {
        if (s.empty()) {
          return std::nullopt;
        }
        auto const* e = linear(s.front());
        if (!e || max_power(e->tau) <= e->m) {
          return std::nullopt;
        }
        auto rest = s.slice(1, s.size());
        auto bar  = invert(e->tau);
        auto reps = rest.size() / std::max<std::size_t>(1, bar.size()) + 2;
        auto ray  = power(bar, reps);
        if (ray.size() < rest.size()
            || ray.slice(0, rest.size()) != rest) {
          return std::nullopt;
        }
        std::size_t k = 0;
        while (power(bar, k + 1).size() <= rest.size()
               && ray.slice(0, power(bar, k + 1).size())
                      == rest.slice(0, power(bar, k + 1).size())) {
          ++k;
        }
        auto full = power(bar, k).size();
        return PsiParams{e->edge, e->tau,  k,    rest.slice(full, rest.size()),
                         Word(),  e->m, false};
      }

      Bead classify(Word const& rho, std::size_t J) const {
        Bead b;
        b.path = rho;
        if (rho.empty()) {
          b.tag       = BeadTag::Atom;
          b.vanishing = true;
          return b;
        }
        auto image = tighten(_f, rho);
        if (rho.size() <= J && image == rho) {
          b.tag = rho.size() == 1         ? BeadTag::NielsenEdge
                  : touches_exponential(rho) ? BeadTag::NielsenExp
                                             : BeadTag::NielsenParabolic;
          return b;
        }
        auto bar = invert(rho);
        for (bool reversed : {false, true}) {
          if (auto g = match_gep(reversed ? bar : rho)) {
            g->reversed = reversed;
            b.tag       = BeadTag::GEP;
            b.gep       = std::move(g);
            return b;
          }
        }
        for (bool reversed : {false, true}) {
          if (auto p = match_psi(reversed ? bar : rho)) {
            p->reversed = reversed;
            b.tag       = BeadTag::PsiEP;
            b.psi       = std::move(p);
            return b;
          }
        }
        if (rho.size() <= J) {
          b.tag       = BeadTag::Atom;
          b.vanishing = image.empty();
          return b;
        }
        b.tag = BeadTag::UnclassifiedLong;
        return b;
      }

     private:
      GraphMap const&                        _f;
      std::vector<bool>                      _exponential;
      std::map<std::int32_t, LinearEdge>     _linear;
    };

  }  // namespace

  Bead classify_bead(GraphMap const& f, Word const& rho, std::size_t J,
                     std::size_t depth) {
    return BeadContext(f, depth).classify(rho, J);
  }

  bool BeadDecomposition::accepted() const {
    return std::none_of(beads.begin(), beads.end(), [](Bead const& b) {
      return b.tag == BeadTag::UnclassifiedLong;
    });
  }

  BeadDecomposition bead_decomposition(GraphMap const& f, Word const& rho,
                                       std::size_t J, std::size_t k_max) {
    BeadContext       ctx(f, 2);
    BeadDecomposition out;
    auto              split = maximal_hard_splitting(f, rho, k_max);
    out.depth               = split.depth;
    for (auto const& piece : split.factors) {
      out.beads.push_back(ctx.classify(piece, J));
    }
    return out;
  }

  ////////////////////////////////////////////////////////////////////////
  // Nibbled futures
  ////////////////////////////////////////////////////////////////////////

  std::vector<NibbledFuture> nibbled_futures(GraphMap const&      f,
                                             Word const&          rho,
                                             std::size_t          steps,
                                             NibbleOptions const& opt) {
    std::vector<NibbledFuture> out{{0, rho}};
    std::vector<Word>          layer{rho};
    Word                       entire = rho;
    std::mt19937_64            rng(opt.seed);
    for (std::size_t s = 1; s <= steps; ++s) {
      entire = tighten_power(f, entire, 1, opt.symbol_cap);
      std::set<Word> next;
      for (auto const& sigma : layer) {
        auto img = tighten_power(f, sigma, 1, opt.symbol_cap);
        auto n   = img.size();
        switch (opt.ends) {
          case NibbleEnds::right:
            for (std::size_t j = 0; j <= n; ++j) {
              next.insert(img.slice(0, j));
            }
            break;
          case NibbleEnds::left:
            for (std::size_t i = 0; i <= n; ++i) {
              next.insert(img.slice(i, n));
            }
            break;
          case NibbleEnds::both:
            next.insert(Word());
            for (std::size_t i = 0; i < n; ++i) {
              for (std::size_t j = i + 1; j <= n; ++j) {
                next.insert(img.slice(i, j));
              }
            }
            break;
        }
      }
      layer.assign(next.begin(), next.end());
      if (opt.width_cap != 0 && layer.size() > opt.width_cap) {
        std::vector<Word> rest;
        for (auto& w : layer) {
          if (w != entire) {
            rest.push_back(std::move(w));
          }
        }
        std::vector<Word> kept{entire};
        std::sample(rest.begin(), rest.end(), std::back_inserter(kept),
                    opt.width_cap - 1, rng);
        std::sort(kept.begin(), kept.end());
        layer = std::move(kept);
      }
      for (auto const& w : layer) {
        out.push_back({s, w});
      }
    }
    return out;
  }

  BeadednessResult beadedness_search(GraphMap const&                 f,
                                     std::vector<std::size_t> const& ds,
                                     std::vector<std::size_t> const& Js,
                                     std::size_t len_cap, std::size_t steps,
                                     BeadednessOptions const& opt) {
    BeadednessResult result;
    BeadContext      ctx(f, 2);
    auto             js = Js;
    std::sort(js.begin(), js.end());
    std::vector<std::size_t> dd = ds;
    std::sort(dd.begin(), dd.end());

    for (auto d : dd) {
      auto           g = power_map(f, d);
      std::set<Word> paths;
      std::vector<Word> seeds;
      for (auto e : f.graph().oriented_edges()) {
        seeds.push_back(Word{e});
      }
      seeds.insert(seeds.end(), opt.seeds.begin(), opt.seeds.end());
      NibbleOptions nib;
      nib.width_cap = opt.width_cap;
      for (auto const& s : seeds) {
        for (auto const& nf : nibbled_futures(g, s, steps, nib)) {
          if (!nf.path.empty() && nf.path.size() <= len_cap) {
            paths.insert(nf.path);
          }
        }
      }

      // need[p]: the least J accepting path p.
      std::vector<std::pair<std::size_t, Word>> need;
      for (auto const& p : paths) {
        auto        split = maximal_hard_splitting(f, p, opt.k_max);
        std::size_t req   = 0;
        for (auto const& piece : split.factors) {
          auto b = ctx.classify(piece, piece.size());
          if (b.tag != BeadTag::GEP && b.tag != BeadTag::PsiEP) {
            req = std::max(req, piece.size());
          }
        }
        need.emplace_back(req, p);
      }
      result.paths_checked += need.size();
      std::size_t worst = 0;
      for (auto const& [req, p] : need) {
        worst = std::max(worst, req);
      }
      for (auto J : js) {
        if (J >= worst) {
          result.d = d;
          result.J = J;
          result.counterexamples.clear();
          return result;
        }
      }
      result.counterexamples.clear();
      auto limit = js.empty() ? 0 : js.back();
      std::stable_sort(need.begin(), need.end(),
                       [](auto const& a, auto const& b) {
                         return a.first > b.first;
                       });
      for (auto const& [req, p] : need) {
        if (req <= limit
            || result.counterexamples.size() >= opt.max_counterexamples) {
          break;
        }
        result.counterexamples.push_back(p);
      }
    }
    return result;
  }

}  // namespace corridorlab
