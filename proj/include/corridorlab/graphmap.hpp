#ifndef CORRIDORLAB_GRAPHMAP_HPP_
#define CORRIDORLAB_GRAPHMAP_HPP_

// Self-maps of finite graphs: strata, turns, relative train track checks,
// Nielsen paths, hard splittings and the bead vocabulary.
//
// Oriented edges reuse Letter: +i is edge i as given, -i its reverse. An
// edge-path is a Word over the edge alphabet, so tightening rel endpoints
// is free reduction.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "corridorlab/automorphism.hpp"
#include "corridorlab/word.hpp"

namespace corridorlab {

  inline constexpr std::size_t kDefaultWalkBudget = 4'000'000;

  class Graph {
   public:
    // init[i], term[i] are the endpoints of edge i + 1.
    Graph(std::size_t vertices, Alphabet edges, std::vector<std::size_t> init,
          std::vector<std::size_t> term);

    // One vertex with one loop per name.
    static Graph rose(Alphabet edges);

    std::size_t     vertices() const noexcept { return _vertices; }
    std::size_t     edge_count() const noexcept { return _edges.size(); }
    Alphabet const& edges() const noexcept { return _edges; }

    std::size_t init(Letter e) const;
    std::size_t term(Letter e) const;

    // True iff consecutive edges are composable.
    bool is_path(std::span<Letter const> path) const;

    // Every oriented edge, +1, -1, +2, -2, ...
    std::vector<Letter> oriented_edges() const;

   private:
    std::size_t              _vertices;
    Alphabet                 _edges;
    std::vector<std::size_t> _init;
    std::vector<std::size_t> _term;
  };

  class GraphMap {
   public:
    Graph const&                    graph() const noexcept { return _graph; }
    std::vector<std::size_t> const& vertex_map() const noexcept {
      return _vmap;
    }
    Word const& image(std::uint32_t edge) const { return _images.at(edge - 1); }
    Word        image(Letter e) const;
    std::vector<Word> const& images() const noexcept { return _images; }

    // Longest edge image.
    std::size_t L() const noexcept;
    // First edge of the image of an oriented edge.
    Letter Df(Letter e) const;

   private:
    friend GraphMap make_graph_map(Graph, std::vector<std::size_t>,
                                   std::vector<Word>);
    GraphMap(Graph g, std::vector<std::size_t> vmap, std::vector<Word> images)
        : _graph(std::move(g)),
          _vmap(std::move(vmap)),
          _images(std::move(images)) {}

    Graph                    _graph;
    std::vector<std::size_t> _vmap;
    std::vector<Word>        _images;
  };

  // Throws std::invalid_argument unless every image is a nonempty tight
  // path from the image of init(e) to the image of term(e).
  GraphMap make_graph_map(Graph graph, std::vector<std::size_t> vertex_map,
                          std::vector<Word> images);

  // The rose realizing phi: one vertex, edge i mapped to phi(a_i).
  GraphMap from_substitution(Automorphism const& phi);

  // The iterate f_#^d: each edge mapped to its tightened d-fold image.
  GraphMap power_map(GraphMap const& f, std::size_t d,
                     std::size_t cap = kDefaultSymbolCap);

  // f_#(path).
  Word tighten(GraphMap const& f, Word const& path);
  // f_#^k(path); throws BudgetExceeded past cap letters.
  Word tighten_power(GraphMap const& f, Word const& path, std::size_t k,
                     std::size_t cap = kDefaultSymbolCap);
  // The untightened concatenation f^k(path).
  LetterSeq naive_image(GraphMap const& f, std::span<Letter const> path,
                        std::size_t k, std::size_t cap = kDefaultSymbolCap);

  // Text format:
  //
  //   vertices: 1
  //   edges:
  //     E1 0 0
  //   map:
  //     E1 -> E1
  //   vmap:
  //     0 -> 0
  //
  // Entries may also follow the header on its own line ("edges: E1 0 0").
  // vmap may be omitted where the edge images determine it. Throws
  // ParseError.
  GraphMap    parse_graph_map(std::string_view text);
  GraphMap    load_graph_map(std::string const& path);
  std::string format_graph_map(GraphMap const& f);

  // Parses an edge-path, rejecting paths that are not tight or not
  // composable.
  Word parse_path(Graph const& g, std::string_view text);

  ////////////////////////////////////////////////////////////////////////
  // Strata

  // m[i][j]: number of times f(E_{j+1}) crosses E_{i+1} in either direction.
  std::vector<std::vector<std::uint64_t>> transition_matrix(GraphMap const& f);

  enum class StratumKind { zero, parabolic, exponential };
  char const* to_string(StratumKind k);

  struct Stratum {
    std::vector<std::uint32_t> edges;  // sorted edge indices
    StratumKind                kind = StratumKind::zero;
    std::optional<double>      pf_eigenvalue;
    std::size_t                period = 0;  // of the transition matrix
  };

  // Strata bottom-up (each stratum's images lie in it and the strata
  // before it). Ties go to the smallest edge, except that a
  // non-exponential stratum is placed below an exponential one whenever
  // both orders are valid.
  std::vector<Stratum> stratify(GraphMap const& f);

  // height[e - 1]: the position in `strata` of the stratum containing e.
  std::vector<std::size_t> edge_heights(std::vector<Stratum> const& strata,
                                        std::size_t edge_count);

  // Perron-Frobenius eigenvalue of a nonnegative irreducible matrix by
  // power iteration on m + I to relative tolerance `tol`.
  double pf_eigenvalue(std::vector<std::vector<std::uint64_t>> const& m,
                       double tol = 1e-10);

  ////////////////////////////////////////////////////////////////////////
  // Turns

  // An unordered pair of oriented edges with a common initial vertex,
  // stored with first <= second.
  struct Turn {
    Letter first;
    Letter second;

    Turn() = default;
    Turn(Letter a, Letter b) : first(std::min(a, b)), second(std::max(a, b)) {}

    bool degenerate() const noexcept { return first == second; }
    bool operator==(Turn const&) const = default;
    auto operator<=>(Turn const&) const = default;
  };

  // The turn crossed by the path e1 e2.
  inline Turn turn_of(Letter e1, Letter e2) { return Turn(e1.inverse(), e2); }

  Turn Tf(GraphMap const& f, Turn t);

  struct TurnTable {
    std::vector<Turn> turns;  // every turn, sorted
    std::vector<bool> legal;

    bool is_legal(Turn t) const;
  };

  // A turn is illegal iff some iterate of Tf makes it degenerate.
  TurnTable turn_analysis(GraphMap const& f);

  struct RttReport {
    bool                     has_exponential = false;
    bool                     rtt_i           = true;
    bool                     rtt_ii          = true;
    bool                     rtt_iii         = true;
    std::size_t              sampled_paths   = 0;  // checked for (ii)
    std::vector<std::string> violations;

    bool passed() const { return rtt_i && rtt_ii && rtt_iii; }
  };

  // Checks the relative train track conditions for every exponential
  // stratum H_r: (i) exactly, (iii) on every legal path in H_r of at most
  // four edges and (ii) on up to sample_budget tight paths in G_{r-1} with
  // endpoints in H_r.
  RttReport check_rtt(GraphMap const& f, std::size_t sample_budget = 4096);

  ////////////////////////////////////////////////////////////////////////
  // Nielsen paths

  struct NielsenPath {
    Word              path;
    std::size_t       period = 1;
    bool              indivisible = true;
    std::vector<Word> factors;  // indivisible Nielsen factors
  };

  // Every tight edge-path of 1..max_len edges with f_#^p(path) = path for
  // some p <= max_period. Throws BudgetExceeded after `budget` candidates.
  std::vector<NielsenPath> find_nielsen_paths(GraphMap const& f,
                                              std::size_t     max_len,
                                              std::size_t max_period = 1,
                                              std::size_t budget = 1'000'000);

  // Smallest p <= max_period with f_#^p(path) = path.
  std::optional<std::size_t> nielsen_period(GraphMap const& f,
                                            Word const&     path,
                                            std::size_t     max_period = 1);

  ////////////////////////////////////////////////////////////////////////
  // Hard splittings

  // rho1 rho2 is a hard k-splitting iff, in the universal cover, the
  // untightened walks f^k(rho1) and f^k(rho2) from the junction share no
  // edge. Throws BudgetExceeded when L^k (|rho1| + |rho2|) > walk_budget,
  // and std::invalid_argument unless rho1 rho2 is a tight path.
  bool is_hard_k_splitting(GraphMap const& f, Word const& rho1,
                           Word const& rho2, std::size_t k,
                           std::size_t walk_budget = kDefaultWalkBudget);

  // Hard k-splitting for every k in 1..k_max.
  bool is_hard_splitting(GraphMap const& f, Word const& rho1,
                         Word const& rho2, std::size_t k_max,
                         std::size_t walk_budget = kDefaultWalkBudget);

  enum class ScanDirection { left_to_right, right_to_left };

  struct HardSplitting {
    std::vector<Word> factors;
    std::size_t       depth = 0;  // hardness certified for k <= depth
  };

  // The maximal hard splitting: cuts exactly at the junctions that are hard
  // up to depth k_max. The left-to-right scan tests each junction against
  // the current factor and the rest of the path; right-to-left is the
  // mirror image. Both give the same factors.
  HardSplitting maximal_hard_splitting(
      GraphMap const& f, Word const& rho, std::size_t k_max = 4,
      ScanDirection dir = ScanDirection::left_to_right,
      std::size_t walk_budget = kDefaultWalkBudget);

  ////////////////////////////////////////////////////////////////////////
  // Beads

  enum class BeadTag {
    NielsenEdge,
    NielsenExp,
    NielsenParabolic,
    GEP,
    PsiEP,
    Atom,
    UnclassifiedLong
  };
  char const* to_string(BeadTag t);

  inline bool is_nielsen(BeadTag t) {
    return t == BeadTag::NielsenEdge || t == BeadTag::NielsenExp
           || t == BeadTag::NielsenParabolic;
  }

  // path (or its reverse, when reversed) = E_i tau^-k E_j^-1 with
  // f(E_i) = E_i tau^m, f(E_j) = E_j tau^n and n > m > 0.
  struct GepParams {
    Letter      Ei;
    Word        tau;
    std::size_t k = 0;
    Letter      Ej;
    std::size_t m = 0;
    std::size_t n = 0;
    bool        reversed = false;
  };

  // path (or its reverse) = E tau^-k nu gamma with nu a proper prefix of
  // tau^-1; gamma is always empty here.
  struct PsiParams {
    Letter      E;
    Word        tau;
    std::size_t k = 0;
    Word        nu;
    Word        gamma;
    std::size_t m = 0;
    bool        reversed = false;
  };

  struct Bead {
    Word                     path;
    BeadTag                  tag = BeadTag::UnclassifiedLong;
    std::optional<GepParams> gep;
    std::optional<PsiParams> psi;
    bool                     vanishing = false;
  };

  // Tags a path in the order Nielsen, GEP, PsiEP, Atom. Nielsen paths and
  // atoms must have at most J edges; longer paths matching nothing are
  // UnclassifiedLong. The hardness of f(E) = E tau^m is certified to
  // `depth`.
  Bead classify_bead(GraphMap const& f, Word const& rho, std::size_t J,
                     std::size_t depth = 2);

  struct BeadDecomposition {
    std::vector<Bead> beads;
    std::size_t       depth = 0;

    bool accepted() const;
  };

  BeadDecomposition bead_decomposition(GraphMap const& f, Word const& rho,
                                       std::size_t J, std::size_t k_max = 4);

  ////////////////////////////////////////////////////////////////////////
  // Nibbled futures

  // Which ends of f_#(sigma) may be nibbled: `right` keeps initial
  // subpaths, `left` terminal subpaths, `both` every subpath.
  enum class NibbleEnds { both, left, right };

  struct NibbleOptions {
    NibbleEnds    ends      = NibbleEnds::both;
    std::size_t   width_cap = 0;  // paths kept per step; 0 = all
    std::uint64_t seed      = 1;
    std::size_t   symbol_cap = kDefaultSymbolCap;
  };

  struct NibbledFuture {
    std::size_t step = 0;
    Word        path;
  };

  // The distinct k-step nibbled futures of rho for k = 0..steps, by step.
  // Under a width cap each step keeps the entire future f_#^k(rho) and a
  // seeded uniform sample of the rest.
  std::vector<NibbledFuture> nibbled_futures(GraphMap const& f,
                                             Word const& rho,
                                             std::size_t steps,
                                             NibbleOptions const& opt = {});

  struct BeadednessOptions {
    std::vector<Word> seeds;  // extra starting paths besides single edges
    std::size_t       k_max     = 4;
    std::size_t       width_cap = 2000;
    std::size_t       max_counterexamples = 8;
  };

  struct BeadednessResult {
    std::optional<std::size_t> d;
    std::optional<std::size_t> J;
    std::size_t                paths_checked = 0;
    // Failing paths for the last candidate pair, when nothing is found.
    std::vector<Word> counterexamples;

    bool found() const { return d.has_value(); }
  };

  // Smallest (d, J), by d then J, such that every generated d-monochromatic
  // path of at most len_cap edges splits into beads accepted with bound J.
  // Paths are the nibbled futures under f_#^d, up to `steps` steps, of
  // single edges and the given seeds.
  BeadednessResult beadedness_search(GraphMap const&                 f,
                                     std::vector<std::size_t> const& ds,
                                     std::vector<std::size_t> const& Js,
                                     std::size_t len_cap, std::size_t steps,
                                     BeadednessOptions const& opt = {});

}  // namespace corridorlab

#endif  // CORRIDORLAB_GRAPHMAP_HPP_
