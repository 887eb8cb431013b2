#ifndef CORRIDORLAB_CORRIDOR_HPP_
#define CORRIDORLAB_CORRIDOR_HPP_

// The mapping torus F x|_phi Z = < a_1..a_m, t | t^-1 a_i t = phi(a_i) >:
// words over the generators and t, normal forms, and stacks of t-corridors
// with their folding traces, ancestry, colours and beads.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "corridorlab/automorphism.hpp"
#include "corridorlab/graphmap.hpp"
#include "corridorlab/strata.hpp"
#include "corridorlab/word.hpp"

namespace corridorlab {

  ////////////////////////////////////////////////////////////////////////
  // Words in the mapping torus

  // A generator of F (t == 0) or t^t.
  struct MixedLetter {
    Letter letter;
    int    t = 0;

    static MixedLetter stable(int sign) { return {Letter(), sign < 0 ? -1 : 1}; }
    static MixedLetter fiber(Letter l) { return {l, 0}; }

    bool        is_t() const noexcept { return t != 0; }
    MixedLetter inverse() const noexcept {
      return is_t() ? MixedLetter{Letter(), -t} : MixedLetter{letter.inverse(), 0};
    }
    bool operator==(MixedLetter const&) const = default;
  };

  using MixedWord = std::vector<MixedLetter>;

  MixedWord formal_inverse(MixedWord const& w);
  // Number of t^+-1 letters.
  std::size_t t_count(MixedWord const& w);

  // fiber * t^exponent.
  struct NormalForm {
    Word fiber;
    long exponent = 0;

    bool operator==(NormalForm const&) const = default;
  };

  class MappingTorus {
   public:
    // Throws std::invalid_argument if a generator is named "t".
    explicit MappingTorus(Automorphism phi,
                          std::size_t  symbol_cap = kDefaultSymbolCap);

    Automorphism const& automorphism() const noexcept {
      return _cache->automorphism();
    }
    Alphabet const& alphabet() const noexcept {
      return automorphism().alphabet();
    }
    std::size_t symbol_cap() const noexcept { return _cache->cap(); }

    // phi^j(w), memoized per generator.
    Word apply(Word const& w, long j) const { return _cache->apply(w, j); }

    // t^-1 a_i t phi(a_i)^-1 for each generator.
    std::vector<MixedWord> relators() const;

    // Tokens are generator names and t, each with an optional ^n.
    // Throws ParseError.
    MixedWord   parse(std::string_view text) const;
    std::string format(MixedWord const& w) const;

    MixedWord embed(Word const& w) const;

   private:
    std::shared_ptr<ImageCache> _cache;
  };

  // Collects t's to the right using t^e x = phi^-e(x) t^e. Throws
  // BudgetExceeded when the fiber outgrows the symbol cap.
  NormalForm to_normal_form(MappingTorus const& P, MixedWord const& w);
  bool       is_identity(MappingTorus const& P, MixedWord const& w);

  ////////////////////////////////////////////////////////////////////////
  // Corridors

  // 0-based, inclusive.
  struct Interval {
    std::size_t first = 0;
    std::size_t last  = 0;

    std::size_t length() const noexcept { return last - first + 1; }
    bool        operator==(Interval const&) const = default;
  };

  struct Corridor {
    std::size_t                time = 0;
    Word                       bottom;
    std::vector<std::uint32_t> colors;  // per bottom edge
    std::vector<std::uint32_t> bead_of;  // per bottom edge; empty without beads
    std::vector<Bead>          beads;

    LetterSeq                naive_top;
    std::vector<std::size_t> provenance;  // bottom position per naive letter
    Word                     folded_top;
    // Naive positions cancelled against each other, in folding order.
    std::vector<std::pair<std::size_t, std::size_t>> cancellations;
    // Naive position -> folded position, for the survivors.
    std::vector<std::optional<std::size_t>> survivor;

    std::size_t area() const noexcept { return bottom.size(); }
  };

  // Folds the naive top bead by bead within each colour, then colour by
  // colour, then across colours, each stage left to right. colors and
  // bead_of may be empty (one colour, one bead each).
  Corridor build_corridor(Automorphism const& phi, Word const& bottom,
                          std::vector<std::uint32_t> colors  = {},
                          std::vector<std::uint32_t> bead_of = {});

  // True iff no letter of the image of bottom[pos] survives.
  bool dies_in(Corridor const& c, std::size_t pos);

  // Maximal runs of bottom positions that all die.
  std::vector<Interval> dying_intervals(Corridor const& c);

  ////////////////////////////////////////////////////////////////////////
  // Stacks

  // Drop `count` letters from one end of each folded top before it becomes
  // the next bottom.
  struct NibbleSchedule {
    Side        side  = Side::right;
    std::size_t count = 0;
  };

  struct StackOptions {
    // Lengths of the consecutive colour intervals of rho; empty means one
    // colour.
    std::vector<std::size_t>      colors;
    std::optional<NibbleSchedule> nibble;
    bool                          beads   = false;
    std::size_t                   bead_J  = 4;
    std::size_t                   bead_k  = 4;
  };

  struct EdgeRef {
    std::size_t time = 0;
    std::size_t pos  = 0;

    bool operator==(EdgeRef const&) const = default;
    auto operator<=>(EdgeRef const&) const = default;
  };

  struct BeadRef {
    std::size_t time  = 0;
    std::size_t index = 0;

    bool operator==(BeadRef const&) const = default;
  };

  class CorridorStack {
   public:
    std::vector<Corridor> const& corridors() const noexcept {
      return _corridors;
    }
    Corridor const& operator[](std::size_t time) const {
      return _corridors.at(time);
    }
    std::size_t size() const noexcept { return _corridors.size(); }

    // Immediate ancestor in the previous corridor's bottom.
    std::optional<EdgeRef> ancestor(EdgeRef e) const;
    // Positions in the next bottom descending from e.
    std::vector<std::size_t> children(EdgeRef e) const;

    // Position in the next bottom of a letter of the folded top at `time`,
    // or nullopt when it was nibbled.
    std::optional<std::size_t> next_position(std::size_t time,
                                             std::size_t folded) const;

    Automorphism const& automorphism() const { return *_phi; }

   private:
    friend CorridorStack build_stack(MappingTorus const&, Word const&,
                                     std::size_t, StackOptions const&);

    std::shared_ptr<Automorphism const> _phi;
    std::vector<Corridor>               _corridors;
    std::vector<std::size_t>            _dropped_left;
    // _parent[t][p]: ancestor position at time t - 1 (time 0 has none).
    std::vector<std::vector<std::size_t>> _parent;
    // _children[t][p]: descendants at time t + 1.
    std::vector<std::vector<std::vector<std::size_t>>> _children;
  };

  // Corridors at times 0..steps-1; the bottom at time j is the folded top
  // at time j - 1, nibbled per the schedule. Throws BudgetExceeded and
  // std::invalid_argument when the colour lengths do not sum to |rho|.
  CorridorStack build_stack(MappingTorus const& P, Word const& rho,
                            std::size_t steps, StackOptions const& opt = {});

  // Ancestors of e back to time 0, nearest first.
  std::vector<EdgeRef> trace_past(CorridorStack const& s, EdgeRef e);
  // Every descendant of e, by time then position.
  std::vector<EdgeRef> trace_future(CorridorStack const& s, EdgeRef e);

  // The descendant of the preferred occurrence of e's letter in its image,
  // or nullopt if that occurrence dies or is nibbled. phi must be positive
  // and conditioned at the letter (std::invalid_argument otherwise); e must
  // not lie in the last corridor (std::out_of_range).
  std::optional<EdgeRef> preferred_future(CorridorStack const& s,
                                          EdgeRef              e);

  // Bead mode: the next bead equal to the future of b, else the longest
  // bead inside the future with b's tag, else the longest bead inside it;
  // nullopt when no next bead lies inside the future (tenuous).
  std::optional<BeadRef> preferred_future(CorridorStack const& s, BeadRef b);

  // Non-vanishing beads, and all beads, along the bottom.
  std::size_t bead_norm(Corridor const& c);
  std::size_t bead_length(Corridor const& c);

  // |bottom| at each time.
  std::vector<std::size_t> corridor_length_series(CorridorStack const& s);

  ////////////////////////////////////////////////////////////////////////
  // Bounded cancellation

  struct BclAudit {
    std::size_t           corridors    = 0;
    std::size_t           bound        = 0;  // B
    std::size_t           longest      = 0;  // longest dying interval
    std::vector<Word>     violations;        // bottoms with |I| >= B
  };

  // Random reduced bottoms of length 1..max_len.
  BclAudit bcl_audit(Automorphism const& phi, std::size_t count,
                     std::size_t max_len, std::uint64_t seed);

  // A uniformly random reduced word of length n.
  Word random_reduced_word(std::mt19937_64& rng, std::size_t rank,
                           std::size_t n);

}  // namespace corridorlab

#endif  // CORRIDORLAB_CORRIDOR_HPP_
