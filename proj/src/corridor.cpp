#include "corridorlab/corridor.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

#include "corridorlab/errors.hpp"

namespace corridorlab {

  ////////////////////////////////////////////////////////////////////////
  // Words in the mapping torus
  ////////////////////////////////////////////////////////////////////////

  MixedWord formal_inverse(MixedWord const& w) {
    MixedWord out;
    out.reserve(w.size());
    for (auto it = w.rbegin(); it != w.rend(); ++it) {
      out.push_back(it->inverse());
    }
    return out;
  }

  std::size_t t_count(MixedWord const& w) {
    return static_cast<std::size_t>(
        std::count_if(w.begin(), w.end(), [](auto const& x) { return x.is_t(); }));
  }

  MappingTorus::MappingTorus(Automorphism phi, std::size_t symbol_cap) {
    if (phi.alphabet().find("t") != 0) {
      throw std::invalid_argument(
          "the name t is reserved for the stable letter");
    }
    _cache = std::make_shared<ImageCache>(std::move(phi), symbol_cap);
  }

  std::vector<MixedWord> MappingTorus::relators() const {
    std::vector<MixedWord> out;
    for (auto g : alphabet().generators()) {
      MixedWord r{MixedLetter::stable(-1), MixedLetter::fiber(g),
                  MixedLetter::stable(1)};
      for (auto l : invert(automorphism().image(g.index()))) {
        r.push_back(MixedLetter::fiber(l));
      }
      out.push_back(std::move(r));
    }
    return out;
  }

  MixedWord MappingTorus::parse(std::string_view text) const {
    MixedWord out;
    for (auto const& tok : detail::tokenize(text)) {
      MixedLetter x;
      if (tok.name == "t") {
        x = MixedLetter::stable(1);
      } else {
        auto i = alphabet().find(tok.name);
        if (i == 0) {
          throw ParseError(1, tok.column,
                           "unknown generator \"" + tok.name + "\"");
        }
        x = MixedLetter::fiber(Letter(i, 1));
      }
      if (tok.exponent < 0) {
        x = x.inverse();
      }
      for (int r = 0; r < std::abs(tok.exponent); ++r) {
        out.push_back(x);
      }
    }
    return out;
  }

  std::string MappingTorus::format(MixedWord const& w) const {
    std::string out;
    for (auto const& x : w) {
      if (!out.empty()) {
        out += ' ';
      }
      if (x.is_t()) {
        out += x.t > 0 ? "t" : "t^-1";
      } else {
        out += alphabet().format(x.letter);
      }
    }
    return out;
  }

  MixedWord MappingTorus::embed(Word const& w) const {
    MixedWord out;
    for (auto l : w) {
      out.push_back(MixedLetter::fiber(l));
    }
    return out;
  }

  NormalForm to_normal_form(MappingTorus const& P, MixedWord const& w) {
    NormalForm nf;
    LetterSeq  run;
    auto       flush = [&] {
      if (run.empty()) {
        return;
      }
      nf.fiber = concat(nf.fiber, P.apply(Word(run), -nf.exponent));
      run.clear();
      if (nf.fiber.size() > P.symbol_cap()) {
        throw BudgetExceeded("normal form exceeds "
                             + std::to_string(P.symbol_cap()) + " letters");
      }
    };
    for (auto const& x : w) {
      if (x.is_t()) {
        flush();
        nf.exponent += x.t;
      } else {
        run.push_back(x.letter);
      }
    }
    flush();
    return nf;
  }

  bool is_identity(MappingTorus const& P, MixedWord const& w) {
    auto nf = to_normal_form(P, w);
    return nf.fiber.empty() && nf.exponent == 0;
  }

  ////////////////////////////////////////////////////////////////////////
  // Corridors
  ////////////////////////////////////////////////////////////////////////

  Corridor build_corridor(Automorphism const& phi, Word const& bottom,
                          std::vector<std::uint32_t> colors,
                          std::vector<std::uint32_t> bead_of) {
    auto const n = bottom.size();
    if (colors.empty()) {
      colors.assign(n, 0);
    }
    if (colors.size() != n || (!bead_of.empty() && bead_of.size() != n)) {
      throw std::invalid_argument("annotations do not match the bottom");
    }
    Corridor c;
    c.bottom   = bottom;
    c.colors   = std::move(colors);
    c.bead_of  = std::move(bead_of);
    auto naive = naive_expansion(phi, bottom);
    c.naive_top  = std::move(naive.letters);
    c.provenance = std::move(naive.provenance);

    // Stage keys: bead within colour, colour, everything.
    auto bead_key = [&](std::size_t i) -> std::uint64_t {
      auto p = c.provenance[i];
      auto b = c.bead_of.empty() ? p : c.bead_of[p];
      return (static_cast<std::uint64_t>(c.colors[p]) << 32) | b;
    };
    auto color_key = [&](std::size_t i) -> std::uint64_t {
      return c.colors[c.provenance[i]];
    };
    auto whole_key = [](std::size_t) -> std::uint64_t { return 0; };

    std::vector<std::size_t> alive(c.naive_top.size());
    std::iota(alive.begin(), alive.end(), 0);
    auto stage = [&](auto key) {
      std::vector<std::size_t> out;
      std::size_t              i = 0;
      while (i < alive.size()) {
        auto        k          = key(alive[i]);
        std::size_t run_start  = out.size();
        for (; i < alive.size() && key(alive[i]) == k; ++i) {
          auto x = alive[i];
          if (out.size() > run_start
              && c.naive_top[out.back()].is_inverse_of(c.naive_top[x])) {
            c.cancellations.emplace_back(out.back(), x);
            out.pop_back();
          } else {
            out.push_back(x);
          }
        }
      }
      alive = std::move(out);
    };
    stage(bead_key);
    stage(color_key);
    stage(whole_key);

    c.survivor.assign(c.naive_top.size(), std::nullopt);
    LetterSeq top;
    for (std::size_t q = 0; q < alive.size(); ++q) {
      c.survivor[alive[q]] = q;
      top.push_back(c.naive_top[alive[q]]);
    }
    c.folded_top = Word::from_reduced(std::move(top));
    return c;
  }

  bool dies_in(Corridor const& c, std::size_t pos) {
    if (pos >= c.bottom.size()) {
      throw std::out_of_range("bottom position out of range");
    }
    for (std::size_t i = 0; i < c.naive_top.size(); ++i) {
      if (c.provenance[i] == pos && c.survivor[i]) {
        return false;
      }
    }
    return true;
  }

  std::vector<Interval> dying_intervals(Corridor const& c) {
    std::vector<bool> lives(c.bottom.size(), false);
    for (std::size_t i = 0; i < c.naive_top.size(); ++i) {
      if (c.survivor[i]) {
        lives[c.provenance[i]] = true;
      }
    }
    std::vector<Interval> out;
    for (std::size_t p = 0; p < lives.size(); ++p) {
      if (lives[p]) {
        continue;
      }
      if (!out.empty() && out.back().last + 1 == p) {
        out.back().last = p;
      } else {
        out.push_back({p, p});
      }
    }
    return out;
  }

  ////////////////////////////////////////////////////////////////////////
  // Stacks
  ////////////////////////////////////////////////////////////////////////

  std::optional<EdgeRef> CorridorStack::ancestor(EdgeRef e) const {
    if (e.time == 0) {
      return std::nullopt;
    }
    return EdgeRef{e.time - 1, _parent.at(e.time).at(e.pos)};
  }

  std::vector<std::size_t> CorridorStack::children(EdgeRef e) const {
    if (e.time + 1 >= _corridors.size()) {
      return {};
    }
    return _children.at(e.time).at(e.pos);
  }

  std::optional<std::size_t> CorridorStack::next_position(
      std::size_t time, std::size_t folded) const {
    if (time + 1 >= _corridors.size()) {
      return std::nullopt;
    }
    auto drop = _dropped_left.at(time);
    if (folded < drop) {
      return std::nullopt;
    }
    auto q = folded - drop;
    if (q >= _corridors[time + 1].bottom.size()) {
      return std::nullopt;
    }
    return q;
  }

  CorridorStack build_stack(MappingTorus const& P, Word const& rho,
                            std::size_t steps, StackOptions const& opt) {
    auto const& phi = P.automorphism();
    CorridorStack s;
    s._phi = std::make_shared<Automorphism const>(phi);

    std::vector<std::uint32_t> colors(rho.size(), 0);
    if (!opt.colors.empty()) {
      std::size_t total = std::accumulate(opt.colors.begin(),
                                          opt.colors.end(), std::size_t{0});
      if (total != rho.size()) {
        throw std::invalid_argument("colour intervals do not cover the word");
      }
      std::size_t p = 0;
      for (std::size_t k = 0; k < opt.colors.size(); ++k) {
        for (std::size_t i = 0; i < opt.colors[k]; ++i) {
          colors[p++] = static_cast<std::uint32_t>(k);
        }
      }
    }

    std::optional<GraphMap> rose;
    if (opt.beads) {
      rose.emplace(from_substitution(phi));
    }

    Word bottom = rho;
    s._parent.emplace_back(rho.size(), 0);
    for (std::size_t time = 0; time < steps; ++time) {
      std::size_t naive = 0;
      for (auto l : bottom) {
        naive += phi.image(l.index()).size();
      }
      if (naive > P.symbol_cap()) {
        throw BudgetExceeded("corridor at time " + std::to_string(time)
                             + " exceeds " + std::to_string(P.symbol_cap())
                             + " letters");
      }

      std::vector<std::uint32_t> bead_of;
      std::vector<Bead>          beads;
      if (opt.beads) {
        bead_of.resize(bottom.size());
        std::size_t start = 0;
        while (start < bottom.size()) {
          auto end = start;
          while (end < bottom.size() && colors[end] == colors[start]) {
            ++end;
          }
          auto d = bead_decomposition(*rose, bottom.slice(start, end),
                                      opt.bead_J, opt.bead_k);
          auto p = start;
          for (auto& b : d.beads) {
            for (std::size_t i = 0; i < b.path.size(); ++i) {
              bead_of[p++] = static_cast<std::uint32_t>(beads.size());
            }
            beads.push_back(std::move(b));
          }
          start = end;
        }
      }

      auto c  = build_corridor(phi, bottom, colors, std::move(bead_of));
      c.time  = time;
      c.beads = std::move(beads);

      // The next bottom and its ancestry.
      auto const& top  = c.folded_top;
      std::size_t drop = 0, keep = top.size();
      if (opt.nibble) {
        auto cut = std::min(opt.nibble->count, top.size());
        keep     = top.size() - cut;
        if (opt.nibble->side == Side::left) {
          drop = cut;
        }
      }
      std::vector<std::size_t> parent(keep);
      std::vector<std::vector<std::size_t>> kids(bottom.size());
      for (std::size_t i = 0; i < c.naive_top.size(); ++i) {
        if (!c.survivor[i]) {
          continue;
        }
        auto q = *c.survivor[i];
        if (q < drop || q >= drop + keep) {
          continue;
        }
        parent[q - drop] = c.provenance[i];
        kids[c.provenance[i]].push_back(q - drop);
      }
      std::vector<std::uint32_t> next_colors(keep);
      for (std::size_t q = 0; q < keep; ++q) {
        next_colors[q] = colors[parent[q]];
      }

      s._corridors.push_back(std::move(c));
      s._dropped_left.push_back(drop);
      if (time + 1 < steps) {
        s._children.push_back(std::move(kids));
        s._parent.push_back(std::move(parent));
        bottom = s._corridors.back().folded_top.slice(drop, drop + keep);
        colors = std::move(next_colors);
      }
    }
    if (steps == 0) {
      s._parent.clear();
    }
    return s;
  }

  std::vector<EdgeRef> trace_past(CorridorStack const& s, EdgeRef e) {
    std::vector<EdgeRef> out;
    for (auto a = s.ancestor(e); a; a = s.ancestor(*a)) {
      out.push_back(*a);
    }
    return out;
  }

  std::vector<EdgeRef> trace_future(CorridorStack const& s, EdgeRef e) {
    std::vector<EdgeRef> out;
    std::vector<EdgeRef> layer{e};
    while (!layer.empty()) {
      std::vector<EdgeRef> next;
      for (auto x : layer) {
        for (auto q : s.children(x)) {
          next.push_back({x.time + 1, q});
        }
      }
      std::sort(next.begin(), next.end());
      out.insert(out.end(), next.begin(), next.end());
      layer = std::move(next);
    }
    return out;
  }

  std::optional<EdgeRef> preferred_future(CorridorStack const& s,
                                          EdgeRef              e) {
    if (e.time + 1 >= s.size()) {
      throw std::out_of_range("no corridor after the last one");
    }
    auto const& c = s[e.time];
    if (e.pos >= c.bottom.size()) {
      throw std::out_of_range("bottom position out of range");
    }
    auto const& phi = s.automorphism();
    auto        x   = c.bottom[e.pos];
    auto        idx = preferred_future_index(phi, x.index());
    auto        len = phi.image(x.index()).size();
    if (!x.positive()) {
      idx = len - 1 - idx;
    }
    auto start = static_cast<std::size_t>(
        std::find(c.provenance.begin(), c.provenance.end(), e.pos)
        - c.provenance.begin());
    auto folded = c.survivor[start + idx];
    if (!folded) {
      return std::nullopt;
    }
    auto q = s.next_position(e.time, *folded);
    if (!q) {
      return std::nullopt;
    }
    return EdgeRef{e.time + 1, *q};
  }

  std::optional<BeadRef> preferred_future(CorridorStack const& s, BeadRef b) {
    if (b.time + 1 >= s.size()) {
      throw std::out_of_range("no corridor after the last one");
    }
    auto const& c = s[b.time];
    if (b.index >= c.beads.size()) {
      throw std::out_of_range("no such bead");
    }
    std::set<std::size_t> future;
    for (std::size_t p = 0; p < c.bottom.size(); ++p) {
      if (c.bead_of[p] == b.index) {
        for (auto q : s.children({b.time, p})) {
          future.insert(q);
        }
      }
    }
    auto const& next = s[b.time + 1];
    // Beads of the next corridor lying inside the future.
    std::vector<std::size_t> inside;
    for (std::size_t i = 0; i < next.beads.size(); ++i) {
      bool all = true;
      for (std::size_t p = 0; p < next.bottom.size() && all; ++p) {
        if (next.bead_of[p] == i && !future.count(p)) {
          all = false;
        }
      }
      if (all && !next.beads[i].path.empty()) {
        inside.push_back(i);
      }
    }
    if (inside.empty()) {
      return std::nullopt;
    }
    auto tag  = c.beads[b.index].tag;
    auto best = [&](bool same_tag) -> std::optional<std::size_t> {
      std::optional<std::size_t> out;
      for (auto i : inside) {
        if (same_tag && next.beads[i].tag != tag) {
          continue;
        }
        if (!out || next.beads[i].path.size() > next.beads[*out].path.size()) {
          out = i;
        }
      }
      return out;
    };
    if (inside.size() == 1 && next.beads[inside[0]].path.size() == future.size()) {
      return BeadRef{b.time + 1, inside[0]};
    }
    auto pick = best(true);
    if (!pick) {
      pick = best(false);
    }
    return BeadRef{b.time + 1, *pick};
  }

  std::size_t bead_norm(Corridor const& c) {
    return static_cast<std::size_t>(std::count_if(
        c.beads.begin(), c.beads.end(),
        [](Bead const& b) { return !b.vanishing; }));
  }

  std::size_t bead_length(Corridor const& c) { return c.beads.size(); }

  std::vector<std::size_t> corridor_length_series(CorridorStack const& s) {
    std::vector<std::size_t> out;
    for (auto const& c : s.corridors()) {
      out.push_back(c.bottom.size());
    }
    return out;
  }

  ////////////////////////////////////////////////////////////////////////
  // Bounded cancellation
  ////////////////////////////////////////////////////////////////////////

  Word random_reduced_word(std::mt19937_64& rng, std::size_t rank,
                           std::size_t n) {
    LetterSeq                                   out;
    std::uniform_int_distribution<std::size_t> first(0, 2 * rank - 1);
    std::uniform_int_distribution<std::size_t> rest(0, 2 * rank - 2);
    auto letter = [](std::size_t k) {
      return Letter(static_cast<std::uint32_t>(k / 2 + 1), k % 2 ? -1 : 1);
    };
    while (out.size() < n) {
      if (out.empty()) {
        out.push_back(letter(first(rng)));
        continue;
      }
      // Skip the inverse of the previous letter.
      auto k   = rest(rng);
      auto bad = (out.back().index() - 1) * 2 + (out.back().positive() ? 1 : 0);
      if (k >= bad) {
        ++k;
      }
      out.push_back(letter(k));
    }
    return Word::from_reduced(std::move(out));
  }

  BclAudit bcl_audit(Automorphism const& phi, std::size_t count,
                     std::size_t max_len, std::uint64_t seed) {
    BclAudit                                   out;
    std::mt19937_64                            rng(seed);
    std::uniform_int_distribution<std::size_t> len(1, max_len);
    out.bound = phi.B();
    for (std::size_t i = 0; i < count; ++i) {
      auto w = random_reduced_word(rng, phi.rank(), len(rng));
      auto c = build_corridor(phi, w);
      ++out.corridors;
      for (auto const& iv : dying_intervals(c)) {
        out.longest = std::max(out.longest, iv.length());
        if (iv.length() >= out.bound && out.violations.size() < 16) {
          out.violations.push_back(w);
        }
      }
    }
    return out;
  }

}  // namespace corridorlab
