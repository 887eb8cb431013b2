#include "corridorlab/isoperimetry.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <random>
#include <set>
#include <stdexcept>

#include "corridorlab/errors.hpp"

namespace corridorlab {

  namespace {

    MixedWord slice(MixedWord const& w, std::size_t first, std::size_t last) {
      return MixedWord(w.begin() + static_cast<long>(first),
                       w.begin() + static_cast<long>(last));
    }

    std::vector<std::size_t> t_positions(MixedWord const& w) {
      std::vector<std::size_t> out;
      for (std::size_t i = 0; i < w.size(); ++i) {
        if (w[i].is_t()) {
          out.push_back(i);
        }
      }
      return out;
    }

    // The corridor bottom and top for a pair opening with t^sign around
    // the F-element u.
    std::pair<Word, Word> corridor_sides(MappingTorus const& P, int sign,
                                         Word const& u) {
      if (sign < 0) {
        return {u, P.apply(u, 1)};  // t^-1 u t = phi(u)
      }
      auto v = P.apply(u, -1);  // t u t^-1 = phi^-1(u)
      return {v, v};
    }

    // Replaces each outermost [open, close] by `values` and reduces.
    std::optional<Word> substitute(MixedWord const& w,
                                   std::vector<std::pair<std::size_t, std::size_t>> const& spans,
                                   std::vector<Word> const& values) {
      std::vector<std::size_t> order(spans.size());
      for (std::size_t i = 0; i < order.size(); ++i) {
        order[i] = i;
      }
      std::sort(order.begin(), order.end(), [&](auto a, auto b) {
        return spans[a].first < spans[b].first;
      });
      LetterSeq   out;
      std::size_t pos = 0;
      for (auto i : order) {
        auto [open, close] = spans[i];
        if (open < pos) {
          continue;  // nested inside an earlier span
        }
        for (; pos < open; ++pos) {
          if (w[pos].is_t()) {
            return std::nullopt;
          }
          out.push_back(w[pos].letter);
        }
        out.insert(out.end(), values[i].begin(), values[i].end());
        pos = close + 1;
      }
      for (; pos < w.size(); ++pos) {
        if (w[pos].is_t()) {
          return std::nullopt;
        }
        out.push_back(w[pos].letter);
      }
      return free_reduce(out);
    }

    // Nested-or-disjoint, opposite signs, every t used exactly once.
    void audit_spans(MixedWord const& w,
                     std::vector<std::pair<std::size_t, std::size_t>> const& spans,
                     std::vector<std::string>& out) {
      std::map<std::size_t, int> uses;
      for (auto p : t_positions(w)) {
        uses[p] = 0;
      }
      for (auto [open, close] : spans) {
        if (open >= close || close >= w.size() || !w[open].is_t()
            || !w[close].is_t()) {
          out.push_back("bracket [" + std::to_string(open) + ", "
                        + std::to_string(close) + "] has no t sentinels");
          continue;
        }
        if (w[open].t == w[close].t) {
          out.push_back("bracket at " + std::to_string(open)
                        + " has sentinels of the same sign");
        }
        ++uses[open];
        ++uses[close];
      }
      for (auto [p, n] : uses) {
        if (n != 1) {
          out.push_back("t at " + std::to_string(p) + " is a sentinel of "
                        + std::to_string(n) + " brackets");
        }
      }
      for (std::size_t i = 0; i < spans.size(); ++i) {
        for (std::size_t j = i + 1; j < spans.size(); ++j) {
          auto [a, b] = spans[i];
          auto [c, d] = spans[j];
          bool disjoint = b < c || d < a;
          bool nested   = (a < c && d < b) || (c < a && b < d);
          if (!disjoint && !nested) {
            out.push_back("brackets at " + std::to_string(a) + " and "
                          + std::to_string(c) + " cross");
          }
        }
      }
    }

  }  // namespace

  ////////////////////////////////////////////////////////////////////////
  // Bracketings
  ////////////////////////////////////////////////////////////////////////

  std::size_t Bracketing::area() const {
    std::size_t a = 0;
    for (auto const& b : brackets) {
      a += b.bottom.size();
    }
    return a;
  }

  Bracketing t_complete_bracketing(MappingTorus const& P, MixedWord const& w) {
    if (!is_identity(P, w)) {
      throw NotIdentity();
    }
    struct Item {
      int         t = 0;  // 0 for a fiber block
      std::size_t pos = 0;
      Word        fiber;
    };
    std::vector<Item> items;
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (w[i].is_t()) {
        items.push_back({w[i].t, i, {}});
      } else if (!items.empty() && items.back().t == 0) {
        items.back().fiber = concat(items.back().fiber, Word{w[i].letter});
      } else {
        items.push_back({0, i, Word{w[i].letter}});
      }
    }

    Bracketing out;
    for (;;) {
      // Leftmost t followed, past at most one fiber block, by its inverse.
      std::optional<std::size_t> open, close;
      for (std::size_t k = 0; k < items.size() && !open; ++k) {
        if (items[k].t == 0) {
          continue;
        }
        auto next = k + 1;
        if (next < items.size() && items[next].t == 0) {
          ++next;
        }
        if (next < items.size() && items[next].t == -items[k].t) {
          open  = k;
          close = next;
        }
      }
      if (!open) {
        break;
      }
      Word u = *close == *open + 2 ? items[*open + 1].fiber : Word();
      auto [bottom, value] = corridor_sides(P, items[*open].t, u);
      if (value.size() > P.symbol_cap()) {
        throw BudgetExceeded("bracket value exceeds the symbol cap");
      }
      out.brackets.push_back({items[*open].pos, items[*close].pos, bottom,
                              value, value.size()});
      out.max_content_norm = std::max(out.max_content_norm, value.size());

      // Splice the value in and merge with fiber neighbours.
      Item merged{0, items[*open].pos, value};
      auto first = *open, last = *close;
      if (first > 0 && items[first - 1].t == 0) {
        --first;
        merged.fiber = concat(items[first].fiber, merged.fiber);
        merged.pos   = items[first].pos;
      }
      if (last + 1 < items.size() && items[last + 1].t == 0) {
        ++last;
        merged.fiber = concat(merged.fiber, items[last].fiber);
      }
      items.erase(items.begin() + static_cast<long>(first),
                  items.begin() + static_cast<long>(last) + 1);
      items.insert(items.begin() + static_cast<long>(first), merged);
    }
    out.complete = std::none_of(items.begin(), items.end(),
                                [](Item const& x) { return x.t != 0; });
    return out;
  }

  std::vector<std::string> audit_bracketing(MappingTorus const& P,
                                            MixedWord const&    w,
                                            Bracketing const&   b) {
    std::vector<std::string>                          out;
    std::vector<std::pair<std::size_t, std::size_t>> spans;
    std::vector<Word>                                 values;
    for (auto const& br : b.brackets) {
      spans.emplace_back(br.open, br.close);
      values.push_back(br.value);
    }
    audit_spans(w, spans, out);
    if (!out.empty()) {
      return out;
    }
    if (!b.complete) {
      out.push_back("bracketing is not complete");
    }
    for (auto const& br : b.brackets) {
      auto nf = to_normal_form(P, slice(w, br.open, br.close + 1));
      if (nf.exponent != 0 || nf.fiber != br.value) {
        out.push_back("bracket at " + std::to_string(br.open)
                      + " has the wrong value");
      }
    }
    auto rest = substitute(w, spans, values);
    if (!rest || !rest->empty()) {
      out.push_back("substituting the values does not give the identity");
    }
    return out;
  }

  ////////////////////////////////////////////////////////////////////////
  // Least area
  ////////////////////////////////////////////////////////////////////////

  AreaCertificate min_area(MappingTorus const& P, MixedWord const& w,
                           std::size_t t_cap) {
    auto T = t_positions(w);
    if (T.size() > t_cap) {
      throw BudgetExceeded(std::to_string(T.size())
                           + " t-letters exceed the cap of "
                           + std::to_string(t_cap));
    }
    if (!is_identity(P, w)) {
      throw NotIdentity();
    }
    auto const m   = T.size();
    auto const INF = std::numeric_limits<std::size_t>::max();

    // bottom(a, c): the corridor joining T[a] and T[c].
    std::map<std::pair<std::size_t, std::size_t>, std::optional<Word>> bottoms;
    auto bottom = [&](std::size_t a, std::size_t c) -> std::optional<Word> const& {
      auto [it, fresh] = bottoms.try_emplace({a, c});
      if (fresh) {
        auto nf = to_normal_form(P, slice(w, T[a] + 1, T[c]));
        if (nf.exponent == 0) {
          it->second = corridor_sides(P, w[T[a]].t, nf.fiber).first;
        }
      }
      return it->second;
    };

    // cost[a][b]: least area pairing T[a..b] among themselves (b < a: 0).
    std::vector<std::vector<std::size_t>> cost(m + 1,
                                               std::vector<std::size_t>(m + 1, INF));
    std::vector<std::vector<std::size_t>> choice(m + 1,
                                                 std::vector<std::size_t>(m + 1, 0));
    auto get = [&](std::size_t a, std::size_t b) {
      return b + 1 <= a ? std::size_t{0} : cost[a][b];  // b = a - 1: empty
    };
    for (std::size_t len = 2; len <= m; len += 2) {
      for (std::size_t a = 0; a + len <= m; ++a) {
        auto b = a + len - 1;
        for (auto c = a + 1; c <= b; c += 2) {
          if (w[T[c]].t != -w[T[a]].t) {
            continue;
          }
          auto inner = c == a + 1 ? 0 : get(a + 1, c - 1);
          auto outer = c == b ? 0 : get(c + 1, b);
          if (inner == INF || outer == INF) {
            continue;
          }
          auto const& bt = bottom(a, c);
          if (!bt) {
            continue;
          }
          auto total = inner + outer + bt->size();
          if (total < cost[a][b]) {
            cost[a][b]   = total;
            choice[a][b] = c;
          }
        }
      }
    }

    AreaCertificate cert;
    if (m == 0) {
      cert.minimal = true;
      return cert;
    }
    if (cost[0][m - 1] == INF) {
      throw NotIdentity();  // unreachable for identity words
    }
    std::function<void(std::size_t, std::size_t)> build = [&](std::size_t a,
                                                               std::size_t b) {
      if (b + 1 <= a || a >= m) {
        return;
      }
      auto c = choice[a][b];
      cert.pairing.emplace_back(T[a], T[c]);
      cert.bottoms.push_back(*bottom(a, c));
      if (c > a + 1) {
        build(a + 1, c - 1);
      }
      if (c < b) {
        build(c + 1, b);
      }
    };
    build(0, m - 1);
    cert.area    = cost[0][m - 1];
    cert.minimal = true;
    return cert;
  }

  std::vector<std::string> audit_certificate(MappingTorus const&    P,
                                             MixedWord const&       w,
                                             AreaCertificate const& c) {
    std::vector<std::string> out;
    audit_spans(w, c.pairing, out);
    if (!out.empty()) {
      return out;
    }
    if (c.bottoms.size() != c.pairing.size()) {
      out.push_back("one bottom per pair expected");
      return out;
    }
    std::size_t       area = 0;
    std::vector<Word> tops;
    for (std::size_t i = 0; i < c.pairing.size(); ++i) {
      auto [open, close] = c.pairing[i];
      auto nf = to_normal_form(P, slice(w, open + 1, close));
      auto [bottom, top] = corridor_sides(P, w[open].t, nf.fiber);
      if (nf.exponent != 0 || bottom != c.bottoms[i]) {
        out.push_back("pair at " + std::to_string(open)
                      + " has the wrong bottom");
      }
      tops.push_back(top);
      area += c.bottoms[i].size();
    }
    auto rest = substitute(w, c.pairing, tops);
    if (!rest || !rest->empty()) {
      out.push_back("residual word is not trivial");
    }
    if (area != c.area) {
      out.push_back("bottoms add up to " + std::to_string(area) + ", not "
                    + std::to_string(c.area));
    }
    return out;
  }

  ////////////////////////////////////////////////////////////////////////
  // Scans
  ////////////////////////////////////////////////////////////////////////

  DehnScan dehn_scan(MappingTorus const& P, std::vector<MixedWord> const& words,
                     std::size_t n_min, std::size_t n_max, std::size_t t_cap) {
    DehnScan                                  scan;
    std::map<std::size_t, std::vector<AreaSample>> by_n;
    for (std::size_t i = 0; i < words.size(); ++i) {
      auto const& w = words[i];
      AreaSample  s;
      s.length = w.size();
      try {
        if (t_count(w) <= t_cap) {
          auto c  = min_area(P, w, t_cap);
          s.area  = c.area;
          s.exact = true;
          for (auto const& b : c.bottoms) {
            s.longest_corridor = std::max(s.longest_corridor, b.size());
          }
        } else {
          auto b = t_complete_bracketing(P, w);
          s.area = b.area();
          for (auto const& br : b.brackets) {
            s.longest_corridor = std::max(s.longest_corridor, br.bottom.size());
          }
        }
      } catch (Error const& e) {
        scan.failures.push_back("word " + std::to_string(i) + ": " + e.what());
        continue;
      }
      scan.samples.push_back(s);
      if (s.length >= n_min && s.length <= n_max) {
        by_n[s.length].push_back(s);
      }
    }
    std::vector<double> xs, ys;
    for (auto const& [n, v] : by_n) {
      ScanRow row;
      row.n     = n;
      row.count = v.size();
      double      sum = 0;
      std::size_t exact_max = 0;
      bool        any_exact = false;
      for (auto const& s : v) {
        row.max_area = std::max(row.max_area, s.area);
        sum += static_cast<double>(s.area);
        row.exact = row.exact && s.exact;
        if (s.exact) {
          any_exact = true;
          exact_max = std::max(exact_max, s.area);
        }
      }
      row.mean_area = sum / static_cast<double>(v.size());
      scan.rows.push_back(row);
      if (any_exact && exact_max > 0) {
        xs.push_back(static_cast<double>(n));
        ys.push_back(static_cast<double>(exact_max));
      }
    }
    scan.slope = loglog_slope(xs, ys);
    return scan;
  }

  CorridorBound corridor_bound_estimate(MappingTorus const&           P,
                                        std::vector<MixedWord> const& words,
                                        std::size_t                   t_cap) {
    CorridorBound out;
    for (auto const& w : words) {
      if (w.empty() || t_count(w) > t_cap) {
        continue;
      }
      auto        c       = min_area(P, w, t_cap);
      std::size_t longest = 0;
      for (auto const& b : c.bottoms) {
        longest = std::max(longest, b.size());
      }
      auto r = static_cast<double>(longest) / static_cast<double>(w.size());
      out.ratios.push_back(r);
      out.max_ratio = std::max(out.max_ratio, r);
    }
    return out;
  }

  MixedWord power_commutator_word(MappingTorus const& P, std::uint32_t x,
                                  std::size_t n) {
    if (x == 0 || x > P.alphabet().size()) {
      throw std::invalid_argument("no such generator");
    }
    MixedWord w;
    w.insert(w.end(), n, MixedLetter::stable(-1));
    w.insert(w.end(), n, MixedLetter::fiber(Letter(x, -1)));
    w.insert(w.end(), n, MixedLetter::stable(1));
    w.insert(w.end(), n, MixedLetter::fiber(Letter(x, 1)));
    return w;
  }

  MixedWord conjugation_word(MappingTorus const& P, std::uint32_t x,
                             std::size_t n) {
    if (x == 0 || x > P.alphabet().size()) {
      throw std::invalid_argument("no such generator");
    }
    MixedWord w;
    w.insert(w.end(), n, MixedLetter::stable(-1));
    w.push_back(MixedLetter::fiber(Letter(x, 1)));
    w.insert(w.end(), n, MixedLetter::stable(1));
    auto img = P.apply(Word{Letter(x, 1)}, static_cast<long>(n));
    for (auto l : invert(img)) {
      w.push_back(MixedLetter::fiber(l));
    }
    return w;
  }

  ////////////////////////////////////////////////////////////////////////
  // Brinkmann inequality
  ////////////////////////////////////////////////////////////////////////

  char const* to_string(NormVariant v) {
    return v == NormVariant::cyclic ? "cyclic" : "word";
  }

  namespace {

    // ||phi^j(w)|| for j = 0..N_max without materializing the images.
    class IterateLengths {
     public:
      IterateLengths(Automorphism const& phi, std::size_t N_max,
                     std::size_t cap) {
        ImageCache cache(phi, cap);
        for (std::uint32_t x = 1; x <= phi.rank(); ++x) {
          std::vector<Word> fwd, inv;
          for (std::size_t j = 0; j <= N_max; ++j) {
            fwd.push_back(*cache.image(x, static_cast<long>(j)));
            inv.push_back(invert(fwd.back()));
          }
          _fwd.push_back(std::move(fwd));
          _inv.push_back(std::move(inv));
        }
      }

      std::size_t operator()(Word const& w, std::size_t j,
                             NormVariant v) const {
        ReducedProduct p;
        for (auto l : w) {
          auto const& img = l.positive() ? _fwd[l.index() - 1][j]
                                         : _inv[l.index() - 1][j];
          p.append(img.letters());
        }
        if (v == NormVariant::cyclic) {
          p.cyclically_reduce();
        }
        return p.size();
      }

     private:
      std::vector<std::vector<Word>> _fwd, _inv;
    };

  }  // namespace

  BrinkmannReport brinkmann_check(Automorphism const&      phi,
                                  std::vector<Word> const& words,
                                  std::size_t N_max, NormVariant variant,
                                  std::size_t cap) {
    BrinkmannReport rep;
    rep.variant = variant;
    rep.N_max   = N_max;
    rep.K_num   = 0;
    rep.K_den   = 1;
    IterateLengths len(phi, N_max, cap);
    for (std::size_t k = 0; k < words.size(); ++k) {
      std::vector<std::size_t> L;
      for (std::size_t j = 0; j <= N_max; ++j) {
        L.push_back(len(words[k], j, variant));
      }
      for (std::size_t N = 0; N <= N_max; ++N) {
        for (std::size_t i = 0; i <= N; ++i) {
          BrinkmannEntry e{k, i, N, L[i], L[0] + L[N]};
          if (e.den == 0) {
            continue;
          }
          // e.num / e.den > K_num / K_den
          if (e.num * rep.K_den > rep.K_num * e.den) {
            rep.K_num = e.num;
            rep.K_den = e.den;
          }
          rep.entries.push_back(e);
        }
      }
    }
    return rep;
  }

  HoldoutResult brinkmann_holdout(Automorphism const&      phi,
                                  std::vector<Word> const& train,
                                  std::vector<Word> const& holdout,
                                  std::size_t N_max, NormVariant variant) {
    HoldoutResult out;
    out.train        = brinkmann_check(phi, train, N_max, variant);
    out.holdout_size = holdout.size();
    auto test        = brinkmann_check(phi, holdout, N_max, variant);
    for (auto const& e : test.entries) {
      ++out.checked;
      if (e.num * out.train.K_den > out.train.K_num * e.den) {
        out.violations.push_back(e);
      }
    }
    return out;
  }

  std::vector<Word> all_reduced_words(std::size_t rank, std::size_t n) {
    std::vector<Word>      out;
    std::vector<LetterSeq> layer{{}};
    std::vector<Letter>    letters;
    for (std::uint32_t i = 1; i <= rank; ++i) {
      letters.emplace_back(i, 1);
      letters.emplace_back(i, -1);
    }
    std::sort(letters.begin(), letters.end());
    for (std::size_t len = 1; len <= n; ++len) {
      std::vector<LetterSeq> next;
      for (auto const& p : layer) {
        for (auto l : letters) {
          if (!p.empty() && p.back().is_inverse_of(l)) {
            continue;
          }
          auto q = p;
          q.push_back(l);
          out.push_back(Word::from_reduced(q));
          next.push_back(std::move(q));
        }
      }
      layer = std::move(next);
    }
    return out;
  }

  std::pair<std::vector<Word>, std::vector<Word>> holdout_split(
      std::vector<Word> words, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::shuffle(words.begin(), words.end(), rng);
    std::stable_partition(words.begin(), words.end(),
                          [](Word const& w) { return w.size() == 1; });
    auto half = (words.size() + 1) / 2;
    return {std::vector<Word>(words.begin(), words.begin() + static_cast<long>(half)),
            std::vector<Word>(words.begin() + static_cast<long>(half), words.end())};
  }

  ////////////////////////////////////////////////////////////////////////
  // Sampling
  ////////////////////////////////////////////////////////////////////////

  MixedWord free_reduce_mixed(MixedWord const& w) {
    MixedWord out;
    for (auto const& x : w) {
      if (!out.empty() && out.back() == x.inverse()) {
        out.pop_back();
      } else {
        out.push_back(x);
      }
    }
    return out;
  }

  std::vector<MixedWord> sample_null_words(MappingTorus const& P,
                                           std::size_t n, std::size_t count,
                                           std::uint64_t seed) {
    std::vector<MixedWord> out;
    if (count == 0) {
      return out;
    }
    std::mt19937_64 rng(seed);
    auto const      rank     = P.alphabet().size();
    auto const      relators = P.relators();
    auto uniform = [&](std::size_t lo, std::size_t hi) {
      return std::uniform_int_distribution<std::size_t>(lo, std::max(lo, hi))(rng);
    };
    auto fiber_letter = [&] {
      auto k = uniform(0, 2 * rank - 1);
      return MixedLetter::fiber(
          Letter(static_cast<std::uint32_t>(k / 2 + 1), k % 2 ? -1 : 1));
    };
    auto random_mixed = [&](std::size_t len) {
      MixedWord w;
      for (std::size_t i = 0; i < len; ++i) {
        w.push_back(uniform(0, 2) == 0 ? MixedLetter::stable(uniform(0, 1) ? 1 : -1)
                                       : fiber_letter());
      }
      return w;
    };

    // (a) a product of conjugates of relators.
    auto conjugates = [&] {
      MixedWord w;
      auto      factors = uniform(1, std::max<std::size_t>(1, n / 8));
      for (std::size_t f = 0; f < factors; ++f) {
        auto r = relators[uniform(0, relators.size() - 1)];
        if (uniform(0, 1)) {
          r = formal_inverse(r);
        }
        auto c = random_mixed(uniform(0, n / 6));
        auto ci = formal_inverse(c);
        w.insert(w.end(), c.begin(), c.end());
        w.insert(w.end(), r.begin(), r.end());
        w.insert(w.end(), ci.begin(), ci.end());
      }
      return w;
    };
    // (b) a random t-balanced word closed up by its normal form.
    auto balanced = [&] {
      auto      len = uniform(1, std::max<std::size_t>(1, n / 2));
      auto      ts  = 2 * uniform(0, len / 3);
      MixedWord w;
      std::vector<int> signs;
      for (std::size_t i = 0; i < ts; ++i) {
        signs.push_back(i % 2 ? 1 : -1);
      }
      std::shuffle(signs.begin(), signs.end(), rng);
      std::vector<bool> is_t(len, false);
      for (std::size_t i = 0; i < ts && i < len; ++i) {
        is_t[i] = true;
      }
      std::shuffle(is_t.begin(), is_t.end(), rng);
      std::size_t next = 0;
      for (std::size_t i = 0; i < len; ++i) {
        w.push_back(is_t[i] ? MixedLetter::stable(signs[next++]) : fiber_letter());
      }
      auto nf = to_normal_form(P, w);
      for (auto l : invert(nf.fiber)) {
        w.push_back(MixedLetter::fiber(l));
      }
      return w;
    };

    std::size_t const attempts = 1000 + 400 * count;
    for (std::size_t a = 0; a < attempts && out.size() < count; ++a) {
      MixedWord w;
      try {
        w = free_reduce_mixed(a % 2 == 0 ? conjugates() : balanced());
      } catch (BudgetExceeded const&) {
        continue;
      }
      if (w.empty() || w.size() > n) {
        continue;
      }
      if (!is_identity(P, w)) {
        continue;
      }
      out.push_back(std::move(w));
    }
    // Nothing nonempty fits in length n.
    while (out.size() < count) {
      out.emplace_back();
    }
    return out;
  }

  ////////////////////////////////////////////////////////////////////////
  // Fits
  ////////////////////////////////////////////////////////////////////////

  QuadraticFit quadratic_fit(std::vector<double> const& x,
                             std::vector<double> const& y) {
    if (x.size() != y.size() || x.size() < 3) {
      throw std::invalid_argument("a quadratic fit needs three points");
    }
    // Normal equations, solved by Cramer's rule on centred x.
    double mean = 0;
    for (auto v : x) {
      mean += v;
    }
    mean /= static_cast<double>(x.size());
    double s[5] = {0, 0, 0, 0, 0}, t[3] = {0, 0, 0};
    for (std::size_t i = 0; i < x.size(); ++i) {
      double u = x[i] - mean, p = 1;
      for (int k = 0; k < 5; ++k) {
        s[k] += p;
        if (k < 3) {
          t[k] += p * y[i];
        }
        p *= u;
      }
    }
    auto det3 = [](double a, double b, double c, double d, double e, double f,
                   double g, double h, double i) {
      return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g);
    };
    double D = det3(s[0], s[1], s[2], s[1], s[2], s[3], s[2], s[3], s[4]);
    if (std::abs(D) < 1e-12) {
      throw std::invalid_argument("degenerate quadratic fit");
    }
    double a0 = det3(t[0], s[1], s[2], t[1], s[2], s[3], t[2], s[3], s[4]) / D;
    double a1 = det3(s[0], t[0], s[2], s[1], t[1], s[3], s[2], t[2], s[4]) / D;
    double a2 = det3(s[0], s[1], t[0], s[1], s[2], t[1], s[2], s[3], t[2]) / D;
    // Undo the centring: a0 + a1 (x - m) + a2 (x - m)^2.
    return {a0 - a1 * mean + a2 * mean * mean, a1 - 2 * a2 * mean, a2};
  }

  std::optional<double> loglog_slope(std::vector<double> const& x,
                                     std::vector<double> const& y) {
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < x.size() && i < y.size(); ++i) {
      if (x[i] > 0 && y[i] > 0) {
        lx.push_back(std::log(x[i]));
        ly.push_back(std::log(y[i]));
      }
    }
    if (lx.size() < 2) {
      return std::nullopt;
    }
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
      mx += lx[i];
      my += ly[i];
    }
    mx /= static_cast<double>(lx.size());
    my /= static_cast<double>(ly.size());
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
      sxy += (lx[i] - mx) * (ly[i] - my);
      sxx += (lx[i] - mx) * (lx[i] - mx);
    }
    if (sxx == 0) {
      return std::nullopt;
    }
    return sxy / sxx;
  }

}  // namespace corridorlab
