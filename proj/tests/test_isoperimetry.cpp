#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <set>

#include "corridorlab/errors.hpp"
#include "corridorlab/isoperimetry.hpp"
#include "doctest.h"
#include "fixtures.hpp"

using namespace corridorlab;
using test::id_a;
using test::phi_ex;
using test::phi_fig;

namespace {

  using Cyclic = std::vector<int>;

  // t is the code rank + 1.
  Cyclic encode(MixedWord const& w, int rank) {
    Cyclic out;
    for (auto const& x : w) {
      out.push_back(x.is_t() ? x.t * (rank + 1) : x.letter.code());
    }
    return out;
  }

  // Cyclic reduction followed by the least rotation.
  Cyclic canonical(Cyclic w) {
    Cyclic s;
    for (auto x : w) {
      if (!s.empty() && s.back() == -x) {
        s.pop_back();
      } else {
        s.push_back(x);
      }
    }
    std::size_t a = 0, b = s.size();
    while (b - a >= 2 && s[a] == -s[b - 1]) {
      ++a;
      --b;
    }
    s = Cyclic(s.begin() + static_cast<long>(a), s.begin() + static_cast<long>(b));
    auto best = s;
    for (std::size_t r = 1; r < s.size(); ++r) {
      std::rotate(s.begin(), s.begin() + 1, s.end());
      best = std::min(best, s);
    }
    return best;
  }

  // Least number of relator moves taking w to the empty cyclic word: each
  // move replaces a cyclic subword u of w by v^-1 where u v is a cyclic
  // conjugate of a relator or its inverse. Intermediate words are capped in
  // length.
  std::optional<std::size_t> area_by_search(MappingTorus const& P,
                                            MixedWord const& w,
                                            std::size_t max_depth,
                                            std::size_t slack) {
    int const           rank = static_cast<int>(P.alphabet().size());
    std::vector<Cyclic> rels;
    for (auto const& r : P.relators()) {
      for (auto const& q : {r, formal_inverse(r)}) {
        auto c = encode(q, rank);
        for (std::size_t k = 0; k < c.size(); ++k) {
          rels.push_back(c);
          std::rotate(c.begin(), c.begin() + 1, c.end());
        }
      }
    }
    auto const              start = canonical(encode(w, rank));
    auto const              cap   = start.size() + slack;
    std::map<Cyclic, std::size_t> dist{{start, 0}};
    std::deque<Cyclic>      queue{start};
    while (!queue.empty()) {
      auto cur = queue.front();
      queue.pop_front();
      auto d = dist[cur];
      if (cur.empty()) {
        return d;
      }
      if (d == max_depth) {
        continue;
      }
      auto const n = cur.size();
      for (std::size_t s = 0; s < n; ++s) {
        for (auto const& rho : rels) {
          for (std::size_t len = 1; len <= std::min(n, rho.size()); ++len) {
            if (cur[(s + len - 1) % n] != rho[len - 1]) {
              break;
            }
            Cyclic next;
            for (auto k = rho.size(); k > len; --k) {
              next.push_back(-rho[k - 1]);
            }
            for (auto k = len; k < n; ++k) {
              next.push_back(cur[(s + k) % n]);
            }
            next = canonical(next);
            if (next.size() > cap || dist.count(next)) {
              continue;
            }
            dist[next] = d + 1;
            queue.push_back(next);
          }
        }
      }
    }
    return std::nullopt;
  }

  // Exhaustive non-crossing pairings, without memoization.
  std::size_t pairing_oracle(MappingTorus const& P, MixedWord const& w) {
    std::vector<std::size_t> T;
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (w[i].is_t()) {
        T.push_back(i);
      }
    }
    auto const INF = std::numeric_limits<std::size_t>::max();
    std::function<std::size_t(std::size_t, std::size_t)> best =
        [&](std::size_t a, std::size_t b) -> std::size_t {
      if (a >= b) {
        return 0;
      }
      std::size_t out = INF;
      for (auto c = a + 1; c < b; ++c) {
        if (w[T[c]].t != -w[T[a]].t) {
          continue;
        }
        MixedWord inside(w.begin() + static_cast<long>(T[a]) + 1,
                         w.begin() + static_cast<long>(T[c]));
        auto nf = to_normal_form(P, inside);
        if (nf.exponent != 0) {
          continue;
        }
        auto bottom = w[T[a]].t < 0 ? nf.fiber : P.apply(nf.fiber, -1);
        auto in     = best(a + 1, c);
        auto out2   = best(c + 1, b);
        if (in == INF || out2 == INF) {
          continue;
        }
        out = std::min(out, bottom.size() + in + out2);
      }
      return out;
    };
    return best(0, T.size());
  }

  std::vector<MappingTorus> tori() {
    return {MappingTorus(phi_fig()), MappingTorus(phi_ex()),
            MappingTorus(id_a()), MappingTorus(test::phi_quad())};
  }

}  // namespace

TEST_CASE("bracketing examples") {
  MappingTorus P(phi_fig());
  auto         w = P.parse("t^-1 b t a^-1 a^-1 b^-1");
  auto         b = t_complete_bracketing(P, w);
  REQUIRE(b.brackets.size() == 1);
  CHECK(b.brackets[0].open == 0);
  CHECK(b.brackets[0].close == 2);
  CHECK(P.alphabet().format(b.brackets[0].value) == "b a a");
  CHECK(b.max_content_norm == 3);
  CHECK(b.complete);
  CHECK(audit_bracketing(P, w, b).empty());

  MappingTorus I(id_a());
  auto         u  = I.parse("t^-1 a^-1 t a");
  auto         bu = t_complete_bracketing(I, u);
  REQUIRE(bu.brackets.size() == 1);
  CHECK(I.alphabet().format(bu.brackets[0].value) == "a^-1");

  auto v  = P.parse("t^-2 b t^2 a^-4 b^-1");
  auto bv = t_complete_bracketing(P, v);
  REQUIRE(bv.brackets.size() == 2);
  CHECK(P.alphabet().format(bv.brackets[0].value) == "b a a");
  CHECK(P.alphabet().format(bv.brackets[1].value) == "b a a a a");
  CHECK(bv.brackets[0].open == 1);
  CHECK(bv.brackets[1].open == 0);
  CHECK(audit_bracketing(P, v, bv).empty());

  CHECK_THROWS_AS(t_complete_bracketing(P, P.parse("t a")), NotIdentity);

  // t u t^-1 uses phi^-1.
  auto x  = P.parse("t b t^-1 a a b^-1");
  auto bx = t_complete_bracketing(P, x);
  REQUIRE(bx.brackets.size() == 1);
  CHECK(P.alphabet().format(bx.brackets[0].value) == "b a^-1 a^-1");
  CHECK(P.alphabet().format(bx.brackets[0].bottom) == "b a^-1 a^-1");
}

TEST_CASE("least area examples") {
  MappingTorus I(id_a());
  for (std::size_t n = 1; n <= 6; ++n) {
    auto c = min_area(I, power_commutator_word(I, 1, n));
    CHECK(c.area == n * n);
    CHECK(c.minimal);
  }
  CHECK(min_area(I, I.parse("t^-1 t")).area == 0);
  CHECK(min_area(I, {}).area == 0);

  for (auto const& P : tori()) {
    for (auto const& r : P.relators()) {
      CHECK(min_area(P, r).area == 1);
      CHECK(min_area(P, formal_inverse(r)).area == 1);
    }
  }

  MappingTorus F(phi_fig());
  CHECK(min_area(F, F.parse("t^-1 c t a^-1 c^-1")).area == 1);
  std::size_t const triangular[] = {1, 3, 6, 10, 15};
  for (std::size_t n = 1; n <= 5; ++n) {
    auto w = conjugation_word(F, 3, n);
    CHECK(w.size() == 3 * n + 2);
    CHECK(min_area(F, w).area == triangular[n - 1]);
  }

  CHECK_THROWS_AS(min_area(F, F.parse("t a t^-1")), NotIdentity);
  CHECK_THROWS_AS(min_area(I, power_commutator_word(I, 1, 9), 16), BudgetExceeded);
  CHECK_NOTHROW(min_area(I, power_commutator_word(I, 1, 8), 16));
}

TEST_CASE("least area agrees with exhaustive pairings and relator search") {
  for (auto const& P : tori()) {
    auto words = sample_null_words(P, 14, 25, 11);
    for (auto const& w : words) {
      if (t_count(w) > 8) {
        continue;
      }
      auto c = min_area(P, w);
      CHECK(c.area == pairing_oracle(P, w));
      CHECK(audit_certificate(P, w, c).empty());
    }
  }
  // Small diagrams: at most two t-pairs, |w| <= 10.
  MappingTorus I(id_a()), F(phi_fig());
  std::vector<std::pair<MappingTorus const*, MixedWord>> cases = {
      {&I, power_commutator_word(I, 1, 1)},
      {&I, power_commutator_word(I, 1, 2)},
      {&F, conjugation_word(F, 3, 1)},
      {&F, conjugation_word(F, 3, 2)},
      {&F, F.parse("t^-1 b t a^-2 b^-1")},
      {&F, F.parse("t^-1 c b t a^-2 b^-1 a^-1 c^-1")},
      {&F, F.parse("t^-1 a b t a^-2 b^-1 a^-1")},
  };
  for (auto const& [P, w] : cases) {
    CAPTURE(P->format(w));
    REQUIRE(w.size() <= 10);
    auto c      = min_area(*P, w);
    auto search = area_by_search(*P, w, c.area + 1, 4);
    REQUIRE(search);
    CHECK(*search == c.area);
  }
}

TEST_CASE("bracketings of sampled null words") {
  for (auto const& P : tori()) {
    auto words = sample_null_words(P, 40, 150, 5);
    REQUIRE(words.size() == 150);
    for (auto const& w : words) {
      CAPTURE(P.format(w));
      CHECK(w.size() <= 40);
      CHECK(is_identity(P, w));
      CHECK(free_reduce_mixed(w) == w);
      auto b = t_complete_bracketing(P, w);
      CHECK(b.complete);
      CHECK(audit_bracketing(P, w, b).empty());
      for (auto const& br : b.brackets) {
        CHECK(br.norm == br.value.size());
        CHECK(br.norm <= b.max_content_norm);
      }
      if (t_count(w) <= 12) {
        auto c = min_area(P, w);
        CHECK(b.area() >= c.area);
      }
    }
  }
  MappingTorus I(id_a());
  for (std::size_t n = 1; n <= 6; ++n) {
    auto w = power_commutator_word(I, 1, n);
    CHECK(t_complete_bracketing(I, w).area() == n * n);
  }
}

TEST_CASE("audits reject broken certificates") {
  MappingTorus I(id_a());
  auto         w = power_commutator_word(I, 1, 2);  // t^-2 a^-2 t^2 a^2
  auto         c = min_area(I, w);
  REQUIRE(audit_certificate(I, w, c).empty());

  auto wrong_area = c;
  ++wrong_area.area;
  CHECK_FALSE(audit_certificate(I, w, wrong_area).empty());

  auto crossing    = c;
  crossing.pairing = {{0, 4}, {1, 5}};
  CHECK_FALSE(audit_certificate(I, w, crossing).empty());

  auto same_sign    = c;
  same_sign.pairing = {{0, 1}, {4, 5}};
  CHECK_FALSE(audit_certificate(I, w, same_sign).empty());

  auto b = t_complete_bracketing(I, w);
  b.brackets.pop_back();
  CHECK_FALSE(audit_bracketing(I, w, b).empty());
}

TEST_CASE("dehn scans") {
  MappingTorus              I(id_a());
  std::vector<MixedWord>    family;
  for (std::size_t n = 1; n <= 5; ++n) {
    family.push_back(power_commutator_word(I, 1, n));
  }
  auto scan = dehn_scan(I, family, 1, 100);
  REQUIRE(scan.rows.size() == 5);
  for (std::size_t n = 1; n <= 5; ++n) {
    CHECK(scan.rows[n - 1].n == 4 * n);
    CHECK(scan.rows[n - 1].max_area == n * n);
    CHECK(scan.rows[n - 1].exact);
  }
  REQUIRE(scan.slope);
  CHECK(*scan.slope == doctest::Approx(2.0));

  auto bound = corridor_bound_estimate(I, family);
  for (auto r : bound.ratios) {
    CHECK(r == doctest::Approx(0.25));
  }

  MappingTorus F(phi_fig());
  auto         rel = dehn_scan(F, F.relators(), 1, 100);
  for (auto const& s : rel.samples) {
    CHECK(s.area == 1);
  }
  auto rb = corridor_bound_estimate(F, F.relators());
  for (std::size_t i = 0; i < rb.ratios.size(); ++i) {
    CHECK(rb.ratios[i] == doctest::Approx(1.0 / double(F.relators()[i].size())));
  }

  std::vector<MixedWord> conj;
  for (std::size_t n = 1; n <= 5; ++n) {
    conj.push_back(conjugation_word(F, 3, n));
  }
  auto cb = corridor_bound_estimate(F, conj);
  for (std::size_t n = 1; n <= 5; ++n) {
    CHECK(cb.ratios[n - 1] == doctest::Approx(double(n) / double(3 * n + 2)));
  }

  // Too many t's for the DP: bracketing upper bound, flagged.
  auto big = dehn_scan(I, {power_commutator_word(I, 1, 3)}, 1, 100, 4);
  REQUIRE(big.samples.size() == 1);
  CHECK_FALSE(big.samples[0].exact);
  CHECK(big.samples[0].area == 9);
  CHECK_FALSE(big.slope);

  auto bad = dehn_scan(I, {I.parse("t a")}, 1, 100);
  CHECK(bad.failures.size() == 1);
  CHECK(bad.samples.empty());
}

TEST_CASE("brinkmann inequality") {
  auto words = all_reduced_words(3, 4);
  CHECK(words.size() == 6 + 30 + 150 + 750);
  std::set<std::vector<int>> distinct;
  for (auto const& w : words) {
    std::vector<int> codes;
    for (auto l : w) {
      codes.push_back(l.code());
    }
    distinct.insert(codes);
  }
  CHECK(distinct.size() == words.size());

  auto id = test::id3();
  for (auto v : {NormVariant::word, NormVariant::cyclic}) {
    auto rep = brinkmann_check(id, words, 4, v);
    CHECK(rep.K_num * 2 == rep.K_den);
  }

  auto fig = phi_fig();
  auto b   = brinkmann_check(fig, {fig.alphabet().parse("b")}, 10, NormVariant::word);
  for (auto const& e : b.entries) {
    CHECK(e.num == 2 * e.i + 1);
    CHECK(e.den == 2 * e.N + 2);
  }
  CHECK(b.K_num * 22 == 21 * b.K_den);
  CHECK(b.K_hat() < 1);

  auto ex = phi_ex();
  auto a1 = brinkmann_check(ex, {ex.alphabet().parse("a1")}, 6, NormVariant::word);
  auto top = apply_power(ex, ex.alphabet().parse("a1"), 6).size();
  CHECK(a1.K_num * (1 + top) == top * a1.K_den);

  // Lengths against direct application.
  auto some = all_reduced_words(3, 3);
  for (auto v : {NormVariant::word, NormVariant::cyclic}) {
    auto rep = brinkmann_check(ex, some, 3, v);
    for (auto const& e : rep.entries) {
      auto img = apply_power(ex, some[e.word], static_cast<long>(e.i));
      auto n   = v == NormVariant::cyclic ? cyclic_reduce(img).core.size() : img.size();
      CHECK(e.num == n);
      CHECK(e.i <= e.N);
    }
  }
}

TEST_CASE("brinkmann holdout") {
  auto words        = all_reduced_words(3, 4);
  auto [train, out] = holdout_split(words, 3);
  CHECK(train.size() == out.size());
  CHECK(std::count_if(train.begin(), train.end(),
                      [](Word const& w) { return w.size() == 1; })
        == 6);
  for (auto phi : {phi_fig(), phi_ex(), test::id3()}) {
    for (auto v : {NormVariant::word, NormVariant::cyclic}) {
      auto h = brinkmann_holdout(phi, train, out, 6, v);
      CHECK(h.holdout_size == out.size());
      CHECK(h.checked > 0);
      CHECK(h.violations.empty());
    }
  }
}

TEST_CASE("sampler") {
  MappingTorus F(phi_fig());
  CHECK(sample_null_words(F, 30, 0, 1).empty());
  auto three = sample_null_words(F, 30, 3, 9);
  REQUIRE(three.size() == 3);
  for (auto const& w : three) {
    CHECK(is_identity(F, w));
  }
  CHECK(three == sample_null_words(F, 30, 3, 9));
  // Shortest nontrivial null words for phi_fig have length 4 (a commutes
  // with t) and 5.
  for (auto const& w : sample_null_words(F, 4, 10, 2)) {
    CHECK(w.size() <= 4);
    CHECK(is_identity(F, w));
  }
  CHECK(sample_null_words(F, 2, 2, 2) == std::vector<MixedWord>(2));
}

TEST_CASE("fits") {
  std::vector<double> x, y;
  for (int i = 1; i <= 10; ++i) {
    x.push_back(i);
    y.push_back(3 + 2 * i + 0.5 * i * i);
  }
  auto q = quadratic_fit(x, y);
  CHECK(q.c0 == doctest::Approx(3));
  CHECK(q.c1 == doctest::Approx(2));
  CHECK(q.c2 == doctest::Approx(0.5));
  std::vector<double> sq;
  for (auto v : x) {
    sq.push_back(7 * v * v);
  }
  CHECK(*loglog_slope(x, sq) == doctest::Approx(2));
  CHECK_FALSE(loglog_slope({1}, {1}));
  CHECK_THROWS(quadratic_fit({1, 2}, {1, 2}));
}
