#include <random>

#include "corridorlab/errors.hpp"
#include "corridorlab/word.hpp"
#include "doctest.h"
#include "random_words.hpp"

using namespace corridorlab;

namespace {
  Alphabet const abc({"a", "b", "c"});

  Word w(std::string_view s) {
    return abc.parse(s);
  }

  // Brute force: shortest conjugate g w g^-1 over all reduced g, |g| <= |w|.
  std::size_t min_conjugate_length(Word const& x, std::size_t rank) {
    std::size_t best = x.size();
    test::for_each_reduced(rank, (x.size() + 1) / 2, [&](Word const& g) {
      best = std::min(best, concat(concat(g, x), invert(g)).size());
    });
    return best;
  }
}  // namespace

TEST_CASE("free_reduce") {
  CHECK(free_reduce(abc.parse_letters("a b b^-1 c")) == w("a c"));
  CHECK(free_reduce(abc.parse_letters("")).empty());
  CHECK(free_reduce(abc.parse_letters("a a^-1 a")) == w("a"));
  CHECK(free_reduce(abc.parse_letters("a b c c^-1 b^-1 a^-1")).empty());
}

TEST_CASE("concat and invert") {
  CHECK(concat(w("a b"), w("b^-1 c")) == w("a c"));
  CHECK(concat(w("a b"), Word()) == w("a b"));
  CHECK(concat(w("a"), w("a^-1")).empty());
  CHECK(invert(w("a b")) == w("b^-1 a^-1"));
  CHECK(invert(Word()).empty());
  CHECK(invert(w("a^-1")) == w("a"));
}

TEST_CASE("cyclic_reduce") {
  auto r = cyclic_reduce(w("a b a^-1"));
  CHECK(r.core.representative() == w("b"));
  CHECK(r.conjugator == w("a"));

  r = cyclic_reduce(w("a b"));
  CHECK(r.core.representative() == w("a b"));
  CHECK(r.conjugator.empty());

  r = cyclic_reduce(free_reduce(abc.parse_letters("a a^-1")));
  CHECK(r.core.size() == 0);
  CHECK(r.conjugator.empty());

  // The canonical rotation moves letters into the conjugator.
  r = cyclic_reduce(w("c b a c^-1"));
  CHECK(r.core.representative() == w("a b"));
  CHECK(r.conjugator == w("c b"));
  CHECK(concat(concat(r.conjugator, r.core.representative()),
               invert(r.conjugator))
        == w("c b a c^-1"));
}

TEST_CASE("word syntax") {
  CHECK(abc.format(w("b a^-1 a^-1")) == "b a^-1 a^-1");
  CHECK(abc.parse("a^2 b^-2") == w("a a b^-1 b^-1"));
  CHECK_THROWS_AS(abc.parse("a d"), ParseError);
  CHECK_THROWS_AS(abc.parse("a^x"), ParseError);
  CHECK_THROWS_AS(Alphabet({"a", "t"}), std::invalid_argument);
  CHECK_THROWS_AS(Alphabet({"a", "a"}), std::invalid_argument);
  CHECK_THROWS_AS(Alphabet({}), std::invalid_argument);
}

TEST_CASE("ReducedProduct agrees with concat") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<Word> pieces;
    Word              expected;
    ReducedProduct    p;
    for (int i = 0; i < 5; ++i) {
      pieces.push_back(test::random_reduced(rng, 2, rng() % 6));
    }
    for (auto const& piece : pieces) {
      expected = concat(expected, piece);
      p.append(piece.letters());
    }
    REQUIRE(p.size() == expected.size());
    CHECK(p.to_word() == expected);
    p.cyclically_reduce();
    CHECK(p.size() == cyclic_norm(expected));
    CHECK(CyclicWord(p.to_word()) == cyclic_reduce(expected).core);
  }
}

TEST_CASE("free group invariants") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 1000; ++trial) {
    auto raw = test::random_letters(rng, 3, rng() % 16);
    auto r   = free_reduce(raw);
    CHECK(free_reduce(r.letters()) == r);
    CHECK(r.size() <= raw.size());
    CHECK(r.size() % 2 == raw.size() % 2);

    auto u = test::random_reduced(rng, 3, rng() % 8);
    auto v = test::random_reduced(rng, 3, rng() % 8);
    auto x = test::random_reduced(rng, 3, rng() % 8);
    CHECK(concat(concat(u, v), x) == concat(u, concat(v, x)));
    CHECK(invert(invert(u)) == u);
    CHECK(invert(concat(u, v)) == concat(invert(v), invert(u)));
    auto uv   = concat(u, v);
    auto diff = u.size() > v.size() ? u.size() - v.size() : v.size() - u.size();
    CHECK(uv.size() >= diff);
  }
}

TEST_CASE("cyclic reduction is the shortest conjugate") {
  for (std::size_t rank : {2u, 3u}) {
    std::size_t max_len = rank == 2 ? 8 : 5;
    test::for_each_reduced(rank, max_len, [&](Word const& x) {
      auto r = cyclic_reduce(x);
      REQUIRE(r.core.size() <= x.size());
      CHECK(r.core.size() == cyclic_norm(x));
      CHECK(r.core.size() == min_conjugate_length(x, rank));
      CHECK(is_cyclically_reduced(r.core.representative()));
      CHECK(concat(concat(r.conjugator, r.core.representative()),
                   invert(r.conjugator))
            == x);
    });
  }
}

TEST_CASE("canonical rotation is the least rotation") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 300; ++trial) {
    auto x = cyclic_reduce(test::random_reduced(rng, 3, 1 + rng() % 7))
                 .core.representative();
    CyclicWord c(x);
    for (std::size_t r = 0; r < x.size(); ++r) {
      LetterSeq rot;
      for (std::size_t i = 0; i < x.size(); ++i) {
        rot.push_back(x[(r + i) % x.size()]);
      }
      CHECK(c.representative() <= Word::from_reduced(rot));
    }
  }
}
