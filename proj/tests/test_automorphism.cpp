#include <random>

#include "corridorlab/automorphism.hpp"
#include "corridorlab/errors.hpp"
#include "doctest.h"
#include "fixtures.hpp"
#include "random_words.hpp"

using namespace corridorlab;
using test::phi_ex;
using test::phi_fig;

TEST_CASE("make_automorphism constants") {
  auto id = test::id3();
  CHECK(id.L() == 1);
  CHECK(id.L_inv() == 1);
  CHECK(id.B() == 3);

  auto fig = phi_fig();
  CHECK(fig.L() == 3);
  CHECK(fig.L_inv() == 3);
  CHECK(fig.B() == 19);

  auto ex = phi_ex();
  CHECK(ex.L() == 3);
  CHECK(ex.L_inv() == 3);
}

TEST_CASE("make_automorphism rejects a non-inverse") {
  Alphabet ab({"a", "b"});
  Substitution s{ab.parse("a b"), ab.parse("b")};
  try {
    make_automorphism(ab, s, s);
    FAIL("expected InverseMismatch");
  } catch (InverseMismatch const& e) {
    CHECK(e.generator() == "a");
  }
  CHECK_THROWS_AS(make_automorphism(ab, {ab.parse("a"), Word()}, s),
                  std::invalid_argument);
}

TEST_CASE("apply") {
  auto        fig = phi_fig();
  auto const& A   = fig.alphabet();
  CHECK(apply(fig, A.parse("b a c^-1")) == A.parse("b a a c^-1"));
  auto id = test::id3();
  CHECK(apply(id, A.parse("a b^-1 c")) == A.parse("a b^-1 c"));
  auto        ex = phi_ex();
  auto const& E  = ex.alphabet();
  CHECK(apply(ex, E.parse("a3")) == E.parse("a1 a2 a3"));
}

TEST_CASE("naive_expansion") {
  auto        fig = phi_fig();
  auto const& A   = fig.alphabet();
  auto        n   = naive_expansion(fig, A.parse("b a c^-1"));
  CHECK(A.format(n.letters) == "b a a a a^-1 c^-1");
  CHECK(n.provenance == std::vector<std::size_t>{0, 0, 0, 1, 2, 2});

  auto id = test::id3();
  CHECK(naive_expansion(id, A.parse("a b")).letters.size() == 2);

  auto        ex = phi_ex();
  auto const& E  = ex.alphabet();
  auto        m  = naive_expansion(ex, E.parse("a1"));
  CHECK(E.format(m.letters) == "a1 a1 a2");
  CHECK(m.provenance == std::vector<std::size_t>{0, 0, 0});
}

TEST_CASE("power_substitution") {
  auto        fig = phi_fig();
  auto const& A   = fig.alphabet();
  auto        sq  = power_substitution(fig, 2);
  CHECK(sq.image(A.find("b")) == A.parse("b a^4"));
  CHECK(sq.image(A.find("c")) == A.parse("c a^2"));
  CHECK(sq.image(A.find("a")) == A.parse("a"));
  CHECK(sq.inverse_image(A.find("b")) == A.parse("b a^-4"));

  auto id = test::id3();
  CHECK(power_substitution(id, 5) == id);

  auto        ex = phi_ex();
  auto const& E  = ex.alphabet();
  CHECK(power_substitution(ex, 2).image(E.find("a2"))
        == E.parse("a1 a1 a2 a1 a2"));

  CHECK_THROWS_AS(power_substitution(ex, 20, 1000), BudgetExceeded);
}

TEST_CASE("is_positive") {
  CHECK(is_positive(phi_fig()));
  CHECK(is_positive(test::id3()));
  CHECK_FALSE(is_positive(test::phi_neg()));
}

TEST_CASE("automorphism file format") {
  CHECK(parse_automorphism(format_automorphism(phi_ex())) == phi_ex());
  try {
    parse_automorphism("alphabet: a b\nmap:\n  a -> a\n  b b\ninverse:\n");
    FAIL("expected ParseError");
  } catch (ParseError const& e) {
    CHECK(e.line() == 4);
  }
  try {
    parse_automorphism("alphabet: a\nmap:\n  a -> a x\ninverse:\n  a -> a\n");
    FAIL("expected ParseError");
  } catch (ParseError const& e) {
    CHECK(e.line() == 3);
    CHECK(e.column() == 10);
  }
  CHECK_THROWS_AS(parse_automorphism("alphabet: a\nmap:\n  a -> a\n"),
                  ParseError);
  CHECK_THROWS_AS(
      parse_automorphism("alphabet: a b\nmap:\n a -> a b\n b -> b\n"
                         "inverse:\n a -> a b\n b -> b\n"),
      InverseMismatch);
}

TEST_CASE("automorphism invariants") {
  std::mt19937_64 rng(42);
  for (auto const& phi :
       {phi_fig(), phi_ex(), test::id3(), test::phi_quad(), test::phi_neg()}) {
    auto const rank = phi.rank();
    for (int trial = 0; trial < 300; ++trial) {
      auto w  = test::random_reduced(rng, rank, rng() % 21);
      auto pw = apply(phi, w);
      CHECK(pw.size() <= phi.L() * w.size());
      CHECK(w.size() <= phi.L_inv() * pw.size());
      CHECK(free_reduce(naive_expansion(phi, w).letters) == pw);
      CHECK(apply_inverse(phi, pw) == w);
      auto u = test::random_reduced(rng, rank, rng() % 10);
      CHECK(apply(phi, concat(u, w)) == concat(apply(phi, u), pw));
    }
  }
}

TEST_CASE("positive words do not cancel under positive automorphisms") {
  std::mt19937_64 rng(5);
  for (auto const& phi : {phi_fig(), phi_ex(), test::phi_quad()}) {
    for (int trial = 0; trial < 200; ++trial) {
      auto w     = test::random_positive(rng, phi.rank(), rng() % 20);
      auto naive = naive_expansion(phi, w);
      CHECK(free_reduce(naive.letters).size() == naive.letters.size());
    }
  }
}

TEST_CASE("power_substitution matches iterated application") {
  std::mt19937_64 rng(9);
  for (auto const& phi : {phi_fig(), phi_ex(), test::phi_quad()}) {
    for (std::size_t k = 1; k <= 6; ++k) {
      auto pk = power_substitution(phi, k);
      for (int trial = 0; trial < 20; ++trial) {
        auto w   = test::random_reduced(rng, phi.rank(), rng() % 21);
        Word ref = w;
        for (std::size_t j = 0; j < k; ++j) {
          ref = apply(phi, ref);
        }
        CHECK(apply(pk, w) == ref);
        CHECK(apply_inverse(pk, ref) == w);
      }
    }
  }
}

TEST_CASE("ImageCache") {
  ImageCache cache(phi_ex(), 1000);
  auto const& E = cache.automorphism().alphabet();
  CHECK(*cache.image(1, 3) == apply_power(phi_ex(), E.parse("a1"), 3));
  CHECK(*cache.image(2, -2) == apply_power(phi_ex(), E.parse("a2"), -2));
  CHECK(cache.apply(E.parse("a1 a2^-1"), 2)
        == apply_power(phi_ex(), E.parse("a1 a2^-1"), 2));
  CHECK_THROWS_AS(cache.image(1, 10), BudgetExceeded);
  CHECK(cache.stored_symbols() <= 1000);
}
