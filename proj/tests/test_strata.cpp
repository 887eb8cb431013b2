#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "corridorlab/errors.hpp"
#include "corridorlab/strata.hpp"
#include "doctest.h"
#include "fixtures.hpp"
#include "strata_oracles.hpp"

using namespace corridorlab;
using test::phi_ex;
using test::phi_fig;
using test::phi_quad;
using namespace corridorlab::test;

namespace {

  std::vector<bool> mask(std::size_t n, Gens const& s) {
    std::vector<bool> m(n, false);
    for (auto x : s) {
      m[x - 1] = true;
    }
    return m;
  }

}  // namespace

TEST_CASE("supports and strata of the worked examples") {
  auto r = compute_supp(phi_ex());
  CHECK(r[3].supp == Gens{1, 2, 3});
  CHECK(r[1].stratum == Gens{1, 2});
  CHECK(r[2].stratum == Gens{1, 2});
  CHECK(r[3].stratum == Gens{3});
  REQUIRE(r.strata.size() == 2);
  CHECK(r.strata[0] == Gens{1, 2});
  CHECK(r.strata[1] == Gens{3});

  auto id = compute_supp(test::id3());
  for (std::uint32_t x = 1; x <= 3; ++x) {
    CHECK(id[x].supp == Gens{x});
    CHECK(id[x].stratum == Gens{x});
  }

  CHECK_THROWS_AS(compute_supp(test::phi_neg()), NotPositive);
  CHECK_THROWS_AS(classify(test::phi_neg()), NotPositive);
}

TEST_CASE("letter kinds and growth") {
  auto ex = classify(phi_ex());
  CHECK(ex[1].kind == LetterKind::exponential);
  CHECK(ex[2].kind == LetterKind::exponential);
  CHECK(ex[3].kind == LetterKind::parabolic);
  CHECK(ex[3].growth.kind == GrowthKind::exponential);
  CHECK_FALSE(ex[3].growth.degree);

  auto fig = classify(phi_fig());
  CHECK(fig[1].kind == LetterKind::constant);
  CHECK(fig[1].growth.kind == GrowthKind::constant);
  for (std::uint32_t x : {2u, 3u}) {
    CHECK(fig[x].kind == LetterKind::parabolic);
    CHECK(fig[x].growth.kind == GrowthKind::polynomial);
    CHECK(fig[x].growth.degree == 1u);
  }

  auto quad = classify(phi_quad());
  CHECK(quad[3].growth.degree == 2u);
  CHECK(quad[2].growth.degree == 1u);
}

TEST_CASE("image lengths follow the hand-computed formulas") {
  auto fig = phi_fig();
  auto b   = image_lengths(fig, 2, 12);
  auto c   = image_lengths(fig, 3, 12);
  auto q   = image_lengths(phi_quad(), 3, 12);
  for (std::size_t n = 0; n <= 12; ++n) {
    CHECK(b[n] == doctest::Approx(2.0 * n + 1));
    CHECK(c[n] == doctest::Approx(n + 1.0));
    CHECK(q[n] == doctest::Approx(1.0 + n * (n + 1) / 2.0));
  }
  // Materialized images agree with the recursion.
  auto ex = phi_ex();
  auto l  = image_lengths(ex, 3, 6);
  for (long n = 0; n <= 6; ++n) {
    CHECK(apply_power(ex, Word{Letter(3, 1)}, n).size()
          == static_cast<std::size_t>(l[n]));
  }
}

TEST_CASE("conditioning power of the worked examples") {
  CHECK(condition_power(phi_fig()).k == 1);
  CHECK(condition_power(test::id_a()).k == 1);
  CHECK(condition_power(test::id3()).k == 1);

  auto cert = condition_power(phi_ex());
  CHECK(cert.k == 3);
  CHECK(cert.passed());

  auto two = check_conditions(phi_ex(), 2);
  CHECK(two.checks[0].pass);
  CHECK_FALSE(two.checks[1].pass);
  CHECK(two.checks[1].witness.find("a2") != std::string::npos);

  CHECK_THROWS_AS(condition_power(phi_ex(), 2), NoWitness);
  CHECK_THROWS_AS(condition_power(test::phi_neg()), NotPositive);
}

TEST_CASE("a transposition needs the square") {
  Alphabet ab({"a", "b"});
  auto swap = make_automorphism(ab, {ab.parse("b"), ab.parse("a")},
                                {ab.parse("b"), ab.parse("a")});
  auto one = check_conditions(swap, 1);
  CHECK_FALSE(one.checks[0].pass);
  CHECK(condition_power(swap).k == 2);
}

TEST_CASE("checks agree with the oracle on a nested example") {
  Alphabet abc({"a", "b", "c"});
  auto phi = make_automorphism(
      abc, {abc.parse("a"), abc.parse("b a"), abc.parse("c b")},
      {abc.parse("a"), abc.parse("b a^-1"), abc.parse("c a b^-1")});
  auto cert = check_conditions(phi, 1);
  auto ok   = conditions_oracle(phi, 1, 8);
  for (std::size_t i = 0; i < 5; ++i) {
    CHECK(cert.checks[i].pass == ok[i]);
  }
}

TEST_CASE("extremal-letter tables match materialized images") {
  auto ex  = phi_ex();
  auto fig = phi_fig();
  for (auto const* phi : {&ex, &fig}) {
    auto n = phi->rank();
    for (auto const& s : std::vector<Gens>{{1}, {2}, {1, 2}, {3}, {2, 3}}) {
      auto m = mask(n, s);
      for (std::uint32_t x = 1; x <= n; ++x) {
        Word w{Letter(x, 1)};
        for (std::size_t j = 0; j <= 6; ++j) {
          for (auto side : {Side::left, Side::right}) {
            auto got = extremal_letter(*phi, x, j, m, side);
            CHECK(got.value_or(0) == extremal_in(w, s, side));
          }
          w = apply(*phi, w);
        }
      }
    }
  }
}

TEST_CASE("conditioned powers pass the direct iterate checks") {
  for (auto const& phi : {phi_ex(), phi_fig(), phi_quad(), test::id3()}) {
    auto cert = condition_power(phi);
    auto ok   = conditions_oracle(phi, cert.k, 8);
    for (std::size_t i = 0; i < 5; ++i) {
      CHECK(ok[i]);
    }
  }
}

TEST_CASE("property: checks agree with the materialized oracle") {
  std::mt19937_64 rng(20260315);
  for (int trial = 0; trial < 60; ++trial) {
    auto phi = test::random_positive_automorphism(rng, 3, 4);
    for (std::size_t k = 1; k <= 3; ++k) {
      auto cert = check_conditions(phi, k);
      auto ok   = conditions_oracle(phi, k, 8);
      for (std::size_t i = 0; i < 3; ++i) {
        CHECK(cert.checks[i].pass == ok[i]);
      }
      // The oracle only sees finitely many iterates, so it can only be
      // more lenient than the exact checks.
      if (cert.checks[3].pass) {
        CHECK(ok[3]);
      }
      if (cert.checks[4].pass) {
        CHECK(ok[4]);
      }
    }
    auto cert = condition_power(phi);
    auto ok   = conditions_oracle(phi, cert.k, 8);
    for (std::size_t i = 0; i < 5; ++i) {
      CHECK(ok[i]);
    }
  }
}

TEST_CASE("property: support closure and strata partition") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 80; ++trial) {
    auto phi = test::random_positive_automorphism(rng, 4, 6);
    auto r   = classify(phi);
    std::vector<int> covered(phi.rank() + 1, 0);
    for (auto const& s : r.strata) {
      for (auto x : s) {
        ++covered[x];
      }
    }
    for (std::uint32_t x = 1; x <= phi.rank(); ++x) {
      auto const& lr = r[x];
      CHECK(covered[x] == 1);
      CHECK(lr.supp == support_oracle(phi, x));
      CHECK(lr.stratum == stratum_oracle(phi, x));
      CHECK(std::binary_search(lr.supp.begin(), lr.supp.end(), x));
      for (auto y : lr.supp) {
        CHECK(std::includes(lr.supp.begin(), lr.supp.end(),
                            r[y].supp.begin(), r[y].supp.end()));
      }
      CHECK((lr.kind == LetterKind::constant)
            == (phi.image(x) == Word{Letter(x, 1)}));
      bool exp = std::any_of(lr.supp.begin(), lr.supp.end(), [&](auto y) {
        return r[y].stratum.size() >= 2;
      });
      CHECK((lr.growth.kind == GrowthKind::exponential) == exp);
    }
    // Strata come bottom-up.
    for (std::size_t i = 0; i < r.strata.size(); ++i) {
      for (auto x : r.strata[i]) {
        for (auto l : phi.image(x)) {
          auto const& sy = r[l.index()].stratum;
          auto pos = std::find(r.strata.begin(), r.strata.end(), sy)
                     - r.strata.begin();
          CHECK(static_cast<std::size_t>(pos) <= i);
        }
      }
    }
  }
}

TEST_CASE("property: growth fits agree with classification") {
  std::mt19937_64 rng(4242);
  std::vector<Automorphism> maps{phi_ex(), phi_fig(), phi_quad(),
                                 test::id3()};
  for (int trial = 0; trial < 40; ++trial) {
    maps.push_back(test::random_positive_automorphism(rng, 3, 3));
  }
  for (auto const& phi : maps) {
    auto phi0 = power_substitution(phi, condition_power(phi).k);
    auto r    = classify(phi0);
    for (std::uint32_t x = 1; x <= phi0.rank(); ++x) {
      auto const& lr = r[x];
      if (lr.growth.kind == GrowthKind::constant) {
        continue;
      }
      auto fit = fit_growth(phi0, x);
      CHECK(fit.exponential == (lr.growth.kind == GrowthKind::exponential));
      if (lr.growth.kind == GrowthKind::polynomial) {
        auto d = polynomial_degree_estimate(phi0, x);
        CHECK(std::abs(d - static_cast<double>(*lr.growth.degree)) <= 0.25);
      }
    }
  }
}

TEST_CASE("preferred futures") {
  auto fig = phi_fig();
  CHECK(preferred_future_index(fig, 2) == 0);
  CHECK(preferred_future_index(test::id_a(), 1) == 0);

  auto phi3 = power_substitution(phi_ex(), 3);
  auto img  = phi3.image(1);
  std::vector<std::size_t> at;
  for (std::size_t i = 0; i < img.size(); ++i) {
    if (img[i] == Letter(1, 1)) {
      at.push_back(i);
    }
  }
  REQUIRE(at.size() >= 3);
  CHECK(preferred_future_index(phi3, 1) == at[1]);
  CHECK_THROWS_AS(preferred_future_index(phi_ex(), 2), std::invalid_argument);

  auto r = classify(phi3);
  for (std::uint32_t x = 1; x <= 3; ++x) {
    REQUIRE(r[x].preferred_index);
    auto p = *r[x].preferred_index;
    CHECK(phi3.image(x)[p] == Letter(x, 1));
    if (r[x].kind == LetterKind::exponential) {
      CHECK(p != at.front());
      CHECK(occurrences(phi3.image(x), x) >= 3);
    }
  }
}

TEST_CASE("fast letters") {
  auto fig = phi_fig();
  CHECK_FALSE(classify_fast(fig, 2, Side::left));
  CHECK_FALSE(classify_fast(fig, 2, Side::right));
  auto prof = fast_growth_profile(fig, 2, Side::right);
  for (std::size_t n = 0; n <= 12; ++n) {
    CHECK(prof.distance[n] == doctest::Approx(2.0 * n));
  }
  CHECK_FALSE(prof.superlinear);

  auto phi3 = power_substitution(phi_ex(), 3);
  CHECK(classify_fast(phi3, 1, Side::left));
  CHECK(fast_growth_profile(phi3, 1, Side::left).superlinear);

  // c -> b c in phi_quad: c is left-fast, with quadratic distance.
  auto quad = phi_quad();
  CHECK(classify_fast(quad, 3, Side::left));
  CHECK_FALSE(classify_fast(quad, 3, Side::right));
  auto qp = fast_growth_profile(quad, 3, Side::left);
  CHECK(qp.superlinear);
  for (std::size_t n = 0; n <= 12; ++n) {
    CHECK(qp.distance[n] == doctest::Approx(n * (n + 1) / 2.0));
  }
}

TEST_CASE("property: structural and empirical fast tests agree") {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 40; ++trial) {
    auto phi  = test::random_positive_automorphism(rng, 3, 4);
    auto phi0 = power_substitution(phi, condition_power(phi).k);
    auto r    = classify(phi0);
    for (std::uint32_t x = 1; x <= 3; ++x) {
      if (r[x].kind == LetterKind::constant) {
        continue;
      }
      for (auto side : {Side::left, Side::right}) {
        CHECK(classify_fast(phi0, x, side)
              == fast_growth_profile(phi0, x, side).superlinear);
      }
    }
  }
}
