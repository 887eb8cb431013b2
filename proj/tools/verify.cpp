#include <random>

#include "cli.hpp"
#include "corridorlab/corridor.hpp"
#include "corridorlab/errors.hpp"
#include "corridorlab/graphmap.hpp"
#include "corridorlab/isoperimetry.hpp"
#include "corridorlab/strata.hpp"

namespace corridorlab::cli {

  namespace {

    struct Suite {
      explicit Suite(std::string n) : name(std::move(n)) {}

      std::string              name;
      std::size_t              checked = 0;
      bool                     skipped = false;
      std::string              note;
      std::vector<std::string> violations;

      void check(bool ok, std::string const& what) {
        ++checked;
        if (!ok && violations.size() < 20) {
          violations.push_back(what);
        }
      }
    };

    Suite free_core(Automorphism const& phi, std::mt19937_64& rng) {
      Suite       s("free_core");
      auto const& a = phi.alphabet();
      for (int i = 0; i < 200; ++i) {
        auto w = random_reduced_word(rng, phi.rank(), rng() % 24);
        auto u = random_reduced_word(rng, phi.rank(), rng() % 8);
        auto f = a.format(w);
        s.check(a.parse(f) == w, "format/parse round trip: " + f);
        s.check(concat(w, invert(w)).empty(), "w w^-1 != 1: " + f);
        s.check(free_reduce(w.letters()) == w, "reduction not idempotent: " + f);
        auto c = cyclic_reduce(w);
        s.check(concat(concat(c.conjugator, c.core.representative()),
                       invert(c.conjugator))
                    == w,
                "cyclic reduction is not a conjugate: " + f);
        auto conj = concat(concat(u, w), invert(u));
        s.check(cyclic_reduce(conj).core == c.core,
                "cyclic reduction not conjugation invariant: " + f);
      }
      return s;
    }

    Suite automorphisms(Automorphism const& phi, std::mt19937_64& rng) {
      Suite       s("automorphism");
      auto const& a = phi.alphabet();
      for (std::uint32_t x = 1; x <= phi.rank(); ++x) {
        s.check(apply_inverse(phi, phi.image(x)) == Word{Letter(x, 1)},
                "phi^-1(phi(" + a.name(x) + ")) != " + a.name(x));
      }
      ImageCache cache(phi, kDefaultSymbolCap);
      for (int i = 0; i < 100; ++i) {
        auto w = random_reduced_word(rng, phi.rank(), rng() % 16);
        auto k = 1 + rng() % 4;
        auto f = a.format(w);
        s.check(apply_inverse(phi, apply(phi, w)) == w, "inverse fails on " + f);
        Word ref = w;
        for (std::size_t j = 0; j < k; ++j) {
          ref = apply(phi, ref);
        }
        s.check(apply(power_substitution(phi, k), w) == ref,
                "power substitution " + std::to_string(k) + " on " + f);
        s.check(cache.apply(w, static_cast<long>(k)) == ref,
                "image cache " + std::to_string(k) + " on " + f);
        s.check(cache.apply(ref, -static_cast<long>(k)) == w,
                "image cache inverse on " + f);
      }
      return s;
    }

    Suite strata(Automorphism const& phi) {
      Suite s("strata");
      if (!is_positive(phi)) {
        s.skipped = true;
        s.note    = "automorphism is not positive";
        return s;
      }
      auto const& a   = phi.alphabet();
      auto        rep = classify(phi);
      std::vector<int> stratum_count(phi.rank() + 1, 0);
      for (auto const& st : rep.strata) {
        for (auto x : st) {
          ++stratum_count[x];
        }
      }
      for (std::uint32_t x = 1; x <= phi.rank(); ++x) {
        s.check(stratum_count[x] == 1,
                a.name(x) + " lies in " + std::to_string(stratum_count[x])
                    + " strata");
        auto const& supp = rep[x].supp;
        for (auto y : supp) {
          for (auto l : phi.image(y)) {
            s.check(std::binary_search(supp.begin(), supp.end(), l.index()),
                    "supp(" + a.name(x) + ") not closed under phi");
          }
        }
        for (auto y : rep[x].stratum) {
          auto const& sy = rep[y].supp;
          s.check(std::binary_search(sy.begin(), sy.end(), x),
                  a.name(y) + " in the stratum of " + a.name(x)
                      + " does not reach it");
        }
      }
      try {
        auto cert = condition_power(phi);
        s.check(cert.passed(), "conditioning certificate fails");
        s.note = "conditioned at k=" + std::to_string(cert.k);
      } catch (NoWitness const& e) {
        s.check(false, e.what());
      }
      return s;
    }

    Suite graphmaps(Automorphism const& phi, std::mt19937_64& rng) {
      Suite s("graphmap");
      auto  f = from_substitution(phi);
      auto  m = transition_matrix(f);
      for (std::uint32_t j = 1; j <= phi.rank(); ++j) {
        std::uint64_t col = 0;
        for (std::size_t i = 0; i < m.size(); ++i) {
          col += m[i][j - 1];
        }
        s.check(col == f.image(j).size(), "transition matrix column "
                                              + std::to_string(j));
      }
      for (int i = 0; i < 100; ++i) {
        auto w = random_reduced_word(rng, phi.rank(), rng() % 16);
        s.check(tighten(f, w) == apply(phi, w),
                "f_# differs from phi on " + phi.alphabet().format(w));
      }
      for (auto const& n : find_nielsen_paths(f, 4, 1, 200'000)) {
        s.check(tighten_power(f, n.path, n.period) == n.path,
                "Nielsen path not fixed: " + phi.alphabet().format(n.path));
      }
      return s;
    }

    Suite corridors(Automorphism const& phi, std::mt19937_64& rng,
                    std::uint64_t seed) {
      Suite s("corridor");
      auto  audit = bcl_audit(phi, 300, 30, seed);
      s.check(audit.violations.empty(),
              std::to_string(audit.violations.size())
                  + " dying intervals reach the cancellation bound");
      MappingTorus P(phi);
      for (auto const& r : P.relators()) {
        s.check(is_identity(P, r), "relator is not trivial: " + P.format(r));
      }
      for (int i = 0; i < 40; ++i) {
        auto rho = random_reduced_word(rng, phi.rank(), 1 + rng() % 6);
        auto st  = build_stack(P, rho, 3);
        for (std::size_t t = 1; t < st.size(); ++t) {
          s.check(st[t].bottom == st[t - 1].folded_top,
                  "bottom at time " + std::to_string(t) + " is not the previous top");
          for (std::size_t p = 0; p < st[t].bottom.size(); ++p) {
            auto up = st.ancestor({t, p});
            bool ok = up.has_value();
            if (ok) {
              auto kids = st.children(*up);
              ok        = std::find(kids.begin(), kids.end(), p) != kids.end();
            }
            s.check(ok, "ancestry inconsistent at time " + std::to_string(t));
          }
        }
      }
      return s;
    }

    Suite isoperimetry(Automorphism const& phi, std::uint64_t seed) {
      Suite        s("isoperimetry");
      MappingTorus P(phi);
      for (auto const& w : sample_null_words(P, 30, 100, seed)) {
        auto f = P.format(w);
        auto b = t_complete_bracketing(P, w);
        s.check(b.complete && audit_bracketing(P, w, b).empty(),
                "bracketing audit fails on " + f);
        if (t_count(w) <= 10) {
          auto c = min_area(P, w);
          s.check(audit_certificate(P, w, c).empty(),
                  "certificate audit fails on " + f);
          s.check(b.area() >= c.area, "bracketing below least area on " + f);
        }
      }
      auto words         = all_reduced_words(phi.rank(), 3);
      auto [train, hold] = holdout_split(words, seed);
      for (auto v : {NormVariant::word, NormVariant::cyclic}) {
        auto h = brinkmann_holdout(phi, train, hold, 4, v);
        s.check(h.violations.empty(),
                std::string("Brinkmann holdout violations (") + to_string(v) + ")");
      }
      return s;
    }

  }  // namespace

  json verify_all(ExperimentConfig const& c, std::vector<std::string>& violations) {
    auto            phi  = load_automorphism(c.autfile);
    auto            seed = *c.seed;
    std::mt19937_64 rng(seed);
    std::vector<Suite> suites;
    suites.push_back(free_core(phi, rng));
    suites.push_back(automorphisms(phi, rng));
    suites.push_back(strata(phi));
    suites.push_back(graphmaps(phi, rng));
    suites.push_back(corridors(phi, rng, seed));
    suites.push_back(isoperimetry(phi, seed));

    json out = json::array();
    for (auto const& s : suites) {
      for (auto const& v : s.violations) {
        violations.push_back(s.name + ": " + v);
      }
      out.push_back({{"suite", s.name},
                     {"checked", s.checked},
                     {"skipped", s.skipped},
                     {"note", s.note},
                     {"passed", s.violations.empty()},
                     {"violations", s.violations}});
    }
    return {{"suites", out}, {"passed", violations.empty()}};
  }

}  // namespace corridorlab::cli
