#ifndef CORRIDORLAB_STRATA_HPP_
#define CORRIDORLAB_STRATA_HPP_

// Dynamics of positive automorphisms: supports, strata, letter kinds,
// growth, the conditioning power and preferred futures of letters.

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "corridorlab/automorphism.hpp"
#include "corridorlab/digraph.hpp"

namespace corridorlab {

  enum class Side { left, right };

  enum class LetterKind { constant, parabolic, exponential };
  enum class GrowthKind { constant, polynomial, exponential };

  char const* to_string(LetterKind k);
  char const* to_string(GrowthKind k);
  char const* to_string(Side s);

  struct Growth {
    GrowthKind                 kind = GrowthKind::constant;
    std::optional<std::size_t> degree;  // set for constant and polynomial
  };

  // Arc x -> y iff y occurs in phi(x); nodes are generator indices - 1.
  struct OccurrenceDigraph {
    Adjacency arcs;
  };

  OccurrenceDigraph occurrence_digraph(Automorphism const& phi);

  struct LetterReport {
    std::uint32_t              index = 0;  // 1-based generator
    std::vector<std::uint32_t> supp;
    std::vector<std::uint32_t> stratum;
    LetterKind                 kind = LetterKind::constant;
    Growth                     growth;
    std::optional<bool>        left_fast;
    std::optional<bool>        right_fast;
    // 0-based position of the preferred future in phi(x).
    std::optional<std::size_t> preferred_index;
  };

  struct StrataReport {
    std::vector<LetterReport> letters;  // letters[i] describes a_{i+1}
    // Strata listed bottom-up: a stratum comes after every stratum its
    // letters' images reach.
    std::vector<std::vector<std::uint32_t>> strata;

    LetterReport const& operator[](std::uint32_t index) const {
      return letters.at(index - 1);
    }
  };

  // Supports and strata only. Throws NotPositive.
  StrataReport compute_supp(Automorphism const& phi);

  // Supports, strata, kinds and growth. The fast flags and preferred index
  // are filled in when phi meets their preconditions (x occurs once in its
  // image, or at least twice for exponential x). Throws NotPositive.
  StrataReport classify(Automorphism const& phi);

  struct ConditionCheck {
    bool        pass = false;
    std::string witness;
  };

  // Conditions (1)-(5) on phi^k: (1) every letter occurs in its own image,
  // (2) exponential letters at least three times, (3) every letter of
  // supp(x) occurs in the image of x, (4) first and last letters of all
  // iterated images agree with those of the image, (5) the same for the
  // leftmost and rightmost letters from each stratum.
  struct ConditioningCertificate {
    std::size_t                   k = 0;
    std::array<ConditionCheck, 5> checks;

    bool passed() const {
      for (auto const& c : checks) {
        if (!c.pass) {
          return false;
        }
      }
      return true;
    }
  };

  // Checks (1)-(5) for phi^k. Conditions (4) and (5) range over all
  // iterates j >= 1 and are decided exactly: the tables of extremal letters
  // of phi^{jk}(x) are determined by those of phi^{(j-1)k}, so they are
  // constant in j iff the tables for j = 1 and j = 2 agree.
  ConditioningCertificate check_conditions(Automorphism const& phi,
                                           std::size_t         k);

  // Smallest k <= k_max passing all five checks. Throws NoWitness, and
  // NotPositive.
  ConditioningCertificate condition_power(Automorphism const& phi,
                                          std::size_t         k_max = 64);

  // Leftmost (or rightmost) letter from `subset` in phi^j(x), computed
  // without materializing phi^j(x); nullopt if none occurs. `subset` is a
  // membership mask indexed by generator index - 1. Positive phi only.
  std::optional<std::uint32_t> extremal_letter(
      Automorphism const& phi, std::uint32_t x, std::size_t j,
      std::vector<bool> const& subset, Side side);

  // Position of the preferred future of x in phi(x): the unique occurrence
  // for parabolic and constant letters, the second occurrence for
  // exponential ones. Throws std::invalid_argument if phi is not
  // conditioned at x.
  std::size_t preferred_future_index(Automorphism const& phi,
                                     std::uint32_t       x);

  // Structural criterion: x is left-fast iff the part of phi(x) before its
  // preferred future contains a non-constant letter (symmetrically for
  // right). x must be non-constant.
  bool classify_fast(Automorphism const& phi, std::uint32_t x, Side side);

  // d(n): the distance from the given end of phi^n(x) to the preferred
  // future chain, for n = 1..n_max, with a discrete test for super-linear
  // growth (positive second difference at the end of the window).
  struct FastProfile {
    std::vector<double> distance;
    double              loglog_slope = 0;
    bool                superlinear  = false;
  };

  FastProfile fast_growth_profile(Automorphism const& phi, std::uint32_t x,
                                  Side side, std::size_t n_max = 12);

  // |phi^n(x)| for n = 0..n_max via the length recursion (positive phi).
  std::vector<double> image_lengths(Automorphism const& phi, std::uint32_t x,
                                    std::size_t n_max);

  // Least-squares fits of log|phi^n(x)| against n and against log n over
  // n = 1..n_max; exponential iff the exponential model fits strictly
  // better and the per-step rate exceeds 1.
  struct GrowthFit {
    double rate_slope   = 0;  // slope of log length vs n
    double loglog_slope = 0;  // slope of log length vs log n
    bool   exponential  = false;
  };

  GrowthFit fit_growth(Automorphism const& phi, std::uint32_t x,
                       std::size_t n_max = 12);

  // Log-log slope of |phi^n(x)| on the window [n_max / 2, n_max]; estimates
  // the polynomial degree.
  double polynomial_degree_estimate(Automorphism const& phi, std::uint32_t x,
                                    std::size_t n_max = 512);

}  // namespace corridorlab

#endif  // CORRIDORLAB_STRATA_HPP_
