#ifndef CORRIDORLAB_ISOPERIMETRY_HPP_
#define CORRIDORLAB_ISOPERIMETRY_HPP_

// Areas of null-homotopic words in the mapping torus: t-complete
// bracketings, least area over non-crossing t-pairings, Dehn function and
// corridor length scans, and the Brinkmann length inequality.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "corridorlab/corridor.hpp"

namespace corridorlab {

  inline constexpr std::size_t kDefaultTCap = 16;

  ////////////////////////////////////////////////////////////////////////
  // Bracketings

  struct Bracket {
    std::size_t open  = 0;  // position of the opening t^+-1 in w
    std::size_t close = 0;  // position of the closing t^-+1
    Word        bottom;     // corridor bottom: u for t^-1 u t, phi^-1(u) for t u t^-1
    Word        value;      // the content as an element of F
    std::size_t norm = 0;   // |value|
  };

  struct Bracketing {
    std::vector<Bracket> brackets;  // in the order they were pinched
    bool                 complete         = false;
    std::size_t          max_content_norm = 0;

    // Sum of corridor bottoms: the area of the diagram this bracketing
    // describes.
    std::size_t area() const;
  };

  // Repeatedly pinches the leftmost pair of adjacent opposite t-letters,
  // replacing t^-1 u t by phi(u) and t u t^-1 by phi^-1(u). Throws
  // NotIdentity and BudgetExceeded.
  Bracketing t_complete_bracketing(MappingTorus const& P, MixedWord const& w);

  // Empty when the bracketing is complete, pairwise nested or disjoint,
  // its values are correct and substituting them leaves a freely trivial
  // word; otherwise one message per problem.
  std::vector<std::string> audit_bracketing(MappingTorus const& P,
                                            MixedWord const&    w,
                                            Bracketing const&   b);

  ////////////////////////////////////////////////////////////////////////
  // Least area

  struct AreaCertificate {
    std::vector<std::pair<std::size_t, std::size_t>> pairing;  // t positions
    std::vector<Word> bottoms;  // per pair
    std::size_t       area    = 0;
    bool              minimal = false;
  };

  // Least area over non-crossing pairings of opposite t-letters; each pair
  // costs the length of its reduced corridor bottom. Throws NotIdentity,
  // and BudgetExceeded when w has more than t_cap t-letters.
  AreaCertificate min_area(MappingTorus const& P, MixedWord const& w,
                           std::size_t t_cap = kDefaultTCap);

  // Empty when the pairing is non-crossing and opposite-signed, the bottoms
  // match the pinched contents, the residual is freely trivial and the
  // bottoms add up to the area.
  std::vector<std::string> audit_certificate(MappingTorus const&    P,
                                             MixedWord const&       w,
                                             AreaCertificate const& c);

  ////////////////////////////////////////////////////////////////////////
  // Scans

  struct AreaSample {
    std::size_t length = 0;
    std::size_t area   = 0;
    bool        exact  = false;  // false: bracketing upper bound
    std::size_t longest_corridor = 0;
  };

  struct ScanRow {
    std::size_t n = 0;
    std::size_t count = 0;
    std::size_t max_area = 0;
    double      mean_area = 0;
    bool        exact = true;  // every sample in the row was exact
  };

  struct DehnScan {
    std::vector<AreaSample> samples;
    std::vector<ScanRow>    rows;  // by n = |w|, within [n_min, n_max]
    // Log-log slope of the largest exact area against n, over rows with
    // positive area.
    std::optional<double> slope;
    std::vector<std::string> failures;
  };

  DehnScan dehn_scan(MappingTorus const& P, std::vector<MixedWord> const& words,
                     std::size_t n_min, std::size_t n_max,
                     std::size_t t_cap = kDefaultTCap);

  struct CorridorBound {
    std::vector<double> ratios;  // longest corridor / |w| per exact word
    double              max_ratio = 0;
  };

  CorridorBound corridor_bound_estimate(MappingTorus const&           P,
                                        std::vector<MixedWord> const& words,
                                        std::size_t t_cap = kDefaultTCap);

  // Families of null-homotopic words.
  // t^-n x^-n t^n x^n; null-homotopic when phi(x) = x.
  MixedWord power_commutator_word(MappingTorus const& P, std::uint32_t x,
                                  std::size_t n);
  // t^-n x t^n phi^n(x)^-1.
  MixedWord conjugation_word(MappingTorus const& P, std::uint32_t x,
                             std::size_t n);

  ////////////////////////////////////////////////////////////////////////
  // Brinkmann inequality

  enum class NormVariant { cyclic, word };
  char const* to_string(NormVariant v);

  struct BrinkmannEntry {
    std::size_t word = 0;  // index into the word list
    std::size_t i = 0, N = 0;
    std::size_t num = 0;  // ||phi^i(w)||
    std::size_t den = 0;  // ||w|| + ||phi^N(w)||

    double ratio() const { return den == 0 ? 0 : double(num) / double(den); }
  };

  struct BrinkmannReport {
    NormVariant                 variant = NormVariant::word;
    std::size_t                 N_max   = 0;
    std::vector<BrinkmannEntry> entries;
    // The largest ratio, as a fraction.
    std::size_t K_num = 0, K_den = 1;

    double K_hat() const { return double(K_num) / double(K_den); }
  };

  // Ratios for every word and 0 <= i <= N <= N_max. Throws BudgetExceeded.
  BrinkmannReport brinkmann_check(Automorphism const&      phi,
                                  std::vector<Word> const& words,
                                  std::size_t N_max, NormVariant variant,
                                  std::size_t cap = kDefaultSymbolCap);

  struct HoldoutResult {
    BrinkmannReport train;
    std::size_t     holdout_size = 0;
    std::size_t     checked      = 0;
    // Holdout entries with ratio above the training maximum.
    std::vector<BrinkmannEntry> violations;
  };

  // Fits K on `train` and re-checks the inequality on `holdout`.
  HoldoutResult brinkmann_holdout(Automorphism const&      phi,
                                  std::vector<Word> const& train,
                                  std::vector<Word> const& holdout,
                                  std::size_t N_max, NormVariant variant);

  // Every nonempty reduced word of length <= n, shortlex.
  std::vector<Word> all_reduced_words(std::size_t rank, std::size_t n);

  // Splits words into two disjoint halves of equal size (one extra in
  // train when odd) by a seeded shuffle, keeping every word of length 1 in
  // train.
  std::pair<std::vector<Word>, std::vector<Word>> holdout_split(
      std::vector<Word> words, std::uint64_t seed);

  ////////////////////////////////////////////////////////////////////////
  // Sampling

  // Freely reduced null-homotopic words of length <= n, alternating between
  // products of conjugates of relators and random t-balanced words closed
  // up by the inverse of their normal form. Deterministic per seed.
  std::vector<MixedWord> sample_null_words(MappingTorus const& P,
                                           std::size_t n, std::size_t count,
                                           std::uint64_t seed);

  // Free reduction in the free group on the generators and t.
  MixedWord free_reduce_mixed(MixedWord const& w);

  ////////////////////////////////////////////////////////////////////////
  // Fits

  // Least-squares c0 + c1 x + c2 x^2.
  struct QuadraticFit {
    double c0 = 0, c1 = 0, c2 = 0;
  };
  QuadraticFit quadratic_fit(std::vector<double> const& x,
                             std::vector<double> const& y);

  // Least-squares slope of log y against log x over points with x, y > 0.
  std::optional<double> loglog_slope(std::vector<double> const& x,
                                     std::vector<double> const& y);

}  // namespace corridorlab

#endif  // CORRIDORLAB_ISOPERIMETRY_HPP_
