#ifndef CORRIDORLAB_AUTOMORPHISM_HPP_
#define CORRIDORLAB_AUTOMORPHISM_HPP_

#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "corridorlab/word.hpp"

namespace corridorlab {

  inline constexpr std::size_t kDefaultSymbolCap = 10'000'000;

  // images[i] is the image of generator i + 1.
  using Substitution = std::vector<Word>;

  // An automorphism of F given by its forward and inverse substitutions,
  // both verified on construction. L is the longest forward image, L_inv the
  // longest inverse image and B = 2 L L_inv + 1 the bounded cancellation
  // constant.
  class Automorphism {
   public:
    Alphabet const&     alphabet() const noexcept { return _alphabet; }
    std::size_t         rank() const noexcept { return _alphabet.size(); }
    Substitution const& forward() const noexcept { return _forward; }
    Substitution const& inverse() const noexcept { return _inverse; }

    Word const& image(std::uint32_t index) const {
      return _forward.at(index - 1);
    }
    Word const& inverse_image(std::uint32_t index) const {
      return _inverse.at(index - 1);
    }
    // Image of a signed letter, inverted when the letter is.
    Word image(Letter l) const;
    Word inverse_image(Letter l) const;

    std::size_t L() const noexcept { return _L; }
    std::size_t L_inv() const noexcept { return _L_inv; }
    std::size_t B() const noexcept { return 2 * _L * _L_inv + 1; }

    // The automorphism with forward and inverse swapped.
    Automorphism inverted() const;

    bool operator==(Automorphism const& other) const {
      return _alphabet == other._alphabet && _forward == other._forward
             && _inverse == other._inverse;
    }

   private:
    friend Automorphism make_automorphism(Alphabet, Substitution,
                                          Substitution);
    friend Automorphism power_substitution(Automorphism const&, std::size_t,
                                           std::size_t);
    Automorphism(Alphabet a, Substitution f, Substitution i);

    Alphabet     _alphabet;
    Substitution _forward;
    Substitution _inverse;
    std::size_t  _L;
    std::size_t  _L_inv;
  };

  // Throws InverseMismatch naming the first generator not fixed by
  // forward o inverse or inverse o forward, and std::invalid_argument when
  // an image is empty, unreduced, or the sizes disagree with the alphabet.
  Automorphism make_automorphism(Alphabet alphabet, Substitution forward,
                                 Substitution inverse);
  Automorphism identity_automorphism(Alphabet alphabet);

  Word apply(Automorphism const& phi, Word const& w);
  Word apply_inverse(Automorphism const& phi, Word const& w);
  // Applies phi (k > 0) or phi^-1 (k < 0) |k| times.
  Word apply_power(Automorphism const& phi, Word const& w, long k,
                   std::size_t cap = kDefaultSymbolCap);

  // The unreduced concatenation of the images of the letters of w, with the
  // position in w each letter came from.
  struct NaiveExpansion {
    LetterSeq                letters;
    std::vector<std::size_t> provenance;
  };

  NaiveExpansion naive_expansion(Automorphism const& phi, Word const& w);

  // phi^k with inverse phi^-k, k >= 1. Throws BudgetExceeded when an image
  // would exceed cap letters.
  Automorphism power_substitution(Automorphism const& phi, std::size_t k,
                                  std::size_t cap = kDefaultSymbolCap);

  // True iff no forward image contains an inverse letter.
  bool is_positive(Automorphism const& phi);

  // Memo of phi^j(a_i) for signed exponents j, shared between corridor
  // stacks, normal forms and growth scans. Entries are immutable and handed
  // out as shared pointers, so eviction never invalidates a caller. Safe for
  // concurrent use.
  class ImageCache {
   public:
    explicit ImageCache(Automorphism phi, std::size_t cap = kDefaultSymbolCap);

    Automorphism const& automorphism() const noexcept { return _phi; }
    std::size_t         cap() const noexcept { return _cap; }

    // phi^j(x) for a positive generator x. Throws BudgetExceeded if the
    // image alone exceeds the cap.
    std::shared_ptr<Word const> image(std::uint32_t index, long j);
    // phi^j(w), throwing BudgetExceeded when the result exceeds the cap.
    Word apply(Word const& w, long j);

    std::size_t stored_symbols() const;

   private:
    std::shared_ptr<Word const> lookup(std::uint32_t index, long j) const;

    Automorphism      _phi;
    std::size_t       _cap;
    mutable std::mutex _mutex;
    std::map<std::pair<std::uint32_t, long>, std::shared_ptr<Word const>>
                _memo;
    std::size_t _stored = 0;
  };

  // Text format:
  //
  //   alphabet: a b c
  //   map:
  //     a -> a
  //     b -> b a a
  //   inverse:
  //     a -> a
  //     b -> b a^-1 a^-1
  //
  // '#' starts a comment. Throws ParseError with line and column.
  Automorphism parse_automorphism(std::string_view text);
  Automorphism load_automorphism(std::string const& path);
  std::string  format_automorphism(Automorphism const& phi);

}  // namespace corridorlab

#endif  // CORRIDORLAB_AUTOMORPHISM_HPP_
