#ifndef CORRIDORLAB_WORD_HPP_
#define CORRIDORLAB_WORD_HPP_

// Words in a free group F(a_1, ..., a_m): letters, reduced words, cyclic
// words and the alphabet that names the generators.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace corridorlab {

  // A generator a_i or its inverse, stored as the signed integer +i or -i.
  // Generators are numbered from 1.
  class Letter {
   public:
    constexpr Letter() = default;

    constexpr Letter(std::uint32_t index, int sign)
        : _code(sign < 0 ? -static_cast<std::int32_t>(index)
                         : static_cast<std::int32_t>(index)) {}

    static constexpr Letter from_code(std::int32_t code) {
      Letter l;
      l._code = code;
      return l;
    }

    constexpr std::uint32_t index() const noexcept {
      return static_cast<std::uint32_t>(_code < 0 ? -_code : _code);
    }
    constexpr int sign() const noexcept { return _code < 0 ? -1 : 1; }
    constexpr bool positive() const noexcept { return _code > 0; }
    constexpr std::int32_t code() const noexcept { return _code; }

    constexpr Letter inverse() const noexcept { return from_code(-_code); }

    constexpr bool is_inverse_of(Letter other) const noexcept {
      return _code == -other._code;
    }

    constexpr bool operator==(Letter const&) const = default;

    // Ordered by (index, sign).
    constexpr std::strong_ordering operator<=>(Letter const& other) const {
      if (auto c = index() <=> other.index(); c != 0) {
        return c;
      }
      return sign() <=> other.sign();
    }

   private:
    std::int32_t _code = 0;
  };

  using LetterSeq = std::vector<Letter>;

  // A freely reduced word. Every constructor reduces, so no Word ever holds
  // an adjacent pair x x^-1.
  class Word {
   public:
    using const_iterator = LetterSeq::const_iterator;

    Word() = default;
    explicit Word(std::span<Letter const> letters);
    Word(std::initializer_list<Letter> letters)
        : Word(std::span<Letter const>(letters.begin(), letters.size())) {}

    // Wraps letters already known to be reduced; checked in debug builds.
    static Word from_reduced(LetterSeq letters);

    std::size_t size() const noexcept { return _letters.size(); }
    bool empty() const noexcept { return _letters.empty(); }
    Letter operator[](std::size_t i) const { return _letters[i]; }
    Letter front() const { return _letters.front(); }
    Letter back() const { return _letters.back(); }
    const_iterator begin() const noexcept { return _letters.begin(); }
    const_iterator end() const noexcept { return _letters.end(); }
    std::span<Letter const> letters() const noexcept { return _letters; }

    // Subword [first, last).
    Word slice(std::size_t first, std::size_t last) const;

    bool is_positive() const noexcept;

    bool operator==(Word const&) const = default;
    std::strong_ordering operator<=>(Word const& other) const;

   private:
    LetterSeq _letters;
  };

  // Cyclically reduced word stored as its lexicographically least rotation.
  class CyclicWord {
   public:
    CyclicWord() = default;
    // w must be cyclically reduced.
    explicit CyclicWord(Word const& w);

    Word const& representative() const noexcept { return _rep; }
    std::size_t size() const noexcept { return _rep.size(); }
    // Offset r such that representative = rotate_left(input, r).
    std::size_t rotation() const noexcept { return _rotation; }

    bool operator==(CyclicWord const& other) const {
      return _rep == other._rep;
    }

   private:
    Word        _rep;
    std::size_t _rotation = 0;
  };

  struct CyclicReduction {
    CyclicWord core;
    Word       conjugator;  // w = conjugator * core * conjugator^-1
  };

  Word free_reduce(std::span<Letter const> raw);
  Word concat(Word const& w1, Word const& w2);
  Word invert(Word const& w);
  bool is_cyclically_reduced(Word const& w);
  CyclicReduction cyclic_reduce(Word const& w);
  // Length of the cyclic reduction, ||w||.
  std::size_t cyclic_norm(Word const& w);
  Word power(Word const& w, std::size_t k);

  // Reduced product of a sequence of reduced pieces, held as views into the
  // pieces. Cancellation costs O(letters cancelled), so lengths of products
  // of long words are cheap. The pieces must outlive the product.
  class ReducedProduct {
   public:
    void append(std::span<Letter const> piece);
    std::size_t size() const noexcept { return _size; }
    // Removes letters from both ends until the product is cyclically
    // reduced and returns the removed count per side.
    std::size_t cyclically_reduce();
    Word to_word() const;

   private:
    struct Segment {
      Letter const* first;
      Letter const* last;
    };
    std::deque<Segment> _segments;
    std::size_t         _size = 0;
  };

  // Generator names. The token "t" is reserved for the stable letter of a
  // mapping torus and is rejected.
  class Alphabet {
   public:
    explicit Alphabet(std::vector<std::string> names);

    std::size_t size() const noexcept { return _names.size(); }
    std::vector<std::string> const& names() const noexcept { return _names; }
    std::string const& name(std::uint32_t index) const {
      return _names.at(index - 1);
    }
    // 1-based index of a generator name, or 0 if unknown.
    std::uint32_t find(std::string_view name) const;
    bool contains(Letter l) const noexcept {
      return l.index() >= 1 && l.index() <= _names.size();
    }

    Letter letter(std::string_view name, int sign = 1) const;
    std::vector<Letter> generators() const;

    LetterSeq parse_letters(std::string_view text) const;
    Word      parse(std::string_view text) const;
    std::string format(std::span<Letter const> letters) const;
    std::string format(Word const& w) const { return format(w.letters()); }
    std::string format(Letter l) const;

    bool operator==(Alphabet const& other) const {
      return _names == other._names;
    }

   private:
    std::vector<std::string>                       _names;
    std::unordered_map<std::string, std::uint32_t> _lookup;
  };

  namespace detail {
    // One token of the word syntax: a name with an exponent, e.g. "b^-1".
    struct Token {
      std::string name;
      int         exponent;
      std::size_t column;  // 1-based
    };
    // Splits on whitespace; accepts "x", "x^-1" and "x^k" for nonzero k.
    // Throws ParseError (line 1) on malformed exponents.
    std::vector<Token> tokenize(std::string_view text, std::size_t line = 1,
                                std::size_t column_offset = 0);
  }  // namespace detail

}  // namespace corridorlab

template <>
struct std::hash<corridorlab::Word> {
  std::size_t operator()(corridorlab::Word const& w) const noexcept;
};

#endif  // CORRIDORLAB_WORD_HPP_
