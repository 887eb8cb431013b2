#include "corridorlab/word.hpp"

#include <algorithm>
#include <cassert>
#include <cctype>
#include <charconv>

#include "corridorlab/errors.hpp"

namespace corridorlab {

  Word::Word(std::span<Letter const> letters) {
    _letters.reserve(letters.size());
    for (Letter l : letters) {
      if (!_letters.empty() && _letters.back().is_inverse_of(l)) {
        _letters.pop_back();
      } else {
        _letters.push_back(l);
      }
    }
  }

  Word Word::from_reduced(LetterSeq letters) {
    Word w;
    w._letters = std::move(letters);
#ifndef NDEBUG
    for (std::size_t i = 1; i < w._letters.size(); ++i) {
      assert(!w._letters[i - 1].is_inverse_of(w._letters[i]));
    }
#endif
    return w;
  }

  Word Word::slice(std::size_t first, std::size_t last) const {
    last = std::min(last, _letters.size());
    if (first >= last) {
      return Word();
    }
    return from_reduced(LetterSeq(_letters.begin() + first,
                                  _letters.begin() + last));
  }

  bool Word::is_positive() const noexcept {
    return std::all_of(_letters.begin(), _letters.end(),
                       [](Letter l) { return l.positive(); });
  }

  std::strong_ordering Word::operator<=>(Word const& other) const {
    return std::lexicographical_compare_three_way(
        _letters.begin(), _letters.end(), other._letters.begin(),
        other._letters.end());
  }

  ////////////////////////////////////////////////////////////////////////
  // CyclicWord
  ////////////////////////////////////////////////////////////////////////

  CyclicWord::CyclicWord(Word const& w) {
    assert(is_cyclically_reduced(w));
    auto const  n    = w.size();
    auto const  s    = w.letters();
    std::size_t best = 0;
    // Quadratic scan; cyclic words here are short.
    for (std::size_t r = 1; r < n; ++r) {
      for (std::size_t i = 0; i < n; ++i) {
        auto a = s[(r + i) % n];
        auto b = s[(best + i) % n];
        if (a != b) {
          if (a < b) {
            best = r;
          }
          break;
        }
      }
    }
    LetterSeq rotated;
    rotated.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      rotated.push_back(s[(best + i) % n]);
    }
    _rep      = Word::from_reduced(std::move(rotated));
    _rotation = best;
  }

  ////////////////////////////////////////////////////////////////////////
  // Free functions
  ////////////////////////////////////////////////////////////////////////

  Word free_reduce(std::span<Letter const> raw) {
    return Word(raw);
  }

  Word concat(Word const& w1, Word const& w2) {
    auto        a = w1.letters();
    auto        b = w2.letters();
    std::size_t k = 0;
    while (k < a.size() && k < b.size()
           && a[a.size() - 1 - k].is_inverse_of(b[k])) {
      ++k;
    }
    LetterSeq out;
    out.reserve(a.size() + b.size() - 2 * k);
    out.insert(out.end(), a.begin(), a.end() - k);
    out.insert(out.end(), b.begin() + k, b.end());
    return Word::from_reduced(std::move(out));
  }

  Word invert(Word const& w) {
    LetterSeq out;
    out.reserve(w.size());
    for (auto it = w.letters().rbegin(); it != w.letters().rend(); ++it) {
      out.push_back(it->inverse());
    }
    return Word::from_reduced(std::move(out));
  }

  bool is_cyclically_reduced(Word const& w) {
    return w.size() < 2 || !w.front().is_inverse_of(w.back());
  }

  CyclicReduction cyclic_reduce(Word const& w) {
    std::size_t k = 0;
    auto const  n = w.size();
    while (2 * k + 1 < n && w[k].is_inverse_of(w[n - 1 - k])) {
      ++k;
    }
    Word       conj = w.slice(0, k);
    Word       mid  = w.slice(k, n - k);
    CyclicWord core(mid);
    // Rotating the core by r letters moves its first r letters into the
    // conjugator: c (x y) c^-1 = (c x) (y x) (c x)^-1.
    conj = concat(conj, mid.slice(0, core.rotation()));
    return {std::move(core), std::move(conj)};
  }

  std::size_t cyclic_norm(Word const& w) {
    std::size_t k = 0;
    auto const  n = w.size();
    while (2 * k + 1 < n && w[k].is_inverse_of(w[n - 1 - k])) {
      ++k;
    }
    return n - 2 * k;
  }

  Word power(Word const& w, std::size_t k) {
    Word result;
    for (std::size_t i = 0; i < k; ++i) {
      result = concat(result, w);
    }
    return result;
  }

  ////////////////////////////////////////////////////////////////////////
  // ReducedProduct
  ////////////////////////////////////////////////////////////////////////

  void ReducedProduct::append(std::span<Letter const> piece) {
    Segment cur{piece.data(), piece.data() + piece.size()};
    while (cur.first != cur.last && !_segments.empty()) {
      auto& top = _segments.back();
      if (!(top.last - 1)->is_inverse_of(*cur.first)) {
        break;
      }
      --top.last;
      ++cur.first;
      _size -= 1;
      if (top.first == top.last) {
        _segments.pop_back();
      }
    }
    if (cur.first != cur.last) {
      _size += static_cast<std::size_t>(cur.last - cur.first);
      _segments.push_back(cur);
    }
  }

  std::size_t ReducedProduct::cyclically_reduce() {
    std::size_t removed = 0;
    while (_size >= 2) {
      auto& head = _segments.front();
      auto& tail = _segments.back();
      if (!head.first->is_inverse_of(*(tail.last - 1))) {
        break;
      }
      ++head.first;
      if (head.first == head.last) {
        _segments.pop_front();
      }
      // head and tail may alias when one segment remains; re-fetch.
      auto& t2 = _segments.back();
      --t2.last;
      if (t2.first == t2.last) {
        _segments.pop_back();
      }
      _size -= 2;
      ++removed;
    }
    return removed;
  }

  Word ReducedProduct::to_word() const {
    LetterSeq out;
    out.reserve(_size);
    for (auto const& s : _segments) {
      out.insert(out.end(), s.first, s.last);
    }
    return Word::from_reduced(std::move(out));
  }

  ////////////////////////////////////////////////////////////////////////
  // Alphabet
  ////////////////////////////////////////////////////////////////////////

  Alphabet::Alphabet(std::vector<std::string> names) : _names(std::move(names)) {
    if (_names.empty()) {
      throw std::invalid_argument("alphabet must not be empty");
    }
    for (std::size_t i = 0; i < _names.size(); ++i) {
      auto const& n = _names[i];
      if (n.empty() || n == "t" || n.find('^') != std::string::npos
          || std::any_of(n.begin(), n.end(), [](unsigned char c) {
               return std::isspace(c);
             })) {
        throw std::invalid_argument("invalid generator name \"" + n + "\"");
      }
      if (!_lookup.emplace(n, static_cast<std::uint32_t>(i + 1)).second) {
        throw std::invalid_argument("duplicate generator name \"" + n + "\"");
      }
    }
  }

  std::uint32_t Alphabet::find(std::string_view name) const {
    auto it = _lookup.find(std::string(name));
    return it == _lookup.end() ? 0 : it->second;
  }

  Letter Alphabet::letter(std::string_view name, int sign) const {
    auto i = find(name);
    if (i == 0) {
      throw std::invalid_argument("unknown generator \"" + std::string(name)
                                  + "\"");
    }
    return Letter(i, sign);
  }

  std::vector<Letter> Alphabet::generators() const {
    std::vector<Letter> out;
    for (std::uint32_t i = 1; i <= _names.size(); ++i) {
      out.emplace_back(i, 1);
    }
    return out;
  }

  LetterSeq Alphabet::parse_letters(std::string_view text) const {
    LetterSeq out;
    for (auto const& tok : detail::tokenize(text)) {
      auto i = find(tok.name);
      if (i == 0) {
        throw ParseError(1, tok.column,
                         "unknown generator \"" + tok.name + "\"");
      }
      int n = tok.exponent < 0 ? -tok.exponent : tok.exponent;
      for (int j = 0; j < n; ++j) {
        out.emplace_back(i, tok.exponent < 0 ? -1 : 1);
      }
    }
    return out;
  }

  Word Alphabet::parse(std::string_view text) const {
    return free_reduce(parse_letters(text));
  }

  std::string Alphabet::format(Letter l) const {
    auto const& n = name(l.index());
    return l.positive() ? n : n + "^-1";
  }

  std::string Alphabet::format(std::span<Letter const> letters) const {
    std::string out;
    for (Letter l : letters) {
      if (!out.empty()) {
        out += ' ';
      }
      out += format(l);
    }
    return out;
  }

  namespace detail {
    std::vector<Token> tokenize(std::string_view text, std::size_t line,
                                std::size_t column_offset) {
      std::vector<Token> out;
      std::size_t        i = 0;
      while (i < text.size()) {
        if (std::isspace(static_cast<unsigned char>(text[i]))) {
          ++i;
          continue;
        }
        std::size_t start = i;
        while (i < text.size()
               && !std::isspace(static_cast<unsigned char>(text[i]))) {
          ++i;
        }
        std::string_view tok = text.substr(start, i - start);
        std::size_t      col = column_offset + start + 1;
        auto             hat = tok.find('^');
        int              exp = 1;
        if (hat != std::string_view::npos) {
          auto num = tok.substr(hat + 1);
          auto [ptr, ec]
              = std::from_chars(num.data(), num.data() + num.size(), exp);
          if (ec != std::errc() || ptr != num.data() + num.size() || exp == 0
              || hat == 0) {
            throw ParseError(line, col,
                             "malformed token \"" + std::string(tok) + "\"");
          }
          tok = tok.substr(0, hat);
        }
        out.push_back({std::string(tok), exp, col});
      }
      return out;
    }
  }  // namespace detail

}  // namespace corridorlab

std::size_t std::hash<corridorlab::Word>::operator()(
    corridorlab::Word const& w) const noexcept {
  std::size_t h = 1469598103934665603ull;
  for (auto l : w) {
    h ^= static_cast<std::size_t>(static_cast<std::uint32_t>(l.code()));
    h *= 1099511628211ull;
  }
  return h;
}
