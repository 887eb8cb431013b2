#include "corridorlab/automorphism.hpp"

#include <algorithm>
#include <fstream>
#include <optional>
#include <sstream>

#include "corridorlab/errors.hpp"
#include "text_util.hpp"

namespace corridorlab {

  namespace {
    std::size_t longest(Substitution const& s) {
      std::size_t m = 0;
      for (auto const& w : s) {
        m = std::max(m, w.size());
      }
      return m;
    }

    Word substitute(Substitution const& s, Word const& w) {
      ReducedProduct p;
      std::vector<Word> inverted;  // keeps inverted images alive
      inverted.reserve(w.size());
      for (Letter l : w) {
        auto const& img = s[l.index() - 1];
        if (l.positive()) {
          p.append(img.letters());
        } else {
          inverted.push_back(invert(img));
          p.append(inverted.back().letters());
        }
      }
      return p.to_word();
    }
  }  // namespace

  Automorphism::Automorphism(Alphabet a, Substitution f, Substitution i)
      : _alphabet(std::move(a)),
        _forward(std::move(f)),
        _inverse(std::move(i)),
        _L(longest(_forward)),
        _L_inv(longest(_inverse)) {}

  Word Automorphism::image(Letter l) const {
    auto const& w = image(l.index());
    return l.positive() ? w : invert(w);
  }

  Word Automorphism::inverse_image(Letter l) const {
    auto const& w = inverse_image(l.index());
    return l.positive() ? w : invert(w);
  }

  Automorphism Automorphism::inverted() const {
    return Automorphism(_alphabet, _inverse, _forward);
  }

  Automorphism make_automorphism(Alphabet alphabet, Substitution forward,
                                 Substitution inverse) {
    auto const m = alphabet.size();
    if (forward.size() != m || inverse.size() != m) {
      throw std::invalid_argument(
          "substitution size does not match the alphabet");
    }
    for (auto const* s : {&forward, &inverse}) {
      for (auto const& w : *s) {
        if (w.empty()) {
          throw std::invalid_argument("substitution image must be nonempty");
        }
        for (Letter l : w) {
          if (!alphabet.contains(l)) {
            throw std::invalid_argument("image letter outside the alphabet");
          }
        }
      }
    }
    for (std::uint32_t i = 1; i <= m; ++i) {
      Word gen{Letter(i, 1)};
      if (substitute(forward, inverse[i - 1]) != gen
          || substitute(inverse, forward[i - 1]) != gen) {
        throw InverseMismatch(alphabet.name(i));
      }
    }
    return Automorphism(std::move(alphabet), std::move(forward),
                        std::move(inverse));
  }

  Automorphism identity_automorphism(Alphabet alphabet) {
    Substitution s;
    for (auto l : alphabet.generators()) {
      s.push_back(Word{l});
    }
    return make_automorphism(std::move(alphabet), s, s);
  }

  Word apply(Automorphism const& phi, Word const& w) {
    return substitute(phi.forward(), w);
  }

  Word apply_inverse(Automorphism const& phi, Word const& w) {
    return substitute(phi.inverse(), w);
  }

  Word apply_power(Automorphism const& phi, Word const& w, long k,
                   std::size_t cap) {
    Word out = w;
    for (long j = 0; j < (k < 0 ? -k : k); ++j) {
      out = k > 0 ? apply(phi, out) : apply_inverse(phi, out);
      if (out.size() > cap) {
        throw BudgetExceeded("iterated image exceeds "
                             + std::to_string(cap) + " letters");
      }
    }
    return out;
  }

  NaiveExpansion naive_expansion(Automorphism const& phi, Word const& w) {
    NaiveExpansion out;
    for (std::size_t pos = 0; pos < w.size(); ++pos) {
      Letter      l   = w[pos];
      auto const& img = phi.image(l.index());
      if (l.positive()) {
        out.letters.insert(out.letters.end(), img.begin(), img.end());
      } else {
        for (auto it = img.letters().rbegin(); it != img.letters().rend();
             ++it) {
          out.letters.push_back(it->inverse());
        }
      }
      out.provenance.insert(out.provenance.end(), img.size(), pos);
    }
    return out;
  }

  Automorphism power_substitution(Automorphism const& phi, std::size_t k,
                                  std::size_t cap) {
    if (k == 0) {
      throw std::invalid_argument("power must be at least 1");
    }
    Substitution fwd, inv;
    for (auto g : phi.alphabet().generators()) {
      fwd.push_back(apply_power(phi, Word{g}, static_cast<long>(k), cap));
      inv.push_back(apply_power(phi, Word{g}, -static_cast<long>(k), cap));
    }
    // phi^k and phi^-k are inverse by construction.
    return Automorphism(phi.alphabet(), std::move(fwd), std::move(inv));
  }

  bool is_positive(Automorphism const& phi) {
    return std::all_of(phi.forward().begin(), phi.forward().end(),
                       [](Word const& w) { return w.is_positive(); });
  }

  ////////////////////////////////////////////////////////////////////////
  // ImageCache
  ////////////////////////////////////////////////////////////////////////

  ImageCache::ImageCache(Automorphism phi, std::size_t cap)
      : _phi(std::move(phi)), _cap(cap) {}

  std::shared_ptr<Word const> ImageCache::lookup(std::uint32_t index,
                                                 long j) const {
    std::lock_guard lock(_mutex);
    auto            it = _memo.find({index, j});
    return it == _memo.end() ? nullptr : it->second;
  }

  std::shared_ptr<Word const> ImageCache::image(std::uint32_t index, long j) {
    if (j == 0) {
      return std::make_shared<Word const>(Word{Letter(index, 1)});
    }
    if (auto hit = lookup(index, j)) {
      return hit;
    }
    // phi^j(x) = phi^{+-1}(phi^{j -+ 1}(x)); the recursion depth is |j|.
    long const step = j > 0 ? 1 : -1;
    auto       prev = image(index, j - step);
    Word       next = step > 0 ? corridorlab::apply(_phi, *prev)
                               : corridorlab::apply_inverse(_phi, *prev);
    if (next.size() > _cap) {
      throw BudgetExceeded("image of " + _phi.alphabet().name(index)
                           + " under power " + std::to_string(j)
                           + " exceeds " + std::to_string(_cap) + " letters");
    }
    auto ptr = std::make_shared<Word const>(std::move(next));
    std::lock_guard lock(_mutex);
    if (_stored + ptr->size() > _cap) {
      // Budget accounting: drop everything; holders keep their pointers.
      _memo.clear();
      _stored = 0;
    }
    auto [it, inserted] = _memo.emplace(std::pair{index, j}, ptr);
    if (inserted) {
      _stored += ptr->size();
    }
    return it->second;
  }

  Word ImageCache::apply(Word const& w, long j) {
    if (j == 0) {
      return w;
    }
    std::vector<std::shared_ptr<Word const>> images;
    std::vector<Word>                        inverted;
    images.reserve(w.size());
    inverted.reserve(w.size());
    ReducedProduct p;
    for (Letter l : w) {
      images.push_back(image(l.index(), j));
      if (l.positive()) {
        p.append(images.back()->letters());
      } else {
        inverted.push_back(invert(*images.back()));
        p.append(inverted.back().letters());
      }
    }
    if (p.size() > _cap) {
      throw BudgetExceeded("word image exceeds " + std::to_string(_cap)
                           + " letters");
    }
    return p.to_word();
  }

  std::size_t ImageCache::stored_symbols() const {
    std::lock_guard lock(_mutex);
    return _stored;
  }

  ////////////////////////////////////////////////////////////////////////
  // Text format
  ////////////////////////////////////////////////////////////////////////

  using detail::column_of;
  using detail::trim;

  Automorphism parse_automorphism(std::string_view text) {
    enum class Section { none, map, inverse };
    std::vector<std::string> names;
    bool                     have_alphabet = false;
    std::size_t              alphabet_line = 0;
    struct Entry {
      std::string             name;
      std::vector<detail::Token> tokens;
      std::size_t             line;
      std::size_t             column;
    };
    std::vector<Entry> map_entries, inv_entries;
    bool               have_map = false, have_inverse = false;
    Section            section = Section::none;

    std::size_t lineno = 0;
    std::size_t pos    = 0;
    while (pos <= text.size()) {
      auto end = text.find('\n', pos);
      if (end == std::string_view::npos) {
        end = text.size();
      }
      std::string_view raw = text.substr(pos, end - pos);
      pos                  = end + 1;
      ++lineno;
      auto hash = raw.find('#');
      auto line = trim(hash == std::string_view::npos ? raw
                                                      : raw.substr(0, hash));
      if (line.empty()) {
        if (end == text.size()) {
          break;
        }
        continue;
      }
      auto col = column_of(raw, line);
      if (line.starts_with("alphabet:")) {
        auto rest = line.substr(9);
        for (auto const& tok :
             detail::tokenize(rest, lineno, column_of(raw, rest) - 1)) {
          if (tok.exponent != 1) {
            throw ParseError(lineno, tok.column, "malformed generator name");
          }
          names.push_back(tok.name);
        }
        have_alphabet = true;
        alphabet_line = lineno;
        section       = Section::none;
      } else if (line == "map:") {
        have_map = true;
        section  = Section::map;
      } else if (line == "inverse:") {
        have_inverse = true;
        section      = Section::inverse;
      } else {
        auto arrow = line.find("->");
        if (section == Section::none || arrow == std::string_view::npos) {
          throw ParseError(lineno, col,
                           section == Section::none
                               ? "expected 'alphabet:', 'map:' or 'inverse:'"
                               : "expected 'name -> word'");
        }
        auto lhs = trim(line.substr(0, arrow));
        auto rhs = line.substr(arrow + 2);
        if (lhs.empty() || lhs.find_first_of(" \t") != std::string_view::npos) {
          throw ParseError(lineno, col, "expected a single generator name");
        }
        Entry e{std::string(lhs),
                detail::tokenize(rhs, lineno, column_of(raw, rhs) - 1), lineno,
                col};
        (section == Section::map ? map_entries : inv_entries)
            .push_back(std::move(e));
      }
      if (end == text.size()) {
        break;
      }
    }
    if (!have_alphabet) {
      throw ParseError(lineno, 1, "missing 'alphabet:'");
    }
    if (!have_map) {
      throw ParseError(lineno, 1, "missing 'map:'");
    }
    if (!have_inverse) {
      throw ParseError(lineno, 1, "missing 'inverse:'");
    }
    std::optional<Alphabet> alphabet;
    try {
      alphabet.emplace(names);
    } catch (std::invalid_argument const& e) {
      throw ParseError(alphabet_line, 1, e.what());
    }

    auto build = [&](std::vector<Entry> const& entries, char const* what) {
      Substitution s(alphabet->size());
      std::vector<bool> seen(alphabet->size(), false);
      for (auto const& e : entries) {
        auto i = alphabet->find(e.name);
        if (i == 0) {
          throw ParseError(e.line, e.column,
                           "unknown generator \"" + e.name + "\"");
        }
        if (seen[i - 1]) {
          throw ParseError(e.line, e.column,
                           "duplicate entry for \"" + e.name + "\"");
        }
        seen[i - 1] = true;
        LetterSeq letters;
        for (auto const& tok : e.tokens) {
          auto j = alphabet->find(tok.name);
          if (j == 0) {
            throw ParseError(e.line, tok.column,
                             "unknown generator \"" + tok.name + "\"");
          }
          int n = tok.exponent < 0 ? -tok.exponent : tok.exponent;
          for (int r = 0; r < n; ++r) {
            letters.emplace_back(j, tok.exponent < 0 ? -1 : 1);
          }
        }
        s[i - 1] = free_reduce(letters);
        if (s[i - 1].empty()) {
          throw ParseError(e.line, e.column, "image must be nonempty");
        }
      }
      for (std::uint32_t i = 1; i <= alphabet->size(); ++i) {
        if (!seen[i - 1]) {
          throw ParseError(lineno, 1,
                           std::string("missing ") + what + " entry for \""
                               + alphabet->name(i) + "\"");
        }
      }
      return s;
    };
    auto fwd = build(map_entries, "map");
    auto inv = build(inv_entries, "inverse");
    return make_automorphism(std::move(*alphabet), std::move(fwd),
                             std::move(inv));
  }

  Automorphism load_automorphism(std::string const& path) {
    return parse_automorphism(detail::read_file(path));
  }

  std::string format_automorphism(Automorphism const& phi) {
    auto const&        a = phi.alphabet();
    std::ostringstream out;
    out << "alphabet:";
    for (auto const& n : a.names()) {
      out << ' ' << n;
    }
    out << "\nmap:\n";
    for (std::uint32_t i = 1; i <= a.size(); ++i) {
      out << "  " << a.name(i) << " -> " << a.format(phi.image(i)) << '\n';
    }
    out << "inverse:\n";
    for (std::uint32_t i = 1; i <= a.size(); ++i) {
      out << "  " << a.name(i) << " -> " << a.format(phi.inverse_image(i))
          << '\n';
    }
    return out.str();
  }

}  // namespace corridorlab
