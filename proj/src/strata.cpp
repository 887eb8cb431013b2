#include "corridorlab/strata.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "corridorlab/errors.hpp"

namespace corridorlab {

  char const* to_string(LetterKind k) {
    switch (k) {
      case LetterKind::constant: return "constant";
      case LetterKind::parabolic: return "parabolic";
      case LetterKind::exponential: return "exponential";
    }
    return "?";
  }

  char const* to_string(GrowthKind k) {
    switch (k) {
      case GrowthKind::constant: return "constant";
      case GrowthKind::polynomial: return "polynomial";
      case GrowthKind::exponential: return "exponential";
    }
    return "?";
  }

  char const* to_string(Side s) {
    return s == Side::left ? "left" : "right";
  }

  namespace {

    using Matrix = std::vector<std::vector<std::uint64_t>>;

    constexpr std::uint64_t kSaturate = std::uint64_t(1) << 40;

    void require_positive(Automorphism const& phi) {
      if (!is_positive(phi)) {
        throw NotPositive();
      }
    }

    // m[x][y] = number of occurrences of y in phi(x).
    Matrix occurrence_matrix(Automorphism const& phi) {
      auto   n = phi.rank();
      Matrix m(n, std::vector<std::uint64_t>(n, 0));
      for (std::size_t x = 0; x < n; ++x) {
        for (auto l : phi.forward()[x]) {
          ++m[x][l.index() - 1];
        }
      }
      return m;
    }

    Matrix multiply(Matrix const& a, Matrix const& b) {
      auto   n = a.size();
      Matrix c(n, std::vector<std::uint64_t>(n, 0));
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < n; ++k) {
          if (a[i][k] == 0) {
            continue;
          }
          for (std::size_t j = 0; j < n; ++j) {
            auto v  = std::min<std::uint64_t>(a[i][k] * b[k][j], kSaturate);
            c[i][j] = std::min<std::uint64_t>(c[i][j] + v, kSaturate);
          }
        }
      }
      return c;
    }

    Matrix matrix_power(Matrix const& m, std::size_t k) {
      auto result = m;
      for (std::size_t i = 1; i < k; ++i) {
        result = multiply(result, m);
      }
      return result;
    }

    Adjacency arcs_of(Matrix const& m) {
      Adjacency arcs(m.size());
      for (std::size_t x = 0; x < m.size(); ++x) {
        for (std::size_t y = 0; y < m.size(); ++y) {
          if (m[x][y] != 0) {
            arcs[x].push_back(y);
          }
        }
      }
      return arcs;
    }

    std::vector<std::uint32_t> to_generators(std::vector<std::size_t> const& v) {
      std::vector<std::uint32_t> out;
      out.reserve(v.size());
      for (auto i : v) {
        out.push_back(static_cast<std::uint32_t>(i + 1));
      }
      return out;
    }

    StrataReport supports_and_strata(Adjacency const& arcs) {
      StrataReport r;
      auto const   n = arcs.size();
      r.letters.resize(n);
      for (std::size_t x = 0; x < n; ++x) {
        r.letters[x].index = static_cast<std::uint32_t>(x + 1);
        r.letters[x].supp  = to_generators(reachable(arcs, x));
      }
      for (auto const& c : strongly_connected_components(arcs)) {
        auto gens = to_generators(c);
        for (auto v : c) {
          r.letters[v].stratum = gens;
        }
        r.strata.push_back(std::move(gens));
      }
      return r;
    }

    // Extremal letters from a subset S in phi^j(x) for j = 0..depth.
    // hits[j][y]: phi^j(y) contains a letter of S. table[j][y]: the
    // extremal such letter, 0 if none.
    class ExtremalTables {
     public:
      ExtremalTables(Automorphism const& phi, std::vector<bool> const& subset,
                     Side side, std::size_t depth) {
        auto n = phi.rank();
        _table.assign(depth + 1, std::vector<std::uint32_t>(n, 0));
        std::vector<bool> hits(subset), next(n);
        for (std::size_t y = 0; y < n; ++y) {
          if (subset[y]) {
            _table[0][y] = static_cast<std::uint32_t>(y + 1);
          }
        }
        for (std::size_t j = 1; j <= depth; ++j) {
          for (std::size_t y = 0; y < n; ++y) {
            auto const& img = phi.forward()[y];
            next[y]         = false;
            for (std::size_t s = 0; s < img.size(); ++s) {
              auto z = img[side == Side::left ? s : img.size() - 1 - s];
              if (hits[z.index() - 1]) {
                next[y]      = true;
                _table[j][y] = _table[j - 1][z.index() - 1];
                break;
              }
            }
          }
          std::swap(hits, next);
        }
      }

      std::uint32_t at(std::size_t j, std::uint32_t x) const {
        return _table[j][x - 1];
      }

     private:
      std::vector<std::vector<std::uint32_t>> _table;
    };

    std::string gen_name(Automorphism const& phi, std::uint32_t x) {
      return x == 0 ? std::string("none") : phi.alphabet().name(x);
    }

    std::string set_name(Automorphism const&               phi,
                         std::vector<std::uint32_t> const& s) {
      std::string out = "{";
      for (std::size_t i = 0; i < s.size(); ++i) {
        out += (i ? "," : "") + phi.alphabet().name(s[i]);
      }
      return out + "}";
    }

    // Iterates compared against phi_0 = phi^k in conditions (4) and (5).
    constexpr std::size_t kIterates = 8;

    // Checks the extremal-letter tables of phi^{jk} against phi^k for
    // j = 2..kIterates. Returns a witness of the first failure, or "".
    std::string compare_tables(Automorphism const& phi, std::size_t k,
                               std::vector<bool> const& subset,
                               std::vector<bool> const& relevant,
                               std::string const&       what) {
      for (auto side : {Side::left, Side::right}) {
        ExtremalTables t(phi, subset, side, kIterates * k);
        for (std::uint32_t x = 1; x <= phi.rank(); ++x) {
          if (!relevant[x - 1]) {
            continue;
          }
          for (std::size_t j = 2; j <= kIterates; ++j) {
            if (t.at(j * k, x) != t.at(k, x)) {
              return std::string(side == Side::left ? "leftmost" : "rightmost")
                     + " " + what + " of " + gen_name(phi, x) + ": "
                     + gen_name(phi, t.at(k, x)) + " at power 1, "
                     + gen_name(phi, t.at(j * k, x)) + " at power "
                     + std::to_string(j);
            }
          }
        }
      }
      return "";
    }

    std::vector<double> lengths_of(Automorphism const& phi, Word const& w,
                                   std::size_t n_max) {
      auto                n = phi.rank();
      std::vector<double> len(n, 1.0), next(n);
      std::vector<double> out;
      out.reserve(n_max + 1);
      for (std::size_t step = 0; step <= n_max; ++step) {
        double total = 0;
        for (auto l : w) {
          total += len[l.index() - 1];
        }
        out.push_back(total);
        for (std::size_t y = 0; y < n; ++y) {
          next[y] = 0;
          for (auto z : phi.forward()[y]) {
            next[y] += len[z.index() - 1];
          }
        }
        std::swap(len, next);
      }
      return out;
    }

    struct LineFit {
      double slope = 0;
      double rss   = 0;
    };

    LineFit least_squares(std::vector<double> const& xs,
                          std::vector<double> const& ys) {
      auto   n  = static_cast<double>(xs.size());
      double mx = 0, my = 0;
      for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
      }
      mx /= n;
      my /= n;
      double sxy = 0, sxx = 0;
      for (std::size_t i = 0; i < xs.size(); ++i) {
        sxy += (xs[i] - mx) * (ys[i] - my);
        sxx += (xs[i] - mx) * (xs[i] - mx);
      }
      LineFit f;
      f.slope = sxx == 0 ? 0 : sxy / sxx;
      for (std::size_t i = 0; i < xs.size(); ++i) {
        auto r = ys[i] - (my + f.slope * (xs[i] - mx));
        f.rss += r * r;
      }
      return f;
    }

    // Slope of log y against log n on n in [first, last], skipping zeros.
    double loglog_slope(std::vector<double> const& y, std::size_t first,
                        std::size_t last) {
      std::vector<double> xs, ys;
      for (auto n = std::max<std::size_t>(first, 1); n <= last; ++n) {
        if (y[n] > 0) {
          xs.push_back(std::log(static_cast<double>(n)));
          ys.push_back(std::log(y[n]));
        }
      }
      return xs.size() < 2 ? 0 : least_squares(xs, ys).slope;
    }

  }  // namespace

  OccurrenceDigraph occurrence_digraph(Automorphism const& phi) {
    return {arcs_of(occurrence_matrix(phi))};
  }

  StrataReport compute_supp(Automorphism const& phi) {
    require_positive(phi);
    return supports_and_strata(occurrence_digraph(phi).arcs);
  }

  StrataReport classify(Automorphism const& phi) {
    auto r = compute_supp(phi);
    auto n = phi.rank();

    for (auto& lr : r.letters) {
      auto const& img = phi.image(lr.index);
      if (img.size() == 1 && img[0] == Letter(lr.index, 1)) {
        lr.kind = LetterKind::constant;
      } else if (lr.stratum.size() >= 2) {
        lr.kind = LetterKind::exponential;
      } else {
        lr.kind = LetterKind::parabolic;
      }
    }

    // Strata are bottom-up, so every letter's image is classified before it.
    std::vector<std::size_t> degree(n, 0);
    for (auto const& stratum : r.strata) {
      for (auto x : stratum) {
        auto& lr  = r.letters[x - 1];
        bool  exp = std::any_of(lr.supp.begin(), lr.supp.end(), [&](auto y) {
          return r.letters[y - 1].kind == LetterKind::exponential;
        });
        if (exp) {
          lr.growth.kind = GrowthKind::exponential;
          continue;
        }
        if (lr.kind == LetterKind::constant) {
          lr.growth = {GrowthKind::constant, 0};
          continue;
        }
        std::size_t d = 0;
        for (auto l : phi.image(x)) {
          if (l.index() != x) {
            d = std::max(d, degree[l.index() - 1]);
          }
        }
        degree[x - 1] = d + 1;
        lr.growth     = {GrowthKind::polynomial, d + 1};
      }
    }

    for (auto& lr : r.letters) {
      auto const& img = phi.image(lr.index);
      auto count = static_cast<std::size_t>(
          std::count(img.begin(), img.end(), Letter(lr.index, 1)));
      bool conditioned = lr.kind == LetterKind::exponential ? count >= 3
                                                            : count == 1;
      if (!conditioned) {
        continue;
      }
      lr.preferred_index = preferred_future_index(phi, lr.index);
      if (lr.kind != LetterKind::constant) {
        lr.left_fast  = classify_fast(phi, lr.index, Side::left);
        lr.right_fast = classify_fast(phi, lr.index, Side::right);
      } else {
        lr.left_fast = lr.right_fast = false;
      }
    }
    return r;
  }

  ConditioningCertificate check_conditions(Automorphism const& phi,
                                           std::size_t         k) {
    require_positive(phi);
    if (k == 0) {
      throw std::invalid_argument("conditioning power must be positive");
    }
    auto const n    = phi.rank();
    auto const m    = matrix_power(occurrence_matrix(phi), k);
    auto const arcs = arcs_of(m);
    auto const rep  = supports_and_strata(arcs);

    ConditioningCertificate cert;
    cert.k = k;

    for (auto& c : cert.checks) {
      c.pass = true;
    }
    auto fail = [&](std::size_t i, std::string witness) {
      if (cert.checks[i].pass) {
        cert.checks[i] = {false, std::move(witness)};
      }
    };

    for (std::size_t x = 0; x < n; ++x) {
      auto const& lr = rep.letters[x];
      auto        x1 = static_cast<std::uint32_t>(x + 1);
      if (m[x][x] == 0) {
        fail(0, gen_name(phi, x1) + " does not occur in its image");
      }
      if (lr.stratum.size() >= 2 && m[x][x] < 3) {
        fail(1, "exponential " + gen_name(phi, x1) + " occurs "
                    + std::to_string(m[x][x]) + " times in its image");
      }
      for (auto y : lr.supp) {
        if (m[x][y - 1] == 0) {
          fail(2, gen_name(phi, y) + " in supp(" + gen_name(phi, x1)
                      + ") is missing from its image");
          break;
        }
      }
    }

    std::vector<bool> everything(n, true);
    if (auto w = compare_tables(phi, k, everything, everything, "letter");
        !w.empty()) {
      fail(3, w);
    }

    for (auto const& stratum : rep.strata) {
      std::vector<bool> subset(n, false), relevant(n, false);
      for (auto s : stratum) {
        subset[s - 1] = true;
      }
      for (auto const& lr : rep.letters) {
        relevant[lr.index - 1] = std::binary_search(
            lr.supp.begin(), lr.supp.end(), stratum.front());
      }
      auto w = compare_tables(phi, k, subset, relevant,
                              "letter from " + set_name(phi, stratum));
      if (!w.empty()) {
        fail(4, w);
      }
    }

    static constexpr char const* kHolds[5] = {
        "every letter occurs in its own image",
        "every exponential letter occurs at least 3 times in its own image",
        "every letter of each support occurs in the image",
        "leftmost and rightmost letters stable under iteration",
        "stratum-extremal letters stable under iteration"};
    for (std::size_t i = 0; i < 5; ++i) {
      if (cert.checks[i].pass) {
        cert.checks[i].witness = kHolds[i];
      }
    }
    return cert;
  }

  ConditioningCertificate condition_power(Automorphism const& phi,
                                          std::size_t         k_max) {
    require_positive(phi);
    for (std::size_t k = 1; k <= k_max; ++k) {
      auto cert = check_conditions(phi, k);
      if (cert.passed()) {
        return cert;
      }
    }
    throw NoWitness("no power k <= " + std::to_string(k_max)
                    + " satisfies the conditioning checks");
  }

  std::optional<std::uint32_t> extremal_letter(
      Automorphism const& phi, std::uint32_t x, std::size_t j,
      std::vector<bool> const& subset, Side side) {
    require_positive(phi);
    if (subset.size() != phi.rank()) {
      throw std::invalid_argument("subset mask has the wrong size");
    }
    ExtremalTables t(phi, subset, side, j);
    auto           y = t.at(j, x);
    if (y == 0) {
      return std::nullopt;
    }
    return y;
  }

  std::size_t preferred_future_index(Automorphism const& phi,
                                     std::uint32_t       x) {
    auto const&              img = phi.image(x);
    std::vector<std::size_t> at;
    for (std::size_t i = 0; i < img.size(); ++i) {
      if (img[i] == Letter(x, 1)) {
        at.push_back(i);
      }
    }
    bool exponential = compute_supp(phi)[x].stratum.size() >= 2;
    if (!exponential && at.size() == 1) {
      return at.front();
    }
    if (exponential && at.size() >= 3) {
      return at[1];
    }
    throw std::invalid_argument("automorphism is not conditioned at "
                                + phi.alphabet().name(x));
  }

  bool classify_fast(Automorphism const& phi, std::uint32_t x, Side side) {
    auto const& img  = phi.image(x);
    auto        p    = preferred_future_index(phi, x);
    auto        from = side == Side::left ? img.begin() : img.begin() + p + 1;
    auto        to   = side == Side::left ? img.begin() + p : img.end();
    return std::any_of(from, to, [&](Letter l) {
      auto const& y = phi.image(l.index());
      return !(y.size() == 1 && y[0] == l);
    });
  }

  FastProfile fast_growth_profile(Automorphism const& phi, std::uint32_t x,
                                  Side side, std::size_t n_max) {
    require_positive(phi);
    auto const& img = phi.image(x);
    auto        p   = preferred_future_index(phi, x);
    auto part = side == Side::left ? img.slice(0, p) : img.slice(p + 1,
                                                                 img.size());
    // d(n) = sum_{j < n} |phi^j(part)|.
    auto        lens = lengths_of(phi, part, n_max);
    FastProfile f;
    f.distance.assign(n_max + 1, 0);
    for (std::size_t n = 1; n <= n_max; ++n) {
      f.distance[n] = f.distance[n - 1] + lens[n - 1];
    }
    f.loglog_slope = loglog_slope(f.distance, 1, n_max);
    if (n_max >= 2) {
      f.superlinear = f.distance[n_max] - 2 * f.distance[n_max - 1]
                          + f.distance[n_max - 2]
                      > 0;
    }
    return f;
  }

  std::vector<double> image_lengths(Automorphism const& phi, std::uint32_t x,
                                    std::size_t n_max) {
    require_positive(phi);
    return lengths_of(phi, Word{Letter(x, 1)}, n_max);
  }

  GrowthFit fit_growth(Automorphism const& phi, std::uint32_t x,
                       std::size_t n_max) {
    auto                lens = image_lengths(phi, x, n_max);
    std::vector<double> ns, logns, logs;
    for (std::size_t n = 1; n <= n_max; ++n) {
      ns.push_back(static_cast<double>(n));
      logns.push_back(std::log(static_cast<double>(n)));
      logs.push_back(std::log(lens[n]));
    }
    auto      lin = least_squares(ns, logs);
    auto      pol = least_squares(logns, logs);
    GrowthFit g;
    g.rate_slope   = lin.slope;
    g.loglog_slope = pol.slope;
    // A rate below log(1.05) per step is not distinguishable from
    // polynomial growth over a short window.
    g.exponential = lin.rss < pol.rss && lin.slope > std::log(1.05);
    return g;
  }

  double polynomial_degree_estimate(Automorphism const& phi, std::uint32_t x,
                                    std::size_t n_max) {
    auto lens = image_lengths(phi, x, n_max);
    return loglog_slope(lens, n_max / 2, n_max);
  }

}  // namespace corridorlab
