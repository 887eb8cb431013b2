#ifndef CORRIDORLAB_TESTS_FIXTURES_HPP_
#define CORRIDORLAB_TESTS_FIXTURES_HPP_

#include <random>
#include <string>

#include "corridorlab/automorphism.hpp"

namespace corridorlab::test {

  // b -> b a a, c -> c a
  inline Automorphism phi_fig() {
    return parse_automorphism(R"(alphabet: a b c
map:
  a -> a
  b -> b a a
  c -> c a
inverse:
  a -> a
  b -> b a^-1 a^-1
  c -> c a^-1
)");
  }

  // a1 -> a1 a1 a2, a2 -> a1 a2, a3 -> a1 a2 a3
  inline Automorphism phi_ex() {
    return parse_automorphism(R"(alphabet: a1 a2 a3
map:
  a1 -> a1 a1 a2
  a2 -> a1 a2
  a3 -> a1 a2 a3
inverse:
  a1 -> a1 a2^-1
  a2 -> a2 a1^-1 a2
  a3 -> a2^-1 a3
)");
  }

  inline Automorphism id_a() {
    return identity_automorphism(Alphabet({"a"}));
  }

  inline Automorphism id3() {
    return identity_automorphism(Alphabet({"a", "b", "c"}));
  }

  // a -> a, b -> a b, c -> b c: quadratic growth of c.
  inline Automorphism phi_quad() {
    return parse_automorphism(R"(alphabet: a b c
map:
  a -> a
  b -> a b
  c -> b c
inverse:
  a -> a
  b -> a^-1 b
  c -> b^-1 a c
)");
  }

  // Non-positive: a -> a b^-1, b -> b.
  inline Automorphism phi_neg() {
    return parse_automorphism(R"(alphabet: a b
map:
  a -> a b^-1
  b -> b
inverse:
  a -> a b
  b -> b
)");
  }

  inline Automorphism compose(Automorphism const& phi, Automorphism const& psi) {
    Substitution f, i;
    for (std::uint32_t x = 1; x <= phi.rank(); ++x) {
      f.push_back(apply(phi, psi.image(x)));
      i.push_back(apply_inverse(psi, phi.inverse_image(x)));
    }
    return make_automorphism(phi.alphabet(), f, i);
  }

  // A product of `moves` random elementary positive automorphisms:
  // a_i -> a_i a_j, a_i -> a_j a_i and transpositions of two generators.
  inline Automorphism random_positive_automorphism(std::mt19937_64& rng,
                                                   std::size_t      rank,
                                                   std::size_t      moves) {
    std::vector<std::string> names;
    for (std::size_t i = 1; i <= rank; ++i) {
      names.push_back("x" + std::to_string(i));
    }
    Alphabet                                     alphabet(names);
    auto                                         phi = identity_automorphism(alphabet);
    std::uniform_int_distribution<std::uint32_t> gen(1, rank);
    std::uniform_int_distribution<int>           kind(0, 4);
    for (std::size_t m = 0; m < moves; ++m) {
      auto i = gen(rng), j = gen(rng);
      if (i == j) {
        continue;
      }
      Substitution f, inv;
      for (std::uint32_t x = 1; x <= rank; ++x) {
        f.push_back(Word{Letter(x, 1)});
        inv.push_back(Word{Letter(x, 1)});
      }
      switch (kind(rng)) {
        case 0:
          f[i - 1]   = Word{Letter(i, 1), Letter(j, 1)};
          inv[i - 1] = Word{Letter(i, 1), Letter(j, -1)};
          break;
        case 1:
        case 2:
          f[i - 1]   = Word{Letter(j, 1), Letter(i, 1)};
          inv[i - 1] = Word{Letter(j, -1), Letter(i, 1)};
          break;
        default:
          std::swap(f[i - 1], f[j - 1]);
          std::swap(inv[i - 1], inv[j - 1]);
          break;
      }
      phi = compose(phi, make_automorphism(alphabet, f, inv));
    }
    return phi;
  }

}  // namespace corridorlab::test

#endif  // CORRIDORLAB_TESTS_FIXTURES_HPP_
