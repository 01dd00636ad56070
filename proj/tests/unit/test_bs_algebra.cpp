#include <random>
#include <set>

#include "bslab/bs_algebra.hpp"
#include "bslab/fixtures.hpp"
#include "bslab/semiconjugacy.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace bslab;

namespace {

std::vector<bool> bits_of(std::uint64_t v, std::size_t len) {
  std::vector<bool> b(len);
  for (std::size_t i = 0; i < len; ++i) b[i] = (v >> i) & 1U;
  return b;
}

}  // namespace

TEST_SUITE("bs-algebra") {
  TEST_CASE("words parse and invert") {
    Word w = Word::parse("abAB", 2);
    CHECK(w.str() == "abAB");
    CHECK(w.inverse().str() == "baBA");
    CHECK((w * w.inverse()).size() == 8);
    CHECK_THROWS(Word::parse("abc", 2));
    CHECK_THROWS(Word::parse("ab", 1));
  }

  TEST_CASE("normal forms of simple words") {
    CHECK(reduce_word(Word::parse("aBA", 2)) == BSElement(2, 0, -2, 0));
    CHECK(reduce_word(Word::parse("AbA", 2)) == BSElement(2, -2, 1, 1));
    CHECK(reduce_word(Word::parse("", 3)) == BSElement::identity(3));
    CHECK(reduce_word(Word::parse("AbbbbA", 2)) == BSElement(2, -2, 2, 0));
    CHECK(BSElement(2, 0, 6, 2) == BSElement(2, 0, 3, 1));
    CHECK(BSElement(2, 0, 6, 2).e() == 1);
  }

  TEST_CASE("the defining relation holds in normal form") {
    for (int n : {2, 3, 5, 10}) {
      CHECK(reduce_word(Word::parse("abA", n)) == reduce_word(Word::parse(std::string(n, 'b'), n)));
    }
  }

  TEST_CASE("reduce_word is a homomorphism") {
    std::mt19937_64 rng(1);
    for (int n : {2, 3, 7}) {
      for (int i = 0; i < 300; ++i) {
        Word u = Word::parse(oracle::random_word(rng, 20), n);
        Word v = Word::parse(oracle::random_word(rng, 20), n);
        CHECK(reduce_word(u * v) == element_compose(reduce_word(u), reduce_word(v)));
      }
    }
  }

  TEST_CASE("normal form agrees with letter-by-letter affine evaluation") {
    std::mt19937_64 rng(2);
    for (int i = 0; i < 200; ++i) {
      int n = 2 + static_cast<int>(rng() % 4);
      std::string w = oracle::random_word(rng, 30);
      BSElement el = reduce_word(Word::parse(w, n));
      for (int j = 0; j < 10; ++j) {
        Rational x(static_cast<long>(rng() % 41) - 20, 1 + static_cast<long>(rng() % 9));
        x.canonicalize();
        CHECK(el.act(x) == oracle::affine_word(w, n, x));
      }
    }
  }

  TEST_CASE("inverse and canonical word round-trip") {
    std::mt19937_64 rng(3);
    for (int i = 0; i < 500; ++i) {
      int n = 2 + static_cast<int>(rng() % 5);
      BSElement el = reduce_word(Word::parse(oracle::random_word(rng, 16), n));
      CHECK(element_compose(el, el.inverse()) == BSElement::identity(n));
      Word w = canonical_word(el);
      CHECK(reduce_word(w) == el);
    }
  }

  TEST_CASE("psi elements") {
    CHECK(psi_element(BitWord({true, false, true}), 2) == BSElement(2, 0, 5, 0));
    CHECK(psi_element(BitWord({false, false, false, false}), 3) == BSElement::identity(3));
    std::vector<bool> ones(20, true);
    Integer expected = (pow(Integer(3), 20) - 1) / 2;
    CHECK(psi_beta(BitWord(ones), 3) == expected);
    CHECK(psi_beta(BitWord(ones), 3) == oracle::beta(ones, 3));
  }

  TEST_CASE("psi element equals the explicit word for all short bit words") {
    for (int n : {2, 3, 5}) {
      for (std::size_t len = 1; len <= (n == 5 ? 8u : 10u); ++len) {
        for (std::uint64_t v = 0; v < (1ULL << len); ++v) {
          auto bits = bits_of(v, len);
          BitWord alpha(bits);
          Word w = psi_word(alpha, n);
          CHECK(w.str() == oracle::psi_letters(bits));
          CHECK(reduce_word(w) == psi_element(alpha, n));
        }
      }
    }
  }

  TEST_CASE("distinct bit words give distinct beta") {
    for (int n : {2, 3}) {
      for (std::size_t len = 1; len <= 10; ++len) {
        std::set<std::string> seen;
        for (std::uint64_t v = 0; v < (1ULL << len); ++v) {
          seen.insert(to_string(psi_beta(BitWord::from_index(v, len), n)));
        }
        CHECK(seen.size() == (1ULL << len));
      }
    }
  }

  TEST_CASE("realize_word under the standard model") {
    for (int n : {2, 3}) {
      AffineModel m = standard_model(n);
      Word rel = Word::parse("abA" + std::string(n, 'B'), n);
      CircleMap id = realize_word(rel, m.f0, m.h0);
      CHECK(id.is_identity());
      std::mt19937_64 rng(4);
      for (int i = 0; i < 100; ++i) {
        auto x = CirclePoint::projective(Rational(static_cast<long>(rng() % 2001) - 1000, 1 + static_cast<long>(rng() % 97)));
        CHECK(apply_word(rel, m.f0, m.h0, x) == x);
      }
    }
    AffineModel m = standard_model(2);
    CHECK(realize_word(Word(2), m.f0, m.h0).is_identity());
    Word psi = psi_word(BitWord({true, false, true}), 2);
    CHECK(realize_word(psi, m.f0, m.h0) == power(m.f0, 5));
  }

  TEST_CASE("relation defect") {
    AffineModel m = standard_model(2);
    CHECK(relation_defect(m.f0, m.h0, 2, 1000).sign() == 0);
    CHECK(relation_defect(CircleMap::rotation(Rational(1, 2)), CircleMap(), 2, 10) == Scalar(Rational(1, 2)));
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      ConjugatedAction a = pl_conjugated(3, seed);
      CHECK(relation_defect(a.f, a.h, 3, 100).sign() == 0);
    }
  }
}
