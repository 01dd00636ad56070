#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bslab/circle_map.hpp"
#include "bslab/scalar.hpp"

namespace bslab {

/// Generators of BS(1,n) = <a, b | a b a^-1 = b^n>. Under an action <f, h>
/// the letter a acts as h and b acts as f.
enum class Letter : std::uint8_t { A, AInv, B, BInv };

char to_char(Letter l);
Letter inverse(Letter l);

/// A word over {a, A, b, B} (capital = inverse). Read as a group product,
/// so the rightmost letter acts first.
class Word {
 public:
  Word(std::vector<Letter> letters, int n);
  explicit Word(int n) : Word({}, n) {}
  /// Parses a string over {a, A, b, B}.
  static Word parse(std::string_view text, int n);

  int n() const { return n_; }
  const std::vector<Letter>& letters() const { return letters_; }
  std::size_t size() const { return letters_.size(); }
  bool empty() const { return letters_.empty(); }
  std::string str() const;

  Word operator*(const Word& rhs) const;
  Word inverse() const;
  Word power(long k) const;

  friend bool operator==(const Word&, const Word&) = default;

 private:
  std::vector<Letter> letters_;
  int n_;
};

/// Affine normal form x -> n^k x + num / n^e of a BS(1,n) element, with
/// e = 0 or n not dividing num.
class BSElement {
 public:
  BSElement(int n, long k, Integer num, unsigned long e);
  static BSElement identity(int n) { return BSElement(n, 0, 0, 0); }
  static BSElement from_letter(Letter l, int n);

  int n() const { return n_; }
  long k() const { return k_; }
  const Integer& num() const { return num_; }
  unsigned long e() const { return e_; }
  /// Translation part t = num / n^e.
  Rational translation() const;
  BSElement inverse() const;
  /// Image of x under x -> n^k x + t.
  Rational act(const Rational& x) const;
  std::string str() const;

  friend bool operator==(const BSElement&, const BSElement&) = default;
  friend auto operator<=>(const BSElement& x, const BSElement& y) {
    if (auto c = x.k_ <=> y.k_; c != 0) return c;
    if (auto c = x.e_ <=> y.e_; c != 0) return c;
    int c = cmp(x.num_, y.num_);
    return c <=> 0;
  }

 private:
  int n_;
  long k_;
  Integer num_;
  unsigned long e_;
};

/// Bits alpha_0, ..., alpha_m (alpha_0 first). Length >= 1.
class BitWord {
 public:
  explicit BitWord(std::vector<bool> bits);
  /// The bits of `value` in base 2, `length` of them, alpha_0 = lowest bit.
  static BitWord from_index(std::uint64_t value, std::size_t length);

  const std::vector<bool>& bits() const { return bits_; }
  std::size_t size() const { return bits_.size(); }
  std::size_t m() const { return bits_.size() - 1; }
  bool operator[](std::size_t i) const { return bits_[i]; }
  std::string str() const;

 private:
  std::vector<bool> bits_;
};

/// g o f = (k_g + k_f, t_g + n^{k_g} t_f).
BSElement element_compose(const BSElement& g, const BSElement& f);
BSElement reduce_word(const Word& w);
/// Representative a^-p b^q a^r with p = max(e, -k), r = k + p.
Word canonical_word(const BSElement& el);
/// (0, beta) with beta = sum of n^i over alpha_i = 1.
BSElement psi_element(const BitWord& alpha, int n);
Integer psi_beta(const BitWord& alpha, int n);
/// The explicit letter sequence (a^m b^{alpha_m} a^-m) ... (a b^{alpha_1} a^-1) b^{alpha_0}.
Word psi_word(const BitWord& alpha, int n);

/// The word with a -> h, b -> f realized as a circle map.
CircleMap realize_word(const Word& w, const CircleMap& f, const CircleMap& h);
/// Applies the word to a point letter by letter (rightmost first).
CirclePoint apply_word(const Word& w, const CircleMap& f, const CircleMap& h, const CirclePoint& p);

/// sup over sample points of the angular distance between (h f h^-1)(x) and
/// f^n(x). Returns exactly 0 when both sides are exact and structurally
/// equal. Samples are angular j/grid, or `grid` equispaced points per arc of
/// `domain` when given.
Scalar relation_defect(const CircleMap& f, const CircleMap& h, int n, int grid,
                       const std::vector<Arc>& domain = {});

/// relation_defect plus a continuity slack for Oracle maps (declared
/// derivative bound times half the sample spacing).
double relation_defect_bound(const CircleMap& f, const CircleMap& h, int n, int grid);

}  // namespace bslab
