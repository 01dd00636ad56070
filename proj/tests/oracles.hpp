#pragma once

// Independent reference computations used by the tests. Nothing here calls
// into the library's algorithms; only the number types are shared.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "bslab/scalar.hpp"

namespace oracle {

using bslab::Integer;
using bslab::Rational;

/// Evaluates a word over {a,A,b,B} on the affine model x -> n x, x -> x + 1,
/// letter by letter from the right.
inline Rational affine_word(const std::string& word, int n, Rational x) {
  for (auto it = word.rbegin(); it != word.rend(); ++it) {
    switch (*it) {
      case 'a': x *= n; break;
      case 'A': x /= n; break;
      case 'b': x += 1; break;
      case 'B': x -= 1; break;
      default: break;
    }
  }
  return x;
}

/// sum of n^i over set bits, by repeated multiplication.
inline Integer beta(const std::vector<bool>& bits, int n) {
  Integer total = 0;
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (!bits[i]) continue;
    Integer p = 1;
    for (std::size_t j = 0; j < i; ++j) p *= n;
    total += p;
  }
  return total;
}

inline std::string random_word(std::mt19937_64& rng, std::size_t max_len) {
  static const char letters[] = "aAbB";
  std::uniform_int_distribution<std::size_t> len(0, max_len);
  std::uniform_int_distribution<int> pick(0, 3);
  std::string w(len(rng), 'a');
  for (auto& c : w) c = letters[pick(rng)];
  return w;
}

/// The explicit Psi letters (a^j b^{alpha_j} A^j) for j = m..0.
inline std::string psi_letters(const std::vector<bool>& bits) {
  std::string w;
  for (std::size_t j = bits.size(); j-- > 0;) {
    w += std::string(j, 'a');
    if (bits[j]) w += 'b';
    w += std::string(j, 'A');
  }
  return w;
}

/// Two-slope bump on [0,1]: slope s on [0,1/2], 2 - s on [1/2,1].
inline Rational bump(const Rational& u, const Rational& s) {
  Rational half(1, 2);
  if (u <= half) return s * u;
  Rational mid = s * half;
  return mid + (2 - s) * (u - half);
}

/// (3/2)^{m+1} as a double, by repeated multiplication.
inline double three_halves_power(int m) {
  double x = 1.0;
  for (int i = 0; i <= m; ++i) x *= 1.5;
  return x;
}

}  // namespace oracle
