#include "bslab/bs_algebra.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace bslab {

namespace {

void check_n(int n) {
  if (n < 2) throw std::invalid_argument("BS(1,n) requires n >= 2, got " + std::to_string(n));
}

Integer n_pow(int n, unsigned long e) { return pow(Integer(n), e); }

}  // namespace

char to_char(Letter l) {
  switch (l) {
    case Letter::A: return 'a';
    case Letter::AInv: return 'A';
    case Letter::B: return 'b';
    case Letter::BInv: return 'B';
  }
  return '?';
}

Letter inverse(Letter l) {
  switch (l) {
    case Letter::A: return Letter::AInv;
    case Letter::AInv: return Letter::A;
    case Letter::B: return Letter::BInv;
    case Letter::BInv: return Letter::B;
  }
  return l;
}

// ------------------------------------------------------------------- Word

Word::Word(std::vector<Letter> letters, int n) : letters_(std::move(letters)), n_(n) { check_n(n); }

Word Word::parse(std::string_view text, int n) {
  std::vector<Letter> letters;
  for (char c : text) {
    switch (c) {
      case 'a': letters.push_back(Letter::A); break;
      case 'A': letters.push_back(Letter::AInv); break;
      case 'b': letters.push_back(Letter::B); break;
      case 'B': letters.push_back(Letter::BInv); break;
      case ' ': break;
      default: throw std::invalid_argument(std::string("invalid letter '") + c + "' in word");
    }
  }
  return Word(std::move(letters), n);
}

std::string Word::str() const {
  std::string s;
  for (auto l : letters_) s.push_back(to_char(l));
  return s;
}

Word Word::operator*(const Word& rhs) const {
  if (rhs.n_ != n_) throw std::invalid_argument("words over different BS(1,n)");
  std::vector<Letter> out = letters_;
  out.insert(out.end(), rhs.letters_.begin(), rhs.letters_.end());
  return Word(std::move(out), n_);
}

Word Word::inverse() const {
  std::vector<Letter> out;
  for (auto it = letters_.rbegin(); it != letters_.rend(); ++it) out.push_back(bslab::inverse(*it));
  return Word(std::move(out), n_);
}

Word Word::power(long k) const {
  Word base = k < 0 ? inverse() : *this;
  Word out(n_);
  for (long i = 0; i < std::labs(k); ++i) out = out * base;
  return out;
}

// -------------------------------------------------------------- BSElement

BSElement::BSElement(int n, long k, Integer num, unsigned long e) : n_(n), k_(k), num_(std::move(num)), e_(e) {
  check_n(n);
  Integer q, r;
  Integer nn(n);
  while (e_ > 0) {
    mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), num_.get_mpz_t(), nn.get_mpz_t());
    if (r != 0) break;
    num_ = q;
    --e_;
  }
  if (num_ == 0) e_ = 0;
}

BSElement BSElement::from_letter(Letter l, int n) {
  switch (l) {
    case Letter::A: return BSElement(n, 1, 0, 0);
    case Letter::AInv: return BSElement(n, -1, 0, 0);
    case Letter::B: return BSElement(n, 0, 1, 0);
    case Letter::BInv: return BSElement(n, 0, -1, 0);
  }
  return identity(n);
}

Rational BSElement::translation() const {
  Rational t(num_, n_pow(n_, e_));
  t.canonicalize();
  return t;
}

BSElement BSElement::inverse() const {
  // (k, t)^-1 = (-k, -n^-k t)
  if (k_ >= 0) return BSElement(n_, -k_, -num_, e_ + static_cast<unsigned long>(k_));
  unsigned long up = static_cast<unsigned long>(-k_);
  if (up >= e_) return BSElement(n_, -k_, Integer(-num_ * n_pow(n_, up - e_)), 0);
  return BSElement(n_, -k_, -num_, e_ - up);
}

Rational BSElement::act(const Rational& x) const {
  Rational scale = k_ >= 0 ? Rational(n_pow(n_, static_cast<unsigned long>(k_)))
                           : Rational(Integer(1), n_pow(n_, static_cast<unsigned long>(-k_)));
  return scale * x + translation();
}

std::string BSElement::str() const {
  return "(" + std::to_string(k_) + ", " + to_string(translation()) + ")";
}

BSElement element_compose(const BSElement& g, const BSElement& f) {
  if (g.n() != f.n()) throw std::invalid_argument("elements of different BS(1,n)");
  int n = g.n();
  // n^{k_g} t_f = num_f * n^{k_g} / n^{e_f} = num' / n^{e'}
  Integer num_f = f.num();
  unsigned long e_f = f.e();
  if (g.k() >= 0) {
    unsigned long up = static_cast<unsigned long>(g.k());
    if (up >= e_f) {
      num_f *= n_pow(n, up - e_f);
      e_f = 0;
    } else {
      e_f -= up;
    }
  } else {
    e_f += static_cast<unsigned long>(-g.k());
  }
  unsigned long e = std::max(g.e(), e_f);
  Integer num = g.num() * n_pow(n, e - g.e()) + num_f * n_pow(n, e - e_f);
  return BSElement(n, g.k() + f.k(), std::move(num), e);
}

BSElement reduce_word(const Word& w) {
  BSElement acc = BSElement::identity(w.n());
  for (auto l : w.letters()) acc = element_compose(acc, BSElement::from_letter(l, w.n()));
  return acc;
}

Word canonical_word(const BSElement& el) {
  long p = std::max(static_cast<long>(el.e()), -el.k());
  Integer q = el.num() * n_pow(el.n(), static_cast<unsigned long>(p) - el.e());
  long r = el.k() + p;
  if (!q.fits_slong_p()) throw std::overflow_error("canonical word exponent too large");
  long qs = q.get_si();
  std::vector<Letter> letters;
  letters.insert(letters.end(), static_cast<std::size_t>(p), Letter::AInv);
  letters.insert(letters.end(), static_cast<std::size_t>(std::labs(qs)), qs > 0 ? Letter::B : Letter::BInv);
  letters.insert(letters.end(), static_cast<std::size_t>(r), Letter::A);
  return Word(std::move(letters), el.n());
}

// ---------------------------------------------------------------- BitWord

BitWord::BitWord(std::vector<bool> bits) : bits_(std::move(bits)) {
  if (bits_.empty()) throw std::invalid_argument("bit word needs at least one bit");
}

BitWord BitWord::from_index(std::uint64_t value, std::size_t length) {
  std::vector<bool> bits(length);
  for (std::size_t i = 0; i < length; ++i) bits[i] = ((value >> i) & 1U) != 0;
  return BitWord(std::move(bits));
}

std::string BitWord::str() const {
  std::string s;
  for (bool b : bits_) s.push_back(b ? '1' : '0');
  return s;
}

Integer psi_beta(const BitWord& alpha, int n) {
  check_n(n);
  Integer beta = 0, p = 1;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    if (alpha[i]) beta += p;
    p *= n;
  }
  return beta;
}

BSElement psi_element(const BitWord& alpha, int n) { return BSElement(n, 0, psi_beta(alpha, n), 0); }

Word psi_word(const BitWord& alpha, int n) {
  std::vector<Letter> letters;
  for (std::size_t j = alpha.size(); j-- > 0;) {
    letters.insert(letters.end(), j, Letter::A);
    if (alpha[j]) letters.push_back(Letter::B);
    letters.insert(letters.end(), j, Letter::AInv);
  }
  return Word(std::move(letters), n);
}

CircleMap realize_word(const Word& w, const CircleMap& f, const CircleMap& h) {
  CircleMap f_inv = f.inverse(), h_inv = h.inverse();
  CircleMap acc;
  for (auto it = w.letters().rbegin(); it != w.letters().rend(); ++it) {
    const CircleMap& g = *it == Letter::A ? h : *it == Letter::AInv ? h_inv : *it == Letter::B ? f : f_inv;
    acc = compose(g, acc);
  }
  return acc;
}

CirclePoint apply_word(const Word& w, const CircleMap& f, const CircleMap& h, const CirclePoint& p) {
  CircleMap f_inv = f.inverse(), h_inv = h.inverse();
  CirclePoint q = p;
  for (auto it = w.letters().rbegin(); it != w.letters().rend(); ++it) {
    const CircleMap& g = *it == Letter::A ? h : *it == Letter::AInv ? h_inv : *it == Letter::B ? f : f_inv;
    q = g(q);
  }
  return q;
}

namespace {

std::vector<CirclePoint> relation_samples(int grid, const std::vector<Arc>& domain) {
  std::vector<CirclePoint> pts;
  if (domain.empty()) {
    for (int j = 0; j < grid; ++j) pts.push_back(CirclePoint::angular(Rational(j, grid)));
    return pts;
  }
  for (const auto& arc : domain) {
    Scalar len = length(arc);
    for (int j = 0; j <= grid; ++j) {
      Scalar off = len * Scalar(Rational(j, grid));
      if (arc.lo.chart() == Chart::Angular) {
        pts.push_back(CirclePoint::angular(arc.lo.value() + off));
      } else {
        pts.push_back(CirclePoint::projective(arc.lo.value() + off));
      }
    }
  }
  return pts;
}

}  // namespace

Scalar relation_defect(const CircleMap& f, const CircleMap& h, int n, int grid, const std::vector<Arc>& domain) {
  check_n(n);
  if (grid < 1) throw std::invalid_argument("relation_defect grid must be >= 1");
  CircleMap lhs = compose(h, compose(f, h.inverse()));
  CircleMap rhs = power(f, n);
  if (domain.empty() && lhs.is_exact() && rhs.is_exact() && lhs == rhs) return Scalar(Rational(0));
  Scalar worst(Rational(0));
  for (const auto& x : relation_samples(grid, domain)) {
    Scalar d = angular_distance(lhs(x), rhs(x));
    if (d > worst) worst = d;
  }
  return worst;
}

double relation_defect_bound(const CircleMap& f, const CircleMap& h, int n, int grid) {
  double sampled = relation_defect(f, h, n, grid).approx();
  double modulus = f.derivative_modulus() + h.derivative_modulus();
  if (modulus == 0.0) return sampled;
  // Both sides are Lipschitz; bound by a generous constant times spacing.
  double lip = 1.0 + modulus;
  return sampled + std::pow(lip, n + 2) * 0.5 / grid;
}

}  // namespace bslab
