// Elements of the extended group Gamma_0^{*,s_N}(N) and its subgroups
// Gamma_0^{*,sigma}(N).
//
// An element is stored through a presentation (mu, a, b, c, d) standing for
//
//     ( a*sqrt(mu)              b/sqrt(mu)  )
//     ( c*(N/mu)*sqrt(mu)       d*sqrt(mu)  )
//
// with mu an exact divisor of N, s_mu*a, s_mu*d, s_{N/mu}*b, s_{N/mu}*c
// integral and a*d*mu - b*c*(N/mu) = 1. Presentations are not unique: for a
// prime p with v_p(N) even the factor p^{v_p(N)} can move between mu and
// N/mu. adm = a*d*mu, bcn = b*c*(N/mu) and the products ab, ac, bd, cd do not
// depend on the presentation.
#pragma once

#include <algorithm>
#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "congnorm/numtheory.hpp"
#include "congnorm/sqrt_rational.hpp"

namespace congnorm {

struct NotExactDivisor : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct DenominatorTooLarge : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct DeterminantNotOne : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct LevelMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

inline bool denominator_divides(const Rational& q, Int bound) {
  return Rational(q * BigInt(static_cast<long>(bound))).get_den() == 1;
}

/// Denominator of a rational as Int (all denominators here divide s_N).
inline Int denominator_of(const Rational& q) {
  const BigInt& den = q.get_den();
  if (!den.fits_slong_p()) throw std::overflow_error("denominator too large");
  return static_cast<Int>(den.get_si());
}

/// p-adic valuation of a nonzero rational.
inline int rational_vp(Int p, const Rational& q) {
  int v = 0;
  BigInt num = q.get_num();
  BigInt den = q.get_den();
  const BigInt bp(static_cast<long>(p));
  while (num % bp == 0) {
    num /= bp;
    ++v;
  }
  while (den % bp == 0) {
    den /= bp;
    --v;
  }
  return v;
}

class GammaStarElem {
 public:
  /// Validating constructor (the elem_new operation).
  GammaStarElem(Int level, Int mu, Rational a, Rational b, Rational c, Rational d)
      : level_(level), mu_(checked_mu(level, mu)), a_(std::move(a)), b_(std::move(b)),
        c_(std::move(c)), d_(std::move(d)) {
    a_.canonicalize();
    b_.canonicalize();
    c_.canonicalize();
    d_.canonicalize();
    const Int s_mu = square_part(mu_).s;
    const Int s_co = square_part(level_ / mu_).s;
    if (!denominator_divides(a_, s_mu) || !denominator_divides(d_, s_mu)) {
      throw DenominatorTooLarge("a, d must lie in (1/" + std::to_string(s_mu) + ")Z for mu=" +
                                std::to_string(mu_));
    }
    if (!denominator_divides(b_, s_co) || !denominator_divides(c_, s_co)) {
      throw DenominatorTooLarge("b, c must lie in (1/" + std::to_string(s_co) + ")Z for N/mu=" +
                                std::to_string(level_ / mu_));
    }
    if (adm() - bcn() != 1) {
      throw DeterminantNotOne("a*d*mu - b*c*(N/mu) = " + Rational(adm() - bcn()).get_str() +
                              ", expected 1");
    }
  }

  static GammaStarElem identity(Int level) { return {level, 1, 1, 0, 0, 1}; }

  /// The Fricke element (0, -1/sqrt(N); sqrt(N), 0).
  static GammaStarElem fricke(Int level) { return {level, level, 0, -1, 1, 0}; }

  /// Embeds an integer matrix (a, b; c, d) of Gamma_0(N).
  static GammaStarElem from_gamma0(Int level, const IntMatrix2& m) {
    if (m.c % level != 0) throw std::invalid_argument("matrix not in Gamma_0(" + std::to_string(level) + ")");
    return {level, 1, Rational(m.a), Rational(m.b), Rational(m.c / level), Rational(m.d)};
  }

  Int level() const { return level_; }
  Int mu() const { return mu_; }
  ExactDivisor exact_divisor() const { return {level_, mu_}; }
  const Rational& a() const { return a_; }
  const Rational& b() const { return b_; }
  const Rational& c() const { return c_; }
  const Rational& d() const { return d_; }

  /// a*d*mu and b*c*(N/mu); both integers, differing by one.
  BigInt adm() const { return to_big(a_ * d_ * BigInt(static_cast<long>(mu_))); }
  BigInt bcn() const { return to_big(b_ * c_ * BigInt(static_cast<long>(level_ / mu_))); }

  friend bool operator==(const GammaStarElem&, const GammaStarElem&) = default;

  std::string str() const {
    return "[N=" + std::to_string(level_) + ", mu=" + std::to_string(mu_) + "; " + a_.get_str() +
           ", " + b_.get_str() + ", " + c_.get_str() + ", " + d_.get_str() + "]";
  }

 private:
  static Int checked_mu(Int level, Int mu) {
    if (level <= 0) throw std::invalid_argument("level must be positive");
    if (!is_exact_divisor(level, mu)) {
      throw NotExactDivisor(std::to_string(mu) + " is not an exact divisor of " + std::to_string(level));
    }
    return mu;
  }

  static BigInt to_big(const Rational& q) {
    if (q.get_den() != 1) throw std::logic_error("expected an integer, got " + q.get_str());
    return q.get_num();
  }

  Int level_;
  Int mu_;
  Rational a_, b_, c_, d_;
};

inline GammaStarElem elem_new(Int level, Int mu, Rational a, Rational b, Rational c, Rational d) {
  return {level, mu, std::move(a), std::move(b), std::move(c), std::move(d)};
}

inline Matrix2 matrix_of(const GammaStarElem& x) {
  const Int mu = x.mu();
  const SqrtRat root = SqrtRat::sqrt_of(mu);
  const Rational co(BigInt(static_cast<long>(x.level() / mu)));
  return {SqrtRat(x.a()) * root, SqrtRat(x.b()) / root, SqrtRat(x.c() * co) * root,
          SqrtRat(x.d()) * root};
}

/// Product through the closed presentation formula, with divisor
/// kappa = mu*nu/gcd(mu,nu)^2.
inline GammaStarElem multiply(const GammaStarElem& x, const GammaStarElem& y) {
  if (x.level() != y.level()) {
    throw LevelMismatch("multiply: levels " + std::to_string(x.level()) + " and " +
                        std::to_string(y.level()));
  }
  const Int n = x.level();
  const Int mu = x.mu();
  const Int nu = y.mu();
  const Int delta = std::gcd(mu, nu);
  const Int kappa = (mu / delta) * (nu / delta);
  auto q = [](Int v) { return Rational(BigInt(static_cast<long>(v))); };
  const Rational cross = q(n) / (q(delta) * q(kappa));
  const Rational& a = x.a();
  const Rational& b = x.b();
  const Rational& c = x.c();
  const Rational& d = x.d();
  const Rational& e = y.a();
  const Rational& f = y.b();
  const Rational& g = y.c();
  const Rational& h = y.d();
  return {n,
          kappa,
          a * e * q(delta) + b * g * cross,
          a * f * q(mu / delta) + b * h * q(nu / delta),
          c * e * q(nu / delta) + d * g * q(mu / delta),
          c * f * cross + d * h * q(delta)};
}

inline GammaStarElem operator*(const GammaStarElem& x, const GammaStarElem& y) { return multiply(x, y); }

inline GammaStarElem inverse(const GammaStarElem& x) {
  return {x.level(), x.mu(), x.d(), -x.b(), -x.c(), x.a()};
}

/// True when none of ab, ac, bd, cd pairs a p-power in a numerator (zero
/// counts as divisible by every power) with a p-power in a denominator, for
/// every prime p | N.
inline bool has_no_cancellation(const GammaStarElem& x) {
  const std::array<std::pair<const Rational*, const Rational*>, 4> pairs{
      {{&x.a(), &x.b()}, {&x.a(), &x.c()}, {&x.b(), &x.d()}, {&x.c(), &x.d()}}};
  for (Int p : prime_divisors(x.level())) {
    auto sign = [p](const Rational& q) { return q == 0 ? 1 : rational_vp(p, q); };
    for (const auto& [u, v] : pairs) {
      const int su = sign(*u);
      const int sv = sign(*v);
      if ((su < 0 && sv > 0) || (su > 0 && sv < 0)) return false;
    }
  }
  return true;
}

/// Every valid presentation reachable by moving p^{v_p(N)} between mu and N/mu
/// for primes p with v_p(N) even.
inline std::vector<GammaStarElem> presentations(const GammaStarElem& x) {
  std::vector<PrimePower> movable;
  for (const auto& pp : factorize(x.level())) {
    if (pp.e % 2 == 0) movable.push_back(pp);
  }
  std::vector<GammaStarElem> out;
  const std::size_t count = std::size_t{1} << movable.size();
  for (std::size_t mask = 0; mask < count; ++mask) {
    Int mu = x.mu();
    Rational a = x.a(), b = x.b(), c = x.c(), d = x.d();
    for (std::size_t i = 0; i < movable.size(); ++i) {
      if (((mask >> i) & 1U) == 0) continue;
      const auto [p, e] = movable[i];
      const Rational pk(BigInt(static_cast<long>(ipow(p, e / 2))));
      const Int full = ipow(p, e);
      if (mu % p == 0) {
        mu /= full;
        a *= pk;
        d *= pk;
        b /= pk;
        c /= pk;
      } else {
        mu *= full;
        a /= pk;
        d /= pk;
        b *= pk;
        c *= pk;
      }
    }
    try {
      out.emplace_back(x.level(), mu, a, b, c, d);
    } catch (const DenominatorTooLarge&) {
    }
  }
  return out;
}

/// Canonical presentation: the no-cancellation presentation with smallest mu.
inline GammaStarElem normalize_presentation(const GammaStarElem& x) {
  std::optional<GammaStarElem> best;
  for (auto& cand : presentations(x)) {
    if (!has_no_cancellation(cand)) continue;
    if (!best || cand.mu() < best->mu()) best = std::move(cand);
  }
  if (!best) throw std::logic_error("no cancellation-free presentation for " + x.str());
  return *best;
}

/// Minimal sigma | s_N with x in Gamma_0^{*,sigma}(N): lcm of the
/// denominators of ab and cd.
inline Int sigma_level(const GammaStarElem& x) {
  return std::lcm(denominator_of(x.a() * x.b()), denominator_of(x.c() * x.d()));
}

/// The same level read off ac and bd.
inline Int sigma_level_from_ac_bd(const GammaStarElem& x) {
  return std::lcm(denominator_of(x.a() * x.c()), denominator_of(x.b() * x.d()));
}

inline bool in_gamma0_star_sigma(const GammaStarElem& x, Int sigma) { return sigma % sigma_level(x) == 0; }

/// x * gamma * x^{-1} for a rational matrix gamma = (e f; g h), through the
/// closed conjugation formula. The result has rational entries.
inline Matrix2 conjugate_int(const GammaStarElem& x, const Matrix2& gamma) {
  const Rational& e = gamma.e.rational();
  const Rational& f = gamma.f.rational();
  const Rational& g = gamma.g.rational();
  const Rational& h = gamma.h.rational();
  const Rational& a = x.a();
  const Rational& b = x.b();
  const Rational& c = x.c();
  const Rational& d = x.d();
  const Rational n(BigInt(static_cast<long>(x.level())));
  const Rational mu(BigInt(static_cast<long>(x.mu())));
  const Rational co = n / mu;
  return {SqrtRat(b * d * g - a * c * f * n + a * d * e * mu - b * c * h * co),
          SqrtRat(a * a * f * mu - a * b * (e - h) - b * b * g / mu),
          SqrtRat(d * d * g * mu + c * d * n * (e - h) - c * c * f * n * n / mu),
          SqrtRat(a * c * f * n - b * d * g + a * d * h * mu - b * c * e * co)};
}

inline Matrix2 conjugate_int(const GammaStarElem& x, const IntMatrix2& gamma) {
  return conjugate_int(x, gamma.as_matrix());
}

/// Decides membership of a determinant-one real matrix in
/// Gamma_0^{*,s_N}(N) by trying every exact divisor.
inline std::optional<GammaStarElem> from_matrix(Int level, const Matrix2& m) {
  if (!(m.det() == SqrtRat(1))) throw DeterminantNotOne("from_matrix: determinant is " + m.det().str());
  for (const auto& ed : exact_divisors(level)) {
    const SqrtRat root = SqrtRat::sqrt_of(ed.mu());
    const SqrtRat a = m.e / root;
    const SqrtRat b = m.f * root;
    const SqrtRat c = m.g / (root * SqrtRat(ed.complement()));
    const SqrtRat d = m.h / root;
    if (!a.is_rational() || !b.is_rational() || !c.is_rational() || !d.is_rational()) continue;
    try {
      return normalize_presentation(
          GammaStarElem(level, ed.mu(), a.rational(), b.rational(), c.rational(), d.rational()));
    } catch (const DenominatorTooLarge&) {
    }
  }
  return std::nullopt;
}

/// Integrality of e^2, eg, g^2/N, 2Nef, N(eh+fg), 2gh, Nf^2, Nfh, h^2: the
/// conditions forced on a matrix whose conjugation maps Gamma_1(N) into
/// Gamma_0(N).
inline std::array<bool, 9> intent_check(const Matrix2& m, Int level) {
  const SqrtRat n(level);
  const SqrtRat two(2);
  return {(m.e * m.e).is_integer(),
          (m.e * m.g).is_integer(),
          (m.g * m.g / n).is_integer(),
          (two * n * m.e * m.f).is_integer(),
          sum_is_integer(n * m.e * m.h, n * m.f * m.g),
          (two * m.g * m.h).is_integer(),
          (n * m.f * m.f).is_integer(),
          (n * m.f * m.h).is_integer(),
          (m.h * m.h).is_integer()};
}

/// [Gamma_0^{*,sigma}(N) : Gamma_0(N)].
inline Int index_over_gamma0(Int level, Int sigma) {
  require_positive(level, "level");
  const Int s = square_part(level).s;
  if (sigma <= 0 || s % sigma != 0) {
    throw std::invalid_argument("sigma=" + std::to_string(sigma) + " does not divide s_N=" +
                                std::to_string(s));
  }
  Rational idx(BigInt(static_cast<long>(sigma * sigma)));
  for (Int p : prime_divisors(sigma)) {
    if (vp(p, level) == 2 * vp(p, sigma)) idx *= Rational(p + 1, p);
  }
  idx.canonicalize();
  const Int rest = level / (sigma * sigma);
  idx *= BigInt(static_cast<long>(ipow(2, count_prime_divisors(rest))));
  if (idx.get_den() != 1) throw std::logic_error("index is not an integer");
  return static_cast<Int>(idx.get_num().get_si());
}

/// diag(sqrt(M), 1/sqrt(M)) = (1/sqrt(M)) * (M, 0; 0, 1).
inline Matrix2 diagonal_scaling(Int m) {
  const SqrtRat root = SqrtRat::sqrt_of(m);
  return {root, 0, 0, root.inverse()};
}

/// C * x * C^{-1} for C = diagonal_scaling(M).
inline Matrix2 scale_conjugate(Int m, const Matrix2& x) {
  const Matrix2 c = diagonal_scaling(m);
  return c * x * c.inverse();
}

/// An element of Gamma_0^{*,sigma}(N) with the given mu and sigma-level
/// exactly sigma, built from the CRT solution of a*d*mu = u, b*c*(N/mu) = u-1.
/// `shift` walks through the admissible classes of u modulo N.
inline GammaStarElem atkin_lehner_type(Int level, Int mu, Int sigma, Int shift = 0) {
  if (!is_exact_divisor(level, mu)) throw NotExactDivisor(std::to_string(mu) + " is not exact");
  const Int s_n = square_part(level).s;
  if (sigma <= 0 || s_n % sigma != 0) throw std::invalid_argument("sigma must divide s_N");
  const Int co = level / mu;
  const Int g1 = std::gcd(sigma, square_part(mu).s);
  const Int g2 = std::gcd(sigma, square_part(co).s);
  const Int alpha = mu / (g1 * g1);
  const Int beta = co / (g2 * g2);
  const Int x0 = beta == 1 ? 0 : inverse_mod(alpha % beta, beta);
  const BigInt x = BigInt(static_cast<long>(x0)) + BigInt(static_cast<long>(shift)) * beta;
  const BigInt u = x * alpha;
  const BigInt y = (u - 1) / beta;
  return {level, mu, Rational(x, g1), Rational(y, g2), Rational(1, g2), Rational(1, g1)};
}

}  // namespace congnorm
