// Integer number theory for congruence-subgroup levels: valuations, square
// parts, exact divisors and their {+-1}^{p|N} group law, phi and lambda.
//
// Levels are desk-scale (well below 2^31), so everything here works on
// std::int64_t and factors by trial division.
#pragma once

#include <algorithm>
#include <cstdint>
#include <iterator>
#include <numeric>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace congnorm {

using Int = std::int64_t;

/// One prime-power factor p^e.
struct PrimePower {
  Int p;
  int e;
  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

using Factorization = std::vector<PrimePower>;

inline void require_positive(Int n, const char* what) {
  if (n <= 0) throw std::invalid_argument(std::string(what) + " must be positive");
}

inline bool is_prime(Int n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  if (n % 3 == 0) return n == 3;
  for (Int d = 5; d * d <= n; d += 6) {
    if (n % d == 0 || n % (d + 2) == 0) return false;
  }
  return true;
}

/// Trial division with a 2,3 wheel. Result sorted by prime.
inline Factorization factorize(Int n) {
  require_positive(n, "factorize argument");
  Factorization out;
  auto strip = [&](Int p) {
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    if (e > 0) out.push_back({p, e});
  };
  strip(2);
  strip(3);
  for (Int d = 5; d * d <= n; d += 6) {
    strip(d);
    strip(d + 2);
  }
  if (n > 1) out.push_back({n, 1});
  return out;
}

inline std::vector<Int> prime_divisors(Int n) {
  std::vector<Int> ps;
  for (const auto& [p, e] : factorize(n)) ps.push_back(p);
  return ps;
}

inline int count_prime_divisors(Int n) { return static_cast<int>(factorize(n).size()); }

/// p-adic valuation v_p(m).
inline int vp(Int p, Int m) {
  if (!is_prime(p)) throw std::invalid_argument("vp: " + std::to_string(p) + " is not prime");
  if (m == 0) throw std::invalid_argument("vp: valuation of zero is undefined");
  if (m < 0) m = -m;
  int k = 0;
  while (m % p == 0) {
    m /= p;
    ++k;
  }
  return k;
}

inline Int ipow(Int base, int exp) {
  Int r = 1;
  while (exp-- > 0) r *= base;
  return r;
}

inline bool is_squarefree(Int n) {
  for (const auto& [p, e] : factorize(n)) {
    if (e > 1) return false;
  }
  return true;
}

/// m = s^2 * t with t squarefree.
struct SquarePart {
  Int s = 1;
  Int t = 1;
  friend bool operator==(const SquarePart&, const SquarePart&) = default;
};

inline SquarePart square_part(Int m) {
  if (m == 0) throw std::invalid_argument("square_part: argument must be positive");
  require_positive(m, "square_part argument");
  SquarePart r;
  for (const auto& [p, e] : factorize(m)) {
    r.s *= ipow(p, e / 2);
    if (e % 2 == 1) r.t *= p;
  }
  return r;
}

inline Int square_root_of_square_part(Int m) { return square_part(m).s; }
inline Int squarefree_part(Int m) { return square_part(m).t; }

inline std::vector<Int> divisors(Int n) {
  require_positive(n, "divisors argument");
  std::vector<Int> ds{1};
  for (const auto& [p, e] : factorize(n)) {
    const std::size_t base = ds.size();
    Int pk = 1;
    for (int k = 1; k <= e; ++k) {
      pk *= p;
      for (std::size_t i = 0; i < base; ++i) ds.push_back(ds[i] * pk);
    }
  }
  std::sort(ds.begin(), ds.end());
  return ds;
}

/// An exact divisor mu of n, i.e. mu | n and gcd(mu, n/mu) = 1. Carries its
/// ambient n so that mixing levels is caught.
class ExactDivisor {
 public:
  ExactDivisor(Int n, Int mu) : n_(n), mu_(mu) {
    require_positive(n, "exact divisor ambient level");
    if (mu <= 0 || n % mu != 0 || std::gcd(mu, n / mu) != 1) {
      throw std::invalid_argument(std::to_string(mu) + " is not an exact divisor of " +
                                  std::to_string(n));
    }
  }

  Int n() const { return n_; }
  Int mu() const { return mu_; }
  Int complement() const { return n_ / mu_; }

  friend bool operator==(const ExactDivisor&, const ExactDivisor&) = default;
  friend auto operator<=>(const ExactDivisor&, const ExactDivisor&) = default;

 private:
  Int n_;
  Int mu_;
};

inline bool is_exact_divisor(Int n, Int mu) {
  return n > 0 && mu > 0 && n % mu == 0 && std::gcd(mu, n / mu) == 1;
}

/// All exact divisors of n, ascending; there are 2^{#p|n} of them.
inline std::vector<ExactDivisor> exact_divisors(Int n) {
  require_positive(n, "exact_divisors argument");
  std::vector<Int> mus{1};
  for (const auto& [p, e] : factorize(n)) {
    const Int q = ipow(p, e);
    const std::size_t base = mus.size();
    for (std::size_t i = 0; i < base; ++i) mus.push_back(mus[i] * q);
  }
  std::sort(mus.begin(), mus.end());
  std::vector<ExactDivisor> out;
  out.reserve(mus.size());
  for (Int mu : mus) out.emplace_back(n, mu);
  return out;
}

/// kappa = mu*nu / gcd(mu,nu)^2: the symmetric difference of prime supports.
inline ExactDivisor exact_divisor_product(const ExactDivisor& mu, const ExactDivisor& nu) {
  if (mu.n() != nu.n()) {
    throw std::invalid_argument("exact_divisor_product: ambient levels " + std::to_string(mu.n()) +
                                " and " + std::to_string(nu.n()) + " differ");
  }
  const Int g = std::gcd(mu.mu(), nu.mu());
  return ExactDivisor(mu.n(), (mu.mu() / g) * (nu.mu() / g));
}

/// An element of {+-1}^{p|d}, stored as the set of primes carrying -1.
/// Deliberately not an exact divisor of d.
struct PrimeSignSet {
  Int d = 1;
  std::vector<Int> primes;
  friend bool operator==(const PrimeSignSet&, const PrimeSignSet&) = default;
};

/// The canonical projection {+-1}^{p|N} -> {+-1}^{p|d} for d | N.
inline PrimeSignSet exact_divisor_project(const ExactDivisor& mu, Int d) {
  if (d <= 0 || mu.n() % d != 0) {
    throw std::invalid_argument("exact_divisor_project: " + std::to_string(d) +
                                " does not divide " + std::to_string(mu.n()));
  }
  PrimeSignSet out{d, {}};
  for (Int p : prime_divisors(mu.mu())) {
    if (d % p == 0) out.primes.push_back(p);
  }
  return out;
}

/// Group law on PrimeSignSet (symmetric difference).
inline PrimeSignSet sign_set_product(const PrimeSignSet& x, const PrimeSignSet& y) {
  if (x.d != y.d) throw std::invalid_argument("sign_set_product: different targets");
  PrimeSignSet out{x.d, {}};
  std::set_symmetric_difference(x.primes.begin(), x.primes.end(), y.primes.begin(),
                                y.primes.end(), std::back_inserter(out.primes));
  return out;
}

inline Int euler_phi(Int n) {
  require_positive(n, "euler_phi argument");
  Int r = n;
  for (const auto& [p, e] : factorize(n)) r = r / p * (p - 1);
  return r;
}

inline Int carmichael_lambda(Int n) {
  require_positive(n, "carmichael_lambda argument");
  Int r = 1;
  for (const auto& [p, e] : factorize(n)) {
    Int part = ipow(p, e - 1) * (p - 1);
    if (p == 2 && e >= 3) part /= 2;
    r = std::lcm(r, part);
  }
  return r;
}

inline Int mod(Int x, Int n) {
  const Int r = x % n;
  return r < 0 ? r + n : r;
}

__extension__ using Wide = __int128;

inline Int mulmod(Int a, Int b, Int n) {
  return static_cast<Int>((static_cast<Wide>(mod(a, n)) * mod(b, n)) % n);
}

inline Int powmod(Int base, Int exp, Int n) {
  if (n == 1) return 0;
  Int r = 1;
  base = mod(base, n);
  while (exp > 0) {
    if (exp & 1) r = mulmod(r, base, n);
    base = mulmod(base, base, n);
    exp >>= 1;
  }
  return r;
}

/// Extended Euclid: returns g = gcd(a,b) and x, y with a*x + b*y = g.
struct Bezout {
  Int g, x, y;
};

inline Bezout ext_gcd(Int a, Int b) {
  Int old_r = a, r = b, old_s = 1, s = 0, old_t = 0, t = 1;
  while (r != 0) {
    const Int q = old_r / r;
    std::tie(old_r, r) = std::pair{r, old_r - q * r};
    std::tie(old_s, s) = std::pair{s, old_s - q * s};
    std::tie(old_t, t) = std::pair{t, old_t - q * t};
  }
  if (old_r < 0) return {-old_r, -old_s, -old_t};
  return {old_r, old_s, old_t};
}

inline Int inverse_mod(Int a, Int n) {
  if (n == 1) return 0;
  const auto [g, x, y] = ext_gcd(mod(a, n), n);
  if (g != 1) {
    throw std::invalid_argument(std::to_string(a) + " is not a unit modulo " + std::to_string(n));
  }
  return mod(x, n);
}

/// x = r1 mod m1, x = r2 mod m2 for coprime moduli; result in [0, m1*m2).
inline Int crt(Int r1, Int m1, Int r2, Int m2) {
  if (std::gcd(m1, m2) != 1) throw std::invalid_argument("crt: moduli not coprime");
  const Int m = m1 * m2;
  if (m == 1) return 0;
  const Int k = mulmod(mod(r2 - r1, m2), inverse_mod(m1, m2), m2);
  return mod(r1 + m1 * k, m);
}

}  // namespace congnorm
