// The signature (2,1) lattices L(N, D) in traceless 2x2 matrices with the
// trace pairing, their conjugated variants, and the action of SL_2(R) by
// conjugation on lattice and discriminant group.
#pragma once

#include <algorithm>
#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "congnorm/gamma_star.hpp"
#include "congnorm/numtheory.hpp"
#include "congnorm/sqrt_rational.hpp"
#include "congnorm/subgroups.hpp"

namespace congnorm {

using RatMatrix3 = std::array<std::array<Rational, 3>, 3>;
using IntMatrix3 = std::array<std::array<Int, 3>, 3>;

inline Matrix2 basis_e() { return {0, 1, 0, 0}; }
inline Matrix2 basis_f() { return {0, 0, 1, 0}; }
inline Matrix2 basis_h() { return {1, 0, 0, -1}; }

/// The lattice spanned by sqrt(r*D*M/T) E, sqrt(r*D*T/M) F, sqrt(r*M*T/D) H
/// with N = M*T. T = N, M = 1, r = 1 gives L(N, D).
struct LatticeND {
  Int t = 1;
  Int m = 1;
  Int d = 1;
  Rational scale = 1;

  Int level() const { return t * m; }
  bool is_plain() const { return m == 1 && scale == 1; }

  void validate() const {
    if (t <= 0 || m <= 0 || d <= 0) throw std::invalid_argument("T, M, D must be positive");
    if (level() % d != 0) throw std::invalid_argument("D=" + std::to_string(d) + " does not divide N=" + std::to_string(level()));
    if (scale <= 0) throw std::invalid_argument("scale must be positive");
  }

  std::string str() const {
    std::string s = "L(" + std::to_string(level()) + "," + std::to_string(d) + ")";
    if (m != 1) s += "[T=" + std::to_string(t) + ",M=" + std::to_string(m) + "]";
    if (scale != 1) s += "*" + scale.get_str();
    return s;
  }
};

inline LatticeND lattice_nd(Int n, Int d) {
  LatticeND l{n, 1, d, 1};
  l.validate();
  return l;
}

/// The conjugated lattice for the (T, M, D) family.
inline LatticeND conj_family_lattice(Int t, Int m, Int d) {
  LatticeND l{t, m, d, 1};
  l.validate();
  return l;
}

namespace detail {
inline Rational ratio(Int p, Int q) {
  Rational r(BigInt(static_cast<long>(p)), BigInt(static_cast<long>(q)));
  r.canonicalize();
  return r;
}

inline Int as_int(const Rational& q, const char* what) {
  if (!is_integer(q)) throw std::domain_error(std::string(what) + " is not an integer: " + q.get_str());
  return static_cast<Int>(q.get_num().get_si());
}
}  // namespace detail

/// Basis in the order (E-part, F-part, H-part).
inline std::array<Matrix2, 3> lattice_basis(const LatticeND& l) {
  l.validate();
  const Rational r = l.scale;
  const SqrtRat alpha = SqrtRat::sqrt_of(Rational(r * detail::ratio(l.d * l.m, l.t)));
  const SqrtRat beta = SqrtRat::sqrt_of(Rational(r * detail::ratio(l.d * l.t, l.m)));
  const SqrtRat gamma = SqrtRat::sqrt_of(Rational(r * detail::ratio(l.m * l.t, l.d)));
  return {alpha * basis_e(), beta * basis_f(), gamma * basis_h()};
}

/// Gram matrix (b_i, b_j) computed from the trace pairing.
inline RatMatrix3 gram(const LatticeND& l) {
  const auto b = lattice_basis(l);
  RatMatrix3 g;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) g[i][j] = trace_pairing(b[i], b[j]).rational();
  }
  return g;
}

inline Rational gram_determinant(const RatMatrix3& g) {
  return g[0][0] * (g[1][1] * g[2][2] - g[1][2] * g[2][1]) - g[0][1] * (g[1][0] * g[2][2] - g[1][2] * g[2][0]) +
         g[0][2] * (g[1][0] * g[2][1] - g[1][1] * g[2][0]);
}

/// Integral with even diagonal.
inline bool is_even(const RatMatrix3& g) {
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      if (!is_integer(g[i][j])) return false;
    }
    if (g[i][i].get_num() % 2 != 0) return false;
  }
  return true;
}

/// The basis of the dual lattice with (dual_i, b_j) = delta_ij.
inline std::array<Matrix2, 3> dual_basis(const LatticeND& l) {
  const auto b = lattice_basis(l);
  const auto g = gram(l);
  const SqrtRat inv_ef(Rational(1 / g[0][1]));
  const SqrtRat inv_hh(Rational(1 / g[2][2]));
  return {inv_ef * b[1], inv_ef * b[0], inv_hh * b[2]};
}

/// Orders of the cyclic factors of L^* / L generated by the dual basis.
inline std::array<Int, 3> disc_orders(const LatticeND& l) {
  const auto g = gram(l);
  if (!is_even(g)) throw std::domain_error(l.str() + " is not an even lattice");
  const Int ef = detail::as_int(g[0][1], "pairing");
  return {ef, ef, detail::as_int(g[2][2], "norm")};
}

/// Matrix of v -> A v A^{-1} in the lattice basis (column j is the image of b_j).
inline RatMatrix3 action_matrix(const Matrix2& a, const LatticeND& l) {
  const auto b = lattice_basis(l);
  const auto u = dual_basis(l);
  const Matrix2 inv = a.inverse();
  RatMatrix3 out;
  for (int j = 0; j < 3; ++j) {
    const Matrix2 image = a * b[j] * inv;
    for (int i = 0; i < 3; ++i) out[i][j] = trace_pairing(image, u[i]).rational();
  }
  return out;
}

inline bool is_integral(const RatMatrix3& m) {
  for (const auto& row : m) {
    for (const auto& x : row) {
      if (!is_integer(x)) return false;
    }
  }
  return true;
}

/// Whether conjugation by a real matrix maps the lattice onto itself.
inline bool preserves_lattice(const Matrix2& a, const LatticeND& l) { return is_integral(action_matrix(a, l)); }

/// The nine integrality conditions for an element of Gamma_0^{*,s_N}(N)
/// acting on L(N, D), in presentation coordinates.
inline std::array<bool, 9> lattice_conditions(const GammaStarElem& x, Int d) {
  const Int n = x.level();
  if (d <= 0 || n % d != 0) throw std::invalid_argument("D must divide N");
  const Rational mu(BigInt(static_cast<long>(x.mu())));
  const Rational co(BigInt(static_cast<long>(n / x.mu())));
  const Rational dd(BigInt(static_cast<long>(d)));
  const Rational two_n_d(BigInt(static_cast<long>(2 * n / d)));
  const Rational &a = x.a(), &b = x.b(), &c = x.c(), &e = x.d();
  return {is_integer(Rational(a * a * mu)),
          is_integer(Rational(dd * a * c)),
          is_integer(Rational(c * c * co)),
          is_integer(Rational(two_n_d * a * b)),
          is_integer(Rational(a * e * mu + b * c * co)),
          is_integer(Rational(two_n_d * c * e)),
          is_integer(Rational(b * b * co)),
          is_integer(Rational(dd * b * e)),
          is_integer(Rational(e * e * mu))};
}

inline bool acts_on_lattice(const GammaStarElem& x, const LatticeND& l) {
  if (!l.is_plain()) throw std::invalid_argument("presentation test needs a plain L(N, D); use preserves_lattice");
  if (x.level() != l.level()) throw LevelMismatch("element level differs from lattice level");
  const auto flags = lattice_conditions(x, l.d);
  return std::all_of(flags.begin(), flags.end(), [](bool f) { return f; });
}

/// sigma with SAut^+ = Gamma_0^{*,sigma}(N): gcd(D, 2N/D) / 2^theta,
/// theta = [2 v2(D) = v2(N) + 1].
inline Int saut_plus_sigma(const LatticeND& l) {
  l.validate();
  const Int n = l.level();
  const Int g = std::gcd(l.d, 2 * n / l.d);
  const int theta = 2 * vp(2, l.d) == vp(2, n) + 1 ? 1 : 0;
  return g / ipow(2, theta);
}

/// Action on L^*/L in dual coordinates: column j is the image of the j-th
/// generator, row i reduced modulo the i-th order.
struct DiscAction {
  std::array<Int, 3> orders{};
  IntMatrix3 m{};

  bool is_identity() const {
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        if (m[i][j] != (i == j ? 1 % orders[i] : 0)) return false;
      }
    }
    return true;
  }

  /// Composition: (x * y) acts as x after y.
  friend DiscAction operator*(const DiscAction& x, const DiscAction& y) {
    DiscAction out{x.orders, {}};
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        BigInt s = 0;
        for (int k = 0; k < 3; ++k) s += BigInt(static_cast<long>(x.m[i][k])) * y.m[k][j];
        out.m[i][j] = mod_big(s, x.orders[i]);
      }
    }
    return out;
  }

  friend bool operator==(const DiscAction&, const DiscAction&) = default;
};

inline DiscAction disc_action(const Matrix2& a, const LatticeND& l) {
  if (!preserves_lattice(a, l)) throw std::invalid_argument("matrix does not act on " + l.str());
  DiscAction out;
  out.orders = disc_orders(l);
  const auto b = lattice_basis(l);
  const auto u = dual_basis(l);
  const Matrix2 inv = a.inverse();
  for (int j = 0; j < 3; ++j) {
    const Matrix2 image = a * u[j] * inv;
    for (int i = 0; i < 3; ++i) {
      const Rational coord = trace_pairing(image, b[i]).rational();
      if (!is_integer(coord)) throw std::logic_error("dual lattice not preserved");
      out.m[i][j] = mod_big(coord.get_num(), out.orders[i]);
    }
  }
  return out;
}

inline DiscAction disc_action(const GammaStarElem& x, const LatticeND& l) { return disc_action(matrix_of(x), l); }
inline DiscAction disc_action(const IntMatrix2& g, const LatticeND& l) { return disc_action(g.as_matrix(), l); }

/// H = {x in (Z/N)^x : x^2 = 1 mod D}; the discriminant kernel of L(N, D) is Gamma_H.
inline ResidueSubgroup discriminant_kernel(const LatticeND& l) {
  l.validate();
  return subgroup_squares_trivial(l.level(), l.d);
}

/// Membership in the discriminant kernel described in closed form: T | c,
/// M | b and a^2 = d^2 = 1 mod D.
inline bool in_discriminant_kernel(const IntMatrix2& g, const LatticeND& l) {
  l.validate();
  if (g.det() != 1 || mod_big(g.c, l.t) != 0 || mod_big(g.b, l.m) != 0) return false;
  return mod_big(g.a * g.a - 1, l.d) == 0 && mod_big(g.d * g.d - 1, l.d) == 0;
}

struct StabilizerFlags {
  bool stabilizes_h_part = false;
  bool fixes_h_part_pointwise = false;
  bool separates_ef = false;
};

/// Flags read off the discriminant action: the image of the H-generator
/// stays in its cyclic group, is fixed, and no generator leaves its own
/// cyclic factor.
inline StabilizerFlags stabilizer_tests(const Matrix2& a, const LatticeND& l) {
  const DiscAction act = disc_action(a, l);
  const auto& m = act.m;
  StabilizerFlags f;
  f.stabilizes_h_part = m[0][2] == 0 && m[1][2] == 0;
  f.fixes_h_part_pointwise = f.stabilizes_h_part && m[2][2] == 1 % act.orders[2];
  f.separates_ef = f.stabilizes_h_part && m[1][0] == 0 && m[2][0] == 0 && m[0][1] == 0 && m[2][1] == 0;
  return f;
}

inline StabilizerFlags stabilizer_tests(const GammaStarElem& x, const LatticeND& l) {
  return stabilizer_tests(matrix_of(x), l);
}

/// Rescaling multiplies every basis vector by sqrt(r); the result must stay even.
inline LatticeND rescale(const LatticeND& l, const Rational& r) {
  LatticeND out = l;
  out.scale = l.scale * r;
  out.scale.canonicalize();
  out.validate();
  if (!is_even(gram(out))) throw std::invalid_argument("rescaling by " + r.get_str() + " is not even");
  return out;
}

/// The (T, M, D) family lattice with the same basis vectors, if any.
inline std::optional<LatticeND> as_family_lattice(const LatticeND& l) {
  const auto g = gram(l);
  if (!is_integral(g)) return std::nullopt;
  const auto target = lattice_basis(l);
  // E and F coefficients multiply to D; their ratio is T/M.
  const Rational d = g[0][1];
  const Rational ratio_sq = (target[1].g * target[1].g).rational() / (target[0].f * target[0].f).rational();
  const Rational mt = g[2][2] * d / 2;
  if (!is_integer(d) || !is_integer(mt)) return std::nullopt;
  const auto exact_sqrt = [](const BigInt& x) -> std::optional<BigInt> {
    const BigInt r = sqrt(x);
    if (r * r != x) return std::nullopt;
    return r;
  };
  const auto num = exact_sqrt(ratio_sq.get_num());
  const auto den = exact_sqrt(ratio_sq.get_den());
  if (!num || !den) return std::nullopt;
  // M^2 = MT / (T/M).
  const Rational m_sq = mt * Rational(*den, *num);
  if (!is_integer(m_sq)) return std::nullopt;
  const auto m_big = exact_sqrt(m_sq.get_num());
  if (!m_big) return std::nullopt;
  const Int m = static_cast<Int>(m_big->get_si());
  const Int prod = static_cast<Int>(mt.get_num().get_si());
  if (prod % m != 0) return std::nullopt;
  LatticeND out{prod / m, m, static_cast<Int>(d.get_num().get_si()), 1};
  if (out.level() % out.d != 0) return std::nullopt;
  if (lattice_basis(out) != target) return std::nullopt;
  return out;
}

/// Isometry invariants. With g = gcd(D, N/D) the lattice is g times the
/// even lattice L(N/g^2, D/g); the remaining data are read from that one.
struct IsoInvariants {
  Int rescale_min = 1;
  /// |L^*/L| of the reduced lattice.
  Int disc_order = 1;
  /// (p, number of subgroups of order p in L^*/L) of the reduced lattice, p | N/g^2.
  std::vector<std::pair<Int, Int>> subgroup_counts;

  friend bool operator==(const IsoInvariants&, const IsoInvariants&) = default;
};

inline IsoInvariants iso_invariants(const LatticeND& l) {
  l.validate();
  const Int n = l.level();
  IsoInvariants out;
  out.rescale_min = std::gcd(l.d, n / l.d);
  const Int g = out.rescale_min;
  const LatticeND reduced = lattice_nd(n / (g * g), l.d / g);
  const auto orders = disc_orders(reduced);
  out.disc_order = orders[0] * orders[1] * orders[2];
  for (Int p : prime_divisors(reduced.level())) {
    int rank = 0;
    for (Int o : orders) rank += o % p == 0 ? 1 : 0;
    out.subgroup_counts.emplace_back(p, (ipow(p, rank) - 1) / (p - 1));
  }
  return out;
}

}  // namespace congnorm
