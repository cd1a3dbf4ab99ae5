#pragma once

// Decision procedure for orthogonality-preserving local measurements (OPLMs).
//
// For a cut X|YZ, a measurement element on the joint party YZ is a Hermitian
// n x n matrix E = (m_{c,c'}) with n = dim(YZ). Every pair of distinct states
// x, y of an orthogonal set must satisfy <x| I (x) E |y> = 0. Writing each
// upper-triangle entry as m = u + v*w with real u, v (w = exp(2 pi i / 3)) and
// each diagonal entry as a real t, the lower triangle is conj(m) = (u - v) - v*w
// and every constraint becomes two rational linear relations on n^2 real
// unknowns: the coordinates of 1 and of w. Rank over Q equals rank over R, so
// the rational kernel dimension is the real dimension of the space of
// admissible Hermitian elements.
//
// The identity always lies in that space. Nullity 1 therefore means every
// orthogonality-preserving element is proportional to the identity (the cut
// admits only trivial OPLMs). Nullity > 1 gives a Hermitian H not
// proportional to I in the kernel, and I + eps*H is a positive element for
// small eps, i.e. a nontrivial OPLM.

#include <gmpxx.h>

#include <Eigen/Dense>

#include <array>
#include <chrono>
#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "oplm/bipartition.hpp"
#include "oplm/linalg.hpp"
#include "oplm/states.hpp"

namespace oplm {

/// Thrown when a set handed to the verifier or prover is not orthogonal.
class NonOrthogonalError : public std::invalid_argument {
 public:
  NonOrthogonalError(std::string first, std::string second)
      : std::invalid_argument("states '" + first + "' and '" + second + "' are not orthogonal"),
        first_(std::move(first)),
        second_(std::move(second)) {}
  const std::string& first() const { return first_; }
  const std::string& second() const { return second_; }

 private:
  std::string first_;
  std::string second_;
};

inline void require_orthogonal(const StateSet& s) {
  auto chk = check_pairwise_orthogonal(s);
  if (!chk.orthogonal)
    throw NonOrthogonalError(s[chk.offending->first].label, s[chk.offending->second].label);
}

enum class UnknownKind { diagonal, upper_real, upper_omega };

inline const char* to_string(UnknownKind k) {
  switch (k) {
    case UnknownKind::diagonal: return "diagonal";
    case UnknownKind::upper_real: return "upper-real";
    default: return "upper-omega";
  }
}

struct UnknownIndex {
  UnknownKind kind = UnknownKind::diagonal;
  JointIndex row;
  JointIndex col;
};

/// Column layout of the n^2 real unknowns: positions (c, c') with c <= c' in
/// row-major order; a diagonal position takes one column, an upper position
/// two (coordinate of 1, then of w).
class UnknownLayout {
 public:
  UnknownLayout() = default;
  explicit UnknownLayout(std::size_t n) : n_(n), offset_(n + 1, 0) {
    for (std::size_t c = 0; c < n; ++c) offset_[c + 1] = offset_[c] + 1 + 2 * (n - 1 - c);
  }
  std::size_t joint() const { return n_; }
  std::size_t size() const { return n_ * n_; }
  std::size_t diagonal(std::size_t c) const { return offset_[c]; }
  /// Column of the real coordinate u of m_{c,c'}, c < c'; v sits at +1.
  std::size_t upper(std::size_t c, std::size_t cp) const { return offset_[c] + 1 + 2 * (cp - c - 1); }

 private:
  std::size_t n_ = 0;
  std::vector<std::size_t> offset_;
};

/// Coefficient of m_{c,c'} (flattened joint indices) in <x| I (x) E |y>.
using FlatTerms = std::map<std::pair<std::size_t, std::size_t>, CycNum>;

inline FlatTerms constraint_terms(const Ket& x, const Ket& y, Bipartition b) {
  if (!(x.dims() == y.dims())) throw std::invalid_argument("constraint_row: dims mismatch");
  const CutShape shape = cut_shape(x.dims(), b);
  std::map<int, std::vector<std::pair<std::size_t, CycNum>>> ycells;
  for (const auto& c : cells(y, b)) ycells[c.row].emplace_back(flatten(shape, c.col), c.amp);
  FlatTerms out;
  for (const auto& cx : cells(x, b)) {
    auto it = ycells.find(cx.row);
    if (it == ycells.end()) continue;
    const CycNum a = cx.amp.conj();
    const std::size_t fc = flatten(shape, cx.col);
    for (const auto& [fcp, amp] : it->second) {
      auto [slot, inserted] = out.try_emplace({fc, fcp}, a * amp);
      if (!inserted) slot->second += a * amp;
    }
  }
  for (auto it = out.begin(); it != out.end();) it = it->second.is_zero() ? out.erase(it) : std::next(it);
  return out;
}

/// Coefficient map (ij, kl) -> coefficient of m_{ij,kl} in <x| I (x) E |y>,
/// before any Hermitian substitution.
inline std::map<std::pair<JointIndex, JointIndex>, CycNum> constraint_row(const Ket& x, const Ket& y,
                                                                          Bipartition b) {
  const CutShape shape = cut_shape(x.dims(), b);
  std::map<std::pair<JointIndex, JointIndex>, CycNum> out;
  for (const auto& [pos, a] : constraint_terms(x, y, b))
    out.emplace(std::make_pair(unflatten(shape, pos.first), unflatten(shape, pos.second)), a);
  return out;
}

struct RowOrigin {
  std::size_t bra = 0;  // index of <x|
  std::size_t ket = 0;  // index of |y>
  int coordinate = 0;   // 0: coefficient of 1, 1: coefficient of w
};

struct SystemOptions {
  /// Also emit the rows of <y|E|x> = 0, which are conjugates of <x|E|y> = 0
  /// and never change the rank.
  bool include_conjugate_rows = false;
};

struct ConstraintSystem {
  Bipartition bipartition = Bipartition::A_BC;
  CutShape shape;
  UnknownLayout layout;
  std::vector<UnknownIndex> unknowns;
  std::vector<SparseRow<BigInt>> rows;
  std::vector<RowOrigin> origins;
  StateSet source;  // kept for the independent floating-point route
  SystemOptions options;

  std::size_t joint() const { return layout.joint(); }
  std::size_t cols() const { return layout.size(); }
};

namespace detail {

inline void accumulate(std::map<std::size_t, BigRational>& row, std::size_t col, const BigRational& v) {
  if (v.is_zero()) return;
  auto [it, inserted] = row.try_emplace(col, v);
  if (!inserted) {
    it->second += v;
    if (it->second.is_zero()) row.erase(it);
  }
}

inline SparseRow<BigInt> clear_denominators(const std::map<std::size_t, BigRational>& row) {
  BigInt l = 1;
  for (const auto& [c, v] : row) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), v.denominator().get_mpz_t());
  SparseRow<BigInt> out;
  out.reserve(row.size());
  for (const auto& [c, v] : row) out.emplace_back(c, v.numerator() * (l / v.denominator()));
  return out;
}

}  // namespace detail

/// Expands a coefficient map into the two real rows (coordinates of 1 and w).
inline std::array<SparseRow<BigInt>, 2> expand_terms(const FlatTerms& terms, const UnknownLayout& layout) {
  std::map<std::size_t, BigRational> one;
  std::map<std::size_t, BigRational> om;
  for (const auto& [pos, a] : terms) {
    const auto [c, cp] = pos;
    const BigRational& a0 = a.u();
    const BigRational& a1 = a.v();
    if (c == cp) {
      const std::size_t t = layout.diagonal(c);
      detail::accumulate(one, t, a0);
      detail::accumulate(om, t, a1);
    } else if (c < cp) {
      // a (U + V w) = (a0 U - a1 V) + (a1 U + (a0 - a1) V) w
      const std::size_t u = layout.upper(c, cp);
      detail::accumulate(one, u, a0);
      detail::accumulate(one, u + 1, -a1);
      detail::accumulate(om, u, a1);
      detail::accumulate(om, u + 1, a0 - a1);
    } else {
      // a ((U - V) - V w) = (a0 U + (a1 - a0) V) + (a1 U - a0 V) w
      const std::size_t u = layout.upper(cp, c);
      detail::accumulate(one, u, a0);
      detail::accumulate(one, u + 1, a1 - a0);
      detail::accumulate(om, u, a1);
      detail::accumulate(om, u + 1, -a0);
    }
  }
  return {detail::clear_denominators(one), detail::clear_denominators(om)};
}

inline ConstraintSystem build_system(const StateSet& s, Bipartition b, const SystemOptions& opt = {}) {
  require_orthogonal(s);
  ConstraintSystem cs;
  cs.bipartition = b;
  cs.shape = cut_shape(s.dims(), b);
  const std::size_t n = cs.shape.joint();
  cs.layout = UnknownLayout(n);
  cs.unknowns.reserve(n * n);
  for (std::size_t c = 0; c < n; ++c)
    for (std::size_t cp = c; cp < n; ++cp) {
      const auto r = unflatten(cs.shape, c);
      const auto k = unflatten(cs.shape, cp);
      if (c == cp) {
        cs.unknowns.push_back({UnknownKind::diagonal, r, k});
      } else {
        cs.unknowns.push_back({UnknownKind::upper_real, r, k});
        cs.unknowns.push_back({UnknownKind::upper_omega, r, k});
      }
    }
  auto emit = [&](std::size_t i, std::size_t j) {
    auto rows = expand_terms(constraint_terms(s[i].ket, s[j].ket, b), cs.layout);
    for (int coord = 0; coord < 2; ++coord) {
      cs.rows.push_back(std::move(rows[coord]));
      cs.origins.push_back({i, j, coord});
    }
  };
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = i + 1; j < s.size(); ++j) {
      emit(i, j);
      if (opt.include_conjugate_rows) emit(j, i);
    }
  cs.source = s;
  cs.options = opt;
  return cs;
}

/// True iff (all diagonal unknowns = 1, everything else = 0) satisfies every row.
inline bool identity_in_kernel(const ConstraintSystem& cs) {
  std::vector<bool> diag(cs.cols(), false);
  for (std::size_t c = 0; c < cs.joint(); ++c) diag[cs.layout.diagonal(c)] = true;
  for (const auto& row : cs.rows) {
    BigInt acc = 0;
    for (const auto& [c, v] : row)
      if (diag[c]) acc += v;
    if (acc != 0) return false;
  }
  return true;
}

enum class NullityMode { exact, modp, floating };
enum class Verdict { trivial, nontrivial, inconclusive };

inline const char* to_string(NullityMode m) {
  switch (m) {
    case NullityMode::exact: return "exact";
    case NullityMode::modp: return "modp";
    default: return "float";
  }
}

inline NullityMode parse_mode(const std::string& s) {
  if (s == "exact") return NullityMode::exact;
  if (s == "modp") return NullityMode::modp;
  if (s == "float") return NullityMode::floating;
  throw std::invalid_argument("unknown mode '" + s + "'");
}

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::trivial: return "trivial";
    case Verdict::nontrivial: return "nontrivial";
    default: return "inconclusive";
  }
}

struct NullityReport {
  Bipartition bipartition = Bipartition::A_BC;
  NullityMode mode = NullityMode::exact;
  std::size_t nullity = 0;
  std::size_t rows = 0;
  std::size_t cols = 0;
  bool identity_in_kernel = false;
  std::vector<std::uint64_t> primes_used;
  std::vector<std::size_t> nullity_per_prime;
  Verdict verdict = Verdict::inconclusive;
  double elapsed_ms = 0.0;
};

inline const std::vector<std::uint64_t>& default_primes() {
  static const std::vector<std::uint64_t> p = {2147483647ULL, 2147483629ULL, 2147483587ULL};
  return p;
}

namespace detail {

inline double ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

inline NullityReport base_report(const ConstraintSystem& cs, NullityMode mode) {
  NullityReport r;
  r.bipartition = cs.bipartition;
  r.mode = mode;
  r.rows = cs.rows.size();
  r.cols = cs.cols();
  r.identity_in_kernel = identity_in_kernel(cs);
  return r;
}

}  // namespace detail

/// Exact rational kernel dimension via fraction-free elimination.
inline NullityReport nullity_exact(const ConstraintSystem& cs) {
  const auto t0 = std::chrono::steady_clock::now();
  NullityReport r = detail::base_report(cs, NullityMode::exact);
  r.nullity = fraction_free_echelon(cs.rows, cs.cols()).nullity();
  r.verdict = r.nullity == 1 ? Verdict::trivial : Verdict::nontrivial;
  r.elapsed_ms = detail::ms_since(t0);
  return r;
}

inline void validate_primes(const std::vector<std::uint64_t>& primes) {
  if (primes.empty()) throw std::invalid_argument("at least one prime is required");
  std::set<std::uint64_t> seen;
  for (auto p : primes) {
    if (p <= 3) throw std::invalid_argument("primes must exceed 3 (got " + std::to_string(p) + ")");
    if (p >= (1ULL << 32)) throw std::invalid_argument("primes must be below 2^32");
    BigInt bp(static_cast<unsigned long>(p));
    if (mpz_probab_prime_p(bp.get_mpz_t(), 30) == 0)
      throw std::invalid_argument(std::to_string(p) + " is not prime");
    if (!seen.insert(p).second) throw std::invalid_argument("primes must be distinct");
  }
}

/// Kernel dimension modulo each prime. Reduction mod p can only lower the rank,
/// so the modular nullity bounds the exact one from above; since the exact
/// nullity is at least 1, a modular nullity of 1 certifies triviality. Larger
/// values are inconclusive, never a refutation.
inline NullityReport nullity_modp(const ConstraintSystem& cs,
                                  const std::vector<std::uint64_t>& primes = default_primes()) {
  validate_primes(primes);
  const auto t0 = std::chrono::steady_clock::now();
  NullityReport r = detail::base_report(cs, NullityMode::modp);
  r.nullity = cs.cols();
  for (auto p : primes) {
    const std::size_t k = cs.cols() - modp_rank(cs.rows, cs.cols(), p);
    r.primes_used.push_back(p);
    r.nullity_per_prime.push_back(k);
    r.nullity = std::min(r.nullity, k);
  }
  r.verdict = r.nullity == 1 ? Verdict::trivial : Verdict::inconclusive;
  r.elapsed_ms = detail::ms_since(t0);
  return r;
}

/// Dense real matrix of the same constraints, built directly from complex
/// double amplitudes with m_{c,c'} = X + iY (c < c'), m_{c',c} = X - iY and
/// real diagonals. Shares no code with the integer route beyond the cell view.
inline Eigen::MatrixXd float_constraint_matrix(const StateSet& s, Bipartition b,
                                               const SystemOptions& opt = {}) {
  const CutShape shape = cut_shape(s.dims(), b);
  const std::size_t n = shape.joint();
  // column of Re m_{c,c'} (Im follows) and of diagonal t_c, own layout
  std::vector<std::vector<Eigen::Index>> col(n, std::vector<Eigen::Index>(n, -1));
  Eigen::Index next = 0;
  for (std::size_t c = 0; c < n; ++c)
    for (std::size_t cp = c; cp < n; ++cp) {
      col[c][cp] = next;
      next += (c == cp) ? 1 : 2;
    }
  std::vector<std::vector<std::pair<int, std::pair<std::size_t, std::complex<double>>>>> cellv(s.size());
  for (std::size_t i = 0; i < s.size(); ++i)
    for (const auto& c : cells(s[i].ket, b))
      cellv[i].push_back({c.row, {flatten(shape, c.col), c.amp.to_complex()}});

  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = i + 1; j < s.size(); ++j) {
      pairs.emplace_back(i, j);
      if (opt.include_conjugate_rows) pairs.emplace_back(j, i);
    }
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(2 * pairs.size()),
                                            static_cast<Eigen::Index>(n * n));
  Eigen::Index r = 0;
  for (const auto& [i, j] : pairs) {
    for (const auto& [rx, cx] : cellv[i])
      for (const auto& [ry, cy] : cellv[j]) {
        if (rx != ry) continue;
        const std::complex<double> a = std::conj(cx.second) * cy.second;
        const std::size_t c = cx.first;
        const std::size_t cp = cy.first;
        if (c == cp) {
          m(r, col[c][c]) += a.real();
          m(r + 1, col[c][c]) += a.imag();
        } else if (c < cp) {
          const Eigen::Index k = col[c][cp];  // a (X + iY)
          m(r, k) += a.real();
          m(r, k + 1) -= a.imag();
          m(r + 1, k) += a.imag();
          m(r + 1, k + 1) += a.real();
        } else {
          const Eigen::Index k = col[cp][c];  // a (X - iY)
          m(r, k) += a.real();
          m(r, k + 1) += a.imag();
          m(r + 1, k) += a.imag();
          m(r + 1, k + 1) -= a.real();
        }
      }
    r += 2;
  }
  return m;
}

/// Advisory numerical kernel dimension; never authoritative.
inline NullityReport nullity_float(const ConstraintSystem& cs, double tol = 1e-8) {
  const auto t0 = std::chrono::steady_clock::now();
  NullityReport r = detail::base_report(cs, NullityMode::floating);
  const auto fk = float_nullity(float_constraint_matrix(cs.source, cs.bipartition, cs.options), tol);
  r.nullity = fk.nullity;
  r.verdict = r.nullity == 1 ? Verdict::trivial : Verdict::nontrivial;
  r.elapsed_ms = detail::ms_since(t0);
  return r;
}

struct KernelElement {
  std::vector<BigRational> coords;  // indexed like ConstraintSystem::unknowns
};

/// Exact rational kernel basis of the constraint system.
inline std::vector<KernelElement> exact_kernel(const ConstraintSystem& cs) {
  std::vector<KernelElement> out;
  for (auto& v : kernel_basis(fraction_free_echelon(cs.rows, cs.cols()))) out.push_back({std::move(v)});
  return out;
}

/// The Hermitian matrix a kernel vector parameterizes, with w embedded in C.
inline Eigen::MatrixXcd to_hermitian(const ConstraintSystem& cs, const std::vector<BigRational>& x) {
  const auto n = static_cast<Eigen::Index>(cs.joint());
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(n, n);
  for (std::size_t c = 0; c < cs.joint(); ++c) {
    h(c, c) = x[cs.layout.diagonal(c)].to_double();
    for (std::size_t cp = c + 1; cp < cs.joint(); ++cp) {
      const std::size_t k = cs.layout.upper(c, cp);
      const std::complex<double> z = CycNum(x[k], x[k + 1]).to_complex();
      h(c, cp) = z;
      h(cp, c) = std::conj(z);
    }
  }
  return h;
}

struct StrongestReport {
  std::array<NullityReport, 3> cuts;
  /// trivial iff all three cuts are trivial; nontrivial if any cut is
  /// nontrivial; inconclusive otherwise.
  Verdict overall = Verdict::inconclusive;
};

struct VerifyOptions {
  NullityMode mode = NullityMode::exact;
  std::vector<std::uint64_t> primes = default_primes();
  double tol = 1e-8;
  SystemOptions system;
};

inline NullityReport verify_cut(const StateSet& s, Bipartition b, const VerifyOptions& opt = {}) {
  const auto t0 = std::chrono::steady_clock::now();
  const ConstraintSystem cs = build_system(s, b, opt.system);
  NullityReport r;
  switch (opt.mode) {
    case NullityMode::exact: r = nullity_exact(cs); break;
    case NullityMode::modp: r = nullity_modp(cs, opt.primes); break;
    default: r = nullity_float(cs, opt.tol); break;
  }
  r.elapsed_ms = detail::ms_since(t0);
  return r;
}

inline Verdict combine(const std::vector<Verdict>& vs) {
  bool all_trivial = true;
  for (auto v : vs) {
    if (v == Verdict::nontrivial) return Verdict::nontrivial;
    if (v != Verdict::trivial) all_trivial = false;
  }
  return all_trivial ? Verdict::trivial : Verdict::inconclusive;
}

inline StrongestReport verify_strongest(const StateSet& s, const VerifyOptions& opt = {}) {
  StrongestReport out;
  std::vector<Verdict> vs;
  for (auto b : kAllBipartitions) {
    out.cuts[static_cast<int>(b)] = verify_cut(s, b, opt);
    vs.push_back(out.cuts[static_cast<int>(b)].verdict);
  }
  out.overall = combine(vs);
  return out;
}

/// max_i (d1 d2 d3 / d_i) + 1
inline long long lower_bound(int d1, int d2, int d3) {
  Dims{d1, d2, d3}.validate();
  const long long p = 1LL * d1 * d2 * d3;
  return std::max({p / d1, p / d2, p / d3}) + 1;
}

inline bool check_meets_bound(const StateSet& s) {
  return static_cast<long long>(s.size()) == lower_bound(s.dims().d1, s.dims().d2, s.dims().d3);
}

}  // namespace oplm
