#pragma once

// Independent reference code shared by the unit tests and the acceptance
// runner. Nothing here goes through the library's constraint builder or prover.

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <complex>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "oplm/prover.hpp"
#include "oplm/verifier.hpp"

namespace oracle {

using namespace oplm;
using cplx = std::complex<double>;
using Amps = std::map<Index3, CycNum>;

inline Amps amps(std::initializer_list<std::pair<Index3, CycNum>> l) {
  Amps m;
  for (const auto& [k, v] : l) m.emplace(k, v);
  return m;
}

// The ten 3x3x3 states in construction order, typed in by hand.
inline std::vector<std::pair<std::string, Amps>> lemma1_reference() {
  const CycNum w1 = CycNum::omega_pow(1);
  const CycNum w2 = CycNum::omega_pow(2);
  Amps stop;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) stop.emplace(Index3{i, j, k}, CycNum(1));
  return {
      {"phi_22", amps({{{2, 2, 2}, 1}, {{1, 1, 1}, -1}})},
      {"phi_20", amps({{{2, 2, 0}, 1}, {{1, 0, 2}, -1}})},
      {"phi_21", amps({{{2, 2, 1}, 1}, {{0, 1, 2}, -1}})},
      {"phi_02", amps({{{2, 0, 2}, 1}, {{0, 2, 1}, -1}})},
      {"phi_12", amps({{{2, 1, 2}, 1}, {{1, 2, 0}, -1}})},
      {"phi_10", amps({{{2, 1, 0}, 1}, {{0, 2, 2}, -1}})},
      {"phi_01", amps({{{2, 0, 1}, 1}, {{1, 2, 2}, -1}})},
      {"phi_00", amps({{{2, 0, 0}, 1}, {{0, 0, 2}, w1}, {{0, 2, 0}, w2}})},
      {"phi_11", amps({{{2, 1, 1}, 1}, {{1, 1, 2}, w1}, {{1, 2, 1}, w2}})},
      {"S1", stop},
  };
}

// The eleven states that extend the 3x3x3 set to C^3 x C^4 x C^5, typed in
// by hand.
inline std::map<std::string, Amps> lemma2_extra() {
  return {
      {"phi_03", amps({{{2, 0, 3}, 1}, {{0, 2, 3}, -1}})},
      {"phi_13", amps({{{2, 1, 3}, 1}, {{1, 2, 3}, -1}})},
      {"phi_04", amps({{{2, 0, 4}, 1}, {{0, 2, 4}, -1}})},
      {"phi_14", amps({{{2, 1, 4}, 1}, {{1, 2, 4}, -1}})},
      {"phi_23", amps({{{2, 2, 3}, 1}, {{0, 0, 1}, -1}})},
      {"phi_24", amps({{{2, 2, 4}, 1}, {{0, 0, 3}, -1}})},
      {"phi_30", amps({{{2, 3, 0}, 1}, {{0, 3, 2}, -1}})},
      {"phi_31", amps({{{2, 3, 1}, 1}, {{1, 3, 2}, -1}})},
      {"phi_32", amps({{{2, 3, 2}, 1}, {{0, 1, 0}, -1}})},
      {"phi_33", amps({{{2, 3, 3}, 1}, {{0, 1, 3}, -1}})},
      {"phi_34", amps({{{2, 3, 4}, 1}, {{0, 1, 4}, -1}})},
  };
}

inline cplx embed(const CycNum& z) {
  const double u = z.u().to_double();
  const double v = z.v().to_double();
  return {u - v / 2.0, v * std::sqrt(3.0) / 2.0};
}

// Amplitudes of a ket as a (row party) x (other two parties) complex matrix.
inline Eigen::MatrixXcd dense_cut(const Ket& x, Bipartition b) {
  const Dims& d = x.dims();
  const int r = static_cast<int>(b);
  const int p1 = (r + 1) % 3;
  const int p2 = (r + 2) % 3;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(d[r], d[p1] * d[p2]);
  for (const auto& [idx, a] : x.amps()) m(idx[r], idx[p1] * d[p2] + idx[p2]) = embed(a);
  return m;
}

// Real-linear map from Hermitian E (in the basis E_kk, E_kl + E_lk,
// i(E_kl - E_lk)) to the real and imaginary parts of <x|I (x) E|y> for all
// pairs x != y.
inline Eigen::MatrixXd brute_force_matrix(const StateSet& s, Bipartition b) {
  std::vector<Eigen::MatrixXcd> dense;
  for (const auto& st : s.states()) dense.push_back(dense_cut(st.ket, b));
  const Eigen::Index n = dense.front().cols();
  const Eigen::Index pairs = static_cast<Eigen::Index>(s.size() * (s.size() - 1) / 2);
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(2 * pairs, n * n);
  Eigen::Index row = 0;
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = i + 1; j < s.size(); ++j) {
      const Eigen::MatrixXcd m = dense[i].adjoint() * dense[j];
      Eigen::Index col = 0;
      for (Eigen::Index k = 0; k < n; ++k) {
        const cplx diag = m(k, k);
        a(row, col) = diag.real();
        a(row + 1, col) = diag.imag();
        ++col;
        for (Eigen::Index l = k + 1; l < n; ++l) {
          const cplx sym = m(k, l) + m(l, k);
          const cplx asym = cplx(0, 1) * (m(k, l) - m(l, k));
          a(row, col) = sym.real();
          a(row + 1, col) = sym.imag();
          a(row, col + 1) = asym.real();
          a(row + 1, col + 1) = asym.imag();
          col += 2;
        }
      }
      row += 2;
    }
  return a;
}

inline std::size_t brute_force_nullity(const StateSet& s, Bipartition b) {
  const Eigen::MatrixXd a = brute_force_matrix(s, b);
  Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
  lu.setThreshold(1e-9);
  return static_cast<std::size_t>(a.cols() - lu.rank());
}

inline StateSet product_basis(Dims d) {
  StateSet s(d);
  for (int i = 0; i < d.d1; ++i)
    for (int j = 0; j < d.d2; ++j)
      for (int k = 0; k < d.d3; ++k) {
        Ket x(d);
        x.add({i, j, k}, 1);
        s.add("e_" + std::to_string(i) + std::to_string(j) + std::to_string(k), std::move(x));
      }
  return s;
}

inline StateSet without_stopper(const StateSet& s) {
  StateSet out(s.dims());
  for (std::size_t i = 0; i < s.size(); ++i)
    if (!s.stopper() || i != *s.stopper()) out.add(s[i].label, s[i].ket, s[i].family);
  return out;
}

inline StateSet relabel(const StateSet& s, const std::array<std::vector<int>, 3>& perm) {
  StateSet out(s.dims());
  for (const auto& st : s.states()) {
    Ket k(s.dims());
    for (const auto& [idx, a] : st.ket.amps()) k.add({perm[0][idx[0]], perm[1][idx[1]], perm[2][idx[2]]}, a);
    out.add(st.label, std::move(k), st.family);
  }
  return out;
}

using Pos = JointIndex;
using Entry = std::set<Pos>;

struct GoldenRow {
  Rule rule;
  std::string a;
  std::string b;
  Pos p;
  Pos q;
};

// Deduction table for the 3x3x3 set on A|BC: the pair of states used and the
// off-diagonal entry it kills.
inline const std::vector<GoldenRow>& golden_table() {
  static const std::vector<GoldenRow> rows = {
      {Rule::obs1, "phi_02", "phi_11", {0, 2}, {1, 1}}, {Rule::obs1, "phi_02", "phi_12", {0, 2}, {1, 2}},
      {Rule::obs1, "phi_02", "phi_20", {0, 2}, {2, 0}}, {Rule::obs1, "phi_02", "phi_22", {0, 2}, {2, 2}},
      {Rule::obs1, "phi_11", "phi_21", {1, 1}, {2, 1}}, {Rule::obs1, "phi_12", "phi_21", {1, 2}, {2, 1}},
      {Rule::obs1, "phi_20", "phi_21", {2, 0}, {2, 1}}, {Rule::obs1, "phi_21", "phi_22", {2, 1}, {2, 2}},
      {Rule::obs1, "phi_00", "phi_11", {0, 0}, {1, 1}}, {Rule::obs1, "phi_00", "phi_01", {0, 0}, {0, 1}},
      {Rule::obs1, "phi_00", "phi_12", {0, 0}, {1, 2}}, {Rule::obs1, "phi_00", "phi_20", {0, 0}, {2, 0}},
      {Rule::obs1, "phi_00", "phi_22", {0, 0}, {2, 2}}, {Rule::obs1, "phi_11", "phi_10", {1, 1}, {1, 0}},
      {Rule::obs1, "phi_01", "phi_02", {0, 1}, {0, 2}}, {Rule::obs1, "phi_01", "phi_10", {0, 1}, {1, 0}},
      {Rule::obs1, "phi_01", "phi_21", {0, 1}, {2, 1}}, {Rule::obs1, "phi_10", "phi_12", {1, 0}, {1, 2}},
      {Rule::obs1, "phi_10", "phi_20", {1, 0}, {2, 0}}, {Rule::obs1, "phi_10", "phi_22", {1, 0}, {2, 2}},
      {Rule::obs2, "phi_02", "phi_21", {0, 2}, {2, 1}}, {Rule::obs2, "phi_12", "phi_20", {1, 2}, {2, 0}},
      {Rule::obs2, "phi_20", "phi_22", {2, 0}, {2, 2}}, {Rule::obs2, "phi_11", "phi_12", {1, 1}, {1, 2}},
      {Rule::obs2, "phi_11", "phi_20", {1, 1}, {2, 0}}, {Rule::obs2, "phi_11", "phi_22", {1, 1}, {2, 2}},
      {Rule::obs2, "phi_12", "phi_22", {1, 2}, {2, 2}}, {Rule::obs2, "phi_01", "phi_12", {0, 1}, {1, 2}},
      {Rule::obs2, "phi_01", "phi_20", {0, 1}, {2, 0}}, {Rule::obs2, "phi_01", "phi_22", {0, 1}, {2, 2}},
      {Rule::obs2, "phi_10", "phi_02", {1, 0}, {0, 2}}, {Rule::obs2, "phi_10", "phi_21", {1, 0}, {2, 1}},
      {Rule::obs2, "phi_00", "phi_02", {0, 0}, {0, 2}}, {Rule::obs2, "phi_00", "phi_10", {0, 0}, {1, 0}},
      {Rule::obs2, "phi_00", "phi_21", {0, 0}, {2, 1}}, {Rule::obs2, "phi_11", "phi_01", {1, 1}, {0, 1}},
  };
  return rows;
}

inline std::set<std::string> pair_of(const TraceStep& s) { return {s.first, s.second}; }

inline Entry entry_of(const Fact& f) { return {f.positions.begin(), f.positions.end()}; }

inline const TraceStep* step_zeroing(const DeductionTrace& t, const Entry& e) {
  for (const auto& s : t.steps)
    for (const auto& f : s.facts)
      if (f.kind == FactKind::zero && entry_of(f) == e) return &s;
  return nullptr;
}

}  // namespace oracle
