#pragma once

// Tripartite kets over Q(w) and the strongest-nonlocal constructions:
//
//  - build_lemma1_set():          10 states in C^3 x C^3 x C^3 (hard-coded)
//  - build_theorem1_set(d):       families A0..A5 plus stopper, d^2 + 1 states
//  - build_theorem2_set(d1,d2,d3): A0..A5 at d1, A6..A13, plus stopper, d2*d3 + 1 states
//
// States are unnormalized. Every non-stopper state is labelled "phi_<b><c>"
// after the B and C indices of its first branch (the A index of that branch is
// always d1 - 1), which makes labels unique.

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "oplm/field.hpp"
#include "oplm/linalg.hpp"

namespace oplm {

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Dims {
  int d1 = 0;
  int d2 = 0;
  int d3 = 0;

  int operator[](int party) const { return party == 0 ? d1 : party == 1 ? d2 : d3; }
  long long total() const { return 1LL * d1 * d2 * d3; }
  friend bool operator==(const Dims&, const Dims&) = default;

  void validate() const {
    if (d1 < 2 || d2 < 2 || d3 < 2)
      throw DimensionError("every local dimension must be at least 2");
  }
};

using Index3 = std::array<int, 3>;

/// Sparse tripartite vector; no explicit zeros are stored.
class Ket {
 public:
  Ket() = default;
  explicit Ket(Dims dims) : dims_(dims) {}

  const Dims& dims() const { return dims_; }
  const std::map<Index3, CycNum>& amps() const { return amps_; }
  bool is_zero() const { return amps_.empty(); }
  std::size_t support_size() const { return amps_.size(); }

  /// Adds `c` to the amplitude of |i j k>.
  Ket& add(const Index3& idx, const CycNum& c) {
    for (int p = 0; p < 3; ++p)
      if (idx[p] < 0 || idx[p] >= dims_[p])
        throw std::out_of_range("Ket: index out of range for party " + std::to_string(p));
    auto [it, inserted] = amps_.try_emplace(idx, c);
    if (!inserted) it->second += c;
    if (it->second.is_zero()) amps_.erase(it);
    return *this;
  }

  CycNum at(const Index3& idx) const {
    auto it = amps_.find(idx);
    return it == amps_.end() ? CycNum{} : it->second;
  }

  friend bool operator==(const Ket& a, const Ket& b) {
    return a.dims_ == b.dims_ && a.amps_ == b.amps_;
  }

 private:
  Dims dims_;
  std::map<Index3, CycNum> amps_;
};

struct LabeledState {
  std::string label;
  Ket ket;
  std::string family;  // "A0".."A13", "stopper", or empty for user input
};

class StateSet {
 public:
  StateSet() = default;
  explicit StateSet(Dims dims) : dims_(dims) {}

  const Dims& dims() const { return dims_; }
  const std::vector<LabeledState>& states() const { return states_; }
  std::size_t size() const { return states_.size(); }
  const LabeledState& operator[](std::size_t i) const { return states_[i]; }
  const std::optional<std::size_t>& stopper() const { return stopper_; }

  void add(std::string label, Ket ket, std::string family = {}) {
    if (!(ket.dims() == dims_)) throw std::invalid_argument("StateSet: ket dims mismatch");
    if (index_of(label)) throw std::invalid_argument("StateSet: duplicate label '" + label + "'");
    states_.push_back({std::move(label), std::move(ket), std::move(family)});
  }

  void set_stopper(std::optional<std::size_t> idx) {
    if (idx && *idx >= states_.size()) throw std::out_of_range("StateSet: stopper index");
    stopper_ = idx;
  }

  std::optional<std::size_t> index_of(const std::string& label) const {
    for (std::size_t i = 0; i < states_.size(); ++i)
      if (states_[i].label == label) return i;
    return std::nullopt;
  }

  const Ket& ket(const std::string& label) const {
    auto i = index_of(label);
    if (!i) throw std::out_of_range("StateSet: no state labelled '" + label + "'");
    return states_[*i].ket;
  }

  /// Members of one construction family, in construction order.
  std::vector<std::size_t> family(const std::string& name) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < states_.size(); ++i)
      if (states_[i].family == name) out.push_back(i);
    return out;
  }

 private:
  Dims dims_;
  std::vector<LabeledState> states_;
  std::optional<std::size_t> stopper_;
};

inline std::string phi_label(int b, int c) {
  if (b < 10 && c < 10) return "phi_" + std::to_string(b) + std::to_string(c);
  return "phi_" + std::to_string(b) + "_" + std::to_string(c);
}

/// |a b c> - |a' b' c'>
inline Ket ghz_like(Dims dims, const Index3& first, const Index3& second) {
  Ket k(dims);
  k.add(first, 1);
  k.add(second, -1);
  return k;
}

/// |a i j> + w |i j a> + w^2 |j a i>
inline Ket w_like(Dims dims, int a, int i, int j) {
  Ket k(dims);
  k.add({a, i, j}, 1);
  k.add({i, j, a}, CycNum::omega_pow(1));
  k.add({j, a, i}, CycNum::omega_pow(2));
  return k;
}

/// Uniform full-support product state with all amplitudes 1.
inline Ket stopper_state(Dims dims) {
  Ket k(dims);
  for (int i = 0; i < dims.d1; ++i)
    for (int j = 0; j < dims.d2; ++j)
      for (int l = 0; l < dims.d3; ++l) k.add({i, j, l}, 1);
  return k;
}

inline StateSet build_lemma1_set() {
  const Dims dims{3, 3, 3};
  StateSet s(dims);
  s.add("phi_22", ghz_like(dims, {2, 2, 2}, {1, 1, 1}), "A0");
  s.add("phi_20", ghz_like(dims, {2, 2, 0}, {1, 0, 2}), "A1");
  s.add("phi_21", ghz_like(dims, {2, 2, 1}, {0, 1, 2}), "A1");
  s.add("phi_02", ghz_like(dims, {2, 0, 2}, {0, 2, 1}), "A2");
  s.add("phi_12", ghz_like(dims, {2, 1, 2}, {1, 2, 0}), "A2");
  s.add("phi_10", ghz_like(dims, {2, 1, 0}, {0, 2, 2}), "A3");
  s.add("phi_01", ghz_like(dims, {2, 0, 1}, {1, 2, 2}), "A3");
  s.add("phi_00", w_like(dims, 2, 0, 0), "A5");
  s.add("phi_11", w_like(dims, 2, 1, 1), "A4");
  s.add("S1", stopper_state(dims), "stopper");
  s.set_stopper(s.size() - 1);
  return s;
}

namespace detail {

// Families A0..A5 for local dimension d, embedded in `dims` (d <= each d_i).
inline void add_cube_families(StateSet& s, int d) {
  const Dims dims = s.dims();
  const int dh = d - 1;  // d-hat
  const int ds = d - 2;  // d-star
  s.add(phi_label(dh, dh), ghz_like(dims, {dh, dh, dh}, {ds, ds, ds}), "A0");
  for (int i = 0; i < dh; ++i)
    s.add(phi_label(dh, i), ghz_like(dims, {dh, dh, i}, {ds - i, i, dh}), "A1");
  for (int i = 0; i < dh; ++i)
    s.add(phi_label(i, dh), ghz_like(dims, {dh, i, dh}, {i, dh, ds - i}), "A2");
  for (int i = 0; i < dh; ++i)
    s.add(phi_label(ds - i, i), ghz_like(dims, {dh, ds - i, i}, {i, dh, dh}), "A3");
  for (int k = 0; k < dh; ++k)
    for (int l = 0; l < dh; ++l)
      if (k + l >= d - 1) s.add(phi_label(k, l), w_like(dims, dh, k, l), "A4");
  for (int a = 0; a < dh; ++a)
    for (int b = 0; b < dh; ++b)
      if (a + b <= d - 3) s.add(phi_label(a, b), w_like(dims, dh, a, b), "A5");
}

}  // namespace detail

inline StateSet build_theorem1_set(int d) {
  if (d < 3) throw DimensionError("d >= 3 required (got d = " + std::to_string(d) + ")");
  const Dims dims{d, d, d};
  StateSet s(dims);
  detail::add_cube_families(s, d);
  s.add("S2", stopper_state(dims), "stopper");
  s.set_stopper(s.size() - 1);
  return s;
}

inline StateSet build_theorem2_set(int d1, int d2, int d3) {
  if (d1 < 3) throw DimensionError("d1 >= 3 required (got d1 = " + std::to_string(d1) + ")");
  if (!(d1 <= d2 && d2 <= d3))
    throw DimensionError("dimensions must be sorted: d1 <= d2 <= d3");
  const Dims dims{d1, d2, d3};
  const int h = d1 - 1;
  StateSet s(dims);
  detail::add_cube_families(s, d1);
  for (int i = 0; i < h; ++i)
    for (int j = 0; j < d3 - d1; ++j)
      s.add(phi_label(i, d1 + j), ghz_like(dims, {h, i, d1 + j}, {i, h, d1 + j}), "A6");
  if (d3 > d1) s.add(phi_label(h, d1), ghz_like(dims, {h, h, d1}, {0, 0, 1}), "A7");
  for (int i = 0; i < d3 - d1 - 1; ++i)
    s.add(phi_label(h, d1 + 1 + i), ghz_like(dims, {h, h, d1 + 1 + i}, {0, 0, d1 + i}), "A8");
  for (int j = 0; j < d2 - d1; ++j)
    for (int i = 0; i < h; ++i)
      s.add(phi_label(d1 + j, i), ghz_like(dims, {h, d1 + j, i}, {i, d1 + j, h}), "A9");
  if (d2 > d1) s.add(phi_label(d1, h), ghz_like(dims, {h, d1, h}, {0, 1, 0}), "A10");
  for (int i = 0; i < d2 - d1 - 1; ++i)
    s.add(phi_label(d1 + 1 + i, h), ghz_like(dims, {h, d1 + 1 + i, h}, {0, d1 + i, 0}), "A11");
  if (d2 > d1)
    for (int i = 0; i < d3 - d1; ++i)
      s.add(phi_label(d1, d1 + i), ghz_like(dims, {h, d1, d1 + i}, {0, 1, d1 + i}), "A12");
  for (int i = 0; i < d2 - d1 - 1; ++i)
    for (int j = 0; j < d3 - d1; ++j)
      s.add(phi_label(d1 + 1 + i, d1 + j),
            ghz_like(dims, {h, d1 + 1 + i, d1 + j}, {0, d1 + i, d1 + j}), "A13");
  s.add("S", stopper_state(dims), "stopper");
  s.set_stopper(s.size() - 1);
  return s;
}

/// Picks the constructor matching a dimension triple: the cube construction
/// when all three agree, the general one otherwise.
inline StateSet build_for_dims(const Dims& d) {
  if (d.d1 == d.d2 && d.d2 == d.d3) return build_theorem1_set(d.d1);
  return build_theorem2_set(d.d1, d.d2, d.d3);
}

/// Same dimensions, same stopper position, and the same label -> amplitude map
/// for every non-stopper state (order and stopper label are not compared).
inline bool structurally_equal(const StateSet& a, const StateSet& b) {
  if (!(a.dims() == b.dims()) || a.size() != b.size()) return false;
  if (a.stopper().has_value() != b.stopper().has_value()) return false;
  if (a.stopper() && !(a[*a.stopper()].ket == b[*b.stopper()].ket)) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a.stopper() && i == *a.stopper()) continue;
    auto j = b.index_of(a[i].label);
    if (!j || (b.stopper() && *j == *b.stopper()) || !(a[i].ket == b[*j].ket)) return false;
  }
  return true;
}

/// <x|y> = sum conj(x_ijk) y_ijk
inline CycNum inner_product(const Ket& x, const Ket& y) {
  if (!(x.dims() == y.dims())) throw std::invalid_argument("inner_product: dims mismatch");
  CycNum acc;
  const auto& small = x.support_size() <= y.support_size() ? x.amps() : y.amps();
  const bool x_small = &small == &x.amps();
  for (const auto& [idx, a] : small) {
    const auto& other = x_small ? y.amps() : x.amps();
    auto it = other.find(idx);
    if (it == other.end()) continue;
    acc += x_small ? a.conj() * it->second : it->second.conj() * a;
  }
  return acc;
}

struct OrthogonalityCheck {
  bool orthogonal = true;
  std::optional<std::pair<std::size_t, std::size_t>> offending;
  CycNum overlap;
};

inline OrthogonalityCheck check_pairwise_orthogonal(const StateSet& s) {
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = i + 1; j < s.size(); ++j) {
      CycNum ip = inner_product(s[i].ket, s[j].ket);
      if (!ip.is_zero()) return {false, std::make_pair(i, j), ip};
    }
  return {};
}

enum class EntanglementCategory { product, entangled, genuinely_entangled };

inline const char* to_string(EntanglementCategory c) {
  switch (c) {
    case EntanglementCategory::product: return "product";
    case EntanglementCategory::entangled: return "entangled";
    default: return "genuinely_entangled";
  }
}

struct StateClass {
  std::array<std::size_t, 3> schmidt_rank{};  // A|BC, B|CA, C|AB
  EntanglementCategory category = EntanglementCategory::product;
};

/// Schmidt rank of `x` across the cut separating `party` from the other two,
/// computed as an exact rank over Q(w).
inline std::size_t schmidt_rank(const Ket& x, int party) {
  const Dims& d = x.dims();
  const int p1 = (party + 1) % 3;
  const int p2 = (party + 2) % 3;
  std::map<int, SparseRow<CycNum>> by_row;
  for (const auto& [idx, a] : x.amps()) {
    const auto col = static_cast<std::size_t>(idx[p1]) * d[p2] + idx[p2];
    by_row[idx[party]].emplace_back(col, a);
  }
  std::vector<SparseRow<CycNum>> rows;
  for (auto& [r, row] : by_row) {
    std::sort(row.begin(), row.end(), [](const auto& l, const auto& rr) { return l.first < rr.first; });
    rows.push_back(std::move(row));
  }
  return exact_rank(std::move(rows), static_cast<std::size_t>(d[p1]) * d[p2]);
}

inline StateClass classify_state(const Ket& x) {
  if (x.is_zero()) throw std::invalid_argument("classify_state: zero ket");
  StateClass c;
  int ones = 0;
  for (int p = 0; p < 3; ++p) {
    c.schmidt_rank[p] = schmidt_rank(x, p);
    if (c.schmidt_rank[p] == 1) ++ones;
  }
  c.category = ones == 3   ? EntanglementCategory::product
               : ones == 0 ? EntanglementCategory::genuinely_entangled
                           : EntanglementCategory::entangled;
  return c;
}

}  // namespace oplm
