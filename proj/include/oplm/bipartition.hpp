#pragma once

// Cell view of tripartite kets under one of the three cuts.
//
// Parties are fused cyclically: A|BC has row A and column (B,C), B|CA has row
// B and column (C,A), C|AB has row C and column (A,B).

#include <algorithm>
#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "oplm/states.hpp"

namespace oplm {

enum class Bipartition { A_BC = 0, B_CA = 1, C_AB = 2 };

inline constexpr std::array<Bipartition, 3> kAllBipartitions = {
    Bipartition::A_BC, Bipartition::B_CA, Bipartition::C_AB};

/// "A|BC" etc.
inline std::string to_string(Bipartition b) {
  switch (b) {
    case Bipartition::A_BC: return "A|BC";
    case Bipartition::B_CA: return "B|CA";
    default: return "C|AB";
  }
}

/// Accepts both the shell spelling "A-BC" and "A|BC".
inline Bipartition parse_bipartition(std::string_view s) {
  if (s == "A-BC" || s == "A|BC") return Bipartition::A_BC;
  if (s == "B-CA" || s == "B|CA") return Bipartition::B_CA;
  if (s == "C-AB" || s == "C|AB") return Bipartition::C_AB;
  throw std::invalid_argument("unknown bipartition '" + std::string(s) + "'");
}

inline int row_party(Bipartition b) { return static_cast<int>(b); }
inline int col_party_1(Bipartition b) { return (static_cast<int>(b) + 1) % 3; }
inline int col_party_2(Bipartition b) { return (static_cast<int>(b) + 2) % 3; }

/// Local dimensions (row; col1, col2) for a cut.
struct CutShape {
  int rows = 0;
  int c1 = 0;
  int c2 = 0;
  std::size_t joint() const { return static_cast<std::size_t>(c1) * c2; }
};

inline CutShape cut_shape(const Dims& d, Bipartition b) {
  return {d[row_party(b)], d[col_party_1(b)], d[col_party_2(b)]};
}

using JointIndex = std::pair<int, int>;

struct Cell {
  int row = 0;
  JointIndex col;
  CycNum amp;
  friend bool operator==(const Cell&, const Cell&) = default;
};

/// Row-major flattening of a joint index; only used for unknown numbering.
inline std::size_t flatten(const CutShape& s, const JointIndex& c) {
  return static_cast<std::size_t>(c.first) * s.c2 + c.second;
}

inline JointIndex unflatten(const CutShape& s, std::size_t f) {
  return {static_cast<int>(f / s.c2), static_cast<int>(f % s.c2)};
}

/// "20" for small indices, "(2,10)" when either exceeds one digit.
inline std::string format_joint(const JointIndex& c) {
  if (c.first < 10 && c.second < 10) return std::to_string(c.first) + std::to_string(c.second);
  return "(" + std::to_string(c.first) + "," + std::to_string(c.second) + ")";
}

/// One cell per nonzero amplitude, in the ket's lexicographic index order.
inline std::vector<Cell> cells(const Ket& x, Bipartition b) {
  std::vector<Cell> out;
  out.reserve(x.support_size());
  const int r = row_party(b);
  const int p1 = col_party_1(b);
  const int p2 = col_party_2(b);
  for (const auto& [idx, a] : x.amps()) out.push_back({idx[r], {idx[p1], idx[p2]}, a});
  return out;
}

/// All (cell of x, cell of y) pairs sharing a row index.
inline std::vector<std::pair<Cell, Cell>> matched_row_pairs(const Ket& x, const Ket& y,
                                                            Bipartition b) {
  const auto cx = cells(x, b);
  const auto cy = cells(y, b);
  std::vector<std::pair<Cell, Cell>> out;
  for (const auto& a : cx)
    for (const auto& c : cy)
      if (a.row == c.row) out.emplace_back(a, c);
  return out;
}

struct PlaneSlot {
  int row = 0;
  JointIndex col;
  std::string label;
};

struct PlaneCollision {
  int row = 0;
  JointIndex col;
  std::string first;
  std::string second;
};

struct PlaneStructure {
  Bipartition bipartition = Bipartition::A_BC;
  CutShape shape;
  std::vector<PlaneSlot> slots;  // sorted by (row, col)
  std::vector<PlaneCollision> collisions;

  std::optional<std::string> label_at(int row, const JointIndex& col) const {
    for (const auto& s : slots)
      if (s.row == row && s.col == col) return s.label;
    return std::nullopt;
  }
};

/// Grid of state labels over (row, fused column). Stopper states are omitted
/// since they occupy every slot.
inline PlaneStructure plane_structure(const StateSet& s, Bipartition b) {
  PlaneStructure ps;
  ps.bipartition = b;
  ps.shape = cut_shape(s.dims(), b);
  std::map<std::pair<int, JointIndex>, std::string> grid;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s.stopper() && *s.stopper() == i) continue;
    for (const auto& c : cells(s[i].ket, b)) {
      auto [it, inserted] = grid.try_emplace({c.row, c.col}, s[i].label);
      if (!inserted) ps.collisions.push_back({c.row, c.col, it->second, s[i].label});
    }
  }
  for (const auto& [key, label] : grid) ps.slots.push_back({key.first, key.second, label});
  return ps;
}

/// Fixed-width text grid: one line per row, columns in lexicographic joint order.
inline std::string render_ascii(const PlaneStructure& ps) {
  std::size_t width = 2;
  for (const auto& s : ps.slots) width = std::max(width, s.label.size());
  for (int a = 0; a < ps.shape.c1; ++a)
    for (int c = 0; c < ps.shape.c2; ++c) width = std::max(width, format_joint({a, c}).size());
  auto pad = [&](const std::string& t) { return t + std::string(width - t.size() + 1, ' '); };

  std::ostringstream os;
  os << to_string(ps.bipartition) << "  " << ps.shape.rows << "x" << ps.shape.joint() << "\n";
  os << std::string(5, ' ');
  for (int a = 0; a < ps.shape.c1; ++a)
    for (int c = 0; c < ps.shape.c2; ++c) os << pad(format_joint({a, c}));
  os << "\n";
  for (int r = 0; r < ps.shape.rows; ++r) {
    std::string head = std::to_string(r);
    os << head << std::string(5 - std::min<std::size_t>(head.size(), 4), ' ');
    for (int a = 0; a < ps.shape.c1; ++a)
      for (int c = 0; c < ps.shape.c2; ++c) {
        auto l = ps.label_at(r, {a, c});
        os << pad(l ? *l : ".");
      }
    os << "\n";
  }
  return os.str();
}

/// Cube coordinates (i,j,k) occupied by each non-stopper state.
inline std::vector<std::pair<std::string, std::vector<Index3>>> cube_coordinates(const StateSet& s) {
  std::vector<std::pair<std::string, std::vector<Index3>>> out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s.stopper() && *s.stopper() == i) continue;
    std::vector<Index3> pts;
    for (const auto& [idx, a] : s[i].ket.amps()) pts.push_back(idx);
    out.emplace_back(s[i].label, std::move(pts));
  }
  return out;
}

}  // namespace oplm
