#pragma once

// Replays the observation-based triviality argument on one cut and records
// every deduction as a trace step.
//
// Rules, applied in this order:
//   Obs1   a state pair with a single matched-row cell pair forces that
//          off-diagonal entry to vanish;
//   Obs2   a pair whose constraint has exactly one entry not yet known to be
//          zero forces that entry to vanish (iterated to a fixpoint);
//   EvenD  a residual conjugate pair m_pq + m_qp = 0 makes m_pq purely
//          imaginary, and a stopper constraint with real diagonal coefficients
//          then kills its imaginary part;
//   Obs3/4 once every off-diagonal entry is zero, the stopper paired with a
//          GHZ-like (two cells) or W-like (three cells) state forces the
//          involved diagonal entries to coincide.
//
// The prover only certifies; INCONCLUSIVE is a normal outcome and defers to
// the verifier.

#include <algorithm>
#include <cstddef>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "oplm/bipartition.hpp"
#include "oplm/states.hpp"
#include "oplm/verifier.hpp"

namespace oplm {

enum class Rule { obs1, obs2, evend, obs3, obs4 };

inline const char* to_string(Rule r) {
  switch (r) {
    case Rule::obs1: return "Obs1";
    case Rule::obs2: return "Obs2";
    case Rule::evend: return "EvenD";
    case Rule::obs3: return "Obs3";
    default: return "Obs4";
  }
}

enum class FactKind { zero, equal, antihermitian_pair };

inline const char* to_string(FactKind k) {
  switch (k) {
    case FactKind::zero: return "zero";
    case FactKind::equal: return "equal";
    default: return "antihermitian_pair";
  }
}

struct Fact {
  FactKind kind = FactKind::zero;
  /// zero / antihermitian_pair: the ordered position (p, q); the swapped
  /// position follows by Hermiticity. equal: two or three diagonal positions.
  std::vector<JointIndex> positions;
};

struct TraceStep {
  Rule rule = Rule::obs1;
  std::string first;
  std::string second;
  std::vector<Fact> facts;
};

enum class ProofVerdict { trivial_proven, inconclusive };

inline const char* to_string(ProofVerdict v) {
  return v == ProofVerdict::trivial_proven ? "TRIVIAL_PROVEN" : "INCONCLUSIVE";
}

struct DeductionTrace {
  Bipartition bipartition = Bipartition::A_BC;
  std::vector<TraceStep> steps;
  ProofVerdict verdict = ProofVerdict::inconclusive;
  std::size_t offdiagonal_total = 0;  // unordered off-diagonal positions
  std::size_t offdiagonal_zero = 0;
  std::size_t diagonal_classes = 0;

  std::size_t count(Rule r) const {
    return static_cast<std::size_t>(
        std::count_if(steps.begin(), steps.end(), [r](const TraceStep& s) { return s.rule == r; }));
  }

  /// EvenD steps that closed a residual pair, i.e. produced a zero fact.
  std::size_t evend_resolutions() const {
    return static_cast<std::size_t>(std::count_if(steps.begin(), steps.end(), [](const TraceStep& s) {
      return s.rule == Rule::evend &&
             std::any_of(s.facts.begin(), s.facts.end(), [](const Fact& f) { return f.kind == FactKind::zero; });
    }));
  }
};

class PreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

inline std::string format_entry(const JointIndex& a, const JointIndex& b) {
  return "m[" + format_joint(a) + "," + format_joint(b) + "]";
}

inline std::string format_fact(const Fact& f) {
  const auto& p = f.positions;
  switch (f.kind) {
    case FactKind::zero:
      return format_entry(p[0], p[1]) + " = " + format_entry(p[1], p[0]) + " = 0";
    case FactKind::antihermitian_pair:
      return format_entry(p[0], p[1]) + " + " + format_entry(p[1], p[0]) + " = 0";
    default: {
      std::string s;
      for (std::size_t i = 0; i < p.size(); ++i) s += (i ? " = " : "") + format_entry(p[i], p[i]);
      return s;
    }
  }
}

/// `Obs1  (phi_02, phi_11)  =>  m[02,11] = m[11,02] = 0`, one line per fact.
inline std::string render_text(const DeductionTrace& t) {
  std::ostringstream os;
  os << "# bipartition " << to_string(t.bipartition) << "\n";
  for (const auto& s : t.steps)
    for (const auto& f : s.facts) {
      std::string rule = to_string(s.rule);
      rule.resize(std::max<std::size_t>(rule.size(), 5), ' ');
      os << rule << " (" << s.first << ", " << s.second << ")  =>  " << format_fact(f) << "\n";
    }
  os << "# off-diagonal zero: " << t.offdiagonal_zero << "/" << t.offdiagonal_total
     << ", diagonal classes: " << t.diagonal_classes << "\n";
  os << "verdict " << to_string(t.verdict) << "\n";
  return os.str();
}

/// Index of the stopper: the set's own marker, else the unique full-support
/// state whose amplitudes are all 1.
inline std::optional<std::size_t> find_stopper(const StateSet& s) {
  if (s.stopper()) return s.stopper();
  std::optional<std::size_t> found;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const Ket& k = s[i].ket;
    if (static_cast<long long>(k.support_size()) != s.dims().total()) continue;
    bool ones = std::all_of(k.amps().begin(), k.amps().end(),
                            [](const auto& e) { return e.second == CycNum(1); });
    if (!ones) continue;
    if (found) return std::nullopt;
    found = i;
  }
  return found;
}

class Prover {
 public:
  Prover(const StateSet& s, Bipartition b) : set_(s), b_(b) {
    require_orthogonal(s);
    shape_ = cut_shape(s.dims(), b);
    n_ = shape_.joint();
    zero_.assign(n_ * n_, false);
    anti_.assign(n_ * n_, false);
    parent_.resize(n_);
    std::iota(parent_.begin(), parent_.end(), 0);
    stopper_ = find_stopper(s);
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (is_stopper(i)) continue;
      for (std::size_t j = i + 1; j < s.size(); ++j) {
        if (is_stopper(j)) continue;
        pairs_.push_back({i, j, constraint_terms(s[i].ket, s[j].ket, b),
                          matched_row_pairs(s[i].ket, s[j].ket, b).size()});
      }
    }
    if (stopper_)
      for (std::size_t i = 0; i < s.size(); ++i)
        if (!is_stopper(i)) stopper_terms_.push_back({i, constraint_terms(s[i].ket, s[*stopper_].ket, b)});
  }

  /// Single matched-row cell pair with distinct columns.
  std::vector<TraceStep> apply_obs1() {
    std::vector<TraceStep> out;
    for (const auto& p : pairs_) {
      if (p.matched != 1 || p.terms.size() != 1) continue;
      const auto [c, cp] = p.terms.begin()->first;
      if (c == cp || is_zero(c, cp)) continue;
      out.push_back(record_zero(Rule::obs1, p.first, p.second, c, cp));
    }
    return out;
  }

  /// One residual entry after removing known zeros; repeated until no pair
  /// yields anything new.
  std::vector<TraceStep> apply_obs2() {
    std::vector<TraceStep> out;
    for (bool progress = true; progress;) {
      progress = false;
      for (const auto& p : pairs_) {
        if (p.matched < 2) continue;
        auto res = residual(p.terms);
        if (res.size() != 1) continue;
        const auto [c, cp] = res.front().first;
        if (c == cp) continue;
        out.push_back(record_zero(Rule::obs2, p.first, p.second, c, cp));
        progress = true;
      }
    }
    return out;
  }

  /// Resolves residual conjugate pairs {m_pq, m_qp} as in the even-d argument.
  std::vector<TraceStep> apply_evend() {
    std::vector<TraceStep> out;
    if (!stopper_) return out;
    for (const auto& p : pairs_) {
      auto res = residual(p.terms);
      if (res.size() != 2) continue;
      const auto [a, b] = res[0].first;
      const auto [c, d] = res[1].first;
      if (a == b || a != d || b != c || !(res[0].second == res[1].second)) continue;
      if (anti_[a * n_ + b]) continue;
      anti_[a * n_ + b] = anti_[b * n_ + a] = true;
      out.push_back({Rule::evend, label(p.first), label(p.second),
                     {{FactKind::antihermitian_pair, {pos(a), pos(b)}}}});
      for (const auto& st : stopper_terms_) {
        if (!kills_imaginary_part(residual(st.terms), a, b)) continue;
        out.push_back(record_zero(Rule::evend, st.state, *stopper_, a, b));
        break;
      }
    }
    return out;
  }

  /// Diagonal merges from the stopper; requires every off-diagonal entry zero.
  std::vector<TraceStep> apply_obs3_obs4() {
    if (!offdiagonal_closed())
      throw PreconditionError("Obs3/Obs4 need every off-diagonal entry proven zero");
    std::vector<TraceStep> out;
    if (!stopper_) return out;
    for (const auto& st : stopper_terms_) {
      std::vector<std::pair<std::size_t, CycNum>> diag;
      for (const auto& [k, v] : st.terms)
        if (k.first == k.second) diag.emplace_back(k.first, v);
      if (!forces_equal(diag)) continue;
      bool grew = false;
      for (std::size_t i = 1; i < diag.size(); ++i) grew |= unite(diag[0].first, diag[i].first);
      if (!grew) continue;
      Fact f{FactKind::equal, {}};
      for (const auto& [c, v] : diag) f.positions.push_back(pos(c));
      out.push_back({diag.size() == 2 ? Rule::obs3 : Rule::obs4, label(*stopper_), label(st.state), {f}});
    }
    return out;
  }

  bool offdiagonal_closed() const {
    for (std::size_t c = 0; c < n_; ++c)
      for (std::size_t cp = c + 1; cp < n_; ++cp)
        if (!zero_[c * n_ + cp]) return false;
    return true;
  }

  std::size_t offdiagonal_zero_count() const {
    std::size_t k = 0;
    for (std::size_t c = 0; c < n_; ++c)
      for (std::size_t cp = c + 1; cp < n_; ++cp) k += zero_[c * n_ + cp];
    return k;
  }

  std::size_t diagonal_classes() const {
    std::size_t k = 0;
    for (std::size_t c = 0; c < n_; ++c) k += (find(c) == c);
    return k;
  }

  std::size_t joint() const { return n_; }
  const std::optional<std::size_t>& stopper() const { return stopper_; }

 private:
  struct PairTerms {
    std::size_t first;
    std::size_t second;
    FlatTerms terms;
    std::size_t matched;
  };
  struct StopperTerms {
    std::size_t state;
    FlatTerms terms;
  };
  using Residual = std::vector<std::pair<std::pair<std::size_t, std::size_t>, CycNum>>;

  bool is_stopper(std::size_t i) const { return stopper_ && *stopper_ == i; }
  bool is_zero(std::size_t c, std::size_t cp) const { return zero_[c * n_ + cp]; }
  const std::string& label(std::size_t i) const { return set_[i].label; }
  JointIndex pos(std::size_t c) const { return unflatten(shape_, c); }

  Residual residual(const FlatTerms& terms) const {
    Residual r;
    for (const auto& [k, v] : terms)
      if (k.first == k.second || !is_zero(k.first, k.second)) r.emplace_back(k, v);
    return r;
  }

  TraceStep record_zero(Rule rule, std::size_t i, std::size_t j, std::size_t c, std::size_t cp) {
    zero_[c * n_ + cp] = zero_[cp * n_ + c] = true;
    return {rule, label(i), label(j), {{FactKind::zero, {pos(c), pos(cp)}}}};
  }

  // With m_ab = i r and m_ba = -i r, a residual  sum k_c t_c + g m_ab + h m_ba
  // with every k_c real has imaginary part r * Re(g - h).
  static bool kills_imaginary_part(const Residual& res, std::size_t a, std::size_t b) {
    CycNum g;
    CycNum h;
    bool seen = false;
    for (const auto& [k, v] : res) {
      if (k.first == k.second) {
        if (!v.is_real()) return false;
      } else if (k.first == a && k.second == b) {
        g = v;
        seen = true;
      } else if (k.first == b && k.second == a) {
        h = v;
        seen = true;
      } else {
        return false;
      }
    }
    return seen && !(g - h).real_part().is_zero();
  }

  // sum k_c t_c = 0 over real t splits into two rational rows (coordinates of
  // 1 and w); its solutions are exactly the constant vectors iff the row sums
  // vanish and the 2 x k system has rank k - 1.
  static bool forces_equal(const std::vector<std::pair<std::size_t, CycNum>>& diag) {
    const std::size_t k = diag.size();
    if (k < 2 || k > 3) return false;
    CycNum sum;
    for (const auto& [c, v] : diag) sum += v;
    if (!sum.is_zero()) return false;
    std::vector<SparseRow<CycNum>> rows(2);
    for (std::size_t i = 0; i < k; ++i) {
      if (!diag[i].second.u().is_zero()) rows[0].emplace_back(i, CycNum(diag[i].second.u()));
      if (!diag[i].second.v().is_zero()) rows[1].emplace_back(i, CycNum(diag[i].second.v()));
    }
    return exact_rank(rows, k) == k - 1;
  }

  std::size_t find(std::size_t x) const {
    while (parent_[x] != x) x = parent_[x];
    return x;
  }
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (b < a) std::swap(a, b);
    parent_[b] = a;
    return true;
  }

  StateSet set_;
  Bipartition b_;
  CutShape shape_;
  std::size_t n_ = 0;
  std::vector<bool> zero_;
  std::vector<bool> anti_;
  std::vector<std::size_t> parent_;
  std::optional<std::size_t> stopper_;
  std::vector<PairTerms> pairs_;
  std::vector<StopperTerms> stopper_terms_;
};

/// Obs1, Obs2 to fixpoint, EvenD (followed by another Obs2 fixpoint when it
/// produced zeros), then Obs3/Obs4 if the off-diagonal closure is complete.
inline DeductionTrace prove(const StateSet& s, Bipartition b) {
  Prover pr(s, b);
  DeductionTrace t;
  t.bipartition = b;
  auto append = [&](std::vector<TraceStep> steps) {
    for (auto& st : steps) t.steps.push_back(std::move(st));
  };
  append(pr.apply_obs1());
  append(pr.apply_obs2());
  const std::size_t before = pr.offdiagonal_zero_count();
  append(pr.apply_evend());
  if (pr.offdiagonal_zero_count() != before) append(pr.apply_obs2());
  if (pr.offdiagonal_closed()) append(pr.apply_obs3_obs4());
  const std::size_t n = pr.joint();
  t.offdiagonal_total = n * (n - 1) / 2;
  t.offdiagonal_zero = pr.offdiagonal_zero_count();
  t.diagonal_classes = pr.diagonal_classes();
  t.verdict = (t.offdiagonal_zero == t.offdiagonal_total && t.diagonal_classes == 1)
                  ? ProofVerdict::trivial_proven
                  : ProofVerdict::inconclusive;
  return t;
}

}  // namespace oplm
