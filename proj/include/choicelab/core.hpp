#pragma once

#include <bit>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "choicelab/errors.hpp"
#include "choicelab/numeric.hpp"

namespace choicelab {

inline constexpr int kMaxItems = 16;
inline constexpr int kExhaustiveWarnItems = 8;

/// Subset of the universe; bit i is item i in canonical order.
class Mask {
 public:
  constexpr Mask() = default;
  constexpr explicit Mask(std::uint32_t bits) : bits_(bits) {}

  static constexpr Mask item(int i) { return Mask(std::uint32_t{1} << i); }
  static constexpr Mask full(int n) { return Mask((std::uint32_t{1} << n) - 1); }

  constexpr std::uint32_t bits() const { return bits_; }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr int size() const { return std::popcount(bits_); }
  constexpr bool contains(int i) const { return (bits_ >> i) & 1u; }
  constexpr bool subset_of(Mask other) const { return (bits_ & ~other.bits_) == 0; }
  constexpr bool intersects(Mask other) const { return (bits_ & other.bits_) != 0; }
  constexpr Mask with(int i) const { return Mask(bits_ | (std::uint32_t{1} << i)); }
  constexpr Mask without(int i) const { return Mask(bits_ & ~(std::uint32_t{1} << i)); }
  /// Index of the lowest item; undefined on the empty mask.
  constexpr int first() const { return std::countr_zero(bits_); }

  friend constexpr Mask operator|(Mask a, Mask b) { return Mask(a.bits_ | b.bits_); }
  friend constexpr Mask operator&(Mask a, Mask b) { return Mask(a.bits_ & b.bits_); }
  /// Set difference.
  friend constexpr Mask operator-(Mask a, Mask b) { return Mask(a.bits_ & ~b.bits_); }
  friend constexpr auto operator<=>(Mask, Mask) = default;

 private:
  std::uint32_t bits_ = 0;
};

/// Calls f(sub) for every subset of s (including the empty set and s) in
/// ascending numeric order.
template <class F>
void for_each_subset(Mask s, F&& f) {
  std::uint32_t sub = 0;
  const std::uint32_t bits = s.bits();
  do {
    f(Mask(sub));
    sub = (sub - bits) & bits;
  } while (sub != 0);
}

/// Like for_each_subset, skipping the empty set.
template <class F>
void for_each_nonempty_subset(Mask s, F&& f) {
  const std::uint32_t bits = s.bits();
  std::uint32_t sub = (0u - bits) & bits;
  while (sub != 0) {
    f(Mask(sub));
    sub = (sub - bits) & bits;
  }
}

/// Calls f(i) for each item index in m, ascending.
template <class F>
void for_each_item(Mask m, F&& f) {
  std::uint32_t bits = m.bits();
  while (bits != 0) {
    f(std::countr_zero(bits));
    bits &= bits - 1;
  }
}

/// The grand set X. Labels are kept in lexicographic order.
class Universe {
 public:
  Universe() = default;
  /// Sorts labels; throws InvalidParamsError on duplicates, empty labels or
  /// a size outside [1, 16].
  explicit Universe(std::vector<std::string> labels);

  int size() const { return static_cast<int>(items_.size()); }
  Mask full() const { return Mask::full(size()); }
  const std::string& label(int i) const { return items_.at(static_cast<std::size_t>(i)); }
  const std::vector<std::string>& labels() const { return items_; }
  std::optional<int> index_of(std::string_view label) const;
  /// Throws ParseError on unknown labels.
  int require_index(std::string_view label) const;
  /// Throws ParseError on unknown or repeated labels.
  Mask mask_of(const std::vector<std::string>& labels) const;
  /// Parses "a,b,c"; the empty string is the empty set.
  Mask parse_mask(std::string_view comma_separated) const;
  std::vector<std::string> labels_of(Mask m) const;
  std::string format(Mask m) const;

  bool contains(Mask m) const { return m.subset_of(full()); }

  friend bool operator==(const Universe&, const Universe&) = default;

 private:
  std::vector<std::string> items_;
};

/// Stochastic choice correspondence μ(T,S), sparse rows with implicit zeros.
template <ProbScalar Scalar>
class Scc {
 public:
  using Entry = std::pair<Mask, Scalar>;
  using Row = std::vector<Entry>;

  Scc() = default;
  Scc(Universe universe, bool allows_empty);

  const Universe& universe() const { return universe_; }
  int n() const { return universe_.size(); }
  bool allows_empty() const { return allows_empty_; }

  /// Registers a menu with no rows yet. Throws ShapeError for the empty
  /// menu or masks outside the universe.
  void add_menu(Mask menu);
  /// Records μ(set, menu) = p, registering the menu if needed. Exact zeros
  /// are not stored. Collections outside the menu are stored as given so
  /// validate_scc can report them. Throws ShapeError on a repeated row.
  void set(Mask set, Mask menu, Scalar p);

  bool has_menu(Mask menu) const;
  std::vector<Mask> menus() const;
  /// Throws MenuAbsentError.
  const Row& row(Mask menu) const;
  /// Every non-empty S ⊆ X present.
  bool is_complete() const;
  /// μ(T,S); zero for unrecorded T ⊆ S. Throws MenuAbsentError or ShapeError.
  const Scalar& mu(Mask set, Mask menu) const;
  /// Same as mu() without the shape and presence checks.
  const Scalar& mu_unchecked(Mask set, Mask menu) const;

  friend bool operator==(const Scc& a, const Scc& b) {
    return a.universe_ == b.universe_ && a.allows_empty_ == b.allows_empty_ && a.present_ == b.present_ &&
           a.rows_ == b.rows_;
  }

 private:
  Universe universe_;
  bool allows_empty_ = false;
  std::vector<bool> present_;
  std::vector<Row> rows_;
};

using ExactScc = Scc<Rational>;
using FloatScc = Scc<double>;

enum class SccProperty {
  Range,        // (i) value outside [0,1]
  Sum,          // (ii) row does not sum to one
  Subset,       // (iii) collection not contained in its menu
  EmptyChoice,  // empty collection while allows_empty is false
};

std::string_view to_string(SccProperty p);

struct Violation {
  Mask menu;
  SccProperty property;
  std::string detail;
};

template <ProbScalar Scalar>
std::vector<Violation> validate_scc(const Scc<Scalar>& scc, const ToleranceConfig& tol = {});

/// μ(T,S) with the error contract of the sparse store.
template <ProbScalar Scalar>
const Scalar& prob_lookup(const Scc<Scalar>& scc, Mask set, Mask menu) {
  return scc.mu(set, menu);
}

/// Every T ⊆ S ⊆ X (T non-empty unless the SCC allows empty choices) has
/// positive probability. Throws IncompleteDatasetError.
template <ProbScalar Scalar>
bool is_full_support(const Scc<Scalar>& scc, const ToleranceConfig& tol = {});

/// Throws IncompleteDatasetError naming the first absent menu.
template <ProbScalar Scalar>
void require_complete(const Scc<Scalar>& scc);

/// Converts every stored probability to double.
FloatScc to_float(const ExactScc& scc);

}  // namespace choicelab
