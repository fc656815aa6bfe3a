#include "choicelab/core.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>
#include <sstream>

namespace choicelab {

// ---------------------------------------------------------------- numeric

bool approx_equal(double a, double b, const ToleranceConfig& tol) {
  const double diff = std::abs(a - b);
  if (diff <= tol.eps_zero) return true;
  return diff <= tol.eps_eq * std::max(std::abs(a), std::abs(b));
}

bool approx_less_equal(double a, double b, const ToleranceConfig& tol) {
  return a <= b || approx_equal(a, b, tol);
}

bool is_rational_literal(std::string_view text) {
  if (text.empty()) return false;
  std::size_t i = 0;
  if (text[0] == '-' || text[0] == '+') i = 1;
  bool digits = false;
  bool slash = false;
  bool den_digits = false;
  for (; i < text.size(); ++i) {
    const char c = text[i];
    if (c >= '0' && c <= '9') {
      (slash ? den_digits : digits) = true;
    } else if (c == '/' && !slash && digits) {
      slash = true;
    } else {
      return false;
    }
  }
  return digits && (!slash || den_digits);
}

Rational parse_rational(std::string_view text) {
  if (!is_rational_literal(text)) {
    throw ParseError("not a rational literal: '" + std::string(text) + "'");
  }
  std::string s(text);
  if (s[0] == '+') s.erase(0, 1);
  Rational r;
  if (r.set_str(s, 10) != 0) throw ParseError("not a rational literal: '" + std::string(text) + "'");
  if (sgn(r.get_den()) == 0) throw ParseError("zero denominator: '" + std::string(text) + "'");
  r.canonicalize();
  return r;
}

double parse_decimal(std::string_view text) {
  double value = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || first == last) {
    throw ParseError("not a decimal literal: '" + std::string(text) + "'");
  }
  if (!std::isfinite(value)) throw ParseError("non-finite decimal: '" + std::string(text) + "'");
  return value;
}

std::string format_prob(const Rational& v) { return v.get_str(10); }

std::string format_prob(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  std::string s(buf, ptr);
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

double to_double(const Rational& v) { return v.get_d(); }

Rational pow_integer(const Rational& base, unsigned long exponent) {
  mpz_class num;
  mpz_class den;
  mpz_pow_ui(num.get_mpz_t(), base.get_num_mpz_t(), exponent);
  mpz_pow_ui(den.get_mpz_t(), base.get_den_mpz_t(), exponent);
  Rational r(num, den);
  r.canonicalize();
  return r;
}

// ---------------------------------------------------------------- universe

Universe::Universe(std::vector<std::string> labels) : items_(std::move(labels)) {
  if (items_.empty() || static_cast<int>(items_.size()) > kMaxItems) {
    throw InvalidParamsError("universe size must be in [1, 16], got " + std::to_string(items_.size()));
  }
  std::sort(items_.begin(), items_.end());
  for (std::size_t i = 0; i < items_.size(); ++i) {
    if (items_[i].empty()) throw InvalidParamsError("empty item label");
    if (items_[i].find_first_of(",;") != std::string::npos) {
      throw InvalidParamsError("item label contains a separator: '" + items_[i] + "'");
    }
    if (i > 0 && items_[i] == items_[i - 1]) throw InvalidParamsError("duplicate item label '" + items_[i] + "'");
  }
}

std::optional<int> Universe::index_of(std::string_view label) const {
  auto it = std::lower_bound(items_.begin(), items_.end(), label);
  if (it == items_.end() || *it != label) return std::nullopt;
  return static_cast<int>(it - items_.begin());
}

int Universe::require_index(std::string_view label) const {
  auto idx = index_of(label);
  if (!idx) throw ParseError("unknown item label '" + std::string(label) + "'");
  return *idx;
}

Mask Universe::mask_of(const std::vector<std::string>& labels) const {
  Mask m;
  for (const auto& l : labels) {
    const int i = require_index(l);
    if (m.contains(i)) throw ParseError("repeated item label '" + l + "'");
    m = m.with(i);
  }
  return m;
}

Mask Universe::parse_mask(std::string_view text) const {
  std::vector<std::string> labels;
  std::size_t start = 0;
  if (text.empty()) return Mask();
  while (true) {
    const auto comma = text.find(',', start);
    std::string_view piece = text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
    while (!piece.empty() && piece.front() == ' ') piece.remove_prefix(1);
    while (!piece.empty() && piece.back() == ' ') piece.remove_suffix(1);
    labels.emplace_back(piece);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return mask_of(labels);
}

std::vector<std::string> Universe::labels_of(Mask m) const {
  std::vector<std::string> out;
  for_each_item(m, [&](int i) { out.push_back(label(i)); });
  return out;
}

std::string Universe::format(Mask m) const {
  std::string out = "{";
  bool first = true;
  for_each_item(m, [&](int i) {
    if (!first) out += ",";
    out += label(i);
    first = false;
  });
  return out + "}";
}

// ---------------------------------------------------------------- scc

namespace {

template <ProbScalar Scalar>
const Scalar& zero_value() {
  static const Scalar zero(0);
  return zero;
}

}  // namespace

template <ProbScalar Scalar>
Scc<Scalar>::Scc(Universe universe, bool allows_empty)
    : universe_(std::move(universe)),
      allows_empty_(allows_empty),
      present_(std::size_t{1} << universe_.size(), false),
      rows_(std::size_t{1} << universe_.size()) {}

template <ProbScalar Scalar>
void Scc<Scalar>::add_menu(Mask menu) {
  if (menu.empty()) throw ShapeError("menus must be non-empty");
  if (!universe_.contains(menu)) throw ShapeError("menu outside the universe");
  present_[menu.bits()] = true;
}

template <ProbScalar Scalar>
void Scc<Scalar>::set(Mask set, Mask menu, Scalar p) {
  add_menu(menu);
  if (!universe_.contains(set)) throw ShapeError("collection outside the universe");
  Row& r = rows_[menu.bits()];
  auto it = std::lower_bound(r.begin(), r.end(), set, [](const Entry& e, Mask m) { return e.first < m; });
  if (it != r.end() && it->first == set) {
    throw ShapeError("repeated row " + universe_.format(set) + " at menu " + universe_.format(menu));
  }
  if constexpr (is_exact_v<Scalar>) {
    if (sgn(p) == 0) return;
    p.canonicalize();
  } else {
    if (p == 0.0) return;
  }
  r.insert(it, Entry{set, std::move(p)});
}

template <ProbScalar Scalar>
bool Scc<Scalar>::has_menu(Mask menu) const {
  return universe_.contains(menu) && !menu.empty() && present_[menu.bits()];
}

template <ProbScalar Scalar>
std::vector<Mask> Scc<Scalar>::menus() const {
  std::vector<Mask> out;
  for (std::uint32_t b = 1; b < present_.size(); ++b) {
    if (present_[b]) out.emplace_back(b);
  }
  return out;
}

template <ProbScalar Scalar>
const typename Scc<Scalar>::Row& Scc<Scalar>::row(Mask menu) const {
  if (!has_menu(menu)) throw MenuAbsentError("menu " + universe_.format(menu) + " not in the dataset");
  return rows_[menu.bits()];
}

template <ProbScalar Scalar>
bool Scc<Scalar>::is_complete() const {
  for (std::uint32_t b = 1; b < present_.size(); ++b) {
    if (!present_[b]) return false;
  }
  return true;
}

template <ProbScalar Scalar>
const Scalar& Scc<Scalar>::mu(Mask set, Mask menu) const {
  if (!has_menu(menu)) throw MenuAbsentError("menu " + universe_.format(menu) + " not in the dataset");
  if (!set.subset_of(menu)) {
    throw ShapeError("collection " + universe_.format(set) + " is not a subset of menu " + universe_.format(menu));
  }
  return mu_unchecked(set, menu);
}

template <ProbScalar Scalar>
const Scalar& Scc<Scalar>::mu_unchecked(Mask set, Mask menu) const {
  const Row& r = rows_[menu.bits()];
  auto it = std::lower_bound(r.begin(), r.end(), set, [](const Entry& e, Mask m) { return e.first < m; });
  if (it != r.end() && it->first == set) return it->second;
  return zero_value<Scalar>();
}

std::string_view to_string(SccProperty p) {
  switch (p) {
    case SccProperty::Range: return "range";
    case SccProperty::Sum: return "sum";
    case SccProperty::Subset: return "subset";
    case SccProperty::EmptyChoice: return "empty_choice";
  }
  return "unknown";
}

template <ProbScalar Scalar>
std::vector<Violation> validate_scc(const Scc<Scalar>& scc, const ToleranceConfig& tol) {
  std::vector<Violation> out;
  const Universe& u = scc.universe();
  for (Mask menu : scc.menus()) {
    Scalar total(0);
    for (const auto& [set, p] : scc.row(menu)) {
      if (!set.subset_of(menu)) {
        out.push_back({menu, SccProperty::Subset, "collection " + u.format(set) + " not contained in menu"});
      }
      if (set.empty() && !scc.allows_empty()) {
        out.push_back({menu, SccProperty::EmptyChoice, "empty collection recorded"});
      }
      bool in_range;
      if constexpr (is_exact_v<Scalar>) {
        in_range = sgn(p) >= 0 && p <= 1;
      } else {
        in_range = p >= -tol.eps_zero && p <= 1.0 + tol.eps_sum;
      }
      if (!in_range) {
        out.push_back({menu, SccProperty::Range, "probability " + format_prob(p) + " of " + u.format(set)});
      }
      total += p;
    }
    bool sums_to_one;
    if constexpr (is_exact_v<Scalar>) {
      sums_to_one = total == 1;
    } else {
      sums_to_one = std::abs(total - 1.0) <= tol.eps_sum;
    }
    if (!sums_to_one) {
      out.push_back({menu, SccProperty::Sum, "row sums to " + format_prob(total)});
    }
  }
  return out;
}

template <ProbScalar Scalar>
void require_complete(const Scc<Scalar>& scc) {
  for (std::uint32_t b = 1; b <= scc.universe().full().bits(); ++b) {
    if (!scc.has_menu(Mask(b))) {
      throw IncompleteDatasetError("dataset is incomplete: menu " + scc.universe().format(Mask(b)) + " is absent");
    }
  }
}

template <ProbScalar Scalar>
bool is_full_support(const Scc<Scalar>& scc, const ToleranceConfig& tol) {
  require_complete(scc);
  for (Mask menu : scc.menus()) {
    bool ok = true;
    for_each_subset(menu, [&](Mask t) {
      if (!ok || (t.empty() && !scc.allows_empty())) return;
      if (!is_positive(scc.mu_unchecked(t, menu), tol)) ok = false;
    });
    if (!ok) return false;
  }
  return true;
}

FloatScc to_float(const ExactScc& scc) {
  FloatScc out(scc.universe(), scc.allows_empty());
  for (Mask menu : scc.menus()) {
    out.add_menu(menu);
    for (const auto& [set, p] : scc.row(menu)) out.set(set, menu, to_double(p));
  }
  return out;
}

template class Scc<Rational>;
template class Scc<double>;
template std::vector<Violation> validate_scc(const Scc<Rational>&, const ToleranceConfig&);
template std::vector<Violation> validate_scc(const Scc<double>&, const ToleranceConfig&);
template bool is_full_support(const Scc<Rational>&, const ToleranceConfig&);
template bool is_full_support(const Scc<double>&, const ToleranceConfig&);
template void require_complete(const Scc<Rational>&);
template void require_complete(const Scc<double>&);

}  // namespace choicelab
