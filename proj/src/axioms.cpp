#include "choicelab/axioms.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>
#include <unordered_map>

namespace choicelab {

namespace {

constexpr std::array<std::pair<AxiomId, std::string_view>, 17> kAxiomNames{{
    {AxiomId::IIS, "IIS"},
    {AxiomId::IIS_O, "IIS_O"},
    {AxiomId::REL_ADD, "REL_ADD"},
    {AxiomId::ADDITIVITY, "ADDITIVITY"},
    {AxiomId::POS1, "POS1"},
    {AxiomId::POS2, "POS2"},
    {AxiomId::DISTINCT_Q, "DISTINCT_Q"},
    {AxiomId::POS3, "POS3"},
    {AxiomId::REL_ADD_1, "REL_ADD_1"},
    {AxiomId::REL_ADD_2, "REL_ADD_2"},
    {AxiomId::PIIS, "PIIS"},
    {AxiomId::PARTITION, "PARTITION"},
    {AxiomId::POS4, "POS4"},
    {AxiomId::PAF, "PAF"},
    {AxiomId::FULL_SUPPORT, "FULL_SUPPORT"},
    {AxiomId::DET_FULL_CHOICE, "DET_FULL_CHOICE"},
    {AxiomId::SINGLETON, "SINGLETON"},
}};

}  // namespace

std::string_view to_string(AxiomId id) {
  for (const auto& [k, name] : kAxiomNames) {
    if (k == id) return name;
  }
  return "UNKNOWN";
}

AxiomId parse_axiom_id(std::string_view text) {
  for (const auto& [k, name] : kAxiomNames) {
    if (name == text) return k;
  }
  throw ParseError("unknown axiom '" + std::string(text) + "'");
}

const std::vector<AxiomId>& all_axiom_ids() {
  static const std::vector<AxiomId> ids = [] {
    std::vector<AxiomId> out;
    for (const auto& entry : kAxiomNames) out.push_back(entry.first);
    return out;
  }();
  return ids;
}

std::string_view to_string(Relation r) {
  switch (r) {
    case Relation::Equal: return "=";
    case Relation::Positive: return ">0";
    case Relation::Zero: return "=0";
    case Relation::PositiveIff: return "positive_iff";
    case Relation::Distinct: return "!=";
  }
  return "?";
}

template <ProbScalar Scalar>
Mask Witness<Scalar>::at(std::string_view name) const {
  for (const auto& b : bindings) {
    if (b.name == name) return b.mask;
  }
  throw std::out_of_range("witness has no binding '" + std::string(name) + "'");
}

namespace {

Binding menu_binding(std::string name, Mask m) { return Binding{std::move(name), m, false}; }
Binding item_binding(std::string name, int i) { return Binding{std::move(name), Mask::item(i), true}; }

template <ProbScalar Scalar>
class Checker {
 public:
  Checker(const Scc<Scalar>& scc, const CheckOptions& opts) : scc_(scc), opts_(opts), support_(opts.tol) {
    if (opts.support_eps) support_.eps_zero = *opts.support_eps;
  }

  const Scc<Scalar>& scc() const { return scc_; }
  const CheckOptions& opts() const { return opts_; }
  const Scalar& mu(Mask t, Mask s) const { return scc_.mu_unchecked(t, s); }
  bool pos(const Scalar& v) const { return is_positive(v, support_); }
  bool zero(const Scalar& v) const { return is_zero(v, support_); }
  bool eq(const Scalar& a, const Scalar& b) const { return approx_equal(a, b, opts_.tol); }

  bool violated(Relation rel, const Scalar& lhs, const Scalar& rhs) const {
    switch (rel) {
      case Relation::Equal: return !eq(lhs, rhs);
      case Relation::Positive: return !pos(lhs);
      case Relation::Zero: return !zero(lhs);
      case Relation::PositiveIff: return pos(lhs) != (rhs == Scalar(1));
      case Relation::Distinct: return lhs == rhs;
    }
    return false;
  }

 private:
  const Scc<Scalar>& scc_;
  const CheckOptions& opts_;
  ToleranceConfig support_;
};

template <ProbScalar Scalar>
class Collector {
 public:
  Collector(AxiomId id, std::size_t cap) : cap_(cap) { report_.axiom = id; }

  void checked(std::size_t k = 1) { report_.instances_checked += k; }
  void vacuous(std::size_t k = 1) {
    report_.instances_checked += k;
    report_.instances_vacuous += k;
  }
  bool room() const { return report_.witnesses.size() < cap_; }
  void fail(Witness<Scalar> w) {
    ++report_.violations;
    if (room()) {
      w.axiom = report_.axiom;
      report_.witnesses.push_back(std::move(w));
    }
  }
  /// Counts a violation when the witness list is already full.
  void fail_uncaptured() { ++report_.violations; }

  AxiomReport<Scalar> finish() {
    report_.holds = report_.violations == 0;
    return std::move(report_);
  }

 private:
  AxiomReport<Scalar> report_;
  std::size_t cap_;
};

template <ProbScalar Scalar>
using Sides = std::pair<Scalar, Scalar>;

// ------------------------------------------------------------ instance sides

template <ProbScalar Scalar>
Sides<Scalar> iis_sides(const Checker<Scalar>& c, Mask s, Mask s2, Mask t, Mask t2) {
  return {c.mu(t, s) * c.mu(t2, s2), c.mu(t2, s) * c.mu(t, s2)};
}

template <ProbScalar Scalar>
Scalar extended_mass(const Checker<Scalar>& c, Mask t, Mask s, int x) {
  return c.mu(t, s) + c.mu(t.with(x), s);
}

template <ProbScalar Scalar>
Sides<Scalar> rel_add_sides(const Checker<Scalar>& c, Mask s, int x, Mask t, Mask t2) {
  const Mask sx = s.without(x);
  return {c.mu(t, sx) * extended_mass(c, t2, s, x), c.mu(t2, sx) * extended_mass(c, t, s, x)};
}

template <ProbScalar Scalar>
Sides<Scalar> additivity_sides(const Checker<Scalar>& c, Mask s, int x, Mask t) {
  return {c.mu(t, s.without(x)) - c.mu(t, s), c.mu(t.with(x), s)};
}

template <ProbScalar Scalar>
Scalar salience_total(const Checker<Scalar>& c, const std::vector<Mask>& q, Mask s) {
  const Mask grand = c.scc().universe().full();
  Scalar total(0);
  for_each_item(s, [&](int y) { total += c.mu(q[static_cast<std::size_t>(y)], grand); });
  return total;
}

// Cross-multiplied by D = Σ_{y∈S} μ(Q^R(y),X) to clear the adjustment term.
template <ProbScalar Scalar>
Sides<Scalar> rel_add_2_sides(const Checker<Scalar>& c, const std::vector<Mask>& q, Mask s, int x, Mask t, Mask t2,
                              const Scalar& d) {
  const Mask sx = s.without(x);
  const Mask grand = c.scc().universe().full();
  Scalar lhs = c.mu(t, sx) * extended_mass(c, t2, s, x) * d;
  Scalar rhs = c.mu(t2, sx) * (extended_mass(c, t, s, x) * d - c.mu(q[static_cast<std::size_t>(x)], grand));
  return {std::move(lhs), std::move(rhs)};
}

template <ProbScalar Scalar>
Sides<Scalar> piis_sides(const Checker<Scalar>& c, const Witness<Scalar>& w) {
  const Mask t = w.at("T"), t2 = w.at("T'"), a = w.at("T*"), s = w.at("S"), s2 = w.at("S'");
  const Mask b = w.at("T*2"), r = w.at("S2"), r2 = w.at("S'2");
  return {c.mu(t, s) * c.mu(a, s2) * c.mu(b, r) * c.mu(t2, r2), c.mu(a, s) * c.mu(t2, s2) * c.mu(t, r) * c.mu(b, r2)};
}

template <ProbScalar Scalar>
Scalar mass_containing(const Checker<Scalar>& c, Mask s, int x) {
  Scalar total(0);
  for (const auto& [t, p] : c.scc().row(s)) {
    if (t.contains(x)) total += p;
  }
  return total;
}

template <ProbScalar Scalar>
Scalar indicator(bool b) {
  return b ? Scalar(1) : Scalar(0);
}

// ------------------------------------------------------------ checks

template <ProbScalar Scalar>
AxiomReport<Scalar> iis_impl(const Checker<Scalar>& c, bool empty_variant) {
  const auto& scc = c.scc();
  Collector<Scalar> out(empty_variant ? AxiomId::IIS_O : AxiomId::IIS, c.opts().witness_cap);
  const std::uint32_t top = scc.universe().full().bits();
  std::vector<Mask> live;
  for (std::uint32_t sb = 1; sb <= top; ++sb) {
    for (std::uint32_t sb2 = sb + 1; sb2 <= top; ++sb2) {
      const Mask s(sb), s2(sb2);
      const Mask common = s & s2;
      if (common.empty() && !empty_variant) continue;
      live.clear();
      std::size_t k = 0;
      for_each_subset(common, [&](Mask t) {
        if (t.empty() && !empty_variant) return;
        ++k;
        if (c.pos(c.mu(t, s)) && c.pos(c.mu(t, s2))) live.push_back(t);
      });
      const std::size_t pairs = k * (k - 1) / 2;
      const std::size_t live_pairs = live.size() * (live.size() - (live.empty() ? 0 : 1)) / 2;
      out.vacuous(pairs - live_pairs);
      for (std::size_t i = 0; i < live.size(); ++i) {
        for (std::size_t j = i + 1; j < live.size(); ++j) {
          out.checked();
          auto [lhs, rhs] = iis_sides(c, s, s2, live[i], live[j]);
          if (!c.violated(Relation::Equal, lhs, rhs)) continue;
          if (!out.room()) {
            out.fail_uncaptured();
            continue;
          }
          out.fail({{}, {menu_binding("S", s), menu_binding("S'", s2), menu_binding("T", live[i]), menu_binding("T'", live[j])},
                    std::move(lhs), std::move(rhs), Relation::Equal, 0});
        }
      }
    }
  }
  return out.finish();
}

// Shared enumeration for REL_ADD and REL_ADD_1: all (S, x, T < T') with
// T, T' non-empty subsets of S∖x. `excluded(S,x)` names a collection that
// makes an instance vacuous (empty mask for none).
template <ProbScalar Scalar, class Excluded>
AxiomReport<Scalar> relative_additivity_impl(const Checker<Scalar>& c, AxiomId id, Excluded&& excluded) {
  const auto& scc = c.scc();
  Collector<Scalar> out(id, c.opts().witness_cap);
  std::vector<Mask> ts;
  std::vector<Scalar> before;
  std::vector<Scalar> after;
  for (Mask s : scc.menus()) {
    if (s.size() < 2) continue;
    for_each_item(s, [&](int x) {
      const Mask sx = s.without(x);
      const Mask skip = excluded(s, x);
      ts.clear();
      before.clear();
      after.clear();
      for_each_nonempty_subset(sx, [&](Mask t) {
        ts.push_back(t);
        before.push_back(c.mu(t, sx));
        after.push_back(extended_mass(c, t, s, x));
      });
      for (std::size_t i = 0; i < ts.size(); ++i) {
        for (std::size_t j = i + 1; j < ts.size(); ++j) {
          if (!skip.empty() && (ts[i] == skip || ts[j] == skip)) {
            out.vacuous();
            continue;
          }
          out.checked();
          Scalar lhs = before[i] * after[j];
          Scalar rhs = before[j] * after[i];
          if (!c.violated(Relation::Equal, lhs, rhs)) continue;
          if (!out.room()) {
            out.fail_uncaptured();
            continue;
          }
          out.fail({{}, {menu_binding("S", s), item_binding("x", x), menu_binding("T", ts[i]), menu_binding("T'", ts[j])},
                    std::move(lhs), std::move(rhs), Relation::Equal, 0});
        }
      }
    });
  }
  return out.finish();
}

template <ProbScalar Scalar>
AxiomReport<Scalar> additivity_impl(const Checker<Scalar>& c) {
  Collector<Scalar> out(AxiomId::ADDITIVITY, c.opts().witness_cap);
  for (Mask s : c.scc().menus()) {
    if (s.size() < 2) continue;
    for_each_item(s, [&](int x) {
      for_each_subset(s.without(x), [&](Mask t) {
        out.checked();
        auto [lhs, rhs] = additivity_sides(c, s, x, t);
        if (!c.violated(Relation::Equal, lhs, rhs)) return;
        out.fail({{}, {menu_binding("S", s), item_binding("x", x), menu_binding("T", t)}, std::move(lhs), std::move(rhs),
                  Relation::Equal, 0});
      });
    });
  }
  return out.finish();
}

template <ProbScalar Scalar>
AxiomReport<Scalar> pos1_impl(const Checker<Scalar>& c) {
  Collector<Scalar> out(AxiomId::POS1, c.opts().witness_cap);
  for (Mask s : c.scc().menus()) {
    for_each_item(s, [&](int x) {
      out.checked();
      Scalar lhs = mass_containing(c, s, x);
      if (!c.violated(Relation::Positive, lhs, Scalar(0))) return;
      out.fail({{}, {menu_binding("S", s), item_binding("x", x)}, std::move(lhs), Scalar(0), Relation::Positive, 0});
    });
  }
  return out.finish();
}

// For all non-empty T ⊆ S: μ(T,S) > 0 iff T = B∩S for some B in `carriers(S)`.
template <ProbScalar Scalar, class Carriers>
AxiomReport<Scalar> positivity_iff_impl(const Checker<Scalar>& c, AxiomId id, Carriers&& carriers) {
  Collector<Scalar> out(id, c.opts().witness_cap);
  std::vector<Mask> realized;
  for (Mask s : c.scc().menus()) {
    realized.clear();
    for (Mask b : carriers(s)) realized.push_back(b & s);
    std::sort(realized.begin(), realized.end());
    for_each_nonempty_subset(s, [&](Mask t) {
      out.checked();
      const bool structural = std::binary_search(realized.begin(), realized.end(), t);
      const Scalar& lhs = c.mu(t, s);
      const Scalar rhs = indicator<Scalar>(structural);
      if (!c.violated(Relation::PositiveIff, lhs, rhs)) return;
      out.fail({{}, {menu_binding("S", s), menu_binding("T", t)}, lhs, rhs, Relation::PositiveIff, 0});
    });
  }
  return out.finish();
}

std::vector<Mask> constraint_images(const std::vector<Mask>& q, Mask s) {
  std::vector<Mask> out;
  for_each_item(s, [&](int x) { out.push_back(q[static_cast<std::size_t>(x)]); });
  return out;
}

template <ProbScalar Scalar>
std::vector<Mask> revealed_constraints(const Checker<Scalar>& c) {
  const auto& scc = c.scc();
  const int n = scc.n();
  std::vector<Mask> q(static_cast<std::size_t>(n));
  for (int x = 0; x < n; ++x) {
    Mask qx = Mask::item(x);
    for (int y = 0; y < n; ++y) {
      if (y == x) continue;
      const Mask pair = Mask::item(x).with(y);
      if (!scc.has_menu(pair)) {
        throw MissingBinaryMenuError("binary menu " + scc.universe().format(pair) + " is absent");
      }
      if (c.zero(c.mu(Mask::item(x), pair))) qx = qx.with(y);
    }
    q[static_cast<std::size_t>(x)] = qx;
  }
  return q;
}

template <ProbScalar Scalar>
Sides<Scalar> distinct_q_sides(const std::vector<Mask>& q, int x, int y) {
  return {Scalar(q[static_cast<std::size_t>(x)].bits()), Scalar(q[static_cast<std::size_t>(y)].bits())};
}

template <ProbScalar Scalar>
AxiomReport<Scalar> distinct_q_impl(const Checker<Scalar>& c, const std::vector<Mask>& q) {
  Collector<Scalar> out(AxiomId::DISTINCT_Q, c.opts().witness_cap);
  const int n = c.scc().n();
  for (int x = 0; x < n; ++x) {
    for (int y = x + 1; y < n; ++y) {
      out.checked();
      auto [lhs, rhs] = distinct_q_sides<Scalar>(q, x, y);
      if (!c.violated(Relation::Distinct, lhs, rhs)) continue;
      out.fail({{}, {item_binding("x", x), item_binding("y", y)}, std::move(lhs), std::move(rhs), Relation::Distinct, 0});
    }
  }
  return out.finish();
}

template <ProbScalar Scalar>
AxiomReport<Scalar> rel_add_2_impl(const Checker<Scalar>& c, const std::vector<Mask>& q) {
  Collector<Scalar> out(AxiomId::REL_ADD_2, c.opts().witness_cap);
  for (Mask s : c.scc().menus()) {
    if (s.size() < 2) continue;
    const Scalar d = salience_total(c, q, s);
    for_each_item(s, [&](int x) {
      const Mask sx = s.without(x);
      const Mask t = q[static_cast<std::size_t>(x)] & sx;
      if (t.empty()) return;
      for_each_nonempty_subset(sx, [&](Mask t2) {
        if (t2 == t) return;
        if (!c.pos(d)) {
          out.vacuous();
          return;
        }
        out.checked();
        auto [lhs, rhs] = rel_add_2_sides(c, q, s, x, t, t2, d);
        if (!c.violated(Relation::Equal, lhs, rhs)) return;
        out.fail({{}, {menu_binding("S", s), item_binding("x", x), menu_binding("T", t), menu_binding("T'", t2)},
                  std::move(lhs), std::move(rhs), Relation::Equal, 0});
      });
    });
  }
  return out.finish();
}

// Distinct values of μ(U,S)/μ(V,S) over menus where both are positive. Only
// the first value and the first conflicting one are kept: a chain product
// a·b is independent of the path only if every such set is a single value.
template <ProbScalar Scalar>
struct RatioRecord {
  Mask v;
  Mask first_menu;
  Scalar first_num, first_den;
  Scalar value;  // exact mode only: first_num / first_den
  std::optional<Mask> conflict_menu;
};

template <ProbScalar Scalar>
AxiomReport<Scalar> piis_impl(const Checker<Scalar>& c) {
  const auto& scc = c.scc();
  Collector<Scalar> out(AxiomId::PIIS, c.opts().witness_cap);
  const std::size_t size = std::size_t{1} << scc.n();

  // ratios[U] lists records for every V reachable from U, ascending in V.
  std::vector<std::vector<RatioRecord<Scalar>>> ratios(size);
  std::unordered_map<std::uint32_t, std::size_t> slot;
  std::vector<Mask> support;
  for (Mask s : scc.menus()) {
    support.clear();
    for (const auto& [t, p] : scc.row(s)) {
      if (!t.empty() && t.subset_of(s) && c.pos(p)) support.push_back(t);
    }
    for (Mask u : support) {
      const Scalar& pu = c.mu(u, s);
      for (Mask v : support) {
        const Scalar& pv = c.mu(v, s);
        const std::uint32_t key = (u.bits() << 16) | v.bits();
        auto it = slot.find(key);
        if (it == slot.end()) {
          slot.emplace(key, ratios[u.bits()].size());
          Scalar value(0);
          if constexpr (is_exact_v<Scalar>) value = pu / pv;
          ratios[u.bits()].push_back({v, s, pu, pv, std::move(value), std::nullopt});
          continue;
        }
        auto& rec = ratios[u.bits()][it->second];
        if (rec.conflict_menu) continue;
        if (!c.eq(pu * rec.first_den, rec.first_num * pv)) rec.conflict_menu = s;
      }
    }
  }
  for (auto& list : ratios) {
    std::sort(list.begin(), list.end(), [](const auto& a, const auto& b) { return a.v < b.v; });
  }

  struct Reference {
    bool set = false;
    Mask path, s, s2;
    Scalar num, den;  // chain value num/den (den unused in exact mode)
  };
  std::vector<Reference> reference(size);
  const std::size_t collections = size - 1;
  std::size_t live = 0;

  auto chain_witness = [&](Mask t, Mask t2, Mask a, Mask s, Mask s2, Mask b, Mask r, Mask r2) {
    Witness<Scalar> w{{},
                      {menu_binding("T", t), menu_binding("T'", t2), menu_binding("T*", a), menu_binding("S", s),
                       menu_binding("S'", s2), menu_binding("T*2", b), menu_binding("S2", r), menu_binding("S'2", r2)},
                      Scalar(0), Scalar(0), Relation::Equal, 0};
    auto [lhs, rhs] = piis_sides(c, w);
    w.lhs = std::move(lhs);
    w.rhs = std::move(rhs);
    return w;
  };

  for (std::uint32_t tb = 1; tb < size; ++tb) {
    const Mask t(tb);
    for (auto& ref : reference) ref.set = false;
    for (const auto& first : ratios[tb]) {
      const Mask path = first.v;
      for (const auto& second : ratios[path.bits()]) {
        const Mask t2 = second.v;
        ++live;
        out.checked();
        if (first.conflict_menu || second.conflict_menu) {
          if (!out.room()) {
            out.fail_uncaptured();
            continue;
          }
          if (first.conflict_menu) {
            out.fail(chain_witness(t, t2, path, first.first_menu, second.first_menu, path, *first.conflict_menu,
                                   second.first_menu));
          } else {
            out.fail(chain_witness(t, t2, path, first.first_menu, second.first_menu, path, first.first_menu,
                                   *second.conflict_menu));
          }
          continue;
        }
        Reference& ref = reference[t2.bits()];
        if (!ref.set) {
          ref.set = true;
          ref.path = path;
          ref.s = first.first_menu;
          ref.s2 = second.first_menu;
          if constexpr (is_exact_v<Scalar>) {
            ref.num = first.value * second.value;
          } else {
            ref.num = first.first_num * second.first_num;
            ref.den = first.first_den * second.first_den;
          }
          continue;
        }
        bool same;
        if constexpr (is_exact_v<Scalar>) {
          same = ref.num == first.value * second.value;
        } else {
          same = c.eq(first.first_num * second.first_num * ref.den, ref.num * first.first_den * second.first_den);
        }
        if (same) continue;
        if (!out.room()) {
          out.fail_uncaptured();
          continue;
        }
        out.fail(chain_witness(t, t2, ref.path, ref.s, ref.s2, path, first.first_menu, second.first_menu));
      }
    }
  }
  out.vacuous(collections * collections * collections - live);
  return out.finish();
}

template <ProbScalar Scalar>
std::vector<Mask> revealed_nests(const Checker<Scalar>& c) {
  const auto& scc = c.scc();
  const Mask grand = scc.universe().full();
  if (!scc.has_menu(grand)) throw MenuAbsentError("grand-set menu is absent");
  std::vector<Mask> out;
  for (const auto& [t, p] : scc.row(grand)) {
    if (!t.empty() && c.pos(p)) out.push_back(t);
  }
  return out;
}

template <ProbScalar Scalar>
AxiomReport<Scalar> partition_impl(const Checker<Scalar>& c, const std::vector<Mask>& nests) {
  Collector<Scalar> out(AxiomId::PARTITION, c.opts().witness_cap);
  Mask covered;
  for (std::size_t i = 0; i < nests.size(); ++i) {
    covered = covered | nests[i];
    for (std::size_t j = i + 1; j < nests.size(); ++j) {
      out.checked();
      const Mask overlap = nests[i] & nests[j];
      if (overlap.empty()) continue;
      out.fail({{}, {menu_binding("N", nests[i]), menu_binding("N'", nests[j])}, Scalar(overlap.size()), Scalar(0),
                Relation::Zero, 1});
    }
  }
  out.checked();
  const Mask uncovered = c.scc().universe().full() - covered;
  if (!uncovered.empty()) {
    out.fail({{}, {menu_binding("uncovered", uncovered)}, Scalar(uncovered.size()), Scalar(0), Relation::Zero, 2});
  }
  return out.finish();
}

template <ProbScalar Scalar>
AxiomReport<Scalar> paf_impl(const Checker<Scalar>& c) {
  Collector<Scalar> out(AxiomId::PAF, c.opts().witness_cap);
  for (Mask s : c.scc().menus()) {
    if (s.size() < 2) continue;
    for_each_item(s, [&](int x) {
      const Mask sx = s.without(x);
      const bool x_unchosen = c.zero(c.mu(Mask::item(x), s));
      for_each_nonempty_subset(sx, [&](Mask t) {
        const Scalar& lhs = c.mu(t, s);
        const Scalar& rhs = c.mu(t, sx);
        if (!x_unchosen || !c.pos(lhs) || !c.pos(rhs)) {
          out.vacuous();
          return;
        }
        out.checked();
        if (!c.violated(Relation::Equal, lhs, rhs)) return;
        out.fail({{}, {menu_binding("S", s), item_binding("x", x), menu_binding("T", t)}, lhs, rhs, Relation::Equal, 0});
      });
    });
  }
  return out.finish();
}

template <ProbScalar Scalar>
AxiomReport<Scalar> full_support_impl(const Checker<Scalar>& c) {
  Collector<Scalar> out(AxiomId::FULL_SUPPORT, c.opts().witness_cap);
  const bool with_empty = c.scc().allows_empty();
  for (Mask s : c.scc().menus()) {
    for_each_subset(s, [&](Mask t) {
      if (t.empty() && !with_empty) return;
      out.checked();
      const Scalar& lhs = c.mu(t, s);
      if (!c.violated(Relation::Positive, lhs, Scalar(0))) return;
      out.fail({{}, {menu_binding("S", s), menu_binding("T", t)}, lhs, Scalar(0), Relation::Positive, 0});
    });
  }
  return out.finish();
}

template <ProbScalar Scalar>
AxiomReport<Scalar> det_full_choice_impl(const Checker<Scalar>& c) {
  Collector<Scalar> out(AxiomId::DET_FULL_CHOICE, c.opts().witness_cap);
  for (Mask s : c.scc().menus()) {
    out.checked();
    const Scalar& lhs = c.mu(s, s);
    if (!c.violated(Relation::Equal, lhs, Scalar(1))) continue;
    out.fail({{}, {menu_binding("S", s)}, lhs, Scalar(1), Relation::Equal, 0});
  }
  return out.finish();
}

template <ProbScalar Scalar>
Sides<Scalar> singleton_ratio_sides(const Checker<Scalar>& c, Mask s, Mask s2, int x, int y) {
  return iis_sides(c, s, s2, Mask::item(x), Mask::item(y));
}

template <ProbScalar Scalar>
AxiomReport<Scalar> singleton_impl(const Checker<Scalar>& c) {
  const auto& scc = c.scc();
  Collector<Scalar> out(AxiomId::SINGLETON, c.opts().witness_cap);
  // (i) exactly the singletons are chosen.
  for (Mask s : scc.menus()) {
    for_each_nonempty_subset(s, [&](Mask t) {
      out.checked();
      const Relation rel = t.size() == 1 ? Relation::Positive : Relation::Zero;
      const Scalar& lhs = c.mu(t, s);
      if (!c.violated(rel, lhs, Scalar(0))) return;
      out.fail({{}, {menu_binding("S", s), menu_binding("T", t)}, lhs, Scalar(0), rel, 1});
    });
  }
  // (ii) menu-independent ratios between singletons.
  const int n = scc.n();
  const Mask grand = scc.universe().full();
  std::vector<Mask> supersets;
  for (int x = 0; x < n; ++x) {
    for (int y = x + 1; y < n; ++y) {
      const Mask pair = Mask::item(x).with(y);
      supersets.clear();
      for_each_subset(grand - pair, [&](Mask rest) { supersets.push_back(rest | pair); });
      std::sort(supersets.begin(), supersets.end());
      for (std::size_t i = 0; i < supersets.size(); ++i) {
        for (std::size_t j = i + 1; j < supersets.size(); ++j) {
          const Mask s = supersets[i], s2 = supersets[j];
          if (!c.pos(c.mu(Mask::item(x), s)) || !c.pos(c.mu(Mask::item(y), s)) || !c.pos(c.mu(Mask::item(x), s2)) ||
              !c.pos(c.mu(Mask::item(y), s2))) {
            out.vacuous();
            continue;
          }
          out.checked();
          auto [lhs, rhs] = singleton_ratio_sides(c, s, s2, x, y);
          if (!c.violated(Relation::Equal, lhs, rhs)) continue;
          out.fail({{}, {menu_binding("S", s), menu_binding("S'", s2), item_binding("x", x), item_binding("y", y)},
                    std::move(lhs), std::move(rhs), Relation::Equal, 2});
        }
      }
    }
  }
  return out.finish();
}

template <ProbScalar Scalar>
AxiomReport<Scalar> positivity_impl(const Checker<Scalar>& c, int kind) {
  switch (kind) {
    case 1: return pos1_impl(c);
    case 2: {
      if (!c.opts().attributes) throw MissingAttributesError("POS2 needs exogenous attributes");
      const auto& attributes = *c.opts().attributes;
      for (Mask a : attributes) {
        if (!c.scc().universe().contains(a)) throw InvalidParamsError("attribute outside the universe");
      }
      return positivity_iff_impl(c, AxiomId::POS2, [&](Mask) { return attributes; });
    }
    case 3: {
      const auto q = revealed_constraints(c);
      return positivity_iff_impl(c, AxiomId::POS3, [&](Mask s) { return constraint_images(q, s); });
    }
    case 4: {
      const auto nests = revealed_nests(c);
      return positivity_iff_impl(c, AxiomId::POS4, [&](Mask) { return nests; });
    }
    default: throw InvalidParamsError("positivity kind must be 1, 2, 3 or 4");
  }
}

template <ProbScalar Scalar>
AxiomReport<Scalar> run_impl(const Checker<Scalar>& c, AxiomId id) {
  switch (id) {
    case AxiomId::IIS: return iis_impl(c, false);
    case AxiomId::IIS_O: return iis_impl(c, true);
    case AxiomId::REL_ADD:
      return relative_additivity_impl(c, AxiomId::REL_ADD, [](Mask, int) { return Mask(); });
    case AxiomId::ADDITIVITY:
      if (!c.scc().allows_empty()) throw WrongVariantError("ADDITIVITY needs an SCC that allows empty choices");
      return additivity_impl(c);
    case AxiomId::POS1: return positivity_impl(c, 1);
    case AxiomId::POS2: return positivity_impl(c, 2);
    case AxiomId::POS3: return positivity_impl(c, 3);
    case AxiomId::POS4: return positivity_impl(c, 4);
    case AxiomId::DISTINCT_Q: return distinct_q_impl(c, revealed_constraints(c));
    case AxiomId::REL_ADD_1: {
      const auto q = revealed_constraints(c);
      return relative_additivity_impl(c, AxiomId::REL_ADD_1,
                                      [&](Mask s, int x) { return q[static_cast<std::size_t>(x)] & s.without(x); });
    }
    case AxiomId::REL_ADD_2: return rel_add_2_impl(c, revealed_constraints(c));
    case AxiomId::PIIS: return piis_impl(c);
    case AxiomId::PARTITION: return partition_impl(c, revealed_nests(c));
    case AxiomId::PAF: return paf_impl(c);
    case AxiomId::FULL_SUPPORT: return full_support_impl(c);
    case AxiomId::DET_FULL_CHOICE: return det_full_choice_impl(c);
    case AxiomId::SINGLETON: return singleton_impl(c);
  }
  throw InvalidParamsError("unknown axiom");
}

template <ProbScalar Scalar>
std::string describe(const Universe& u, Mask t, Mask s, int x) {
  return "S=" + u.format(s) + " x=" + u.label(x) + " T=" + u.format(t);
}

}  // namespace

template <ProbScalar Scalar>
AxiomReport<Scalar> run_axiom(const Scc<Scalar>& scc, AxiomId id, const CheckOptions& opts) {
  require_complete(scc);
  return run_impl(Checker<Scalar>(scc, opts), id);
}

template <ProbScalar Scalar>
AxiomReport<Scalar> check_iis(const Scc<Scalar>& scc, const CheckOptions& opts, bool empty_variant) {
  return run_axiom(scc, empty_variant ? AxiomId::IIS_O : AxiomId::IIS, opts);
}

template <ProbScalar Scalar>
AxiomReport<Scalar> check_relative_additivity(const Scc<Scalar>& scc, const CheckOptions& opts) {
  return run_axiom(scc, AxiomId::REL_ADD, opts);
}

template <ProbScalar Scalar>
AxiomReport<Scalar> check_additivity(const Scc<Scalar>& scc, const CheckOptions& opts) {
  if (!scc.allows_empty()) throw WrongVariantError("ADDITIVITY needs an SCC that allows empty choices");
  return run_axiom(scc, AxiomId::ADDITIVITY, opts);
}

template <ProbScalar Scalar>
AxiomReport<Scalar> check_positivity(const Scc<Scalar>& scc, int kind, const CheckOptions& opts) {
  require_complete(scc);
  return positivity_impl(Checker<Scalar>(scc, opts), kind);
}

template <ProbScalar Scalar>
std::vector<Mask> derive_revealed_constraints(const Scc<Scalar>& scc, const CheckOptions& opts) {
  return revealed_constraints(Checker<Scalar>(scc, opts));
}

template <ProbScalar Scalar>
std::vector<AxiomReport<Scalar>> check_rrm_suite(const Scc<Scalar>& scc, const CheckOptions& opts) {
  require_complete(scc);
  const Checker<Scalar> c(scc, opts);
  const auto q = revealed_constraints(c);
  std::vector<AxiomReport<Scalar>> out;
  out.push_back(distinct_q_impl(c, q));
  out.push_back(positivity_iff_impl(c, AxiomId::POS3, [&](Mask s) { return constraint_images(q, s); }));
  out.push_back(relative_additivity_impl(c, AxiomId::REL_ADD_1,
                                         [&](Mask s, int x) { return q[static_cast<std::size_t>(x)] & s.without(x); }));
  out.push_back(rel_add_2_impl(c, q));
  return out;
}

template <ProbScalar Scalar>
AxiomReport<Scalar> check_piis(const Scc<Scalar>& scc, const CheckOptions& opts) {
  return run_axiom(scc, AxiomId::PIIS, opts);
}

template <ProbScalar Scalar>
std::vector<Mask> derive_revealed_nests(const Scc<Scalar>& scc, const CheckOptions& opts) {
  return revealed_nests(Checker<Scalar>(scc, opts));
}

template <ProbScalar Scalar>
std::vector<AxiomReport<Scalar>> check_nsc_structure(const Scc<Scalar>& scc, const CheckOptions& opts) {
  require_complete(scc);
  const Checker<Scalar> c(scc, opts);
  const auto nests = revealed_nests(c);
  std::vector<AxiomReport<Scalar>> out;
  out.push_back(piis_impl(c));
  out.push_back(partition_impl(c, nests));
  out.push_back(positivity_iff_impl(c, AxiomId::POS4, [&](Mask) { return nests; }));
  return out;
}

template <ProbScalar Scalar>
AxiomReport<Scalar> check_paf(const Scc<Scalar>& scc, const CheckOptions& opts) {
  return run_axiom(scc, AxiomId::PAF, opts);
}

template <ProbScalar Scalar>
AxiomReport<Scalar> check_full_support(const Scc<Scalar>& scc, const CheckOptions& opts) {
  return run_axiom(scc, AxiomId::FULL_SUPPORT, opts);
}

template <ProbScalar Scalar>
AxiomReport<Scalar> check_special(const Scc<Scalar>& scc, AxiomId kind, const CheckOptions& opts) {
  if (kind != AxiomId::DET_FULL_CHOICE && kind != AxiomId::SINGLETON) {
    throw InvalidParamsError("check_special takes DET_FULL_CHOICE or SINGLETON");
  }
  return run_axiom(scc, kind, opts);
}

template <ProbScalar Scalar>
std::vector<AxiomId> default_battery(const Scc<Scalar>& scc, const CheckOptions& opts) {
  std::vector<AxiomId> out;
  for (AxiomId id : all_axiom_ids()) {
    if (id == AxiomId::POS2 && !opts.attributes) continue;
    if ((id == AxiomId::IIS_O || id == AxiomId::ADDITIVITY) && !scc.allows_empty()) continue;
    out.push_back(id);
  }
  return out;
}

template <ProbScalar Scalar>
Reevaluation<Scalar> reevaluate_witness(const Scc<Scalar>& scc, const Witness<Scalar>& w, const CheckOptions& opts) {
  const Checker<Scalar> c(scc, opts);
  auto item = [&](std::string_view name) { return w.at(name).first(); };
  Sides<Scalar> sides{Scalar(0), Scalar(0)};
  switch (w.axiom) {
    case AxiomId::IIS:
    case AxiomId::IIS_O:
      sides = iis_sides(c, w.at("S"), w.at("S'"), w.at("T"), w.at("T'"));
      break;
    case AxiomId::REL_ADD:
    case AxiomId::REL_ADD_1:
      sides = rel_add_sides(c, w.at("S"), item("x"), w.at("T"), w.at("T'"));
      break;
    case AxiomId::REL_ADD_2: {
      const auto q = revealed_constraints(c);
      const Mask s = w.at("S");
      sides = rel_add_2_sides(c, q, s, item("x"), w.at("T"), w.at("T'"), salience_total(c, q, s));
      break;
    }
    case AxiomId::ADDITIVITY:
      sides = additivity_sides(c, w.at("S"), item("x"), w.at("T"));
      break;
    case AxiomId::POS1:
      sides = {mass_containing(c, w.at("S"), item("x")), Scalar(0)};
      break;
    case AxiomId::POS2:
    case AxiomId::POS3:
    case AxiomId::POS4: {
      const Mask s = w.at("S"), t = w.at("T");
      std::vector<Mask> carriers;
      if (w.axiom == AxiomId::POS2) {
        if (!opts.attributes) throw MissingAttributesError("POS2 needs exogenous attributes");
        carriers = *opts.attributes;
      } else if (w.axiom == AxiomId::POS3) {
        carriers = constraint_images(revealed_constraints(c), s);
      } else {
        carriers = revealed_nests(c);
      }
      const bool structural = std::any_of(carriers.begin(), carriers.end(), [&](Mask b) { return (b & s) == t; });
      sides = {c.mu(t, s), indicator<Scalar>(structural)};
      break;
    }
    case AxiomId::DISTINCT_Q:
      sides = distinct_q_sides<Scalar>(revealed_constraints(c), item("x"), item("y"));
      break;
    case AxiomId::PIIS:
      sides = piis_sides(c, w);
      break;
    case AxiomId::PARTITION: {
      const auto nests = revealed_nests(c);
      if (w.clause == 1) {
        const Mask a = w.at("N"), b = w.at("N'");
        const bool both = std::find(nests.begin(), nests.end(), a) != nests.end() &&
                          std::find(nests.begin(), nests.end(), b) != nests.end() && a != b;
        sides = {Scalar(both ? (a & b).size() : 0), Scalar(0)};
      } else {
        Mask covered;
        for (Mask nest : nests) covered = covered | nest;
        sides = {Scalar((scc.universe().full() - covered).size()), Scalar(0)};
      }
      break;
    }
    case AxiomId::PAF: {
      const Mask s = w.at("S"), t = w.at("T");
      const int x = item("x");
      sides = {c.mu(t, s), c.mu(t, s.without(x))};
      const bool guarded = c.zero(c.mu(Mask::item(x), s)) && c.pos(sides.first) && c.pos(sides.second);
      if (!guarded) return {sides.first, sides.second, false};
      break;
    }
    case AxiomId::FULL_SUPPORT:
      sides = {c.mu(w.at("T"), w.at("S")), Scalar(0)};
      break;
    case AxiomId::DET_FULL_CHOICE:
      sides = {c.mu(w.at("S"), w.at("S")), Scalar(1)};
      break;
    case AxiomId::SINGLETON:
      if (w.clause == 1) {
        sides = {c.mu(w.at("T"), w.at("S")), Scalar(0)};
      } else {
        sides = singleton_ratio_sides(c, w.at("S"), w.at("S'"), item("x"), item("y"));
      }
      break;
  }
  const bool violated = c.violated(w.relation, sides.first, sides.second);
  return {std::move(sides.first), std::move(sides.second), violated};
}

template <ProbScalar Scalar>
PropertyReport check_monotonicity(const Scc<Scalar>& scc, const CheckOptions& opts) {
  require_complete(scc);
  const Checker<Scalar> c(scc, opts);
  PropertyReport out{"monotonicity", true, 0, 0, {}};
  for (Mask s : scc.menus()) {
    if (s.size() < 2) continue;
    for_each_item(s, [&](int x) {
      const Mask sx = s.without(x);
      for_each_nonempty_subset(sx, [&](Mask t) {
        ++out.checked;
        const Scalar& after = c.mu(t, s);
        const Scalar& before = c.mu(t, sx);
        if (approx_less_equal(after, before, opts.tol)) return;
        if (out.violations++ == 0) {
          out.first_violation =
              describe<Scalar>(scc.universe(), t, s, x) + ": " + format_prob(after) + " > " + format_prob(before);
        }
      });
    });
  }
  out.holds = out.violations == 0;
  return out;
}

template <ProbScalar Scalar>
PropertyReport check_zero_propagation(const Scc<Scalar>& scc, const CheckOptions& opts) {
  require_complete(scc);
  const Checker<Scalar> c(scc, opts);
  PropertyReport out{"zero_propagation", true, 0, 0, {}};
  for (Mask s : scc.menus()) {
    if (s.size() < 2) continue;
    for_each_item(s, [&](int x) {
      const Mask sx = s.without(x);
      for_each_nonempty_subset(sx, [&](Mask t) {
        ++out.checked;
        const bool before_positive = c.pos(c.mu(t, sx));
        const bool after_positive = c.pos(extended_mass(c, t, s, x));
        if (before_positive == after_positive) return;
        if (out.violations++ == 0) {
          out.first_violation = describe<Scalar>(scc.universe(), t, s, x) +
                                (before_positive ? ": positive before, zero after" : ": zero before, positive after");
        }
      });
    });
  }
  out.holds = out.violations == 0;
  return out;
}

template <ProbScalar Scalar>
PropertyReport check_positive_iis(const Scc<Scalar>& scc, const CheckOptions& opts) {
  CheckOptions one = opts;
  one.witness_cap = 1;
  const auto report = check_iis(scc, one, false);
  PropertyReport out{"positive_iis", report.holds, report.instances_checked - report.instances_vacuous,
                     report.violations, {}};
  if (!report.witnesses.empty()) {
    const auto& w = report.witnesses.front();
    const auto& u = scc.universe();
    out.first_violation = "S=" + u.format(w.at("S")) + " S'=" + u.format(w.at("S'")) + " T=" + u.format(w.at("T")) +
                          " T'=" + u.format(w.at("T'")) + ": " + format_prob(w.lhs) + " vs " + format_prob(w.rhs);
  }
  return out;
}

#define CHOICELAB_INSTANTIATE_AXIOMS(S)                                                                    \
  template struct Witness<S>;                                                                              \
  template AxiomReport<S> check_iis(const Scc<S>&, const CheckOptions&, bool);                             \
  template AxiomReport<S> check_relative_additivity(const Scc<S>&, const CheckOptions&);                   \
  template AxiomReport<S> check_additivity(const Scc<S>&, const CheckOptions&);                            \
  template AxiomReport<S> check_positivity(const Scc<S>&, int, const CheckOptions&);                       \
  template std::vector<Mask> derive_revealed_constraints(const Scc<S>&, const CheckOptions&);              \
  template std::vector<AxiomReport<S>> check_rrm_suite(const Scc<S>&, const CheckOptions&);                \
  template AxiomReport<S> check_piis(const Scc<S>&, const CheckOptions&);                                  \
  template std::vector<Mask> derive_revealed_nests(const Scc<S>&, const CheckOptions&);                    \
  template std::vector<AxiomReport<S>> check_nsc_structure(const Scc<S>&, const CheckOptions&);            \
  template AxiomReport<S> check_paf(const Scc<S>&, const CheckOptions&);                                   \
  template AxiomReport<S> check_full_support(const Scc<S>&, const CheckOptions&);                          \
  template AxiomReport<S> check_special(const Scc<S>&, AxiomId, const CheckOptions&);                      \
  template AxiomReport<S> run_axiom(const Scc<S>&, AxiomId, const CheckOptions&);                          \
  template std::vector<AxiomId> default_battery(const Scc<S>&, const CheckOptions&);                       \
  template Reevaluation<S> reevaluate_witness(const Scc<S>&, const Witness<S>&, const CheckOptions&);      \
  template PropertyReport check_monotonicity(const Scc<S>&, const CheckOptions&);                          \
  template PropertyReport check_zero_propagation(const Scc<S>&, const CheckOptions&);                      \
  template PropertyReport check_positive_iis(const Scc<S>&, const CheckOptions&);

CHOICELAB_INSTANTIATE_AXIOMS(Rational)
CHOICELAB_INSTANTIATE_AXIOMS(double)

}  // namespace choicelab
