#include "choicelab/models.hpp"

#include <cmath>

namespace choicelab {

std::string_view to_string(ModelTag tag) {
  switch (tag) {
    case ModelTag::Logit: return "logit";
    case ModelTag::Rcg: return "rcg";
    case ModelTag::Ic: return "ic";
    case ModelTag::Eba: return "eba";
    case ModelTag::Ar: return "ar";
    case ModelTag::Rrm: return "rrm";
    case ModelTag::Nsc: return "nsc";
    case ModelTag::NestedLogit: return "nl";
  }
  return "unknown";
}

ModelTag parse_model_tag(std::string_view text) {
  for (auto tag : {ModelTag::Logit, ModelTag::Rcg, ModelTag::Ic, ModelTag::Eba, ModelTag::Ar, ModelTag::Rrm,
                   ModelTag::Nsc, ModelTag::NestedLogit}) {
    if (to_string(tag) == text) return tag;
  }
  if (text == "nested_logit") return ModelTag::NestedLogit;
  throw ParseError("unknown model tag '" + std::string(text) + "'");
}

bool supports_empty_variant(ModelTag tag) {
  return tag == ModelTag::Logit || tag == ModelTag::Rcg || tag == ModelTag::Ic;
}

namespace {

template <ProbScalar Scalar>
bool positive(const Scalar& v) {
  if constexpr (is_exact_v<Scalar>) {
    return sgn(v) > 0;
  } else {
    return v > 0.0 && std::isfinite(v);
  }
}

template <ProbScalar Scalar>
bool nonnegative(const Scalar& v) {
  if constexpr (is_exact_v<Scalar>) {
    return sgn(v) >= 0;
  } else {
    return v >= 0.0 && std::isfinite(v);
  }
}

template <ProbScalar Scalar>
bool sums_to_one(const Scalar& total) {
  if constexpr (is_exact_v<Scalar>) {
    return total == 1;
  } else {
    return std::abs(total - 1.0) <= ToleranceConfig{}.eps_sum;
  }
}

void check_shape(Mask set, Mask menu, Variant variant) {
  if (menu.empty()) throw ShapeError("menu must be non-empty");
  if (!set.subset_of(menu)) throw ShapeError("collection is not a subset of the menu");
  if (set.empty() && variant == Variant::Standard) throw ShapeError("empty collection in a standard model");
}

void check_coverage(Mask covered, const Universe& u, std::string_view what) {
  if (covered != u.full()) {
    throw InvalidParamsError(std::string(what) + " do not cover item(s) " + u.format(u.full() - covered));
  }
}

void check_partition(const std::vector<Mask>& nests, const Universe& u) {
  if (nests.empty()) throw InvalidParamsError("at least one nest is required");
  Mask covered;
  for (Mask n : nests) {
    if (n.empty()) throw InvalidParamsError("nests must be non-empty");
    if (!u.contains(n)) throw InvalidParamsError("nest outside the universe");
    if (n.intersects(covered)) throw InvalidParamsError("nests overlap at " + u.format(n & covered));
    covered = covered | n;
  }
  check_coverage(covered, u, "nests");
}

template <ProbScalar Scalar>
bool is_positive_integer(const Scalar& v) {
  if constexpr (is_exact_v<Scalar>) {
    return v.get_den() == 1 && sgn(v) > 0 && v.get_num().fits_ulong_p();
  } else {
    return v > 0 && std::floor(v) == v;
  }
}

template <ProbScalar Scalar>
Scalar power(const Scalar& base, const Scalar& exponent) {
  if constexpr (is_exact_v<Scalar>) {
    if (!is_positive_integer(exponent)) {
      throw ModeError("nested logit exponent " + format_prob(exponent) + " is not an integer; use float mode");
    }
    return pow_integer(base, exponent.get_num().get_ui());
  } else {
    return std::pow(base, exponent);
  }
}

template <ProbScalar Scalar>
const Scalar& weight_at(const std::map<Mask, Scalar>& table, Mask key, std::string_view what) {
  auto it = table.find(key);
  if (it == table.end()) throw MissingWeightError(std::string(what) + " missing for collection");
  return it->second;
}

template <ProbScalar Scalar>
void validate_impl(const LogitParams<Scalar>& p, Variant variant, const Universe& u) {
  for (const auto& [t, w] : p.pi) {
    if (t.empty() || !u.contains(t)) throw InvalidParamsError("logit weights must be keyed by non-empty subsets of X");
    if (!positive(w)) throw InvalidParamsError("logit weights must be positive");
  }
  for_each_nonempty_subset(u.full(), [&](Mask t) {
    if (!p.pi.contains(t)) throw MissingWeightError("logit weight missing for " + u.format(t));
  });
  if (variant == Variant::EmptyAllowed) {
    if (!p.pi_empty) throw MissingWeightError("the empty-allowed logit requires an explicit weight for the empty set");
    if (!positive(*p.pi_empty)) throw InvalidParamsError("logit weight of the empty set must be positive");
  }
}

template <ProbScalar Scalar>
void validate_impl(const RcgParams<Scalar>& p, Variant variant, const Universe& u) {
  Scalar total(0);
  Mask covered;
  for (const auto& [c, w] : p.m) {
    if (!u.contains(c)) throw InvalidParamsError("category outside the universe");
    if (c.empty() && variant == Variant::Standard) throw InvalidParamsError("categories must be non-empty");
    if (!nonnegative(w)) throw InvalidParamsError("category probabilities must be non-negative");
    if (positive(w)) covered = covered | c;
    total += w;
  }
  if (!sums_to_one(total)) throw InvalidParamsError("category probabilities must sum to 1");
  if (variant == Variant::Standard) check_coverage(covered, u, "categories");
}

template <ProbScalar Scalar>
void validate_impl(const IcParams<Scalar>& p, Variant, const Universe& u) {
  if (static_cast<int>(p.gamma.size()) != u.size()) throw InvalidParamsError("one gamma per item is required");
  for (const auto& g : p.gamma) {
    if (!positive(g) || !(g < 1)) throw InvalidParamsError("gamma must lie in (0,1)");
  }
}

template <ProbScalar Scalar>
void validate_impl(const EbaParams<Scalar>& p, Variant, const Universe& u) {
  if (p.attributes.empty()) throw InvalidParamsError("at least one attribute is required");
  Scalar total(0);
  Mask covered;
  for (const auto& a : p.attributes) {
    if (a.carrier.empty() || !u.contains(a.carrier)) throw InvalidParamsError("attribute carriers must be non-empty subsets of X");
    if (!positive(a.weight)) throw InvalidParamsError("attribute weights must be positive");
    covered = covered | a.carrier;
    total += a.weight;
  }
  if (!sums_to_one(total)) throw InvalidParamsError("attribute weights must sum to 1");
  check_coverage(covered, u, "attributes");
}

template <ProbScalar Scalar>
void validate_impl(const ArParams<Scalar>& p, Variant, const Universe& u) {
  if (p.attributes.empty()) throw InvalidParamsError("at least one attribute is required");
  Mask covered;
  for (const auto& a : p.attributes) {
    if (a.carrier.empty() || !u.contains(a.carrier)) throw InvalidParamsError("attribute carriers must be non-empty subsets of X");
    if (!positive(a.theta)) throw InvalidParamsError("attribute weights must be positive");
    if (static_cast<int>(a.eta.size()) != u.size()) throw InvalidParamsError("eta must have one entry per item");
    for (int i = 0; i < u.size(); ++i) {
      if ((a.eta[static_cast<std::size_t>(i)] > 0) != a.carrier.contains(i)) {
        throw InvalidParamsError("eta must be positive exactly on the attribute carrier");
      }
    }
    covered = covered | a.carrier;
  }
  check_coverage(covered, u, "attributes");
}

template <ProbScalar Scalar>
void validate_impl(const RrmParams<Scalar>& p, Variant, const Universe& u) {
  const auto n = static_cast<std::size_t>(u.size());
  if (p.salience.size() != n || p.constraint.size() != n) {
    throw InvalidParamsError("one salience and one constraint set per item are required");
  }
  for (std::size_t x = 0; x < n; ++x) {
    if (!positive(p.salience[x])) throw InvalidParamsError("salience must be positive");
    if (!u.contains(p.constraint[x])) throw InvalidParamsError("constraint set outside the universe");
    if (!p.constraint[x].contains(static_cast<int>(x))) {
      throw InvalidParamsError("item " + u.label(static_cast<int>(x)) + " is not in its own constraint set");
    }
    for (std::size_t y = 0; y < x; ++y) {
      if (p.constraint[x] == p.constraint[y]) {
        throw InvalidParamsError("constraint sets of " + u.label(static_cast<int>(y)) + " and " +
                                 u.label(static_cast<int>(x)) + " coincide");
      }
    }
  }
}

template <ProbScalar Scalar>
void validate_impl(const NscParams<Scalar>& p, Variant, const Universe& u) {
  check_partition(p.nests, u);
  for (const auto& [t, w] : p.sigma) {
    if (t.empty() || !u.contains(t)) throw InvalidParamsError("sigma must be keyed by non-empty subsets of X");
    if (!positive(w)) throw InvalidParamsError("sigma must be positive on non-empty collections");
  }
  for (Mask nest : p.nests) {
    for_each_nonempty_subset(nest, [&](Mask t) {
      if (!p.sigma.contains(t)) throw MissingWeightError("sigma missing for " + u.format(t));
    });
  }
}

template <ProbScalar Scalar>
void validate_impl(const NestedLogitParams<Scalar>& p, Variant, const Universe& u) {
  check_partition(p.nests, u);
  if (static_cast<int>(p.v.size()) != u.size()) throw InvalidParamsError("one utility per item is required");
  if (p.eta.size() != p.nests.size()) throw InvalidParamsError("one exponent per nest is required");
  for (const auto& v : p.v) {
    if (!positive(v)) throw InvalidParamsError("utilities must be positive");
  }
  for (const auto& e : p.eta) {
    if (!positive(e)) throw InvalidParamsError("nest exponents must be positive");
  }
}

// Accumulated mass per collection, normalized into a sorted row.
template <ProbScalar Scalar>
typename Scc<Scalar>::Row normalize(const std::map<Mask, Scalar>& mass, bool keep_empty, bool divide) {
  Scalar total(0);
  for (const auto& [t, w] : mass) {
    if (keep_empty || !t.empty()) total += w;
  }
  if (divide && !positive(total)) throw InvalidParamsError("no mass on the menu");
  typename Scc<Scalar>::Row row;
  for (const auto& [t, w] : mass) {
    if (t.empty() && !keep_empty) continue;
    if (!positive(w)) continue;
    if (divide) {
      row.emplace_back(t, Scalar(w / total));
    } else {
      row.emplace_back(t, w);
    }
  }
  return row;
}

template <ProbScalar Scalar>
typename Scc<Scalar>::Row menu_row(const LogitParams<Scalar>& p, Mask menu, Variant variant) {
  std::map<Mask, Scalar> mass;
  for_each_subset(menu, [&](Mask t) {
    if (t.empty()) {
      if (variant == Variant::EmptyAllowed) mass.emplace(t, *p.pi_empty);
      return;
    }
    mass.emplace(t, weight_at(p.pi, t, "logit weight"));
  });
  return normalize(mass, variant == Variant::EmptyAllowed, true);
}

template <ProbScalar Scalar>
typename Scc<Scalar>::Row menu_row(const RcgParams<Scalar>& p, Mask menu, Variant variant) {
  std::map<Mask, Scalar> mass;
  for (const auto& [c, w] : p.m) mass[c & menu] += w;
  if (variant == Variant::EmptyAllowed) return normalize(mass, true, false);
  return normalize(mass, false, true);
}

template <ProbScalar Scalar>
typename Scc<Scalar>::Row menu_row(const IcParams<Scalar>& p, Mask menu, Variant variant) {
  std::map<Mask, Scalar> mass;
  for_each_subset(menu, [&](Mask t) {
    Scalar w(1);
    for_each_item(menu, [&](int i) {
      const Scalar& g = p.gamma[static_cast<std::size_t>(i)];
      w *= t.contains(i) ? g : Scalar(1 - g);
    });
    mass.emplace(t, std::move(w));
  });
  if (variant == Variant::EmptyAllowed) return normalize(mass, true, false);
  return normalize(mass, false, true);
}

template <ProbScalar Scalar>
typename Scc<Scalar>::Row menu_row(const EbaParams<Scalar>& p, Mask menu, Variant) {
  std::map<Mask, Scalar> mass;
  for (const auto& a : p.attributes) mass[a.carrier & menu] += a.weight;
  return normalize(mass, false, true);
}

template <ProbScalar Scalar>
typename Scc<Scalar>::Row menu_row(const ArParams<Scalar>& p, Mask menu, Variant) {
  std::map<Mask, Scalar> mass;
  for (const auto& a : p.attributes) mass[a.carrier & menu] += a.theta;
  return normalize(mass, false, true);
}

template <ProbScalar Scalar>
typename Scc<Scalar>::Row menu_row(const RrmParams<Scalar>& p, Mask menu, Variant) {
  std::map<Mask, Scalar> mass;
  for_each_item(menu, [&](int x) {
    mass[p.constraint[static_cast<std::size_t>(x)] & menu] += p.salience[static_cast<std::size_t>(x)];
  });
  return normalize(mass, false, true);
}

template <ProbScalar Scalar>
typename Scc<Scalar>::Row menu_row(const NscParams<Scalar>& p, Mask menu, Variant) {
  std::map<Mask, Scalar> mass;
  for (Mask nest : p.nests) {
    const Mask t = nest & menu;
    if (!t.empty()) mass.emplace(t, weight_at(p.sigma, t, "sigma"));
  }
  return normalize(mass, false, true);
}

template <ProbScalar Scalar>
Scalar nl_sigma(const NestedLogitParams<Scalar>& p, std::size_t nest, Mask t) {
  Scalar total(0);
  for_each_item(t, [&](int i) { total += p.v[static_cast<std::size_t>(i)]; });
  return power(total, p.eta[nest]);
}

template <ProbScalar Scalar>
typename Scc<Scalar>::Row menu_row(const NestedLogitParams<Scalar>& p, Mask menu, Variant) {
  std::map<Mask, Scalar> mass;
  for (std::size_t i = 0; i < p.nests.size(); ++i) {
    const Mask t = p.nests[i] & menu;
    if (!t.empty()) mass.emplace(t, nl_sigma(p, i, t));
  }
  return normalize(mass, false, true);
}

// mpq arithmetic assumes reduced operands; callers may hand in e.g. 2/10.
void canonicalize_value(Rational& v) { v.canonicalize(); }
void canonicalize_value(double&) {}

template <ProbScalar Scalar>
ModelSpec<Scalar> canonicalized(ModelSpec<Scalar> spec) {
  auto fix_map = [](std::map<Mask, Scalar>& m) {
    for (auto& entry : m) canonicalize_value(entry.second);
  };
  auto fix_vec = [](std::vector<Scalar>& v) {
    for (auto& x : v) canonicalize_value(x);
  };
  std::visit(
      [&](auto& p) {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, LogitParams<Scalar>>) {
          fix_map(p.pi);
          if (p.pi_empty) canonicalize_value(*p.pi_empty);
        } else if constexpr (std::is_same_v<P, RcgParams<Scalar>>) {
          fix_map(p.m);
        } else if constexpr (std::is_same_v<P, IcParams<Scalar>>) {
          fix_vec(p.gamma);
        } else if constexpr (std::is_same_v<P, EbaParams<Scalar>>) {
          for (auto& a : p.attributes) canonicalize_value(a.weight);
        } else if constexpr (std::is_same_v<P, ArParams<Scalar>>) {
          for (auto& a : p.attributes) canonicalize_value(a.theta);
        } else if constexpr (std::is_same_v<P, RrmParams<Scalar>>) {
          fix_vec(p.salience);
        } else if constexpr (std::is_same_v<P, NscParams<Scalar>>) {
          fix_map(p.sigma);
        } else {
          fix_vec(p.v);
          fix_vec(p.eta);
        }
      },
      spec.params);
  return spec;
}

template <ProbScalar Scalar>
ModelSpec<double> convert(const ModelSpec<Scalar>& spec) {
  auto d = [](const Scalar& v) -> double {
    if constexpr (is_exact_v<Scalar>) {
      return to_double(v);
    } else {
      return v;
    }
  };
  auto dmap = [&](const std::map<Mask, Scalar>& m) {
    std::map<Mask, double> out;
    for (const auto& [k, v] : m) out.emplace(k, d(v));
    return out;
  };
  auto dvec = [&](const std::vector<Scalar>& v) {
    std::vector<double> out;
    for (const auto& x : v) out.push_back(d(x));
    return out;
  };
  ModelSpec<double> out;
  out.variant = spec.variant;
  std::visit(
      [&](const auto& p) {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, LogitParams<Scalar>>) {
          LogitParams<double> q{dmap(p.pi), std::nullopt};
          if (p.pi_empty) q.pi_empty = d(*p.pi_empty);
          out.params = q;
        } else if constexpr (std::is_same_v<P, RcgParams<Scalar>>) {
          out.params = RcgParams<double>{dmap(p.m)};
        } else if constexpr (std::is_same_v<P, IcParams<Scalar>>) {
          out.params = IcParams<double>{dvec(p.gamma)};
        } else if constexpr (std::is_same_v<P, EbaParams<Scalar>>) {
          EbaParams<double> q;
          for (const auto& a : p.attributes) q.attributes.push_back({d(a.weight), a.carrier});
          out.params = q;
        } else if constexpr (std::is_same_v<P, ArParams<Scalar>>) {
          ArParams<double> q;
          for (const auto& a : p.attributes) q.attributes.push_back({d(a.theta), a.carrier, a.eta});
          out.params = q;
        } else if constexpr (std::is_same_v<P, RrmParams<Scalar>>) {
          out.params = RrmParams<double>{dvec(p.salience), p.constraint};
        } else if constexpr (std::is_same_v<P, NscParams<Scalar>>) {
          out.params = NscParams<double>{p.nests, dmap(p.sigma)};
        } else {
          out.params = NestedLogitParams<double>{p.nests, dvec(p.v), dvec(p.eta)};
        }
      },
      spec.params);
  return out;
}

}  // namespace

template <ProbScalar Scalar>
void validate_params(const ModelSpec<Scalar>& spec, const Universe& universe) {
  if (spec.variant == Variant::EmptyAllowed && !supports_empty_variant(spec.tag())) {
    throw WrongVariantError("model '" + std::string(to_string(spec.tag())) + "' has no empty-allowed variant");
  }
  std::visit([&](const auto& p) { validate_impl(p, spec.variant, universe); }, spec.params);
}

template <ProbScalar Scalar>
Scalar eval_logit(const LogitParams<Scalar>& params, Mask set, Mask menu, Variant variant) {
  check_shape(set, menu, variant);
  if (variant == Variant::EmptyAllowed && !params.pi_empty) {
    throw MissingWeightError("the empty-allowed logit requires an explicit weight for the empty set");
  }
  Scalar denominator(0);
  for_each_subset(menu, [&](Mask t) {
    if (t.empty()) {
      if (variant == Variant::EmptyAllowed) denominator += *params.pi_empty;
      return;
    }
    denominator += weight_at(params.pi, t, "logit weight");
  });
  const Scalar& numerator = set.empty() ? *params.pi_empty : weight_at(params.pi, set, "logit weight");
  return numerator / denominator;
}

template <ProbScalar Scalar>
Scalar eval_rcg(const RcgParams<Scalar>& params, Mask set, Mask menu, Variant variant) {
  check_shape(set, menu, variant);
  Scalar numerator(0);
  Scalar live(0);
  for (const auto& [c, w] : params.m) {
    if ((c & menu) == set) numerator += w;
    if (c.intersects(menu)) live += w;
  }
  if (variant == Variant::EmptyAllowed) return numerator;
  if (!positive(live)) throw InvalidParamsError("no category intersects the menu");
  return numerator / live;
}

template <ProbScalar Scalar>
Scalar eval_ic(const IcParams<Scalar>& params, Mask set, Mask menu, Variant variant) {
  check_shape(set, menu, variant);
  Scalar numerator(1);
  Scalar none_chosen(1);
  for_each_item(menu, [&](int i) {
    const Scalar& g = params.gamma.at(static_cast<std::size_t>(i));
    numerator *= set.contains(i) ? g : Scalar(1 - g);
    none_chosen *= Scalar(1 - g);
  });
  if (variant == Variant::EmptyAllowed) return numerator;
  return numerator / Scalar(1 - none_chosen);
}

template <ProbScalar Scalar>
Scalar eval_eba(const EbaParams<Scalar>& params, Mask set, Mask menu) {
  check_shape(set, menu, Variant::Standard);
  Scalar numerator(0);
  Scalar live(0);
  for (const auto& a : params.attributes) {
    if ((a.carrier & menu) == set) numerator += a.weight;
    if (a.carrier.intersects(menu)) live += a.weight;
  }
  if (!positive(live)) throw InvalidParamsError("no attribute intersects the menu");
  return numerator / live;
}

template <ProbScalar Scalar>
Scalar eval_ar_first_stage(const ArParams<Scalar>& params, Mask set, Mask menu) {
  check_shape(set, menu, Variant::Standard);
  Scalar numerator(0);
  Scalar live(0);
  for (const auto& a : params.attributes) {
    if (!a.carrier.intersects(menu)) continue;  // i ∉ B(S)
    live += a.theta;
    if ((a.carrier & menu) == set) numerator += a.theta;  // i ∈ I_T
  }
  if (!positive(live)) throw InvalidParamsError("no attribute intersects the menu");
  return numerator / live;
}

template <ProbScalar Scalar>
ArItemResult<Scalar> eval_ar_item(const ArParams<Scalar>& params, int item, Mask menu) {
  if (!menu.contains(item)) throw ShapeError("item is not in the menu");
  Scalar live(0);
  for (const auto& a : params.attributes) {
    if (a.carrier.intersects(menu)) live += a.theta;
  }
  if (!positive(live)) throw InvalidParamsError("no attribute intersects the menu");

  auto eta_sum = [](const ArAttribute<Scalar>& a, Mask over) {
    unsigned long total = 0;
    for_each_item(over & a.carrier, [&](int y) { total += a.eta[static_cast<std::size_t>(y)]; });
    return total;
  };

  ArItemResult<Scalar> out{Scalar(0), {}};
  // Direct formula: attribute draw, then a logit over the attribute's feasible options.
  for (const auto& a : params.attributes) {
    if (!a.carrier.intersects(menu)) continue;
    const Scalar pick_attr = a.theta / live;
    const Scalar pick_item = Scalar(a.eta[static_cast<std::size_t>(item)]) / Scalar(eta_sum(a, menu));
    out.p += pick_attr * pick_item;
  }

  // Two-stage split by induced collection T = B_i ∩ S.
  std::map<Mask, Scalar> induced_weight;
  for (const auto& a : params.attributes) {
    if (a.carrier.intersects(menu)) induced_weight[a.carrier & menu] += a.theta;
  }
  for (const auto& [t, weight_of_t] : induced_weight) {
    Scalar rho(0);
    for (const auto& a : params.attributes) {
      if ((a.carrier & menu) != t) continue;
      const Scalar pr_attr = a.theta / weight_of_t;  // Pr(i|T)
      const Scalar pr_item = Scalar(a.eta[static_cast<std::size_t>(item)]) / Scalar(eta_sum(a, t));  // Pr(x|T,i)
      rho += pr_attr * pr_item;
    }
    out.decomposition.emplace(t, std::make_pair(Scalar(weight_of_t / live), std::move(rho)));
  }
  return out;
}

template <ProbScalar Scalar>
Scalar eval_rrm(const RrmParams<Scalar>& params, Mask set, Mask menu) {
  check_shape(set, menu, Variant::Standard);
  Scalar numerator(0);
  Scalar total(0);
  for_each_item(menu, [&](int x) {
    const auto ix = static_cast<std::size_t>(x);
    total += params.salience.at(ix);
    if ((params.constraint.at(ix) & menu) == set) numerator += params.salience[ix];
  });
  return numerator / total;
}

template <ProbScalar Scalar>
Scalar eval_nsc(const NscParams<Scalar>& params, Mask set, Mask menu) {
  check_shape(set, menu, Variant::Standard);
  Scalar numerator(0);
  Scalar total(0);
  for (Mask nest : params.nests) {
    const Mask t = nest & menu;
    if (t.empty()) continue;  // σ(∅) = 0
    const Scalar& w = weight_at(params.sigma, t, "sigma");
    total += w;
    if (t == set) numerator += w;
  }
  return numerator / total;
}

template <ProbScalar Scalar>
Scalar eval_nested_logit(const NestedLogitParams<Scalar>& params, Mask set, Mask menu) {
  check_shape(set, menu, Variant::Standard);
  Scalar numerator(0);
  Scalar total(0);
  for (std::size_t i = 0; i < params.nests.size(); ++i) {
    const Mask t = params.nests[i] & menu;
    if (t.empty()) continue;
    const Scalar w = nl_sigma(params, i, t);
    total += w;
    if (t == set) numerator += w;
  }
  return numerator / total;
}

template <ProbScalar Scalar>
Scalar evaluate(const ModelSpec<Scalar>& spec, Mask set, Mask menu) {
  return std::visit(
      [&](const auto& p) -> Scalar {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, LogitParams<Scalar>>) {
          return eval_logit(p, set, menu, spec.variant);
        } else if constexpr (std::is_same_v<P, RcgParams<Scalar>>) {
          return eval_rcg(p, set, menu, spec.variant);
        } else if constexpr (std::is_same_v<P, IcParams<Scalar>>) {
          return eval_ic(p, set, menu, spec.variant);
        } else if constexpr (std::is_same_v<P, EbaParams<Scalar>>) {
          return eval_eba(p, set, menu);
        } else if constexpr (std::is_same_v<P, ArParams<Scalar>>) {
          return eval_ar_first_stage(p, set, menu);
        } else if constexpr (std::is_same_v<P, RrmParams<Scalar>>) {
          return eval_rrm(p, set, menu);
        } else if constexpr (std::is_same_v<P, NscParams<Scalar>>) {
          return eval_nsc(p, set, menu);
        } else {
          return eval_nested_logit(p, set, menu);
        }
      },
      spec.params);
}

template <ProbScalar Scalar>
NscParams<Scalar> induced_nsc(const NestedLogitParams<Scalar>& params) {
  NscParams<Scalar> out;
  out.nests = params.nests;
  for (std::size_t i = 0; i < params.nests.size(); ++i) {
    for_each_nonempty_subset(params.nests[i], [&](Mask t) { out.sigma.emplace(t, nl_sigma(params, i, t)); });
  }
  return out;
}

bool nested_logit_requires_float(const NestedLogitParams<Rational>& params) {
  for (const auto& e : params.eta) {
    if (!is_positive_integer(e)) return true;
  }
  return false;
}

template <ProbScalar Scalar>
ModelSpec<double> to_float(const ModelSpec<Scalar>& spec) {
  return convert(spec);
}

template <ProbScalar Scalar>
Scc<Scalar> generate_scc(const ModelSpec<Scalar>& input, const Universe& universe) {
  const ModelSpec<Scalar> spec = canonicalized(input);
  validate_params(spec, universe);
  Scc<Scalar> out(universe, spec.variant == Variant::EmptyAllowed);
  for_each_nonempty_subset(universe.full(), [&](Mask menu) {
    out.add_menu(menu);
    auto row = std::visit([&](const auto& p) { return menu_row(p, menu, spec.variant); }, spec.params);
    for (auto& [t, p] : row) out.set(t, menu, std::move(p));
  });
  return out;
}

#define CHOICELAB_INSTANTIATE_MODELS(S)                                                  \
  template void validate_params(const ModelSpec<S>&, const Universe&);                   \
  template S eval_logit(const LogitParams<S>&, Mask, Mask, Variant);                    \
  template S eval_rcg(const RcgParams<S>&, Mask, Mask, Variant);                        \
  template S eval_ic(const IcParams<S>&, Mask, Mask, Variant);                          \
  template S eval_eba(const EbaParams<S>&, Mask, Mask);                                 \
  template S eval_ar_first_stage(const ArParams<S>&, Mask, Mask);                       \
  template ArItemResult<S> eval_ar_item(const ArParams<S>&, int, Mask);                 \
  template S eval_rrm(const RrmParams<S>&, Mask, Mask);                                 \
  template S eval_nsc(const NscParams<S>&, Mask, Mask);                                 \
  template S eval_nested_logit(const NestedLogitParams<S>&, Mask, Mask);                \
  template S evaluate(const ModelSpec<S>&, Mask, Mask);                                 \
  template NscParams<S> induced_nsc(const NestedLogitParams<S>&);                       \
  template ModelSpec<double> to_float(const ModelSpec<S>&);                             \
  template Scc<S> generate_scc(const ModelSpec<S>&, const Universe&);

CHOICELAB_INSTANTIATE_MODELS(Rational)
CHOICELAB_INSTANTIATE_MODELS(double)

}  // namespace choicelab
