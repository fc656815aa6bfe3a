#include "choicelab/identify.hpp"

namespace choicelab {

template <ProbScalar Scalar>
PreconditionFailed<Scalar>::PreconditionFailed(ModelTag model, AxiomReport<Scalar> report)
    : Error("precondition failed for " + std::string(to_string(model)) + ": " + std::string(to_string(report.axiom)) +
            " does not hold"),
      model_(model),
      report_(std::move(report)) {}

namespace {

template <ProbScalar Scalar>
void require_axioms(const Scc<Scalar>& scc, ModelTag model, std::initializer_list<AxiomId> ids,
                    const CheckOptions& opts) {
  for (AxiomId id : ids) {
    auto report = run_axiom(scc, id, opts);
    if (!report.holds) throw PreconditionFailed<Scalar>(model, std::move(report));
  }
}

template <ProbScalar Scalar>
RecoveryResult<Scalar> finish(const Scc<Scalar>& scc, ModelTag model, std::type_identity_t<ModelParams<Scalar>> params, std::string note,
                              const CheckOptions& opts) {
  RecoveryResult<Scalar> out;
  out.model = model;
  out.spec.params = std::move(params);
  out.spec.variant = scc.allows_empty() ? Variant::EmptyAllowed : Variant::Standard;
  out.normalization_note = std::move(note);
  out.round_trip_exact = round_trip_verify(scc, out, opts.tol);
  return out;
}

template <ProbScalar Scalar>
bool positive_support(const Scalar& p, const CheckOptions& opts) {
  ToleranceConfig t = opts.tol;
  if (opts.support_eps) t.eps_zero = *opts.support_eps;
  return is_positive(p, t);
}

template <ProbScalar Scalar>
std::map<Mask, Scalar> grand_distribution(const Scc<Scalar>& scc, bool keep_empty, const CheckOptions& opts) {
  std::map<Mask, Scalar> out;
  for (const auto& [t, p] : scc.row(scc.universe().full())) {
    if (t.empty() && !keep_empty) continue;
    if (positive_support(p, opts)) out.emplace(t, p);
  }
  return out;
}

}  // namespace

template <ProbScalar Scalar>
RecoveryResult<Scalar> identify_logit(const Scc<Scalar>& scc, const CheckOptions& opts) {
  const bool empty = scc.allows_empty();
  if (empty) {
    require_axioms(scc, ModelTag::Logit, {AxiomId::FULL_SUPPORT, AxiomId::IIS_O}, opts);
  } else {
    require_axioms(scc, ModelTag::Logit, {AxiomId::FULL_SUPPORT, AxiomId::IIS}, opts);
  }
  const Mask grand = scc.universe().full();
  LogitParams<Scalar> p;
  for_each_nonempty_subset(grand, [&](Mask t) { p.pi.emplace(t, scc.mu(t, grand)); });
  if (empty) p.pi_empty = scc.mu(Mask(), grand);
  return finish(scc, ModelTag::Logit, std::move(p), "pi(T) = mu(T,X); weights sum to 1, unique up to uniform scaling",
                opts);
}

template <ProbScalar Scalar>
RecoveryResult<Scalar> identify_rcg(const Scc<Scalar>& scc, const CheckOptions& opts) {
  const bool empty = scc.allows_empty();
  if (empty) {
    require_axioms(scc, ModelTag::Rcg, {AxiomId::ADDITIVITY}, opts);
  } else {
    require_axioms(scc, ModelTag::Rcg, {AxiomId::POS1, AxiomId::REL_ADD}, opts);
  }
  RcgParams<Scalar> p{grand_distribution(scc, empty, opts)};
  return finish(scc, ModelTag::Rcg, std::move(p), "m(C) = mu(C,X); categories with zero mass omitted", opts);
}

template <ProbScalar Scalar>
RecoveryResult<Scalar> identify_eba(const Scc<Scalar>& scc, const CheckOptions& opts) {
  if (scc.allows_empty()) throw WrongVariantError("EBA has no empty-allowed variant");
  require_axioms(scc, ModelTag::Eba, {AxiomId::POS1, AxiomId::REL_ADD}, opts);
  EbaParams<Scalar> p;
  for (auto& [t, w] : grand_distribution(scc, false, opts)) p.attributes.push_back({w, t});
  return finish(scc, ModelTag::Eba, std::move(p),
                "one attribute per collection chosen from X, weight mu(A,X); attributes are not unique", opts);
}

template <ProbScalar Scalar>
RecoveryResult<Scalar> identify_ic(const Scc<Scalar>& scc, const CheckOptions& opts) {
  const bool empty = scc.allows_empty();
  if (!empty && scc.n() < 2) throw InvalidParamsError("IC recovery needs at least two items (X minus x is empty)");
  if (empty) {
    require_axioms(scc, ModelTag::Ic, {AxiomId::FULL_SUPPORT, AxiomId::IIS_O, AxiomId::ADDITIVITY}, opts);
  } else {
    require_axioms(scc, ModelTag::Ic, {AxiomId::FULL_SUPPORT, AxiomId::IIS, AxiomId::REL_ADD}, opts);
  }
  const Mask grand = scc.universe().full();
  const Scalar& whole = scc.mu(grand, grand);
  IcParams<Scalar> p;
  for (int x = 0; x < scc.n(); ++x) {
    const Scalar& rest = scc.mu(grand.without(x), grand);
    p.gamma.push_back(whole / (whole + rest));
  }
  return finish(scc, ModelTag::Ic, std::move(p), "gamma(x) = pi(X) / (pi(X) + pi(X minus x)) with pi(T) = mu(T,X)",
                opts);
}

template <ProbScalar Scalar>
RecoveryResult<Scalar> identify_rrm(const Scc<Scalar>& scc, const CheckOptions& opts) {
  if (scc.allows_empty()) throw WrongVariantError("RRM has no empty-allowed variant");
  require_complete(scc);
  for (auto& report : check_rrm_suite(scc, opts)) {
    if (!report.holds) throw PreconditionFailed<Scalar>(ModelTag::Rrm, std::move(report));
  }
  const Mask grand = scc.universe().full();
  RrmParams<Scalar> p;
  p.constraint = derive_revealed_constraints(scc, opts);
  Scalar total(0);
  for (Mask q : p.constraint) {
    p.salience.push_back(scc.mu(q, grand));
    total += p.salience.back();
  }
  if constexpr (!is_exact_v<Scalar>) {
    for (auto& s : p.salience) s /= total;
  }
  return finish(scc, ModelTag::Rrm, std::move(p),
                "s_x = mu(Q(x),X), normalized to sum 1; salience is unique up to uniform scaling", opts);
}

template <ProbScalar Scalar>
RecoveryResult<Scalar> identify_nsc(const Scc<Scalar>& scc, const CheckOptions& opts) {
  if (scc.allows_empty()) throw WrongVariantError("NSC has no empty-allowed variant");
  require_complete(scc);
  for (auto& report : check_nsc_structure(scc, opts)) {
    if (!report.holds) throw PreconditionFailed<Scalar>(ModelTag::Nsc, std::move(report));
  }
  NscParams<Scalar> p;
  p.nests = derive_revealed_nests(scc, opts);
  if (p.nests.size() == 1) {
    for_each_nonempty_subset(p.nests.front(), [&](Mask t) { p.sigma.emplace(t, Scalar(1)); });
    return finish(scc, ModelTag::Nsc, std::move(p), "single nest: sigma is arbitrary and set to 1", opts);
  }
  // Anchors: first item of the first two nests.
  const int x1 = p.nests[0].first();
  const int x2 = p.nests[1].first();
  const Mask a1 = Mask::item(x1), a2 = Mask::item(x2);
  const Mask pair = a1 | a2;
  const Scalar bridge = scc.mu(a2, pair) / scc.mu(a1, pair);  // σ({x2}) when σ({x1}) = 1
  for (std::size_t i = 0; i < p.nests.size(); ++i) {
    for_each_nonempty_subset(p.nests[i], [&](Mask t) {
      if (i == 0) {
        const Mask menu = t.with(x2);
        p.sigma.emplace(t, Scalar(scc.mu(t, menu) / scc.mu(a2, menu) * bridge));
      } else {
        const Mask menu = t.with(x1);
        p.sigma.emplace(t, Scalar(scc.mu(t, menu) / scc.mu(a1, menu)));
      }
    });
  }
  return finish(scc, ModelTag::Nsc, std::move(p),
                "sigma({" + scc.universe().label(x1) + "}) = 1; sigma is unique up to uniform scaling", opts);
}

template <ProbScalar Scalar>
RecoveryResult<Scalar> identify(const Scc<Scalar>& scc, ModelTag tag, const CheckOptions& opts) {
  switch (tag) {
    case ModelTag::Logit: return identify_logit(scc, opts);
    case ModelTag::Rcg: return identify_rcg(scc, opts);
    case ModelTag::Ic: return identify_ic(scc, opts);
    case ModelTag::Eba: return identify_eba(scc, opts);
    case ModelTag::Rrm: return identify_rrm(scc, opts);
    case ModelTag::Nsc: return identify_nsc(scc, opts);
    case ModelTag::Ar:
    case ModelTag::NestedLogit:
      break;
  }
  throw InvalidParamsError("no recovery procedure for model '" + std::string(to_string(tag)) + "'");
}

template <ProbScalar Scalar>
std::vector<RecoveryResult<Scalar>> identify_auto(const Scc<Scalar>& scc, const CheckOptions& opts) {
  std::vector<RecoveryResult<Scalar>> out;
  std::vector<ModelTag> tags{ModelTag::Logit, ModelTag::Rcg, ModelTag::Ic};
  if (!scc.allows_empty()) {
    tags.push_back(ModelTag::Rrm);
    tags.push_back(ModelTag::Nsc);
  }
  for (ModelTag tag : tags) {
    try {
      auto result = identify(scc, tag, opts);
      if (result.round_trip_exact) out.push_back(std::move(result));
    } catch (const PreconditionFailed<Scalar>&) {
    } catch (const InvalidParamsError&) {
    }
  }
  return out;
}

template <ProbScalar Scalar>
bool round_trip_verify(const Scc<Scalar>& scc, const RecoveryResult<Scalar>& result, const ToleranceConfig& tol) {
  Scc<Scalar> regenerated;
  try {
    regenerated = generate_scc(result.spec, scc.universe());
  } catch (const Error&) {
    return false;
  }
  if (regenerated.allows_empty() != scc.allows_empty()) return false;
  for (Mask menu : scc.menus()) {
    const auto& a = scc.row(menu);
    const auto& b = regenerated.row(menu);
    if constexpr (is_exact_v<Scalar>) {
      if (a != b) return false;
    } else {
      // Merge the sparse rows; absent entries are zero.
      std::size_t i = 0, j = 0;
      while (i < a.size() || j < b.size()) {
        double pa = 0.0, pb = 0.0;
        if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
          pa = a[i++].second;
        } else if (i == a.size() || b[j].first < a[i].first) {
          pb = b[j++].second;
        } else {
          pa = a[i++].second;
          pb = b[j++].second;
        }
        if (!approx_equal(pa, pb, tol)) return false;
      }
    }
  }
  return true;
}

#define CHOICELAB_INSTANTIATE_IDENTIFY(S)                                                                   \
  template class PreconditionFailed<S>;                                                                     \
  template RecoveryResult<S> identify_logit(const Scc<S>&, const CheckOptions&);                            \
  template RecoveryResult<S> identify_rcg(const Scc<S>&, const CheckOptions&);                              \
  template RecoveryResult<S> identify_eba(const Scc<S>&, const CheckOptions&);                              \
  template RecoveryResult<S> identify_ic(const Scc<S>&, const CheckOptions&);                               \
  template RecoveryResult<S> identify_rrm(const Scc<S>&, const CheckOptions&);                              \
  template RecoveryResult<S> identify_nsc(const Scc<S>&, const CheckOptions&);                              \
  template RecoveryResult<S> identify(const Scc<S>&, ModelTag, const CheckOptions&);                        \
  template std::vector<RecoveryResult<S>> identify_auto(const Scc<S>&, const CheckOptions&);                \
  template bool round_trip_verify(const Scc<S>&, const RecoveryResult<S>&, const ToleranceConfig&);

CHOICELAB_INSTANTIATE_IDENTIFY(Rational)
CHOICELAB_INSTANTIATE_IDENTIFY(double)

}  // namespace choicelab
