#include "choicelab/classify.hpp"

#include "choicelab/identify.hpp"

namespace choicelab {

std::string_view to_string(ModelClass c) {
  switch (c) {
    case ModelClass::Logit: return "logit";
    case ModelClass::Rcg: return "rcg";
    case ModelClass::Ic: return "ic";
    case ModelClass::EbaEndogenous: return "eba_endogenous";
    case ModelClass::EbaExogenous: return "eba_exogenous";
    case ModelClass::Rrm: return "rrm";
    case ModelClass::Nsc: return "nsc";
    case ModelClass::NestedLogit: return "nl";
    case ModelClass::LogitEmpty: return "logit_empty";
    case ModelClass::RcgEmpty: return "rcg_empty";
    case ModelClass::IcEmpty: return "ic_empty";
  }
  return "unknown";
}

const std::vector<ModelClass>& all_model_classes() {
  static const std::vector<ModelClass> all{
      ModelClass::Logit, ModelClass::Rcg,         ModelClass::Ic,         ModelClass::EbaEndogenous,
      ModelClass::EbaExogenous, ModelClass::Rrm,  ModelClass::Nsc,        ModelClass::NestedLogit,
      ModelClass::LogitEmpty,   ModelClass::RcgEmpty, ModelClass::IcEmpty,
  };
  return all;
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Holds: return "holds";
    case Verdict::Fails: return "fails";
    case Verdict::NotApplicable: return "not_applicable";
    case Verdict::NotDecided: return "not_decided";
  }
  return "unknown";
}

bool ClassificationReport::holds(ModelClass c) const {
  auto it = membership.find(c);
  return it != membership.end() && it->second.verdict == Verdict::Holds;
}

namespace {

template <ProbScalar Scalar>
class Battery {
 public:
  Battery(const Scc<Scalar>& scc, const CheckOptions& opts) : scc_(scc), opts_(opts) {
    opts_.witness_cap = 0;
  }

  bool holds(AxiomId id) {
    auto it = cache_.find(id);
    if (it == cache_.end()) it = cache_.emplace(id, run_axiom(scc_, id, opts_).holds).first;
    return it->second;
  }

  Membership require(std::initializer_list<AxiomId> ids) {
    Membership m;
    for (AxiomId id : ids) {
      if (!holds(id)) m.failing.push_back(id);
    }
    m.verdict = m.failing.empty() ? Verdict::Holds : Verdict::Fails;
    return m;
  }

  const std::map<AxiomId, bool>& results() const { return cache_; }

 private:
  const Scc<Scalar>& scc_;
  CheckOptions opts_;
  std::map<AxiomId, bool> cache_;
};

Membership not_applicable(std::string note) {
  Membership m;
  m.note = std::move(note);
  return m;
}

template <ProbScalar Scalar>
bool sigma_constant(const Scc<Scalar>& scc, const CheckOptions& opts) {
  const auto result = identify_nsc(scc, opts);
  const auto& p = std::get<NscParams<Scalar>>(result.spec.params);
  for (Mask nest : p.nests) {
    const Scalar& ref = p.sigma.at(nest);
    bool same = true;
    for_each_nonempty_subset(nest, [&](Mask t) { same = same && approx_equal(p.sigma.at(t), ref, opts.tol); });
    if (!same) return false;
  }
  return true;
}

}  // namespace

template <ProbScalar Scalar>
ClassificationReport classify(const Scc<Scalar>& scc, const CheckOptions& opts) {
  require_complete(scc);
  ClassificationReport out;
  out.n = scc.n();
  out.allows_empty = scc.allows_empty();
  out.mode = mode_name<Scalar>();
  if (out.n < 3) out.assumption_flags.emplace_back(kSmallUniverseFlag);

  Battery<Scalar> b(scc, opts);
  const std::string standard_only = "standard model; the SCC allows empty choices";
  const std::string empty_only = "empty-allowed model; the SCC does not allow empty choices";

  if (scc.allows_empty()) {
    for (auto c : {ModelClass::Logit, ModelClass::Rcg, ModelClass::Ic, ModelClass::EbaEndogenous,
                   ModelClass::EbaExogenous, ModelClass::Rrm, ModelClass::Nsc, ModelClass::NestedLogit}) {
      out.membership[c] = not_applicable(standard_only);
    }
    out.membership[ModelClass::LogitEmpty] = b.require({AxiomId::FULL_SUPPORT, AxiomId::IIS_O});
    out.membership[ModelClass::RcgEmpty] = b.require({AxiomId::ADDITIVITY});
    out.membership[ModelClass::IcEmpty] = b.require({AxiomId::FULL_SUPPORT, AxiomId::IIS_O, AxiomId::ADDITIVITY});
  } else {
    out.membership[ModelClass::Logit] = b.require({AxiomId::FULL_SUPPORT, AxiomId::IIS});
    out.membership[ModelClass::Rcg] = b.require({AxiomId::POS1, AxiomId::REL_ADD});
    out.membership[ModelClass::EbaEndogenous] = out.membership[ModelClass::Rcg];
    out.membership[ModelClass::EbaEndogenous].note = "endogenous attributes; same class as rcg";
    out.membership[ModelClass::Ic] = b.require({AxiomId::FULL_SUPPORT, AxiomId::IIS, AxiomId::REL_ADD});
    if (opts.attributes) {
      out.membership[ModelClass::EbaExogenous] = b.require({AxiomId::POS2, AxiomId::REL_ADD});
    } else {
      out.membership[ModelClass::EbaExogenous] = not_applicable("no attributes supplied");
    }
    out.membership[ModelClass::Rrm] =
        b.require({AxiomId::DISTINCT_Q, AxiomId::POS3, AxiomId::REL_ADD_1, AxiomId::REL_ADD_2});
    out.membership[ModelClass::Nsc] = b.require({AxiomId::PIIS, AxiomId::PARTITION, AxiomId::POS4});
    for (auto c : {ModelClass::LogitEmpty, ModelClass::RcgEmpty, ModelClass::IcEmpty}) {
      out.membership[c] = not_applicable(empty_only);
    }

    out.det_full_choice = b.holds(AxiomId::DET_FULL_CHOICE);
    out.singleton = b.holds(AxiomId::SINGLETON);
    const bool nsc = out.holds(ModelClass::Nsc);
    out.nest_invariant = nsc && b.holds(AxiomId::PAF);
    if (nsc) out.sigma_constant_within_nests = sigma_constant(scc, opts);

    Membership nl;
    if (!nsc) {
      nl = out.membership[ModelClass::Nsc];
      nl.note = "nested logit is a special case of nsc";
    } else if (out.singleton) {
      nl.verdict = Verdict::Holds;
      nl.note = "singleton: v(x) proportional to the singleton weights, any eta";
    } else if (out.det_full_choice) {
      nl.verdict = Verdict::Holds;
      nl.note = "single nest: any v and eta";
    } else {
      nl.verdict = Verdict::NotDecided;
      nl.note = "nsc holds; membership is decided only for the singleton and single-nest cases";
    }
    out.membership[ModelClass::NestedLogit] = std::move(nl);
  }
  out.axioms = b.results();
  out.relationship_violations = verify_relationships(out);
  return out;
}

std::vector<std::string> verify_relationships(const ClassificationReport& r) {
  std::vector<std::string> out;
  auto check = [&](bool ok, std::string name) {
    if (!ok) out.push_back(std::move(name));
  };
  if (r.allows_empty) {
    check(r.holds(ModelClass::IcEmpty) == (r.holds(ModelClass::LogitEmpty) && r.holds(ModelClass::RcgEmpty)),
          "IC° = Logit° ∩ RCG°");
    return out;
  }
  const bool logit = r.holds(ModelClass::Logit), rcg = r.holds(ModelClass::Rcg), ic = r.holds(ModelClass::Ic);
  const bool rrm = r.holds(ModelClass::Rrm), nsc = r.holds(ModelClass::Nsc);
  const bool paf = r.axioms.count(AxiomId::PAF) ? r.axioms.at(AxiomId::PAF) : false;
  check(ic == (logit && rcg), "IC = Logit ∩ RCG");
  check((rrm && rcg) == r.singleton, "RRM ∩ RCG = SINGLETON");
  check((rrm && nsc) == r.singleton, "RRM ∩ NSC = SINGLETON");
  check((nsc && rcg) == r.nest_invariant, "NSC ∩ RCG = NEST_INVARIANT");
  check((nsc && paf) == r.nest_invariant, "NSC ∩ PAF = NEST_INVARIANT");
  if (r.sigma_constant_within_nests) {
    check(*r.sigma_constant_within_nests == r.nest_invariant, "constant sigma within nests = NEST_INVARIANT");
  }
  check(!(rrm || nsc) || (!logit && !ic), "RRM ∪ NSC disjoint from Logit and IC");
  return out;
}

template ClassificationReport classify(const Scc<Rational>&, const CheckOptions&);
template ClassificationReport classify(const Scc<double>&, const CheckOptions&);

}  // namespace choicelab
