#include "helpers.hpp"

#include "choicelab/classify.hpp"

using namespace choicelab;
using testing::letters;
using testing::m;
using testing::q;
using testing::spec;

namespace {

Verdict verdict(const ClassificationReport& r, ModelClass c) { return r.membership.at(c).verdict; }

ClassificationReport blank() {
  ClassificationReport r;
  r.n = 3;
  for (ModelClass c : all_model_classes()) r.membership[c].verdict = Verdict::Fails;
  for (auto c : {ModelClass::LogitEmpty, ModelClass::RcgEmpty, ModelClass::IcEmpty}) {
    r.membership[c].verdict = Verdict::NotApplicable;
  }
  return r;
}

}  // namespace

TEST_CASE("classify: uniform SCC") {
  const auto u = letters(3);
  const auto r = classify(generate_scc(spec(IcParams<Rational>{{q("1/2"), q("1/2"), q("1/2")}}), u));
  CHECK(r.holds(ModelClass::Logit));
  CHECK(r.holds(ModelClass::Rcg));
  CHECK(r.holds(ModelClass::EbaEndogenous));
  CHECK(r.holds(ModelClass::Ic));
  CHECK_FALSE(r.holds(ModelClass::Rrm));
  CHECK_FALSE(r.holds(ModelClass::Nsc));
  CHECK(verdict(r, ModelClass::NestedLogit) == Verdict::Fails);
  CHECK(verdict(r, ModelClass::EbaExogenous) == Verdict::NotApplicable);
  CHECK(verdict(r, ModelClass::LogitEmpty) == Verdict::NotApplicable);
  CHECK(r.relationship_violations.empty());
  CHECK(r.assumption_flags.empty());
}

TEST_CASE("classify: singleton data with weights 1,2") {
  const auto u = letters(2);
  const auto r = classify(generate_scc(spec(RrmParams<Rational>{{q("1"), q("2")}, {m(u, "a"), m(u, "b")}}), u));
  CHECK(r.singleton);
  CHECK(r.holds(ModelClass::Rrm));
  CHECK(r.holds(ModelClass::Nsc));
  CHECK(r.holds(ModelClass::Rcg));
  CHECK(r.holds(ModelClass::NestedLogit));
  CHECK_FALSE(r.holds(ModelClass::Logit));
  CHECK_FALSE(r.holds(ModelClass::Ic));
  CHECK(r.relationship_violations.empty());
  REQUIRE(r.assumption_flags.size() == 1);
  CHECK(r.assumption_flags[0] == kSmallUniverseFlag);
}

TEST_CASE("classify: deterministic full choice") {
  const auto u = letters(3);
  NscParams<Rational> p{{u.full()}, {}};
  for_each_nonempty_subset(u.full(), [&](Mask t) { p.sigma[t] = q("1"); });
  const auto r = classify(generate_scc(spec(p), u));
  CHECK(r.det_full_choice);
  CHECK(r.holds(ModelClass::Rcg));
  CHECK(r.holds(ModelClass::Nsc));
  CHECK(r.nest_invariant);
  CHECK(r.sigma_constant_within_nests == true);
  CHECK(r.holds(ModelClass::NestedLogit));
  CHECK_FALSE(r.holds(ModelClass::Rrm));
  CHECK(r.membership.at(ModelClass::Rrm).failing.front() == AxiomId::DISTINCT_Q);
  CHECK_FALSE(r.holds(ModelClass::Logit));
  CHECK_FALSE(r.holds(ModelClass::Ic));
  CHECK(r.relationship_violations.empty());
}

TEST_CASE("classify: NSC example is NSC, not logit, and not nest-invariant") {
  const auto u = letters(3);
  NscParams<Rational> p{{m(u, "a,b"), m(u, "c")},
                        {{m(u, "a"), q("1")}, {m(u, "b"), q("2")}, {m(u, "a,b"), q("4")}, {m(u, "c"), q("3")}}};
  const auto r = classify(generate_scc(spec(p), u));
  CHECK(r.holds(ModelClass::Nsc));
  CHECK_FALSE(r.holds(ModelClass::Logit));
  CHECK_FALSE(r.holds(ModelClass::Rcg));
  CHECK_FALSE(r.nest_invariant);
  CHECK(r.sigma_constant_within_nests == false);
  CHECK(verdict(r, ModelClass::NestedLogit) == Verdict::NotDecided);
  CHECK(r.relationship_violations.empty());
}

TEST_CASE("classify: empty-allowed data only gets the empty-allowed classes") {
  const auto u = letters(3);
  const auto r = classify(generate_scc(spec(IcParams<Rational>{{q("1/3"), q("1/2"), q("3/4")}}, Variant::EmptyAllowed), u));
  CHECK(r.holds(ModelClass::IcEmpty));
  CHECK(r.holds(ModelClass::LogitEmpty));
  CHECK(r.holds(ModelClass::RcgEmpty));
  CHECK(verdict(r, ModelClass::Logit) == Verdict::NotApplicable);
  CHECK(r.relationship_violations.empty());
}

TEST_CASE("verify_relationships: hand-built reports") {
  auto r = blank();
  r.membership[ModelClass::Logit].verdict = Verdict::Holds;
  r.membership[ModelClass::Rcg].verdict = Verdict::Holds;
  CHECK(verify_relationships(r) == std::vector<std::string>{"IC = Logit ∩ RCG"});

  auto d = blank();
  d.membership[ModelClass::Rrm].verdict = Verdict::Holds;
  d.membership[ModelClass::Logit].verdict = Verdict::Holds;
  const auto v = verify_relationships(d);
  CHECK(std::find(v.begin(), v.end(), "RRM ∪ NSC disjoint from Logit and IC") != v.end());

  auto clean = blank();
  CHECK(verify_relationships(clean).empty());

  auto s = blank();
  s.membership[ModelClass::Rrm].verdict = Verdict::Holds;
  s.membership[ModelClass::Nsc].verdict = Verdict::Holds;
  const auto sv = verify_relationships(s);
  CHECK(std::find(sv.begin(), sv.end(), "RRM ∩ NSC = SINGLETON") != sv.end());
}

TEST_CASE("property: attributes never change non-EBA verdicts") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    GenConfig cfg;
    cfg.n = 3;
    cfg.seed = seed;
    cfg.model = seed % 2 ? ModelTag::Eba : static_cast<ModelTag>(seed % 8);
    const auto bundle = sample_params(cfg);
    const auto u = letters(3);
    const auto scc = generate_scc(bundle, u);
    CheckOptions with;
    std::vector<Mask> carriers;
    if (const auto* e = std::get_if<EbaParams<Rational>>(&bundle.params)) {
      for (const auto& a : e->attributes) carriers.push_back(a.carrier);
    } else {
      carriers = {m(u, "a,b"), m(u, "c")};
    }
    with.attributes = carriers;
    const auto plain = classify(scc);
    const auto rich = classify(scc, with);
    for (ModelClass c : all_model_classes()) {
      if (c == ModelClass::EbaExogenous) continue;
      CHECK(verdict(plain, c) == verdict(rich, c));
    }
    if (bundle.tag() == ModelTag::Eba) CHECK(rich.holds(ModelClass::EbaExogenous));
  }
}

TEST_CASE("property: generated data belongs to its own class with no violations") {
  const std::map<ModelTag, ModelClass> own{{ModelTag::Logit, ModelClass::Logit}, {ModelTag::Rcg, ModelClass::Rcg},
                                           {ModelTag::Ic, ModelClass::Ic},       {ModelTag::Eba, ModelClass::Rcg},
                                           {ModelTag::Ar, ModelClass::Rcg},      {ModelTag::Rrm, ModelClass::Rrm},
                                           {ModelTag::Nsc, ModelClass::Nsc},     {ModelTag::NestedLogit, ModelClass::Nsc}};
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    for (const auto& [tag, cls] : own) {
      GenConfig cfg;
      cfg.n = 3;
      cfg.seed = seed;
      cfg.model = tag;
      const auto r = classify(generate_scc(sample_params(cfg), letters(3)));
      INFO(to_string(tag), " seed ", seed);
      CHECK(r.holds(cls));
      CHECK(r.relationship_violations.empty());
    }
  }
}

TEST_CASE("float classification") {
  const auto u = letters(3);
  const auto exact = generate_scc(spec(IcParams<Rational>{{q("1/2"), q("1/3"), q("1/4")}}), u);
  const auto r = classify(to_float(exact));
  CHECK(r.mode == "float");
  CHECK(r.holds(ModelClass::Ic));
  CHECK(r.relationship_violations.empty());
}
