#include "helpers.hpp"

#include "choicelab/fuzz.hpp"
#include "choicelab/io.hpp"

using namespace choicelab;
using testing::letters;

TEST_CASE("sampled IC gammas lie on the grid inside (0,1)") {
  GenConfig cfg;
  cfg.n = 3;
  cfg.model = ModelTag::Ic;
  cfg.seed = 1;
  const auto g = std::get<IcParams<Rational>>(sample_params(cfg).params).gamma;
  REQUIRE(g.size() == 3);
  for (const auto& v : g) {
    CHECK(v > 0);
    CHECK(v < 1);
    CHECK(v.get_den() <= 64);
  }
}

TEST_CASE("sampled RRM constraint sets are distinct and reflexive") {
  for (std::uint64_t seed : {7u, 8u, 9u}) {
    GenConfig cfg;
    cfg.n = 4;
    cfg.model = ModelTag::Rrm;
    cfg.seed = seed;
    const auto p = std::get<RrmParams<Rational>>(sample_params(cfg).params);
    for (int x = 0; x < 4; ++x) {
      CHECK(p.constraint[static_cast<std::size_t>(x)].contains(x));
      for (int y = x + 1; y < 4; ++y) CHECK(p.constraint[static_cast<std::size_t>(x)] != p.constraint[static_cast<std::size_t>(y)]);
    }
  }
}

TEST_CASE("sampled NSC is a partition with positive sigma") {
  GenConfig cfg;
  cfg.n = 3;
  cfg.model = ModelTag::Nsc;
  cfg.seed = 2;
  const auto p = std::get<NscParams<Rational>>(sample_params(cfg).params);
  CHECK(p.nests.size() >= 1);
  CHECK(p.nests.size() <= 3);
  Mask all;
  for (Mask n : p.nests) {
    CHECK_FALSE(n.intersects(all));
    all = all | n;
    for_each_nonempty_subset(n, [&](Mask t) { CHECK(p.sigma.at(t) > 0); });
  }
  CHECK(all == Mask::full(3));
}

TEST_CASE("sampling is deterministic in the seed") {
  for (int tag = 0; tag < 8; ++tag) {
    GenConfig cfg;
    cfg.n = 4;
    cfg.model = static_cast<ModelTag>(tag);
    cfg.seed = 123;
    CHECK(sample_params(cfg) == sample_params(cfg));
    GenConfig other = cfg;
    other.seed = 124;
    if (cfg.model != ModelTag::Nsc) CHECK_FALSE(sample_params(cfg) == sample_params(other));
  }
}

TEST_CASE("impossible RRM density is reported") {
  GenConfig cfg;
  cfg.n = 3;
  cfg.model = ModelTag::Rrm;
  cfg.constraint_density = 1.0;
  CHECK_THROWS_AS(sample_params(cfg), InfeasibleStructureError);
}

TEST_CASE("rescaling multiplies pi, s and sigma only") {
  GenConfig cfg;
  cfg.n = 3;
  cfg.model = ModelTag::Logit;
  const auto base = sample_params(cfg);
  const auto big = rescaled(base, Rational(3));
  const auto& a = std::get<LogitParams<Rational>>(base.params).pi;
  const auto& b = std::get<LogitParams<Rational>>(big.params).pi;
  for (const auto& [t, w] : a) CHECK(b.at(t) == 3 * w);
  cfg.model = ModelTag::Ic;
  const auto ic = sample_params(cfg);
  CHECK(rescaled(ic, Rational(3)) == ic);
}

TEST_CASE("characterizing axiom sets") {
  CHECK(characterizing_axioms(ModelTag::Logit, Variant::Standard) == std::vector<AxiomId>{AxiomId::FULL_SUPPORT, AxiomId::IIS});
  CHECK(characterizing_axioms(ModelTag::Rcg, Variant::EmptyAllowed) == std::vector<AxiomId>{AxiomId::ADDITIVITY});
}

TEST_CASE("characterization suites pass and are reproducible") {
  for (int tag = 0; tag < 8; ++tag) {
    const auto s = fuzz_characterization(static_cast<ModelTag>(tag), Variant::Standard, 15, {3, 4}, 99);
    INFO(s.model);
    CHECK(s.ok());
    CHECK(s.trials == 15);
  }
  for (ModelTag tag : {ModelTag::Logit, ModelTag::Rcg, ModelTag::Ic}) {
    CHECK(fuzz_characterization(tag, Variant::EmptyAllowed, 15, {3}, 4).ok());
  }
  const auto a = fuzz_summary_to_json(fuzz_characterization(ModelTag::Rrm, Variant::Standard, 10, {3, 4}, 5));
  const auto b = fuzz_summary_to_json(fuzz_characterization(ModelTag::Rrm, Variant::Standard, 10, {3, 4}, 5));
  CHECK(dump(a) == dump(b));
}

TEST_CASE("relationship suite passes") {
  const auto s = fuzz_relationships(60, {3}, 17);
  CHECK(s.ok());
  CHECK(s.counters.at("witnesses_reevaluated") > 0);
}

TEST_CASE("trial seeds differ") {
  CHECK(trial_seed(1, 0) != trial_seed(1, 1));
  CHECK(trial_seed(1, 0) != trial_seed(2, 0));
  CHECK(trial_seed(5, 3) == trial_seed(5, 3));
}
