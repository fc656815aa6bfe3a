#include "helpers.hpp"

#include "choicelab/identify.hpp"

using namespace choicelab;
using testing::letters;
using testing::m;
using testing::q;
using testing::spec;

namespace {

NscParams<Rational> nsc_example_params(const Universe& u) {
  return {{m(u, "a,b"), m(u, "c")},
          {{m(u, "a"), q("1")}, {m(u, "b"), q("2")}, {m(u, "a,b"), q("4")}, {m(u, "c"), q("3")}}};
}

template <class P>
const P& params_of(const RecoveryResult<Rational>& r) {
  return std::get<P>(r.spec.params);
}

template <class F>
AxiomId failing_axiom(F&& f) {
  try {
    f();
  } catch (const PreconditionFailed<Rational>& e) {
    CHECK_FALSE(e.report().holds);
    CHECK_FALSE(e.report().witnesses.empty());
    return e.report().axiom;
  }
  FAIL("no precondition failure");
  return AxiomId::IIS;
}

}  // namespace

TEST_CASE("logit recovery reads the grand-set row") {
  const auto u = letters(2);
  LogitParams<Rational> p{{{m(u, "a"), q("2")}, {m(u, "b"), q("1")}, {u.full(), q("1")}}, std::nullopt};
  const auto r = identify_logit(generate_scc(spec(p), u));
  CHECK(r.round_trip_exact);
  const auto& pi = params_of<LogitParams<Rational>>(r).pi;
  CHECK(pi.at(m(u, "a")) == q("1/2"));
  CHECK(pi.at(m(u, "b")) == q("1/4"));
  CHECK(pi.at(u.full()) == q("1/4"));

  const auto u3 = letters(3);
  LogitParams<Rational> flat;
  for_each_nonempty_subset(u3.full(), [&](Mask t) { flat.pi[t] = q("5"); });
  const auto flat_rec = identify_logit(generate_scc(spec(flat), u3));
  for (const auto& [t, w] : params_of<LogitParams<Rational>>(flat_rec).pi) {
    CHECK(w == q("1/7"));
  }
}

TEST_CASE("logit recovery refuses NSC data") {
  const auto u = letters(3);
  const auto scc = generate_scc(spec(nsc_example_params(u)), u);
  CHECK(failing_axiom([&] { identify_logit(scc); }) == AxiomId::FULL_SUPPORT);
}

TEST_CASE("rcg recovery") {
  const auto u = letters(3);
  RcgParams<Rational> p{{{m(u, "a,b"), q("1/2")}, {m(u, "c"), q("1/4")}, {u.full(), q("1/4")}}};
  const auto r = identify_rcg(generate_scc(spec(p), u));
  CHECK(r.round_trip_exact);
  CHECK(params_of<RcgParams<Rational>>(r) == p);

  const auto single = generate_scc(sample_singleton(3, 9), u);
  const auto rs = identify_rcg(single);
  CHECK(rs.round_trip_exact);
  for (const auto& [c, w] : params_of<RcgParams<Rational>>(rs).m) {
    CHECK(c.size() == 1);
    CHECK(w == single.mu(c, u.full()));
  }

  const auto nsc = generate_scc(spec(nsc_example_params(u)), u);
  CHECK(failing_axiom([&] { identify_rcg(nsc); }) == AxiomId::REL_ADD);
}

TEST_CASE("rcg recovery in the empty-allowed variant") {
  const auto u = letters(3);
  RcgParams<Rational> p{{{m(u, "a,b"), q("1/2")}, {m(u, "c"), q("1/4")}, {Mask(), q("1/4")}}};
  const auto r = identify_rcg(generate_scc(spec(p, Variant::EmptyAllowed), u));
  CHECK(r.round_trip_exact);
  CHECK(r.spec.variant == Variant::EmptyAllowed);
  CHECK(params_of<RcgParams<Rational>>(r).m.at(Mask()) == q("1/4"));
}

TEST_CASE("ic recovery") {
  const auto u = letters(2);
  const auto r = identify_ic(generate_scc(spec(IcParams<Rational>{{q("1/2"), q("1/3")}}), u));
  CHECK(r.round_trip_exact);
  CHECK(params_of<IcParams<Rational>>(r).gamma == std::vector<Rational>{q("1/2"), q("1/3")});

  const auto u3 = letters(3);
  LogitParams<Rational> flat;
  for_each_nonempty_subset(u3.full(), [&](Mask t) { flat.pi[t] = q("1"); });
  CHECK(params_of<IcParams<Rational>>(identify_ic(generate_scc(spec(flat), u3))).gamma ==
        std::vector<Rational>(3, q("1/2")));

  RcgParams<Rational> rcg{{{m(u3, "a,b"), q("1/2")}, {m(u3, "c"), q("1/4")}, {u3.full(), q("1/4")}}};
  CHECK_THROWS_AS(identify_ic(generate_scc(spec(rcg), u3)), PreconditionFailed<Rational>);

  const auto u1 = letters(1);
  CHECK_THROWS_AS(identify_ic(generate_scc(spec(IcParams<Rational>{{q("1/2")}}), u1)), InvalidParamsError);
}

TEST_CASE("ic recovery in the empty-allowed variant, including one item") {
  const auto u1 = letters(1);
  const auto r1 = identify_ic(generate_scc(spec(IcParams<Rational>{{q("2/7")}}, Variant::EmptyAllowed), u1));
  CHECK(params_of<IcParams<Rational>>(r1).gamma == std::vector<Rational>{q("2/7")});
  const auto u = letters(3);
  IcParams<Rational> g{{q("1/5"), q("1/2"), q("5/6")}};
  const auto r = identify_ic(generate_scc(spec(g, Variant::EmptyAllowed), u));
  CHECK(r.round_trip_exact);
  CHECK(params_of<IcParams<Rational>>(r) == g);
}

TEST_CASE("rrm recovery") {
  const Universe u({"x", "y"});
  RrmParams<Rational> t2{{q("1"), q("1")}, {u.full(), m(u, "y")}};
  const auto r = identify_rrm(generate_scc(spec(t2), u));
  CHECK(r.round_trip_exact);
  const auto& rp = params_of<RrmParams<Rational>>(r);
  CHECK(rp.constraint == t2.constraint);
  CHECK(rp.salience == std::vector<Rational>{q("1/2"), q("1/2")});
  CHECK_FALSE(r.normalization_note.empty());

  const auto u2 = letters(2);
  RrmParams<Rational> single{{q("1"), q("2")}, {m(u2, "a"), m(u2, "b")}};
  const auto sp = params_of<RrmParams<Rational>>(identify_rrm(generate_scc(spec(single), u2)));
  CHECK(sp.constraint == single.constraint);
  CHECK(sp.salience == std::vector<Rational>{q("1/3"), q("2/3")});

  const auto u3 = letters(3);
  RcgParams<Rational> rcg{{{m(u3, "a,b"), q("1/2")}, {m(u3, "c"), q("1/4")}, {u3.full(), q("1/4")}}};
  CHECK_THROWS_AS(identify_rrm(generate_scc(spec(rcg), u3)), PreconditionFailed<Rational>);
}

TEST_CASE("nsc recovery: example, DET and singleton data") {
  const auto u = letters(3);
  const auto input = nsc_example_params(u);
  const auto r = identify_nsc(generate_scc(spec(input), u));
  CHECK(r.round_trip_exact);
  const auto& np = params_of<NscParams<Rational>>(r);
  CHECK(np.nests == input.nests);
  CHECK(np.sigma == input.sigma);

  NscParams<Rational> det{{u.full()}, {}};
  for_each_nonempty_subset(u.full(), [&](Mask t) { det.sigma[t] = Rational(1 + t.bits()); });
  const auto rd = identify_nsc(generate_scc(spec(det), u));
  CHECK(rd.round_trip_exact);
  for (const auto& [t, w] : params_of<NscParams<Rational>>(rd).sigma) CHECK(w == 1);

  NscParams<Rational> luce{{m(u, "a"), m(u, "b"), m(u, "c")},
                           {{m(u, "a"), q("1")}, {m(u, "b"), q("2")}, {m(u, "c"), q("3")}}};
  const auto rl = identify_nsc(generate_scc(spec(luce), u));
  CHECK(params_of<NscParams<Rational>>(rl) == luce);

  LogitParams<Rational> flat;
  for_each_nonempty_subset(u.full(), [&](Mask t) { flat.pi[t] = q("1"); });
  CHECK(failing_axiom([&] { identify_nsc(generate_scc(spec(flat), u)); }) == AxiomId::PARTITION);
}

TEST_CASE("round trip detects a doubled sigma") {
  const auto u = letters(3);
  const auto scc = generate_scc(spec(nsc_example_params(u)), u);
  auto r = identify_nsc(scc);
  REQUIRE(round_trip_verify(scc, r));
  std::get<NscParams<Rational>>(r.spec.params).sigma.at(m(u, "b")) *= 2;
  CHECK_FALSE(round_trip_verify(scc, r));
}

TEST_CASE("nsc anchors do not matter") {
  // Rebuild σ by hand from other anchors (last item of each nest) and
  // compare the regenerated tables.
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    GenConfig cfg;
    cfg.n = 4;
    cfg.seed = seed;
    cfg.model = ModelTag::Nsc;
    cfg.min_nests = 2;
    const auto u = letters(4);
    const auto scc = generate_scc(sample_params(cfg), u);
    const auto nests = derive_revealed_nests(scc);
    if (nests.size() < 2) continue;
    const int x1 = 31 - std::countl_zero(nests[0].bits());
    const int x2 = 31 - std::countl_zero(nests[1].bits());
    NscParams<Rational> alt{nests, {}};
    auto ratio = [&](Mask t, int anchor) {
      const Mask s = t.with(anchor);
      return Rational(scc.mu(t, s) / scc.mu(Mask::item(anchor), s));
    };
    for (std::size_t i = 0; i < nests.size(); ++i) {
      for_each_nonempty_subset(nests[i], [&](Mask t) {
        if (i == 0) {
          alt.sigma[t] = t == Mask::item(x1) ? Rational(1) : Rational(ratio(t, x2) / ratio(Mask::item(x1), x2));
        } else {
          alt.sigma[t] = ratio(t, x1);
        }
      });
    }
    CHECK(generate_scc(spec(alt), u) == scc);
    const auto r = identify_nsc(scc);
    CHECK(generate_scc(r.spec, u) == generate_scc(spec(alt), u));
  }
}

TEST_CASE("primitive interlock on IC data") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    GenConfig cfg;
    cfg.n = 3 + static_cast<int>(seed % 2);
    cfg.seed = seed;
    cfg.model = ModelTag::Ic;
    const auto u = letters(cfg.n);
    const auto scc = generate_scc(sample_params(cfg), u);
    const auto pi = params_of<LogitParams<Rational>>(identify_logit(scc)).pi;
    const auto mm = params_of<RcgParams<Rational>>(identify_rcg(scc)).m;
    CHECK(pi == mm);
    const auto gamma = params_of<IcParams<Rational>>(identify_ic(scc)).gamma;
    const Mask x = u.full();
    for (int i = 0; i < cfg.n; ++i) {
      CHECK(gamma[static_cast<std::size_t>(i)] == pi.at(x) / (pi.at(x) + pi.at(x.without(i))));
    }
  }
}

TEST_CASE("rescaled inputs give identical recoveries") {
  for (std::uint64_t seed = 0; seed < 15; ++seed) {
    for (ModelTag tag : {ModelTag::Logit, ModelTag::Rrm, ModelTag::Nsc}) {
      GenConfig cfg;
      cfg.n = 3;
      cfg.seed = seed;
      cfg.model = tag;
      const auto base = sample_params(cfg);
      const auto u = letters(3);
      const auto a = identify(generate_scc(base, u), tag);
      const auto b = identify(generate_scc(rescaled(base, q("7/3")), u), tag);
      CHECK(a.spec == b.spec);
    }
  }
}

TEST_CASE("dispatch and auto") {
  const auto u = letters(2);
  const auto scc = generate_scc(spec(IcParams<Rational>{{q("1/2"), q("1/3")}}), u);
  CHECK_THROWS_AS(identify(scc, ModelTag::Ar), InvalidParamsError);
  CHECK_THROWS_AS(identify(scc, ModelTag::NestedLogit), InvalidParamsError);
  std::vector<ModelTag> got;
  for (const auto& r : identify_auto(scc)) {
    CHECK(r.round_trip_exact);
    got.push_back(r.model);
  }
  CHECK(std::find(got.begin(), got.end(), ModelTag::Ic) != got.end());
  CHECK(std::find(got.begin(), got.end(), ModelTag::Logit) != got.end());
  CHECK(std::find(got.begin(), got.end(), ModelTag::Rrm) == got.end());
}

TEST_CASE("float recovery within eps_eq") {
  const auto u = letters(2);
  const auto exact = generate_scc(spec(IcParams<Rational>{{q("1/2"), q("1/3")}}), u);
  Scc<double> noisy(u, false);
  for (Mask s : exact.menus()) {
    noisy.add_menu(s);
    const double bump = s == u.full() ? 1e-4 : 0.0;
    bool first = true;
    for (const auto& [t, p] : exact.row(s)) {
      noisy.set(t, s, to_double(p) + (first ? bump : -bump / 2));
      first = false;
    }
  }
  CheckOptions opts;
  opts.tol.eps_eq = 1e-2;
  const auto r = identify_ic(noisy, opts);
  CHECK(r.round_trip_exact);
  const auto& g = std::get<IcParams<double>>(r.spec.params).gamma;
  CHECK(g[0] == doctest::Approx(0.5).epsilon(0.01));
  CHECK(g[1] == doctest::Approx(1.0 / 3).epsilon(0.01));
}
