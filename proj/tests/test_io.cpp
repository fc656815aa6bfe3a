#include "helpers.hpp"

#include "choicelab/axioms.hpp"
#include "choicelab/identify.hpp"
#include "choicelab/io.hpp"

using namespace choicelab;
using testing::letters;
using testing::m;
using testing::q;
using testing::spec;

namespace {

const char* kRrmPair = R"({
  "items": ["x", "y"],
  "allows_empty": false,
  "menus": [
    {"menu": ["x"], "rows": [{"set": ["x"], "p": "1"}]},
    {"menu": ["y"], "rows": [{"set": ["y"], "p": "1"}]},
    {"menu": ["x", "y"], "rows": [
      {"set": ["x", "y"], "p": "1/2"}, {"set": ["y"], "p": "1/2"}, {"set": ["x"], "p": "0"}]}
  ]
})";

std::string binary_doc(const char* pa, const char* pb, const char* pab) {
  return std::string(R"({"items":["a","b"],"allows_empty":false,"menus":[)") +
         R"({"menu":["a"],"rows":[{"set":["a"],"p":"1"}]},)" + R"({"menu":["b"],"rows":[{"set":["b"],"p":"1"}]},)" +
         R"({"menu":["a","b"],"rows":[{"set":["a"],"p":")" + pa + R"("},{"set":["b"],"p":")" + pb +
         R"("},{"set":["a","b"],"p":")" + pab + R"("}]}]})";
}

}  // namespace

TEST_CASE("RRM binary-menu document loads in exact mode") {
  const auto any = parse_scc_text(kRrmPair);
  REQUIRE(std::holds_alternative<ExactScc>(any));
  const auto& scc = std::get<ExactScc>(any);
  const auto& u = scc.universe();
  CHECK(scc.mu(u.full(), u.full()) == q("1/2"));
  CHECK(scc.mu(m(u, "y"), u.full()) == q("1/2"));
  CHECK(scc.mu(m(u, "x"), u.full()) == 0);
  const Universe v({"x", "y"});
  CHECK(scc == generate_scc(spec(RrmParams<Rational>{{q("1"), q("1")}, {v.full(), m(v, "y")}}), v));
}

TEST_CASE("mode detection") {
  CHECK(std::holds_alternative<FloatScc>(parse_scc_text(binary_doc("0.5", "0.25", "0.25"))));
  CHECK(std::holds_alternative<ExactScc>(parse_scc_text(binary_doc("1/2", "1/4", "1/4"))));
  CHECK_THROWS_AS(parse_scc_text(binary_doc("1/2", "0.25", "1/4")), ParseError);
}

TEST_CASE("invalid documents") {
  CHECK_THROWS_AS(parse_scc_text(binary_doc("1/2", "1/4", "3/20")), ParseError);  // sums to 9/10
  CHECK_THROWS_AS(parse_scc_text("{"), ParseError);
  CHECK_THROWS_AS(parse_scc_text(R"({"items":["a"],"menus":[]})"), ParseError);
  CHECK_THROWS_AS(parse_scc_text(R"({"items":["a"],"allows_empty":false,"menus":[{"menu":["z"],"rows":[]}]})"),
                  ParseError);
  const std::string dup = R"({"items":["a"],"allows_empty":false,"menus":[{"menu":["a"],"rows":[)"
                          R"({"set":["a"],"p":"1/2"},{"set":["a"],"p":"1/2"}]}]})";
  CHECK_THROWS_AS(parse_scc_text(dup), ParseError);
}

TEST_CASE("SCC documents round trip") {
  for (std::uint64_t seed = 0; seed < 16; ++seed) {
    GenConfig cfg;
    cfg.n = 3;
    cfg.seed = seed;
    cfg.model = static_cast<ModelTag>(seed % 8);
    const auto scc = generate_scc(sample_params(cfg), letters(3));
    const auto doc = scc_to_json(scc);
    const auto back = parse_scc(doc);
    REQUIRE(std::holds_alternative<ExactScc>(back));
    CHECK(std::get<ExactScc>(back) == scc);
    CHECK(dump(scc_to_json(std::get<ExactScc>(back))) == dump(doc));
  }
  const auto f = to_float(generate_scc(spec(IcParams<Rational>{{q("1/3"), q("1/7")}}), letters(2)));
  CHECK(std::get<FloatScc>(parse_scc(scc_to_json(f))) == f);
}

TEST_CASE("parameter documents round trip") {
  for (int tag = 0; tag < 8; ++tag) {
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
      GenConfig cfg;
      cfg.n = 3;
      cfg.seed = seed;
      cfg.model = static_cast<ModelTag>(tag);
      const auto s = sample_params(cfg);
      const auto doc = params_to_json(s, letters(3));
      const auto back = parse_params(doc);
      REQUIRE(std::holds_alternative<ModelSpec<Rational>>(back.spec));
      CHECK(std::get<ModelSpec<Rational>>(back.spec) == s);
      CHECK(back.universe == letters(3));
    }
  }
  GenConfig cfg;
  cfg.model = ModelTag::Logit;
  cfg.variant = Variant::EmptyAllowed;
  const auto s = sample_params(cfg);
  CHECK(std::get<ModelSpec<Rational>>(parse_params(params_to_json(s, letters(3))).spec) == s);
}

TEST_CASE("parameter documents: overrides and errors") {
  const Json doc = Json::parse(R"({"model":"ic","items":["a","b"],"gamma":{"a":"1/2","b":"1/3"}})");
  CHECK(std::get<ModelSpec<Rational>>(parse_params(doc).spec).tag() == ModelTag::Ic);
  CHECK(std::get<ModelSpec<Rational>>(parse_params(doc, std::nullopt, Variant::EmptyAllowed).spec).variant ==
        Variant::EmptyAllowed);
  CHECK_THROWS(parse_params(doc, ModelTag::Rcg));
  const Json bad = Json::parse(R"({"model":"ic","items":["a","b"],"gamma":{"a":"1/2","b":"1"}})");
  CHECK_THROWS_AS(parse_params(bad), InvalidParamsError);
  const Json fl = Json::parse(R"({"model":"ic","items":["a","b"],"gamma":{"a":"0.5","b":"0.25"}})");
  CHECK(std::holds_alternative<ModelSpec<double>>(parse_params(fl).spec));
}

TEST_CASE("counts: frequencies") {
  const auto t = parse_counts("menu;set;count\na,b;a;50\na,b;b;25\na,b;a,b;25\n");
  const auto est = estimate_from_counts(t);
  const auto& u = est.universe();
  CHECK(est.mu(m(u, "a"), u.full()) == 0.5);
  CHECK(est.mu(m(u, "b"), u.full()) == 0.25);
  CHECK(est.mu(u.full(), u.full()) == 0.25);
  CHECK_FALSE(est.has_menu(m(u, "a")));
  CHECK(parse_counts(counts_to_csv(t)).counts == t.counts);
}

TEST_CASE("counts: errors") {
  CHECK_THROWS_AS(parse_counts("menu;set;count\na;b;3\n"), ParseError);
  CHECK_THROWS_AS(parse_counts("menu,set,count\na;a;3\n"), ParseError);
  CHECK_THROWS_AS(parse_counts("menu;set;count\na;a;-3\n"), ParseError);
  CHECK_THROWS_AS(parse_counts("menu;set;count\na;a;3\na;a;4\n"), ParseError);
  CHECK_THROWS_AS(estimate_from_counts(parse_counts("menu;set;count\na;a;0\n")), ParseError);
  CHECK(parse_counts("menu;set;count\na;;3\na;a;1\n").allows_empty);
}

TEST_CASE("simulated counts are deterministic and estimate the source") {
  const auto u = letters(2);
  const auto scc = generate_scc(spec(IcParams<Rational>{{q("1/2"), q("1/3")}}), u);
  const auto a = simulate_counts(scc, 20000, 3);
  const auto b = simulate_counts(scc, 20000, 3);
  CHECK(a.counts == b.counts);
  std::uint64_t total = 0;
  for (const auto& [t, c] : a.counts.at(u.full())) total += c;
  CHECK(total == 20000);
  const auto est = estimate_from_counts(a);
  CHECK(est.mu(m(u, "a"), u.full()) == doctest::Approx(0.5).epsilon(0.05));
  CHECK(est.mu(m(u, "b"), u.full()) == doctest::Approx(0.25).epsilon(0.05));
}

TEST_CASE("report JSON") {
  const auto u = letters(3);
  NscParams<Rational> p{{m(u, "a,b"), m(u, "c")},
                        {{m(u, "a"), q("1")}, {m(u, "b"), q("2")}, {m(u, "a,b"), q("4")}, {m(u, "c"), q("3")}}};
  const auto scc = generate_scc(spec(p), u);
  const auto j = report_to_json(check_relative_additivity(scc), u);
  CHECK(j.at("axiom") == "REL_ADD");
  CHECK(j.at("holds") == false);
  CHECK(j.at("mode") == "exact");
  CHECK(j.contains("instances_checked"));
  CHECK(j.contains("instances_vacuous"));
  const auto& w = j.at("witnesses").at(0);
  CHECK(w.contains("lhs"));
  CHECK(w.contains("bindings"));
  const auto rec = recovery_to_json(identify_nsc(scc), u);
  CHECK(rec.at("model") == "nsc");
  CHECK(rec.at("round_trip_exact") == true);
}
