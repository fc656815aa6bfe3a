#include <CLI11.hpp>

#include <iostream>
#include <sstream>

#include "choicelab/classify.hpp"
#include "choicelab/fuzz.hpp"
#include "choicelab/identify.hpp"
#include "choicelab/io.hpp"

using namespace choicelab;

namespace {

constexpr int kOk = 0;
constexpr int kRejected = 1;
constexpr int kUsage = 2;

struct Output {
  std::string path;

  void emit(const Json& j) const {
    if (path.empty()) {
      std::cout << dump(j);
    } else {
      write_file(path, dump(j));
    }
  }
};

std::vector<Mask> parse_attribute_list(const std::string& text, const Universe& u) {
  std::vector<Mask> out;
  std::stringstream ss(text);
  std::string piece;
  while (std::getline(ss, piece, ';')) out.push_back(u.parse_mask(piece));
  return out;
}

CheckOptions check_options(const Universe& u, std::optional<double> tol, std::size_t cap, const std::string& attributes,
                           std::optional<double> support_eps) {
  CheckOptions opts;
  if (tol) opts.tol.eps_eq = *tol;
  opts.witness_cap = cap;
  opts.support_eps = support_eps;
  if (!attributes.empty()) opts.attributes = parse_attribute_list(attributes, u);
  return opts;
}

AnyScc load_scc(const std::string& path) { return parse_scc_text(read_file(path)); }

Json load_json(const std::string& path) {
  try {
    return Json::parse(read_file(path));
  } catch (const Json::parse_error& e) {
    throw ParseError(path + ": malformed JSON: " + e.what());
  }
}

std::vector<int> parse_n_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string piece;
  while (std::getline(ss, piece, ',')) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(piece, &used);
    } catch (const std::exception&) {
      throw ParseError("--n expects comma-separated integers");
    }
    if (used != piece.size() || v < 1 || v > kMaxItems) throw ParseError("--n values must be integers in [1, 16]");
    out.push_back(v);
  }
  if (out.empty()) throw ParseError("--n is empty");
  return out;
}

// ------------------------------------------------------------------ gen

struct GenArgs {
  std::string model, params, out;
  bool empty = false;
};

int run_gen(const GenArgs& a) {
  const auto doc = parse_params(load_json(a.params), parse_model_tag(a.model),
                                a.empty ? std::optional(Variant::EmptyAllowed) : std::nullopt);
  Json scc;
  if (const auto* exact = std::get_if<ModelSpec<Rational>>(&doc.spec)) {
    const auto* nl = std::get_if<NestedLogitParams<Rational>>(&exact->params);
    if (nl && nested_logit_requires_float(*nl)) {
      std::cerr << "note: non-integer nest exponent, generating in float mode\n";
      scc = scc_to_json(generate_scc(to_float(*exact), doc.universe));
    } else {
      scc = scc_to_json(generate_scc(*exact, doc.universe));
    }
  } else {
    scc = scc_to_json(generate_scc(std::get<ModelSpec<double>>(doc.spec), doc.universe));
  }
  Output{a.out}.emit(scc);
  return kOk;
}

// ------------------------------------------------------------------ eval

struct EvalArgs {
  std::string model, params, menu, set, item;
  bool empty = false;
  bool has_set = false;
};

template <ProbScalar Scalar>
Json eval_spec(const ModelSpec<Scalar>& spec, const Universe& u, const EvalArgs& a) {
  const Mask menu = u.parse_mask(a.menu);
  if (menu.empty()) throw ParseError("--menu must name at least one item");
  Json out = {{"menu", u.labels_of(menu)}, {"mode", std::string(mode_name<Scalar>())}};
  if (!a.item.empty()) {
    const auto* ar = std::get_if<ArParams<Scalar>>(&spec.params);
    if (!ar) throw InvalidParamsError("--item is only defined for the attribute rule");
    const int x = u.require_index(a.item);
    const auto r = eval_ar_item(*ar, x, menu);
    Json parts = Json::array();
    for (const auto& [t, pr] : r.decomposition) {
      parts.push_back({{"set", u.labels_of(t)}, {"mu", format_prob(pr.first)}, {"rho", format_prob(pr.second)}});
    }
    out["item"] = a.item;
    out["p"] = format_prob(r.p);
    out["decomposition"] = std::move(parts);
    return out;
  }
  if (a.has_set) {
    const Mask set = u.parse_mask(a.set);
    out["set"] = u.labels_of(set);
    out["p"] = format_prob(evaluate(spec, set, menu));
    return out;
  }
  Json rows = Json::array();
  const bool with_empty = spec.variant == Variant::EmptyAllowed;
  for_each_subset(menu, [&](Mask t) {
    if (t.empty() && !with_empty) return;
    const Scalar p = evaluate(spec, t, menu);
    if (p == Scalar(0)) return;
    rows.push_back({{"set", u.labels_of(t)}, {"p", format_prob(p)}});
  });
  out["rows"] = std::move(rows);
  return out;
}

int run_eval(const EvalArgs& a) {
  const auto doc = parse_params(load_json(a.params), a.model.empty() ? std::nullopt : std::optional(parse_model_tag(a.model)),
                                a.empty ? std::optional(Variant::EmptyAllowed) : std::nullopt);
  Json out = std::visit(
      [&](const auto& spec) -> Json {
        if constexpr (std::is_same_v<std::decay_t<decltype(spec)>, ModelSpec<Rational>>) {
          const auto* nl = std::get_if<NestedLogitParams<Rational>>(&spec.params);
          if (nl && nested_logit_requires_float(*nl)) return eval_spec(to_float(spec), doc.universe, a);
        }
        return eval_spec(spec, doc.universe, a);
      },
      doc.spec);
  Output{}.emit(out);
  return kOk;
}

// ------------------------------------------------------------------ check

struct CheckArgs {
  std::string input, axioms = "all", attributes, out;
  std::optional<double> tol, support_eps;
  std::size_t cap = 10;
};

template <ProbScalar Scalar>
int check_scc(const Scc<Scalar>& scc, const CheckArgs& a) {
  const CheckOptions opts = check_options(scc.universe(), a.tol, a.cap, a.attributes, a.support_eps);
  std::vector<AxiomId> ids;
  if (a.axioms == "all") {
    ids = default_battery(scc, opts);
  } else {
    std::stringstream ss(a.axioms);
    std::string piece;
    while (std::getline(ss, piece, ',')) ids.push_back(parse_axiom_id(piece));
  }
  Json reports = Json::array();
  bool holds = true;
  for (AxiomId id : ids) {
    const auto r = run_axiom(scc, id, opts);
    holds = holds && r.holds;
    reports.push_back(report_to_json(r, scc.universe()));
  }
  Output{a.out}.emit({{"holds", holds}, {"mode", std::string(mode_name<Scalar>())}, {"reports", std::move(reports)}});
  return holds ? kOk : kRejected;
}

// ------------------------------------------------------------------ identify

struct IdentifyArgs {
  std::string input, model, attributes, out;
  std::optional<double> tol;
};

template <ProbScalar Scalar>
int identify_scc(const Scc<Scalar>& scc, const IdentifyArgs& a) {
  const CheckOptions opts = check_options(scc.universe(), a.tol, 10, a.attributes, std::nullopt);
  const Universe& u = scc.universe();
  if (a.model == "auto") {
    Json found = Json::array();
    for (const auto& r : identify_auto(scc, opts)) found.push_back(recovery_to_json(r, u));
    const bool any = !found.empty();
    Output{a.out}.emit({{"recovered", std::move(found)}});
    return any ? kOk : kRejected;
  }
  try {
    const auto r = identify(scc, parse_model_tag(a.model), opts);
    Output{a.out}.emit(recovery_to_json(r, u));
    return r.round_trip_exact ? kOk : kRejected;
  } catch (const PreconditionFailed<Scalar>& e) {
    Output{a.out}.emit({{"model", std::string(to_string(e.model()))},
                        {"precondition_failed", report_to_json(e.report(), u)},
                        {"message", e.what()}});
    return kRejected;
  }
}

// ------------------------------------------------------------------ classify

struct ClassifyArgs {
  std::string input, attributes, out;
  std::optional<double> tol;
};

template <ProbScalar Scalar>
int classify_scc(const Scc<Scalar>& scc, const ClassifyArgs& a) {
  const auto report = classify(scc, check_options(scc.universe(), a.tol, 0, a.attributes, std::nullopt));
  Output{a.out}.emit(classification_to_json(report));
  const bool contradicts = !report.relationship_violations.empty() && report.assumption_flags.empty();
  return contradicts ? kRejected : kOk;
}

// ------------------------------------------------------------------ fuzz

struct FuzzArgs {
  std::string model = "all", n = "3,4", out;
  std::size_t trials = 100;
  std::uint64_t seed = 1;
  bool empty = false;
};

int run_fuzz(const FuzzArgs& a) {
  const auto ns = parse_n_list(a.n);
  std::vector<FuzzSummary> summaries;
  if (a.model == "all") {
    for (auto tag : {ModelTag::Logit, ModelTag::Rcg, ModelTag::Ic, ModelTag::Eba, ModelTag::Ar, ModelTag::Rrm,
                     ModelTag::Nsc, ModelTag::NestedLogit}) {
      summaries.push_back(fuzz_characterization(tag, Variant::Standard, a.trials, ns, a.seed));
    }
    for (auto tag : {ModelTag::Logit, ModelTag::Rcg, ModelTag::Ic}) {
      summaries.push_back(fuzz_characterization(tag, Variant::EmptyAllowed, a.trials, ns, a.seed));
    }
    summaries.push_back(fuzz_relationships(a.trials, ns, a.seed));
  } else if (a.model == "relationships") {
    summaries.push_back(fuzz_relationships(a.trials, ns, a.seed));
  } else {
    const auto variant = a.empty ? Variant::EmptyAllowed : Variant::Standard;
    summaries.push_back(fuzz_characterization(parse_model_tag(a.model), variant, a.trials, ns, a.seed));
  }
  Json all = Json::array();
  std::size_t failures = 0;
  for (const auto& s : summaries) {
    failures += s.failure_count;
    all.push_back(fuzz_summary_to_json(s));
  }
  Output{a.out}.emit({{"failures", failures}, {"summaries", std::move(all)}});
  return failures == 0 ? kOk : kRejected;
}

// ------------------------------------------------------------------ estimate / simulate

int run_estimate(const std::string& input, const std::string& out) {
  Output{out}.emit(scc_to_json(estimate_from_counts(parse_counts(read_file(input)))));
  return kOk;
}

int run_simulate(const std::string& input, std::uint64_t draws, std::uint64_t seed, const std::string& out) {
  const std::string csv = std::visit([&](const auto& scc) { return counts_to_csv(simulate_counts(scc, draws, seed)); },
                                     load_scc(input));
  if (out.empty()) {
    std::cout << csv;
  } else {
    write_file(out, csv);
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"choicelab: stochastic choice correspondences, axioms and identification"};
  app.require_subcommand(1);

  GenArgs gen;
  auto* g = app.add_subcommand("gen", "generate the SCC of a parameter bundle");
  g->add_option("--model", gen.model, "model tag (logit, rcg, ic, eba, ar, rrm, nsc, nl)")->required();
  g->add_option("--params", gen.params, "parameter file")->required();
  g->add_flag("--empty", gen.empty, "empty-allowed variant");
  g->add_option("-o,--output", gen.out, "output file (default stdout)");

  EvalArgs ev;
  auto* e = app.add_subcommand("eval", "evaluate a model pointwise");
  e->add_option("--params", ev.params, "parameter file")->required();
  e->add_option("--model", ev.model, "model tag when the file has none");
  e->add_option("--menu", ev.menu, "comma-separated labels")->required();
  auto* set_opt = e->add_option("--set", ev.set, "comma-separated labels; empty string for the empty set");
  e->add_option("--item", ev.item, "item label (attribute rule only)");
  e->add_flag("--empty", ev.empty, "empty-allowed variant");

  CheckArgs ck;
  auto* c = app.add_subcommand("check", "run axiom checks on an SCC");
  c->add_option("scc", ck.input, "SCC document")->required();
  c->add_option("--axioms", ck.axioms, "comma-separated axiom ids or 'all'");
  c->add_option("--tol", ck.tol, "float-mode equality tolerance");
  c->add_option("--witness-cap", ck.cap, "witnesses kept per axiom");
  c->add_option("--attributes", ck.attributes, "exogenous carriers, e.g. 'a,b;c'");
  c->add_option("--support-eps", ck.support_eps, "float-mode positivity threshold");
  c->add_option("-o,--output", ck.out, "output file");

  IdentifyArgs id;
  auto* i = app.add_subcommand("identify", "recover model parameters from an SCC");
  i->add_option("scc", id.input, "SCC document")->required();
  i->add_option("--model", id.model, "model tag or 'auto'")->required();
  i->add_option("--tol", id.tol, "float-mode equality tolerance");
  i->add_option("-o,--output", id.out, "output file");

  ClassifyArgs cl;
  auto* k = app.add_subcommand("classify", "decide model memberships");
  k->add_option("scc", cl.input, "SCC document")->required();
  k->add_option("--attributes", cl.attributes, "exogenous carriers, e.g. 'a,b;c'");
  k->add_option("--tol", cl.tol, "float-mode equality tolerance");
  k->add_option("-o,--output", cl.out, "output file");

  FuzzArgs fz;
  auto* f = app.add_subcommand("fuzz", "seeded characterization and relationship fuzzing");
  f->add_option("--model", fz.model, "model tag, 'relationships' or 'all'");
  f->add_flag("--empty", fz.empty, "empty-allowed variant");
  f->add_option("--trials", fz.trials, "trials per suite");
  f->add_option("--n", fz.n, "universe sizes, e.g. 3,4");
  f->add_option("--seed", fz.seed, "base seed");
  f->add_option("-o,--output", fz.out, "output file");

  std::string est_in, est_out;
  auto* s = app.add_subcommand("estimate", "empirical SCC from a counts table");
  s->add_option("counts", est_in, "counts CSV (menu;set;count)")->required();
  s->add_option("-o,--output", est_out, "output file");

  std::string sim_in, sim_out;
  std::uint64_t sim_draws = 1000000, sim_seed = 1;
  auto* m = app.add_subcommand("simulate", "multinomial counts drawn from an SCC");
  m->add_option("scc", sim_in, "SCC document")->required();
  m->add_option("--draws", sim_draws, "draws per menu");
  m->add_option("--seed", sim_seed, "seed");
  m->add_option("-o,--output", sim_out, "output file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& err) {
    return app.exit(err);
  } catch (const CLI::ParseError& err) {
    app.exit(err);
    return kUsage;
  }

  try {
    if (*g) return run_gen(gen);
    if (*e) {
      ev.has_set = set_opt->count() > 0;
      return run_eval(ev);
    }
    if (*c) return std::visit([&](const auto& scc) { return check_scc(scc, ck); }, load_scc(ck.input));
    if (*i) return std::visit([&](const auto& scc) { return identify_scc(scc, id); }, load_scc(id.input));
    if (*k) return std::visit([&](const auto& scc) { return classify_scc(scc, cl); }, load_scc(cl.input));
    if (*f) return run_fuzz(fz);
    if (*s) return run_estimate(est_in, est_out);
    if (*m) return run_simulate(sim_in, sim_draws, sim_seed, sim_out);
  } catch (const choicelab::Error& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
