#include "choicelab/io.hpp"

#include <fstream>
#include <random>
#include <set>
#include <sstream>

namespace choicelab {

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) { throw ParseError(where + ": " + what); }

const Json& field(const Json& obj, const char* key, const std::string& where) {
  if (!obj.is_object()) fail(where, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) fail(where, std::string("missing field \"") + key + "\"");
  return *it;
}

std::string as_string(const Json& j, const std::string& where) {
  if (!j.is_string()) fail(where, "expected a string");
  return j.get<std::string>();
}

Mask labels_mask(const Json& j, const Universe& u, const std::string& where) {
  if (!j.is_array()) fail(where, "expected a list of labels");
  std::vector<std::string> labels;
  for (const auto& l : j) labels.push_back(as_string(l, where));
  try {
    return u.mask_of(labels);
  } catch (const ParseError& e) {
    fail(where, e.what());
  }
}

Json labels_json(const Universe& u, Mask m) { return u.labels_of(m); }

Universe parse_items(const Json& doc) {
  const Json& items = field(doc, "items", "document");
  if (!items.is_array()) fail("items", "expected a list of labels");
  std::vector<std::string> labels;
  for (const auto& l : items) labels.push_back(as_string(l, "items"));
  const std::set<std::string> distinct(labels.begin(), labels.end());
  if (distinct.size() != labels.size()) fail("items", "duplicate label");
  try {
    return Universe(std::move(labels));
  } catch (const Error& e) {
    fail("items", e.what());
  }
}

bool is_decimal_literal(const std::string& s) { return s.find_first_of(".eE") != std::string::npos; }
bool is_fraction_literal(const std::string& s) { return s.find('/') != std::string::npos; }

// Decides the mode of a set of numeric strings: fractions and decimals may
// not be mixed; integers go either way.
class ModeProbe {
 public:
  void see(const std::string& s, const std::string& where) {
    if (is_decimal_literal(s)) {
      decimal_ = true;
    } else if (!is_rational_literal(s)) {
      fail(where, "not a probability literal: '" + s + "'");
    } else if (is_fraction_literal(s)) {
      fraction_ = true;
    }
    if (decimal_ && fraction_) fail(where, "mixed rational and decimal formats");
  }
  bool exact() const { return !decimal_; }

 private:
  bool decimal_ = false;
  bool fraction_ = false;
};

template <ProbScalar Scalar>
Scalar number(const std::string& s, const std::string& where) {
  try {
    if constexpr (is_exact_v<Scalar>) {
      return parse_rational(s);
    } else {
      return parse_decimal(s);
    }
  } catch (const ParseError& e) {
    fail(where, e.what());
  }
}

template <ProbScalar Scalar>
Scc<Scalar> build_scc(const Json& doc, const Universe& u, bool allows_empty) {
  Scc<Scalar> scc(u, allows_empty);
  const Json& menus = field(doc, "menus", "document");
  std::size_t mi = 0;
  for (const auto& m : menus) {
    const std::string where = "menus[" + std::to_string(mi++) + "]";
    const Mask menu = labels_mask(field(m, "menu", where), u, where + ".menu");
    if (menu.empty()) fail(where + ".menu", "empty menu");
    if (scc.has_menu(menu)) fail(where + ".menu", "duplicate menu " + u.format(menu));
    scc.add_menu(menu);
    std::set<Mask> seen;
    std::size_t ri = 0;
    for (const auto& r : field(m, "rows", where)) {
      const std::string rw = where + ".rows[" + std::to_string(ri++) + "]";
      const Mask set = labels_mask(field(r, "set", rw), u, rw + ".set");
      if (!seen.insert(set).second) fail(rw, "duplicate row for " + u.format(set) + " in menu " + u.format(menu));
      const Scalar p = number<Scalar>(as_string(field(r, "p", rw), rw + ".p"), rw + ".p");
      scc.set(set, menu, p);
    }
  }
  return scc;
}

template <ProbScalar Scalar>
void require_valid(const Scc<Scalar>& scc) {
  const auto violations = validate_scc(scc);
  if (violations.empty()) return;
  std::string msg = "invalid SCC:";
  for (const auto& v : violations) {
    msg += " [menu " + scc.universe().format(v.menu) + ", " + std::string(to_string(v.property)) + ": " + v.detail + "]";
  }
  throw ParseError(msg);
}

}  // namespace

AnyScc parse_scc(const Json& doc) {
  if (!doc.is_object()) fail("document", "expected an object");
  const Universe u = parse_items(doc);
  const Json& ae = field(doc, "allows_empty", "document");
  if (!ae.is_boolean()) fail("allows_empty", "expected a boolean");
  const Json& menus = field(doc, "menus", "document");
  if (!menus.is_array()) fail("menus", "expected a list");

  ModeProbe probe;
  std::size_t mi = 0;
  for (const auto& m : menus) {
    const std::string where = "menus[" + std::to_string(mi++) + "]";
    const Json& rows = field(m, "rows", where);
    if (!rows.is_array()) fail(where + ".rows", "expected a list");
    std::size_t ri = 0;
    for (const auto& r : rows) {
      const std::string rw = where + ".rows[" + std::to_string(ri++) + "].p";
      probe.see(as_string(field(r, "p", rw), rw), rw);
    }
  }

  AnyScc out;
  try {
    if (probe.exact()) {
      out = build_scc<Rational>(doc, u, ae.get<bool>());
    } else {
      out = build_scc<double>(doc, u, ae.get<bool>());
    }
  } catch (const ShapeError& e) {
    throw ParseError(e.what());
  }
  std::visit([](const auto& scc) { require_valid(scc); }, out);
  return out;
}

AnyScc parse_scc_text(std::string_view text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
  return parse_scc(doc);
}

template <ProbScalar Scalar>
Json scc_to_json(const Scc<Scalar>& scc) {
  const Universe& u = scc.universe();
  Json menus = Json::array();
  for (Mask menu : scc.menus()) {
    Json rows = Json::array();
    for (const auto& [set, p] : scc.row(menu)) {
      if (is_exact_v<Scalar> ? p == 0 : p == 0.0) continue;
      rows.push_back({{"set", labels_json(u, set)}, {"p", format_prob(p)}});
    }
    menus.push_back({{"menu", labels_json(u, menu)}, {"rows", std::move(rows)}});
  }
  return {{"items", u.labels()}, {"allows_empty", scc.allows_empty()}, {"menus", std::move(menus)}};
}

// ---------------------------------------------------------------- params

namespace {

Variant parse_variant(const std::string& s) {
  if (s == "standard") return Variant::Standard;
  if (s == "empty") return Variant::EmptyAllowed;
  fail("variant", "expected \"standard\" or \"empty\"");
}

std::string_view variant_name(Variant v) { return v == Variant::Standard ? "standard" : "empty"; }

// Collects every numeric string in the model-specific fields for the mode probe.
void probe_numbers(const Json& j, ModeProbe& probe, const std::string& where, bool numeric_context) {
  if (j.is_string()) {
    if (numeric_context) probe.see(j.get<std::string>(), where);
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) probe_numbers(j[i], probe, where + "[" + std::to_string(i) + "]", numeric_context);
  } else if (j.is_object()) {
    for (const auto& [k, v] : j.items()) {
      const bool labels = k == "set" || k == "carrier" || k == "nests" || k == "constraints";
      probe_numbers(v, probe, where + "." + k, numeric_context && !labels);
    }
  }
}

template <ProbScalar Scalar>
std::map<Mask, Scalar> weight_list(const Json& j, const Universe& u, const std::string& where) {
  if (!j.is_array()) fail(where, "expected a list of {\"set\", \"w\"}");
  std::map<Mask, Scalar> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string w = where + "[" + std::to_string(i) + "]";
    const Mask set = labels_mask(field(j[i], "set", w), u, w + ".set");
    if (out.contains(set)) fail(w, "duplicate set " + u.format(set));
    out.emplace(set, number<Scalar>(as_string(field(j[i], "w", w), w + ".w"), w + ".w"));
  }
  return out;
}

template <ProbScalar Scalar>
std::vector<Scalar> per_item(const Json& j, const Universe& u, const std::string& where) {
  if (!j.is_object()) fail(where, "expected an object keyed by label");
  std::vector<std::optional<Scalar>> slots(static_cast<std::size_t>(u.size()));
  for (const auto& [k, v] : j.items()) {
    const auto idx = u.index_of(k);
    if (!idx) fail(where, "unknown label '" + k + "'");
    slots[static_cast<std::size_t>(*idx)] = number<Scalar>(as_string(v, where + "." + k), where + "." + k);
  }
  std::vector<Scalar> out;
  for (int i = 0; i < u.size(); ++i) {
    if (!slots[static_cast<std::size_t>(i)]) fail(where, "missing value for '" + u.label(i) + "'");
    out.push_back(*slots[static_cast<std::size_t>(i)]);
  }
  return out;
}

std::vector<Mask> nest_list(const Json& j, const Universe& u, const std::string& where) {
  if (!j.is_array()) fail(where, "expected a list of label lists");
  std::vector<Mask> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(labels_mask(j[i], u, where + "[" + std::to_string(i) + "]"));
  return out;
}

template <ProbScalar Scalar>
ModelParams<Scalar> build_params(const Json& doc, ModelTag tag, const Universe& u) {
  switch (tag) {
    case ModelTag::Logit: {
      LogitParams<Scalar> p;
      p.pi = weight_list<Scalar>(field(doc, "pi", "params"), u, "pi");
      if (doc.contains("pi_empty")) p.pi_empty = number<Scalar>(as_string(doc["pi_empty"], "pi_empty"), "pi_empty");
      return p;
    }
    case ModelTag::Rcg: return RcgParams<Scalar>{weight_list<Scalar>(field(doc, "m", "params"), u, "m")};
    case ModelTag::Ic: return IcParams<Scalar>{per_item<Scalar>(field(doc, "gamma", "params"), u, "gamma")};
    case ModelTag::Eba: {
      EbaParams<Scalar> p;
      const Json& attrs = field(doc, "attributes", "params");
      if (!attrs.is_array()) fail("attributes", "expected a list");
      for (std::size_t i = 0; i < attrs.size(); ++i) {
        const std::string w = "attributes[" + std::to_string(i) + "]";
        p.attributes.push_back({number<Scalar>(as_string(field(attrs[i], "weight", w), w + ".weight"), w + ".weight"),
                                labels_mask(field(attrs[i], "carrier", w), u, w + ".carrier")});
      }
      return p;
    }
    case ModelTag::Ar: {
      ArParams<Scalar> p;
      const Json& attrs = field(doc, "attributes", "params");
      if (!attrs.is_array()) fail("attributes", "expected a list");
      for (std::size_t i = 0; i < attrs.size(); ++i) {
        const std::string w = "attributes[" + std::to_string(i) + "]";
        ArAttribute<Scalar> a{number<Scalar>(as_string(field(attrs[i], "theta", w), w + ".theta"), w + ".theta"),
                              labels_mask(field(attrs[i], "carrier", w), u, w + ".carrier"),
                              std::vector<unsigned long>(static_cast<std::size_t>(u.size()), 0)};
        const Json& eta = field(attrs[i], "eta", w);
        if (!eta.is_object()) fail(w + ".eta", "expected an object keyed by label");
        for (const auto& [k, v] : eta.items()) {
          const auto idx = u.index_of(k);
          if (!idx) fail(w + ".eta", "unknown label '" + k + "'");
          if (!v.is_number_unsigned()) fail(w + ".eta." + k, "expected a non-negative integer");
          a.eta[static_cast<std::size_t>(*idx)] = v.template get<unsigned long>();
        }
        p.attributes.push_back(std::move(a));
      }
      return p;
    }
    case ModelTag::Rrm: {
      RrmParams<Scalar> p;
      p.salience = per_item<Scalar>(field(doc, "salience", "params"), u, "salience");
      const Json& q = field(doc, "constraints", "params");
      if (!q.is_object()) fail("constraints", "expected an object keyed by label");
      std::vector<std::optional<Mask>> slots(static_cast<std::size_t>(u.size()));
      for (const auto& [k, v] : q.items()) {
        const auto idx = u.index_of(k);
        if (!idx) fail("constraints", "unknown label '" + k + "'");
        slots[static_cast<std::size_t>(*idx)] = labels_mask(v, u, "constraints." + k);
      }
      for (int i = 0; i < u.size(); ++i) {
        if (!slots[static_cast<std::size_t>(i)]) fail("constraints", "missing constraint set for '" + u.label(i) + "'");
        p.constraint.push_back(*slots[static_cast<std::size_t>(i)]);
      }
      return p;
    }
    case ModelTag::Nsc: {
      NscParams<Scalar> p;
      p.nests = nest_list(field(doc, "nests", "params"), u, "nests");
      p.sigma = weight_list<Scalar>(field(doc, "sigma", "params"), u, "sigma");
      return p;
    }
    case ModelTag::NestedLogit: {
      NestedLogitParams<Scalar> p;
      p.nests = nest_list(field(doc, "nests", "params"), u, "nests");
      p.v = per_item<Scalar>(field(doc, "v", "params"), u, "v");
      const Json& eta = field(doc, "eta", "params");
      if (!eta.is_array()) fail("eta", "expected a list, one exponent per nest");
      for (std::size_t i = 0; i < eta.size(); ++i) {
        const std::string w = "eta[" + std::to_string(i) + "]";
        p.eta.push_back(number<Scalar>(as_string(eta[i], w), w));
      }
      return p;
    }
  }
  fail("model", "unsupported model");
}

template <ProbScalar Scalar>
Json weight_list_json(const std::map<Mask, Scalar>& m, const Universe& u) {
  Json out = Json::array();
  for (const auto& [set, w] : m) out.push_back({{"set", labels_json(u, set)}, {"w", format_prob(w)}});
  return out;
}

template <ProbScalar Scalar>
Json per_item_json(const std::vector<Scalar>& v, const Universe& u) {
  Json out = Json::object();
  for (int i = 0; i < u.size(); ++i) out[u.label(i)] = format_prob(v[static_cast<std::size_t>(i)]);
  return out;
}

Json nests_json(const std::vector<Mask>& nests, const Universe& u) {
  Json out = Json::array();
  for (Mask n : nests) out.push_back(labels_json(u, n));
  return out;
}

}  // namespace

ParamsDocument parse_params(const Json& doc, std::optional<ModelTag> model, std::optional<Variant> variant) {
  if (!doc.is_object()) fail("params", "expected an object");
  const Universe u = parse_items(doc);
  if (doc.contains("model")) {
    ModelTag in_doc;
    try {
      in_doc = parse_model_tag(as_string(doc["model"], "model"));
    } catch (const ParseError& e) {
      fail("model", e.what());
    }
    if (model && *model != in_doc) fail("model", "document says " + std::string(to_string(in_doc)));
    model = in_doc;
  }
  if (!model) fail("model", "no model given");
  if (doc.contains("variant")) {
    const Variant in_doc = parse_variant(as_string(doc["variant"], "variant"));
    if (variant && *variant != in_doc) fail("variant", "document says " + std::string(variant_name(in_doc)));
    variant = in_doc;
  }

  ModeProbe probe;
  Json numeric = doc;
  numeric.erase("items");
  numeric.erase("model");
  numeric.erase("variant");
  probe_numbers(numeric, probe, "params", true);

  ParamsDocument out{u, ModelSpec<Rational>{}};
  if (probe.exact()) {
    ModelSpec<Rational> spec{build_params<Rational>(doc, *model, u), variant.value_or(Variant::Standard)};
    validate_params(spec, u);
    out.spec = std::move(spec);
  } else {
    ModelSpec<double> spec{build_params<double>(doc, *model, u), variant.value_or(Variant::Standard)};
    validate_params(spec, u);
    out.spec = std::move(spec);
  }
  return out;
}

template <ProbScalar Scalar>
Json params_to_json(const ModelSpec<Scalar>& spec, const Universe& u) {
  Json out = {{"model", std::string(to_string(spec.tag()))},
              {"items", u.labels()},
              {"variant", std::string(variant_name(spec.variant))}};
  std::visit(
      [&](const auto& p) {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, LogitParams<Scalar>>) {
          out["pi"] = weight_list_json(p.pi, u);
          if (p.pi_empty) out["pi_empty"] = format_prob(*p.pi_empty);
        } else if constexpr (std::is_same_v<P, RcgParams<Scalar>>) {
          out["m"] = weight_list_json(p.m, u);
        } else if constexpr (std::is_same_v<P, IcParams<Scalar>>) {
          out["gamma"] = per_item_json(p.gamma, u);
        } else if constexpr (std::is_same_v<P, EbaParams<Scalar>>) {
          Json attrs = Json::array();
          for (const auto& a : p.attributes) {
            attrs.push_back({{"carrier", labels_json(u, a.carrier)}, {"weight", format_prob(a.weight)}});
          }
          out["attributes"] = std::move(attrs);
        } else if constexpr (std::is_same_v<P, ArParams<Scalar>>) {
          Json attrs = Json::array();
          for (const auto& a : p.attributes) {
            Json eta = Json::object();
            for_each_item(a.carrier, [&](int i) { eta[u.label(i)] = a.eta[static_cast<std::size_t>(i)]; });
            attrs.push_back({{"carrier", labels_json(u, a.carrier)}, {"theta", format_prob(a.theta)}, {"eta", eta}});
          }
          out["attributes"] = std::move(attrs);
        } else if constexpr (std::is_same_v<P, RrmParams<Scalar>>) {
          out["salience"] = per_item_json(p.salience, u);
          Json q = Json::object();
          for (int i = 0; i < u.size(); ++i) q[u.label(i)] = labels_json(u, p.constraint[static_cast<std::size_t>(i)]);
          out["constraints"] = std::move(q);
        } else if constexpr (std::is_same_v<P, NscParams<Scalar>>) {
          out["nests"] = nests_json(p.nests, u);
          out["sigma"] = weight_list_json(p.sigma, u);
        } else {
          out["nests"] = nests_json(p.nests, u);
          out["v"] = per_item_json(p.v, u);
          Json eta = Json::array();
          for (const auto& e : p.eta) eta.push_back(format_prob(e));
          out["eta"] = std::move(eta);
        }
      },
      spec.params);
  return out;
}

// ---------------------------------------------------------------- reports

template <ProbScalar Scalar>
Json witness_to_json(const Witness<Scalar>& w, const Universe& u) {
  Json bindings = Json::array();
  for (const auto& b : w.bindings) {
    if (b.is_item) {
      bindings.push_back({{"name", b.name}, {"item", u.label(b.mask.first())}});
    } else {
      bindings.push_back({{"name", b.name}, {"set", labels_json(u, b.mask)}});
    }
  }
  Json out = {{"axiom", std::string(to_string(w.axiom))},
              {"bindings", std::move(bindings)},
              {"lhs", format_prob(w.lhs)},
              {"rhs", format_prob(w.rhs)},
              {"relation", std::string(to_string(w.relation))}};
  if (w.clause != 0) out["clause"] = w.clause;
  return out;
}

template <ProbScalar Scalar>
Json report_to_json(const AxiomReport<Scalar>& r, const Universe& u) {
  Json witnesses = Json::array();
  for (const auto& w : r.witnesses) witnesses.push_back(witness_to_json(w, u));
  return {{"axiom", std::string(to_string(r.axiom))},
          {"holds", r.holds},
          {"witnesses", std::move(witnesses)},
          {"violations", r.violations},
          {"instances_checked", r.instances_checked},
          {"instances_vacuous", r.instances_vacuous},
          {"mode", std::string(r.mode)}};
}

template <ProbScalar Scalar>
Json recovery_to_json(const RecoveryResult<Scalar>& r, const Universe& u) {
  return {{"model", std::string(to_string(r.model))},
          {"params", params_to_json(r.spec, u)},
          {"round_trip_exact", r.round_trip_exact},
          {"normalization", r.normalization_note},
          {"mode", std::string(mode_name<Scalar>())}};
}

Json classification_to_json(const ClassificationReport& r) {
  Json membership = Json::object();
  for (const auto& [c, m] : r.membership) {
    Json failing = Json::array();
    for (AxiomId id : m.failing) failing.push_back(std::string(to_string(id)));
    Json entry = {{"verdict", std::string(to_string(m.verdict))}, {"failing_axioms", std::move(failing)}};
    if (!m.note.empty()) entry["note"] = m.note;
    membership[std::string(to_string(c))] = std::move(entry);
  }
  Json axioms = Json::object();
  for (const auto& [id, holds] : r.axioms) axioms[std::string(to_string(id))] = holds;
  Json special = {{"DET_FULL_CHOICE", r.det_full_choice},
                  {"SINGLETON", r.singleton},
                  {"NEST_INVARIANT", r.nest_invariant}};
  if (r.sigma_constant_within_nests) special["sigma_constant_within_nests"] = *r.sigma_constant_within_nests;
  return {{"n", r.n},
          {"allows_empty", r.allows_empty},
          {"mode", std::string(r.mode)},
          {"membership", std::move(membership)},
          {"axioms", std::move(axioms)},
          {"special", std::move(special)},
          {"relationship_violations", r.relationship_violations},
          {"assumption_flags", r.assumption_flags}};
}

Json fuzz_summary_to_json(const FuzzSummary& s) {
  Json failures = Json::array();
  for (const auto& f : s.failures) {
    failures.push_back({{"seed", f.seed},
                        {"n", f.n},
                        {"model", std::string(to_string(f.model))},
                        {"variant", std::string(variant_name(f.variant))},
                        {"stage", f.stage},
                        {"detail", f.detail},
                        {"params", params_to_json(f.spec, letter_universe(f.n))}});
  }
  return {{"suite", s.suite},
          {"model", s.model},
          {"seed", s.seed},
          {"trials", s.trials},
          {"failures", s.failure_count},
          {"reproducers", std::move(failures)},
          {"counters", s.counters}};
}

// ---------------------------------------------------------------- counts

namespace {

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.emplace_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> label_list(const std::string& field) {
  std::vector<std::string> out;
  if (trim(field).empty()) return out;
  for (auto& l : split(field, ',')) out.push_back(trim(l));
  return out;
}

}  // namespace

CountsTable parse_counts(std::string_view csv) {
  struct Row {
    std::vector<std::string> menu, set;
    std::uint64_t count;
    std::size_t line;
  };
  std::vector<Row> rows;
  std::set<std::string> labels;
  std::size_t line_no = 0;
  bool header = false;
  for (const auto& raw : split(csv, '\n')) {
    ++line_no;
    const std::string line = trim(raw);
    if (line.empty()) continue;
    const std::string where = "line " + std::to_string(line_no);
    const auto cells = split(line, ';');
    if (!header) {
      if (cells.size() != 3 || trim(cells[0]) != "menu" || trim(cells[1]) != "set" || trim(cells[2]) != "count") {
        fail(where, "expected header menu;set;count");
      }
      header = true;
      continue;
    }
    if (cells.size() != 3) fail(where, "expected three ';'-separated fields");
    Row r{label_list(cells[0]), label_list(cells[1]), 0, line_no};
    const std::string c = trim(cells[2]);
    if (c.empty() || c.find_first_not_of("0123456789") != std::string::npos) fail(where, "count must be a non-negative integer");
    try {
      r.count = std::stoull(c);
    } catch (const std::exception&) {
      fail(where, "count out of range");
    }
    if (r.menu.empty()) fail(where, "empty menu");
    labels.insert(r.menu.begin(), r.menu.end());
    labels.insert(r.set.begin(), r.set.end());
    rows.push_back(std::move(r));
  }
  if (!header) fail("line 1", "expected header menu;set;count");
  if (rows.empty()) fail("table", "no rows");

  CountsTable t;
  try {
    t.universe = Universe(std::vector<std::string>(labels.begin(), labels.end()));
  } catch (const Error& e) {
    fail("table", e.what());
  }
  for (const auto& r : rows) {
    const std::string where = "line " + std::to_string(r.line);
    Mask menu, set;
    try {
      menu = t.universe.mask_of(r.menu);
      set = t.universe.mask_of(r.set);
    } catch (const ParseError& e) {
      fail(where, e.what());
    }
    if (!set.subset_of(menu)) fail(where, "set " + t.universe.format(set) + " is not contained in menu " + t.universe.format(menu));
    if (set.empty()) t.allows_empty = true;
    auto& cell = t.counts[menu];
    if (cell.contains(set)) fail(where, "duplicate row");
    cell[set] = r.count;
  }
  return t;
}

std::string counts_to_csv(const CountsTable& t) {
  std::ostringstream out;
  out << "menu;set;count\n";
  auto join = [&](Mask m) {
    std::string s;
    for (const auto& l : t.universe.labels_of(m)) s += (s.empty() ? "" : ",") + l;
    return s;
  };
  for (const auto& [menu, sets] : t.counts) {
    for (const auto& [set, c] : sets) out << join(menu) << ';' << join(set) << ';' << c << '\n';
  }
  return out.str();
}

FloatScc estimate_from_counts(const CountsTable& t) {
  FloatScc scc(t.universe, t.allows_empty);
  for (const auto& [menu, sets] : t.counts) {
    std::uint64_t total = 0;
    for (const auto& [set, c] : sets) total += c;
    if (total == 0) throw ParseError("menu " + t.universe.format(menu) + " has no positive count");
    scc.add_menu(menu);
    for (const auto& [set, c] : sets) {
      if (c > 0) scc.set(set, menu, static_cast<double>(c) / static_cast<double>(total));
    }
  }
  return scc;
}

template <ProbScalar Scalar>
CountsTable simulate_counts(const Scc<Scalar>& scc, std::uint64_t draws, std::uint64_t seed) {
  CountsTable t;
  t.universe = scc.universe();
  t.allows_empty = scc.allows_empty();
  std::mt19937_64 rng(seed);
  for (Mask menu : scc.menus()) {
    // Multinomial as a chain of binomials over the stored rows.
    std::uint64_t left = draws;
    double mass_left = 1.0;
    const auto& row = scc.row(menu);
    auto& cell = t.counts[menu];
    for (std::size_t i = 0; i < row.size(); ++i) {
      const double p = to_double(row[i].second);
      std::uint64_t k = left;
      if (i + 1 < row.size() && mass_left > 0) {
        const double q = std::clamp(p / mass_left, 0.0, 1.0);
        k = std::binomial_distribution<std::uint64_t>(left, q)(rng);
      }
      cell[row[i].first] = k;
      left -= k;
      mass_left -= p;
    }
  }
  return t;
}

// ---------------------------------------------------------------- files

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write " + path);
  out << content;
  if (!out) throw ParseError("write failed for " + path);
}

#define CHOICELAB_INSTANTIATE_IO(S)                                                  \
  template Json scc_to_json(const Scc<S>&);                                          \
  template Json params_to_json(const ModelSpec<S>&, const Universe&);               \
  template Json witness_to_json(const Witness<S>&, const Universe&);                \
  template Json report_to_json(const AxiomReport<S>&, const Universe&);             \
  template Json recovery_to_json(const RecoveryResult<S>&, const Universe&);        \
  template CountsTable simulate_counts(const Scc<S>&, std::uint64_t, std::uint64_t);

CHOICELAB_INSTANTIATE_IO(Rational)
CHOICELAB_INSTANTIATE_IO(double)

}  // namespace choicelab
