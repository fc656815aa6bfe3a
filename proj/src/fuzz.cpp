#include "choicelab/fuzz.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <sstream>

#include "choicelab/classify.hpp"
#include "choicelab/identify.hpp"

namespace choicelab {

namespace {

using Rng = std::mt19937_64;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

int uniform(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }
bool coin(Rng& rng, double p) { return std::bernoulli_distribution(p)(rng); }

Rational ratio(long num, long den) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

// k/d with d ≤ grid and k ≤ grid.
Rational positive_weight(Rng& rng, int grid) { return ratio(uniform(rng, 1, grid), uniform(rng, 1, grid)); }

// k/d strictly inside (0,1), d ≤ grid.
Rational open_unit(Rng& rng, int grid) {
  const int d = uniform(rng, 2, std::max(2, grid));
  return ratio(uniform(rng, 1, d - 1), d);
}

// Random composition of the grid into `parts` positive pieces, as fractions
// of the grid. Falls back to a finer grid when parts exceed it.
std::vector<Rational> simplex_point(Rng& rng, std::size_t parts, int grid) {
  const int total = std::max<int>(grid, static_cast<int>(parts));
  std::vector<int> cuts(static_cast<std::size_t>(total - 1));
  std::iota(cuts.begin(), cuts.end(), 1);
  std::shuffle(cuts.begin(), cuts.end(), rng);
  cuts.resize(parts - 1);
  std::sort(cuts.begin(), cuts.end());
  std::vector<Rational> out;
  int prev = 0;
  for (int c : cuts) {
    out.push_back(ratio(c - prev, total));
    prev = c;
  }
  out.push_back(ratio(total - prev, total));
  return out;
}

Mask random_subset(Rng& rng, Mask within, bool nonempty) {
  const auto bits = within.bits();
  for (;;) {
    Mask m(static_cast<std::uint32_t>(rng()) & bits);
    if (!nonempty || !m.empty()) return m;
  }
}

std::vector<Mask> distinct_sets(Rng& rng, Mask universe, std::size_t count, bool allow_empty) {
  const std::size_t available = (std::size_t{1} << universe.size()) - (allow_empty ? 0 : 1);
  count = std::min(count, available);
  std::vector<Mask> out;
  while (out.size() < count) {
    Mask m = random_subset(rng, universe, !allow_empty);
    if (std::find(out.begin(), out.end(), m) == out.end()) out.push_back(m);
  }
  return out;
}

void repair_coverage(std::vector<Mask>& sets, Mask universe) {
  Mask covered;
  for (Mask m : sets) covered = covered | m;
  const Mask missing = universe - covered;
  if (missing.empty()) return;
  if (std::find(sets.begin(), sets.end(), missing) == sets.end()) {
    sets.push_back(missing);
  } else {
    sets.push_back(universe);  // unreachable in practice: a present set is already covered
  }
}

std::vector<Mask> random_partition(Rng& rng, int n, int min_nests, int max_nests) {
  const int k = uniform(rng, std::clamp(min_nests, 1, n), std::clamp(max_nests, 1, n));
  std::vector<int> items(static_cast<std::size_t>(n));
  std::iota(items.begin(), items.end(), 0);
  std::shuffle(items.begin(), items.end(), rng);
  std::vector<Mask> nests(static_cast<std::size_t>(k));
  for (int i = 0; i < n; ++i) {
    const int nest = i < k ? i : uniform(rng, 0, k - 1);
    nests[static_cast<std::size_t>(nest)] = nests[static_cast<std::size_t>(nest)].with(items[static_cast<std::size_t>(i)]);
  }
  std::sort(nests.begin(), nests.end());
  return nests;
}

LogitParams<Rational> sample_logit(Rng& rng, int n, Variant v, int grid) {
  LogitParams<Rational> p;
  for_each_nonempty_subset(Mask::full(n), [&](Mask t) { p.pi[t] = positive_weight(rng, grid); });
  if (v == Variant::EmptyAllowed) p.pi_empty = positive_weight(rng, grid);
  return p;
}

RcgParams<Rational> sample_rcg(Rng& rng, int n, Variant v, int grid) {
  const Mask x = Mask::full(n);
  const bool with_empty = v == Variant::EmptyAllowed;
  auto sets = distinct_sets(rng, x, static_cast<std::size_t>(uniform(rng, 1, 2 * n)), with_empty);
  if (!with_empty) repair_coverage(sets, x);
  const auto w = simplex_point(rng, sets.size(), grid);
  RcgParams<Rational> p;
  for (std::size_t i = 0; i < sets.size(); ++i) p.m[sets[i]] = w[i];
  return p;
}

IcParams<Rational> sample_ic(Rng& rng, int n, int grid) {
  IcParams<Rational> p;
  for (int i = 0; i < n; ++i) p.gamma.push_back(open_unit(rng, grid));
  return p;
}

std::vector<Mask> sample_carriers(Rng& rng, const GenConfig& c) {
  const int count = uniform(rng, std::max(1, c.min_attributes), std::max(c.min_attributes, c.max_attributes));
  auto sets = distinct_sets(rng, Mask::full(c.n), static_cast<std::size_t>(count), false);
  repair_coverage(sets, Mask::full(c.n));
  return sets;
}

EbaParams<Rational> sample_eba(Rng& rng, const GenConfig& c) {
  const auto carriers = sample_carriers(rng, c);
  const auto w = simplex_point(rng, carriers.size(), c.rational_grid);
  EbaParams<Rational> p;
  for (std::size_t i = 0; i < carriers.size(); ++i) p.attributes.push_back({w[i], carriers[i]});
  return p;
}

ArParams<Rational> sample_ar(Rng& rng, const GenConfig& c) {
  ArParams<Rational> p;
  for (Mask carrier : sample_carriers(rng, c)) {
    ArAttribute<Rational> a{positive_weight(rng, c.rational_grid), carrier, std::vector<unsigned long>(static_cast<std::size_t>(c.n), 0)};
    for_each_item(carrier, [&](int i) { a.eta[static_cast<std::size_t>(i)] = static_cast<unsigned long>(uniform(rng, 1, 5)); });
    p.attributes.push_back(std::move(a));
  }
  return p;
}

RrmParams<Rational> sample_rrm(Rng& rng, const GenConfig& c) {
  constexpr int kAttempts = 200;
  RrmParams<Rational> p;
  for (int x = 0; x < c.n; ++x) {
    Mask q;
    int attempt = 0;
    for (; attempt < kAttempts; ++attempt) {
      q = Mask::item(x);
      for (int y = 0; y < c.n; ++y) {
        if (y != x && coin(rng, c.constraint_density)) q = q.with(y);
      }
      if (std::find(p.constraint.begin(), p.constraint.end(), q) == p.constraint.end()) break;
    }
    if (attempt == kAttempts) {
      throw InfeasibleStructureError("no distinct constraint sets found at density " + std::to_string(c.constraint_density));
    }
    p.constraint.push_back(q);
    p.salience.push_back(positive_weight(rng, c.rational_grid));
  }
  return p;
}

NscParams<Rational> sample_nsc(Rng& rng, const GenConfig& c) {
  NscParams<Rational> p;
  p.nests = random_partition(rng, c.n, c.min_nests, c.max_nests);
  for (Mask nest : p.nests) {
    for_each_nonempty_subset(nest, [&](Mask t) { p.sigma[t] = positive_weight(rng, c.rational_grid); });
  }
  return p;
}

NestedLogitParams<Rational> sample_nl(Rng& rng, const GenConfig& c) {
  NestedLogitParams<Rational> p;
  p.nests = random_partition(rng, c.n, c.min_nests, c.max_nests);
  for (int i = 0; i < c.n; ++i) p.v.push_back(positive_weight(rng, c.rational_grid));
  for (std::size_t i = 0; i < p.nests.size(); ++i) p.eta.push_back(Rational(uniform(rng, 1, 3)));
  return p;
}

}  // namespace

Universe letter_universe(int n) {
  std::vector<std::string> labels;
  for (int i = 0; i < n; ++i) labels.emplace_back(1, static_cast<char>('a' + i));
  return Universe(std::move(labels));
}

std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t i) { return splitmix64(seed ^ splitmix64(i)); }

ModelSpec<Rational> sample_params(const GenConfig& c) {
  if (c.n < 1 || c.n > kMaxItems) throw InvalidParamsError("n must lie in [1, 16]");
  if (c.rational_grid < 2) throw InvalidParamsError("rational grid must be at least 2");
  if (c.variant == Variant::EmptyAllowed && !supports_empty_variant(c.model)) {
    throw WrongVariantError(std::string(to_string(c.model)) + " has no empty-allowed variant");
  }
  Rng rng(splitmix64(c.seed));
  ModelSpec<Rational> spec;
  spec.variant = c.variant;
  switch (c.model) {
    case ModelTag::Logit: spec.params = sample_logit(rng, c.n, c.variant, c.rational_grid); break;
    case ModelTag::Rcg: spec.params = sample_rcg(rng, c.n, c.variant, c.rational_grid); break;
    case ModelTag::Ic: spec.params = sample_ic(rng, c.n, c.rational_grid); break;
    case ModelTag::Eba: spec.params = sample_eba(rng, c); break;
    case ModelTag::Ar: spec.params = sample_ar(rng, c); break;
    case ModelTag::Rrm: spec.params = sample_rrm(rng, c); break;
    case ModelTag::Nsc: spec.params = sample_nsc(rng, c); break;
    case ModelTag::NestedLogit: spec.params = sample_nl(rng, c); break;
  }
  validate_params(spec, letter_universe(c.n));
  return spec;
}

ModelSpec<Rational> sample_singleton(int n, std::uint64_t seed, int grid) {
  Rng rng(splitmix64(seed));
  RrmParams<Rational> p;
  for (int x = 0; x < n; ++x) {
    p.constraint.push_back(Mask::item(x));
    p.salience.push_back(positive_weight(rng, grid));
  }
  return {p, Variant::Standard};
}

ModelSpec<Rational> sample_nest_invariant(int n, std::uint64_t seed, int grid) {
  Rng rng(splitmix64(seed));
  NscParams<Rational> p;
  p.nests = random_partition(rng, n, 1, n);
  for (Mask nest : p.nests) {
    const Rational level = positive_weight(rng, grid);
    for_each_nonempty_subset(nest, [&](Mask t) { p.sigma[t] = level; });
  }
  return {p, Variant::Standard};
}

ModelSpec<Rational> sample_product_logit(int n, std::uint64_t seed, int grid) {
  Rng rng(splitmix64(seed));
  std::vector<Rational> a;
  for (int i = 0; i < n; ++i) a.push_back(positive_weight(rng, grid));
  const Rational scale = positive_weight(rng, grid);
  LogitParams<Rational> p;
  for_each_nonempty_subset(Mask::full(n), [&](Mask t) {
    Rational w = scale;
    for_each_item(t, [&](int i) { w *= a[static_cast<std::size_t>(i)]; });
    p.pi[t] = w;
  });
  return {p, Variant::Standard};
}

ModelSpec<Rational> rescaled(const ModelSpec<Rational>& spec, const Rational& k) {
  ModelSpec<Rational> out = spec;
  if (auto* p = std::get_if<LogitParams<Rational>>(&out.params)) {
    for (auto& [t, w] : p->pi) w *= k;
    if (p->pi_empty) *p->pi_empty *= k;
  } else if (auto* p = std::get_if<RrmParams<Rational>>(&out.params)) {
    for (auto& s : p->salience) s *= k;
  } else if (auto* p = std::get_if<NscParams<Rational>>(&out.params)) {
    for (auto& [t, w] : p->sigma) w *= k;
  }
  return out;
}

std::vector<AxiomId> characterizing_axioms(ModelTag model, Variant variant) {
  using enum AxiomId;
  if (variant == Variant::EmptyAllowed) {
    switch (model) {
      case ModelTag::Logit: return {FULL_SUPPORT, IIS_O};
      case ModelTag::Rcg: return {ADDITIVITY};
      case ModelTag::Ic: return {FULL_SUPPORT, IIS_O, ADDITIVITY};
      default: throw WrongVariantError(std::string(to_string(model)) + " has no empty-allowed variant");
    }
  }
  switch (model) {
    case ModelTag::Logit: return {FULL_SUPPORT, IIS};
    case ModelTag::Rcg: return {POS1, REL_ADD};
    case ModelTag::Ic: return {FULL_SUPPORT, IIS, REL_ADD};
    case ModelTag::Eba:
    case ModelTag::Ar: return {POS2, REL_ADD};
    case ModelTag::Rrm: return {DISTINCT_Q, POS3, REL_ADD_1, REL_ADD_2};
    case ModelTag::Nsc:
    case ModelTag::NestedLogit: return {PIIS, PARTITION, POS4};
  }
  return {};
}

namespace {

class Recorder {
 public:
  explicit Recorder(FuzzSummary& summary) : s_(summary) {}

  void start(std::uint64_t seed, int n, ModelTag model, Variant variant, const ModelSpec<Rational>& spec) {
    seed_ = seed;
    n_ = n;
    model_ = model;
    variant_ = variant;
    spec_ = &spec;
  }

  // Returns ok so callers can chain.
  bool expect(bool ok, std::string_view stage, const std::string& detail) {
    if (ok) return true;
    ++s_.failure_count;
    ++s_.counters["failed_" + std::string(stage)];
    if (s_.failures.size() < kKeptFailures) {
      s_.failures.push_back({seed_, n_, model_, variant_, std::string(stage), detail, *spec_});
    }
    return false;
  }

  void count(const std::string& key, std::size_t by = 1) { s_.counters[key] += by; }

 private:
  FuzzSummary& s_;
  std::uint64_t seed_ = 0;
  int n_ = 0;
  ModelTag model_{};
  Variant variant_{};
  const ModelSpec<Rational>* spec_ = nullptr;
};

bool proportional(const std::map<Mask, Rational>& a, const std::map<Mask, Rational>& b) {
  if (a.size() != b.size() || a.empty()) return a.size() == b.size();
  const auto& [k0, a0] = *a.begin();
  auto it = b.find(k0);
  if (it == b.end()) return false;
  const Rational& b0 = it->second;
  for (const auto& [k, v] : a) {
    auto jt = b.find(k);
    if (jt == b.end() || v * b0 != jt->second * a0) return false;
  }
  return true;
}

bool proportional(const std::vector<Rational>& a, const std::vector<Rational>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] * b[0] != b[i] * a[0]) return false;
  }
  return true;
}

std::string axiom_failures(const Scc<Rational>& scc, const std::vector<AxiomId>& axioms, const CheckOptions& opts,
                           std::size_t& instances) {
  std::ostringstream out;
  for (AxiomId id : axioms) {
    const auto r = run_axiom(scc, id, opts);
    instances += r.instances_checked;
    if (!r.holds || !r.witnesses.empty()) out << to_string(id) << " fails with " << r.violations << " violation(s); ";
  }
  return out.str();
}

std::optional<std::vector<Mask>> carriers_of(const ModelSpec<Rational>& spec) {
  std::vector<Mask> out;
  if (const auto* p = std::get_if<EbaParams<Rational>>(&spec.params)) {
    for (const auto& a : p->attributes) out.push_back(a.carrier);
  } else if (const auto* p = std::get_if<ArParams<Rational>>(&spec.params)) {
    for (const auto& a : p->attributes) out.push_back(a.carrier);
  } else {
    return std::nullopt;
  }
  return out;
}

ModelTag recovery_model(ModelTag model) {
  switch (model) {
    case ModelTag::Ar: return ModelTag::Eba;
    case ModelTag::NestedLogit: return ModelTag::Nsc;
    default: return model;
  }
}

// Parameter-level agreement between the sampled bundle and its recovery.
std::string compare_recovery(const ModelSpec<Rational>& spec, const ModelSpec<Rational>& rec) {
  if (const auto* p = std::get_if<LogitParams<Rational>>(&spec.params)) {
    const auto& r = std::get<LogitParams<Rational>>(rec.params);
    auto a = p->pi, b = r.pi;
    if (p->pi_empty) a[Mask()] = *p->pi_empty;
    if (r.pi_empty) b[Mask()] = *r.pi_empty;
    return proportional(a, b) ? "" : "recovered pi not proportional to the sampled pi";
  }
  if (const auto* p = std::get_if<RcgParams<Rational>>(&spec.params)) {
    return p->m == std::get<RcgParams<Rational>>(rec.params).m ? "" : "recovered m differs from the sampled m";
  }
  if (const auto* p = std::get_if<IcParams<Rational>>(&spec.params)) {
    return p->gamma == std::get<IcParams<Rational>>(rec.params).gamma ? "" : "recovered gamma differs";
  }
  if (const auto* p = std::get_if<RrmParams<Rational>>(&spec.params)) {
    const auto& r = std::get<RrmParams<Rational>>(rec.params);
    if (p->constraint != r.constraint) return "recovered constraint sets differ";
    return proportional(p->salience, r.salience) ? "" : "recovered salience not proportional";
  }
  const NscParams<Rational>* sampled = std::get_if<NscParams<Rational>>(&spec.params);
  std::optional<NscParams<Rational>> induced;
  if (const auto* p = std::get_if<NestedLogitParams<Rational>>(&spec.params)) {
    induced = induced_nsc(*p);
    sampled = &*induced;
  }
  if (sampled) {
    const auto& r = std::get<NscParams<Rational>>(rec.params);
    if (sampled->nests != r.nests) return "recovered nests differ";
    if (sampled->nests.size() >= 2 && !proportional(sampled->sigma, r.sigma)) return "recovered sigma not proportional";
  }
  return "";
}

// Model equivalences that hold bundle by bundle.
void check_equivalences(Recorder& rec, const ModelSpec<Rational>& spec, const Universe& u, const Scc<Rational>& scc) {
  if (const auto* p = std::get_if<EbaParams<Rational>>(&spec.params)) {
    RcgParams<Rational> m;
    for (const auto& a : p->attributes) m.m[a.carrier] += a.weight;
    rec.expect(generate_scc(ModelSpec<Rational>{m, Variant::Standard}, u) == scc, "equivalence",
               "EBA differs from RCG with m(C) = sum of weights carried by C");
    rec.count("equivalence_checks");
  } else if (const auto* p = std::get_if<ArParams<Rational>>(&spec.params)) {
    Rational total(0);
    for (const auto& a : p->attributes) total += a.theta;
    EbaParams<Rational> e;
    for (const auto& a : p->attributes) e.attributes.push_back({Rational(a.theta / total), a.carrier});
    rec.expect(generate_scc(ModelSpec<Rational>{e, Variant::Standard}, u) == scc, "equivalence",
               "AR first stage differs from the static EBA with normalized theta");
    for_each_nonempty_subset(u.full(), [&](Mask s) {
      for_each_item(s, [&](int x) {
        const auto item = eval_ar_item(*p, x, s);
        Rational sum(0);
        bool stage_ok = true;
        for (const auto& [t, pr] : item.decomposition) {
          sum += pr.first * pr.second;
          stage_ok = stage_ok && pr.first == scc.mu(t, s);
        }
        rec.expect(sum == item.p && stage_ok, "equivalence",
                   "item identity p = sum mu*rho fails at x=" + u.label(x) + ", S=" + u.format(s));
      });
    });
    rec.count("equivalence_checks");
  } else if (const auto* p = std::get_if<IcParams<Rational>>(&spec.params)) {
    LogitParams<Rational> l;
    for_each_nonempty_subset(u.full(), [&](Mask t) {
      Rational w(1);
      for_each_item(t, [&](int i) {
        const Rational& g = p->gamma[static_cast<std::size_t>(i)];
        w *= g / (1 - g);
      });
      l.pi[t] = w;
    });
    if (spec.variant == Variant::EmptyAllowed) l.pi_empty = Rational(1);
    rec.expect(generate_scc(ModelSpec<Rational>{l, spec.variant}, u) == scc, "equivalence",
               "IC differs from the logit with product-form weights");
    rec.count("equivalence_checks");
  } else if (const auto* p = std::get_if<NestedLogitParams<Rational>>(&spec.params)) {
    rec.expect(generate_scc(ModelSpec<Rational>{induced_nsc(*p), Variant::Standard}, u) == scc, "equivalence",
               "nested logit differs from the NSC with the induced sigma");
    rec.count("equivalence_checks");
  }
}

}  // namespace

FuzzSummary fuzz_characterization(ModelTag model, Variant variant, std::size_t trials, const std::vector<int>& n_range,
                                  std::uint64_t seed) {
  if (n_range.empty()) throw InvalidParamsError("n range is empty");
  FuzzSummary summary;
  summary.suite = "characterization";
  summary.model = std::string(to_string(model)) + (variant == Variant::EmptyAllowed ? "_empty" : "");
  summary.seed = seed;
  summary.trials = trials;
  Recorder rec(summary);
  const auto axioms = characterizing_axioms(model, variant);
  const ModelTag target = recovery_model(model);

  for (std::size_t i = 0; i < trials; ++i) {
    const std::uint64_t ts = trial_seed(seed, i);
    const int n = n_range[static_cast<std::size_t>(splitmix64(ts) % n_range.size())];
    GenConfig cfg;
    cfg.n = n;
    cfg.model = model;
    cfg.variant = variant;
    cfg.seed = ts;
    const auto spec = sample_params(cfg);
    rec.start(ts, n, model, variant, spec);
    const Universe u = letter_universe(n);
    const auto scc = generate_scc(spec, u);

    if (!rec.expect(validate_scc(scc).empty(), "generate", "generated SCC fails validation")) continue;

    CheckOptions opts;
    opts.attributes = carriers_of(spec);
    std::size_t instances = 0;
    const auto failed = axiom_failures(scc, axioms, opts, instances);
    rec.count("axiom_instances", instances);
    if (!rec.expect(failed.empty(), "necessity", failed)) continue;

    check_equivalences(rec, spec, u, scc);

    try {
      const auto recovery = identify(scc, target, opts);
      rec.expect(recovery.round_trip_exact && round_trip_verify(scc, recovery), "sufficiency",
                 "round trip differs from the input SCC");
      if (model != ModelTag::Eba && model != ModelTag::Ar) {
        const auto diff = compare_recovery(spec, recovery.spec);
        rec.expect(diff.empty(), "parameters", diff);
      }
      if (target == ModelTag::Logit || target == ModelTag::Rrm || (model == ModelTag::Nsc)) {
        Rng rng(ts);
        const auto scaled = rescaled(spec, positive_weight(rng, 64));
        const auto scaled_scc = generate_scc(scaled, u);
        rec.expect(scaled_scc == scc, "scaling", "rescaled parameters change the SCC");
        rec.expect(identify(scaled_scc, target, opts).spec == recovery.spec, "scaling",
                   "rescaled parameters change the normalized recovery");
        rec.count("scaling_checks");
      }
      rec.count("round_trips");
    } catch (const Error& e) {
      rec.expect(false, "sufficiency", e.what());
    }
  }
  return summary;
}

namespace {

struct Kind {
  ModelTag model;
  Variant variant;
};

const std::vector<Kind>& mixed_kinds() {
  static const std::vector<Kind> kinds{
      {ModelTag::Logit, Variant::Standard},    {ModelTag::Rcg, Variant::Standard},
      {ModelTag::Ic, Variant::Standard},       {ModelTag::Eba, Variant::Standard},
      {ModelTag::Ar, Variant::Standard},       {ModelTag::Rrm, Variant::Standard},
      {ModelTag::Nsc, Variant::Standard},      {ModelTag::NestedLogit, Variant::Standard},
      {ModelTag::Logit, Variant::EmptyAllowed}, {ModelTag::Rcg, Variant::EmptyAllowed},
      {ModelTag::Ic, Variant::EmptyAllowed},
  };
  return kinds;
}

std::vector<ModelClass> expected_classes(ModelTag model, Variant variant) {
  if (variant == Variant::EmptyAllowed) {
    switch (model) {
      case ModelTag::Logit: return {ModelClass::LogitEmpty};
      case ModelTag::Rcg: return {ModelClass::RcgEmpty};
      default: return {ModelClass::IcEmpty, ModelClass::LogitEmpty, ModelClass::RcgEmpty};
    }
  }
  switch (model) {
    case ModelTag::Logit: return {ModelClass::Logit};
    case ModelTag::Rcg: return {ModelClass::Rcg, ModelClass::EbaEndogenous};
    case ModelTag::Ic: return {ModelClass::Ic, ModelClass::Logit, ModelClass::Rcg};
    case ModelTag::Eba:
    case ModelTag::Ar: return {ModelClass::EbaExogenous, ModelClass::EbaEndogenous, ModelClass::Rcg};
    case ModelTag::Rrm: return {ModelClass::Rrm};
    case ModelTag::Nsc: return {ModelClass::Nsc};
    case ModelTag::NestedLogit: return {ModelClass::Nsc};
  }
  return {};
}

std::string join_names(const std::vector<std::string>& v) {
  std::string out;
  for (const auto& s : v) out += (out.empty() ? "" : "; ") + s;
  return out;
}

void common_checks(Recorder& rec, const Scc<Rational>& scc, const ClassificationReport& report, const CheckOptions& opts) {
  rec.expect(report.relationship_violations.empty(), "relationships", join_names(report.relationship_violations));

  if (report.n >= 2 && (report.holds(ModelClass::Rrm) || report.holds(ModelClass::Nsc))) {
    rec.expect(!report.axioms.at(AxiomId::FULL_SUPPORT), "disjointness", "RRM/NSC SCC has full support");
    rec.count("disjointness_checks");
  }

  CheckOptions wopts = opts;
  wopts.witness_cap = 10;
  for (AxiomId id : default_battery(scc, wopts)) {
    const auto r = run_axiom(scc, id, wopts);
    for (const auto& w : r.witnesses) {
      rec.expect(reevaluate_witness(scc, w, wopts).violated, "witness",
                 std::string(to_string(id)) + " witness does not re-evaluate to a violation");
      rec.count("witnesses_reevaluated");
    }
  }

  auto premise = [&](AxiomId id) {
    auto it = report.axioms.find(id);
    return it != report.axioms.end() && it->second;
  };
  if (premise(AxiomId::REL_ADD)) {
    for (const auto& p : {check_monotonicity(scc, opts), check_zero_propagation(scc, opts)}) {
      rec.expect(p.holds, "derived", p.name + ": " + p.first_violation);
      rec.count("derived_instances", p.checked);
    }
  }
  if (premise(AxiomId::PIIS)) {
    const auto p = check_positive_iis(scc, opts);
    rec.expect(p.holds, "derived", p.name + ": " + p.first_violation);
    rec.count("derived_instances", p.checked);
  }
}

bool nl_compatible(const ClassificationReport& r) {
  return r.membership.at(ModelClass::NestedLogit).verdict != Verdict::Fails;
}

}  // namespace

FuzzSummary fuzz_relationships(std::size_t trials, const std::vector<int>& n_range, std::uint64_t seed) {
  if (n_range.empty()) throw InvalidParamsError("n range is empty");
  FuzzSummary summary;
  summary.suite = "relationships";
  summary.model = "mixed";
  summary.seed = seed;
  summary.trials = trials;
  Recorder rec(summary);
  const auto& kinds = mixed_kinds();

  auto pick_n = [&](std::uint64_t ts) { return n_range[static_cast<std::size_t>(splitmix64(ts) % n_range.size())]; };

  for (std::size_t i = 0; i < trials; ++i) {
    const std::uint64_t ts = trial_seed(seed, i);
    const int n = pick_n(ts);
    const Kind kind = kinds[static_cast<std::size_t>(splitmix64(ts + 1) % kinds.size())];
    GenConfig cfg;
    cfg.n = n;
    cfg.model = kind.model;
    cfg.variant = kind.variant;
    cfg.seed = ts;
    const auto spec = sample_params(cfg);
    rec.start(ts, n, kind.model, kind.variant, spec);
    const auto scc = generate_scc(spec, letter_universe(n));
    CheckOptions opts;
    opts.attributes = carriers_of(spec);
    const auto report = classify(scc, opts);

    for (ModelClass c : expected_classes(kind.model, kind.variant)) {
      rec.expect(report.holds(c), "soundness", "generated SCC is not classified as " + std::string(to_string(c)));
    }
    if (kind.model == ModelTag::NestedLogit) {
      rec.expect(nl_compatible(report), "soundness", "nested logit SCC rejected as nested logit");
    }
    common_checks(rec, scc, report, opts);
    rec.count("mixed_trials");
  }

  // Targeted families, one of each per five mixed trials.
  const std::size_t targeted = std::max<std::size_t>(1, trials / 5);
  for (std::size_t i = 0; i < targeted; ++i) {
    const std::uint64_t ts = trial_seed(seed ^ 0x5eed5eedull, i);
    const int n = pick_n(ts);
    const Universe u = letter_universe(n);

    {
      const auto spec = sample_singleton(n, ts);
      rec.start(ts, n, ModelTag::Rrm, Variant::Standard, spec);
      const auto scc = generate_scc(spec, u);
      const auto r = classify(scc);
      rec.expect(r.singleton, "singleton", "SINGLETON flag not set");
      for (auto c : {ModelClass::Rrm, ModelClass::Nsc, ModelClass::Rcg, ModelClass::NestedLogit}) {
        rec.expect(r.holds(c), "singleton", "singleton SCC not in " + std::string(to_string(c)));
      }
      common_checks(rec, scc, r, {});
      rec.count("singleton_trials");
    }
    {
      const auto spec = sample_nest_invariant(n, ts);
      rec.start(ts, n, ModelTag::Nsc, Variant::Standard, spec);
      const auto scc = generate_scc(spec, u);
      const auto r = classify(scc);
      rec.expect(r.nest_invariant && r.holds(ModelClass::Nsc) && r.holds(ModelClass::Rcg) && r.axioms.at(AxiomId::PAF),
                 "nest_invariant", "nest-invariant SCC misses NSC, RCG, PAF or the flag");
      common_checks(rec, scc, r, {});
      rec.count("nest_invariant_trials");
    }
    {
      NscParams<Rational> p;
      p.nests = {u.full()};
      for_each_nonempty_subset(u.full(), [&](Mask t) { p.sigma[t] = Rational(1); });
      const ModelSpec<Rational> spec{p, Variant::Standard};
      rec.start(ts, n, ModelTag::Nsc, Variant::Standard, spec);
      const auto scc = generate_scc(spec, u);
      const auto r = classify(scc);
      bool ok = r.det_full_choice && r.holds(ModelClass::Rcg) && r.holds(ModelClass::Nsc) && r.nest_invariant &&
                r.holds(ModelClass::NestedLogit);
      if (n >= 2) ok = ok && !r.holds(ModelClass::Rrm) && !r.holds(ModelClass::Logit) && !r.holds(ModelClass::Ic);
      rec.expect(ok, "deterministic", "deterministic-with-full-choice memberships are wrong");
      common_checks(rec, scc, r, {});
      rec.count("deterministic_trials");
    }
  }

  // Logit ∧ REL_ADD ⇒ IC: any Logit SCC satisfying REL_ADD must be recoverable as IC.
  for (std::size_t i = 0; i < trials; ++i) {
    const std::uint64_t ts = trial_seed(seed ^ 0x10917ull, i);
    const int n = pick_n(ts);
    GenConfig cfg;
    cfg.n = n;
    cfg.seed = ts;
    const auto spec = (i % 2 == 0) ? sample_product_logit(n, ts) : sample_params(cfg);
    rec.start(ts, n, ModelTag::Logit, Variant::Standard, spec);
    const auto scc = generate_scc(spec, letter_universe(n));
    CheckOptions quiet;
    quiet.witness_cap = 0;
    if (n < 2 || !check_relative_additivity(scc, quiet).holds) continue;
    rec.count("logit_rel_add_hits");
    try {
      const auto ic = identify_ic(scc);
      rec.expect(round_trip_verify(scc, ic), "logit_rcg_ic", "Logit with REL_ADD is not an IC");
    } catch (const Error& e) {
      rec.expect(false, "logit_rcg_ic", e.what());
    }
  }
  return summary;
}

}  // namespace choicelab
