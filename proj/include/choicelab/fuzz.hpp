#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "choicelab/axioms.hpp"
#include "choicelab/models.hpp"

namespace choicelab {

struct GenConfig {
  int n = 3;
  ModelTag model = ModelTag::Logit;
  Variant variant = Variant::Standard;
  std::uint64_t seed = 0;
  int rational_grid = 64;  // denominators of sampled values divide or are bounded by this
  int min_nests = 1;
  int max_nests = 3;
  int min_attributes = 1;
  int max_attributes = 4;
  double constraint_density = 0.5;  // chance that y joins Q(x)
};

/// Labels "a", "b", ... for the first n letters.
Universe letter_universe(int n);

/// Valid exact bundle, deterministic in the config.
/// Coverage gaps (RCG, EBA, AR) are repaired by adding the uncovered items
/// as one extra category/attribute; RRM constraint sets are resampled and
/// InfeasibleStructureError is raised when distinct sets cannot be found.
ModelSpec<Rational> sample_params(const GenConfig& config);

/// Luce-type SCC data: RRM with Q(x) = {x}.
ModelSpec<Rational> sample_singleton(int n, std::uint64_t seed, int rational_grid = 64);
/// NSC with σ constant on the non-empty subsets of each nest.
ModelSpec<Rational> sample_nest_invariant(int n, std::uint64_t seed, int rational_grid = 64);
/// Logit whose weights have product form, i.e. an IC in disguise.
ModelSpec<Rational> sample_product_logit(int n, std::uint64_t seed, int rational_grid = 64);

/// Same bundle with π, s or σ multiplied by k (other models unchanged).
ModelSpec<Rational> rescaled(const ModelSpec<Rational>& spec, const Rational& k);

/// Axioms whose conjunction characterizes the model.
std::vector<AxiomId> characterizing_axioms(ModelTag model, Variant variant);

/// Seed of trial i, mixed with splitmix64.
std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t i);

struct FuzzFailure {
  std::uint64_t seed = 0;  // trial seed; with n, model and variant it reproduces the bundle
  int n = 0;
  ModelTag model{};
  Variant variant = Variant::Standard;
  std::string stage;
  std::string detail;
  ModelSpec<Rational> spec;
};

struct FuzzSummary {
  std::string suite;
  std::string model;
  std::uint64_t seed = 0;
  std::size_t trials = 0;
  std::size_t failure_count = 0;
  std::vector<FuzzFailure> failures;  // first few, for reproduction
  std::map<std::string, std::size_t> counters;

  bool ok() const { return failure_count == 0; }
};

inline constexpr std::size_t kKeptFailures = 20;

/// sample → generate → characterizing axioms → identify → round trip, plus
/// parameter recovery and rescaling checks where the model is identified.
FuzzSummary fuzz_characterization(ModelTag model, Variant variant, std::size_t trials, const std::vector<int>& n_range,
                                  std::uint64_t seed);

/// Mixed-model classification with relationship, soundness, witness and
/// derived-consequence checks, targeted singleton / nest-invariant /
/// single-nest trials and the Logit ∧ REL_ADD ⇒ IC self-test.
FuzzSummary fuzz_relationships(std::size_t trials, const std::vector<int>& n_range, std::uint64_t seed);

}  // namespace choicelab
