#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "choicelab/axioms.hpp"

namespace choicelab {

enum class ModelClass {
  Logit,
  Rcg,
  Ic,
  EbaEndogenous,
  EbaExogenous,
  Rrm,
  Nsc,
  NestedLogit,
  LogitEmpty,
  RcgEmpty,
  IcEmpty,
};

std::string_view to_string(ModelClass c);
const std::vector<ModelClass>& all_model_classes();

enum class Verdict { Holds, Fails, NotApplicable, NotDecided };

std::string_view to_string(Verdict v);

struct Membership {
  Verdict verdict = Verdict::NotApplicable;
  std::vector<AxiomId> failing;
  std::string note;
};

struct ClassificationReport {
  int n = 0;
  bool allows_empty = false;
  std::string_view mode;
  std::map<ModelClass, Membership> membership;
  std::map<AxiomId, bool> axioms;  // verdict of every axiom that was run
  bool det_full_choice = false;
  bool singleton = false;
  bool nest_invariant = false;
  /// σ recovered from the revealed nests is constant within each nest; set
  /// only when NSC holds.
  std::optional<bool> sigma_constant_within_nests;
  std::vector<std::string> relationship_violations;
  std::vector<std::string> assumption_flags;

  bool holds(ModelClass c) const;
};

inline constexpr std::string_view kSmallUniverseFlag = "assumption n >= 3 unmet";

/// Runs the characterizing axioms, decides every membership and fills
/// relationship_violations via verify_relationships.
template <ProbScalar Scalar>
ClassificationReport classify(const Scc<Scalar>& scc, const CheckOptions& opts = {});

/// Names of the relationship theorems contradicted by the membership vector.
std::vector<std::string> verify_relationships(const ClassificationReport& report);

}  // namespace choicelab
