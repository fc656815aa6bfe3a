#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "choicelab/core.hpp"

namespace choicelab {

enum class AxiomId {
  IIS,
  IIS_O,
  REL_ADD,
  ADDITIVITY,
  POS1,
  POS2,
  DISTINCT_Q,
  POS3,
  REL_ADD_1,
  REL_ADD_2,
  PIIS,
  PARTITION,
  POS4,
  PAF,
  FULL_SUPPORT,
  DET_FULL_CHOICE,
  SINGLETON,
};

std::string_view to_string(AxiomId id);
/// Case-sensitive; throws ParseError.
AxiomId parse_axiom_id(std::string_view text);
const std::vector<AxiomId>& all_axiom_ids();

/// How a witness's two sides were compared.
enum class Relation {
  Equal,        // lhs must equal rhs
  Positive,     // lhs must be > 0 (rhs is 0)
  Zero,         // lhs must be 0 (rhs is 0)
  PositiveIff,  // lhs > 0 must coincide with rhs == 1
  Distinct,     // lhs must differ from rhs
};

std::string_view to_string(Relation r);

struct Binding {
  std::string name;
  Mask mask;
  bool is_item = false;  // mask holds exactly one item
};

template <ProbScalar Scalar>
struct Witness {
  AxiomId axiom{};
  std::vector<Binding> bindings;
  Scalar lhs{};
  Scalar rhs{};
  Relation relation = Relation::Equal;
  int clause = 0;  // sub-condition for multi-part definitions, 0 otherwise

  /// Throws std::out_of_range for an unknown name.
  Mask at(std::string_view name) const;
};

template <ProbScalar Scalar>
struct AxiomReport {
  AxiomId axiom{};
  bool holds = true;
  std::vector<Witness<Scalar>> witnesses;
  std::size_t violations = 0;  // total, including those beyond the cap
  std::size_t instances_checked = 0;
  std::size_t instances_vacuous = 0;
  std::string_view mode = mode_name<Scalar>();
};

struct CheckOptions {
  ToleranceConfig tol{};
  std::size_t witness_cap = 10;
  /// Support threshold for positivity tests and guards; eps_zero when unset.
  std::optional<double> support_eps;
  /// Exogenous attribute carriers, required by POS2.
  std::optional<std::vector<Mask>> attributes;
};

// Every check requires a complete SCC and throws IncompleteDatasetError
// otherwise.

template <ProbScalar Scalar>
AxiomReport<Scalar> check_iis(const Scc<Scalar>& scc, const CheckOptions& opts = {}, bool empty_variant = false);

template <ProbScalar Scalar>
AxiomReport<Scalar> check_relative_additivity(const Scc<Scalar>& scc, const CheckOptions& opts = {});

/// Throws WrongVariantError when the SCC does not allow empty choices.
template <ProbScalar Scalar>
AxiomReport<Scalar> check_additivity(const Scc<Scalar>& scc, const CheckOptions& opts = {});

/// kind in 1..4. Kind 2 throws MissingAttributesError without attributes.
template <ProbScalar Scalar>
AxiomReport<Scalar> check_positivity(const Scc<Scalar>& scc, int kind, const CheckOptions& opts = {});

/// Q^R by item. Needs every binary menu; throws MissingBinaryMenuError.
template <ProbScalar Scalar>
std::vector<Mask> derive_revealed_constraints(const Scc<Scalar>& scc, const CheckOptions& opts = {});

/// DISTINCT_Q, POS3, REL_ADD_1, REL_ADD_2 in that order.
template <ProbScalar Scalar>
std::vector<AxiomReport<Scalar>> check_rrm_suite(const Scc<Scalar>& scc, const CheckOptions& opts = {});

template <ProbScalar Scalar>
AxiomReport<Scalar> check_piis(const Scc<Scalar>& scc, const CheckOptions& opts = {});

/// Support of μ(·,X) in ascending mask order. Throws MenuAbsentError.
template <ProbScalar Scalar>
std::vector<Mask> derive_revealed_nests(const Scc<Scalar>& scc, const CheckOptions& opts = {});

/// PIIS, PARTITION, POS4 in that order.
template <ProbScalar Scalar>
std::vector<AxiomReport<Scalar>> check_nsc_structure(const Scc<Scalar>& scc, const CheckOptions& opts = {});

template <ProbScalar Scalar>
AxiomReport<Scalar> check_paf(const Scc<Scalar>& scc, const CheckOptions& opts = {});

template <ProbScalar Scalar>
AxiomReport<Scalar> check_full_support(const Scc<Scalar>& scc, const CheckOptions& opts = {});

/// kind is DET_FULL_CHOICE or SINGLETON.
template <ProbScalar Scalar>
AxiomReport<Scalar> check_special(const Scc<Scalar>& scc, AxiomId kind, const CheckOptions& opts = {});

template <ProbScalar Scalar>
AxiomReport<Scalar> run_axiom(const Scc<Scalar>& scc, AxiomId id, const CheckOptions& opts = {});

/// The battery behind `--axioms all`: every axiom applicable to the SCC
/// (POS2 only with attributes, IIS_O and ADDITIVITY only when empty choices
/// are allowed).
template <ProbScalar Scalar>
std::vector<AxiomId> default_battery(const Scc<Scalar>& scc, const CheckOptions& opts = {});

template <ProbScalar Scalar>
struct Reevaluation {
  Scalar lhs;
  Scalar rhs;
  bool violated;
};

/// Recomputes both sides of a witness from the SCC and decides it again.
template <ProbScalar Scalar>
Reevaluation<Scalar> reevaluate_witness(const Scc<Scalar>& scc, const Witness<Scalar>& w, const CheckOptions& opts = {});

// Consequences that must hold whenever their premises do.

struct PropertyReport {
  std::string name;
  bool holds = true;
  std::size_t checked = 0;
  std::size_t violations = 0;
  std::string first_violation;
};

/// μ(T,S) ≤ μ(T,S∖x) for all non-empty T ⊆ S∖x.
template <ProbScalar Scalar>
PropertyReport check_monotonicity(const Scc<Scalar>& scc, const CheckOptions& opts = {});

/// μ(T,S∖x) = 0 ⇒ μ(T,S)+μ(T∪x,S) = 0 and μ(T,S∖x) > 0 ⇒ μ(T,S)+μ(T∪x,S) > 0.
template <ProbScalar Scalar>
PropertyReport check_zero_propagation(const Scc<Scalar>& scc, const CheckOptions& opts = {});

/// Every IIS instance with all four probabilities positive holds.
template <ProbScalar Scalar>
PropertyReport check_positive_iis(const Scc<Scalar>& scc, const CheckOptions& opts = {});

}  // namespace choicelab
