#pragma once

#include <string>
#include <vector>

#include "choicelab/axioms.hpp"
#include "choicelab/models.hpp"

namespace choicelab {

template <ProbScalar Scalar>
struct RecoveryResult {
  ModelTag model{};
  ModelSpec<Scalar> spec;
  bool round_trip_exact = false;
  std::string normalization_note;
};

/// Raised when a characterizing axiom fails; carries that axiom's report.
template <ProbScalar Scalar>
class PreconditionFailed : public Error {
 public:
  PreconditionFailed(ModelTag model, AxiomReport<Scalar> report);

  ModelTag model() const { return model_; }
  const AxiomReport<Scalar>& report() const { return report_; }

 private:
  ModelTag model_;
  AxiomReport<Scalar> report_;
};

// The empty-allowed variants are used when the SCC allows empty choices.
// Precondition axioms are gated with opts.tol (eps_eq in float mode).

template <ProbScalar Scalar>
RecoveryResult<Scalar> identify_logit(const Scc<Scalar>& scc, const CheckOptions& opts = {});

template <ProbScalar Scalar>
RecoveryResult<Scalar> identify_rcg(const Scc<Scalar>& scc, const CheckOptions& opts = {});

/// Endogenous attributes: one per collection chosen from X, weighted by μ(·,X).
template <ProbScalar Scalar>
RecoveryResult<Scalar> identify_eba(const Scc<Scalar>& scc, const CheckOptions& opts = {});

/// Throws InvalidParamsError for a one-item universe in the standard variant.
template <ProbScalar Scalar>
RecoveryResult<Scalar> identify_ic(const Scc<Scalar>& scc, const CheckOptions& opts = {});

template <ProbScalar Scalar>
RecoveryResult<Scalar> identify_rrm(const Scc<Scalar>& scc, const CheckOptions& opts = {});

template <ProbScalar Scalar>
RecoveryResult<Scalar> identify_nsc(const Scc<Scalar>& scc, const CheckOptions& opts = {});

/// Dispatch by tag. AR and nested logit have no recovery procedure and
/// throw InvalidParamsError.
template <ProbScalar Scalar>
RecoveryResult<Scalar> identify(const Scc<Scalar>& scc, ModelTag tag, const CheckOptions& opts = {});

/// Every model whose recovery succeeds with an exact round trip.
template <ProbScalar Scalar>
std::vector<RecoveryResult<Scalar>> identify_auto(const Scc<Scalar>& scc, const CheckOptions& opts = {});

/// Regenerates the SCC from the recovered parameters and compares every
/// menu: exact equality in exact mode, eps_eq in float mode.
template <ProbScalar Scalar>
bool round_trip_verify(const Scc<Scalar>& scc, const RecoveryResult<Scalar>& result, const ToleranceConfig& tol = {});

}  // namespace choicelab
