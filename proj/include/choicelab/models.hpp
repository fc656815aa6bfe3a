#pragma once

#include <map>
#include <string_view>
#include <variant>
#include <vector>

#include "choicelab/core.hpp"

namespace choicelab {

enum class ModelTag { Logit, Rcg, Ic, Eba, Ar, Rrm, Nsc, NestedLogit };

/// Standard models choose a non-empty collection; EmptyAllowed is the
/// variant admitting the empty collection (Logit, RCG and IC only).
enum class Variant { Standard, EmptyAllowed };

std::string_view to_string(ModelTag tag);
/// Accepts "logit", "rcg", "ic", "eba", "ar", "rrm", "nsc", "nl".
ModelTag parse_model_tag(std::string_view text);
bool supports_empty_variant(ModelTag tag);

/// π(T) for every non-empty T ⊆ X; pi_empty is π(∅), needed only for the
/// empty-allowed variant.
template <ProbScalar Scalar>
struct LogitParams {
  std::map<Mask, Scalar> pi;
  std::optional<Scalar> pi_empty;

  friend bool operator==(const LogitParams&, const LogitParams&) = default;
};

/// Category distribution m(C). The empty-allowed variant may carry m(∅).
template <ProbScalar Scalar>
struct RcgParams {
  std::map<Mask, Scalar> m;

  friend bool operator==(const RcgParams&, const RcgParams&) = default;
};

template <ProbScalar Scalar>
struct IcParams {
  std::vector<Scalar> gamma;  // indexed by item

  friend bool operator==(const IcParams&, const IcParams&) = default;
};

template <ProbScalar Scalar>
struct Attribute {
  Scalar weight;
  Mask carrier;

  friend bool operator==(const Attribute&, const Attribute&) = default;
};

template <ProbScalar Scalar>
struct EbaParams {
  std::vector<Attribute<Scalar>> attributes;

  friend bool operator==(const EbaParams&, const EbaParams&) = default;
};

template <ProbScalar Scalar>
struct ArAttribute {
  Scalar theta;
  Mask carrier;
  std::vector<unsigned long> eta;  // indexed by item; zero off the carrier

  friend bool operator==(const ArAttribute&, const ArAttribute&) = default;
};

template <ProbScalar Scalar>
struct ArParams {
  std::vector<ArAttribute<Scalar>> attributes;

  friend bool operator==(const ArParams&, const ArParams&) = default;
};

template <ProbScalar Scalar>
struct RrmParams {
  std::vector<Scalar> salience;  // s_x by item
  std::vector<Mask> constraint;  // Q(x) by item

  friend bool operator==(const RrmParams&, const RrmParams&) = default;
};

/// σ is stored extensionally and only read on realized intersections N_i ∩ S.
template <ProbScalar Scalar>
struct NscParams {
  std::vector<Mask> nests;
  std::map<Mask, Scalar> sigma;

  friend bool operator==(const NscParams&, const NscParams&) = default;
};

/// σ(N_i ∩ S) = (Σ_{x ∈ N_i ∩ S} v(x))^{η_i}.
template <ProbScalar Scalar>
struct NestedLogitParams {
  std::vector<Mask> nests;
  std::vector<Scalar> v;    // by item
  std::vector<Scalar> eta;  // by nest

  friend bool operator==(const NestedLogitParams&, const NestedLogitParams&) = default;
};

template <ProbScalar Scalar>
using ModelParams = std::variant<LogitParams<Scalar>, RcgParams<Scalar>, IcParams<Scalar>, EbaParams<Scalar>,
                                 ArParams<Scalar>, RrmParams<Scalar>, NscParams<Scalar>, NestedLogitParams<Scalar>>;

template <ProbScalar Scalar>
struct ModelSpec {
  ModelParams<Scalar> params;
  Variant variant = Variant::Standard;

  ModelTag tag() const { return static_cast<ModelTag>(params.index()); }

  friend bool operator==(const ModelSpec&, const ModelSpec&) = default;
};

/// Throws InvalidParamsError (or WrongVariantError) when the bundle breaks
/// its model's invariants for the given universe.
template <ProbScalar Scalar>
void validate_params(const ModelSpec<Scalar>& spec, const Universe& universe);

// Pointwise evaluators. All throw ShapeError when T ⊄ S, and when T is empty
// for a standard model.

template <ProbScalar Scalar>
Scalar eval_logit(const LogitParams<Scalar>& params, Mask set, Mask menu, Variant variant = Variant::Standard);

template <ProbScalar Scalar>
Scalar eval_rcg(const RcgParams<Scalar>& params, Mask set, Mask menu, Variant variant = Variant::Standard);

template <ProbScalar Scalar>
Scalar eval_ic(const IcParams<Scalar>& params, Mask set, Mask menu, Variant variant = Variant::Standard);

template <ProbScalar Scalar>
Scalar eval_eba(const EbaParams<Scalar>& params, Mask set, Mask menu);

template <ProbScalar Scalar>
Scalar eval_ar_first_stage(const ArParams<Scalar>& params, Mask set, Mask menu);

/// Item-level attribute rule: the direct p_AR(x,S) together with the
/// per-collection split T ↦ (μ_AR(T,S), ρ_S(x|T)).
template <ProbScalar Scalar>
struct ArItemResult {
  Scalar p;
  std::map<Mask, std::pair<Scalar, Scalar>> decomposition;
};

template <ProbScalar Scalar>
ArItemResult<Scalar> eval_ar_item(const ArParams<Scalar>& params, int item, Mask menu);

template <ProbScalar Scalar>
Scalar eval_rrm(const RrmParams<Scalar>& params, Mask set, Mask menu);

template <ProbScalar Scalar>
Scalar eval_nsc(const NscParams<Scalar>& params, Mask set, Mask menu);

/// Throws ModeError in exact mode when some η_i is not a positive integer.
template <ProbScalar Scalar>
Scalar eval_nested_logit(const NestedLogitParams<Scalar>& params, Mask set, Mask menu);

template <ProbScalar Scalar>
Scalar evaluate(const ModelSpec<Scalar>& spec, Mask set, Mask menu);

/// σ induced by nested-logit parameters on every non-empty subset of every
/// nest. Throws ModeError in exact mode for non-integer η.
template <ProbScalar Scalar>
NscParams<Scalar> induced_nsc(const NestedLogitParams<Scalar>& params);

/// True when exact evaluation is impossible (some η is not an integer).
bool nested_logit_requires_float(const NestedLogitParams<Rational>& params);

template <ProbScalar Scalar>
ModelSpec<double> to_float(const ModelSpec<Scalar>& spec);

/// Complete SCC with one stored row per positive-probability (T,S).
template <ProbScalar Scalar>
Scc<Scalar> generate_scc(const ModelSpec<Scalar>& spec, const Universe& universe);

}  // namespace choicelab
