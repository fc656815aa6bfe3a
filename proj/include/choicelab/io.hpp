#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include <json.hpp>

#include "choicelab/axioms.hpp"
#include "choicelab/classify.hpp"
#include "choicelab/fuzz.hpp"
#include "choicelab/identify.hpp"
#include "choicelab/models.hpp"

namespace choicelab {

using Json = nlohmann::json;

using AnyScc = std::variant<ExactScc, FloatScc>;
using AnySpec = std::variant<ModelSpec<Rational>, ModelSpec<double>>;

// SCC documents: {"items", "allows_empty", "menus": [{"menu", "rows": [{"set", "p"}]}]}.
// Exact iff every "p" is "num/den"; all-decimal documents load in float
// mode; mixing the two is a ParseError.

/// Throws ParseError (schema, labels, duplicates, mixed formats) and
/// ShapeError; then validate_scc must come back clean or a ParseError
/// listing the violations is raised.
AnyScc parse_scc(const Json& doc);
AnyScc parse_scc_text(std::string_view text);

/// Canonical document: menus and rows in mask order, zero rows omitted.
template <ProbScalar Scalar>
Json scc_to_json(const Scc<Scalar>& scc);

// Parameter files: {"model", "items", "variant": "standard"|"empty", ...}
// with model-specific fields, probabilities again as strings:
//   logit  "pi": [{"set", "w"}], "pi_empty": w
//   rcg    "m": [{"set", "w"}]
//   ic     "gamma": {label: g}
//   eba    "attributes": [{"carrier", "weight"}]
//   ar     "attributes": [{"carrier", "theta", "eta": {label: int}}]
//   rrm    "salience": {label: s}, "constraints": {label: [labels]}
//   nsc    "nests": [[labels]], "sigma": [{"set", "w"}]
//   nl     "nests", "v": {label: v}, "eta": [e per nest]

struct ParamsDocument {
  Universe universe;
  AnySpec spec;
};

/// `model` and `variant` override the document (and must agree with it when
/// both are present). Validates the bundle.
ParamsDocument parse_params(const Json& doc, std::optional<ModelTag> model = std::nullopt,
                            std::optional<Variant> variant = std::nullopt);

template <ProbScalar Scalar>
Json params_to_json(const ModelSpec<Scalar>& spec, const Universe& universe);

template <ProbScalar Scalar>
Json witness_to_json(const Witness<Scalar>& w, const Universe& universe);

/// {"axiom", "holds", "witnesses", "instances_checked", "instances_vacuous", "mode"}
/// plus "violations".
template <ProbScalar Scalar>
Json report_to_json(const AxiomReport<Scalar>& report, const Universe& universe);

template <ProbScalar Scalar>
Json recovery_to_json(const RecoveryResult<Scalar>& result, const Universe& universe);

Json classification_to_json(const ClassificationReport& report);

/// Failures carry their bundle as a params document for replay with `gen`.
Json fuzz_summary_to_json(const FuzzSummary& summary);

/// Counts CSV `menu;set;count`; labels comma-separated, the empty set as an
/// empty field. The universe is the sorted set of labels that appear.
struct CountsTable {
  Universe universe;
  bool allows_empty = false;  // some row names the empty set
  std::map<Mask, std::map<Mask, std::uint64_t>> counts;  // menu -> set -> count
};

/// Throws ParseError on bad headers, counts, or a set outside its menu.
CountsTable parse_counts(std::string_view csv);
std::string counts_to_csv(const CountsTable& table);

/// μ̂(T,S) = count(T,S) / Σ count(·,S). Throws ParseError for a menu whose
/// counts are all zero.
FloatScc estimate_from_counts(const CountsTable& table);

/// `draws` multinomial draws per menu from μ, deterministic in the seed.
template <ProbScalar Scalar>
CountsTable simulate_counts(const Scc<Scalar>& scc, std::uint64_t draws, std::uint64_t seed);

/// Pretty JSON with sorted keys and a trailing newline.
std::string dump(const Json& j);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);

}  // namespace choicelab
