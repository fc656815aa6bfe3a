#pragma once

#include <doctest.h>

#include <string>

#include "choicelab/core.hpp"
#include "choicelab/fuzz.hpp"
#include "choicelab/models.hpp"

namespace testing {

using choicelab::Mask;
using choicelab::Rational;
using choicelab::Universe;

inline Rational q(const char* text) { return choicelab::parse_rational(text); }

inline Universe letters(int n) { return choicelab::letter_universe(n); }

inline Mask m(const Universe& u, const char* labels) { return u.parse_mask(labels); }

template <class P>
choicelab::ModelSpec<Rational> spec(P params, choicelab::Variant v = choicelab::Variant::Standard) {
  return choicelab::ModelSpec<Rational>{std::move(params), v};
}

// Copy of an SCC with one menu's row replaced.
template <choicelab::ProbScalar S>
choicelab::Scc<S> with_row(const choicelab::Scc<S>& base, Mask menu, const typename choicelab::Scc<S>::Row& row) {
  choicelab::Scc<S> out(base.universe(), base.allows_empty());
  for (Mask s : base.menus()) {
    out.add_menu(s);
    const auto& r = s == menu ? row : base.row(s);
    for (const auto& [t, p] : r) out.set(t, s, p);
  }
  return out;
}

}  // namespace testing
