#pragma once

// Brute-force reference computations. Each one enumerates the latent draw of
// its model directly instead of using a closed form, so agreement with the
// library is evidence rather than a restatement.

#include <functional>
#include <vector>

#include "choicelab/core.hpp"
#include "choicelab/models.hpp"

namespace oracle {

using choicelab::Mask;
using choicelab::Rational;

using Mu = std::function<Rational(Mask, Mask)>;

inline std::vector<Mask> subsets(Mask s) {
  std::vector<Mask> out;
  for (std::uint32_t b = 0; b <= s.bits(); ++b) {
    if ((b & ~s.bits()) == 0) out.emplace_back(b);
  }
  return out;
}

inline std::vector<int> items(Mask s) {
  std::vector<int> out;
  for (int i = 0; i < 32; ++i) {
    if (s.contains(i)) out.push_back(i);
  }
  return out;
}

// Independent inclusion of every item, conditioned on a non-empty draw in the
// standard variant.
inline Mu ic(std::vector<Rational> gamma, bool empty_variant) {
  return [gamma, empty_variant](Mask t, Mask s) {
    Rational hit(0), nonempty(0);
    for (Mask d : subsets(s)) {
      Rational w(1);
      for (int i : items(s)) w *= d.contains(i) ? gamma[i] : Rational(1) - gamma[i];
      if (d == t) hit += w;
      if (!d.empty()) nonempty += w;
    }
    return empty_variant ? hit : Rational(hit / nonempty);
  };
}

// A category is drawn; standard variant redraws until it meets the menu.
inline Mu rcg(std::vector<std::pair<Mask, Rational>> m, bool empty_variant) {
  return [m, empty_variant](Mask t, Mask s) {
    Rational hit(0), live(0);
    for (const auto& [c, w] : m) {
      const Mask seen(c.bits() & s.bits());
      if (seen == t) hit += w;
      if (!seen.empty()) live += w;
    }
    return empty_variant ? hit : Rational(hit / live);
  };
}

inline Mu logit(std::map<Mask, Rational> pi, std::optional<Rational> pi_empty) {
  return [pi, pi_empty](Mask t, Mask s) {
    Rational total(0);
    for (Mask u : subsets(s)) {
      if (u.empty()) {
        if (pi_empty) total += *pi_empty;
      } else {
        total += pi.at(u);
      }
    }
    return Rational((t.empty() ? *pi_empty : pi.at(t)) / total);
  };
}

// Reference point x drawn with probability ∝ s_x; the choice is Q(x) ∩ S.
inline Mu rrm(std::vector<Rational> sal, std::vector<Mask> q) {
  return [sal, q](Mask t, Mask s) {
    Rational hit(0), total(0);
    for (int x : items(s)) {
      total += sal[x];
      if (Mask(q[x].bits() & s.bits()) == t) hit += sal[x];
    }
    return Rational(hit / total);
  };
}

inline Mu nsc(std::vector<Mask> nests, std::map<Mask, Rational> sigma) {
  return [nests, sigma](Mask t, Mask s) {
    Rational hit(0), total(0);
    for (Mask n : nests) {
      const Mask part(n.bits() & s.bits());
      if (part.empty()) continue;
      total += sigma.at(part);
      if (part == t) hit += sigma.at(part);
    }
    return Rational(hit / total);
  };
}

// Attribute i drawn with probability ∝ θ_i among attributes meeting S, then
// an item of B_i ∩ S drawn with probability ∝ η^i.
inline Rational ar_item(const choicelab::ArParams<Rational>& p, int x, Mask s) {
  Rational live(0), out(0);
  for (const auto& a : p.attributes) {
    if ((a.carrier.bits() & s.bits()) != 0) live += a.theta;
  }
  for (const auto& a : p.attributes) {
    const Mask part(a.carrier.bits() & s.bits());
    if (part.empty() || !part.contains(x)) continue;
    unsigned long eta_total = 0;
    for (int y : items(part)) eta_total += a.eta[y];
    out += a.theta / live * Rational(a.eta[x], eta_total);
  }
  out.canonicalize();
  return out;
}

// ---------------------------------------------------------------- axioms

// IIS by division over every pair of menus and collections with four
// positive probabilities.
template <class Get>
bool iis_holds(Get mu, Mask x, bool allow_empty) {
  for (Mask s : subsets(x)) {
    if (s.empty()) continue;
    for (Mask s2 : subsets(x)) {
      if (s2.empty()) continue;
      const Mask common(s.bits() & s2.bits());
      for (Mask t : subsets(common)) {
        if (t.empty() && !allow_empty) continue;
        for (Mask t2 : subsets(common)) {
          if (t2.empty() && !allow_empty) continue;
          const Rational a = mu(t, s), b = mu(t2, s), c = mu(t, s2), d = mu(t2, s2);
          if (a > 0 && b > 0 && c > 0 && d > 0 && Rational(a / b) != Rational(c / d)) return false;
        }
      }
    }
  }
  return true;
}

template <class Get>
bool rel_add_holds(Get mu, Mask x) {
  for (Mask s : subsets(x)) {
    for (int i : items(s)) {
      const Mask rest = s.without(i);
      for (Mask t : subsets(rest)) {
        if (t.empty()) continue;
        for (Mask t2 : subsets(rest)) {
          if (t2.empty()) continue;
          const Rational lhs = mu(t, rest) * (mu(t2, s) + mu(t2.with(i), s));
          const Rational rhs = mu(t2, rest) * (mu(t, s) + mu(t.with(i), s));
          if (lhs != rhs) return false;
        }
      }
    }
  }
  return true;
}

}  // namespace oracle
