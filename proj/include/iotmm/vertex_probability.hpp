#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "iotmm/errors.hpp"
#include "iotmm/format.hpp"
#include "iotmm/inventory.hpp"

namespace iotmm {

// Absolute tolerance for the complement constraint P(Y) + P(T) = 1 and for
// the consistency check between a stated p_tx and a stated p_t. Far below any
// meaningful risk precision; anything beyond it is genuine inconsistency.
inline constexpr double kComplementTolerance = 1e-9;

namespace detail {

inline void require_probability(double p, const char* name) {
  if (!valid_probability(p)) {
    raise(ErrorCode::validation_error,
          std::string(name) + " must be a probability in [0, 1], got " + format_full(p));
  }
}

}  // namespace detail

// P(A|B) from the joint P(A & B) and the marginal P(B).
inline Probability conditional(Probability joint, Probability marginal) {
  detail::require_probability(joint, "joint");
  detail::require_probability(marginal, "marginal");
  if (marginal == 0.0) {
    raise(ErrorCode::zero_marginal, "conditional probability undefined: the marginal is zero");
  }
  if (joint > marginal) {
    raise(ErrorCode::inconsistent_joint, "joint probability " + format_full(joint) +
                                             " exceeds its marginal " + format_full(marginal));
  }
  return joint / marginal;  // <= 1 since joint <= marginal
}

// Mixture P(Tx) = P(Tx|Y) P(Y) + P(Tx|T) P(T); P(Y) and P(T) must be
// complementary. The result is clamped to the interval spanned by the two
// conditionals, which the exact mixture always lies in.
inline Probability total_probability(Probability p_tx_given_y, Probability p_y,
                                     Probability p_tx_given_t, Probability p_t) {
  detail::require_probability(p_tx_given_y, "p_tx_given_y");
  detail::require_probability(p_y, "p_y");
  detail::require_probability(p_tx_given_t, "p_tx_given_t");
  detail::require_probability(p_t, "p_t");
  if (std::fabs((p_y + p_t) - 1.0) > kComplementTolerance) {
    raise(ErrorCode::complement_violation,
          "p_y + p_t = " + format_full(p_y + p_t) + " must equal 1 within 1e-9");
  }
  const Probability mixed = p_tx_given_y * p_y + p_tx_given_t * p_t;
  const Probability lo = std::min(p_tx_given_y, p_tx_given_t);
  const Probability hi = std::max(p_tx_given_y, p_tx_given_t);
  return std::clamp(mixed, lo, hi);
}

// Solves the mixture for the vertical probability:
// P(T) = [P(Tx) - P(Tx|Y)] / [P(Tx|T) - P(Tx|Y)].
// When p_tx exactly equals one conditional the boundary value is returned;
// the limit is well defined there.
inline Probability invert_vertical_probability(Probability p_tx, Probability p_tx_given_y,
                                               Probability p_tx_given_t) {
  detail::require_probability(p_tx, "p_tx");
  detail::require_probability(p_tx_given_y, "p_tx_given_y");
  detail::require_probability(p_tx_given_t, "p_tx_given_t");
  if (p_tx_given_t == p_tx_given_y) {
    raise(ErrorCode::degenerate_conditionals,
          "the conditionals are equal (" + format_full(p_tx_given_y) +
              "); the vertical probability is undetermined");
  }
  const Probability lo = std::min(p_tx_given_y, p_tx_given_t);
  const Probability hi = std::max(p_tx_given_y, p_tx_given_t);
  if (p_tx < lo || p_tx > hi) {
    raise(ErrorCode::out_of_range, "p_tx = " + format_full(p_tx) + " lies outside [" +
                                       format_full(lo) + ", " + format_full(hi) +
                                       "] spanned by the conditionals");
  }
  if (p_tx == p_tx_given_y) return 0.0;
  if (p_tx == p_tx_given_t) return 1.0;
  const Probability t = (p_tx - p_tx_given_y) / (p_tx_given_t - p_tx_given_y);
  return std::clamp(t, 0.0, 1.0);
}

// P(Tx|T, C = state) from the state-conditioned joint and marginal.
inline Probability state_conditioned(Probability p_joint_given_state,
                                     Probability p_t_given_state) {
  return conditional(p_joint_given_state, p_t_given_state);
}

// Type invariants of a VertexProbabilityCase, including the mutual
// consistency of p_tx and p_t when both are stated.
inline std::vector<std::string> validate_case(const VertexProbabilityCase& c) {
  std::vector<std::string> violations;
  auto check = [&](double p, const std::string& field) {
    if (!detail::valid_probability(p)) {
      violations.push_back(field + " must be a probability in [0, 1]");
      return false;
    }
    return true;
  };
  bool base_ok = check(c.p_tx_given_y, "p_tx_given_y");
  base_ok &= check(c.p_tx_given_t, "p_tx_given_t");
  if (c.p_tx) base_ok &= check(*c.p_tx, "p_tx");
  if (c.p_t) base_ok &= check(*c.p_t, "p_t");
  for (const auto& [label, sp] : c.states) {
    check(sp.p_joint_given_state, "states[" + label + "].p_joint_given_state");
    check(sp.p_t_given_state, "states[" + label + "].p_t_given_state");
  }
  if (base_ok && c.p_tx && c.p_t) {
    const Probability forward =
        total_probability(c.p_tx_given_y, 1.0 - *c.p_t, c.p_tx_given_t, *c.p_t);
    if (std::fabs(forward - *c.p_tx) > kComplementTolerance) {
      violations.push_back("p_tx and p_t are mutually inconsistent: p_t implies p_tx = " +
                           format_full(forward) + " but p_tx = " + format_full(*c.p_tx));
    }
  }
  return violations;
}

enum class Derivation { input, derived };

struct EvaluatedQuantity {
  double value = 0.0;
  Derivation derivation = Derivation::input;

  bool operator==(const EvaluatedQuantity&) const = default;
};

struct EvaluatedState {
  Probability p_joint_given_state = 0.0;
  Probability p_t_given_state = 0.0;
  Probability p_tx_given_t_and_state = 0.0;  // derived

  bool operator==(const EvaluatedState&) const = default;
};

// Everything derivable from a case, with each quantity marked input/derived.
struct CaseEvaluation {
  EvaluatedQuantity p_tx_given_y;
  EvaluatedQuantity p_tx_given_t;
  EvaluatedQuantity p_tx;
  EvaluatedQuantity p_t;
  EvaluatedQuantity p_y;  // always derived via the complement
  std::map<std::string, EvaluatedState> states;
  bool consistency_checked = false;  // both p_tx and p_t were inputs

  bool operator==(const CaseEvaluation&) const = default;
};

// Fills in every probability derivable from the given fields. Deterministic
// and independent of the state map's insertion order.
inline CaseEvaluation evaluate_case(const VertexProbabilityCase& c) {
  if (auto violations = validate_case(c); !violations.empty()) {
    std::string joined;
    for (const auto& v : violations) {
      if (!joined.empty()) joined += "; ";
      joined += v;
    }
    raise(ErrorCode::validation_error, joined);
  }
  if (!c.p_tx && !c.p_t) {
    raise(ErrorCode::underdetermined,
          "neither p_tx nor p_t is given; the case cannot be solved");
  }

  CaseEvaluation out;
  out.p_tx_given_y = {c.p_tx_given_y, Derivation::input};
  out.p_tx_given_t = {c.p_tx_given_t, Derivation::input};

  if (c.p_t && c.p_tx) {
    out.p_t = {*c.p_t, Derivation::input};
    out.p_tx = {*c.p_tx, Derivation::input};
    out.consistency_checked = true;  // validate_case already enforced agreement
  } else if (c.p_t) {
    out.p_t = {*c.p_t, Derivation::input};
    try {
      out.p_tx = {total_probability(c.p_tx_given_y, 1.0 - *c.p_t, c.p_tx_given_t, *c.p_t),
                  Derivation::derived};
    } catch (const Error& e) {
      raise(e.code(), std::string("deriving p_tx: ") + e.what());
    }
  } else {
    out.p_tx = {*c.p_tx, Derivation::input};
    try {
      out.p_t = {invert_vertical_probability(*c.p_tx, c.p_tx_given_y, c.p_tx_given_t),
                 Derivation::derived};
    } catch (const Error& e) {
      raise(e.code(), std::string("deriving p_t: ") + e.what());
    }
  }
  out.p_y = {1.0 - out.p_t.value, Derivation::derived};

  for (const auto& [label, sp] : c.states) {
    try {
      out.states[label] = {sp.p_joint_given_state, sp.p_t_given_state,
                           state_conditioned(sp.p_joint_given_state, sp.p_t_given_state)};
    } catch (const Error& e) {
      raise(e.code(), "states[" + label + "]: " + e.what());
    }
  }
  return out;
}

}  // namespace iotmm
