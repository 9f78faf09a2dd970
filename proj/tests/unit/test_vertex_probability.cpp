#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "iotmm/vertex_probability.hpp"

using namespace iotmm;
using Catch::Matchers::WithinAbs;

TEST_CASE("conditional probability") {
  CHECK(conditional(0.3, 0.3) == 1.0);
  CHECK(conditional(0.0, 0.5) == 0.0);
  CHECK_THAT(conditional(0.18, 0.6), WithinAbs(0.3, 1e-15));
}

TEST_CASE("conditional error cases") {
  CHECK_THROWS_MATCHES(conditional(0.0, 0.0), Error, Catch::Matchers::Predicate<Error>([](
                           const Error& e) { return e.code() == ErrorCode::zero_marginal; }));
  CHECK_THROWS_MATCHES(conditional(0.6, 0.5), Error, Catch::Matchers::Predicate<Error>([](
                           const Error& e) { return e.code() == ErrorCode::inconsistent_joint; }));
  CHECK_THROWS_AS(conditional(1.5, 1.0), Error);  // not a probability
}

TEST_CASE("conditional recovers the factor: conditional(x*m, m) == x") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const double x = unit(rng);
    const double m = std::max(unit(rng), 1e-6);
    const double joint = x * m;  // joint <= m by construction
    CHECK_THAT(conditional(joint, m), WithinAbs(x, 1e-12));
  }
}

TEST_CASE("total probability mixes the conditionals") {
  CHECK(total_probability(0.9, 0.625, 0.1, 0.375) == 0.6);
  CHECK(total_probability(0.7, 1.0, 0.2, 0.0) == 0.7);
  CHECK(total_probability(0.5, 0.5, 0.5, 0.5) == 0.5);
}

TEST_CASE("total probability rejects a broken complement") {
  CHECK_THROWS_MATCHES(
      total_probability(0.9, 0.5, 0.1, 0.4), Error,
      Catch::Matchers::Predicate<Error>(
          [](const Error& e) { return e.code() == ErrorCode::complement_violation; }));
  // within tolerance is fine
  CHECK_NOTHROW(total_probability(0.9, 0.5 + 4e-10, 0.1, 0.5));
}

TEST_CASE("total probability stays within the conditionals") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < 5000; ++i) {
    const double a = unit(rng);
    const double b = unit(rng);
    const double t = unit(rng);
    const double mixed = total_probability(a, 1.0 - t, b, t);
    CHECK(mixed >= std::min(a, b));
    CHECK(mixed <= std::max(a, b));
  }
}

TEST_CASE("inversion reproduces the worked vertical probability") {
  CHECK_THAT(invert_vertical_probability(0.6, 0.9, 0.1), WithinAbs(0.375, 1e-12));
  CHECK(invert_vertical_probability(0.9, 0.9, 0.1) == 0.0);
  CHECK(invert_vertical_probability(0.1, 0.9, 0.1) == 1.0);
}

TEST_CASE("inversion error cases") {
  CHECK_THROWS_MATCHES(
      invert_vertical_probability(0.5, 0.4, 0.4), Error,
      Catch::Matchers::Predicate<Error>(
          [](const Error& e) { return e.code() == ErrorCode::degenerate_conditionals; }));
  CHECK_THROWS_MATCHES(invert_vertical_probability(0.95, 0.9, 0.1), Error,
                       Catch::Matchers::Predicate<Error>(
                           [](const Error& e) { return e.code() == ErrorCode::out_of_range; }));
}

TEST_CASE("round trip: invert(total(a, 1-t, b, t)) == t") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  int tested = 0;
  while (tested < 10000) {
    const double a = unit(rng);
    const double b = unit(rng);
    if (std::fabs(a - b) < 1e-3) continue;  // keep the inversion well conditioned
    const double t = unit(rng);
    const double p_tx = total_probability(a, 1.0 - t, b, t);
    const double recovered = invert_vertical_probability(p_tx, a, b);
    REQUIRE_THAT(recovered, WithinAbs(t, 1e-9));
    ++tested;
  }
}

TEST_CASE("state conditioned probabilities") {
  CHECK(state_conditioned(0.2, 0.4) == 0.5);
  CHECK(state_conditioned(0.0, 0.3) == 0.0);
  // per-state table chosen to produce 0.3 / 0.2 / 0.1 for states A / B / C
  CHECK(state_conditioned(0.15, 0.5) == 0.3);
  CHECK(state_conditioned(0.1, 0.5) == 0.2);
  CHECK(state_conditioned(0.05, 0.5) == 0.1);
}

TEST_CASE("evaluate_case derives the vertical probability from p_tx") {
  VertexProbabilityCase c;
  c.p_tx_given_y = 0.9;
  c.p_tx_given_t = 0.1;
  c.p_tx = 0.6;
  const auto evaluation = evaluate_case(c);
  CHECK(evaluation.p_tx.derivation == Derivation::input);
  CHECK(evaluation.p_t.derivation == Derivation::derived);
  CHECK_THAT(evaluation.p_t.value, WithinAbs(0.375, 1e-12));
  CHECK_THAT(evaluation.p_y.value, WithinAbs(0.625, 1e-12));
  CHECK_FALSE(evaluation.consistency_checked);
}

TEST_CASE("evaluate_case derives p_tx from the vertical probability") {
  VertexProbabilityCase c;
  c.p_tx_given_y = 0.9;
  c.p_tx_given_t = 0.1;
  c.p_t = 0.375;
  const auto evaluation = evaluate_case(c);
  CHECK(evaluation.p_t.derivation == Derivation::input);
  CHECK(evaluation.p_tx.derivation == Derivation::derived);
  CHECK_THAT(evaluation.p_tx.value, WithinAbs(0.6, 1e-12));
}

TEST_CASE("evaluate_case accepts a consistent fully specified case") {
  VertexProbabilityCase c;
  c.p_tx_given_y = 0.9;
  c.p_tx_given_t = 0.1;
  c.p_t = 0.375;
  c.p_tx = 0.6;
  const auto evaluation = evaluate_case(c);
  CHECK(evaluation.p_t.derivation == Derivation::input);
  CHECK(evaluation.p_tx.derivation == Derivation::input);
  CHECK(evaluation.consistency_checked);
}

TEST_CASE("evaluate_case rejects an inconsistent pair") {
  VertexProbabilityCase c;
  c.p_tx_given_y = 0.9;
  c.p_tx_given_t = 0.1;
  c.p_t = 0.375;
  c.p_tx = 0.7;
  CHECK_THROWS_MATCHES(evaluate_case(c), Error,
                       Catch::Matchers::Predicate<Error>([](const Error& e) {
                         return e.code() == ErrorCode::validation_error;
                       }));
}

TEST_CASE("evaluate_case requires p_tx or p_t") {
  VertexProbabilityCase c;
  c.p_tx_given_y = 0.9;
  c.p_tx_given_t = 0.1;
  CHECK_THROWS_MATCHES(evaluate_case(c), Error,
                       Catch::Matchers::Predicate<Error>([](const Error& e) {
                         return e.code() == ErrorCode::underdetermined;
                       }));
}

TEST_CASE("evaluate_case evaluates every state and names a failing one") {
  VertexProbabilityCase c;
  c.p_tx_given_y = 0.9;
  c.p_tx_given_t = 0.1;
  c.p_t = 0.375;
  c.states["A"] = {0.15, 0.5};
  c.states["B"] = {0.1, 0.5};
  c.states["C"] = {0.05, 0.5};
  const auto evaluation = evaluate_case(c);
  REQUIRE(evaluation.states.size() == 3);
  CHECK(evaluation.states.at("A").p_tx_given_t_and_state == 0.3);
  CHECK(evaluation.states.at("B").p_tx_given_t_and_state == 0.2);
  CHECK(evaluation.states.at("C").p_tx_given_t_and_state == 0.1);

  c.states["D"] = {0.2, 0.0};  // zero marginal
  try {
    evaluate_case(c);
    FAIL("expected a ZeroMarginal error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::zero_marginal);
    CHECK(std::string(e.what()).find("states[D]") != std::string::npos);
  }
}

TEST_CASE("evaluate_case is deterministic and insensitive to state insertion order") {
  VertexProbabilityCase forward_order;
  forward_order.p_tx_given_y = 0.9;
  forward_order.p_tx_given_t = 0.1;
  forward_order.p_tx = 0.6;
  forward_order.states["A"] = {0.15, 0.5};
  forward_order.states["B"] = {0.1, 0.5};

  VertexProbabilityCase reverse_order;
  reverse_order.p_tx_given_y = 0.9;
  reverse_order.p_tx_given_t = 0.1;
  reverse_order.p_tx = 0.6;
  reverse_order.states["B"] = {0.1, 0.5};
  reverse_order.states["A"] = {0.15, 0.5};

  CHECK(evaluate_case(forward_order) == evaluate_case(reverse_order));
  CHECK(evaluate_case(forward_order) == evaluate_case(forward_order));
}

TEST_CASE("validate_case flags out-of-range probabilities with field names") {
  VertexProbabilityCase c;
  c.p_tx_given_y = 1.2;
  c.p_tx_given_t = 0.1;
  c.p_tx = 0.6;
  c.states["A"] = {-0.1, 0.5};
  const auto violations = validate_case(c);
  REQUIRE(violations.size() == 2);
  CHECK(violations[0].find("p_tx_given_y") != std::string::npos);
  CHECK(violations[1].find("states[A].p_joint_given_state") != std::string::npos);
}
