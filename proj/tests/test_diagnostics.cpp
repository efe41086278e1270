#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "fqnm/diagnostics.hpp"
#include "fqnm/errors.hpp"
#include "support.hpp"

using namespace fqnm;
using fqnm::testing::burgers_setup;
using fqnm::testing::random_states;

TEST_CASE("mass, variation and distance examples") {
  const std::vector<State> q{0, 2, 0, 0};
  CHECK(total_mass(q) == 2);
  CHECK(total_mass(std::vector<State>(9, 0)) == 0);
  CHECK(total_variation(std::vector<State>{0, 2, 0}) == 4);
  CHECK(total_variation(std::vector<State>(5, 3)) == 0);
  CHECK(l1_distance(q, q) == 0);
  CHECK(l1_distance(q, std::vector<State>{0, 2, 3, 0}) == 3);
  const std::vector<double> u{1.0, 2.0};
  CHECK(relative_l2_error(u, u) == 0.0);
  CHECK(l1_error(std::vector<double>{1.0, 1.0}, std::vector<double>{0.0, 3.0}, 0.5) == 1.5);
  const State big = std::numeric_limits<State>::max();
  CHECK_THROWS_AS(total_mass(std::vector<State>{big, 1}), NumericalError);
}

TEST_CASE("check_monotone_step names the violated property") {
  CHECK_FALSE(check_monotone_step(std::vector<State>{0, 2, 0}, std::vector<State>{1, 1, 0}).has_value());
  CHECK(check_monotone_step(std::vector<State>{0, 2, 0}, std::vector<State>{1, 2, 0})->find("mass") !=
        std::string::npos);
  CHECK(check_monotone_step(std::vector<State>{0, 2, 0}, std::vector<State>{-1, 3, 0})->find("maximum") !=
        std::string::npos);
  CHECK(check_monotone_step(std::vector<State>{0, 1, 1, 2}, std::vector<State>{0, 2, 0, 2})->find("variation") !=
        std::string::npos);
}

TEST_CASE("consistency residual is zero for the nu = 1 shift") {
  const FluxSplit s(ScalarLaw::advection(1.0), 1.0);
  const SchemeParams p = make_params(0.1, 0.01, 0.01, 1.0);
  const auto maps = build_transfer_maps(s, p);
  std::mt19937_64 rng(1);
  const QuantisedField q(random_states(rng, 50, -100, 100), Resolution(0.1));
  for (const double r : consistency_residual(q, maps, s, p)) CHECK(r <= 1e-12);
}

TEST_CASE("consistency residual stays within 2 delta on random burgers states") {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> nu_dist(0.05, 1.0);
  double worst = 0.0;
  for (int k = 0; k < 2000; ++k) {
    const double delta = 0.01;
    const auto setup = burgers_setup(delta, -150, 150, nu_dist(rng));
    const QuantisedField q(random_states(rng, 32, -150, 150), Resolution(delta));
    const auto r = consistency_residual(q, setup.maps, setup.split, setup.params);
    worst = std::max(worst, *std::max_element(r.begin(), r.end()));
  }
  CHECK(worst <= 2 * 0.01);
  CHECK(worst > 0.01);  // the bound is not vacuous
}

TEST_CASE("level distribution examples") {
  const auto p = level_distribution(std::vector<State>{1, 1, 2, 2});
  CHECK(p.probability(1) == 0.5);
  CHECK(p.probability(2) == 0.5);
  CHECK(p.probability(3) == 0.0);
  CHECK(p.occupied_levels() == 2);
  const auto single = level_distribution(std::vector<State>(7, 4));
  CHECK(single.occupied_levels() == 1);
  CHECK(discrete_entropy(single) == 0.0);
  CHECK(effective_levels(single) == 1.0);
  CHECK(discrete_entropy(p) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
  CHECK(effective_levels(p) == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("probabilities sum to one and N_eff lies between 1 and the level count") {
  std::mt19937_64 rng(5);
  for (int k = 0; k < 300; ++k) {
    const auto q = random_states(rng, 1 + k % 97, -5, 5 + k % 11);
    const auto p = level_distribution(q);
    const auto probs = p.probabilities();
    CHECK(std::accumulate(probs.begin(), probs.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-14));
    const double n_eff = effective_levels(p);
    CHECK(n_eff >= 1.0 - 1e-12);
    CHECK(n_eff <= static_cast<double>(p.occupied_levels()) + 1e-9);
  }
}

TEST_CASE("level transition matrix example") {
  const std::vector<State> qn{1, 1, 2}, qn1{1, 2, 2};
  const auto m = level_transition_matrix(qn, qn1);
  CHECK(m.entry(1, 1) == 0.5);
  CHECK(m.entry(2, 1) == 0.5);
  CHECK(m.entry(1, 2) == 0.0);
  CHECK(m.entry(2, 2) == 1.0);
  CHECK(m.column_sum(1) == 1.0);
  CHECK(m.column_sum(2) == 1.0);
  CHECK(m.row_sum(1) == 0.5);
  CHECK(m.row_sum(2) == 1.5);
  CHECK(bistochastic_defect(m) == 0.5);
  const auto next = m.apply(level_distribution(qn));
  const auto target = level_distribution(qn1);
  for (const auto& [level, prob] : next) CHECK(prob == doctest::Approx(target.probability(level)));
  CHECK_THROWS_AS(level_transition_matrix(qn, std::vector<State>{1, 2}), ConfigError);
}

TEST_CASE("identity and permutation evolutions") {
  const std::vector<State> q{3, 1, 4, 1, 5};
  const auto id = level_transition_matrix(q, q);
  for (const auto& [level, c] : id.source_counts()) CHECK(id.entry(level, level) == 1.0);
  CHECK(bistochastic_defect(id) == 0.0);
  // relabel every level: a permutation matrix on the occupied set
  const std::vector<State> perm{4, 3, 5, 3, 1};
  CHECK(bistochastic_defect(level_transition_matrix(q, perm)) == 0.0);
}

TEST_CASE("p^{n+1} = M p^n along a burgers run") {
  const auto setup = burgers_setup(0.05, -30, 30, 0.5);
  std::mt19937_64 rng(17);
  QuantisedField q(random_states(rng, 64, -30, 30), Resolution(0.05));
  for (int n = 0; n < 40; ++n) {
    const QuantisedField next = step(q, setup.maps);
    const auto m = level_transition_matrix(q.states(), next.states());
    const auto mp = m.apply(level_distribution(q.states()));
    const auto target = level_distribution(next.states());
    for (const auto& [level, c] : target.counts()) {
      REQUIRE(mp.at(level) == doctest::Approx(target.probability(level)).epsilon(1e-14));
    }
    for (const auto& [source, c] : m.source_counts()) REQUIRE(m.column_sum(source) == doctest::Approx(1.0));
    q = next;
  }
}

TEST_CASE("entropy rate and doubly stochastic mixing") {
  CHECK(entropy_rate(0.7, 0.7, 0.1) == 0.0);
  CHECK(entropy_rate(1.0, 1.5, 0.25) == 2.0);
  // M = 0.7 I + 0.3 (cyclic shift) is doubly stochastic
  const std::vector<double> p{0.6, 0.3, 0.1};
  std::vector<double> mp(3);
  for (std::size_t i = 0; i < 3; ++i) mp[i] = 0.7 * p[i] + 0.3 * p[(i + 2) % 3];
  CHECK(entropy_rate(discrete_entropy(p), discrete_entropy(mp), 0.01) > 0.0);
  // a pure permutation leaves entropy unchanged
  const std::vector<double> rotated{p[2], p[0], p[1]};
  CHECK(discrete_entropy(rotated) == doctest::Approx(discrete_entropy(p)).epsilon(1e-15));
}

TEST_CASE("steepest descent and ascent cells") {
  const std::vector<double> u{0.0, 3.0, 1.0, -1.0, 0.0};
  CHECK(steepest_descent_cell(u, false) == 1);  // drops of 2 at cells 1 and 2; smallest index wins
  CHECK(steepest_ascent_cell(u, false) == 0);
  CHECK(steepest_descent_cell(std::vector<double>{0.0, 1.0, 2.0, 5.0}, true) == 3);  // wraps
}

TEST_CASE("transition width of sharp and smeared jumps") {
  std::vector<double> sharp(20, 1.0);
  for (std::size_t i = 10; i < 20; ++i) sharp[i] = 0.0;
  CHECK(transition_width(sharp, 9, 1.0, 0.0) == doctest::Approx(0.8));
  // a linear ramp over k cells has width 0.8 (k + 1)
  std::vector<double> ramp(40, 1.0);
  for (std::size_t i = 15; i < 40; ++i) ramp[i] = std::max(0.0, 1.0 - 0.25 * static_cast<double>(i - 14));
  CHECK(transition_width(ramp, 16, 1.0, 0.0) == doctest::Approx(3.2));
  CHECK_THROWS_AS(transition_width(std::vector<double>(20, 1.0), 9, 1.0, 0.0), CheckFailure);
}
