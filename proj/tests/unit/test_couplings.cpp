#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include <nlohmann/json.hpp>

#include "csg/couplings.hpp"
#include "csg/errors.hpp"
#include "oracles.hpp"

using namespace csg;
using namespace csg::testing;
using cplx = std::complex<double>;

namespace {

Couplings dust() { return Couplings::explicit_list({{1.0, 0.0}}); }
Couplings forest() {
  return Couplings::explicit_list({{1.0, 0.0}, {1.0, 0.0}});
}

} // namespace

TEST_CASE("coupling values per family") {
  const cplx q{0.25, 0.0};
  const Couplings perc = Couplings::percolation(q);
  const cplx t = (1.0 - q) / q;
  for (int k = 0; k <= 6; ++k)
    CHECK(std::abs(perc.t(k) - std::pow(t, k)) < 1e-12);

  CHECK(dust().t(0) == cplx(1.0, 0.0));
  CHECK(dust().t(1) == cplx(0.0, 0.0));
  CHECK(dust().t(5) == cplx(0.0, 0.0));

  CHECK(forest().t(1) == cplx(1.0, 0.0));
  CHECK(forest().t(2) == cplx(0.0, 0.0));

  const Couplings single = Couplings::single_k(2, 1.0, std::numbers::pi / 2);
  CHECK(std::abs(single.t(2) - cplx(0.0, 1.0)) < 1e-12);
  CHECK(single.t(1) == cplx(0.0, 0.0));
  CHECK(single.t(0) == cplx(1.0, 0.0));

  const Couplings tail = Couplings::tail_colinear(
      {{1.0, 0.0}, {0.2, 0.1}}, TailRule::Geometric, 0.5, 0.0);
  CHECK(tail.t(1) == cplx(0.2, 0.1));
  CHECK(std::abs(tail.t(3) - cplx(0.125, 0.0)) < 1e-15);

  const Couplings four = Couplings::tail_colinear(
      {{1.0, 0.0}}, TailRule::PowerOfFour, 1.0, 0.0);
  CHECK(std::abs(four.t(3) - cplx(64.0, 0.0)) < 1e-12);
}

TEST_CASE("construction validates family parameters") {
  CHECK_THROWS_AS(Couplings::explicit_list({}), ConfigError);
  CHECK_THROWS_AS(Couplings::explicit_list({{0.0, 0.0}, {1.0, 0.0}}),
                  ConfigError);
  CHECK_THROWS_AS(Couplings::percolation({0.0, 0.0}), ConfigError);
  CHECK_THROWS_AS(Couplings::single_k(0, 1.0, 0.0), ConfigError);
  CHECK_THROWS_AS(Couplings::single_k(1, -1.0, 0.0), ConfigError);
  CHECK_THROWS_AS(
      Couplings::finite_set({FiniteTerm{2, 1.0, 0.0}, FiniteTerm{2, 1.0, 0.0}}),
      ConfigError);
  CHECK_THROWS_AS(Couplings::tail_colinear({}, TailRule::Geometric, 0.5, 0.0),
                  ConfigError);
  CHECK_THROWS_AS(
      Couplings::tail_colinear({{1.0, 0.0}}, TailRule::Geometric, 0.0, 0.0),
      ConfigError);
}

TEST_CASE("lambda closed forms for percolation") {
  const cplx q{0.5, 0.25};
  const Couplings perc = Couplings::percolation(q);
  for (int n = 1; n <= 10; ++n) {
    CHECK(std::abs(lambda(perc, n, 0) - std::pow(q, -n)) <
          1e-10 * std::abs(std::pow(q, -n)));
    CHECK(std::abs(lambda(perc, n, 1) - (1.0 - q) / std::pow(q, n)) <
          1e-10 * std::abs((1.0 - q) / std::pow(q, n)));
  }
  CHECK(lambda(perc, 0, 0) == cplx(1.0, 0.0));
  CHECK_THROWS_AS(lambda(perc, 1, 2), ContractError);
  CHECK_THROWS_AS(lambda(perc, -1, 0), ContractError);
}

TEST_CASE("lambda satisfies the Pascal-split recurrence") {
  // splitting the binomial weight gives
  //   lambda(a, b) = lambda(a-1, b) + lambda(a, b+1)
  std::mt19937 rng(29);
  for (int trial = 0; trial < 20; ++trial) {
    const Couplings c = random_complex_couplings(2 + trial % 5, rng);
    for (int a = 1; a <= 12; ++a)
      for (int b = 0; b < a; ++b) {
        const cplx lhs = lambda(c, a, b);
        const cplx rhs = lambda(c, a - 1, b) + lambda(c, a, b + 1);
        CHECK(std::abs(lhs - rhs) <= 1e-10 * (1.0 + std::abs(lhs)));
      }
  }
}

TEST_CASE("amplitudes: gregarious, dust, forest") {
  const Couplings d = dust();
  for (int n = 1; n <= 6; ++n) {
    CHECK(amplitude(d, n, 0, 0) == cplx(1.0, 0.0)); // lambda(n,0) = 1
    CHECK(amplitude(d, n, n, 1) == cplx(0.0, 0.0)); // timid from a chain
  }

  const Couplings f = forest();
  for (int n = 1; n <= 8; ++n) {
    const double expect = 1.0 / (1.0 + n);
    CHECK(std::abs(amplitude(f, n, 0, 0) - expect) < 1e-12);
    for (int varpi = 1; varpi <= n; ++varpi)
      CHECK(std::abs(amplitude(f, n, varpi, 1) - expect) < 1e-12);
  }

  const Couplings perc = Couplings::percolation({0.5, 0.0});
  for (int n = 1; n <= 10; ++n)
    CHECK(std::abs(amplitude(perc, n, 0, 0) - std::pow(0.5, n)) < 1e-12);

  CHECK_THROWS_AS(amplitude(dust(), 3, 4, 0), ContractError);
}

TEST_CASE("amplitudes are invariant under global rescale") {
  std::mt19937 rng(31);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<cplx> base{{1.0, 0.0}};
    for (int k = 1; k <= 4; ++k) base.push_back({u(rng), u(rng)});
    cplx scale{u(rng), u(rng)};
    if (std::abs(scale) < 0.1) scale = {1.0, 0.5};
    std::vector<cplx> scaled;
    for (const cplx& v : base) scaled.push_back(scale * v);
    const Couplings a = Couplings::explicit_list(base);
    const Couplings b = Couplings::explicit_list(scaled);
    CHECK(b.rescaled());
    for (int n = 1; n <= 6; ++n)
      for (int varpi = 0; varpi <= n; ++varpi)
        for (int m = (varpi > 0 ? 1 : 0); m <= varpi; ++m)
          CHECK(std::abs(amplitude(a, n, varpi, m) -
                         amplitude(b, n, varpi, m)) < 1e-10);
  }
}

TEST_CASE("vanishing stage denominator is a hard error with its stage") {
  const Couplings c = Couplings::explicit_list({{1.0, 0.0}, {-1.0, 0.0}});
  try {
    amplitude(c, 1, 0, 0);
    FAIL("expected DegenerateDynamics");
  } catch (const DegenerateDynamics& e) {
    CHECK(e.stage() == 1);
  }
}

TEST_CASE("classical probabilities") {
  // forest: every legal transition happens with probability 1/(1+n)
  std::vector<double> q_forest;
  for (int k = 0; k <= 8; ++k) q_forest.push_back(1.0 / (1.0 + k));
  for (int n = 1; n <= 8; ++n) {
    CHECK(classical_prob(q_forest, n, 0, 0) ==
          doctest::Approx(1.0 / (1.0 + n)).epsilon(1e-12));
    CHECK(classical_prob(q_forest, n, n, 1) ==
          doctest::Approx(1.0 / (1.0 + n)).epsilon(1e-12));
  }

  // percolation: the gregarious transition keeps probability q^n
  const double q = 0.7;
  std::vector<double> q_perc;
  for (int k = 0; k <= 8; ++k) q_perc.push_back(std::pow(q, k));
  for (int n = 1; n <= 8; ++n)
    CHECK(classical_prob(q_perc, n, 0, 0) ==
          doctest::Approx(std::pow(q, n)).epsilon(1e-12));

  // dust: gregarious certain, timid-from-chain impossible
  std::vector<double> q_dust(9, 1.0);
  CHECK(classical_prob(q_dust, 4, 0, 0) == doctest::Approx(1.0));
  CHECK(classical_prob(q_dust, 4, 4, 1) == doctest::Approx(0.0));

  std::vector<double> q_zero{1.0, 0.0};
  CHECK_THROWS_AS(classical_prob(q_zero, 1, 0, 0), DegenerateDynamics);
}

TEST_CASE("binomial inversion between t and q") {
  // q_k = q^k gives t_n = ((1-q)/q)^n
  std::vector<cplx> qs;
  const double q = 0.4;
  for (int k = 0; k <= 8; ++k) qs.push_back({std::pow(q, k), 0.0});
  const auto t = t_from_q(qs);
  const double tv = (1.0 - q) / q;
  for (int n = 0; n <= 8; ++n)
    CHECK(std::abs(t[n] - std::pow(tv, n)) < 1e-9 * std::pow(tv, n) + 1e-12);

  // q_k = 1 gives dust, q_k = 1/(1+k) gives the forest
  const auto t_dust = t_from_q(std::vector<cplx>(6, {1.0, 0.0}));
  CHECK(std::abs(t_dust[0] - 1.0) < 1e-12);
  for (int n = 1; n <= 5; ++n) CHECK(std::abs(t_dust[n]) < 1e-9);

  std::vector<cplx> q_forest;
  for (int k = 0; k <= 6; ++k) q_forest.push_back({1.0 / (1.0 + k), 0.0});
  const auto t_forest = t_from_q(q_forest);
  CHECK(std::abs(t_forest[0] - 1.0) < 1e-10);
  CHECK(std::abs(t_forest[1] - 1.0) < 1e-10);
  for (int n = 2; n <= 6; ++n) CHECK(std::abs(t_forest[n]) < 1e-8);
}

TEST_CASE("q_from_t closes the loop") {
  CHECK(std::abs(q_from_t(dust(), 4) - cplx(1.0, 0.0)) < 1e-12);

  const Couplings perc = Couplings::percolation({0.3, 0.0});
  for (int n = 0; n <= 8; ++n)
    CHECK(std::abs(q_from_t(perc, n) - std::pow(0.3, n)) < 1e-10);

  // round trip on random complex couplings
  std::mt19937 rng(37);
  for (int trial = 0; trial < 25; ++trial) {
    const Couplings c = random_complex_couplings(3 + trial % 6, rng);
    std::vector<cplx> qs;
    bool degenerate = false;
    try {
      for (int n = 0; n <= 12; ++n) qs.push_back(q_from_t(c, n));
    } catch (const DegenerateDynamics&) {
      degenerate = true; // random draw hit a vanishing stage; skip
    }
    if (degenerate) continue;
    const auto t = t_from_q(qs);
    for (int n = 0; n <= 12; ++n)
      CHECK(std::abs(t[n] - c.t(n)) <= 1e-10 * (1.0 + std::abs(c.t(n))));
  }
}

TEST_CASE("real positive dynamics: probabilities equal amplitudes") {
  std::mt19937 rng(107);
  std::uniform_real_distribution<double> mag(0.05, 1.5);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<cplx> t{{1.0, 0.0}};
    for (int k = 1; k <= 2 + trial % 3; ++k) t.push_back({mag(rng), 0.0});
    const Couplings c = Couplings::explicit_list(t);
    std::vector<double> q;
    for (int j = 0; j <= 8; ++j) q.push_back(q_from_t(c, j).real());
    for (int n = 1; n <= 8; ++n)
      for (int varpi = 0; varpi <= n; ++varpi)
        for (int m = (varpi > 0 ? 1 : 0); m <= varpi; ++m) {
          const cplx amp = amplitude(c, n, varpi, m);
          CHECK(std::abs(amp.imag()) < 1e-14);
          CHECK(classical_prob(q, n, varpi, m) ==
                doctest::Approx(amp.real()).epsilon(1e-12));
        }
  }
}

TEST_CASE("normalization rescales t_0 to one and remembers it") {
  const Couplings c = Couplings::explicit_list({{2.0, 0.0}, {0.0, 2.0}});
  CHECK(c.rescaled());
  CHECK(c.raw_t0() == cplx(2.0, 0.0));
  CHECK(std::abs(c.t(0) - cplx(1.0, 0.0)) < 1e-15);
  CHECK(std::abs(c.t(1) - cplx(0.0, 1.0)) < 1e-15);
  CHECK(!dust().rescaled());

  const Couplings rotated = Couplings::explicit_list({{0.0, 2.0}, {0.0, 4.0}});
  CHECK(rotated.all_real_positive()); // (1, 2) after normalization
}

TEST_CASE("real-positive detection") {
  CHECK(dust().all_real_positive());
  CHECK(forest().all_real_positive());
  CHECK(Couplings::percolation({0.5, 0.0}).all_real_positive());
  CHECK(!Couplings::percolation({1.5, 0.0}).all_real_positive());
  CHECK(!Couplings::percolation({0.5, 0.1}).all_real_positive());
  CHECK(!Couplings::single_k(1, 1.0, std::numbers::pi / 2).all_real_positive());
  CHECK(Couplings::single_k(3, 2.0, 0.0).all_real_positive());
  CHECK(Couplings::tail_colinear({{1.0, 0.0}}, TailRule::Geometric, 0.5, 0.0)
            .all_real_positive());
  CHECK(!Couplings::tail_colinear({{1.0, 0.0}}, TailRule::Geometric, 0.5, 0.4)
             .all_real_positive());
}

TEST_CASE("json specs parse into working families") {
  using nlohmann::json;
  const auto perc = Couplings::from_json(
      json{{"family", "percolation"}, {"q", "0.5+0.3i"}});
  CHECK(perc.family() == CouplingFamily::Percolation);
  CHECK(perc.percolation_q() == cplx(0.5, 0.3));

  const auto expl = Couplings::from_json(
      json{{"family", "explicit"}, {"t", {"1", "0", "1i"}}});
  CHECK(expl.t(2) == cplx(0.0, 1.0));

  const auto single = Couplings::from_json(json{
      {"family", "single_k"}, {"k", 2}, {"s", 1.0}, {"phi", 1.5707963}});
  CHECK(single.family() == CouplingFamily::SingleK);

  const auto fs = Couplings::from_json(
      json{{"family", "finite_set"},
           {"terms", json::array({json{{"k", 2}, {"s", 1.0}, {"phi", 0.3}}})}});
  CHECK(fs.terms().size() == 1);

  const auto tail = Couplings::from_json(json{{"family", "tail_colinear"},
                                              {"head", {"1", "0.2+0.1i"}},
                                              {"rule", "geometric"},
                                              {"s", 0.5},
                                              {"phi0", 0.7}});
  CHECK(tail.tail_rule() == TailRule::Geometric);

  CHECK_THROWS_AS(Couplings::from_json(json{{"family", "nope"}}), ConfigError);
  CHECK_THROWS_AS(Couplings::from_json(json{{"family", "percolation"},
                                            {"q", "0.5"},
                                            {"extra", 1}}),
                  ConfigError);
  CHECK_THROWS_AS(Couplings::from_json(json{{"family", "explicit"},
                                            {"t", {"bogus"}}}),
                  ConfigError);

  // serialization round trip preserves the family and its values
  for (const Couplings& c : {perc, expl, single, fs, tail}) {
    const Couplings back = Couplings::from_json(c.to_json());
    CHECK(back.family() == c.family());
    for (int k = 0; k <= 6; ++k)
      CHECK(std::abs(back.t(k) - c.t(k)) < 1e-12);
  }
}
