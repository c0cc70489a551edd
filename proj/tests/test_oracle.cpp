#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "poolscreen/analytic.hpp"
#include "poolscreen/oracle.hpp"
#include "poolscreen/simulate.hpp"

using namespace poolscreen;

TEST_CASE("tiny fixtures") {
  SUBCASE("ftp n=3 k=1 m=1 b=1") {
    const auto r = enumerate_expected_tests(ProblemInstance::fixed_k(3, 1), Scheme::ftp,
                                            DesignParams{Scheme::ftp, 1, 1});
    CHECK(r.state_count == 9);  // 3 pool choices x 3 infection choices
    CHECK(static_cast<double>(r.expected_total_tests) ==
          doctest::Approx(10.0 / 3.0).epsilon(1e-15));
  }
  SUBCASE("fti n=2 k=1 m=2 d=1") {
    const auto r = enumerate_expected_tests(ProblemInstance::fixed_k(2, 1), Scheme::fti,
                                            DesignParams{Scheme::fti, 2, 1});
    CHECK(r.state_count == 8);  // 2^2 designs x 2 infections
    CHECK(static_cast<double>(r.expected_total_tests) == doctest::Approx(3.5).epsilon(1e-15));
  }
  SUBCASE("rp n=2 k=1 m=1 a=0.5") {
    const auto r = enumerate_expected_tests(ProblemInstance::fixed_k(2, 1), Scheme::rp,
                                            DesignParams{Scheme::rp, 1, 0.5});
    CHECK(r.state_count == 8);  // 2^2 patterns x 2 infections
    CHECK(static_cast<double>(r.expected_total_tests) == doctest::Approx(2.75).epsilon(1e-15));
  }
}

TEST_CASE("exact-form analytics agree wherever independence is exact") {
  SUBCASE("fti with d=1") {
    for (const auto& [n, m] : std::vector<std::pair<std::size_t, double>>{{2, 2}, {3, 3}, {4, 2}}) {
      const ProblemInstance inst = ProblemInstance::fixed_k(n, 1);
      const DesignParams params{Scheme::fti, m, 1};
      const auto enumd = enumerate_expected_tests(inst, Scheme::fti, params);
      const auto formula =
          expected_total_tests(inst, params, PredictionMode::exact_form).expected_total_tests;
      CHECK(std::abs(static_cast<double>(enumd.expected_total_tests) - formula) <= 1e-10);
    }
  }
  SUBCASE("rp at any parameters") {
    const ProblemInstance inst = ProblemInstance::fixed_k(3, 1);
    const DesignParams params{Scheme::rp, 2, 0.3};
    const auto enumd = enumerate_expected_tests(inst, Scheme::rp, params);
    CHECK(static_cast<double>(enumd.expected_total_tests) ==
          doctest::Approx(4.2482).epsilon(1e-12));
    const auto formula =
        expected_total_tests(inst, params, PredictionMode::exact_form).expected_total_tests;
    CHECK(std::abs(static_cast<double>(enumd.expected_total_tests) - formula) <= 1e-10);
  }
  SUBCASE("k=0 for every scheme") {
    const ProblemInstance clean = ProblemInstance::fixed_k(4, 0);
    for (const DesignParams params : {DesignParams{Scheme::ftp, 2, 2},
                                      DesignParams{Scheme::fti, 3, 2},
                                      DesignParams{Scheme::rp, 2, 0.25}}) {
      const auto enumd = enumerate_expected_tests(clean, params.scheme, params);
      const auto formula =
          expected_total_tests(clean, params, PredictionMode::exact_form).expected_total_tests;
      CHECK(std::abs(static_cast<double>(enumd.expected_total_tests) - formula) <= 1e-10);
    }
  }
}

TEST_CASE("paper approximation tightens as n grows at fixed b/n and k") {
  // b/n = 1/2, k = 1, m = 1; scale n by 10.
  const auto small = enumerate_expected_tests(ProblemInstance::fixed_k(2, 1), Scheme::ftp,
                                              DesignParams{Scheme::ftp, 1, 1});
  const auto big = enumerate_expected_tests(ProblemInstance::fixed_k(20, 1), Scheme::ftp,
                                            DesignParams{Scheme::ftp, 1, 10});
  auto rel_gap = [](const ProblemInstance& inst, const DesignParams& params,
                    const EnumerationResult& r) {
    const double approx =
        expected_total_tests(inst, params, PredictionMode::paper_approx).expected_total_tests;
    const double truth = static_cast<double>(r.expected_total_tests);
    return std::abs(approx - truth) / truth;
  };
  const double gap_small =
      rel_gap(ProblemInstance::fixed_k(2, 1), DesignParams{Scheme::ftp, 1, 1}, small);
  const double gap_big =
      rel_gap(ProblemInstance::fixed_k(20, 1), DesignParams{Scheme::ftp, 1, 10}, big);
  CHECK(static_cast<double>(small.expected_total_tests) == doctest::Approx(2.5).epsilon(1e-15));
  CHECK(static_cast<double>(big.expected_total_tests) == doctest::Approx(16.0).epsilon(1e-12));
  CHECK(gap_big < gap_small);
}

TEST_CASE("simulator agrees with enumeration on the tiny fixtures") {
  struct Fixture {
    Scheme scheme;
    std::size_t n;
    DesignParams params;
  };
  for (const auto& f : {Fixture{Scheme::ftp, 3, {Scheme::ftp, 1, 1}},
                        Fixture{Scheme::fti, 2, {Scheme::fti, 2, 1}},
                        Fixture{Scheme::rp, 2, {Scheme::rp, 1, 0.5}}}) {
    const ProblemInstance inst = ProblemInstance::fixed_k(f.n, 1);
    const auto truth = enumerate_expected_tests(inst, f.scheme, f.params);
    const auto sim = run_replications(inst, f.scheme, f.params, 100000, 42);
    REQUIRE(sim.stderr_defined);
    CHECK(std::abs(sim.mean_total_tests - static_cast<double>(truth.expected_total_tests)) <=
          3.0 * sim.stderr_total_tests);
  }
}

TEST_CASE("budget and precondition errors") {
  CHECK_THROWS_AS(enumerate_expected_tests(ProblemInstance::fixed_k(30, 2), Scheme::ftp,
                                           DesignParams{Scheme::ftp, 3, 10}),
                  budget_error);
  CHECK_THROWS_AS(enumerate_expected_tests(ProblemInstance::fixed_k(20, 1), Scheme::ftp,
                                           DesignParams{Scheme::ftp, 1, 10}, 1000),
                  budget_error);
  CHECK_THROWS_AS(enumerate_expected_tests(ProblemInstance::binomial(4, 0.3), Scheme::rp,
                                           DesignParams{Scheme::rp, 2, 0.3}),
                  std::invalid_argument);
}

TEST_CASE("budget check happens before enumeration for rp too") {
  CHECK_THROWS_AS(enumerate_expected_tests(ProblemInstance::fixed_k(10, 1), Scheme::rp,
                                           DesignParams{Scheme::rp, 8, 0.5}),
                  budget_error);
}
