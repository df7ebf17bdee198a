#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "rllink/entropy.hpp"
#include "rllink/errors.hpp"
#include "rllink/iid_analysis.hpp"

using namespace rllink;

TEST_CASE("iid rate closed form") {
  CHECK(rate_iid(0.5, 0.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(rate_iid(0.0, 0.3) == 0.0);
  // H(1/4) - (1/4 / 1/2) H(1/2) = 0.811278 - 0.5
  CHECK(rate_iid(0.25, 0.5) == doctest::Approx(0.3112781245).epsilon(1e-9));
  CHECK_THROWS_AS(rate_iid(0.6, 0.5), ValidationError);
  SUBCASE("matches brute-force mutual information") {
    // I(X;Y) for X ~ Ber(p_x), Y = X through the erasing channel, computed
    // from the joint law directly.
    for (double p_x : {0.2, 0.5, 0.9}) {
      for (double p10 : {0.0, 0.1, 0.4}) {
        double p_y = p_x * (1.0 - p10);
        double hy = binary_entropy(p_y);
        double hyx = p_x * binary_entropy(p10);  // H(Y|X=1) weighted
        CHECK(rate_iid(p_y, p10) == doctest::Approx(hy - hyx).epsilon(1e-12));
      }
    }
  }
  SUBCASE("fully lossy channel carries nothing") {
    CHECK(rate_iid(0.0, 1.0) == 0.0);
  }
}

TEST_CASE("iid rate peak and feasible interval") {
  SUBCASE("noiseless peak at one half") {
    RatePeak peak = rate_iid_peak(0.0);
    CHECK(peak.p_y == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(peak.rate == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("noisy peak beats nearby points") {
    for (double p10 : {0.1, 0.5, 0.8}) {
      RatePeak peak = rate_iid_peak(p10);
      double up = std::min(1.0 - p10, peak.p_y + 1e-4);
      CHECK(peak.rate >= rate_iid(std::max(0.0, peak.p_y - 1e-4), p10) - 1e-12);
      CHECK(peak.rate >= rate_iid(up, p10) - 1e-12);
    }
  }
  SUBCASE("feasible interval brackets the constraint") {
    Interval iv = rate_iid_feasible(0.5, 0.0);
    CHECK_FALSE(iv.empty());
    CHECK(rate_iid(iv.lo, 0.0) == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(rate_iid(iv.hi, 0.0) == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(iv.lo == doctest::Approx(0.1100278644).epsilon(1e-6));
    CHECK(iv.hi == doctest::Approx(0.8899721356).epsilon(1e-6));
    CHECK(rate_iid_feasible(1.1, 0.0).empty());
    CHECK(rate_iid_feasible(0.9, 0.5).empty());
    // R = 0 leaves everything feasible.
    Interval all = rate_iid_feasible(0.0, 0.0);
    CHECK(all.lo == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(all.hi == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("battery events for iid arrivals and demands") {
  SUBCASE("balanced point is uniform") {
    for (int b_max : {1, 2, 4, 7}) {
      for (double q : {0.2, 0.5, 0.8}) {
        OfUf r = of_uf_iid(q, q, b_max);
        double want = q * (1.0 - q) / (b_max + 1);
        CHECK(std::abs(r.p_of - want) <= 1e-12);
        CHECK(std::abs(r.p_uf - want) <= 1e-12);
        for (int i = 0; i <= b_max; ++i)
          CHECK(r.stationary(i) == doctest::Approx(1.0 / (b_max + 1)).epsilon(1e-12));
      }
    }
  }
  SUBCASE("hand-solved asymmetric case") {
    // A = (0.6*0.5)/(0.4*0.5) = 1.5, pi_i = A^i / (1 + A + A^2)
    OfUf r = of_uf_iid(0.6, 0.5, 2);
    double a = 1.5, norm = 1 + a + a * a;
    CHECK(r.stationary(0) == doctest::Approx(1.0 / norm).epsilon(1e-12));
    CHECK(r.stationary(2) == doctest::Approx(a * a / norm).epsilon(1e-12));
    CHECK(r.p_of == doctest::Approx(a * a / norm * 0.6 * 0.5).epsilon(1e-12));
    CHECK(r.p_uf == doctest::Approx(1.0 / norm * 0.4 * 0.5).epsilon(1e-12));
  }
  SUBCASE("degenerate corners") {
    OfUf sat = of_uf_iid(0.3, 0.0, 2);
    CHECK(sat.p_of == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(sat.p_uf == 0.0);
    CHECK(sat.stationary(2) == doctest::Approx(1.0).epsilon(1e-12));
    OfUf drained = of_uf_iid(0.3, 1.0, 2);
    CHECK(drained.p_uf == doctest::Approx(0.7).epsilon(1e-12));
    CHECK(drained.p_of == 0.0);
    OfUf frozen = of_uf_iid(0.0, 0.0, 2);
    CHECK(frozen.p_of == 0.0);
    CHECK(frozen.p_uf == 0.0);
    OfUf full_on = of_uf_iid(1.0, 1.0, 2);
    CHECK(full_on.p_of == 0.0);
    CHECK(full_on.p_uf == 0.0);
  }
  SUBCASE("extreme ratio stays finite") {
    OfUf r = of_uf_iid(0.999, 0.001, 40);
    CHECK(std::isfinite(r.p_of));
    CHECK(std::isfinite(r.p_uf));
    CHECK(r.stationary.sum() == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(r.p_uf >= 0.0);
    CHECK(r.p_of <= 1.0);
  }
  SUBCASE("overflow grows and underflow shrinks in p_y") {
    for (double q : {0.3, 0.5, 0.7}) {
      double prev_of = -1.0, prev_uf = 2.0;
      for (int i = 1; i < 1000; ++i) {
        double p_y = i * 1e-3;
        OfUf r = of_uf_iid(p_y, q, 3);
        CHECK(r.p_of >= prev_of - 1e-12);
        CHECK(r.p_uf <= prev_uf + 1e-12);
        prev_of = r.p_of;
        prev_uf = r.p_uf;
      }
    }
  }
}

TEST_CASE("markov usage battery events") {
  SUBCASE("iid reduction") {
    for (double p_y : {0.2, 0.5, 0.8}) {
      for (double q : {0.1, 0.5, 0.9}) {
        for (int b_max : {1, 2, 5}) {
          OfUf iid = of_uf_iid(p_y, q, b_max);
          OfUf mk = of_uf_markov_usage(p_y, UsageModel{1.0 - q, q}, b_max);
          CHECK(std::abs(iid.p_of - mk.p_of) < 1e-10);
          CHECK(std::abs(iid.p_uf - mk.p_uf) < 1e-10);
        }
      }
    }
  }
  SUBCASE("no arrivals, no overflow") {
    OfUf r = of_uf_markov_usage(0.0, UsageModel{0.3, 0.6}, 2);
    CHECK(r.p_of == 0.0);
    CHECK(r.p_uf > 0.0);
  }
  SUBCASE("alternating demand with balanced supply is symmetric") {
    OfUf r = of_uf_markov_usage(0.5, UsageModel{0.0, 0.0}, 2);
    CHECK(r.p_of == doctest::Approx(r.p_uf).epsilon(1e-10));
    CHECK(r.p_of > 0.0);
  }
  SUBCASE("stationary law covers the joint chain") {
    OfUf r = of_uf_markov_usage(0.4, UsageModel{0.9, 0.2}, 3);
    CHECK(r.stationary.size() == 8);
    CHECK(r.stationary.sum() == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(r.stationary.minCoeff() >= 0.0);
  }
}

TEST_CASE("closed-form minimax point") {
  SUBCASE("loose rate constraint balances the events") {
    MinimaxPoint m = minimax_closed_form(0.3, 0.5, 4);
    CHECK(m.p_y == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(m.value == doctest::Approx(0.05).epsilon(1e-12));
    CHECK(m.triple.rate >= 0.3);
  }
  SUBCASE("tight rate, demand below half: overflow-limited branch") {
    MinimaxPoint m = minimax_closed_form(0.9, 0.3, 4);
    CHECK(m.p_y == doctest::Approx(entropy_inverse(0.9)).epsilon(1e-9));
    CHECK(m.p_y == doctest::Approx(0.3160).epsilon(1e-3));
    OfUf r = of_uf_iid(m.p_y, 0.3, 4);
    CHECK(m.value == doctest::Approx(std::max(r.p_of, r.p_uf)).epsilon(1e-12));
    CHECK(r.p_of > r.p_uf);
  }
  SUBCASE("tight rate, demand above half: underflow-limited branch") {
    MinimaxPoint m = minimax_closed_form(0.9, 0.8, 4);
    CHECK(m.p_y == doctest::Approx(1.0 - entropy_inverse(0.9)).epsilon(1e-9));
    OfUf r = of_uf_iid(m.p_y, 0.8, 4);
    CHECK(r.p_uf > r.p_of);
    // mirror of the q=0.2 problem
    MinimaxPoint mm = minimax_closed_form(0.9, 0.2, 4);
    CHECK(m.value == doctest::Approx(mm.value).epsilon(1e-10));
    CHECK(m.p_y == doctest::Approx(1.0 - mm.p_y).epsilon(1e-10));
  }
  SUBCASE("matches a brute grid minimization") {
    for (double q : {0.2, 0.5, 0.8}) {
      for (double rate_min : {0.1, 0.5, 0.95}) {
        MinimaxPoint m = minimax_closed_form(rate_min, q, 4);
        double best = 1e9;
        for (int i = 1; i < 10000; ++i) {
          double p = i * 1e-4;
          if (binary_entropy(p) < rate_min) continue;
          OfUf r = of_uf_iid(p, q, 4);
          best = std::min(best, std::max(r.p_of, r.p_uf));
        }
        CHECK(std::abs(m.value - best) < 1e-3);
      }
    }
  }
  SUBCASE("infeasible rate") {
    CHECK_THROWS_AS(minimax_closed_form(1.01, 0.5, 4), InfeasibleError);
  }
}
