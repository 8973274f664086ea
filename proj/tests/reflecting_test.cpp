#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include <boost/math/special_functions/bessel.hpp>
#include <gtest/gtest.h>

#include "altbd/oracle.hpp"
#include "altbd/reflecting.hpp"

using namespace altbd;

namespace {

const std::vector<Rates> kRates{{1.0, 2.0}, {2.0, 2.0}, {2.0, 1.0}};
const std::vector<double> kTimes{0.25, 0.5, 1.0, 2.0, 5.0};

double oracle_q(State k, State n, double t, const Rates& r) {
  return transient_distribution(ChainKind::reflected, r, k, t).at(n);
}

}  // namespace

TEST(LaplaceRoots, VietaAndBounds) {
  for (const auto& r : {Rates(1.0, 2.0), Rates(2.0, 2.0), Rates(0.5, 3.0)})
    for (double s : {0.1, 1.0, 10.0}) {
      const auto lr = laplace_roots(s, r);
      EXPECT_GT(lr.psi1_sq, 1.0);
      EXPECT_GT(lr.psi2_sq, 0.0);
      EXPECT_LT(lr.psi2_sq, 1.0);
      EXPECT_NEAR(lr.psi1_sq * lr.psi2_sq, 1.0, 1e-12);
      const double a = r.lambda + r.mu;
      const double b = r.lambda - r.mu;
      EXPECT_NEAR(lr.a_term * lr.a_term, (a + s) * (a + s) - a * a, 1e-12 * (a + s) * (a + s));
      EXPECT_NEAR(lr.b_term * lr.b_term, (a + s) * (a + s) - b * b, 1e-12 * (a + s) * (a + s));
      const double lm = r.lambda * r.mu;
      const double mid = (a + s) * (a + s) - r.lambda * r.lambda - r.mu * r.mu;
      const double x = lr.psi2_sq;
      EXPECT_NEAR(lm * x * x - mid * x + lm, 0.0, 1e-10);
    }
}

TEST(LaplaceRoots, EqualRates) {
  const auto lr = laplace_roots(0.7, {1.0, 1.0});
  EXPECT_GT(lr.psi2_sq, 0.0);
  EXPECT_LT(lr.psi2_sq, 1.0);
}

TEST(LaplaceRoots, RejectsNonPositiveS) {
  EXPECT_THROW(laplace_roots(0.0, {1.0, 2.0}), DomainError);
  EXPECT_THROW(pi_1n(-1.0, 0, {1.0, 2.0}), DomainError);
  EXPECT_THROW(pi_1n(1.0, -1, {1.0, 2.0}), DomainError);
}

TEST(Pi1n, SystemResiduals) {
  for (const auto& r : kRates)
    for (double s : {0.1, 0.5, 1.0, 2.0, 10.0}) {
      const auto res = laplace_system_residuals(s, r, 30);
      EXPECT_LT(res.max(), 1e-10) << res.boundary << " " << res.first << " " << res.even << " " << res.odd;
    }
}

TEST(Pi1n, TotalIsOneOverS) {
  for (const auto& r : kRates)
    for (double s : {0.5, 1.0, 2.0}) {
      double sum = 0.0;
      for (int n = 0; n < 2000; ++n) sum += pi_1n(s, n, r);
      EXPECT_NEAR(sum, 1.0 / s, 1e-8);
    }
}

TEST(Pi1n, GeometricEvenRatio) {
  const Rates r(1.0, 2.0);
  for (double s : {0.3, 3.0}) {
    const double psi = laplace_roots(s, r).psi2_sq;
    for (int m = 1; m < 6; ++m) EXPECT_NEAR(pi_1n(s, 2 * (m + 1), r) / pi_1n(s, 2 * m, r), psi, 1e-13);
  }
}

TEST(Pi1n, ComplexAgreesOnRealAxis) {
  const Rates r(2.0, 1.0);
  for (int n : {0, 1, 4})
    EXPECT_NEAR(std::real(pi_1n_at(std::complex<double>(0.8, 0.0), n, r)), pi_1n(0.8, n, r), 1e-15);
}

TEST(Pi1n, InversionMatchesUniformization) {
  for (const auto& r : kRates)
    for (double t : {0.5, 1.0, 2.0})
      for (int n = 0; n <= 6; ++n) {
        const double f = invert_laplace([&](std::complex<double> s) { return pi_1n_at(s, n, r); }, t);
        EXPECT_NEAR(f, oracle_q(1, n, t, r), 1e-6);
      }
}

TEST(Q00, InitialValue) { EXPECT_EQ(q00(0.0, {1.0, 2.0}), 1.0); }

TEST(Q00, EqualRatesBessel) {
  for (double lam : {0.5, 1.0, 2.0})
    for (double t : {0.1, 1.0, 4.0}) {
      const double x = 2.0 * lam * t;
      const double want = std::exp(-x) * (boost::math::cyl_bessel_i(0, x) + boost::math::cyl_bessel_i(1, x));
      EXPECT_NEAR(q00(t, {lam, lam}), want, 1e-13);
    }
}

TEST(Q00, MatchesUniformization) {
  for (const auto& r : kRates)
    for (double t : kTimes) EXPECT_NEAR(q00(t, r), oracle_q(0, 0, t, r), 1e-7);
  EXPECT_NEAR(q00(1.0, {2.0, 1.0}), oracle_q(0, 0, 1.0, {2.0, 1.0}), 1e-8);
}

TEST(Q00, IntegralRouteAgrees) {
  for (const auto& r : kRates)
    for (double t : kTimes) EXPECT_NEAR(q00_integral(t, r), q00(t, r), 1e-9);
}

TEST(Q00, LongTime) {
  for (const auto& r : kRates) {
    const double v = q00(100.0, r);
    EXPECT_LT(v, 0.1);
    EXPECT_GT(v, 0.0);
    EXPECT_NEAR(v, oracle_q(0, 0, 100.0, r), 1e-9);
  }
}

TEST(Q10, InitialValue) {
  EXPECT_EQ(q10_series(0.0, {1.0, 2.0}), 0.0);
  EXPECT_EQ(q10_integral(0.0, {1.0, 2.0}), 0.0);
}

TEST(Q10, SeriesMatchesUniformization) {
  for (const auto& r : kRates)
    for (double t : kTimes) EXPECT_NEAR(q10_series(t, r), oracle_q(1, 0, t, r), 1e-7) << r.lambda << " " << t;
}

TEST(Q10, TripleAgreement) {
  for (const auto& r : kRates)
    for (double t : kTimes) {
      const double series = q10_series(t, r);
      const double integral = q10_integral(t, r);
      const double inverted = invert_laplace([&](std::complex<double> s) { return pi_1n_at(s, 0, r); }, t);
      EXPECT_NEAR(series, integral, 1e-7);
      EXPECT_NEAR(series, inverted, 1e-6);
    }
}

TEST(Q10, DetailedBalance) {
  // lambda q_{1,0} = mu q_{0,1}
  for (const auto& r : kRates)
    for (double t : {0.5, 2.0})
      EXPECT_NEAR(r.lambda * q10_series(t, r), r.mu * oracle_q(0, 1, t, r), 1e-9);
}

TEST(Q10, RateOrdering) {
  for (int i = 1; i <= 50; ++i) {
    const double t = 0.1 * i;
    const double top = q10_series(t, kRates[0]);
    const double mid = q10_series(t, kRates[1]);
    const double bottom = q10_series(t, kRates[2]);
    EXPECT_GE(top, mid) << t;
    EXPECT_GE(mid, bottom) << t;
  }
}

TEST(PEven, InitialValues) {
  for (const auto& r : kRates) {
    EXPECT_NEAR(p_even(0, 0.0, r), 1.0, 1e-15);
    EXPECT_NEAR(p_even(1, 0.0, r), 0.0, 1e-15);
  }
}

TEST(PEven, OdeAndBounds) {
  const double h = 1e-4;
  for (const auto& r : kRates)
    for (State k : {0, 1}) {
      const auto q = zero_state_probability(k, r);
      const double a = r.lambda + r.mu;
      for (double t : kTimes) {
        const double pt = p_even(k, t, r, q);
        EXPECT_GE(pt, 0.0);
        EXPECT_LE(pt, 1.0);
        const double dp = (p_even(k, t + h, r, q) - p_even(k, t - h, r, q)) / (2.0 * h);
        EXPECT_NEAR(dp + 2.0 * a * pt - r.lambda * q(t) - 2.0 * r.mu, 0.0, 1e-6);
      }
    }
}

TEST(PEven, MatchesUniformization) {
  for (const auto& r : kRates)
    for (State k : {0, 1, 2})
      for (double t : {0.5, 2.0}) {
        const auto d = transient_distribution(ChainKind::reflected, r, k, t);
        double even = 0.0;
        for (State n = 0; n <= d.hi(); n += 2) even += d.at(n);
        // general k through an injected q_{k,0} from the oracle
        auto q = [&](double tau) { return transient_distribution(ChainKind::reflected, r, k, tau).at(0); };
        EXPECT_NEAR(p_even(k, t, r, q, 1e-10), even, 1e-8);
      }
}

TEST(ReflectedMoments, AtZero) {
  const Rates r(1.0, 2.0);
  EXPECT_EQ(r_mean(0, 0.0, r), 0.0);
  EXPECT_EQ(r_mean(1, 0.0, r), 1.0);
  EXPECT_EQ(r_variance(0, 0.0, r), 0.0);
  EXPECT_EQ(r_variance(1, 0.0, r), 0.0);
}

TEST(ReflectedMoments, MatchUniformization) {
  for (const auto& r : kRates)
    for (State k : {0, 1})
      for (double t : {0.25, 1.0, 2.0, 5.0}) {
        const auto d = transient_distribution(ChainKind::reflected, r, k, t);
        EXPECT_NEAR(r_mean(k, t, r), d.mean(), 1e-6);
        EXPECT_NEAR(r_variance(k, t, r), d.variance(), 1e-6);
      }
  EXPECT_NEAR(r_variance(1, 2.0, {2.0, 1.0}), transient_distribution(ChainKind::reflected, {2.0, 1.0}, 1, 2.0).variance(), 1e-6);
}

TEST(ReflectedMoments, MeanNondecreasing) {
  const Rates r(1.0, 2.0);
  double prev = r_mean(0, 0.0, r);
  for (int i = 1; i <= 20; ++i) {
    const double m = r_mean(0, 0.25 * i, r);
    EXPECT_GE(m, prev);
    prev = m;
  }
}

TEST(ReflectedMoments, InjectedGeneralStart) {
  const Rates r(2.0, 1.0);
  const State k = 3;
  auto q = [&](double tau) { return transient_distribution(ChainKind::reflected, r, k, tau).at(0); };
  const auto d = transient_distribution(ChainKind::reflected, r, k, 1.5);
  EXPECT_NEAR(r_mean(k, 1.5, r, q, 1e-10), d.mean(), 1e-7);
  EXPECT_NEAR(r_variance(k, 1.5, r, q, 1e-10), d.variance(), 1e-7);
}

TEST(ReflectedMoments, ClosedFormsOnlyForZeroAndOne) {
  EXPECT_THROW(r_mean(2, 1.0, {1.0, 2.0}), DomainError);
  EXPECT_THROW(r_variance(-1, 1.0, {1.0, 2.0}), DomainError);
}
