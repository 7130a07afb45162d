#include "rlab/analysis.hpp"
#include "rlab/oscillatory.hpp"
#include "rlab/symbolsplit.hpp"
#include "rlab/waterwaves.hpp"

#include <doctest.h>
#include <gsl/gsl_sf_expint.h>

#include <random>

using namespace rlab;

namespace {

Vec v2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

PhaseTriple quadratic() {
  const Dispersion q = Dispersion::radial(2, RadialProfile::power(2.0));
  return PhaseTriple(q, q, q);
}

ScalarPhase shifted_square(double alpha) {
  return {[=](double s) { return (s + alpha) * (s + alpha); }, [=](double s) { return 2 * (s + alpha); },
          [](double) { return 2.0; }};
}

Cutoff unit_cutoff() {
  return {[](double s) { return 1.0 - mollifier_step(s); }, 1.0};
}

const double kL2 = 0.70710678118654752440;
const double kXbar = 1.69922120097563197099;

}  // namespace

TEST_SUITE("oscillatory") {
  TEST_CASE("F against the cosine and sine integrals") {
    for (double z : {1e-4, 0.01, 0.1, 0.5, 1.0, 2.0, 7.5, 10.0, 40.0, 300.0}) {
      const cplx ref(-gsl_sf_Ci(z), kPi / 2 - gsl_sf_Si(z));
      CHECK(std::abs(exp_integral_F(z) - ref) <= 1e-8);
    }
    // frozen high-precision values
    CHECK(std::abs(exp_integral_F(1.0) - cplx(-0.33740392290096813, 0.62471325642771360)) <= 1e-9);
    CHECK(std::abs(exp_integral_F(0.1) - cplx(1.7278683866572966, 1.4708518656866197)) <= 1e-9);
    CHECK(std::abs(exp_integral_F(10.0) - cplx(0.045456433004455373, -0.087551267423977430)) <= 1e-9);
    CHECK_THROWS_AS(exp_integral_F(0.0), DomainError);
  }

  TEST_CASE("F asymptotics") {
    for (double z : logspace(1e-6, 1.0, 25)) CHECK(std::abs(exp_integral_F(z) + std::log(z)) <= 2.0);
    for (double z : logspace(10.0, 1e4, 15)) CHECK(std::abs(exp_integral_F(z)) <= 2.0 / z);
  }

  TEST_CASE("Y values") {
    CHECK(std::abs(model_Y(0.0) - 2.0) <= 1e-12);
    CHECK(std::abs(model_Y(1.0) - cplx(1.8090484758005441, 0.62053660344676220)) <= 1e-8);
    CHECK(std::abs(model_Y(-3.0) - cplx(0.81191002776254635, -1.0299523489710731)) <= 1e-8);
    CHECK(std::abs(model_Y(10.0) - cplx(0.34636623238443647, 0.48228640688120736)) <= 1e-8);
    CHECK(std::abs(model_Y(-2.5) - std::conj(model_Y(2.5))) <= 1e-12);
    const cplx lim = model_Y(1e4) * 100.0, ref = std::sqrt(kPi) * std::exp(cplx(0, kPi / 4));
    CHECK(std::abs(lim - ref) <= 0.02 * std::abs(ref));
  }

  TEST_CASE("|Y| <= 2 with the maximum at 0") {
    for (int k = -400; k <= 400; ++k) {
      const double u = 0.25 * k;
      CHECK(std::abs(model_Y(u)) <= 2.0 + 1e-12);
    }
  }

  TEST_CASE("Z values and regimes") {
    CHECK(model_Z(std::exp(10.0), 0.0).real() == doctest::Approx(10.0).epsilon(1e-12));
    CHECK(std::abs(model_Z(100, 0.001) - cplx(4.6026714774232971, 0.098944461163832506)) <= 1e-8);
    CHECK(std::abs(model_Z(50, 0.3) - cplx(0.69545161064552225, 1.3196903999013256)) <= 1e-8);
    CHECK_THROWS_AS(model_Z(1.0, 0.1), DomainError);
    for (double t : {20.0, 1e3, 1e5})
      for (double tu : {1e-4, 1e-2, 0.1}) {
        const double u = tu / t;
        CHECK(std::abs(model_Z(t, u) - std::log(t)) <= 2 * t * std::abs(u));
        CHECK(std::abs(model_Z(t, -u) - std::log(t)) <= 2 * t * std::abs(u));
      }
    double worst = 0;
    for (double t : {1e3, 1e4, 1e5})
      for (double u : {1e-2, 3e-2, 0.1}) {
        if (t * u < 10) continue;
        worst = std::max(worst, std::abs(std::abs(model_Z(t, u)) - std::abs(std::log(u))));
      }
    CHECK(worst <= 2.0);
  }

  TEST_CASE("chardonneret log regime") {
    const auto r = chardonneret(shifted_square(0.0), unit_cutoff(), 1e4);
    CHECK(r.regime == ColibriRegime::Log);
    CHECK(r.sigma0 == doctest::Approx(0.0));
    CHECK(std::abs(r.oracle - 0.5 * std::log(1e4)) <= 10.0);
    CHECK_THROWS_AS(chardonneret(shifted_square(0.0), unit_cutoff(), 5.0), DomainError);
    ScalarPhase concave{[](double s) { return -s * s; }, [](double s) { return -2 * s; }, [](double) { return -2.0; }};
    CHECK_THROWS_AS(chardonneret(concave, unit_cutoff(), 100.0), DomainError);
  }

  TEST_CASE("chardonneret discrepancy stays bounded in t") {
    for (double alpha : {0.0, 0.2, -0.2}) {
      CAPTURE(alpha);
      const double d0 = chardonneret(shifted_square(alpha), unit_cutoff(), 1e2).discrepancy();
      double worst = d0;
      for (double t : {1e3, 1e4, 1e5, 1e6}) {
        const auto r = chardonneret(shifted_square(alpha), unit_cutoff(), t);
        worst = std::max(worst, r.discrepancy());
        if (alpha != 0) CHECK(r.regime == (alpha > 0 ? ColibriRegime::Positive : ColibriRegime::Negative));
      }
      CHECK(worst <= std::max(3 * d0, 1e-6));
    }
    const auto p = chardonneret(shifted_square(0.2), unit_cutoff(), 1e6);
    CHECK(p.alpha == doctest::Approx(0.2));
    CHECK(std::abs(p.asymptotic - std::exp(cplx(0, 1e6 * 0.04)) * exp_integral_F(0.4)) <= 1e-9);
    const auto n = chardonneret(shifted_square(-0.2), unit_cutoff(), 1e6);
    CHECK(n.alpha == doctest::Approx(-0.2));
    CHECK(std::abs(n.asymptotic - std::exp(cplx(0, 1e6 * 0.04)) * std::conj(exp_integral_F(0.4))) <= 1e-9);
  }

  TEST_CASE("stationary_xi for the quadratic triple is sigma eta - X/2") {
    const PhaseTriple T = quadratic();
    std::mt19937_64 eng(5);
    std::uniform_real_distribution<double> U(-1, 1), S(0, 0.5);
    for (int k = 0; k < 100; ++k) {
      const Vec eta = v2(U(eng), U(eng)), X = v2(U(eng), U(eng));
      const double s = S(eng);
      const auto xi = stationary_xi(T, eta, s, X, v2(0.3, -0.2));
      REQUIRE(xi);
      CHECK((*xi - (s * eta - 0.5 * X)).norm() <= 1e-12);
      const Vec grad = T.a.gradient(*xi) + s * T.grad_xi(*xi, eta) + X;
      CHECK(grad.norm() <= 1e-10);
    }
    // sigma = 0: Xi does not depend on eta
    const auto x1 = stationary_xi(T, v2(0.1, 0.2), 0.0, v2(0.4, 0.0), v2(0, 0));
    const auto x2 = stationary_xi(T, v2(-0.7, 0.5), 0.0, v2(0.4, 0.0), v2(0, 0));
    CHECK((*x1 - *x2).norm() <= 1e-14);
  }

  TEST_CASE("water-wave phase path") {
    const PhaseTriple T = ww_triple(WWKind::MinusMinus, 1, 1);
    const auto pts = find_radial_resonances(T);
    REQUIRE(pts.size() == 1);
    const OutcomeChart chart(T, pts[0]);
    CHECK(chart.X_bar(0.0).norm() == doctest::Approx(kXbar).epsilon(1e-10));
    for (double s : {0.0, 1.0, 2.5, 4.0}) CHECK(chart.X_bar(s).norm() == doctest::Approx(kXbar).epsilon(1e-10));
    CHECK((chart.forward(0.7, 0.0) - chart.X_bar(0.7)).norm() <= 1e-14);
    for (double s : {0.0, 1.2, -2.0})
      for (double mu : {0.01, -0.05, 0.2}) {
        const auto back = chart.inverse(chart.forward(s, mu));
        REQUIRE(back);
        CHECK(std::abs(std::remainder(back->first - s, 2 * kPi)) <= 1e-9);
        CHECK(std::abs(back->second - mu) <= 1e-9);
      }

    const double mu = 0.05;
    const Vec X = chart.forward(0.0, mu);
    const PhasePath path(T, X, {v2(2 * kL2, 0), v2(kL2, 0)});
    std::mt19937_64 eng(9);
    std::uniform_real_distribution<double> S(-0.1, 0.1);
    for (int k = 0; k < 100; ++k) {
      const double s = S(eng);
      const auto sp = path.solve(s);
      REQUIRE(sp);
      const Vec gxi = T.a.gradient(sp->xi) + s * T.grad_xi(sp->xi, sp->eta) + X;
      CHECK(gxi.norm() <= 1e-10);
      CHECK(T.grad_eta(sp->xi, sp->eta).norm() <= 1e-10);
    }
    const double h = 1e-4;
    for (double s : {-0.08, 0.0, 0.05}) {
      const double fd = (path.zeta(s + h) - path.zeta(s - h)) / (2 * h);
      CHECK(path.dzeta(s) == doctest::Approx(fd).epsilon(1e-8).scale(1.0));
    }
    const auto sp0 = path.solve(0.0);
    const Vec g = T.grad_xi(sp0->xi, sp0->eta);
    const double closed = -g.dot(T.a.hessian(sp0->xi).ldlt().solve(g));
    const double fd2 = (path.zeta(h) - 2 * path.zeta(0) + path.zeta(-h)) / (h * h);
    CHECK(path.d2zeta(0.0) == doctest::Approx(closed).epsilon(1e-8));
    CHECK(fd2 == doctest::Approx(closed).epsilon(1e-6));
    const auto s0 = path.sigma0(-mu);
    REQUIRE(s0);
    CHECK(std::abs(*s0 + mu) <= 5 * mu * mu / std::abs(closed) + 1e-3);
  }

  TEST_CASE("predict_u_regime") {
    const PhaseTriple T = ww_triple(WWKind::MinusMinus, 1, 1);
    const OutcomeChart chart(T, find_radial_resonances(T).at(0));
    CHECK(predict_u_regime(chart, chart.X_bar(0.3), 1e4).regime == URegime::LogOverT);
    CHECK(predict_u_regime(chart, chart.forward(0.3, 0.3), 1e6).regime == URegime::LogMuOverT);
    const auto far = predict_u_regime(chart, v2(8.0, 0.0), 1e4);
    CHECK(far.regime == URegime::OneOverT);
    const auto p = predict_u_regime(chart, chart.forward(1.0, 0.3), 1e6);
    CHECK(p.mu == doctest::Approx(0.3).epsilon(1e-8));
  }

  TEST_CASE("epsilon0 lies in (0, 1/2]") {
    const PhaseTriple T = quadratic();
    std::vector<std::pair<Vec, Vec>> samples;
    for (int k = 0; k < 20; ++k) samples.push_back({v2(0.1 * k, 0.3), v2(0.05 * k, -0.2)});
    const double e = epsilon0(T, samples);
    CHECK(e > 0);
    CHECK(e <= 0.5);
  }
}
