#include "rlab/resonance.hpp"
#include "rlab/waterwaves.hpp"

#include <doctest.h>

#include <random>

using namespace rlab;

namespace {

PhaseTriple quadratic(int d = 2) {
  const Dispersion q = Dispersion::radial(d, RadialProfile::power(2.0));
  return PhaseTriple(q, q, q);
}

Vec v2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

const double kL2 = 0.70710678118654752440;
// tau'(2 lambda2), tau'(lambda2) for tau = sqrt(s + s^3), high-precision oracle
const double kXbar = 1.69922120097563197099, kTauL2 = 1.21372942926830855071;

}  // namespace

TEST_SUITE("resonance") {
  TEST_CASE("phase of the quadratic triple") {
    const PhaseTriple T = quadratic();
    CHECK(T.phi(v2(2, 0), v2(1, 0)) == doctest::Approx(-2.0));
    std::mt19937_64 eng(3);
    std::normal_distribution<double> N;
    for (int k = 0; k < 20; ++k) {
      const Vec xi = v2(N(eng), N(eng)), eta = v2(N(eng), N(eng));
      CHECK((T.grad_eta(xi, eta) - (4 * eta - 2 * xi)).norm() < 1e-12);
      CHECK((T.hess_eta(xi, eta) - 4 * Mat::Identity(2, 2)).norm() < 1e-12);
    }
    CHECK(T.grad_eta(v2(2, 1), v2(1, 0.5)).norm() < 1e-14);
  }

  TEST_CASE("water-wave -- phase vanishes at the second harmonic") {
    const PhaseTriple T = ww_triple(WWKind::MinusMinus, 1, 1);
    CHECK(std::abs(T.phi(v2(2 * kL2, 0), v2(kL2, 0))) < 1e-14);
    const Mat v = phase_eval(T, v2(2 * kL2, 0), v2(kL2, 0), PhaseQuantity::GradXi);
    CHECK(v.norm() == doctest::Approx(kXbar - kTauL2).epsilon(1e-12));
  }

  TEST_CASE("find_radial_resonances") {
    CHECK(find_radial_resonances(quadratic()).empty());
    const auto ww = find_radial_resonances(ww_triple(WWKind::MinusMinus, 1, 1));
    REQUIRE(ww.size() == 1);
    CHECK(ww[0].R == doctest::Approx(2 * kL2).epsilon(1e-10));
    CHECK(ww[0].lambda == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(ww[0].residual_phi <= 1e-10);
    CHECK(ww[0].residual_grad <= 1e-10);
    CHECK(find_radial_resonances(ww_triple(WWKind::PlusMinus, 1, 1)).empty());
    CHECK_THROWS_AS(find_radial_resonances(PhaseTriple(
                        Dispersion::generic(
                            2, [](const Vec& x) { return x.squaredNorm(); }, [](const Vec& x) { return Vec(2 * x); },
                            [](const Vec&) { return Mat(2 * Mat::Identity(2, 2)); }),
                        Dispersion::radial(2, RadialProfile::power(2)), Dispersion::radial(2, RadialProfile::power(2)))),
                    Unsupported);
  }

  TEST_CASE("returned points re-verify through phase_eval") {
    for (auto kind : {WWKind::MinusMinus}) {
      for (double g : {0.5, 1.0, 3.0}) {
        ResonanceSearch rs;
        rs.R_hi = 10 * std::sqrt(g);
        for (const auto& p : find_radial_resonances(ww_triple(kind, g, 1.0), rs)) {
          const PhaseTriple T = ww_triple(kind, g, 1.0);
          CHECK(std::abs(phase_eval(T, p.xi, p.eta, PhaseQuantity::Value)(0, 0)) <= 1e-10);
          CHECK(phase_eval(T, p.xi, p.eta, PhaseQuantity::GradEta).norm() <= 1e-10);
        }
      }
    }
  }

  TEST_CASE("conjugate_alpha") {
    const auto tau = waterwave_profile(1, 1);
    const double l0 = inflection_radius(tau);
    CHECK(l0 == doctest::Approx(0.39331989319032863916).epsilon(1e-12));
    CHECK(conjugate_alpha(tau, l0) == l0);
    // oracle values from an independent high-precision solve
    CHECK(conjugate_alpha(tau, 0.1) == doctest::Approx(1.29633711090651863).epsilon(1e-10));
    CHECK(conjugate_alpha(tau, 2.0) == doctest::Approx(0.0602486394565276223).epsilon(1e-10));
    for (double l : {0.1, 0.2, 1.0, 3.0}) {
      const double a = conjugate_alpha(tau, l);
      CHECK(std::abs(tau.d1(a) - tau.d1(l)) <= 1e-10);
      CHECK(conjugate_alpha(tau, a) == doctest::Approx(l).epsilon(1e-8));
    }
    CHECK(conjugate_alpha(tau.negated(), 0.2) == doctest::Approx(conjugate_alpha(tau, 0.2)));
    CHECK(1e-3 * conjugate_alpha(tau, 1e-3) == doctest::Approx(1.0 / 9).epsilon(0.01));
    CHECK_THROWS_AS(conjugate_alpha(tau, 0.0), DomainError);
  }

  TEST_CASE("conjugate_alpha is strictly decreasing") {
    const auto tau = waterwave_profile(1, 1);
    std::mt19937_64 eng(11);
    std::uniform_real_distribution<double> U(std::log(0.02), std::log(20.0));
    for (int k = 0; k < 50; ++k) {
      double a = std::exp(U(eng)), b = std::exp(U(eng));
      if (a > b) std::swap(a, b);
      if (b - a < 1e-6 || std::abs(a - 0.3933) < 1e-3 || std::abs(b - 0.3933) < 1e-3) continue;
      CHECK(conjugate_alpha(tau, a) > conjugate_alpha(tau, b));
    }
  }

  TEST_CASE("invert_conditions endpoints") {
    const auto a = waterwave_profile(1, 1).negated(), b = a, c = a;
    const double R = 2 * kL2, l = 0.5;
    const auto s0 = invert_conditions(a, b, c, R, l, 0.0);
    CHECK(s0[0] == doctest::Approx(a.d2(R) * (b.d2(l * R) + c.d2((1 - l) * R))));
    CHECK(s0[2] == doctest::Approx(a.d2(R)));
    const auto s1 = invert_conditions(a, b, c, R, l, 1.0);
    CHECK(s1[0] == doctest::Approx(b.d2(l * R) * c.d2((1 - l) * R)));
    CHECK(s1[2] == doctest::Approx(c.d2((1 - l) * R)));
    CHECK(s1[3] == doctest::Approx(c.d1((1 - l) * R)));
    CHECK(s0[3] == doctest::Approx((1 - l) * a.d1(R)));
    CHECK_THROWS_AS(invert_conditions(a, b, c, R, 0.0, 0.5), DomainError);
    CHECK_THROWS_AS(invert_conditions(a, b, c, -1.0, 0.5, 0.5), DomainError);
  }

  TEST_CASE("assumptions at the -- second-harmonic resonance") {
    const PhaseTriple T = ww_triple(WWKind::MinusMinus, 1, 1);
    const auto pts = find_radial_resonances(T);
    REQUIRE(pts.size() == 1);
    const auto rad = check_assumptions(T, pts[0]);
    CHECK(rad.method == A3Method::RadialClosedForm);
    CHECK(rad.all_pass());
    // det(-2 Hess tau(eta)) = 4 tau'' tau' / |eta| at lambda2
    CHECK(rad.A1_margin == doctest::Approx(4.32120810725112376).epsilon(1e-8));
    CHECK(rad.A2_margin == doctest::Approx(kXbar - kTauL2).epsilon(1e-10));
    for (const auto& s : rad.A3_samples) CHECK((s.block_ok || s.xi_ok));
    const auto gen = check_assumptions(T, pts[0], 101, 1e-9, A3Method::GenericDeterminant);
    REQUIRE(gen.A3_samples.size() == rad.A3_samples.size());
    for (size_t k = 0; k < gen.A3_samples.size(); ++k) {
      CHECK(gen.A3_samples[k].block_ok == rad.A3_samples[k].block_ok);
      CHECK(gen.A3_samples[k].xi_ok == rad.A3_samples[k].xi_ok);
    }
  }

  TEST_CASE("quadratic triple: A1 margin is det(4I)") {
    const PhaseTriple T = quadratic();
    ResonancePoint p;
    p.R = 1.0;
    p.lambda = 0.3;
    p.xi = v2(1, 0);
    p.eta = v2(0.3, 0);
    const auto r = check_assumptions(T, p);
    CHECK(r.A1_margin == doctest::Approx(16.0));
    CHECK(r.A1);
  }
}
