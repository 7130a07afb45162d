#include "rlab/dispersion.hpp"

#include <doctest.h>

#include <random>

using namespace rlab;

namespace {

// central differences of the scalar field, step h
Mat fd_hessian(const Dispersion& D, const Vec& x, double h = 1e-4) {
  const int d = static_cast<int>(x.size());
  Mat H(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      Vec e = Vec::Zero(d), f = Vec::Zero(d);
      e(i) = h;
      f(j) = h;
      H(i, j) = (D.value(x + e + f) - D.value(x + e - f) - D.value(x - e + f) + D.value(x - e - f)) / (4 * h * h);
    }
  return H;
}

std::vector<RadialProfile> families() {
  return {RadialProfile::power(2.0), RadialProfile::power(3.5, 0.7, 1.0), waterwave_profile(1.0, 1.0),
          RadialProfile::klein_gordon(1.3),
          RadialProfile::user([](double s) { return std::sqrt(1.0 + s * s * s); }, "sqrt(1+s^3)")};
}

}  // namespace

TEST_SUITE("dispersion") {
  TEST_CASE("radial_hessian matches finite differences on random points") {
    std::mt19937_64 eng(7);
    std::uniform_real_distribution<double> U(-2.0, 2.0);
    for (const auto& p : families())
      for (int d : {2, 3}) {
        const Dispersion D = Dispersion::radial(d, p);
        for (int k = 0; k < 25; ++k) {
          Vec x(d);
          for (int a = 0; a < d; ++a) x(a) = U(eng);
          if (x.norm() < 0.2) continue;
          const Mat H = radial_hessian(p, x), F = fd_hessian(D, x);
          CHECK((H - F).norm() <= 1e-5 * std::max(1.0, H.norm()));
        }
      }
  }

  TEST_CASE("gradient is tau'(|x|) x/|x|") {
    const auto p = waterwave_profile(2.0, 0.5);
    const Dispersion D = Dispersion::radial(2, p);
    Vec x(2);
    x << 0.3, -1.1;
    CHECK((D.gradient(x) - p.d1(x.norm()) * x / x.norm()).norm() < 1e-14);
    CHECK((D.hessian(x) - radial_hessian(p, x)).norm() < 1e-14);
  }

  TEST_CASE("water-wave Hessian degenerates exactly at lambda0") {
    const auto p = waterwave_profile(1.0, 1.0);
    const double l0 = 0.39331989319032863916;  // sqrt((2 sqrt 3 - 3)/3)
    double a = 0.2, b = 0.6;
    for (int it = 0; it < 100; ++it) {
      const double m = 0.5 * (a + b);
      (p.d2(m) < 0 ? a : b) = m;
    }
    CHECK(std::abs(0.5 * (a + b) - l0) < 1e-8);
    CHECK_FALSE(hessian_nondegenerate(p, l0).flag);
    CHECK(hessian_nondegenerate(p, l0 - 1e-8).flag);
    CHECK(hessian_nondegenerate(p, l0 + 1e-8).flag);
    CHECK(hessian_nondegenerate(p, 0.7071).flag);
  }

  TEST_CASE("negation flips every derivative") {
    for (const auto& p : families()) {
      const auto n = p.negated();
      for (double s : {0.3, 1.0, 2.5}) {
        CHECK(n.value(s) == doctest::Approx(-p.value(s)));
        CHECK(n.d1(s) == doctest::Approx(-p.d1(s)));
        CHECK(n.d2(s) == doctest::Approx(-p.d2(s)));
      }
      CHECK(n.negated().sign() == p.sign());
    }
  }

  TEST_CASE("closed forms") {
    const auto kg = RadialProfile::klein_gordon(2.0);
    CHECK(kg.value(1.5) == doctest::Approx(2.5));
    CHECK(kg.d1(1.5) == doctest::Approx(0.6));
    CHECK(kg.d2(1.5) == doctest::Approx(4.0 / 15.625));
    const auto pw = RadialProfile::power(3.0, 2.0, 1.0);
    CHECK(pw.value(2.0) == doctest::Approx(17.0));
    CHECK(pw.d2(2.0) == doctest::Approx(24.0));
  }

  TEST_CASE("user profiles get accurate numerical derivatives") {
    auto u = RadialProfile::user([](double s) { return std::sin(s) + s * s; });
    for (double s : {0.5, 1.0, 2.0}) {
      CHECK(u.d1(s) == doctest::Approx(std::cos(s) + 2 * s).epsilon(1e-9));
      CHECK(u.d2(s) == doctest::Approx(-std::sin(s) + 2).epsilon(1e-7));
    }
  }

  TEST_CASE("window and domain errors") {
    const auto p = waterwave_profile(1.0, 1.0);
    CHECK_THROWS_AS(p.check_window(1e4), DomainError);
    CHECK_THROWS_AS(p.check_window(0.0), DomainError);
    CHECK_NOTHROW(RadialProfile::power(2.0).check_window(0.0));
    CHECK_THROWS_AS(radial_hessian(p, Vec::Zero(2)), DomainError);
    CHECK_THROWS_AS(Dispersion::radial(4, p), DomainError);
    CHECK_THROWS_AS(waterwave_profile(-1.0, 1.0), DomainError);
    Vec far = Vec::Zero(2);
    far(0) = 5e3;
    CHECK_THROWS_AS(Dispersion::radial(2, p).check_point(far), DomainError);
  }
}
