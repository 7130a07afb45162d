#include "rlab/spectral.hpp"

#include <doctest.h>

#include <random>

using namespace rlab;

namespace {

Vec v2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

std::function<cplx(const Vec&)> bump(const Vec& c, double w, cplx amp = 1.0) {
  return [=](const Vec& x) { return amp * std::exp(-(x - c).squaredNorm() / (2 * w * w)); };
}

PhaseTriple quadratic(int d = 2, double sign_a = 1.0, double offset_b = 0.0) {
  const RadialProfile q = RadialProfile::power(2.0);
  const Dispersion a = Dispersion::radial(d, sign_a > 0 ? q : q.negated());
  return PhaseTriple(a, Dispersion::radial(d, RadialProfile::power(2.0, 1.0, offset_b)), Dispersion::radial(d, q));
}

double max_diff(const CVec& a, const CVec& b) { return (a - b).cwiseAbs().maxCoeff(); }

BilinearSymbol gaussian_symbol() {
  return BilinearSymbol([](const Vec& xi, const Vec& eta) { return std::exp(-0.5 * xi.squaredNorm() - eta.squaredNorm()); },
                        {}, "gaussian bump");
}

}  // namespace

TEST_SUITE("spectral") {
  TEST_CASE("grid layout") {
    const SpectralGrid g(2, 8, 4.0);
    CHECK(g.dxi() == doctest::Approx(1.0));
    CHECK(g.size() == 64);
    CHECK(g.point(0)(0) == doctest::Approx(-4.0));
    CHECK(g.locate(v2(1.0, -2.0)) >= 0);
    CHECK((g.point(g.locate(v2(1.0, -2.0))) - v2(1.0, -2.0)).norm() < 1e-12);
    CHECK(g.locate(v2(0.5, 0.0)) == -1);
    CHECK_THROWS_AS(SpectralGrid(2, 7, 1.0), DomainError);
    CHECK_THROWS_AS(SpectralGrid(4, 8, 1.0), DomainError);
  }

  TEST_CASE("Plancherel and physical round trip") {
    for (int d : {2, 3}) {
      const SpectralGrid g(d, d == 2 ? 32 : 16, 6.0);
      Vec c = Vec::Zero(d);
      c(0) = 0.7;
      const auto F = SpectralField::from_function(g, bump(c, 0.8, cplx(1, 0.5)));
      const CVec x = to_physical(F);
      CHECK(physical_l2(g, x) == doctest::Approx(F.l2()).epsilon(1e-10));
      CHECK(max_diff(from_physical(g, x).values, F.values) <= 1e-12 * F.sup());
    }
  }

  TEST_CASE("constant symbol gives the physical product") {
    const SpectralGrid g(2, 48, 8.0);
    const auto F = SpectralField::from_function(g, bump(v2(0.5, 0), 0.4));
    const auto G = SpectralField::from_function(g, bump(v2(-0.3, 0.6), 0.5, cplx(0, 1)));
    const auto m = BilinearSymbol::constant(1.0 / (2 * kPi));
    const CVec lhs = to_physical(pseudo_product(m, F, G, ProductMode::Direct));
    const CVec rhs = to_physical(F).cwiseProduct(to_physical(G));
    CHECK(max_diff(lhs, rhs) <= 1e-10 * rhs.cwiseAbs().maxCoeff());
  }

  TEST_CASE("spikes") {
    const SpectralGrid g(2, 16, 4.0);
    SpectralField F(g), G(g);
    const Vec e0 = v2(1.0, -0.5), z0 = v2(0.5, 1.5);
    F.values(g.locate(e0)) = cplx(2, 1);
    G.values(g.locate(z0)) = cplx(0.5, -1);
    const auto m = gaussian_symbol();
    const auto out = pseudo_product(m, F, G, ProductMode::Direct);
    const Eigen::Index k = g.locate(e0 + z0);
    CHECK(std::abs(out.values(k) - m(e0 + z0, e0) * cplx(2, 1) * cplx(0.5, -1) * g.weight()) <= 1e-14);
    CHECK(out.values.cwiseAbs().sum() == doctest::Approx(std::abs(out.values(k))));
  }

  TEST_CASE("direct and separated modes agree") {
    const SpectralGrid g(2, 24, 6.0);
    std::mt19937_64 eng(4);
    std::normal_distribution<double> N;
    auto random_field = [&](double w) {
      auto F = SpectralField::from_function(g, bump(v2(0.2, -0.1), w));
      for (Eigen::Index k = 0; k < g.size(); ++k) F.values(k) *= cplx(1 + 0.3 * N(eng), 0.3 * N(eng));
      return F;
    };
    const auto F = random_field(0.25), G = random_field(0.3);
    // separable in (eta, zeta) apart from a weak coupling, so the rank stays small
    const BilinearSymbol bumpy([](const Vec& xi, const Vec& eta) { return std::exp(-0.1 * xi.squaredNorm() - eta.squaredNorm()); },
                               {INFINITY, 2.5, 2.5}, "weakly coupled bump");
    const auto m = bumpy.with_aca(g);
    REQUIRE(m.separated());
    CHECK(m.separated()->max_error <= 1e-8);
    const auto D = pseudo_product(m, F, G, ProductMode::Direct);
    const auto S = pseudo_product(m, F, G, ProductMode::Separated);
    CHECK(max_diff(D.values, S.values) <= 1e-8 * D.sup());
    CHECK(m.separated()->rank <= 64);
    CHECK_THROWS_AS(pseudo_product(bumpy, F, G, ProductMode::Separated), DomainError);
  }

  TEST_CASE("pseudo-product is bilinear") {
    const SpectralGrid g(2, 16, 7.0);
    const auto F = SpectralField::from_function(g, bump(v2(0.3, 0), 0.4));
    const auto G = SpectralField::from_function(g, bump(v2(0, 0.2), 0.4));
    auto F2 = F;
    F2.values *= cplx(-1.5, 0.25);
    const auto a = pseudo_product(gaussian_symbol(), F2, G, ProductMode::Direct);
    const auto b = pseudo_product(gaussian_symbol(), F, G, ProductMode::Direct);
    CHECK(max_diff(a.values, cplx(-1.5, 0.25) * b.values) <= 1e-12 * a.sup());
  }

  TEST_CASE("aliasing is refused") {
    const SpectralGrid g(2, 16, 3.0);
    const auto F = SpectralField::from_function(g, bump(v2(0, 0), 1.0));
    CHECK_THROWS_AS(pseudo_product(BilinearSymbol::constant(1), F, F, ProductMode::Direct), NumericalRefusal);
  }

  TEST_CASE("propagator") {
    const SpectralGrid g(2, 32, 6.0);
    const auto F = SpectralField::from_function(g, bump(v2(0.5, 0.5), 0.7));
    const auto T = quadratic();
    CHECK(max_diff(propagate(T.a, 0.0, F).values, F.values) == 0.0);
    const auto two = propagate(T.a, 0.7, propagate(T.a, 1.3, F));
    CHECK(max_diff(two.values, propagate(T.a, 2.0, F).values) <= 1e-12);
    CHECK(propagate(T.a, 17.0, F).l2() == doctest::Approx(F.l2()).epsilon(1e-12));
  }

  TEST_CASE("evaluate_u matches the FFT on grid points") {
    const SpectralGrid g(2, 32, 6.0);
    const auto F = SpectralField::from_function(g, bump(v2(0.5, -0.2), 0.6));
    const auto a = quadratic().a;
    const double t = 0.4;
    const CVec fft = to_physical(propagate(a, t, F));
    std::vector<Vec> pts;
    std::vector<Eigen::Index> idx;
    for (Eigen::Index k = 0; k < g.size(); k += 37) {
      pts.push_back(g.x_point(k));
      idx.push_back(k);
    }
    const auto u = evaluate_u(F, a, t, pts);
    for (size_t j = 0; j < idx.size(); ++j) CHECK(std::abs(u[j] - fft(idx[j])) <= 1e-10);
    // a single spike is a plane wave
    SpectralField S(g);
    S.values(g.locate(v2(0.75, 0.375))) = 1.0;
    const auto w = evaluate_u(S, a, 3.0, {v2(0, 0), v2(1.7, -4.2), v2(30, 11)});
    CHECK(std::abs(w[0]) == doctest::Approx(std::abs(w[1])));
    CHECK(std::abs(w[0]) == doctest::Approx(std::abs(w[2])));
  }

  TEST_CASE("free Schroedinger decays like 1/t in 2D") {
    // sup |u| sits at x = 0; closed form pi / |1/(2w^2) - i t| for unit amplitude
    const double w = 0.7;
    const SpectralGrid g(2, 1800, 5.2);
    const auto F = SpectralField::from_function(g, bump(v2(0, 0), w));
    const auto a = quadratic().a;
    std::vector<double> lt, lu;
    for (double t : {10.0, 20.0, 40.0, 70.0, 100.0}) {
      const double u = std::abs(evaluate_u(F, a, t, {v2(0, 0)})[0]);
      const double exact = kPi / std::abs(cplx(1 / (2 * w * w), -t)) / (2 * kPi);
      CHECK(u == doctest::Approx(exact).epsilon(1e-6));
      lt.push_back(std::log(t));
      lu.push_back(std::log(u));
    }
    const double slope = (lu.back() - lu.front()) / (lt.back() - lt.front());
    CHECK(std::abs(-slope - 1.0) <= 0.05);
  }

  TEST_CASE("Duhamel evolution") {
    const SpectralGrid g(2, 16, 4.0);
    const auto F = SpectralField::from_function(g, bump(v2(0.2, 0), 0.15));
    const auto G = SpectralField::from_function(g, bump(v2(-0.1, 0.1), 0.15));
    const auto T = quadratic();
    const auto m = gaussian_symbol();

    SUBCASE("zero symbol") {
      const auto h = duhamel_evolve(T, BilinearSymbol::zero(), F, G, {2.0, 10, {1.0, 2.0}});
      REQUIRE(h.size() == 2);
      CHECK(h[1].sup() == 0.0);
    }
    SUBCASE("first step is dt times the pseudo-product") {
      const CVec T0 = pseudo_product(m, F, G, ProductMode::Direct).values;
      auto err = [&](double dt) {
        const auto h = duhamel_evolve(T, m, F, G, {dt, 1, {}, ProductMode::Direct});
        return max_diff(h[0].values, dt * T0);
      };
      const double r = err(0.02) / err(0.01);
      CHECK(r == doctest::Approx(4.0).epsilon(0.05));
    }
    SUBCASE("fourth order") {
      auto run = [&](int steps) {
        return duhamel_evolve(T, m, F, G, {1.0, steps, {}, ProductMode::Direct})[0].values;
      };
      const CVec ref = run(512);
      const double e1 = max_diff(run(32), ref), e2 = max_diff(run(64), ref);
      CHECK(e1 / e2 == doctest::Approx(16.0).epsilon(0.25));
    }
    SUBCASE("step-size refusal names the required steps") {
      try {
        duhamel_evolve(T, m, F, G, {50.0, 2, {}, ProductMode::Direct});
        FAIL("expected a refusal");
      } catch (const NumericalRefusal& e) {
        CHECK(std::string(e.what()).find("steps >=") != std::string::npos);
      }
    }
  }

  TEST_CASE("profile limit without time resonance") {
    // a = -|.|^2, b = |.|^2 + 3, c = |.|^2: phi >= 3 everywhere
    const SpectralGrid g(2, 16, 4.0);
    const auto T = quadratic(2, -1.0, 3.0);
    const auto F = SpectralField::from_function(g, bump(v2(0.2, 0), 0.2));
    const auto G = SpectralField::from_function(g, bump(v2(0, -0.2), 0.2));
    const auto m = gaussian_symbol();
    const auto lim = profile_limit(T, m, F, G);
    CVec ref = CVec::Zero(g.size());
    for (Eigen::Index o = 0; o < g.size(); ++o)
      for (Eigen::Index i = 0; i < g.size(); ++i) {
        const Vec xi = g.point(o), eta = g.point(i);
        const Eigen::Index j = g.locate(xi - eta);
        if (j < 0) continue;
        ref(o) -= m(xi, eta) * F.values(i) * G.values(j) / (cplx(0, 1) * T.phi(xi, eta)) * g.weight();
      }
    CHECK(max_diff(lim.h_inf.values, ref) <= 1e-6);
    CHECK(max_diff(lim.h_inf.values, ref) <= 1e-5 * ref.cwiseAbs().maxCoeff());
    for (char c : lim.converged) CHECK(c);
  }
}
