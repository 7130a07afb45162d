#include "rlab/analysis.hpp"

#include <doctest.h>

#include <random>

using namespace rlab;

namespace {

DecaySeries synthetic(const std::function<double(double)>& f, double lo = 10, double hi = 1000, int n = 30) {
  DecaySeries s;
  s.t = logspace(lo, hi, n);
  for (double t : s.t) s.value.push_back(f(t));
  return s;
}

}  // namespace

TEST_SUITE("analysis") {
  TEST_CASE("weighted norms") {
    auto gauss = [](const Vec& x) { return cplx(std::exp(-0.5 * x.squaredNorm())); };
    // int (1 + r^2) e^{-r^2} 2 pi r dr = 2 pi
    const auto w1 = weighted_norm(gauss, 2, 1.0, 9.0, 301);
    CHECK(w1.value == doctest::Approx(std::sqrt(2 * kPi)).epsilon(1e-8));
    CHECK_FALSE(w1.tail_flag);
    const auto w0 = weighted_norm(gauss, 2, 0.0, 9.0, 301);
    CHECK(w0.value == doctest::Approx(std::sqrt(kPi)).epsilon(1e-8));
    auto scaled = [&](const Vec& x) { return cplx(0, -3.0) * gauss(x); };
    CHECK(weighted_norm(scaled, 2, 1.0, 9.0, 301).value == doctest::Approx(3 * w1.value));
    auto slow = [](const Vec& x) { return cplx(1.0 / (1.0 + x.squaredNorm())); };
    CHECK(weighted_norm(slow, 2, 1.0, 20.0, 201).tail_flag);
  }

  TEST_CASE("grid norm equals the physical L2 norm at s = 0") {
    const SpectralGrid g(2, 64, 8.0);
    CVec v(g.size());
    for (Eigen::Index k = 0; k < g.size(); ++k) v(k) = std::exp(-0.5 * g.x_point(k).squaredNorm());
    CHECK(weighted_norm(g, v, 0.0).value == doctest::Approx(physical_l2(g, v)).epsilon(1e-12));
    CHECK(weighted_norm(g, v, 1.0).value == doctest::Approx(std::sqrt(2 * kPi)).epsilon(1e-8));
  }

  TEST_CASE("fit_decay on exact models") {
    const auto p = fit_decay(synthetic([](double t) { return 3 * std::pow(t, -1.5); }));
    CHECK(p.model == DecayModel::Power);
    CHECK(p.gamma == doctest::Approx(1.5).epsilon(1e-3));
    CHECK(p.amplitude == doctest::Approx(3.0).epsilon(1e-6));
    const auto l = fit_decay(synthetic([](double t) { return 2 * std::log(t) / t; }));
    CHECK(l.model == DecayModel::LogPower);
    CHECK(l.margin > 2.0);
    CHECK(l.decisive);
    CHECK(l.amplitude == doctest::Approx(2.0).epsilon(1e-6));
    FitOptions free;
    free.free_log_gamma = true;
    const auto lf = fit_decay(synthetic([](double t) { return 2 * std::log(t) * std::pow(t, -1.3); }), free);
    CHECK(lf.gamma_log == doctest::Approx(1.3).epsilon(1e-6));
  }

  TEST_CASE("fit_decay is invariant under amplitude scaling and noise-robust") {
    std::mt19937_64 eng(8);
    std::normal_distribution<double> N(0, 0.01);
    auto noisy = synthetic([&](double t) { return std::pow(t, -1.0) * std::exp(N(eng)); });
    const auto a = fit_decay(noisy);
    auto scaled = noisy;
    for (double& v : scaled.value) v *= 1e-7;
    const auto b = fit_decay(scaled);
    CHECK(a.gamma_power == doctest::Approx(b.gamma_power).epsilon(1e-10));
    CHECK(a.rms_power == doctest::Approx(b.rms_power).epsilon(1e-8));
    CHECK(std::abs(a.gamma_power - 1.0) < 0.02);
  }

  TEST_CASE("fit_decay preconditions") {
    auto s = synthetic([](double t) { return 1 / t; });
    s.value[3] = 0.0;
    CHECK_THROWS_AS(fit_decay(s), DomainError);
    CHECK_THROWS_AS(fit_decay(synthetic([](double t) { return 1 / t; }, 10, 1000, 5)), DomainError);
    FitOptions w;
    w.t_lo = 100;
    w.t_hi = 1000;
    const auto f = fit_decay(synthetic([](double t) { return 1 / t; }, 10, 1000, 40), w);
    CHECK(f.t_lo == 100);
    CHECK(f.points >= 10);
  }

  TEST_CASE("convergence_rate") {
    std::vector<double> t = logspace(10, 320, 8), d;
    for (double x : t) d.push_back(0.4 / x);
    const auto r = convergence_rate(t, d);
    CHECK(r.rate == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(r.monotone);
    d[4] *= 3;
    CHECK_FALSE(convergence_rate(t, d).monotone);
    CHECK_THROWS_AS(convergence_rate({1, 2, 3}, {1, 1, 1}), DomainError);
    std::vector<CVec> h;
    const CVec hinf = CVec::Constant(5, cplx(1, 1));
    for (double x : t) h.push_back(hinf + CVec::Constant(5, cplx(0, std::pow(x, -0.5))));
    CHECK(convergence_rate(t, h, hinf).rate == doctest::Approx(0.5));
  }

  TEST_CASE("singularity scan on synthetic profiles") {
    const auto offs = logspace(1e-6, 1e-2, 12);
    Vec p0(2), p1(2);
    p0 << 0.0, 0.0;
    p1 << 1.0, 0.0;
    auto sur = [](const Vec& x) { return x(0) - 0.37; };
    auto h2 = [&](const Vec& x) { return cplx(1.0, 0.2) + cplx(0.3, -0.1) * std::log(std::abs(sur(x))); };
    const auto s2 = singularity_scan(h2, sur, p0, p1, offs);
    CHECK(s2.crossing(0) == doctest::Approx(0.37).epsilon(1e-12));
    CHECK(std::abs(s2.slope_plus - cplx(0.3, -0.1)) <= 1e-8);
    CHECK(std::abs(s2.slope_minus - cplx(0.3, -0.1)) <= 1e-8);
    CHECK(s2.r2() > 0.999999);

    Vec q0 = Vec::Zero(3), q1 = Vec::Zero(3);
    q1(0) = 1.0;
    auto h3 = [&](const Vec& x) { return cplx(2.0 + std::sqrt(std::abs(sur(x))), 0.0); };
    const auto s3 = singularity_scan(h3, sur, q0, q1, offs);
    CHECK(s3.holder() == doctest::Approx(0.5).epsilon(1e-3));
    CHECK_THROWS_AS(singularity_scan(h2, sur, p1, p1, offs), DomainError);
  }
}
