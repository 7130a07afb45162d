#include "rlab/aca.hpp"

#include <doctest.h>

#include <random>

using namespace rlab;

TEST_SUITE("aca") {
  TEST_CASE("exact low-rank matrices are recovered") {
    std::mt19937_64 eng(1);
    std::normal_distribution<double> N;
    Mat A(40, 3), B(30, 3);
    for (Eigen::Index i = 0; i < A.size(); ++i) A.data()[i] = N(eng);
    for (Eigen::Index i = 0; i < B.size(); ++i) B.data()[i] = N(eng);
    const Mat M = A * B.transpose();
    const LowRank lr = aca([&](Eigen::Index i, Eigen::Index j) { return M(i, j); }, 40, 30);
    CHECK(lr.rank() <= 4);
    CHECK((lr.U * lr.V.transpose() - M).cwiseAbs().maxCoeff() <= 1e-10 * M.cwiseAbs().maxCoeff());
  }

  TEST_CASE("smooth kernel: certified error matches a full comparison") {
    auto k = [](Eigen::Index i, Eigen::Index j) {
      const double x = 0.05 * static_cast<double>(i), y = 0.04 * static_cast<double>(j);
      return std::exp(-(x - y) * (x - y));
    };
    const LowRank lr = aca(k, 60, 70);
    double worst = 0;
    for (Eigen::Index i = 0; i < 60; ++i)
      for (Eigen::Index j = 0; j < 70; ++j) worst = std::max(worst, std::abs(lr.U.row(i).dot(lr.V.row(j)) - k(i, j)));
    CHECK(worst <= 1e-8);
    CHECK(lr.max_error == doctest::Approx(worst).epsilon(1e-6).scale(1e-14));
    CHECK(lr.rank() < 30);
  }

  TEST_CASE("zero matrix has rank zero") {
    const LowRank lr = aca([](Eigen::Index, Eigen::Index) { return 0.0; }, 10, 12);
    CHECK(lr.rank() == 0);
    CHECK(lr.max_error == 0.0);
  }
}
