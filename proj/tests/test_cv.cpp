#include <gtest/gtest.h>

#include <cmath>

#include "mdr/cv.hpp"

using namespace mdr;
using namespace mdr::cv;

TEST(Quadrature, GaussLegendreIntegratesPolynomialsExactly) {
  const auto r = quad::gauss_legendre(8);
  double s0 = 0, s14 = 0;
  for (std::size_t i = 0; i < r.nodes.size(); ++i) {
    s0 += r.weights[i];
    s14 += r.weights[i] * std::pow(r.nodes[i], 14);
  }
  EXPECT_NEAR(s0, 2.0, 1e-14);
  EXPECT_NEAR(s14, 2.0 / 15.0, 1e-14);
  const auto m = quad::mapped(r, 1.0, 3.0);
  double s = 0;
  for (std::size_t i = 0; i < m.nodes.size(); ++i) s += m.weights[i] * m.nodes[i] * m.nodes[i];
  EXPECT_NEAR(s, 26.0 / 3.0, 1e-13);
}

TEST(DiffEntropy, Examples) {
  const double e = std::numbers::e;
  EXPECT_NEAR(gaussian_diff_entropy(1.0 / (2 * kPi * e)), 0.0, 1e-14);
  EXPECT_NEAR(gaussian_diff_entropy(4.0 / (2 * kPi * e)), 1.0, 1e-14);
  EXPECT_NEAR(gaussian_diff_entropy(1.0), 2.0471, 1e-4);
  EXPECT_THROW(gaussian_diff_entropy(0.0), Error);
}

TEST(CovariantError, Limits) {
  EXPECT_NEAR(covariant_error(GaussianModel(1.0 / (8 * kPi), 1e12)), 0.0, 1e-10);
  double prev = kInf;
  for (double lam : {1.0, 1e-2, 1e-4, 1e-6}) {
    const double e = covariant_error(GaussianModel(1.0, lam));
    EXPECT_LT(e, prev);
    prev = e;
  }
  // weak coupling: each factor 100 in lambda costs log2(10) bits
  const double e4 = covariant_error(GaussianModel(1.0, 1e-4));
  EXPECT_NEAR(e4 - prev, std::log2(10.0), 1e-4);
}

TEST(CovariantDisturbance, MatchesConvolutionQuadrature) {
  for (double lam : {0.1, 1.0, 10.0})
    for (double vs : {0.5, 1.0, 2.0}) {
      const GaussianModel m(vs, lam);
      EXPECT_NEAR(covariant_disturbance(m), covariant_disturbance_numeric(m), 1e-4) << lam << " " << vs;
    }
  EXPECT_NEAR(covariant_disturbance(GaussianModel(1.0, 1e9)), 0.0, 1e-8);
}

TEST(CovariantDisturbance, DoesNotDependOnHbarOrInputWidth) {
  const double ref = covariant_disturbance(GaussianModel(1.0, 0.3));
  EXPECT_NEAR(covariant_disturbance(GaussianModel(7.0, 0.3, 0.2)), ref, 1e-12);
}

TEST(CvGap, ClosedFormValues) {
  EXPECT_NEAR(cv_gap(1.0), 1.0 / (4 * kLn2), 1e-15);
  EXPECT_NEAR(cv_gap(1.0), 0.3607, 1e-4);
  EXPECT_NEAR(cv_gap(1e12), 1.0 / (2 * kLn2), 1e-11);
  EXPECT_LT(cv_gap(1e-8), 1e-7);
  EXPECT_NEAR(cv_gap(0.01), 0.00714, 1e-5);
}

TEST(CvReport, GapIdentityAndMonotonicity) {
  double prev = -kInf;
  for (int k = 0; k < 50; ++k) {
    const double lam = std::pow(10.0, -3.0 + 6.0 * k / 49.0);
    for (double vs : {0.3, 1.0}) {
      for (double hbar : {1.0, 0.5}) {
        const auto r = cv_mdr_report(GaussianModel(vs, lam, hbar));
        EXPECT_NEAR(r.gap, cv_gap(lam), 1e-10);
        EXPECT_GE(r.gap, 0.0);
      }
    }
    const double g = cv_mdr_report(GaussianModel(1.0, lam)).gap;
    EXPECT_GE(g, prev);
    prev = g;
  }
  EXPECT_LT(cv_mdr_report(GaussianModel(1.0, 0.01)).gap, 8e-3);
}

TEST(Microscope, ProductFormula) {
  const GaussianModel m(1.0, 1.0);
  const auto r = microscope_check(0.5, m, 0.0);
  EXPECT_NEAR(r.d_p, std::exp2(gaussian_diff_entropy(m.v_p())) / (4 * kPi), 1e-14);
  EXPECT_NEAR(r.product, 0.5 * r.d_p, 1e-15);
  EXPECT_EQ(r.bound, 0.5);
}

TEST(Microscope, NumericDisturbanceRespectsTheBound) {
  // ratio product / bound depends on V_S / dq^2 only, and stays above 1
  const MicroscopeOptions opt{1025, 64, 0.5};
  for (double kappa : {0.05, 0.5, 4.0}) {
    const double dq = 1.0;
    const GaussianModel m(kappa * dq * dq, 1.0);
    const auto r = microscope_check(dq, m, microscope_disturbance(dq, m, opt));
    EXPECT_GE(r.product / r.bound, 1.0) << kappa;
    const GaussianModel scaled(kappa * 4.0, 1.0);
    const auto s = microscope_check(2.0, scaled, microscope_disturbance(2.0, scaled, opt));
    EXPECT_NEAR(s.product / s.bound, r.product / r.bound, 1e-6) << kappa;
  }
}

TEST(Complementarity, SmallProductLimitAndRefinement) {
  const auto r = complementarity_constant_detail(0.1, 0.1);
  const double ratio = r.c / r.small_product_limit;
  EXPECT_GE(ratio, 0.999);
  EXPECT_LE(ratio, 1.0);
  EXPECT_NEAR(r.c, r.refined, 1e-8);
}

TEST(Complementarity, MonotoneAndSaturating) {
  double prev = 0.0;
  for (double p : {0.01, 0.1, 1.0, 4.0, 10.0, 30.0}) {
    const double c = complementarity_constant(std::sqrt(p), std::sqrt(p));
    EXPECT_GT(c, prev);
    EXPECT_LE(c, 1.0);
    prev = c;
  }
  EXPECT_GT(prev, 0.999);
  // depends on dq dp / hbar only
  EXPECT_NEAR(complementarity_constant(0.2, 5.0, 2.0), complementarity_constant(1.0, 0.5), 1e-12);
}

TEST(MaxEntropy, IndependentGaussiansGiveHalfOrderEntropy) {
  // h_max(X|Y) = h_{1/2}(X) = log2(2 sqrt(2 pi V)) for independent X, Y
  const quad::UniformGrid x(-12, 12, 801), y(-12, 12, 801);
  const double h = diff_cond_max_entropy_numeric(x, y, [](double a, double b) {
    return gaussian_pdf(a, 0.0, 1.5) * gaussian_pdf(b, 0.0, 0.7);
  });
  EXPECT_NEAR(h, std::log2(2.0 * std::sqrt(2.0 * kPi * 1.5)), 1e-8);
}

TEST(MaxEntropy, TableOverloadAgrees) {
  const quad::UniformGrid x(-8, 8, 201), y(-8, 8, 201);
  Eigen::MatrixXd t(201, 201);
  auto f = [](double a, double b) { return gaussian_pdf(a, 0.3 * b, 0.5) * gaussian_pdf(b, 0.0, 1.0); };
  for (std::size_t i = 0; i < 201; ++i)
    for (std::size_t j = 0; j < 201; ++j) t(Eigen::Index(i), Eigen::Index(j)) = f(x.at(i), y.at(j));
  EXPECT_NEAR(diff_cond_max_entropy_numeric(x, y, t), diff_cond_max_entropy_numeric(x, y, f), 1e-14);
}

TEST(MaxEntropy, NarrowingRidgeDivergesDownward) {
  double prev = kInf;
  for (double v : {1.0, 0.1, 0.01}) {
    const quad::UniformGrid x(-14, 14, 2801), y(-12, 12, 481);
    const double h = diff_cond_max_entropy_numeric(x, y, [&](double a, double b) {
      return gaussian_pdf(a, b, v) * gaussian_pdf(b, 0.0, 4.0);
    });
    EXPECT_LT(h, prev);
    // X given Y is Gaussian with variance v
    EXPECT_NEAR(h, 0.5 * std::log2(8 * kPi * v), 1e-3);
    prev = h;
  }
}

TEST(MaxEntropy, RejectsUnnormalizedDensity) {
  const quad::UniformGrid x(-1, 1, 11);
  EXPECT_THROW(diff_cond_max_entropy_numeric(x, x, [](double, double) { return 1.0; }), Error);
}

TEST(CovariantErrorOracle, QuadratureMatchesClosedForm) {
  for (double lam : {0.1, 1.0, 10.0})
    for (double vs : {0.5, 1.0, 2.0}) {
      const GaussianModel m(vs, lam);
      EXPECT_NEAR(covariant_error_numeric(m, 1024), covariant_error(m), 1e-4);
    }
}

TEST(CoarseGraining, GaussianKlClosedForm) {
  EXPECT_NEAR(gaussian_kl({0, 1}, {0, 1}), 0.0, 1e-15);
  EXPECT_NEAR(gaussian_kl({0, 1}, {1, 1}), 0.5 / kLn2, 1e-15);
}

TEST(CoarseGraining, BinsSumToOne) {
  const auto b = bin_gaussian({0.3, 0.8}, 0.125, 6.0);
  EXPECT_EQ(b.weights.size(), 96u);
  double s = 0;
  for (double w : b.weights) s += w;
  EXPECT_NEAR(s, 1.0, 1e-14);
}

TEST(CoarseGraining, MonotoneConvergenceToKl) {
  for (const auto& [p, q] : std::vector<std::pair<Gaussian1D, Gaussian1D>>{
           {{0, 1}, {0, 2}}, {{0, 1}, {1, 1}}, {{0.5, 0.7}, {-0.3, 1.9}}}) {
    const auto levels = binned_rel_entropy_convergence(p, q, 12);
    ASSERT_EQ(levels.size(), 13u);
    for (std::size_t k = 1; k < levels.size(); ++k) EXPECT_GE(levels[k].divergence, levels[k - 1].divergence - 1e-12);
    EXPECT_LT(std::abs(levels.back().divergence - gaussian_kl(p, q)), 1e-3);
    EXPECT_LE(levels.back().divergence, gaussian_kl(p, q) + 1e-12);
  }
  for (const auto& l : binned_rel_entropy_convergence({0.2, 1.3}, {0.2, 1.3}, 6)) EXPECT_NEAR(l.divergence, 0.0, 1e-14);
}
