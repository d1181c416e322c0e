#include <gtest/gtest.h>

#include <cmath>

#include "mdr/core/linalg.hpp"
#include "mdr/core/operations.hpp"
#include "mdr/entropy/conditional.hpp"
#include "mdr/entropy/divergence.hpp"
#include "mdr/entropy/properties.hpp"
#include "mdr/random.hpp"

using namespace mdr;

namespace {

const std::vector<AlphaOrder>& alphas() {
  static const std::vector<AlphaOrder> a = {AlphaOrder::half(), AlphaOrder(0.75), AlphaOrder::one(), AlphaOrder(2.0),
                                            AlphaOrder(5.0), AlphaOrder::infinity()};
  return a;
}

Matrix diag(std::initializer_list<double> v) {
  Matrix m = Matrix::Zero(static_cast<Eigen::Index>(v.size()), static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) {
    m(i, i) = x;
    ++i;
  }
  return m;
}

DensityOperator bell() {
  Vector v = Vector::Zero(4);
  v(0) = v(3) = 1.0;
  return pure_state(SystemLayout({"A", "B"}, {2, 2}), v);
}

DensityOperator correlated_bits() {
  return {SystemLayout({"A", "B"}, {2, 2}), diag({0.5, 0, 0, 0.5})};
}

/// Brute-force max of -D_alpha(rho || I (x) eta) over a grid on the qubit Bloch ball.
double grid_conditional(const DensityOperator& rho, AlphaOrder a, int n) {
  const SystemLayout b("B", 2);
  double best = -kInf;
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j < 2 * n; ++j)
      for (double rr : {0.0, 0.25, 0.5, 0.7, 0.85, 0.95, 0.99}) {
        const double th = M_PI * i / n, ph = M_PI * j / n;
        const double x = rr * std::sin(th) * std::cos(ph), y = rr * std::sin(th) * std::sin(ph), z = rr * std::cos(th);
        Matrix eta(2, 2);
        eta << (1 + z) / 2, Complex(x, -y) / 2.0, Complex(x, y) / 2.0, (1 - z) / 2;
        best = std::max(best, conditional_objective(rho, "B", DensityOperator(b, eta), a));
      }
  return best;
}

}  // namespace

TEST(Alpha, ParseAndClassify) {
  EXPECT_TRUE(parse_alpha("inf").is_infinity());
  EXPECT_TRUE(parse_alpha("0.5").is_half());
  EXPECT_TRUE(parse_alpha("1").is_one());
  EXPECT_EQ(parse_alpha_list("0.5,2,inf").size(), 3u);
  EXPECT_THROW(parse_alpha("0.3"), Error);
  EXPECT_THROW(parse_alpha("two"), Error);
  EXPECT_THROW(parse_alpha("2x"), Error);
  EXPECT_THROW(parse_alpha_list(","), Error);
}

// classical family -------------------------------------------------------------

TEST(ClassicalDivergence, Examples) {
  const std::vector<double> p{1.0, 0.0}, u{0.5, 0.5};
  for (const auto& a : alphas()) {
    EXPECT_NEAR(renyi_rel_entropy_classical(u, u, a), 0.0, 1e-14);
    EXPECT_NEAR(renyi_rel_entropy_classical(p, u, a), 1.0, 1e-14) << a.to_string();
  }
}

TEST(ClassicalDivergence, SupportViolationIsInfinite) {
  const std::vector<double> p{0.5, 0.5}, q{1.0, 0.0};
  EXPECT_TRUE(std::isinf(renyi_rel_entropy_classical(p, q, AlphaOrder::one())));
  EXPECT_TRUE(std::isinf(renyi_rel_entropy_classical(p, q, AlphaOrder(2.0))));
  // below 1 only disjoint supports give infinity
  EXPECT_TRUE(std::isfinite(renyi_rel_entropy_classical(p, q, AlphaOrder::half())));
  EXPECT_TRUE(std::isinf(renyi_rel_entropy_classical(std::vector<double>{0, 1}, q, AlphaOrder::half())));
}

TEST(ClassicalDivergence, RejectsNonDistributions) {
  EXPECT_THROW(renyi_rel_entropy_classical(std::vector<double>{0.6, 0.6}, std::vector<double>{0.5, 0.5},
                                           AlphaOrder::one()),
               Error);
}

TEST(RenyiEntropy, Examples) {
  for (const auto& a : alphas()) {
    EXPECT_NEAR(renyi_entropy(std::vector<double>{0.25, 0.25, 0.25, 0.25}, a), 2.0, 1e-14);
    EXPECT_NEAR(renyi_entropy(std::vector<double>{0, 1, 0}, a), 0.0, 1e-14);
  }
  EXPECT_NEAR(renyi_entropy(std::vector<double>{0.75, 0.25}, AlphaOrder::one()), 0.811278124459133, 1e-12);
  EXPECT_NEAR(renyi_entropy(std::vector<double>{0.75, 0.25}, AlphaOrder::infinity()), -std::log2(0.75), 1e-14);
  EXPECT_NEAR(renyi_entropy(std::vector<double>{0.75, 0.25}, AlphaOrder::half()),
              2 * std::log2(std::sqrt(0.75) + std::sqrt(0.25)), 1e-14);
}

TEST(RenyiEntropy, NonincreasingInAlpha) {
  random::SeededStream s(21, 0);
  for (int t = 0; t < 20; ++t) {
    const auto rho = random::random_density(3, 3, s);
    double prev = kInf;
    for (const auto& a : alphas()) {
      const double h = renyi_entropy(rho, a);
      EXPECT_LE(h, prev + 1e-12);
      prev = h;
    }
  }
}

// sandwiched divergence --------------------------------------------------------

TEST(Sandwiched, PureAgainstMaximallyMixed) {
  const SystemLayout q("S", 2);
  const DensityOperator zero(q, diag({1, 0})), mixed(q, diag({0.5, 0.5}));
  for (const auto& a : alphas()) {
    EXPECT_NEAR(sandwiched_rel_entropy(zero, mixed, a), 1.0, 1e-12) << a.to_string();
    EXPECT_NEAR(sandwiched_rel_entropy(mixed, mixed, a), 0.0, 1e-12);
  }
}

TEST(Sandwiched, ReducesToClassicalOnCommutingPairs) {
  random::SeededStream s(22, 0);
  const SystemLayout l("S", 3);
  const Matrix u = random::haar_unitary(3, s);
  for (int t = 0; t < 10; ++t) {
    std::vector<double> p(3), q(3);
    double sp = 0, sq = 0;
    for (int i = 0; i < 3; ++i) {
      p[i] = s.uniform() + 0.01;
      q[i] = s.uniform() + 0.01;
      sp += p[i];
      sq += q[i];
    }
    Matrix dp = Matrix::Zero(3, 3), dq = Matrix::Zero(3, 3);
    for (int i = 0; i < 3; ++i) {
      p[i] /= sp;
      q[i] /= sq;
      dp(i, i) = p[i];
      dq(i, i) = q[i];
    }
    const DensityOperator rho(l, u * dp * u.adjoint()), sigma(l, u * dq * u.adjoint());
    for (const auto& a : alphas())
      EXPECT_NEAR(sandwiched_rel_entropy(rho, sigma, a), renyi_rel_entropy_classical(p, q, a), 1e-10);
  }
}

TEST(Sandwiched, SupportViolationIsInfinite) {
  const SystemLayout q("S", 2);
  const DensityOperator mixed(q, diag({0.5, 0.5})), zero(q, diag({1, 0}));
  EXPECT_TRUE(std::isinf(sandwiched_rel_entropy(mixed, zero, AlphaOrder::one())));
  EXPECT_TRUE(std::isinf(sandwiched_rel_entropy(mixed, zero, AlphaOrder::infinity())));
}

TEST(Sandwiched, DataProcessingUnderRandomChannels) {
  random::SeededStream s(23, 0);
  for (int t = 0; t < 30; ++t) {
    const auto rho = random::random_density(3, 1 + t % 3, s);
    const auto sigma = random::random_density(3, 3, s);
    const auto ch = random::random_channel(3, 2, 2, s);
    for (const auto& a : alphas()) {
      const double before = sandwiched_rel_entropy(rho, sigma, a);
      const double after = sandwiched_rel_entropy(apply_channel(ch, rho), apply_channel(ch, sigma), a);
      EXPECT_LE(after, before + 1e-9) << "alpha " << a.to_string();
    }
  }
}

TEST(Sandwiched, NondecreasingInAlpha) {
  random::SeededStream s(24, 0);
  for (int t = 0; t < 20; ++t) {
    const auto rho = random::random_density(2, 2, s);
    const auto sigma = random::random_density(2, 2, s);
    double prev = -kInf;
    for (const auto& a : alphas()) {
      const double d = sandwiched_rel_entropy(rho, sigma, a);
      EXPECT_GE(d, prev - 1e-10);
      prev = d;
    }
  }
}

// conditional entropies ------------------------------------------------------------

TEST(ConditionalRenyi, ProductStateGivesMarginalEntropy) {
  const DensityOperator ra(SystemLayout("A", 2), diag({0.75, 0.25}));
  random::SeededStream s(25, 0);
  const auto rb = random::random_density(SystemLayout("B", 2), 2, s);
  const auto ab = tensor(ra, rb);
  for (const auto& a : alphas()) {
    const auto r = conditional_renyi_entropy(ab, "B", a);
    EXPECT_TRUE(r.converged);
    EXPECT_NEAR(r.value, renyi_entropy(ra, a), 1e-7) << a.to_string();
  }
}

TEST(ConditionalRenyi, GridOracleOnQubitConditioning) {
  random::SeededStream s(26, 0);
  for (int t = 0; t < 3; ++t) {
    const auto rho = random::random_density(SystemLayout({"A", "B"}, {2, 2}), 2, s);
    for (const auto& a : {AlphaOrder(0.75), AlphaOrder(2.0)}) {
      const double solver = conditional_renyi_entropy(rho, "B", a).value;
      const double grid = grid_conditional(rho, a, 24);
      // the grid is a feasible subset: never above the optimum, and close to it
      EXPECT_LE(grid, solver + 1e-9);
      EXPECT_NEAR(grid, solver, 2e-2);
    }
  }
}

TEST(ConditionalRenyi, EntangledAndClassicalExamples) {
  for (const auto& a : alphas()) {
    EXPECT_NEAR(conditional_renyi_entropy(correlated_bits(), "B", a).value, 0.0, 1e-7) << a.to_string();
    EXPECT_NEAR(conditional_renyi_entropy(bell(), "B", a).value, -1.0, 1e-7) << a.to_string();
  }
}

TEST(ConditionalRenyi, NonincreasingInAlpha) {
  random::SeededStream s(27, 0);
  for (int t = 0; t < 10; ++t) {
    const auto rho = random::random_density(SystemLayout({"A", "B"}, {2, 3}), 1 + t % 6, s);
    double prev = kInf;
    for (const auto& a : alphas()) {
      const double h = conditional_renyi_entropy(rho, "B", a).value;
      EXPECT_LE(h, prev + 1e-7) << a.to_string();
      prev = h;
    }
  }
}

TEST(ConditionalRenyi, DualityOnPureStates) {
  // H_alpha(A|B) = -H_beta(A|C) for 1/alpha + 1/beta = 2
  random::SeededStream s(28, 0);
  for (int t = 0; t < 5; ++t) {
    const auto psi = random::haar_pure(SystemLayout({"A", "B", "C"}, {2, 2, 2}), s);
    const auto ab = partial_trace(psi, {"A", "B"});
    const auto ac = partial_trace(psi, {"A", "C"});
    const double h2 = conditional_renyi_entropy(ab, "B", AlphaOrder(2.0)).value;
    const double h23 = conditional_renyi_entropy(ac, "C", AlphaOrder(2.0 / 3.0)).value;
    EXPECT_NEAR(h2, -h23, 1e-6);
  }
}

TEST(MinEntropy, ExamplesAndCertificate) {
  const DensityOperator ra(SystemLayout("A", 2), diag({0.75, 0.25}));
  random::SeededStream s(29, 0);
  const auto rb = random::random_density(SystemLayout("B", 3), 3, s);
  const auto r = min_entropy(tensor(ra, rb), "B");
  EXPECT_NEAR(r.value, -std::log2(0.75), 1e-8);
  EXPECT_NEAR(min_entropy(bell(), "B").value, -1.0, 1e-8);
  EXPECT_NEAR(min_entropy(tensor(DensityOperator(SystemLayout("A", 2), diag({1, 0})), rb), "B").value, 0.0, 1e-8);

  // rho <= 2^{-H} I (x) eta
  const auto rho = random::random_density(SystemLayout({"A", "B"}, {2, 2}), 3, s);
  const auto m = min_entropy(rho, "B");
  ASSERT_TRUE(m.certificate.has_value());
  const Matrix bound = std::exp2(-m.value) * tensor(Matrix::Identity(2, 2), m.certificate->matrix()) - rho.matrix();
  EXPECT_GT(psd_spectrum(bound).values.minCoeff(), -1e-7);
}

TEST(MaxEntropy, Examples) {
  EXPECT_NEAR(max_entropy(bell(), "B").value, -1.0, 1e-8);
  EXPECT_NEAR(max_entropy(correlated_bits(), "B").value, 0.0, 1e-8);
  const DensityOperator ra(SystemLayout("A", 2), diag({0.75, 0.25}));
  const DensityOperator rb(SystemLayout("B", 2), diag({0.4, 0.6}));
  EXPECT_NEAR(max_entropy(tensor(ra, rb), "B").value, 2 * std::log2(std::sqrt(0.75) + std::sqrt(0.25)), 1e-8);
}

TEST(MaxEntropy, MatchesFidelityAscent) {
  random::SeededStream s(30, 0);
  for (int t = 0; t < 10; ++t) {
    const auto rho = random::random_density(SystemLayout({"A", "B"}, {2, 2}), 1 + t % 4, s);
    EXPECT_NEAR(max_entropy(rho, "B").value, conditional_renyi_by_ascent(rho, "B", 0.5).value, 1e-7);
  }
}

TEST(CqMaxEntropy, Examples) {
  Eigen::MatrixXd indep(2, 2), corr(2, 2), mixed(2, 2);
  indep << 0.25, 0.25, 0.25, 0.25;
  corr << 0.5, 0, 0, 0.5;
  mixed << 0.5, 0.25, 0, 0.25;  // joint(x, m): Q^0 = (1, 0), Q^1 = (1/2, 1/2)
  EXPECT_NEAR(cq_max_entropy(indep), 1.0, 1e-14);
  EXPECT_NEAR(cq_max_entropy(corr), 0.0, 1e-14);
  EXPECT_NEAR(cq_max_entropy(mixed), std::log2(1.5), 1e-14);

  // embedded as a diagonal state on (X, M), the general solver agrees
  Matrix d = Matrix::Zero(4, 4);
  for (int x = 0; x < 2; ++x)
    for (int m = 0; m < 2; ++m) d(2 * x + m, 2 * x + m) = mixed(x, m);
  EXPECT_NEAR(max_entropy(DensityOperator(SystemLayout({"X", "M"}, {2, 2}), d), "M").value, std::log2(1.5), 1e-8);
}

// proof ingredients ---------------------------------------------------------------

TEST(MainInequality, EqualStatesGiveEntropyGap) {
  random::SeededStream s(31, 0);
  const auto rho = random::random_density(SystemLayout({"A", "B"}, {2, 2}), 4, s);
  for (const auto& a : alphas()) {
    const double m = check_main_inequality(rho, rho, "B", a);
    EXPECT_NEAR(m, conditional_renyi_entropy(rho, "B", a).value - min_entropy(rho, "B").value, 1e-7);
    EXPECT_GE(m, -1e-7);
  }
}

TEST(MainInequality, RandomPairs) {
  random::SeededStream s(32, 0);
  for (int t = 0; t < 40; ++t) {
    const auto rho = random::random_density(SystemLayout({"A", "B"}, {2, 2}), 1 + t % 4, s);
    const auto sigma = random::random_density(SystemLayout({"A", "B"}, {2, 2}), 4, s);
    EXPECT_GE(check_main_inequality(rho, sigma, "B", alphas()[t % alphas().size()]), -1e-7);
  }
}

TEST(AlphaOneConditioning, MarginalIsOptimal) {
  random::SeededStream s(33, 0);
  for (int t = 0; t < 100; ++t) {
    const auto rho = random::random_density(SystemLayout({"A", "B"}, {2, 2}), 1 + t % 4, s);
    const auto rep = check_lemma2_optimality(rho, "B", 20, s);
    EXPECT_TRUE(rep.holds) << "trial " << t << " margin " << rep.min_margin;
  }
}

TEST(Sandwiched, ScalingOfTheSecondArgument) {
  random::SeededStream s(34, 0);
  for (int t = 0; t < 10; ++t) {
    const auto rho = random::random_density(3, 1 + t % 3, s);
    const auto sigma = random::random_density(3, 3, s);
    for (const auto& a : alphas())
      for (double lam : {0.3, 2.0, 17.0})
        EXPECT_NEAR(sandwiched_divergence(rho.matrix(), lam * sigma.matrix(), a),
                    sandwiched_rel_entropy(rho, sigma, a) - std::log2(lam), 1e-9);
  }
}

TEST(Sandwiched, AntimonotoneInTheSecondArgument) {
  // sigma <= eta implies D(rho||sigma) >= D(rho||eta)
  random::SeededStream s(35, 0);
  for (int t = 0; t < 20; ++t) {
    const auto rho = random::random_density(2, 1 + t % 2, s);
    const Matrix sigma = random::random_density(2, 2, s).matrix();
    const Matrix eta = sigma + 0.5 * random::random_density(2, 1 + t % 2, s).matrix();
    for (const auto& a : alphas())
      EXPECT_GE(sandwiched_divergence(rho.matrix(), sigma, a), sandwiched_divergence(rho.matrix(), eta, a) - 1e-10);
  }
}

TEST(ConditionalRenyi, CertificatesReproduceTheOptimum) {
  random::SeededStream s(36, 0);
  for (int t = 0; t < 6; ++t) {
    const auto rho = random::random_density(SystemLayout({"A", "B"}, {2, 2}), 1 + t % 4, s);
    for (const auto& a : {AlphaOrder(0.75), AlphaOrder::one(), AlphaOrder(2.0), AlphaOrder::infinity()}) {
      const auto r = conditional_renyi_entropy(rho, "B", a);
      ASSERT_TRUE(r.converged);
      ASSERT_TRUE(r.certificate.has_value());
      EXPECT_NEAR(conditional_objective(rho, "B", *r.certificate, a), r.value, 1e-7) << a.to_string();
    }
  }
}
