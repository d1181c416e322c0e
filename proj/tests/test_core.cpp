#include <gtest/gtest.h>

#include <cmath>

#include "mdr/core/io.hpp"
#include "mdr/core/linalg.hpp"
#include "mdr/core/operations.hpp"
#include "mdr/entropy/alpha.hpp"
#include "mdr/random.hpp"

using namespace mdr;

namespace {

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

}  // namespace

TEST(Layout, LookupAndSelect) {
  const SystemLayout l({"A", "B", "C"}, {2, 3, 4});
  EXPECT_EQ(l.total_dim(), 24u);
  EXPECT_EQ(l.dim_of("B"), 3u);
  EXPECT_EQ(l.select({"C", "A"}).labels(), (std::vector<std::string>{"A", "C"}));
  EXPECT_THROW((void)l.index_of("D"), Error);
  EXPECT_THROW(SystemLayout({"A", "A"}, {2, 2}), Error);
}

TEST(Types, RejectInvalidObjects) {
  const SystemLayout q("S", 2);
  EXPECT_THROW(DensityOperator(q, diag({0.7, 0.7})), Error);
  EXPECT_THROW(DensityOperator(q, diag({1.5, -0.5})), Error);
  EXPECT_THROW(DensityOperator(q, diag({1.0, 0.0, 0.0})), Error);
  EXPECT_THROW(Povm(q, {diag({1.0, 0.0})}), Error);
  EXPECT_THROW(QuantumChannel(q, q, {diag({1.0, 0.5})}), Error);
}

TEST(Tensor, IdentityAndIndexConvention) {
  EXPECT_LT(max_abs_diff(tensor(Matrix::Identity(2, 2), Matrix::Identity(2, 2)), Matrix::Identity(4, 4)), 1e-15);
  // leftmost factor is the slowest index
  EXPECT_LT(max_abs_diff(tensor(diag({1, 0}), diag({0, 1})), diag({0, 1, 0, 0})), 1e-15);
}

TEST(PartialTrace, ProductAndEntangled) {
  const SystemLayout a("A", 2), b("B", 3);
  const DensityOperator ra(a, diag({0.25, 0.75}));
  const DensityOperator rb(b, diag({0.2, 0.3, 0.5}));
  const auto ab = tensor(ra, rb);
  EXPECT_LT(max_abs_diff(partial_trace(ab, {"A"}).matrix(), ra.matrix()), 1e-14);
  EXPECT_LT(max_abs_diff(partial_trace(ab, {"B"}).matrix(), rb.matrix()), 1e-14);
  EXPECT_LT(max_abs_diff(partial_trace(bell(), {"A"}).matrix(), 0.5 * Matrix::Identity(2, 2)), 1e-14);
}

TEST(PartialTrace, KeptSystemsStayInLayoutOrder) {
  random::SeededStream s(1, 0);
  const auto rho = random::random_density(SystemLayout({"A", "B", "C"}, {2, 3, 2}), 4, s);
  const auto ca = partial_trace(rho, {"C", "A"});
  const auto ac = partial_trace(rho, {"A", "C"});
  EXPECT_EQ(ca.layout().labels(), (std::vector<std::string>{"A", "C"}));
  EXPECT_LT(max_abs_diff(ca.matrix(), ac.matrix()), 1e-15);
  // reordering is explicit
  const auto swapped = permute_systems(ac, {"C", "A"});
  EXPECT_EQ(swapped.layout().labels(), (std::vector<std::string>{"C", "A"}));
  EXPECT_LT(max_abs_diff(permute_systems(swapped, {"A", "C"}).matrix(), ac.matrix()), 1e-15);
  EXPECT_NEAR(std::real(swapped.matrix()(1, 1)), std::real(ac.matrix()(2, 2)), 1e-15);
}

TEST(HermitianPower, SupportConvention) {
  EXPECT_LT(max_abs_diff(hermitian_power(diag({4, 1}), 0.5), diag({2, 1})), 1e-14);
  EXPECT_LT(max_abs_diff(hermitian_power(diag({1, 0}), -1.0), diag({1, 0})), 1e-14);
}

TEST(OperatorNorm, Examples) {
  EXPECT_NEAR(operator_norm(Matrix::Identity(3, 3)), 1.0, 1e-15);
  EXPECT_NEAR(operator_norm(diag({2, -5})), 5.0, 1e-14);
}

TEST(ApplyChannel, IdentityAndDepolarizing) {
  random::SeededStream s(3, 0);
  const auto rho = random::random_density(2, 2, s);
  const SystemLayout q("S", 2);
  EXPECT_LT(max_abs_diff(apply_channel(QuantumChannel::identity(q), rho).matrix(), rho.matrix()), 1e-15);

  Matrix x(2, 2), y(2, 2), z(2, 2);
  x << 0, 1, 1, 0;
  y << 0, Complex(0, -1), Complex(0, 1), 0;
  z << 1, 0, 0, -1;
  const QuantumChannel depol(q, q, {0.5 * Matrix::Identity(2, 2), 0.5 * x, 0.5 * y, 0.5 * z});
  EXPECT_LT(max_abs_diff(apply_channel(depol, rho).matrix(), 0.5 * Matrix::Identity(2, 2)), 1e-14);
}

TEST(ApplyChannel, ActsOnNamedSubsystem) {
  random::SeededStream s(4, 0);
  const auto rho = random::random_density(SystemLayout({"S", "R"}, {2, 2}), 4, s);
  const auto ch = random::random_channel(SystemLayout("S", 2), SystemLayout({"S", "M"}, {2, 3}), 2, s);
  const auto out = apply_channel(ch, rho);
  EXPECT_EQ(out.layout().total_dim(), 12u);
  // R is untouched
  EXPECT_LT(max_abs_diff(partial_trace(out, {"R"}).matrix(), partial_trace(rho, {"R"}).matrix()), 1e-13);
}

TEST(Measure, BasisExamples) {
  const SystemLayout q("S", 2);
  const auto zb = Povm::from_basis(q, Matrix::Identity(2, 2));
  const auto p0 = outcome_distribution(DensityOperator(q, diag({1, 0})), zb);
  EXPECT_NEAR(p0[0], 1.0, 1e-15);
  Vector plus(2);
  plus << 1, 1;
  const auto pp = outcome_distribution(pure_state(q, plus), zb);
  EXPECT_NEAR(pp[0], 0.5, 1e-15);
  EXPECT_NEAR(pp[1], 0.5, 1e-15);

  Matrix h(2, 2);
  h << 1, 1, 1, -1;
  const auto xb = Povm::from_basis(q, h / std::sqrt(2.0));
  for (double r : {0.0, 0.3, 1.0}) {
    const auto px = outcome_distribution(DensityOperator(q, diag({(1 + r) / 2, (1 - r) / 2})), xb);
    EXPECT_NEAR(px[0], 0.5, 1e-15);
  }
}

TEST(Measure, CqBranchesSumToReducedState) {
  random::SeededStream s(5, 0);
  const auto rho = random::random_density(SystemLayout({"S", "R"}, {3, 2}), 6, s);
  const auto z = random::random_povm(SystemLayout("S", 3), 4, s);
  const auto cq = measure(rho, z, "S");
  EXPECT_EQ(cq.outcomes(), 4u);
  EXPECT_LT(max_abs_diff(cq.marginal(), partial_trace(rho, {"R"}).matrix()), 1e-13);
  const auto emb = cq.embed("Z");
  EXPECT_EQ(emb.layout().labels(), (std::vector<std::string>{"Z", "R"}));
}

TEST(Purify, ReducesToInput) {
  random::SeededStream s(6, 0);
  for (std::size_t rank : {1u, 2u, 3u}) {
    const auto rho = random::random_density(3, rank, s);
    const auto psi = purify(rho);
    EXPECT_EQ(psi.layout().dim_of("ref"), rank);
    EXPECT_NEAR(psi.matrix().squaredNorm(), 1.0, 1e-12);  // pure
    EXPECT_LT(max_abs_diff(partial_trace(psi, {"S"}).matrix(), rho.matrix()), 1e-12);
  }
  const DensityOperator mixed(SystemLayout("S", 2), 0.5 * Matrix::Identity(2, 2));
  const auto p = purify(mixed);
  EXPECT_LT(max_abs_diff(partial_trace(p, {"ref"}).matrix(), 0.5 * Matrix::Identity(2, 2)), 1e-14);
}

// random generators --------------------------------------------------------

TEST(Random, StreamsAreReproducibleAndDistinct) {
  random::SeededStream a(42, 7), b(42, 7), c(42, 8);
  const double x = a.normal();
  EXPECT_EQ(x, b.normal());
  EXPECT_NE(x, c.normal());
}

TEST(Random, DensityRankAndValidity) {
  random::SeededStream s(7, 0);
  for (std::size_t rank = 1; rank <= 4; ++rank) {
    const auto rho = random::random_density(4, rank, s);
    const auto sp = psd_spectrum(rho.matrix());
    std::size_t nz = 0;
    for (Eigen::Index i = 0; i < sp.values.size(); ++i) nz += sp.values(i) > 1e-12;
    EXPECT_EQ(nz, rank);
  }
}

TEST(Random, HaarPureMeanIsMaximallyMixed) {
  random::SeededStream s(8, 0);
  Matrix mean = Matrix::Zero(2, 2);
  const int n = 10000;
  for (int k = 0; k < n; ++k) mean += random::haar_pure(2, s).matrix();
  mean /= n;
  EXPECT_LT(0.5 * trace_norm(mean - 0.5 * Matrix::Identity(2, 2)), 0.02);
  EXPECT_NEAR(random::haar_pure(1, s).matrix()(0, 0).real(), 1.0, 1e-15);
}

TEST(Random, ChannelsAndPovmsAreValid) {
  random::SeededStream s(9, 0);
  const auto ch = random::random_channel(2, 3, 1, s);  // single Kraus: isometry
  EXPECT_EQ(ch.kraus().size(), 1u);
  const auto p = random::random_povm(SystemLayout("S", 3), 5, s);
  EXPECT_EQ(p.size(), 5u);
}

TEST(Random, MubPairIsUnbiased) {
  random::SeededStream s(10, 0);
  for (std::size_t d : {2u, 3u, 4u}) {
    const auto mub = random::random_mub_pair(SystemLayout("S", d), s);
    for (const auto& x : mub.x.elements())
      for (const auto& z : mub.z.elements()) EXPECT_NEAR((x * z).trace().real(), 1.0 / double(d), 1e-12);
  }
}

// file formats -------------------------------------------------------------------

TEST(Io, RoundTrip) {
  random::SeededStream s(11, 0);
  const auto rho = random::random_density(SystemLayout({"S", "R"}, {2, 3}), 3, s);
  const auto back = io::state_from_json(io::Json::parse(io::state_to_json(rho).dump()));
  EXPECT_EQ(back.layout().labels(), rho.layout().labels());
  EXPECT_LT(max_abs_diff(back.matrix(), rho.matrix()), 1e-15);

  const auto p = random::random_povm(SystemLayout("S", 2), 3, s);
  const auto pb = io::povm_from_json(io::povm_to_json(p));
  EXPECT_LT(max_abs_diff(pb.elements()[2], p.elements()[2]), 1e-15);

  const auto ch = random::random_channel(SystemLayout("S", 2), SystemLayout({"S", "M"}, {2, 2}), 2, s);
  const auto cb = io::channel_from_json(io::channel_to_json(ch));
  EXPECT_EQ(cb.output_layout().labels(), ch.output_layout().labels());
  EXPECT_LT(max_abs_diff(cb.kraus()[1], ch.kraus()[1]), 1e-15);
}

TEST(Io, DefaultLabelsAndRealEntries) {
  const auto j = io::Json::parse(R"({"dims": [2, 2], "matrix": [[0.5,0,0,0.5],[0,0,0,0],[0,0,0,0],[0.5,0,0,0.5]]})");
  const auto rho = io::state_from_json(j);
  EXPECT_EQ(rho.layout().labels(), (std::vector<std::string>{"A", "B"}));
}

TEST(Io, MalformedInputsThrow) {
  EXPECT_THROW(io::state_from_json(io::Json::parse(R"({"dims": [2]})")), Error);
  EXPECT_THROW(io::state_from_json(io::Json::parse(R"({"dims": [2], "matrix": [[1, 0], [0]]})")), Error);
  EXPECT_THROW(io::state_from_json(io::Json::parse(R"({"dims": [0], "matrix": [[1]]})")), Error);
  EXPECT_THROW(io::state_from_json(io::Json::parse(R"({"dims": [2], "matrix": [[1, "x"], [0, 0]]})")), Error);
  EXPECT_THROW(io::load_state("/nonexistent/state.json"), Error);
}

TEST(Io, NumberFormatting) {
  EXPECT_EQ(io::format_double(kInf), "inf");
  EXPECT_EQ(io::format_double(-kInf), "-inf");
  EXPECT_EQ(io::number_to_json(kInf), io::Json("inf"));
  EXPECT_EQ(std::stod(io::format_double(0.1)), 0.1);
}
