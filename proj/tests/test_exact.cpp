#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>
#include <cmath>

#include "specmix/corpus.hpp"
#include "specmix/exact.hpp"
#include "specmix/glauber.hpp"
#include "specmix/matrix.hpp"

using namespace specmix;

namespace {

ListColouringInstance edge(int q) { return ListColouringInstance::uniform(Graph(2, {{0, 1}}), q); }
ListColouringInstance path3(int q) { return ListColouringInstance::uniform(Graph(3, {{0, 1}, {1, 2}}), q); }

double eigen_radius(const Matrix& m) {
  Eigen::MatrixXd e(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) e(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = m(i, j);
  return e.eigenvalues().cwiseAbs().maxCoeff();
}

MarginalVector mv(std::map<Colour, double> probs) { return MarginalVector{0, std::move(probs)}; }

}  // namespace

TEST(Enumerate, EdgeHasSixEquallyLikelyStates) {
  const DistributionTable t = enumerate(edge(3));
  ASSERT_EQ(t.support.size(), 6U);
  for (double m : t.mass) EXPECT_NEAR(m, 1.0 / 6.0, 1e-15);
}

TEST(Enumerate, SingletonAndInfeasible) {
  EXPECT_EQ(enumerate(ListColouringInstance(Graph(1), {{0}})).support.size(), 1U);
  const auto k3 = ListColouringInstance::uniform(Graph(3, {{0, 1}, {1, 2}, {0, 2}}), 2);
  EXPECT_TRUE(enumerate(k3).support.empty());
}

TEST(Enumerate, CapCountsVisitedNodes) {
  EXPECT_THROW(count_colourings(ListColouringInstance::uniform(Graph(6), 3), {}, 100), CapacityError);
  EXPECT_EQ(count_colourings(ListColouringInstance::uniform(Graph(6), 3)), 729U);
}

TEST(Marginal, SpecExamples) {
  const MarginalVector u = marginal(edge(3), {}, 0);
  for (Colour c : {0, 1, 2}) EXPECT_NEAR(u(c), 1.0 / 3.0, 1e-15);
  const MarginalVector v = marginal(edge(3), {{0, 0}}, 1);
  EXPECT_EQ(v(0), 0.0);
  EXPECT_NEAR(v(1), 0.5, 1e-15);
  EXPECT_NEAR(v(2), 0.5, 1e-15);
  const MarginalVector iso = marginal(ListColouringInstance(Graph(1), {{0, 1}}), {}, 0);
  EXPECT_NEAR(iso(0), 0.5, 1e-15);
}

TEST(Marginal, InfeasiblePinningThrows) {
  EXPECT_THROW(marginal(path3(2), {{0, 0}, {2, 1}}, 1), InfeasibleError);
  EXPECT_THROW(marginal(edge(3), {{0, 0}}, 0), ContractError);
}

TEST(MarginalRecursion, SpecExamples) {
  EXPECT_NEAR(marginal_recursion(edge(3), 0, 0), 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(marginal_recursion(ListColouringInstance(Graph(1), {{0, 1}}), 0, 0), 0.5, 1e-15);
  EXPECT_NEAR(marginal_recursion(path3(3), 1, 0), 1.0 / 3.0, 1e-12);
}

TEST(MarginalRecursion, MatchesEnumerationOnCorpus) {
  for (const auto& inst : small_corpus())
    for (Vertex v = 0; v < inst.size(); ++v) {
      const MarginalVector m = marginal(inst, {}, v);
      for (Colour c : inst.list(v)) EXPECT_NEAR(marginal_recursion(inst, v, c), m(c), 1e-12) << inst.key();
    }
}

TEST(TvDistance, SpecExamples) {
  EXPECT_EQ(tv_distance(mv({{0, 0.5}, {1, 0.5}}), mv({{0, 0.5}, {1, 0.5}})), 0.0);
  EXPECT_NEAR(tv_distance(mv({{1, 0.5}, {2, 0.5}}), mv({{0, 0.5}, {2, 0.5}})), 0.5, 1e-15);
  EXPECT_EQ(tv_distance(mv({{0, 1.0}}), mv({{1, 1.0}})), 1.0);
}

TEST(InfluenceMatrix, EdgeIsHalf) {
  const InfluenceMatrix im = influence_matrix(edge(3), {});
  EXPECT_NEAR(im.entries(0, 1), 0.5, 1e-15);
  EXPECT_NEAR(im.entries(1, 0), 0.5, 1e-15);
  EXPECT_EQ(im.entries(0, 0), 0.0);
  EXPECT_EQ(im.argmax[0][1], (std::pair<Colour, Colour>{0, 1}));
  EXPECT_NEAR(induced_norm(im.entries, NormKind::infinity), 0.5, 1e-15);
}

TEST(InfluenceMatrix, IsolatedPairIsZero) {
  const InfluenceMatrix im = influence_matrix(ListColouringInstance::uniform(Graph(2), 2), {});
  EXPECT_EQ(im.entries.max_abs_diff(Matrix(2, 2)), 0.0);
}

TEST(InfluenceMatrix, PathEndpointsQuarter) {
  const InfluenceMatrix im = influence_matrix(path3(3), {});
  EXPECT_NEAR(im.entries(0, 2), 0.25, 1e-15);
  EXPECT_NEAR(im.entries(2, 0), 0.25, 1e-15);
}

TEST(InfluenceMatrix, PinnedOrderFollowsFreeVertices) {
  const InfluenceMatrix im = influence_matrix(path3(3), {{1, 1}});
  EXPECT_EQ(im.order, (std::vector<Vertex>{0, 2}));
  EXPECT_EQ(im.entries(0, 1), 0.0);
}

TEST(InfluenceMatrix, RConventionDiagonalIsIndicator) {
  const ListColouringInstance inst(Graph(3, {{0, 1}, {1, 2}}), {{0, 1}, {0, 1, 2}, {2}});
  const InfluenceMatrix r = r_matrix(inst);
  EXPECT_EQ(r.entries(0, 0), 1.0);
  EXPECT_EQ(r.entries(1, 1), 1.0);
  EXPECT_EQ(r.entries(2, 2), 0.0);
  const InfluenceMatrix psi = influence_matrix(inst, {});
  for (std::size_t u = 0; u < 3; ++u)
    for (std::size_t v = 0; v < 3; ++v)
      if (u != v) EXPECT_EQ(r.entries(u, v), psi.entries(u, v));
}

TEST(InfluenceMatrix, InvariantUnderColourRelabelling) {
  for (const auto& inst : small_corpus()) {
    if (inst.size() < 2) continue;
    std::vector<ColourList> lists = inst.lists();
    for (auto& l : lists)
      for (auto& c : l) c = 10 + 3 * (3 - c);
    const ListColouringInstance relabelled(inst.graph(), lists);
    const Matrix a = influence_matrix(inst, {}).entries;
    const Matrix b = influence_matrix(relabelled, {}).entries;
    EXPECT_LE(a.max_abs_diff(b), 1e-15) << inst.key();
  }
}

TEST(InfluenceMatrix, TooManyPinnedVerticesRejected) {
  EXPECT_THROW(influence_matrix(edge(3), {{0, 0}}), ContractError);
}

TEST(SpectralRadius, SpecExamples) {
  EXPECT_EQ(spectral_radius(Matrix(3, 3)).value, 0.0);
  const Matrix swap = Matrix::from_rows({{0.0, 0.5}, {0.5, 0.0}});
  EXPECT_NEAR(spectral_radius(swap).value, 0.5, 1e-12);
  const Matrix stochastic = Matrix::from_rows({{0.2, 0.8, 0.0}, {0.1, 0.1, 0.8}, {0.5, 0.25, 0.25}});
  EXPECT_NEAR(spectral_radius(stochastic).value, 1.0, 1e-10);
}

TEST(SpectralRadius, ReducibleMatrixUsesLargestBlock) {
  const Matrix m = Matrix::from_rows({{0.1, 1.0, 0.0}, {0.0, 0.3, 0.0}, {0.0, 0.0, 0.7}});
  const SpectralRadius r = spectral_radius(m);
  EXPECT_NEAR(r.value, 0.7, 1e-12);
  EXPECT_TRUE(r.converged);
}

TEST(SpectralRadius, AgreesWithEigenOnCorpusInfluenceMatrices) {
  for (const auto& inst : small_corpus()) {
    if (inst.size() < 2) continue;
    const Matrix psi = influence_matrix(inst, {}).entries;
    const SpectralRadius r = spectral_radius(psi);
    EXPECT_NEAR(r.value, eigen_radius(psi), 1e-9) << inst.key();
    EXPECT_LE(r.value, induced_norm(psi, NormKind::one) + 1e-12);
    EXPECT_LE(r.value, induced_norm(psi, NormKind::infinity) + 1e-12);
  }
}

TEST(InducedNorm, SpecExamples) {
  EXPECT_EQ(induced_norm(Matrix(2, 2), NormKind::one), 0.0);
  EXPECT_EQ(induced_norm(Matrix::identity(3), NormKind::one), 1.0);
  EXPECT_EQ(induced_norm(Matrix::identity(3), NormKind::infinity), 1.0);
  const Matrix m = Matrix::from_rows({{1.0, -2.0}, {3.0, 0.5}});
  EXPECT_EQ(induced_norm(m, NormKind::one), 4.0);
  EXPECT_EQ(induced_norm(m, NormKind::infinity), 3.5);
}

TEST(SymmetricEigenvalues, SpecExamples) {
  const std::vector<double> pi3(3, 1.0 / 3.0);
  for (double e : symmetric_eigenvalues(Matrix::identity(3), pi3)) EXPECT_NEAR(e, 1.0, 1e-15);
  const Matrix two = Matrix::from_rows({{0.5, 0.5}, {0.5, 0.5}});
  const auto eig = symmetric_eigenvalues(two, std::vector<double>{0.5, 0.5});
  EXPECT_NEAR(eig[0], 1.0, 1e-14);
  EXPECT_NEAR(eig[1], 0.0, 1e-14);
}

TEST(SymmetricEigenvalues, NonReversibleRejected) {
  const Matrix skew = Matrix::from_rows({{0.0, 0.9, 0.1}, {0.1, 0.0, 0.9}, {0.9, 0.1, 0.0}});
  EXPECT_THROW(symmetric_eigenvalues(skew, std::vector<double>(3, 1.0 / 3.0)), NotReversibleError);
}

TEST(SymmetricEigenvalues, AgreesWithEigenOnGlauberMatrices) {
  int checked = 0;
  for (const auto& inst : small_corpus()) {
    if (checked++ % 7 != 0) continue;
    const Matrix p = transition_matrix(inst);
    const auto ours = symmetric_eigenvalues(p, std::vector<double>(p.rows(), 1.0 / static_cast<double>(p.rows())));
    Eigen::MatrixXd e(p.rows(), p.cols());
    for (std::size_t i = 0; i < p.rows(); ++i)
      for (std::size_t j = 0; j < p.cols(); ++j) e(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = p(i, j);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(e);
    std::vector<double> ref(solver.eigenvalues().data(), solver.eigenvalues().data() + solver.eigenvalues().size());
    std::sort(ref.begin(), ref.end(), std::greater<>());
    ASSERT_EQ(ours.size(), ref.size());
    for (std::size_t i = 0; i < ref.size(); ++i) EXPECT_NEAR(ours[i], ref[i], 1e-9) << inst.key();
  }
}
