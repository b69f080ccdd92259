#include <gtest/gtest.h>

#include <cmath>
#include <map>

#include "specmix/corpus.hpp"
#include "specmix/glauber.hpp"

using namespace specmix;

namespace {

ListColouringInstance edge(int q) { return ListColouringInstance::uniform(Graph(2, {{0, 1}}), q); }
ListColouringInstance path3(int q) { return ListColouringInstance::uniform(Graph(3, {{0, 1}, {1, 2}}), q); }
ListColouringInstance triangle(int q) {
  return ListColouringInstance::uniform(Graph(3, {{0, 1}, {1, 2}, {0, 2}}), q);
}

}  // namespace

TEST(SplitMix64, KnownSequenceFromZero) {
  SplitMix64 rng(0);
  EXPECT_EQ(rng.next(), 0xE220A8397B1DCDAFULL);
  EXPECT_EQ(rng.next(), 0x6E789E6AA1B965F4ULL);
  EXPECT_EQ(rng.next(), 0x06C45D188009454FULL);
}

TEST(GlauberStep, SingleColourVertexNeverMoves) {
  GlauberChain chain = GlauberChain::start(ListColouringInstance(Graph(1), {{0}}), 3);
  for (int i = 0; i < 50; ++i) glauber_step(chain);
  EXPECT_EQ(chain.current.colours, (std::vector<Colour>{0}));
  EXPECT_EQ(chain.step_count, 50U);
}

TEST(GlauberStep, FrozenTriangleIsSelfLoop) {
  GlauberChain chain = GlauberChain::start(triangle(3), 11, ColouringState{{0, 1, 2}});
  for (int i = 0; i < 100; ++i) {
    glauber_step(chain);
    EXPECT_EQ(chain.current.colours, (std::vector<Colour>{0, 1, 2}));
  }
}

TEST(GlauberStep, EdgeResampleLaw) {
  std::map<std::vector<Colour>, int> seen;
  for (std::uint64_t seed = 0; seed < 4000; ++seed) {
    GlauberChain chain = GlauberChain::start(edge(3), seed, ColouringState{{0, 1}});
    resample_vertex(chain, 0);
    ++seen[chain.current.colours];
  }
  ASSERT_EQ(seen.size(), 2U);
  EXPECT_NEAR((seen[{0, 1}]) / 4000.0, 0.5, 0.03);
  EXPECT_NEAR((seen[{2, 1}]) / 4000.0, 0.5, 0.03);
}

TEST(GlauberStep, StaysProperAndIsDeterministic) {
  const ListColouringInstance inst = cycle_instance(5, 3);
  GlauberChain a = GlauberChain::start(inst, 99);
  GlauberChain b = GlauberChain::start(inst, 99);
  for (int i = 0; i < 1000; ++i) {
    glauber_step(a);
    glauber_step(b);
    ASSERT_TRUE(is_proper(inst, a.current.colours));
    ASSERT_EQ(a.current, b.current);
  }
  const GlauberChain c = glauber_step(static_cast<const GlauberChain&>(a));
  EXPECT_EQ(a.step_count + 1, c.step_count);
}

TEST(GlauberStep, ImproperStartRejected) {
  EXPECT_THROW(GlauberChain::start(edge(3), 0, ColouringState{{1, 1}}), ContractError);
}

TEST(TransitionMatrix, SpecExamples) {
  const Matrix single = transition_matrix(ListColouringInstance(Graph(1), {{0, 1}}));
  EXPECT_LE(single.max_abs_diff(Matrix::from_rows({{0.5, 0.5}, {0.5, 0.5}})), 1e-15);
  const Matrix p = transition_matrix(edge(3));
  ASSERT_EQ(p.rows(), 6U);
  for (std::size_t i = 0; i < 6; ++i) {
    EXPECT_NEAR(p(i, i), 0.5, 1e-15);
    double s = 0.0;
    for (double x : p.row(i)) s += x;
    EXPECT_NEAR(s, 1.0, 1e-15);
  }
  EXPECT_LE(transition_matrix(triangle(3)).max_abs_diff(Matrix::identity(6)), 0.0);
}

TEST(TransitionMatrix, CapacityEnforced) {
  EXPECT_THROW(transition_matrix(ListColouringInstance::uniform(Graph(6), 5), 100), CapacityError);
}

TEST(DownUp, MatchesGlauberOnExamplesAndCorpus) {
  for (const auto& inst : {edge(3), ListColouringInstance(Graph(1), {{0, 1}}), path3(3)}) {
    EXPECT_LE(transition_matrix(inst).max_abs_diff(down_up_matrix(inst)), 1e-12);
  }
  int n = 0;
  for (const auto& inst : small_corpus()) {
    if (n++ % 3 != 0) continue;
    EXPECT_LE(transition_matrix(inst).max_abs_diff(down_up_matrix(inst)), 1e-12) << inst.key();
  }
}

TEST(Spectrum, GlauberIsPsdWithUnitTop) {
  for (const auto& inst : {edge(3), path3(3), cycle_instance(4, 3)}) {
    const SpectrumReport s = spectrum(transition_matrix(inst));
    EXPECT_NEAR(s.eigenvalues.front(), 1.0, 1e-10);
    EXPECT_GE(s.eigenvalues.back(), -1e-9);
    EXPECT_TRUE(s.irreducible());
  }
}

TEST(Spectrum, FrozenChainReportsZeroGap) {
  const SpectrumReport s = spectrum(transition_matrix(triangle(3)));
  EXPECT_NEAR(s.absolute_gap, 0.0, 1e-12);
  EXPECT_FALSE(s.irreducible());
}

TEST(Certificate, SpecExamples) {
  const auto iso = certify_spectral_independence(ListColouringInstance::uniform(Graph(2), 3));
  EXPECT_EQ(iso.etas, (std::vector<double>{0.0}));
  const auto e = certify_spectral_independence(edge(3));
  ASSERT_EQ(e.etas.size(), 1U);
  EXPECT_NEAR(e.etas[0], 0.5, 1e-12);
  const auto p = certify_spectral_independence(path3(3));
  ASSERT_EQ(p.etas.size(), 2U);
  EXPECT_NEAR(p.etas[0], spectral_radius(influence_matrix(path3(3), {}).entries).value, 1e-15);
  double eta1 = 0.0;
  for (Vertex v = 0; v < 3; ++v)
    for (Colour c = 0; c < 3; ++c)
      eta1 = std::max(eta1, spectral_radius(influence_matrix(path3(3), {{v, c}}).entries).value);
  EXPECT_NEAR(p.etas[1], eta1, 1e-15);
  EXPECT_EQ(p.pinnings[1], 9U);
}

TEST(GapBound, SpecExamples) {
  const std::vector<double> half{0.5};
  EXPECT_NEAR(theoretical_gap_bound(half, 2).value, 0.25, 1e-15);
  const std::vector<double> zeros{0.0, 0.0, 0.0};
  EXPECT_NEAR(theoretical_gap_bound(zeros, 4).value, 0.25, 1e-15);
  const std::vector<double> edge_case{0.0, 2.0, 0.0};
  const GapBound g = theoretical_gap_bound(edge_case, 4);
  EXPECT_TRUE(g.vacuous);
  EXPECT_EQ(g.value, 0.0);
}

TEST(GapBound, HoldsOnCorpus) {
  int n = 0;
  for (const auto& inst : small_corpus()) {
    if (n++ % 4 != 0) continue;
    const SpectrumReport s = spectrum(transition_matrix(inst));
    const GapBound b = theoretical_gap_bound(certify_spectral_independence(inst), inst.size());
    EXPECT_GE(s.gap, b.value - 1e-9) << inst.key();
  }
}

TEST(MixingTimeBound, SpecExamples) {
  EXPECT_NEAR(mixing_time_bound(0.0, 0.0, 5, 0.01, 0.25), 5.0 * std::log(400.0), 1e-12);
  EXPECT_NEAR(mixing_time_bound(1.0, 0.5, 10, 0.5, 2.0 / std::exp(1.0)), 16000.0, 1e-9);
  EXPECT_NEAR(mixing_time_bound(1.0, 0.5, 10, 1.0, 1.0 - 1e-15), 0.0, 1e-9);
  EXPECT_THROW(mixing_time_bound(0.0, 1.0, 5, 0.5, 0.25), ParameterError);
  EXPECT_THROW(mixing_time_bound(-1.0, 0.0, 5, 0.5, 0.25), ParameterError);
  EXPECT_THROW(mixing_time_bound(0.0, 0.0, 5, 0.0, 0.25), ParameterError);
  EXPECT_THROW(mixing_time_bound(0.0, 0.0, 5, 0.5, 1.0), ParameterError);
}

TEST(ColouringMixingBound, SpecExamples) {
  const auto b = colouring_mixing_bound(10, 9.0, 8.0, 0.25);
  EXPECT_NEAR(b.q_variant / (std::pow(9.0 * std::exp(5.0) * 10.0, 3.0) * std::log(32.0)), 1.0, 1e-12);
  EXPECT_EQ(colouring_mixing_bound(10, 1.0, 8.0, 8.0).q_variant, 0.0);
  const auto big = colouring_mixing_bound(1, 1e12, std::exp(1.0), 1.0);
  EXPECT_NEAR(big.q_variant / std::pow(9.0 * std::exp(5.0), 2.0), 1.0, 1e-9);
  EXPECT_THROW(colouring_mixing_bound(10, 0.0, 8.0, 0.25), ParameterError);
}

TEST(TvCurve, SpecExamples) {
  const MixingEstimate e = empirical_tv_curve(edge(3), 30);
  EXPECT_NEAR(e.tv_values[0], 1.0 - 1.0 / 6.0, 1e-15);
  EXPECT_LT(e.tv_values[30], 1e-3);
  for (std::size_t t = 1; t < e.tv_values.size(); ++t) EXPECT_LE(e.tv_values[t], e.tv_values[t - 1] + 1e-9);
  const MixingEstimate frozen = empirical_tv_curve(triangle(3), 5);
  for (double v : frozen.tv_values) EXPECT_NEAR(v, 1.0 - 1.0 / 6.0, 1e-15);
}

TEST(TvCurve, WorstStartAtTStarBelowQuarter) {
  for (const auto& inst : {edge(3), path3(3), cycle_instance(5, 4)}) {
    const Matrix p = transition_matrix(inst);
    const SpectrumReport s = spectrum(p);
    const double mu_min = 1.0 / static_cast<double>(p.rows());
    const auto t = static_cast<unsigned long long>(std::ceil(std::log(1.0 / (0.25 * mu_min)) / s.absolute_gap));
    EXPECT_LE(worst_start_tv(p, t), 0.25);
  }
}
