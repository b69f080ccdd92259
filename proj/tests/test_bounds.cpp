#include <gtest/gtest.h>

#include <cmath>

#include "specmix/bounds.hpp"
#include "specmix/corpus.hpp"

using namespace specmix;

namespace {

ListColouringInstance edge(int q) { return ListColouringInstance::uniform(Graph(2, {{0, 1}}), q); }
ListColouringInstance path3(int q) { return ListColouringInstance::uniform(Graph(3, {{0, 1}, {1, 2}}), q); }

ColouringParams params(int chi, double delta = 0.23) { return ColouringParams::verified_instantiation(chi, delta); }

}  // namespace

TEST(AlphaStar, FixedPoint) {
  const double a = ColouringParams::alpha_star();
  EXPECT_GT(a, 1.7632);
  EXPECT_LT(a, 1.7633);
  EXPECT_LE(std::abs(a - std::exp(1.0 / a)), 1e-13);
}

TEST(Params, VerifiedInstantiation) {
  const ColouringParams p = params(4);
  EXPECT_EQ(p.chi, 4);
  EXPECT_NEAR(p.eps1, 1.0 - 0.23 / (ColouringParams::alpha_star() + 0.23), 1e-15);
  EXPECT_NEAR(p.eps2, 0.63, 1e-15);
  EXPECT_THROW(params(4, 0.0), ParameterError);
  EXPECT_THROW((ColouringParams{2, 1.0, 0.5, 0.1}.validate()), ParameterError);
}

TEST(Condition, StarDelta4Q8Passes) {
  const ConditionReport r = verify_condition(generate_instance("star:4:center=8:leaf=8"), params(4));
  EXPECT_TRUE(r.ok());
  EXPECT_GT(r.worst_margin, 0.0);
  EXPECT_GT(r.images, 1U);
}

TEST(Condition, TightnessStarFails) {
  const ListColouringInstance star = star_instance(4, 4);
  const ColouringParams p = params(4);
  const ConditionReport r = verify_condition(star, p);
  EXPECT_FALSE(r.ok());
  EXPECT_LT(r.worst_margin, 0.0);
  const double centre = marginal(star, {}, 0)(3);
  EXPECT_NEAR(centre, 81.0 / 129.0, 1e-12);
  EXPECT_GT(centre, p.eps1 / 4.0);
  EXPECT_GT(centre, p.upper_marginal());
}

TEST(Condition, SingleVertexReducesToListSize) {
  const ColouringParams p = params(2);
  const double limit = p.upper_marginal();
  const auto small = ListColouringInstance(Graph(1), {{0, 1}});
  const auto large = ListColouringInstance(Graph(1), {{0, 1, 2, 3}});
  EXPECT_EQ(verify_condition(small, p).ok(), 0.5 <= limit);
  EXPECT_EQ(verify_condition(large, p).ok(), 0.25 <= limit);
}

TEST(Eq2D, SpecExamples) {
  const ColouringParams p = params(2);
  const int need = 2 + static_cast<int>(std::ceil((ColouringParams::alpha_star() + 0.23 - 1.0) * 2));
  Graph g(3, {{0, 1}, {1, 2}});
  ListColouringInstance ok(g, {range_list(need), range_list(need), range_list(need)});
  EXPECT_TRUE(check_eq2D(ok, p).ok);
  const auto tri = ListColouringInstance::uniform(Graph(3, {{0, 1}, {1, 2}, {0, 2}}), 50);
  EXPECT_FALSE(check_eq2D(tri, p).ok);
  const Eq2DReport tight = check_eq2D(ListColouringInstance(g, {range_list(1), range_list(9), range_list(9)}), p);
  EXPECT_FALSE(tight.ok);
  EXPECT_EQ(tight.violators, (std::vector<Vertex>{0}));
}

TEST(EasyCoupling, SpecExamples) {
  EXPECT_NEAR(easy_coupling_bound(1e12, 7), 6.0 * (2.0 / 3.0), 1e-9);
  EXPECT_EQ(easy_coupling_bound(0.63, 1), 0.0);
  EXPECT_NEAR(easy_coupling_bound(params(3), 10), 9.0 * (1.0 - 1.0 / (3.0 * std::exp(1.0 / 0.63))), 1e-12);
}

TEST(SAW, PathEndpoint) {
  const ColouringParams p = params(2);
  const SAWBound b = saw_influence_bound(path3(3), 0, p);
  EXPECT_NEAR(b.per_target[2], p.eps1 / p.eps2, 1e-15);
  EXPECT_NEAR(b.per_target[1], 1.0 / p.eps2, 1e-15);
  EXPECT_EQ(b.per_target[0], 0.0);
  EXPECT_TRUE(b.layers_ok);
}

TEST(SAW, IsolatedSource) {
  const SAWBound b = saw_influence_bound(ListColouringInstance::uniform(Graph(3), 2), 1, params(1));
  EXPECT_EQ(b.total, 0.0);
  for (double x : b.per_target) EXPECT_EQ(x, 0.0);
}

TEST(SAW, StarLayerTwoIsTight) {
  const ColouringParams p = params(5);
  const SAWBound b = saw_influence_bound(star_family(5, 12, 12), 0, p);
  EXPECT_NEAR(b.layer_sums[1], p.eps1, 1e-15);
  EXPECT_TRUE(b.layers_ok);
}

TEST(SAW, LayerSumsBoundedOnCorpus) {
  for (const auto& inst : small_corpus()) {
    const ColouringParams p = params(std::max(inst.graph().max_degree(), 1));
    for (Vertex u = 0; u < inst.size(); ++u) {
      const SAWBound b = saw_influence_bound(inst, u, p);
      for (std::size_t l = 0; l < b.layer_sums.size(); ++l)
        EXPECT_LE(b.layer_sums[l], std::pow(p.eps1, static_cast<double>(l)) + 1e-12);
      EXPECT_LE(b.total, one_to_all_bound(p) + 1e-12);
    }
  }
}

TEST(SingleDisagreement, IsolatedVertex) {
  const ListColouringInstance common(Graph(1), {{0, 1, 2}});
  const SingleDisagreement sd = single_disagreement_tv(common, 0, 0, 1);
  EXPECT_EQ(sd.N, 1U);
  EXPECT_NEAR(sd.closed_form, 0.5, 1e-15);
  EXPECT_NEAR(sd.direct, 0.5, 1e-15);
}

TEST(SingleDisagreement, InfeasibleColoursGiveZero) {
  const ListColouringInstance common(Graph(3, {{0, 1}, {0, 2}}), {{0, 1, 2}, {0}, {1}});
  const SingleDisagreement sd = single_disagreement_tv(common, 0, 0, 1);
  EXPECT_EQ(sd.closed_form, 0.0);
  EXPECT_EQ(sd.direct, 0.0);
}

TEST(SingleDisagreement, PinnedNeighbourMatchesDirect) {
  const ListColouringInstance common(Graph(3, {{0, 1}, {1, 2}}), {{0, 1, 2}, {0, 2}, {0, 1}});
  const SingleDisagreement sd = single_disagreement_tv(common, 0, 0, 1);
  EXPECT_NEAR(sd.closed_form, sd.direct, 1e-12);
}

TEST(SingleDisagreement, TwoInstanceShape) {
  const Graph g(2, {{0, 1}});
  const ListColouringInstance a(g, {{0, 2}, {0, 1, 2}});
  const ListColouringInstance b(g, {{1, 2}, {0, 1, 2}});
  const SingleDisagreement sd = single_disagreement_tv(a, b, 0);
  EXPECT_NEAR(sd.closed_form, sd.direct, 1e-12);
  const ListColouringInstance c(g, {{2}, {0, 1, 2}});
  EXPECT_THROW(single_disagreement_tv(a, c, 0), ContractError);
  const ListColouringInstance d(g, {{1, 2}, {0, 1}});
  EXPECT_THROW(single_disagreement_tv(a, d, 0), ContractError);
}

TEST(RecursiveBound, BaseCases) {
  const ColouringParams p = params(2);
  EXPECT_EQ(recursive_influence_bound(path3(3), 1, 1, p).value, 1.0);
  const ListColouringInstance two = ListColouringInstance::uniform(Graph(2), 3);
  EXPECT_EQ(recursive_influence_bound(two, 0, 1, p).value, 0.0);
}

TEST(RecursiveBound, PathIsSound) {
  const ColouringParams p{2, 0.9, 0.5, 0.0};
  const CertifiedInfluenceBound b = recursive_influence_bound(path3(3), 0, 2, p);
  EXPECT_GE(b.value, 0.25 - 1e-9);
  EXPECT_LE(b.value, std::min(p.eps1, p.upper_marginal()) + 1e-12);
}

TEST(RecursiveBound, SoundOnConditionPassingInstances) {
  std::vector<std::pair<ListColouringInstance, ColouringParams>> cases;
  for (const auto& bc : bounds_corpus()) cases.emplace_back(bc.instance, params(bc.chi, bc.delta));
  for (const auto& inst : small_corpus()) {
    const ColouringParams p = params(std::max(inst.graph().max_degree(), 1));
    if (verify_condition(inst, p).ok()) cases.emplace_back(inst, p);
  }
  ASSERT_GT(cases.size(), bounds_corpus().size());
  for (const auto& [inst, p] : cases) {
    const InfluenceMatrix r = r_matrix(inst);
    RecursiveInfluence rec(p);
    for (Vertex u = 0; u < inst.size(); ++u)
      for (Vertex v = 0; v < inst.size(); ++v)
        EXPECT_GE(rec(inst, u, v).value,
                  r.entries(static_cast<std::size_t>(u), static_cast<std::size_t>(v)) - 1e-9)
            << inst.key() << " " << u << "->" << v;
  }
}

TEST(SplitVertex, Construction) {
  const SplitVertex s = split_vertex(path3(3), 1);
  EXPECT_EQ(s.instance.size(), 4);
  EXPECT_EQ(s.neighbours, (std::vector<Vertex>{0, 2}));
  EXPECT_EQ(s.copies.size(), 2U);
  EXPECT_TRUE(s.instance.graph().adjacent(s.copies[0], s.from_original[0]));
  EXPECT_TRUE(s.instance.graph().adjacent(s.copies[1], s.from_original[2]));
  EXPECT_EQ(s.instance.graph().edges().size(), 2U);
  EXPECT_EQ(s.sigma(1, 5, 6).to_string(), "2=5,3=6");
}

TEST(Telescoping, HoldsOnSmallInstances) {
  for (const auto& inst : {path3(3), cycle_instance(4, 3), generate_instance("star:3:center=4:leaf=4")}) {
    for (Vertex u = 0; u < inst.size(); ++u)
      for (Vertex v = 0; v < inst.size(); ++v) {
        if (u == v) continue;
        const TelescopingReport t = telescoping_report(inst, u, v, inst.list(u)[0], inst.list(u)[1]);
        if (!t.feasible) continue;
        EXPECT_TRUE(t.ok()) << inst.key() << " " << u << "->" << v;
      }
  }
}

TEST(StarTightness, SpecExamples) {
  const StarTightness s = star_tightness(4, 4);
  EXPECT_NEAR(s.value, 81.0 / 129.0, 1e-15);
  EXPECT_TRUE(s.exceeds_inverse_degree);
  const Fraction f = star_tightness_rational(4, 4);
  EXPECT_EQ(f.num, 81U);
  EXPECT_EQ(f.den, 129U);
  EXPECT_NEAR(marginal(star_instance(4, 4), {}, 0)(3), 81.0 / 129.0, 1e-12);

  const StarTightness big = star_tightness(20, 32);
  EXPECT_NEAR(big.value, 0.0585, 5e-4);
  EXPECT_TRUE(big.below_threshold);
  EXPECT_TRUE(big.exceeds_inverse_degree);
  for (int d = 4; d <= 30; ++d) EXPECT_FALSE(star_tightness(d, 2 * d + 4).exceeds_inverse_degree) << d;
  EXPECT_THROW(star_tightness_rational(40, 30), ParameterError);
}

TEST(FCheck, SpecExamples) {
  const long double lim = f_limit(0.1L);
  EXPECT_GT(f_value(0.1L, 3.0L), f_value(0.1L, 4.0L));
  EXPECT_GT(f_value(0.1L, 4.0L), f_value(0.1L, 10.0L));
  EXPECT_GT(f_value(0.1L, 10.0L), f_value(0.1L, 100.0L));
  EXPECT_GT(f_value(0.1L, 100.0L), lim);
  EXPECT_GT(f_value(1.0L, 3.0L), f_value(1.0L, 1000.0L));
  for (long double d : {0.05L, 0.1L, 0.5L, 1.0L, 5.0L}) EXPECT_LT(std::abs(f_value(d, 1e6L) - f_limit(d)), 1e-3L);
}

TEST(FCheck, GridReport) {
  const FCheckReport r = check_f_monotone(0.23, log_grid(3.0, 1e6, 200));
  EXPECT_TRUE(r.ok());
  EXPECT_EQ(r.xs.size(), 200U);
  EXPECT_NEAR(r.xs.front(), 3.0, 1e-12);
  EXPECT_NEAR(r.xs.back(), 1e6, 1e-6);
}

TEST(FCheck, TaylorBoundDominatesExactFactor) {
  for (long double d : {0.05L, 1.0L, 5.0L})
    for (double x : log_grid(3.0, 1e6, 50)) EXPECT_LE(b_factor(d, x), b_upper(d, x) + 1e-12L * std::abs(b_upper(d, x)));
}

TEST(OneToAll, StarPassesBothBounds) {
  const OneToAllReport r = one_to_all_check(generate_instance("star:4:center=8:leaf=8"), params(4));
  EXPECT_TRUE(r.condition_ok);
  EXPECT_TRUE(r.ok);
  EXPECT_EQ(r.row_sums.size(), 5U);
}

TEST(OneToAll, EdgeWithLargeListsAndSingleVertex) {
  const OneToAllReport e = one_to_all_check(edge(40), params(1));
  EXPECT_TRUE(e.ok);
  EXPECT_LT(e.row_sums[0], 0.05);
  const OneToAllReport s = one_to_all_check(ListColouringInstance(Graph(1), {{0, 1, 2}}), params(1));
  EXPECT_TRUE(s.ok);
  EXPECT_EQ(s.row_sums, (std::vector<double>{0.0}));
}

TEST(RecursionInstance, ListsFollowPosition) {
  const ListColouringInstance star = generate_instance("star:3:center=4:leaf=4");
  const ListColouringInstance sub = recursion_instance(star, 0, 2, 0, 1);
  ASSERT_EQ(sub.size(), 3);
  EXPECT_EQ(sub.list(0), (ColourList{1, 2, 3}));
  EXPECT_EQ(sub.list(1), (ColourList{0, 1, 2, 3}));
  EXPECT_EQ(sub.list(2), (ColourList{0, 2, 3}));
}
