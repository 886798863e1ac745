#include <doctest.h>

#include <string>

#include "wallx/target.hpp"

using namespace wallx;

namespace {
std::string tgt(const char* f) { return std::string(WALLX_TARGETS_DIR) + "/" + f; }
}  // namespace

TEST_CASE("projective plane: three fixed points with the expected weights") {
  auto t = ToricTarget::parse_file(tgt("p2.toml"));
  REQUIRE(t.fixed_points().size() == 3);
  CHECK(t.fixed_points()[0].sigma == std::vector<int>{0});
  CHECK(t.fixed_points()[1].sigma == std::vector<int>{1});
  CHECK(t.fixed_points()[2].sigma == std::vector<int>{2});
  int nv = t.n_scalar_vars();
  CHECK(nv == 4);  // 3 lambdas + z
  auto& fp0 = t.fixed_points()[0];
  auto w = t.tangent_weights(fp0);
  REQUIRE(w.size() == 2);
  CHECK(w[0] == Poly::var(nv, 1) - Poly::var(nv, 0));
  CHECK(w[1] == Poly::var(nv, 2) - Poly::var(nv, 0));
  // Divisor restrictions vanish exactly on sigma.
  CHECK(t.divisor_restriction(fp0, 0).is_zero());
  CHECK(!t.divisor_restriction(fp0, 1).is_zero());
}

TEST_CASE("product of lines matches two independent line factors") {
  auto t = ToricTarget::parse_file(tgt("p1xp1.toml"));
  REQUIRE(t.fixed_points().size() == 4);
  CHECK(t.fixed_points()[0].sigma == std::vector<int>{0, 2});
  CHECK(t.fixed_points()[1].sigma == std::vector<int>{0, 3});
  CHECK(t.fixed_points()[2].sigma == std::vector<int>{1, 2});
  CHECK(t.fixed_points()[3].sigma == std::vector<int>{1, 3});
  int nv = t.n_scalar_vars();
  auto w = t.tangent_weights(t.fixed_points()[0]);  // sigma = {1,3} in 1-based terms
  REQUIRE(w.size() == 2);
  CHECK(w[0] == Poly::var(nv, 1) - Poly::var(nv, 0));
  CHECK(w[1] == Poly::var(nv, 3) - Poly::var(nv, 2));

  auto p1 = ToricTarget::parse_file(tgt("p1.toml"));
  auto w1 = p1.tangent_weights(p1.fixed_points()[0]);
  REQUIRE(w1.size() == 1);
  // Same linear form shape: lambda_2 - lambda_1 in the factor's own variables.
  CHECK(w1[0] == Poly::var(p1.n_scalar_vars(), 1) - Poly::var(p1.n_scalar_vars(), 0));
}

TEST_CASE("local line target keeps the base fixed points and gains a parameter per fiber") {
  auto t = ToricTarget::parse_file(tgt("localp1.toml"));
  CHECK(t.fixed_points().size() == 2);
  CHECK(t.n_scalar_vars() == 2 + 2 + 1);  // lambdas + 2 extra params + z
  auto& fp = t.fixed_points()[0];
  // E_a|_sigma = extra_a - mu_sigma(-1) = extra_a + lambda_1.
  int nv = t.n_scalar_vars();
  CHECK(t.concave_restriction(fp, 0) == Poly::var(nv, 2) + Poly::var(nv, 0));
  CHECK(t.concave_restriction(fp, 1) == Poly::var(nv, 3) + Poly::var(nv, 0));
}

TEST_CASE("effective classes enumerate the dual cone by theta degree") {
  auto p2 = ToricTarget::parse_file(tgt("p2.toml"));
  auto cl = p2.effective_classes(2);
  REQUIRE(cl.size() == 3);
  CHECK(cl[0] == Curve{0});
  CHECK(cl[1] == Curve{1});
  CHECK(cl[2] == Curve{2});

  auto pp = ToricTarget::parse_file(tgt("p1xp1.toml"));
  auto cl2 = pp.effective_classes(2);
  REQUIRE(cl2.size() == 6);
  CHECK(cl2[0] == Curve{0, 0});
  CHECK(cl2[1] == Curve{0, 1});
  CHECK(cl2[2] == Curve{1, 0});
  CHECK(cl2[3] == Curve{0, 2});
  CHECK(cl2[4] == Curve{1, 1});
  CHECK(cl2[5] == Curve{2, 0});
  CHECK(pp.is_effective(Curve{1, 1}));
  CHECK(!pp.is_effective(Curve{-1, 2}));
}

TEST_CASE("gradings: anticanonical and twisted indices") {
  auto q = ToricTarget::parse_file(tgt("quintic.toml"));
  auto g = q.grading(Curve{3});
  CHECK(g.ltheta_degree == 3);
  CHECK(g.anticanonical_degree == 15);
  CHECK(g.twisted_index == 0);

  auto p2 = ToricTarget::parse_file(tgt("p2.toml"));
  CHECK(p2.grading(Curve{1}).anticanonical_degree == 3);

  auto lp1 = ToricTarget::parse_file(tgt("localp1.toml"));
  CHECK(lp1.grading(Curve{2}).twisted_index == 0);  // 2d - d - d
}

TEST_CASE("classification by twisted index") {
  CHECK(ToricTarget::parse_file(tgt("p2.toml")).classify().kind == Classification::Fano);
  CHECK(ToricTarget::parse_file(tgt("p2.toml")).classify().index == 3);
  CHECK(ToricTarget::parse_file(tgt("p4.toml")).classify().index == 5);
  auto pp = ToricTarget::parse_file(tgt("p1xp1.toml")).classify();
  CHECK(pp.kind == Classification::Fano);
  CHECK(pp.index == 2);
  CHECK(ToricTarget::parse_file(tgt("quintic.toml")).classify().kind ==
        Classification::SemiPositive);
  CHECK(ToricTarget::parse_file(tgt("localp1.toml")).classify().kind ==
        Classification::SemiPositive);
  auto sx = ToricTarget::parse_file(tgt("sextic_p4.toml")).classify();
  CHECK(sx.kind == Classification::General);
  CHECK(sx.index == -10);  // minimum over the probe range d <= 10 of -d
}

TEST_CASE("stability parameter arithmetic and walls") {
  CHECK(Epsilon::parse("0+").degree_cap() == -1);
  CHECK(Epsilon::parse("inf").degree_cap() == 0);
  CHECK(Epsilon::parse("1/2").degree_cap() == 2);
  CHECK(Epsilon::parse("1/3").degree_cap() == 3);
  CHECK(Epsilon::parse("2").degree_cap() == 0);
  CHECK(Epsilon::parse("1").degree_cap() == 1);
  CHECK_THROWS_AS(Epsilon::parse("0"), ValidationError);
  CHECK_THROWS_AS(Epsilon::parse("-1/2"), ValidationError);

  auto p2 = ToricTarget::parse_file(tgt("p2.toml"));
  auto w = p2.walls(Curve{3});
  REQUIRE(w.size() == 3);
  CHECK(w[0] == Rat(1));
  CHECK(w[1] == Rat(1, 2));
  CHECK(w[2] == Rat(1, 3));
}

TEST_CASE("validation rejects degenerate configurations") {
  // theta = 0
  CHECK_THROWS_AS(ToricTarget::parse("[target]\n"
                                     "n_coords = 2\n"
                                     "rank = 1\n"
                                     "weights = [[1, 1]]\n"
                                     "theta = [0]\n"),
                  ValidationError);
  // theta on a wall: theta = (1,0) lies on the ray of the first column.
  CHECK_THROWS_AS(ToricTarget::parse("[target]\n"
                                     "n_coords = 4\n"
                                     "rank = 2\n"
                                     "weights = [[1, 1, 0, 0], [0, 0, 1, 1]]\n"
                                     "theta = [1, 0]\n"),
                  ValidationError);
  // twist class not reachable by a nonnegative integer combination
  CHECK_THROWS_AS(ToricTarget::parse("[target]\n"
                                     "n_coords = 2\n"
                                     "rank = 1\n"
                                     "weights = [[1, 1]]\n"
                                     "theta = [1]\n"
                                     "[twist]\n"
                                     "convex = [[-2]]\n"),
                  ValidationError);
  // floats rejected
  CHECK_THROWS_AS(ToricTarget::parse("[target]\n"
                                     "n_coords = 2\n"
                                     "rank = 1\n"
                                     "weights = [[1.5, 1]]\n"
                                     "theta = [1]\n"),
                  ValidationError);
}

TEST_CASE("classification is stable under coordinate permutation and theta scaling") {
  auto a = ToricTarget::parse("[target]\n"
                              "n_coords = 3\n"
                              "rank = 1\n"
                              "weights = [[1, 1, 1]]\n"
                              "theta = [1]\n");
  auto b = ToricTarget::parse("[target]\n"
                              "n_coords = 3\n"
                              "rank = 1\n"
                              "weights = [[1, 1, 1]]\n"
                              "theta = [3]\n");
  CHECK(a.classify().kind == b.classify().kind);
  CHECK(a.classify().index == b.classify().index);
  // beta at epsilon/m (theta) behaves like theta*m at epsilon: degree caps scale.
  CHECK(b.theta_degree(Curve{1}) == 3 * a.theta_degree(Curve{1}));
}
