#include <catch2/catch_amalgamated.hpp>

#include <memory>

#include "mmb/moments.hpp"

using namespace mmb;

namespace {

std::shared_ptr<const std::vector<Monomial>> words_for(const Scenario& sc, int level) {
  return std::make_shared<const std::vector<Monomial>>(
      generate_word_list(sc, HierarchyLevel::of(level)));
}

int find_word(const std::vector<Monomial>& W, const Monomial& w) {
  for (std::size_t k = 0; k < W.size(); ++k)
    if (W[k] == w) return static_cast<int>(k);
  return -1;
}

}  // namespace

TEST_CASE("identity_template_chsh_level1") {
  Scenario sc = Scenario::chsh();
  auto W = words_for(sc, 1);
  MomentIndex idx(sc);
  MomentTemplate t = build_identity_template(sc, W, idx);

  const int a00 = find_word(*W, Monomial::single(2, Symbol::effect(0, 0, 0)));
  const int a10 = find_word(*W, Monomial::single(2, Symbol::effect(0, 0, 1)));
  const int b00 = find_word(*W, Monomial::single(2, Symbol::effect(1, 0, 0)));
  REQUIRE(a00 >= 0);
  REQUIRE(a10 >= 0);
  REQUIRE(b00 >= 0);

  // orthogonal same-setting Alice effects annihilate
  CHECK_FALSE(t.entry(a00, a10).has_value());
  // cross-party product is the joint moment
  Monomial joint = Monomial::identity(2);
  joint.factors[0] = {Symbol::effect(0, 0, 0)};
  joint.factors[1] = {Symbol::effect(1, 0, 0)};
  REQUIRE(t.entry(a00, b00).has_value());
  CHECK(*t.entry(a00, b00) == *idx.find(joint));
  // unit position
  REQUIRE(t.entry(0, 0).has_value());
  CHECK(*t.entry(0, 0) == *idx.find(Monomial::identity(2)));
}

TEST_CASE("effect_template_entries") {
  Scenario sc = Scenario::chsh();
  auto W = words_for(sc, 1);
  MomentIndex idx(sc);
  Symbol e = Symbol::effect(0, 0, 0);
  MomentTemplate t = build_effect_template(sc, W, e, idx);

  // (0,0) entry of chi[E] is the marginal moment of E
  REQUIRE(t.entry(0, 0).has_value());
  CHECK(*t.entry(0, 0) == *idx.find(Monomial::single(2, e)));
  // idempotence: row E, column identity collapses to E
  const int re = find_word(*W, Monomial::single(2, e));
  REQUIRE(t.entry(re, 0).has_value());
  CHECK(*t.entry(re, 0) == *idx.find(Monomial::single(2, e)));
  // orthogonality: row E_{2|1}
  const int ro = find_word(*W, Monomial::single(2, Symbol::effect(0, 0, 1)));
  CHECK_FALSE(t.entry(ro, 0).has_value());
  // wrong-party localizer rejected
  CHECK_THROWS_AS(build_effect_template(sc, W, Symbol::effect(1, 0, 0), idx),
                  std::invalid_argument);
}

TEST_CASE("templates_share_one_moment_index") {
  Scenario sc = Scenario::chsh();
  auto W = words_for(sc, 2);
  MomentIndex idx(sc);
  MomentTemplate t1 = build_identity_template(sc, W, idx);
  MomentTemplate te = build_effect_template(sc, W, Symbol::effect(0, 0, 0), idx);
  // chi[E](row E, col 1) and chi[1](row E, col E) hold the same moment
  const int re = find_word(*W, Monomial::single(2, Symbol::effect(0, 0, 0)));
  REQUIRE(te.entry(re, 0).has_value());
  REQUIRE(t1.entry(re, re).has_value());
  CHECK(*te.entry(re, 0) == *t1.entry(re, re));
}

TEST_CASE("unknown_block_collapse_and_annihilation") {
  Scenario sc = Scenario::chsh();
  auto W = words_for(sc, 2);
  UnknownBlockTemplate g = build_unknown_template(sc, W, "G0");

  Monomial b00 = Monomial::single(2, Symbol::effect(1, 0, 0));
  const int rb = find_word(*W, b00);
  Monomial bb = Monomial::identity(2);
  bb.factors[1] = {Symbol::effect(1, 0, 0), Symbol::effect(1, 1, 0)};
  const int rbb = find_word(*W, bb);
  Monomial b2 = Monomial::single(2, Symbol::effect(1, 0, 1));
  const int rb2 = find_word(*W, b2);
  REQUIRE(rb >= 0);
  REQUIRE(rbb >= 0);
  REQUIRE(rb2 >= 0);

  // (1 x B_{1|1}) row against itself shares the variable with the diagonal of
  // the idempotent-collapsed product
  REQUIRE(g.entry(rb, rb).has_value());
  REQUIRE(g.entry(rb, 0).has_value());
  CHECK(*g.entry(rb, rb) == *g.entry(rb, 0));
  // annihilating Bob product: B_{1|1} B_{2|1}
  CHECK_FALSE(g.entry(rb, rb2).has_value());
  // unit entry exists and is its own variable
  CHECK(g.unit_variable() == *g.entry(0, 0));
}

TEST_CASE("unknown_block_adjoint_identification") {
  Scenario sc = Scenario::chsh();
  auto W = words_for(sc, 2);
  UnknownBlockTemplate g = build_unknown_template(sc, W, "G0");
  // entries (i,j) and (j,i) are the same variable by construction (upper
  // triangle storage); check a nontrivial pair of positions with adjoint
  // related keys: (A1 x 1, A2 x 1) vs (A2 x 1, A1 x 1).
  Monomial a1 = Monomial::single(2, Symbol::effect(0, 0, 0));
  Monomial a2 = Monomial::single(2, Symbol::effect(0, 1, 0));
  const int r1 = find_word(*W, a1), r2 = find_word(*W, a2);
  REQUIRE(r1 >= 0);
  REQUIRE(r2 >= 0);
  CHECK(*g.entry(r1, r2) == *g.entry(r2, r1));
}

TEST_CASE("fixed_assignments_counts_for_uniform_chsh") {
  Scenario sc = Scenario::chsh();
  MomentIndex idx(sc);
  ProbTable P = ProbTable::zeros(sc);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) P.at(a, b, x, y) = 0.25;
  FixedAssignment f = fixed_assignments(sc, idx, P);
  // 1 unit + 4 A-marginals + 4 B-marginals + 16 joints
  CHECK(f.values.size() == 25);
  CHECK(f.values[0].second == 1.0);
}

TEST_CASE("fixed_assignments_rejects_bad_distribution") {
  Scenario sc = Scenario::chsh();
  MomentIndex idx(sc);
  ProbTable P = ProbTable::zeros(sc);
  P.at(0, 0, 0, 0) = 2.0;  // not normalized
  CHECK_THROWS_AS(fixed_assignments(sc, idx, P), std::invalid_argument);
}

TEST_CASE("bob_only_words_reproduce_assemblage_moment_structure") {
  // Restricting the word list to Bob-only words makes chi[E_{a|x}] an
  // assemblage-type moment matrix: every entry is the moment of
  // E_{a|x} (x) B_i B_j'.
  Scenario sc = Scenario::chsh();
  auto all = generate_word_list(sc, HierarchyLevel::of(2));
  auto bobOnly = std::make_shared<std::vector<Monomial>>();
  for (const auto& w : all)
    if (w.factors[0].empty()) bobOnly->push_back(w);
  MomentIndex idx(sc);
  Symbol e = Symbol::effect(0, 0, 0);
  MomentTemplate t = build_effect_template(sc, bobOnly, e, idx);
  for (int i = 0; i < t.size(); ++i)
    for (int j = i; j < t.size(); ++j) {
      Monomial bprod = Monomial::identity(2);
      CanonicalForm cf = multiply(sc, (*bobOnly)[i], (*bobOnly)[j].adjoint());
      if (cf.zero) {
        CHECK_FALSE(t.entry(i, j).has_value());
        continue;
      }
      bprod = cf.mono;
      bprod.factors[0] = {e};
      REQUIRE(t.entry(i, j).has_value());
      CHECK(*t.entry(i, j) == *idx.find(bprod));
    }
}
