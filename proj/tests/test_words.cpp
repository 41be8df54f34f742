#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <set>

#include "mmb/words.hpp"

using namespace mmb;

namespace {

Monomial word(const Scenario& sc, const std::vector<Symbol>& syms) {
  CanonicalForm cf = canonicalize(sc, syms);
  REQUIRE_FALSE(cf.zero);
  return cf.mono;
}

}  // namespace

TEST_CASE("canonicalize_idempotence") {
  Scenario sc = Scenario::chsh();
  Symbol e = Symbol::effect(0, 0, 0);
  CanonicalForm cf = canonicalize(sc, {e, e});
  REQUIRE_FALSE(cf.zero);
  CHECK(cf.mono == Monomial::single(2, e));
}

TEST_CASE("canonicalize_orthogonality_annihilates") {
  Scenario sc = Scenario::chsh();
  CanonicalForm cf = canonicalize(sc, {Symbol::effect(0, 0, 0), Symbol::effect(0, 0, 1)});
  CHECK(cf.zero);
}

TEST_CASE("canonicalize_cross_party_commutation") {
  Scenario sc = Scenario::chsh();
  Symbol a = Symbol::effect(0, 0, 0);
  Symbol b = Symbol::effect(1, 1, 0);
  CHECK(word(sc, {b, a}) == word(sc, {a, b}));
}

TEST_CASE("canonicalize_rejects_out_of_bounds") {
  Scenario sc = Scenario::chsh();
  CHECK_THROWS_AS(canonicalize(sc, {Symbol::effect(0, 5, 0)}), std::invalid_argument);
  CHECK_THROWS_AS(canonicalize(sc, {Symbol::effect(0, 0, 3)}), std::invalid_argument);
}

TEST_CASE("multiply_idempotent_product") {
  Scenario sc = Scenario::chsh();
  Monomial ab = word(sc, {Symbol::effect(0, 0, 0), Symbol::effect(1, 0, 0)});
  Monomial a = word(sc, {Symbol::effect(0, 0, 0)});
  CanonicalForm prod = multiply(sc, ab, a);
  REQUIRE_FALSE(prod.zero);
  CHECK(prod.mono == ab);
}

TEST_CASE("multiply_identity_neutral") {
  Scenario sc = Scenario::chsh();
  Monomial m = word(sc, {Symbol::effect(0, 0, 1), Symbol::effect(0, 1, 0)});
  CHECK(multiply(sc, Monomial::identity(2), m).mono == m);
  CHECK(multiply(sc, m, Monomial::identity(2)).mono == m);
}

TEST_CASE("multiply_orthogonal_gives_zero") {
  Scenario sc = Scenario::chsh();
  Monomial a0 = word(sc, {Symbol::effect(0, 0, 0)});
  Monomial a1 = word(sc, {Symbol::effect(0, 0, 1)});
  CHECK(multiply(sc, a0, a1).zero);
}

TEST_CASE("adjoint_reverses_factors") {
  Scenario sc = Scenario::chsh();
  Monomial m = word(sc, {Symbol::effect(0, 0, 0), Symbol::effect(0, 1, 0)});
  Monomial adj = m.adjoint();
  CHECK(adj.factors[0].front() == Symbol::effect(0, 1, 0));
  CHECK(adj.factors[0].back() == Symbol::effect(0, 0, 0));
}

TEST_CASE("adjoint_is_involution_on_random_words") {
  Scenario sc = Scenario::bell(3, 2, 2, 3);
  std::mt19937 rng(7);
  std::vector<Symbol> gens = alphabet(sc);
  for (int t = 0; t < 200; ++t) {
    std::vector<Symbol> syms;
    const int len = static_cast<int>(rng() % 6);
    for (int k = 0; k < len; ++k) syms.push_back(gens[rng() % gens.size()]);
    CanonicalForm cf = canonicalize(sc, syms);
    if (cf.zero) continue;
    CHECK(cf.mono.adjoint().adjoint() == cf.mono);
  }
}

TEST_CASE("word_list_chsh_level_counts") {
  Scenario sc = Scenario::chsh();
  auto l1 = generate_word_list(sc, HierarchyLevel::of(1));
  CHECK(l1.size() == 9);
  auto l2 = generate_word_list(sc, HierarchyLevel::of(2));
  CHECK(l2.size() == 41);
  CHECK(l1[0].is_identity());
  CHECK(l2[0].is_identity());
}

TEST_CASE("word_list_single_party_level1") {
  Scenario sc = Scenario::prepare_measure(1, 2, 0);
  auto l1 = generate_word_list(sc, HierarchyLevel::of(1));
  REQUIRE(l1.size() == 3);
  CHECK(l1[0].is_identity());
  CHECK(l1[1] == Monomial::single(1, Symbol::effect(0, 0, 0)));
  CHECK(l1[2] == Monomial::single(1, Symbol::effect(0, 0, 1)));
}

TEST_CASE("word_list_nesting") {
  Scenario sc = Scenario::bell(3, 2, 3, 2);
  auto l1 = generate_word_list(sc, HierarchyLevel::of(1));
  auto l2 = generate_word_list(sc, HierarchyLevel::of(2));
  std::set<Monomial> s2(l2.begin(), l2.end());
  for (const auto& w : l1) CHECK(s2.count(w) == 1);
  // extra words extend the list but keep containment
  auto plus = generate_word_list(sc, HierarchyLevel::plus(1, {l2[20], l2[30]}));
  std::set<Monomial> sp(plus.begin(), plus.end());
  for (const auto& w : l1) CHECK(sp.count(w) == 1);
  CHECK(sp.count(l2[20]) == 1);
}

TEST_CASE("word_list_deterministic_and_sorted") {
  Scenario sc = Scenario::bell(2, 2, 3, 2);
  auto a = generate_word_list(sc, HierarchyLevel::of(2));
  auto b = generate_word_list(sc, HierarchyLevel::of(2));
  CHECK(a == b);
  for (std::size_t k = 1; k < a.size(); ++k) CHECK(a[k - 1] < a[k]);
}

TEST_CASE("no_canonical_word_has_adjacent_same_setting") {
  Scenario sc = Scenario::bell(3, 3, 2, 2);
  auto l2 = generate_word_list(sc, HierarchyLevel::of(2));
  for (const auto& w : l2)
    for (const auto& f : w.factors)
      for (std::size_t k = 1; k < f.size(); ++k) CHECK(f[k - 1].setting != f[k].setting);
}

TEST_CASE("confluence_under_cross_party_reordering") {
  Scenario sc = Scenario::chsh();
  std::vector<Symbol> gens = alphabet(sc);
  std::mt19937 rng(99);
  for (int t = 0; t < 1000; ++t) {
    std::vector<Symbol> syms;
    const int len = 2 + static_cast<int>(rng() % 5);
    for (int k = 0; k < len; ++k) syms.push_back(gens[rng() % gens.size()]);
    CanonicalForm base = canonicalize(sc, syms);
    // random legal adjacent swaps: only across parties
    std::vector<Symbol> shuffled = syms;
    for (int s = 0; s < 10; ++s) {
      const int k = static_cast<int>(rng() % (shuffled.size() - 1));
      if (shuffled[k].party != shuffled[k + 1].party) std::swap(shuffled[k], shuffled[k + 1]);
    }
    CanonicalForm alt = canonicalize(sc, shuffled);
    CHECK(base.zero == alt.zero);
    if (!base.zero) CHECK(base.mono == alt.mono);
  }
}
