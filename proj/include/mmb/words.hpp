#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace mmb {

// A measurement scenario. Party 0 is Alice, party 1 is Bob. Outcome counts
// are uniform over the settings of a party. `states` is nonzero only in
// one-party prepare-and-measure scenarios, where it counts the preparations.
struct Scenario {
  int parties = 2;
  std::vector<int> settings;  // per party
  std::vector<int> outcomes;  // per party
  int states = 0;

  static Scenario bell(int settings_a, int outcomes_a, int settings_b, int outcomes_b);
  static Scenario prepare_measure(int settings_a, int outcomes_a, int n_states);
  static Scenario chsh() { return bell(2, 2, 2, 2); }

  void validate() const;
  int effect_count(int party) const { return settings[party] * outcomes[party]; }
  bool operator==(const Scenario&) const = default;
  std::string describe() const;
};

enum class SymbolKind : std::uint8_t { effect, state };

// One generator of the effect algebra: a measurement effect E_{outcome|setting}
// of some party, or (prepare-and-measure only) a preparation symbol.
struct Symbol {
  std::uint8_t party = 0;
  SymbolKind kind = SymbolKind::effect;
  std::int16_t setting = 0;  // state symbols: index of the preparation
  std::int16_t outcome = 0;

  static Symbol effect(int party, int setting, int outcome);
  static Symbol state(int index);

  auto operator<=>(const Symbol&) const = default;
};

// A word of the algebra, stored as one factor per party. Cross-party
// commutation is structural: symbols of distinct parties never mix.
struct Monomial {
  std::vector<std::vector<Symbol>> factors;  // size = scenario.parties

  static Monomial identity(int parties);
  static Monomial single(int parties, Symbol s);

  int degree() const;
  int party_degree(int party) const { return static_cast<int>(factors[party].size()); }
  bool is_identity() const { return degree() == 0; }
  Monomial adjoint() const;

  bool operator==(const Monomial&) const = default;
  // Total order: degree, then per-party degree split, then symbol sequence.
  // Word lists and moment indices inherit this order, so they are
  // reproducible across runs and machines.
  std::strong_ordering operator<=>(const Monomial& o) const;

  std::string str() const;
};

// Result of canonicalization: either a monomial or the algebraic zero that
// orthogonality annihilation produces.
struct CanonicalForm {
  bool zero = false;
  Monomial mono;

  static CanonicalForm of(Monomial m) { return CanonicalForm{false, std::move(m)}; }
  static CanonicalForm make_zero() { return CanonicalForm{true, {}}; }
};

// Hierarchy level: the word list of level `level`, optionally extended by
// explicit extra words ("2+"-style levels).
struct HierarchyLevel {
  int level = 1;
  std::vector<Monomial> extra;

  static HierarchyLevel of(int l) { return HierarchyLevel{l, {}}; }
  static HierarchyLevel plus(int l, std::vector<Monomial> extra_words) {
    return HierarchyLevel{l, std::move(extra_words)};
  }
};

// Rewrites a raw symbol sequence to canonical form:
//   E_{a|x} E_{a|x}  -> E_{a|x}
//   E_{a|x} E_{a'|x} -> 0            (a != a', same party and setting)
//   cross-party symbols commute and are regrouped per party.
// Each rule shortens the word, so rewriting terminates; rules act only on
// adjacent same-party same-setting pairs, so the result is order-independent.
CanonicalForm canonicalize(const Scenario& sc, const std::vector<Symbol>& raw);

CanonicalForm multiply(const Scenario& sc, const Monomial& a, const Monomial& b);

// All canonical words of degree <= lvl.level (plus lvl.extra), identity first,
// sorted by the monomial order, deduplicated.
std::vector<Monomial> generate_word_list(const Scenario& sc, const HierarchyLevel& lvl);

// Same, over a restricted generator set (e.g. one projector per setting).
std::vector<Monomial> generate_word_list(const Scenario& sc, const HierarchyLevel& lvl,
                                         const std::vector<Symbol>& generators);

// The alphabet of generators: every effect symbol of every party, plus the
// state symbols in prepare-and-measure scenarios.
std::vector<Symbol> alphabet(const Scenario& sc);

}  // namespace mmb
