#include "mmb/words.hpp"

#include <algorithm>
#include <set>

namespace mmb {

Scenario Scenario::bell(int settings_a, int outcomes_a, int settings_b, int outcomes_b) {
  Scenario sc;
  sc.parties = 2;
  sc.settings = {settings_a, settings_b};
  sc.outcomes = {outcomes_a, outcomes_b};
  sc.validate();
  return sc;
}

Scenario Scenario::prepare_measure(int settings_a, int outcomes_a, int n_states) {
  Scenario sc;
  sc.parties = 1;
  sc.settings = {settings_a};
  sc.outcomes = {outcomes_a};
  sc.states = n_states;
  sc.validate();
  return sc;
}

void Scenario::validate() const {
  if (parties != 1 && parties != 2)
    throw std::invalid_argument("scenario: parties must be 1 or 2");
  if (static_cast<int>(settings.size()) != parties || static_cast<int>(outcomes.size()) != parties)
    throw std::invalid_argument("scenario: settings/outcomes size mismatch");
  for (int p = 0; p < parties; ++p)
    if (settings[p] < 1 || outcomes[p] < 1)
      throw std::invalid_argument("scenario: counts must be >= 1");
  if (states < 0 || (parties == 2 && states != 0))
    throw std::invalid_argument("scenario: preparations only exist in one-party mode");
}

std::string Scenario::describe() const {
  std::string s = parties == 2 ? "bell(" : "pm(";
  for (int p = 0; p < parties; ++p) {
    if (p) s += ";";
    s += std::to_string(settings[p]) + "x" + std::to_string(outcomes[p]);
  }
  if (states > 0) s += ";rho=" + std::to_string(states);
  return s + ")";
}

Symbol Symbol::effect(int party, int setting, int outcome) {
  Symbol s;
  s.party = static_cast<std::uint8_t>(party);
  s.kind = SymbolKind::effect;
  s.setting = static_cast<std::int16_t>(setting);
  s.outcome = static_cast<std::int16_t>(outcome);
  return s;
}

Symbol Symbol::state(int index) {
  Symbol s;
  s.party = 0;
  s.kind = SymbolKind::state;
  s.setting = static_cast<std::int16_t>(index);
  s.outcome = 0;
  return s;
}

Monomial Monomial::identity(int parties) {
  Monomial m;
  m.factors.resize(parties);
  return m;
}

Monomial Monomial::single(int parties, Symbol s) {
  Monomial m = identity(parties);
  m.factors[s.party].push_back(s);
  return m;
}

int Monomial::degree() const {
  int d = 0;
  for (const auto& f : factors) d += static_cast<int>(f.size());
  return d;
}

Monomial Monomial::adjoint() const {
  Monomial m = *this;
  for (auto& f : m.factors) std::reverse(f.begin(), f.end());
  return m;
}

std::strong_ordering Monomial::operator<=>(const Monomial& o) const {
  if (auto c = degree() <=> o.degree(); c != 0) return c;
  for (std::size_t p = 0; p < factors.size(); ++p)
    if (auto c = factors[p].size() <=> o.factors[p].size(); c != 0) return c;
  for (std::size_t p = 0; p < factors.size(); ++p)
    if (auto c = factors[p] <=> o.factors[p]; c != 0) return c;
  return std::strong_ordering::equal;
}

std::string Monomial::str() const {
  if (is_identity()) return "1";
  std::string s;
  for (std::size_t p = 0; p < factors.size(); ++p) {
    for (const Symbol& sym : factors[p]) {
      if (!s.empty()) s += ".";
      if (sym.kind == SymbolKind::state) {
        s += "r" + std::to_string(sym.setting);
      } else {
        s += std::string(1, char('A' + p)) + std::to_string(sym.outcome) + "|" +
             std::to_string(sym.setting);
      }
    }
  }
  return s;
}

namespace {

void check_symbol(const Scenario& sc, const Symbol& s) {
  if (s.party >= sc.parties) throw std::invalid_argument("symbol party out of range");
  if (s.kind == SymbolKind::state) {
    if (s.setting < 0 || s.setting >= sc.states)
      throw std::invalid_argument("state symbol out of range");
    return;
  }
  if (s.setting < 0 || s.setting >= sc.settings[s.party] || s.outcome < 0 ||
      s.outcome >= sc.outcomes[s.party])
    throw std::invalid_argument("effect symbol out of scenario bounds");
}

// Appends one symbol to a per-party factor kept in canonical form.
// Returns false on orthogonality annihilation.
bool push_symbol(std::vector<Symbol>& f, const Symbol& s) {
  if (!f.empty()) {
    const Symbol& top = f.back();
    if (top.kind == SymbolKind::effect && s.kind == SymbolKind::effect &&
        top.setting == s.setting) {
      if (top.outcome == s.outcome) return true;  // idempotent
      return false;                               // orthogonal
    }
  }
  f.push_back(s);
  return true;
}

}  // namespace

CanonicalForm canonicalize(const Scenario& sc, const std::vector<Symbol>& raw) {
  Monomial m = Monomial::identity(sc.parties);
  for (const Symbol& s : raw) {
    check_symbol(sc, s);
    if (!push_symbol(m.factors[s.party], s)) return CanonicalForm::make_zero();
  }
  return CanonicalForm::of(std::move(m));
}

CanonicalForm multiply(const Scenario& sc, const Monomial& a, const Monomial& b) {
  if (a.factors.size() != b.factors.size())
    throw std::invalid_argument("multiply: scenario mismatch");
  Monomial m = a;
  for (std::size_t p = 0; p < m.factors.size(); ++p)
    for (const Symbol& s : b.factors[p]) {
      check_symbol(sc, s);
      if (!push_symbol(m.factors[p], s)) return CanonicalForm::make_zero();
    }
  return CanonicalForm::of(std::move(m));
}

std::vector<Symbol> alphabet(const Scenario& sc) {
  std::vector<Symbol> out;
  for (int p = 0; p < sc.parties; ++p)
    for (int x = 0; x < sc.settings[p]; ++x)
      for (int a = 0; a < sc.outcomes[p]; ++a) out.push_back(Symbol::effect(p, x, a));
  for (int y = 0; y < sc.states; ++y) out.push_back(Symbol::state(y));
  return out;
}

std::vector<Monomial> generate_word_list(const Scenario& sc, const HierarchyLevel& lvl) {
  return generate_word_list(sc, lvl, alphabet(sc));
}

std::vector<Monomial> generate_word_list(const Scenario& sc, const HierarchyLevel& lvl,
                                         const std::vector<Symbol>& gens) {
  if (lvl.level < 1) throw std::invalid_argument("hierarchy level must be >= 1");
  std::set<Monomial> words;
  words.insert(Monomial::identity(sc.parties));
  std::vector<Monomial> frontier = {Monomial::identity(sc.parties)};
  for (int d = 1; d <= lvl.level; ++d) {
    std::vector<Monomial> next;
    for (const Monomial& w : frontier)
      for (const Symbol& g : gens) {
        CanonicalForm cf = multiply(sc, w, Monomial::single(sc.parties, g));
        if (cf.zero || cf.mono.degree() != d) continue;
        if (words.insert(cf.mono).second) next.push_back(cf.mono);
      }
    frontier = std::move(next);
  }
  for (const Monomial& w : lvl.extra) {
    CanonicalForm cf = multiply(sc, Monomial::identity(sc.parties), w);
    if (!cf.zero) words.insert(cf.mono);
  }
  return {words.begin(), words.end()};
}

}  // namespace mmb
