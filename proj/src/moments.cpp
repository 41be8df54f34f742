#include "mmb/moments.hpp"

#include <algorithm>

namespace mmb {

Monomial MomentIndex::key_of(const Monomial& w) {
  Monomial adj = w.adjoint();
  return std::min(w, adj);
}

MomentId MomentIndex::intern(const Monomial& w) {
  Monomial rep = key_of(w);
  auto it = ids_.find(rep);
  if (it != ids_.end()) return it->second;
  MomentId id = static_cast<MomentId>(reps_.size());
  ids_.emplace(rep, id);
  reps_.push_back(rep);
  return id;
}

std::optional<MomentId> MomentIndex::find(const Monomial& w) const {
  auto it = ids_.find(key_of(w));
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

namespace {

inline std::size_t tri(int i, int j, int n) {
  // upper triangle, i <= j, row-major
  return static_cast<std::size_t>(i) * n - static_cast<std::size_t>(i) * (i + 1) / 2 + j;
}

}  // namespace

const std::optional<MomentId>& MomentTemplate::entry(int i, int j) const {
  if (i > j) std::swap(i, j);
  return entries[tri(i, j, size())];
}

Eigen::MatrixXd MomentTemplate::instantiate(const std::vector<double>& moment_values) const {
  const int n = size();
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j)
      if (auto id = entries[tri(i, j, n)]) M(i, j) = M(j, i) = moment_values[*id];
  return M;
}

const std::optional<int>& UnknownBlockTemplate::entry(int i, int j) const {
  if (i > j) std::swap(i, j);
  return entries[tri(i, j, size())];
}

int UnknownBlockTemplate::unit_variable() const {
  const auto& e = entry(0, 0);
  if (!e) throw std::logic_error("unknown block has no unit entry");
  return *e;
}

UnknownKey UnknownKey::canonical(Monomial left, Monomial right, Monomial bob) {
  UnknownKey a{left, right, bob};
  UnknownKey b{std::move(right), std::move(left), bob.adjoint()};
  return std::min(a, b);
}

int UnknownIndex::intern(const UnknownKey& k) {
  auto it = ids_.find(k);
  if (it != ids_.end()) return it->second;
  int id = static_cast<int>(reps_.size());
  ids_.emplace(k, id);
  reps_.push_back(k);
  return id;
}

std::optional<int> UnknownIndex::find(const UnknownKey& k) const {
  auto it = ids_.find(k);
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

namespace {

MomentTemplate build_localizing(const Scenario& sc,
                                std::shared_ptr<const std::vector<Monomial>> words,
                                std::optional<Symbol> localizer, MomentIndex& index) {
  const auto& W = *words;
  const int n = static_cast<int>(W.size());
  MomentTemplate t;
  t.words = words;
  t.localizer = localizer;
  t.entries.resize(static_cast<std::size_t>(n) * (n + 1) / 2);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      CanonicalForm prod = localizer
                               ? multiply(sc, W[i], Monomial::single(sc.parties, *localizer))
                               : CanonicalForm::of(W[i]);
      if (!prod.zero) prod = multiply(sc, prod.mono, W[j].adjoint());
      if (prod.zero)
        t.entries[tri(i, j, n)] = std::nullopt;
      else
        t.entries[tri(i, j, n)] = index.intern(prod.mono);
    }
  }
  return t;
}

}  // namespace

MomentTemplate build_identity_template(const Scenario& sc,
                                       std::shared_ptr<const std::vector<Monomial>> words,
                                       MomentIndex& index) {
  if (words->empty() || !(*words)[0].is_identity())
    throw std::invalid_argument("word list must start with the identity");
  return build_localizing(sc, std::move(words), std::nullopt, index);
}

MomentTemplate build_effect_template(const Scenario& sc,
                                     std::shared_ptr<const std::vector<Monomial>> words,
                                     Symbol effect, MomentIndex& index) {
  if (effect.party != 0 || effect.kind != SymbolKind::effect)
    throw std::invalid_argument("localizer must be an effect of the first party");
  if (effect.setting >= sc.settings[0] || effect.outcome >= sc.outcomes[0])
    throw std::invalid_argument("localizer effect out of scenario bounds");
  return build_localizing(sc, std::move(words), effect, index);
}

UnknownBlockTemplate build_unknown_template(const Scenario& sc,
                                            std::shared_ptr<const std::vector<Monomial>> words,
                                            std::string tag) {
  const auto& W = *words;
  const int n = static_cast<int>(W.size());
  UnknownBlockTemplate t;
  t.words = words;
  t.tag = std::move(tag);
  t.entries.resize(static_cast<std::size_t>(n) * (n + 1) / 2);
  const bool bipartite = sc.parties == 2;
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      Monomial left = W[i];
      Monomial right = W[j];
      Monomial bob = Monomial::identity(sc.parties);
      if (bipartite) {
        // split: the unknown operator acts on Alice, Bob words contract
        Monomial bi = Monomial::identity(sc.parties);
        bi.factors[1] = W[i].factors[1];
        Monomial bj = Monomial::identity(sc.parties);
        bj.factors[1] = W[j].factors[1];
        CanonicalForm prod = multiply(sc, bi, bj.adjoint());
        if (prod.zero) {
          t.entries[tri(i, j, n)] = std::nullopt;
          continue;
        }
        bob = prod.mono;
        left.factors[1].clear();
        right.factors[1].clear();
      }
      t.entries[tri(i, j, n)] = t.index.intern(UnknownKey::canonical(left, right, bob));
    }
  }
  return t;
}

FixedAssignment fixed_assignments(const Scenario& sc, MomentIndex& index, const ProbTable& P,
                                  double tol) {
  if (!(P.sc == sc)) throw std::invalid_argument("fixed_assignments: scenario mismatch");
  P.validate(tol);
  FixedAssignment f;
  f.values.emplace_back(index.intern(Monomial::identity(sc.parties)), 1.0);
  for (int x = 0; x < sc.settings[0]; ++x)
    for (int a = 0; a < sc.outcomes[0]; ++a)
      f.values.emplace_back(index.intern(Monomial::single(sc.parties, Symbol::effect(0, x, a))),
                            P.marginal_a(a, x));
  for (int y = 0; y < sc.settings[1]; ++y)
    for (int b = 0; b < sc.outcomes[1]; ++b)
      f.values.emplace_back(index.intern(Monomial::single(sc.parties, Symbol::effect(1, y, b))),
                            P.marginal_b(b, y));
  for (int x = 0; x < sc.settings[0]; ++x)
    for (int y = 0; y < sc.settings[1]; ++y)
      for (int a = 0; a < sc.outcomes[0]; ++a)
        for (int b = 0; b < sc.outcomes[1]; ++b) {
          Monomial w = Monomial::identity(sc.parties);
          w.factors[0] = {Symbol::effect(0, x, a)};
          w.factors[1] = {Symbol::effect(1, y, b)};
          f.values.emplace_back(index.intern(w), P.at(a, b, x, y));
        }
  return f;
}

}  // namespace mmb
