#pragma once

#include <Eigen/Dense>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mmb/probtable.hpp"
#include "mmb/words.hpp"

namespace mmb {

using MomentId = int;

// Interns canonical words as moment variables. A word and its adjoint share
// one variable; the representative is the smaller of the two under the
// monomial order. The index is built single-threaded, then frozen.
class MomentIndex {
 public:
  explicit MomentIndex(Scenario sc) : sc_(std::move(sc)) {}

  MomentId intern(const Monomial& w);
  std::optional<MomentId> find(const Monomial& w) const;
  const Monomial& representative(MomentId id) const { return reps_[id]; }
  int size() const { return static_cast<int>(reps_.size()); }
  const Scenario& scenario() const { return sc_; }

  static Monomial key_of(const Monomial& w);

 private:
  Scenario sc_;
  std::map<Monomial, MomentId> ids_;
  std::vector<Monomial> reps_;
};

// A symbolic moment matrix chi[X]: entry (i,j) holds the moment variable of
// canonical(S_i · X · S_j†), or nothing when the word annihilates.
struct MomentTemplate {
  std::shared_ptr<const std::vector<Monomial>> words;
  std::optional<Symbol> localizer;               // chi[1] when absent
  std::vector<std::optional<MomentId>> entries;  // row-major upper triangle incl. diagonal

  int size() const { return static_cast<int>(words->size()); }
  const std::optional<MomentId>& entry(int i, int j) const;

  Eigen::MatrixXd instantiate(const std::vector<double>& moment_values) const;
};

// Variable of an unknown-operator block chi[G]: the entry at (i,j) equals
// tr[(A_i G A_j†) x (B_i B_j†) rho], so it is determined by the Alice words
// of S_i and S_j together with canonical(B_i B_j†). Triples are identified
// with their adjoints (swap sides, adjoint the Bob word). One-party scenarios
// use the full words as the two sides with an identity Bob word.
struct UnknownKey {
  Monomial left;
  Monomial right;
  Monomial bob;

  auto operator<=>(const UnknownKey&) const = default;
  static UnknownKey canonical(Monomial left, Monomial right, Monomial bob);
};

// Per-block interning of unknown-entry variables.
class UnknownIndex {
 public:
  int intern(const UnknownKey& k);
  std::optional<int> find(const UnknownKey& k) const;
  int size() const { return static_cast<int>(reps_.size()); }
  const UnknownKey& key(int id) const { return reps_[id]; }

 private:
  std::map<UnknownKey, int> ids_;
  std::vector<UnknownKey> reps_;
};

struct UnknownBlockTemplate {
  std::shared_ptr<const std::vector<Monomial>> words;
  std::string tag;
  UnknownIndex index;
  std::vector<std::optional<int>> entries;  // upper triangle; nothing = annihilated Bob word

  int size() const { return static_cast<int>(words->size()); }
  const std::optional<int>& entry(int i, int j) const;
  // Entry of the scalar chi[G]_1, i.e. the (0,0) position.
  int unit_variable() const;
};

struct FixedAssignment {
  std::vector<std::pair<MomentId, double>> values;
};

MomentTemplate build_identity_template(const Scenario& sc,
                                       std::shared_ptr<const std::vector<Monomial>> words,
                                       MomentIndex& index);

// chi[E] for an effect of the first party (the side whose measurements are
// being quantified).
MomentTemplate build_effect_template(const Scenario& sc,
                                     std::shared_ptr<const std::vector<Monomial>> words,
                                     Symbol effect, MomentIndex& index);

UnknownBlockTemplate build_unknown_template(const Scenario& sc,
                                            std::shared_ptr<const std::vector<Monomial>> words,
                                            std::string tag);

// Pins the degree-(<=1,<=1) moments to an observed distribution: unit,
// A-marginals, B-marginals and joints. P must pass its validity checks.
FixedAssignment fixed_assignments(const Scenario& sc, MomentIndex& index, const ProbTable& P,
                                  double tol = 1e-8);

}  // namespace mmb
