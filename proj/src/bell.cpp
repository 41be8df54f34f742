#include "mmb/bell.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "mmb/oracle.hpp"

namespace mmb {

double& BellFunctional::jc(int a, int b, int x, int y) {
  return joint[((static_cast<std::size_t>(a) * sc.outcomes[1] + b) * sc.settings[0] + x) *
                   sc.settings[1] +
               y];
}
double BellFunctional::jc(int a, int b, int x, int y) const {
  return joint[((static_cast<std::size_t>(a) * sc.outcomes[1] + b) * sc.settings[0] + x) *
                   sc.settings[1] +
               y];
}
double& BellFunctional::ma(int a, int x) {
  return marg_a[static_cast<std::size_t>(a) * sc.settings[0] + x];
}
double BellFunctional::ma(int a, int x) const {
  return marg_a[static_cast<std::size_t>(a) * sc.settings[0] + x];
}
double& BellFunctional::mb(int b, int y) {
  return marg_b[static_cast<std::size_t>(b) * sc.settings[1] + y];
}
double BellFunctional::mb(int b, int y) const {
  return marg_b[static_cast<std::size_t>(b) * sc.settings[1] + y];
}

double BellFunctional::evaluate(const ProbTable& P) const {
  if (!(P.sc == sc)) throw std::invalid_argument("bell evaluate: scenario mismatch");
  double s = 0;
  for (int a = 0; a < sc.outcomes[0]; ++a)
    for (int b = 0; b < sc.outcomes[1]; ++b)
      for (int x = 0; x < sc.settings[0]; ++x)
        for (int y = 0; y < sc.settings[1]; ++y) s += jc(a, b, x, y) * P.at(a, b, x, y);
  for (int a = 0; a < sc.outcomes[0]; ++a)
    for (int x = 0; x < sc.settings[0]; ++x) s += ma(a, x) * P.marginal_a(a, x);
  for (int b = 0; b < sc.outcomes[1]; ++b)
    for (int y = 0; y < sc.settings[1]; ++y) s += mb(b, y) * P.marginal_b(b, y);
  return s;
}

BellFunctional BellFunctional::zero(const Scenario& sc, std::string name) {
  sc.validate();
  BellFunctional f;
  f.name = std::move(name);
  f.sc = sc;
  f.joint.assign(static_cast<std::size_t>(sc.outcomes[0]) * sc.outcomes[1] * sc.settings[0] *
                     sc.settings[1],
                 0.0);
  f.marg_a.assign(static_cast<std::size_t>(sc.outcomes[0]) * sc.settings[0], 0.0);
  f.marg_b.assign(static_cast<std::size_t>(sc.outcomes[1]) * sc.settings[1], 0.0);
  return f;
}

BellFunctional BellFunctional::from_cg(const Scenario& sc, std::string name,
                                       const std::vector<double>& alice,
                                       const std::vector<double>& bob,
                                       const std::vector<std::vector<double>>& joint_00,
                                       double local_bound) {
  BellFunctional f = zero(sc, std::move(name));
  for (int x = 0; x < sc.settings[0]; ++x) f.ma(0, x) = alice.at(x);
  for (int y = 0; y < sc.settings[1]; ++y) f.mb(0, y) = bob.at(y);
  for (int x = 0; x < sc.settings[0]; ++x)
    for (int y = 0; y < sc.settings[1]; ++y) f.jc(0, 0, x, y) = joint_00.at(x).at(y);
  f.local_bound = local_bound;
  return f;
}

BellFunctional BellFunctional::from_correlators(const Scenario& sc, std::string name,
                                                const std::vector<double>& alice,
                                                const std::vector<double>& bob,
                                                const std::vector<std::vector<double>>& corr,
                                                double local_bound) {
  if (sc.outcomes[0] != 2 || sc.outcomes[1] != 2)
    throw std::invalid_argument("correlator form needs dichotomic outcomes");
  BellFunctional f = zero(sc, std::move(name));
  auto sign = [](int o) { return o == 0 ? 1.0 : -1.0; };
  for (int x = 0; x < sc.settings[0]; ++x)
    for (int a = 0; a < 2; ++a) f.ma(a, x) = alice.at(x) * sign(a);
  for (int y = 0; y < sc.settings[1]; ++y)
    for (int b = 0; b < 2; ++b) f.mb(b, y) = bob.at(y) * sign(b);
  for (int x = 0; x < sc.settings[0]; ++x)
    for (int y = 0; y < sc.settings[1]; ++y)
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) f.jc(a, b, x, y) = corr.at(x).at(y) * sign(a) * sign(b);
  f.local_bound = local_bound;
  return f;
}

double BellFunctional::deterministic_bound() const {
  const auto sa = deterministic_strategies(std::vector<int>(sc.settings[0], sc.outcomes[0]));
  const auto sb = deterministic_strategies(std::vector<int>(sc.settings[1], sc.outcomes[1]));
  double best = -1e300;
  for (const auto& da : sa)
    for (const auto& db : sb) {
      double v = 0;
      for (int x = 0; x < sc.settings[0]; ++x) v += ma(da[x], x);
      for (int y = 0; y < sc.settings[1]; ++y) v += mb(db[y], y);
      for (int x = 0; x < sc.settings[0]; ++x)
        for (int y = 0; y < sc.settings[1]; ++y) v += jc(da[x], db[y], x, y);
      best = std::max(best, v);
    }
  return best;
}

BellFunctional tilted_chsh_functional(double alpha) {
  BellFunctional f = BellFunctional::from_correlators(
      Scenario::chsh(), "tilted_chsh", {alpha, 0}, {0, 0}, {{1, 1}, {1, -1}}, 2 + alpha);
  f.quantum_bound = std::sqrt(8 + 2 * alpha * alpha);
  f.source = "tilted CHSH family, alpha-weighted A1 marginal";
  return f;
}

namespace {

BellFunctional parse_entry(const std::string& name, const nlohmann::json& j) {
  const auto& jsc = j.at("scenario");
  auto settings = jsc.at("settings").get<std::vector<int>>();
  auto outcomes = jsc.at("outcomes").get<std::vector<int>>();
  Scenario sc = Scenario::bell(settings.at(0), outcomes.at(0), settings.at(1), outcomes.at(1));
  BellFunctional f;
  if (j.contains("cg")) {
    const auto& cg = j.at("cg");
    f = BellFunctional::from_cg(sc, name, cg.at("alice").get<std::vector<double>>(),
                                cg.at("bob").get<std::vector<double>>(),
                                cg.at("joint").get<std::vector<std::vector<double>>>(),
                                j.at("local_bound").get<double>());
  } else if (j.contains("correlators")) {
    const auto& co = j.at("correlators");
    f = BellFunctional::from_correlators(
        sc, name, co.at("alice").get<std::vector<double>>(),
        co.at("bob").get<std::vector<double>>(),
        co.at("joint").get<std::vector<std::vector<double>>>(),
        j.at("local_bound").get<double>());
  } else {
    f = BellFunctional::zero(sc, name);
    f.local_bound = j.at("local_bound").get<double>();
    const auto& jt = j.at("joint");
    for (int a = 0; a < sc.outcomes[0]; ++a)
      for (int b = 0; b < sc.outcomes[1]; ++b)
        for (int x = 0; x < sc.settings[0]; ++x)
          for (int y = 0; y < sc.settings[1]; ++y)
            f.jc(a, b, x, y) = jt.at(a).at(b).at(x).at(y).get<double>();
    if (j.contains("marginal_a")) {
      const auto& mj = j.at("marginal_a");
      for (int a = 0; a < sc.outcomes[0]; ++a)
        for (int x = 0; x < sc.settings[0]; ++x) f.ma(a, x) = mj.at(a).at(x).get<double>();
    }
    if (j.contains("marginal_b")) {
      const auto& mj = j.at("marginal_b");
      for (int b = 0; b < sc.outcomes[1]; ++b)
        for (int y = 0; y < sc.settings[1]; ++y) f.mb(b, y) = mj.at(b).at(y).get<double>();
    }
  }
  if (j.contains("quantum_bound")) f.quantum_bound = j.at("quantum_bound").get<double>();
  if (j.contains("source")) f.source = j.at("source").get<std::string>();
  return f;
}

}  // namespace

BellRegistry BellRegistry::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open Bell registry: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  nlohmann::json j = nlohmann::json::parse(ss.str());
  BellRegistry r;
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (it.key() == "tilted_chsh") continue;  // parametric, built in get()
    r.entries_.emplace(it.key(), parse_entry(it.key(), it.value()));
  }
  return r;
}

BellRegistry BellRegistry::load_default(const std::string& override_path) {
  if (!override_path.empty()) return load(override_path);
  if (const char* env = std::getenv("MMB_REGISTRY")) return load(env);
  return load("data/bell_registry.json");
}

BellFunctional BellRegistry::get(const std::string& name,
                                 const std::map<std::string, double>& params) const {
  if (name == "tilted_chsh") {
    auto it = params.find("alpha");
    return tilted_chsh_functional(it == params.end() ? 0.0 : it->second);
  }
  auto it = entries_.find(name);
  if (it == entries_.end()) throw std::invalid_argument("unknown Bell inequality: " + name);
  return it->second;
}

std::vector<std::string> BellRegistry::names() const {
  std::vector<std::string> out;
  for (const auto& [k, v] : entries_) out.push_back(k);
  out.push_back("tilted_chsh");
  return out;
}

}  // namespace mmb
