#include "mmb/probtable.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace mmb {

ProbTable ProbTable::zeros(const Scenario& sc) {
  sc.validate();
  if (sc.parties != 2) throw std::invalid_argument("ProbTable needs a two-party scenario");
  ProbTable t;
  t.sc = sc;
  t.p.assign(static_cast<std::size_t>(sc.outcomes[0]) * sc.outcomes[1] * sc.settings[0] *
                 sc.settings[1],
             0.0);
  return t;
}

double& ProbTable::at(int a, int b, int x, int y) {
  return p[((static_cast<std::size_t>(a) * sc.outcomes[1] + b) * sc.settings[0] + x) *
               sc.settings[1] +
           y];
}

double ProbTable::at(int a, int b, int x, int y) const {
  return p[((static_cast<std::size_t>(a) * sc.outcomes[1] + b) * sc.settings[0] + x) *
               sc.settings[1] +
           y];
}

double ProbTable::marginal_a(int a, int x) const {
  double s = 0;
  for (int b = 0; b < sc.outcomes[1]; ++b) s += at(a, b, x, 0);
  return s;
}

double ProbTable::marginal_b(int b, int y) const {
  double s = 0;
  for (int a = 0; a < sc.outcomes[0]; ++a) s += at(a, b, 0, y);
  return s;
}

void ProbTable::validate(double tol) const {
  for (int x = 0; x < sc.settings[0]; ++x)
    for (int y = 0; y < sc.settings[1]; ++y) {
      double s = 0;
      for (int a = 0; a < sc.outcomes[0]; ++a)
        for (int b = 0; b < sc.outcomes[1]; ++b) {
          double v = at(a, b, x, y);
          if (v < -tol) throw std::invalid_argument("ProbTable: negative probability");
          s += v;
        }
      if (std::abs(s - 1.0) > tol)
        throw std::invalid_argument("ProbTable: setting pair not normalized");
    }
  // no-signaling: marginals must not depend on the remote party's setting
  for (int a = 0; a < sc.outcomes[0]; ++a)
    for (int x = 0; x < sc.settings[0]; ++x)
      for (int y = 1; y < sc.settings[1]; ++y) {
        double s = 0;
        for (int b = 0; b < sc.outcomes[1]; ++b) s += at(a, b, x, y);
        if (std::abs(s - marginal_a(a, x)) > tol)
          throw std::invalid_argument("ProbTable: signaling A-marginal");
      }
  for (int b = 0; b < sc.outcomes[1]; ++b)
    for (int y = 0; y < sc.settings[1]; ++y)
      for (int x = 1; x < sc.settings[0]; ++x) {
        double s = 0;
        for (int a = 0; a < sc.outcomes[0]; ++a) s += at(a, b, x, y);
        if (std::abs(s - marginal_b(b, y)) > tol)
          throw std::invalid_argument("ProbTable: signaling B-marginal");
      }
}

ProbTable ProbTable::transposed() const {
  Scenario s2 = Scenario::bell(sc.settings[1], sc.outcomes[1], sc.settings[0], sc.outcomes[0]);
  ProbTable t = zeros(s2);
  for (int a = 0; a < sc.outcomes[0]; ++a)
    for (int b = 0; b < sc.outcomes[1]; ++b)
      for (int x = 0; x < sc.settings[0]; ++x)
        for (int y = 0; y < sc.settings[1]; ++y) t.at(b, a, y, x) = at(a, b, x, y);
  return t;
}

std::string ProbTable::to_json() const {
  nlohmann::json j;
  j["scenario"] = {{"settings", sc.settings}, {"outcomes", sc.outcomes}};
  auto& tbl = j["table"];
  for (int a = 0; a < sc.outcomes[0]; ++a) {
    nlohmann::json ja;
    for (int b = 0; b < sc.outcomes[1]; ++b) {
      nlohmann::json jb;
      for (int x = 0; x < sc.settings[0]; ++x) {
        nlohmann::json jx;
        for (int y = 0; y < sc.settings[1]; ++y) jx.push_back(at(a, b, x, y));
        jb.push_back(jx);
      }
      ja.push_back(jb);
    }
    tbl.push_back(ja);
  }
  return j.dump(2);
}

ProbTable ProbTable::from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  auto settings = j.at("scenario").at("settings").get<std::vector<int>>();
  auto outcomes = j.at("scenario").at("outcomes").get<std::vector<int>>();
  if (settings.size() != 2 || outcomes.size() != 2)
    throw std::invalid_argument("P-table: need a two-party scenario");
  ProbTable t = zeros(Scenario::bell(settings[0], outcomes[0], settings[1], outcomes[1]));
  const auto& tbl = j.at("table");
  for (int a = 0; a < outcomes[0]; ++a)
    for (int b = 0; b < outcomes[1]; ++b)
      for (int x = 0; x < settings[0]; ++x)
        for (int y = 0; y < settings[1]; ++y)
          t.at(a, b, x, y) = tbl.at(a).at(b).at(x).at(y).get<double>();
  t.validate(1e-8);
  return t;
}

ProbTable ProbTable::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open P-table file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json(ss.str());
}

void ProbTable::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write P-table file: " + path);
  out << to_json() << "\n";
}

}  // namespace mmb
