#include "mmb/realization.hpp"

#include <cmath>
#include <complex>
#include <fstream>
#include <random>
#include <sstream>

#include "unsupported/Eigen/KroneckerProduct"

namespace mmb {

using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using std::complex;

namespace {

const MatrixXcd& pauli_x() {
  static const MatrixXcd X = [] {
    MatrixXcd m(2, 2);
    m << 0, 1, 1, 0;
    return m;
  }();
  return X;
}

const MatrixXcd& pauli_y() {
  static const MatrixXcd Y = [] {
    MatrixXcd m(2, 2);
    m << complex<double>(0, 0), complex<double>(0, -1), complex<double>(0, 1),
        complex<double>(0, 0);
    return m;
  }();
  return Y;
}

const MatrixXcd& pauli_z() {
  static const MatrixXcd Z = [] {
    MatrixXcd m(2, 2);
    m << 1, 0, 0, -1;
    return m;
  }();
  return Z;
}

Assemblage dichotomic_from_observables(const std::vector<MatrixXcd>& obs) {
  Assemblage a;
  const int d = static_cast<int>(obs.front().rows());
  const MatrixXcd I = MatrixXcd::Identity(d, d);
  for (const auto& O : obs) a.push_back({0.5 * (I + O), 0.5 * (I - O)});
  return a;
}

}  // namespace

void validate_assemblage(const Assemblage& a, int d, bool projective, double tol) {
  if (a.empty()) throw std::invalid_argument("assemblage: no settings");
  const MatrixXcd I = MatrixXcd::Identity(d, d);
  for (const auto& setting : a) {
    if (setting.empty()) throw std::invalid_argument("assemblage: setting without outcomes");
    MatrixXcd sum = MatrixXcd::Zero(d, d);
    for (const auto& E : setting) {
      if (E.rows() != d || E.cols() != d)
        throw std::invalid_argument("assemblage: effect dimension mismatch");
      if ((E - E.adjoint()).cwiseAbs().maxCoeff() > tol)
        throw std::invalid_argument("assemblage: effect not Hermitian");
      Eigen::SelfAdjointEigenSolver<MatrixXcd> es(E, Eigen::EigenvaluesOnly);
      if (es.eigenvalues().minCoeff() < -tol)
        throw std::invalid_argument("assemblage: effect not PSD");
      sum += E;
      if (projective && (E * E - E).cwiseAbs().maxCoeff() > 1e2 * tol)
        throw std::invalid_argument("assemblage: effect not idempotent");
    }
    if ((sum - I).cwiseAbs().maxCoeff() > tol)
      throw std::invalid_argument("assemblage: effects do not sum to identity");
    if (projective)
      for (std::size_t i = 0; i < setting.size(); ++i)
        for (std::size_t j = i + 1; j < setting.size(); ++j)
          if ((setting[i] * setting[j]).cwiseAbs().maxCoeff() > 1e2 * tol)
            throw std::invalid_argument("assemblage: projectors not orthogonal");
  }
}

void Realization::validate(double tol) const {
  if (dim < 1) throw std::invalid_argument("realization: dim < 1");
  const int parties = static_cast<int>(assemblages.size());
  if (parties != 1 && parties != 2)
    throw std::invalid_argument("realization: need 1 or 2 parties");
  const long n = static_cast<long>(std::pow(dim, parties));
  if (state.rows() != n || state.cols() != n)
    throw std::invalid_argument("realization: state dimension mismatch");
  if ((state - state.adjoint()).cwiseAbs().maxCoeff() > tol)
    throw std::invalid_argument("realization: state not Hermitian");
  if (std::abs(state.trace().real() - 1.0) > 1e3 * tol || std::abs(state.trace().imag()) > tol)
    throw std::invalid_argument("realization: state trace != 1");
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(state, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e2 * tol)
    throw std::invalid_argument("realization: state not PSD");
  for (const auto& a : assemblages) validate_assemblage(a, dim, projective, tol);
}

Scenario Realization::scenario() const {
  if (assemblages.size() == 1)
    return Scenario::prepare_measure(static_cast<int>(assemblages[0].size()),
                                     static_cast<int>(assemblages[0][0].size()), 0);
  return Scenario::bell(
      static_cast<int>(assemblages[0].size()), static_cast<int>(assemblages[0][0].size()),
      static_cast<int>(assemblages[1].size()), static_cast<int>(assemblages[1][0].size()));
}

ProbTable born_rule(const Realization& r) {
  r.validate();
  if (r.assemblages.size() != 2)
    throw std::invalid_argument("born_rule: needs a bipartite realization");
  ProbTable P = ProbTable::zeros(r.scenario());
  const auto& A = r.assemblages[0];
  const auto& B = r.assemblages[1];
  for (std::size_t x = 0; x < A.size(); ++x)
    for (std::size_t y = 0; y < B.size(); ++y)
      for (std::size_t a = 0; a < A[x].size(); ++a)
        for (std::size_t b = 0; b < B[y].size(); ++b) {
          const MatrixXcd op = Eigen::kroneckerProduct(A[x][a], B[y][b]);
          P.at(static_cast<int>(a), static_cast<int>(b), static_cast<int>(x),
               static_cast<int>(y)) = (op * r.state).trace().real();
        }
  return P;
}

TiltedChsh tilted_chsh_realization(double alpha) {
  if (alpha < 0 || alpha >= 2)
    throw std::invalid_argument("tilted CHSH: alpha must lie in [0, 2)");
  const double theta = alpha == 0
                           ? M_PI / 4
                           : 0.5 * std::atan(std::sqrt((4 - alpha * alpha) / (2 * alpha * alpha)));
  const double mu = std::atan(std::sin(2 * theta));

  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(4);
  psi(0) = std::cos(theta);
  psi(3) = std::sin(theta);

  Realization r;
  r.dim = 2;
  r.projective = true;
  r.state = psi * psi.adjoint();
  r.assemblages.push_back(dichotomic_from_observables({pauli_z(), pauli_x()}));
  r.assemblages.push_back(
      dichotomic_from_observables({std::cos(mu) * pauli_z() + std::sin(mu) * pauli_x(),
                                   std::cos(mu) * pauli_z() - std::sin(mu) * pauli_x()}));
  TiltedChsh out;
  out.realization = std::move(r);
  out.theta = theta;
  out.mu = mu;

  ProbTable P = born_rule(out.realization);
  auto corr = [&](int x, int y) {
    double s = 0;
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) s += ((a == b) ? 1.0 : -1.0) * P.at(a, b, x, y);
    return s;
  };
  const double mean_a1 = P.marginal_a(0, 0) - P.marginal_a(1, 0);
  out.violation = alpha * mean_a1 + corr(0, 0) + corr(0, 1) + corr(1, 0) - corr(1, 1);
  return out;
}

namespace {

MatrixXcd haar_unitary(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> N(0, 1);
  MatrixXcd G(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) G(i, j) = complex<double>(N(rng), N(rng));
  Eigen::HouseholderQR<MatrixXcd> qr(G);
  MatrixXcd Q = qr.householderQ();
  MatrixXcd R = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < d; ++i) Q.col(i) *= R(i, i) / std::abs(R(i, i));
  return Q;
}

Assemblage random_assemblage(int d, int settings, int outcomes, bool projective,
                             std::mt19937_64& rng) {
  std::normal_distribution<double> N(0, 1);
  Assemblage a;
  for (int x = 0; x < settings; ++x) {
    std::vector<MatrixXcd> eff;
    if (projective) {
      if (outcomes > d) throw std::invalid_argument("projective sampling needs outcomes <= d");
      MatrixXcd U = haar_unitary(d, rng);
      // surjective rank split of the d eigenvectors over the outcomes
      std::vector<int> owner(d);
      for (int k = 0; k < outcomes; ++k) owner[k] = k;
      for (int k = outcomes; k < d; ++k)
        owner[k] = static_cast<int>(rng() % static_cast<std::uint64_t>(outcomes));
      std::shuffle(owner.begin(), owner.end(), rng);
      for (int o = 0; o < outcomes; ++o) {
        MatrixXcd E = MatrixXcd::Zero(d, d);
        for (int k = 0; k < d; ++k)
          if (owner[k] == o) E += U.col(k) * U.col(k).adjoint();
        eff.push_back(E);
      }
    } else {
      MatrixXcd S = MatrixXcd::Zero(d, d);
      std::vector<MatrixXcd> W;
      for (int o = 0; o < outcomes; ++o) {
        MatrixXcd G(d, d);
        for (int i = 0; i < d; ++i)
          for (int j = 0; j < d; ++j) G(i, j) = complex<double>(N(rng), N(rng));
        W.push_back(G * G.adjoint());
        S += W.back();
      }
      Eigen::SelfAdjointEigenSolver<MatrixXcd> es(S);
      MatrixXcd sinv_half = es.operatorInverseSqrt();
      for (int o = 0; o < outcomes; ++o) {
        MatrixXcd E = sinv_half * W[o] * sinv_half;
        eff.push_back(0.5 * (E + E.adjoint()));
      }
    }
    a.push_back(std::move(eff));
  }
  return a;
}

}  // namespace

Realization sample_random_realization(int d, const Scenario& sc, std::uint64_t seed,
                                      bool projective) {
  if (d < 1) throw std::invalid_argument("sample: d >= 1 required");
  sc.validate();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> N(0, 1);
  Realization r;
  r.dim = d;
  r.projective = projective;
  for (int p = 0; p < sc.parties; ++p)
    r.assemblages.push_back(
        random_assemblage(d, sc.settings[p], sc.outcomes[p], projective, rng));
  const long n = static_cast<long>(std::pow(d, sc.parties));
  Eigen::VectorXcd psi(n);
  for (long i = 0; i < n; ++i) psi(i) = complex<double>(N(rng), N(rng));
  psi.normalize();
  r.state = psi * psi.adjoint();
  return r;
}

Assemblage pauli_xz_assemblage() { return dichotomic_from_observables({pauli_x(), pauli_z()}); }

Assemblage pauli_xyz_assemblage() {
  return dichotomic_from_observables({pauli_x(), pauli_y(), pauli_z()});
}

Assemblage trine_assemblage() {
  std::vector<MatrixXcd> obs;
  for (int k = 0; k < 3; ++k) {
    const double phi = 2 * M_PI * k / 3.0;
    obs.push_back(std::cos(phi) * pauli_z() + std::sin(phi) * pauli_x());
  }
  return dichotomic_from_observables(obs);
}

Assemblage depolarize(const Assemblage& a, double eta, int d) {
  Assemblage out = a;
  const MatrixXcd I = MatrixXcd::Identity(d, d);
  for (auto& setting : out)
    for (auto& E : setting) E = eta * E + (1.0 - eta) * (E.trace() / double(d)) * I;
  return out;
}

MatrixXd realify(const MatrixXcd& H) {
  const int d = static_cast<int>(H.rows());
  MatrixXd M(2 * d, 2 * d);
  M.topLeftCorner(d, d) = H.real();
  M.bottomRightCorner(d, d) = H.real();
  M.topRightCorner(d, d) = -H.imag();
  M.bottomLeftCorner(d, d) = H.imag();
  return M;
}

std::string Realization::serialize() const {
  std::ostringstream os;
  os.precision(17);
  os << "realization v1\n";
  os << "dim " << dim << "\nparties " << assemblages.size() << "\nprojective "
     << (projective ? 1 : 0) << "\n";
  auto dump = [&os](const MatrixXcd& M) {
    os << M.rows() << " " << M.cols() << "\n";
    for (long i = 0; i < M.rows(); ++i) {
      for (long j = 0; j < M.cols(); ++j)
        os << M(i, j).real() << " " << M(i, j).imag() << (j + 1 < M.cols() ? " " : "");
      os << "\n";
    }
  };
  os << "state\n";
  dump(state);
  for (const auto& a : assemblages) {
    os << "assemblage " << a.size() << "\n";
    for (const auto& setting : a) {
      os << "setting " << setting.size() << "\n";
      for (const auto& E : setting) dump(E);
    }
  }
  return os.str();
}

Realization Realization::deserialize(const std::string& text) {
  std::istringstream is(text);
  std::string tok;
  is >> tok;
  if (tok != "realization") throw std::runtime_error("realization: bad header");
  is >> tok;  // version
  Realization r;
  int parties = 0, proj = 0;
  is >> tok >> r.dim >> tok >> parties >> tok >> proj;
  r.projective = proj != 0;
  auto read_mat = [&is]() {
    long rows, cols;
    is >> rows >> cols;
    MatrixXcd M(rows, cols);
    for (long i = 0; i < rows; ++i)
      for (long j = 0; j < cols; ++j) {
        double re, im;
        is >> re >> im;
        M(i, j) = complex<double>(re, im);
      }
    return M;
  };
  is >> tok;  // "state"
  r.state = read_mat();
  for (int p = 0; p < parties; ++p) {
    int settings = 0;
    is >> tok >> settings;
    Assemblage a;
    for (int x = 0; x < settings; ++x) {
      int outcomes = 0;
      is >> tok >> outcomes;
      std::vector<MatrixXcd> eff;
      for (int o = 0; o < outcomes; ++o) eff.push_back(read_mat());
      a.push_back(std::move(eff));
    }
    r.assemblages.push_back(std::move(a));
  }
  if (!is) throw std::runtime_error("realization: truncated file");
  return r;
}

Realization Realization::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open realization file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return deserialize(ss.str());
}

void Realization::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write realization file: " + path);
  out << serialize();
}

}  // namespace mmb
