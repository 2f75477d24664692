#include "spintractor/clifford.hpp"

#include <string>

#include "spintractor/squares.hpp"

namespace spintractor {

namespace {

CMat kron(const CMat& a, const CMat& b) {
  CMat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

CMat pauli(char which) {
  using namespace std::complex_literals;
  CMat p(2, 2);
  switch (which) {
    case 'x': p << 0.0, 1.0, 1.0, 0.0; break;
    case 'y': p << 0.0, -1.0i, 1.0i, 0.0; break;
    default: p << 1.0, 0.0, 0.0, -1.0; break;
  }
  return p;
}

// n pairwise anticommuting Hermitian involutions of size 2^⌊n/2⌋.
std::vector<CMat> hermitian_generators(int n) {
  const int m = n / 2;
  std::vector<CMat> out;
  for (int j = 0; j < m; ++j) {
    for (char p : {'x', 'y'}) {
      CMat g = CMat::Identity(1, 1);
      for (int k = 0; k < m; ++k) {
        if (k < j) g = kron(g, pauli('z'));
        else if (k == j) g = kron(g, pauli(p));
        else g = kron(g, CMat::Identity(2, 2));
      }
      out.push_back(std::move(g));
    }
  }
  if (n % 2 == 1) {
    CMat chi = CMat::Identity(1, 1);
    for (int k = 0; k < m; ++k) chi = kron(chi, pauli('z'));
    out.push_back(std::move(chi));
  }
  return out;
}

CMat timelike_product(const std::vector<CMat>& gammas, int r) {
  CMat b = CMat::Identity(gammas.front().rows(), gammas.front().cols());
  for (int i = 0; i < r; ++i) b = b * gammas[static_cast<std::size_t>(i)];
  return b;
}

}  // namespace

Vec Signature::flat_diagonal() const {
  Vec d(dim());
  for (int i = 0; i < dim(); ++i) d(i) = eps(i);
  return d;
}

void Signature::validate() const {
  if (timelike < 0 || spacelike < 0 || dim() < 1)
    throw DomainError("invalid signature (" + std::to_string(timelike) + "," +
                      std::to_string(spacelike) + ")");
  if (dim() > kMaxCliffordDim)
    throw CapacityError("signature dimension " + std::to_string(dim()) +
                        " exceeds representation cap " + std::to_string(kMaxCliffordDim));
}

CliffordRep::CliffordRep(Signature sig, std::vector<CMat> gammas, CMat form, Complex phase)
    : sig_(sig), gammas_(std::move(gammas)), form_(std::move(form)), phase_(phase) {
  sig_.validate();
  if (static_cast<int>(gammas_.size()) != sig_.dim())
    throw DimensionMismatch("gamma count does not match signature dimension");
  if (clifford_defect() > 1e-12) throw ConventionViolation("Clifford relations violated");
  if ((form_ - form_.adjoint()).cwiseAbs().maxCoeff() > 1e-12)
    throw ConventionViolation("spinor form is not Hermitian");
}

CMat CliffordRep::vector_action(const Vec& v) const {
  if (v.size() != dim()) throw DimensionMismatch("vector length does not match signature");
  CMat out = CMat::Zero(spinor_dim(), spinor_dim());
  for (int i = 0; i < dim(); ++i)
    if (v(i) != 0.0) out += v(i) * gamma(i);
  return out;
}

CliffordRep CliffordRep::with_phase(Complex phase) const {
  CliffordRep out = *this;
  out.phase_ = phase;
  out.form_ = phase * timelike_product(gammas_, sig_.timelike);
  return out;
}

double CliffordRep::clifford_defect() const {
  double worst = 0.0;
  const auto id = CMat::Identity(spinor_dim(), spinor_dim());
  for (int i = 0; i < dim(); ++i) {
    for (int j = i; j < dim(); ++j) {
      const double g = i == j ? sig_.eps(i) : 0.0;
      CMat d = gamma(i) * gamma(j) + gamma(j) * gamma(i) + 2.0 * g * id;
      worst = std::max(worst, d.cwiseAbs().maxCoeff());
    }
  }
  return worst;
}

CliffordRep build_uncalibrated_rep(Signature sig) {
  sig.validate();
  using namespace std::complex_literals;
  auto herm = hermitian_generators(sig.dim());
  std::vector<CMat> gammas;
  gammas.reserve(herm.size());
  for (int i = 0; i < sig.dim(); ++i) {
    const auto& e = herm[static_cast<std::size_t>(i)];
    gammas.push_back(i < sig.timelike ? CMat(e) : CMat(1.0i * e));
  }
  // phase 1 is Hermitian iff r(r−1)/2 is even; otherwise use i.
  const int r = sig.timelike;
  const Complex phase = ((r * (r - 1) / 2) % 2 == 0) ? Complex{1.0, 0.0} : Complex{0.0, 1.0};
  CMat form = phase * timelike_product(gammas, r);
  return CliffordRep(sig, std::move(gammas), std::move(form), phase);
}

CliffordRep build_clifford_rep(Signature sig) {
  CliffordRep rep = build_uncalibrated_rep(sig);
  if (sig.timelike == 1 && sig.dim() >= 2) return calibrate_hermitian_phase(rep);
  return rep;
}

Spinor clifford_mul_vector(const CliffordRep& rep, const Vec& v, const Spinor& phi) {
  if (phi.size() != rep.spinor_dim()) throw DimensionMismatch("spinor length mismatch");
  return rep.vector_action(v) * phi;
}

CMat twoform_action(const CliffordRep& rep, const Mat& a) {
  const int n = rep.dim();
  if (a.rows() != n || a.cols() != n) throw DimensionMismatch("two-form size mismatch");
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  if ((a + a.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw ConventionViolation("two-form coefficient array is not antisymmetric");
  CMat out = CMat::Zero(rep.spinor_dim(), rep.spinor_dim());
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (a(i, j) != 0.0) out += a(i, j) * (rep.gamma(i) * rep.gamma(j));
  return out;
}

Spinor clifford_mul_twoform(const CliffordRep& rep, const Mat& a, const Spinor& phi) {
  if (phi.size() != rep.spinor_dim()) throw DimensionMismatch("spinor length mismatch");
  return twoform_action(rep, a) * phi;
}

nlohmann::json gammas_to_json(const CliffordRep& rep) {
  auto dump = [](const CMat& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      nlohmann::json row = nlohmann::json::array();
      for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
      rows.push_back(std::move(row));
    }
    return rows;
  };
  nlohmann::json out;
  out["signature"] = {rep.signature().timelike, rep.signature().spacelike};
  out["phase"] = {rep.phase().real(), rep.phase().imag()};
  out["gammas"] = nlohmann::json::array();
  for (const auto& g : rep.gammas()) out["gammas"].push_back(dump(g));
  out["form"] = dump(rep.hermitian_form());
  return out;
}

}  // namespace spintractor
