#include "stirap/moments.hpp"

#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "stirap/errors.hpp"

namespace stirap {

namespace {

// Operator basis for the drift matrix: o = (a, c, b, a+, c+, b+).
// The generator of any second moment <o_i o_j> follows from the product
// rule d<o_i o_j>/dt = sum_k A_ik <o_k o_j> + A_jk <o_i o_k> + D_ij,
// valid because the Hamiltonian is quadratic and the jump operators are
// linear in the mode operators.
using Matrix6c = Eigen::Matrix<Complex, 6, 6>;

// Ordered index pairs (i, j) such that <o_i o_j> is the p-th canonical
// moment of MomentState.
constexpr int kPairs[12][2] = {{3, 0}, {4, 1}, {5, 2}, {3, 1}, {3, 2}, {4, 2},
                               {1, 2}, {3, 4}, {3, 5}, {2, 2}, {4, 4}, {3, 3}};

// Reduction of an arbitrary product <o_i o_j> to the canonical set:
// <o_i o_j> = constant + m[index] (or its conjugate). Cross-mode operators
// commute; same-mode reversed pairs pick up the +1 commutator constant.
struct Canon {
  int index;
  bool conj;
  double constant;
};

constexpr Canon kCanon[6][6] = {
    // a * (a, c, b, a+, c+, b+)
    {{11, true, 0.0}, {7, true, 0.0}, {8, true, 0.0},
     {0, false, 1.0}, {3, true, 0.0}, {4, true, 0.0}},
    // c * ...
    {{7, true, 0.0}, {10, true, 0.0}, {6, false, 0.0},
     {3, false, 0.0}, {1, false, 1.0}, {5, true, 0.0}},
    // b * ...
    {{8, true, 0.0}, {6, false, 0.0}, {9, false, 0.0},
     {4, false, 0.0}, {5, false, 0.0}, {2, false, 1.0}},
    // a+ * ...
    {{0, false, 0.0}, {3, false, 0.0}, {4, false, 0.0},
     {11, false, 0.0}, {7, false, 0.0}, {8, false, 0.0}},
    // c+ * ...
    {{3, true, 0.0}, {1, false, 0.0}, {5, false, 0.0},
     {7, false, 0.0}, {10, false, 0.0}, {6, true, 0.0}},
    // b+ * ...
    {{4, true, 0.0}, {5, true, 0.0}, {2, false, 0.0},
     {8, false, 0.0}, {6, true, 0.0}, {9, true, 0.0}},
};

// First-moment drift d<o>/dt = A <o> under the linearized Hamiltonian
// delta_a a+a + delta_c c+c + g_ca (c+a + a+c)
//   + G_cb (c+b + b+c) + G_cb (E cb + conj(E) c+b+),   E = e^{+2i omega_b t},
// with amplitude damping at kappa_x / 2.
Matrix6c drift_matrix(const GeneratorCoeffs& c, const SystemParams& p) {
  Matrix6c a = Matrix6c::Zero();
  const double g = c.g_ca;
  const double G = c.G_cb;
  a(0, 0) = -kImag * c.delta_a - 0.5 * p.kappa_a;
  a(0, 1) = -kImag * g;
  a(1, 1) = -kImag * c.delta_c - 0.5 * p.kappa_c;
  a(1, 0) = -kImag * g;
  a(1, 2) = -kImag * G;
  a(2, 2) = Complex(-0.5 * p.kappa_b, 0.0);
  a(2, 1) = -kImag * G;
  a(3, 3) = kImag * c.delta_a - 0.5 * p.kappa_a;
  a(3, 4) = kImag * g;
  a(4, 4) = kImag * c.delta_c - 0.5 * p.kappa_c;
  a(4, 3) = kImag * g;
  a(4, 5) = kImag * G;
  a(5, 5) = Complex(-0.5 * p.kappa_b, 0.0);
  a(5, 4) = kImag * G;
  if (c.counter_rotating) {
    const Complex e = c.phase2wt;
    a(1, 5) = -kImag * G * std::conj(e);
    a(2, 4) = -kImag * G * std::conj(e);
    a(4, 2) = kImag * G * e;
    a(5, 1) = kImag * G * e;
  }
  return a;
}

inline bool is_zero(const Complex& z) {
  return z.real() == 0.0 && z.imag() == 0.0;
}

}  // namespace

MomentState MomentState::thermal(double n_a, double n_c, double n_b, double t) {
  MomentState st;
  st.m[kNa] = n_a;
  st.m[kNc] = n_c;
  st.m[kNb] = n_b;
  st.t = t;
  return st;
}

GeneratorCoeffs schedule_coeffs(double t, const PulseSchedule& s,
                                const SystemParams& p, bool counter_rotating) {
  GeneratorCoeffs c;
  const Detunings d = detunings(t, s);
  c.delta_a = d.delta_a;
  c.delta_c = d.delta_c;
  c.G_cb = 0.5 * omega_p(t, s);
  c.g_ca = s.g_ca();
  c.phase2wt = std::polar(1.0, 2.0 * p.omega_b * t);
  c.counter_rotating = counter_rotating;
  return c;
}

GeneratorSnapshot build_generator(const GeneratorCoeffs& c, const SystemParams& p) {
  const Matrix6c a = drift_matrix(c, p);
  GeneratorSnapshot snap;
  for (int pidx = 0; pidx < 12; ++pidx) {
    const int i = kPairs[pidx][0];
    const int j = kPairs[pidx][1];
    for (int k = 0; k < 6; ++k) {
      const Complex aik = a(i, k);
      if (!is_zero(aik)) {
        const Canon& e = kCanon[k][j];
        (e.conj ? snap.N : snap.M)(pidx, e.index) += aik;
        snap.v[pidx] += aik * e.constant;
      }
      const Complex ajk = a(j, k);
      if (!is_zero(ajk)) {
        const Canon& e = kCanon[i][k];
        (e.conj ? snap.N : snap.M)(pidx, e.index) += ajk;
        snap.v[pidx] += ajk * e.constant;
      }
    }
  }
  snap.v[MomentState::kNa] += p.kappa_a * p.nbar_a;
  snap.v[MomentState::kNc] += p.kappa_c * p.nbar_c;
  snap.v[MomentState::kNb] += p.kappa_b * p.nbar_b;
  return snap;
}

GeneratorSnapshot build_generator(double t, const PulseSchedule& s,
                                  const SystemParams& p,
                                  bool include_counter_rotating) {
  return build_generator(schedule_coeffs(t, s, p, include_counter_rotating), p);
}

Vector12c moment_rhs(double t, const Vector12c& m, const PulseSchedule& s,
                     const SystemParams& p, bool include_counter_rotating) {
  const GeneratorCoeffs c = schedule_coeffs(t, s, p, include_counter_rotating);
  const Matrix6c a = drift_matrix(c, p);
  auto resolve = [&m](int i, int j) -> Complex {
    const Canon& e = kCanon[i][j];
    const Complex val = e.conj ? std::conj(m[e.index]) : m[e.index];
    return e.constant + val;
  };
  Vector12c dm;
  for (int pidx = 0; pidx < 12; ++pidx) {
    const int i = kPairs[pidx][0];
    const int j = kPairs[pidx][1];
    Complex acc(0.0, 0.0);
    for (int k = 0; k < 6; ++k) {
      const Complex aik = a(i, k);
      if (!is_zero(aik)) acc += aik * resolve(k, j);
      const Complex ajk = a(j, k);
      if (!is_zero(ajk)) acc += ajk * resolve(i, k);
    }
    dm[pidx] = acc;
  }
  dm[MomentState::kNa] += p.kappa_a * p.nbar_a;
  dm[MomentState::kNc] += p.kappa_c * p.nbar_c;
  dm[MomentState::kNb] += p.kappa_b * p.nbar_b;
  return dm;
}

Occupancies occupancies(const MomentState& state) {
  const double tol =
      1e-7 * std::max(1.0, state.m.cwiseAbs().maxCoeff());
  const char* names[3] = {"<a+a>", "<c+c>", "<b+b>"};
  double out[3];
  for (int k = 0; k < 3; ++k) {
    const Complex z = state.m[k];
    if (std::abs(z.imag()) > tol) {
      throw UnphysicalState(std::string(names[k]) +
                            " has imaginary part " + std::to_string(z.imag()));
    }
    if (z.real() < -tol) {
      throw UnphysicalState(std::string(names[k]) + " is negative: " +
                            std::to_string(z.real()));
    }
    out[k] = z.real();
  }
  return {out[0], out[1], out[2]};
}

Matrix6d covariance_matrix(const MomentState& state) {
  const Vector12c& m = state.m;
  // n(i, j) = <v_i+ v_j>, s(i, j) = <v_i v_j> for v = (a, c, b).
  Eigen::Matrix3cd n;
  n << Complex(m[0].real(), 0.0), m[3], m[4],  //
      std::conj(m[3]), Complex(m[1].real(), 0.0), m[5],  //
      std::conj(m[4]), std::conj(m[5]), Complex(m[2].real(), 0.0);
  Eigen::Matrix3cd s;
  s << std::conj(m[11]), std::conj(m[7]), std::conj(m[8]),  //
      std::conj(m[7]), std::conj(m[10]), m[6],              //
      std::conj(m[8]), m[6], m[9];

  Matrix6d sigma;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      const Complex ms = s(i, j);
      const Complex nh = n(i, j);
      const double vac = (i == j) ? 0.5 : 0.0;
      sigma(2 * i, 2 * j) = ms.real() + nh.real() + vac;
      sigma(2 * i, 2 * j + 1) = ms.imag() + nh.imag();
      sigma(2 * i + 1, 2 * j) = ms.imag() - nh.imag();
      sigma(2 * i + 1, 2 * j + 1) = -ms.real() + nh.real() + vac;
    }
  }
  return sigma;
}

double physicality_margin(const MomentState& state) {
  const Matrix6d sigma = covariance_matrix(state);
  Eigen::Matrix<Complex, 6, 6> c = sigma.cast<Complex>();
  for (int i = 0; i < 3; ++i) {
    // sigma + (i/2) * Omega with Omega the block-diagonal symplectic form.
    c(2 * i, 2 * i + 1) += Complex(0.0, 0.5);
    c(2 * i + 1, 2 * i) += Complex(0.0, -0.5);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix<Complex, 6, 6>> es(
      c, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

}  // namespace stirap
