#pragma once

// Brute-force reference in the full 4^N single-particle space. Used only to
// check the polynomial modules; every entry point refuses N > kMaxParticles.
//
// Tensor order: particle 1 slowest. Single-particle order {1up, 1down, 0up, 0down},
// i.e. index 2*j + k with j = 0 for |1>, 1 for |0> and k = 0 for up, 1 for down.

#include <span>

#include "su4ent/basis.hpp"
#include "su4ent/dynamics.hpp"
#include "su4ent/entropy.hpp"
#include "su4ent/operators.hpp"

namespace su4ent::oracle {

inline constexpr int kMaxParticles = 6;

void check_cap(int n);

/// Isometry P (4^N x dim) whose columns are the symmetrized occupation states,
/// amplitude sqrt(alpha! beta! gamma! delta! / N!) per arrangement.
CMatrix embedding(const SymBasis& basis);

CVector embed_symmetric(const StateVector& psi);
CMatrix embed_symmetric(const DensityMatrix& rho);

/// `op` acting on particle `site` (0-based) of N.
CMatrix single_site(int n, int site, const Eigen::Matrix4cd& op);

/// sum_j sigma_mu^(j) (x) s_nu^(j).
CMatrix full_generator(int n, Pauli mu, Pauli nu);

/// (x)_j |phi>_j for a single-particle state.
CVector product_state(int n, const Eigen::Vector4cd& single);

/// Reduced 2^N x 2^N matrix of the degree of freedom `keep`.
CMatrix partial_trace(const CVector& psi, int n, Dof keep);
CMatrix partial_trace(const CMatrix& rho, int n, Dof keep);

/// -Tr rho ln rho via dense eigendecomposition: dust above -1e-9 clipped, unit
/// trace restored, eigenvalues < 1e-12 dropped.
double full_entropy(const CMatrix& reduced);

EntropyReport entropies(const CVector& psi, int n);
EntropyReport entropies(const CMatrix& rho, int n);

/// exp(-i H t) psi via Hermitian eigendecomposition.
class ExactPropagator {
 public:
  explicit ExactPropagator(const CMatrix& h);
  CVector evolve(const CVector& psi0, double t) const;

 private:
  CMatrix vectors_;
  RVector energies_;
};

/// Dense Lindblad integration in the full space.
std::vector<CMatrix> evolve_lindblad(const CMatrix& h, std::span<const CMatrix> jumps,
                                     const CMatrix& rho0, std::span<const double> times,
                                     const IntegratorOptions& opts);

}  // namespace su4ent::oracle
