#pragma once

#include "su4ent/dynamics.hpp"
#include "su4ent/operators.hpp"

namespace su4ent {

/// Rates in units where hbar = 1.
struct ModelParams {
  int n = 1;
  double delta = 0;    // detuning
  double omega = 1;    // Rabi rate
  double chi = 1;      // twisting rate
  double gamma_c = 0;  // collective cavity decay
  double w = 0;        // collective repump

  void validate() const;
};

/// (Delta/2) G_{zI} + (Omega/2) G_{xx}.
CollectiveOperator h_illustrative(const BasisPtr& basis, const ModelParams& p);

/// -N [c ln c + s ln s] with c = cos^2(Omega t / 2), s = sin^2(Omega t / 2).
/// Only valid on resonance; throws InvalidArgument for Delta != 0.
double analytic_entropy_ie(const ModelParams& p, double t);

/// chi G_{(+)x} G_{(-)x}.
CollectiveOperator h_boat(const BasisPtr& basis, const ModelParams& p);

/// H_BOAT with the jump operator sqrt(Gamma_c) G_{(-)x}.
LindbladGenerator leaky_boat(const BasisPtr& basis, const ModelParams& p);

/// No Hamiltonian; jumps sqrt(Gamma_c) G_{(-)x} and sqrt(W) G_{(+)I}.
LindbladGenerator sms(const BasisPtr& basis, const ModelParams& p);

/// Casimir of the su(2) spanned by {G_{(+)x}, G_{(-)x}, G_{zI}/2}:
/// G_{(+)x} G_{(-)x} + (G_{zI}/2)^2 - G_{zI}/2. Commutes with H_BOAT and G_{(-)x}.
CollectiveOperator boat_casimir(const BasisPtr& basis);

enum class InitialState {
  GroundDown,         // all atoms |0, down>
  SuperpositionDown,  // all atoms (|0> + |1>)/sqrt 2 (x) |down>
};

StateVector initial_state(InitialState kind, const BasisPtr& basis);

/// <psi|A|psi> or Tr(rho A).
Complex expectation(const CollectiveOperator& a, const StateVector& psi);
Complex expectation(const CollectiveOperator& a, const DensityMatrix& rho);

}  // namespace su4ent
