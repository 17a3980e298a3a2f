#pragma once

#include <span>
#include <string>
#include <string_view>

#include "su4ent/basis.hpp"

namespace su4ent {

/// Single-particle operator labels: identity, Paulis, and the ladders
/// sigma^(+) = |1><0|, sigma^(-) = |0><1| (s^(+) = |up><down| on K).
enum class Pauli { I, X, Y, Z, Plus, Minus };

std::string_view to_string(Pauli p);
Pauli parse_pauli(std::string_view s);

/// 2x2 matrix of `p` in the ordered basis (|1>, |0>) / (|up>, |down>).
Eigen::Matrix2cd pauli_matrix(Pauli p);

/// sigma_mu (x) s_nu on one particle, in mode order (1up, 1down, 0up, 0down).
Eigen::Matrix4cd single_particle(Pauli mu, Pauli nu);

/// Sparse operator on the symmetric space of one SymBasis.
struct CollectiveOperator {
  BasisPtr basis;
  SparseC matrix;
  std::string label;

  int dim() const { return static_cast<int>(matrix.rows()); }
  CollectiveOperator adjoint() const;
};

/// G_{mu nu} = sum_j sigma_mu^(j) (x) s_nu^(j), built from bosonic hopping
/// amplitudes sqrt(n_b (n_a + 1)). Matrices are cached per (N, mu, nu).
CollectiveOperator collective_generator(const BasisPtr& basis, Pauli mu, Pauli nu);

struct LadderOperators {
  CollectiveOperator j_plus, j_minus, k_plus, k_minus;
};

/// J_pm = G_{(pm) I}, K_pm = G_{I (pm)}.
LadderOperators ladder_ops(const BasisPtr& basis);

/// J_z = G_{zI}/2 or K_z = G_{Iz}/2.
CollectiveOperator z_projection(const BasisPtr& basis, Dof dof);

/// J^2 = sum_mu (G_{mu I}/2)^2, or the K analogue.
CollectiveOperator casimir(const BasisPtr& basis, Dof dof);

/// sum_i c_i * op_i. All operators must share one basis size.
CollectiveOperator linear_combination(std::span<const CollectiveOperator> ops,
                                      std::span<const Complex> coefficients);

/// a * b (matrix product).
CollectiveOperator product(const CollectiveOperator& a, const CollectiveOperator& b);

CollectiveOperator identity(const BasisPtr& basis);

/// Drop cached generator matrices (tests and long-running sweeps).
void clear_operator_cache();

}  // namespace su4ent
