#pragma once

#include <span>
#include <vector>

namespace effaction {

/// Number of eigenvalues of the symmetric tridiagonal matrix
/// (diag, offdiag) strictly below `lambda`, by a safeguarded Sturm/LDL sweep.
int sturm_count_below(std::span<const double> diag,
                      std::span<const double> offdiag, double lambda);

/// k-th smallest eigenvalue (k is 0-based) by bisection, to absolute
/// accuracy `tol` relative to the Gershgorin scale.
double tridiagonal_eigenvalue(std::span<const double> diag,
                              std::span<const double> offdiag, int k,
                              double tol = 0.0);

/// The `count` smallest eigenvalues in ascending order.
std::vector<double> tridiagonal_eigenvalues(std::span<const double> diag,
                                            std::span<const double> offdiag,
                                            int count, double tol = 0.0);

/// Solves the symmetric positive definite tridiagonal system
/// (diag, offdiag) z = rhs in place by LDL^T.  Throws on a non-positive
/// pivot.
void spd_tridiagonal_solve(std::span<const double> diag,
                           std::span<const double> offdiag,
                           std::span<double> rhs);

/// log(det) of a symmetric positive definite *cyclic* tridiagonal matrix
/// given its diagonal, its sub/super diagonal (size n-1) and the corner
/// element coupling indices 0 and n-1.  Throws if a pivot goes
/// non-positive (matrix not SPD).
double cyclic_spd_tridiagonal_logdet(std::span<const double> diag,
                                     std::span<const double> offdiag,
                                     double corner);

}  // namespace effaction
