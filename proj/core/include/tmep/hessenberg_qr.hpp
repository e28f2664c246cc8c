#pragma once

#include <Eigen/Dense>

#include <complex>
#include <vector>

namespace tmep {

/// Diagonal similarity scaling (powers of two) that equalizes row and column
/// norms. Preserves the Hessenberg pattern and the spectrum.
void balance(Eigen::MatrixXd& a);

/// Eigenvalues of a real upper Hessenberg matrix by the Francis double-shift
/// QR iteration. Entries below the subdiagonal are ignored. Throws
/// ConvergenceError when a single eigenvalue needs more than
/// `max_iterations` sweeps.
std::vector<std::complex<double>> hessenberg_eigenvalues(Eigen::MatrixXd h, int max_iterations = 60);

} // namespace tmep
