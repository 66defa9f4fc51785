#pragma once

#include <Eigen/Dense>
#include <complex>

namespace fluxlattice {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

/// max_ij |A_ij - conj(A_ji)|
double hermiticity_defect(const ComplexMatrix& a);

struct EigenDecomposition {
    RealVector values;     ///< ascending eigenvalues
    ComplexMatrix vectors; ///< column k is the eigenvector of values[k]
};

/// Dense Hermitian eigendecomposition. Rejects matrices whose hermiticity
/// defect exceeds `herm_tol * max(1, max|entry|)` with the measured
/// asymmetry in the message; solves on the symmetrized (A + A^dag)/2.
EigenDecomposition eigh(const ComplexMatrix& a, double herm_tol = 1e-9);

/// Principal square root of a Hermitian PSD matrix by spectral
/// decomposition. Eigenvalues in (-1e-6, 0) are clamped to zero; anything
/// below -1e-6 (relative to the largest eigenvalue magnitude) is an error,
/// which upstream signals a wrong projector pairing.
ComplexMatrix matrix_sqrt_psd(const ComplexMatrix& a);

/// exp(i * phase * A) for Hermitian A; the result is unitary.
ComplexMatrix unitary_function_of_hermitian(const ComplexMatrix& a, double phase);

/// Kronecker product, row-major index convention: (A x B)[i*p+k, j*q+l] = A_ij B_kl.
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

enum class Pauli { I = 0, X = 1, Y = 2, Z = 3 };

/// The 2x2 Pauli matrix for the given axis (sigma_z = diag(+1, -1)).
const ComplexMatrix& pauli_matrix(Pauli p);

/// Two-qubit Pauli coefficients c[a][b] of H = sum c[a][b] sigma^a x sigma^b,
/// first index = qubit 1, second = qubit 3. Coefficients are in GHz.
struct PauliTensor2Q {
    double c[4][4] = {};

    ComplexMatrix reconstruct() const;
    double xx() const { return c[1][1]; }
    double yy() const { return c[2][2]; }
    double zz() const { return c[3][3]; }
};

/// c[a][b] = Re Tr[(sigma^a x sigma^b) H] / 4 for a 4x4 Hermitian H.
/// Throws if dim != 4 or if the trace projections have imaginary parts
/// beyond 1e-8 * max|H|.
PauliTensor2Q pauli_decompose_2q(const ComplexMatrix& h);

} // namespace fluxlattice
