#include "fluxlattice/numerics.hpp"
#include "fluxlattice/errors.hpp"

#include <Eigen/Eigenvalues>

#include <sstream>

namespace fluxlattice {

double hermiticity_defect(const ComplexMatrix& a) {
    return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

EigenDecomposition eigh(const ComplexMatrix& a, double herm_tol) {
    if (a.rows() != a.cols() || a.rows() < 1)
        throw InputError("eigh: matrix must be square and non-empty");
    const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
    const double defect = hermiticity_defect(a);
    if (defect > herm_tol * scale) {
        std::ostringstream os;
        os << "eigh: matrix is not Hermitian, max asymmetry " << defect
           << " exceeds tolerance " << herm_tol * scale;
        throw NumericError(os.str());
    }
    ComplexMatrix sym = 0.5 * (a + a.adjoint());
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(sym);
    if (solver.info() != Eigen::Success) {
        std::ostringstream os;
        os << "eigh: eigensolver failed to converge (dim " << a.rows() << ")";
        throw NumericError(os.str());
    }
    return {solver.eigenvalues(), solver.eigenvectors()};
}

ComplexMatrix matrix_sqrt_psd(const ComplexMatrix& a) {
    EigenDecomposition d = eigh(a);
    const int n = static_cast<int>(d.values.size());
    const double top = std::max(1.0, std::abs(d.values[n - 1]));
    RealVector roots(n);
    for (int k = 0; k < n; ++k) {
        double lam = d.values[k];
        if (lam < -1e-6 * top) {
            std::ostringstream os;
            os << "matrix_sqrt_psd: matrix not positive semidefinite, "
               << "eigenvalue " << lam << " below -1e-6";
            throw NumericError(os.str());
        }
        roots[k] = std::sqrt(std::max(lam, 0.0));
    }
    ComplexMatrix s = d.vectors * roots.asDiagonal() * d.vectors.adjoint();
    return 0.5 * (s + s.adjoint());
}

ComplexMatrix unitary_function_of_hermitian(const ComplexMatrix& a, double phase) {
    EigenDecomposition d = eigh(a);
    const int n = static_cast<int>(d.values.size());
    ComplexVector ph(n);
    for (int k = 0; k < n; ++k)
        ph[k] = std::exp(Complex(0.0, phase * d.values[k]));
    return d.vectors * ph.asDiagonal() * d.vectors.adjoint();
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

const ComplexMatrix& pauli_matrix(Pauli p) {
    static const ComplexMatrix mats[4] = {
        (ComplexMatrix(2, 2) << 1, 0, 0, 1).finished(),
        (ComplexMatrix(2, 2) << 0, 1, 1, 0).finished(),
        (ComplexMatrix(2, 2) << 0, Complex(0, -1), Complex(0, 1), 0).finished(),
        (ComplexMatrix(2, 2) << 1, 0, 0, -1).finished(),
    };
    return mats[static_cast<int>(p)];
}

ComplexMatrix PauliTensor2Q::reconstruct() const {
    ComplexMatrix h = ComplexMatrix::Zero(4, 4);
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
            if (c[a][b] != 0.0)
                h += c[a][b] * kron(pauli_matrix(static_cast<Pauli>(a)),
                                    pauli_matrix(static_cast<Pauli>(b)));
    return h;
}

PauliTensor2Q pauli_decompose_2q(const ComplexMatrix& h) {
    if (h.rows() != 4 || h.cols() != 4)
        throw InputError("pauli_decompose_2q: matrix must be 4x4");
    const double scale = std::max(1e-300, h.cwiseAbs().maxCoeff());
    PauliTensor2Q t;
    double max_imag = 0.0;
    for (int a = 0; a < 4; ++a) {
        for (int b = 0; b < 4; ++b) {
            Complex tr = (kron(pauli_matrix(static_cast<Pauli>(a)),
                               pauli_matrix(static_cast<Pauli>(b))) *
                          h)
                             .trace();
            t.c[a][b] = tr.real() / 4.0;
            max_imag = std::max(max_imag, std::abs(tr.imag()) / 4.0);
        }
    }
    if (max_imag > 1e-8 * scale)
        throw NumericError("pauli_decompose_2q: input has non-Hermitian part, "
                           "imaginary projection " +
                           std::to_string(max_imag));
    return t;
}

} // namespace fluxlattice
