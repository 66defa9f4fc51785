#include "fluxlattice/numerics.hpp"
#include "fluxlattice/errors.hpp"

#include <doctest.h>

#include <random>

using namespace fluxlattice;

namespace {

ComplexMatrix random_hermitian(int dim, std::mt19937& rng) {
    std::normal_distribution<double> dist;
    ComplexMatrix a(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j)
            a(i, j) = Complex(dist(rng), dist(rng));
    return 0.5 * (a + a.adjoint());
}

ComplexMatrix random_psd(int dim, std::mt19937& rng) {
    std::normal_distribution<double> dist;
    ComplexMatrix x(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j)
            x(i, j) = Complex(dist(rng), dist(rng));
    return x * x.adjoint() / static_cast<double>(dim);
}

ComplexMatrix random_unitary(int dim, std::mt19937& rng) {
    std::normal_distribution<double> dist;
    ComplexMatrix x(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j)
            x(i, j) = Complex(dist(rng), dist(rng));
    Eigen::HouseholderQR<ComplexMatrix> qr(x);
    return qr.householderQ();
}

} // namespace

TEST_SUITE_BEGIN("numerics");

TEST_CASE("eigh: pauli-x eigenvalues are -1, +1") {
    EigenDecomposition d = eigh(pauli_matrix(Pauli::X));
    CHECK(d.values[0] == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(d.values[1] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("eigh: diagonal matrix sorts eigenvalues with permutation vectors") {
    ComplexMatrix a = ComplexMatrix::Zero(3, 3);
    a(0, 0) = 3.0;
    a(1, 1) = 1.0;
    a(2, 2) = 2.0;
    EigenDecomposition d = eigh(a);
    CHECK(d.values[0] == doctest::Approx(1.0));
    CHECK(d.values[1] == doctest::Approx(2.0));
    CHECK(d.values[2] == doctest::Approx(3.0));
    CHECK(std::abs(d.vectors(1, 0)) == doctest::Approx(1.0));
    CHECK(std::abs(d.vectors(2, 1)) == doctest::Approx(1.0));
    CHECK(std::abs(d.vectors(0, 2)) == doctest::Approx(1.0));
}

TEST_CASE("eigh: eigenvalue sum equals independently computed trace") {
    std::mt19937 rng(7);
    ComplexMatrix a = random_hermitian(8, rng);
    double tr = 0.0;
    for (int i = 0; i < 8; ++i)
        tr += a(i, i).real();
    EigenDecomposition d = eigh(a);
    const double scale = a.cwiseAbs().maxCoeff();
    CHECK(std::abs(d.values.sum() - tr) <= 1e-10 * scale);
}

TEST_CASE("eigh: residual and orthonormality contracts") {
    std::mt19937 rng(11);
    ComplexMatrix a = random_hermitian(16, rng);
    EigenDecomposition d = eigh(a);
    const double norm = d.values.cwiseAbs().maxCoeff();
    for (int k = 0; k < 16; ++k) {
        const double res = (a * d.vectors.col(k) - d.values[k] * d.vectors.col(k))
                               .cwiseAbs()
                               .maxCoeff();
        CHECK(res <= 1e-10 * norm);
    }
    const double ortho =
        (d.vectors.adjoint() * d.vectors - ComplexMatrix::Identity(16, 16))
            .cwiseAbs()
            .maxCoeff();
    CHECK(ortho <= 1e-10);
}

TEST_CASE("eigh: eigenvalues invariant under unitary conjugation") {
    std::mt19937 rng(23);
    ComplexMatrix a = random_hermitian(12, rng);
    ComplexMatrix u = random_unitary(12, rng);
    EigenDecomposition d1 = eigh(a);
    EigenDecomposition d2 = eigh(u * a * u.adjoint(), 1e-7);
    const double scale = std::max(1.0, d1.values.cwiseAbs().maxCoeff());
    CHECK((d1.values - d2.values).cwiseAbs().maxCoeff() <= 1e-10 * scale);
}

TEST_CASE("eigh: non-Hermitian input rejected with asymmetry report") {
    ComplexMatrix a(2, 2);
    a << 0.0, 1.0, 0.0, 0.0;
    CHECK_THROWS_WITH_AS(eigh(a), doctest::Contains("asymmetry"), NumericError);
}

TEST_CASE("matrix_sqrt_psd: identity and diagonal cases") {
    ComplexMatrix i4 = ComplexMatrix::Identity(4, 4);
    CHECK((matrix_sqrt_psd(i4) - i4).cwiseAbs().maxCoeff() <= 1e-12);

    ComplexMatrix a = ComplexMatrix::Zero(2, 2);
    a(0, 0) = 4.0;
    a(1, 1) = 9.0;
    ComplexMatrix s = matrix_sqrt_psd(a);
    CHECK(s(0, 0).real() == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(s(1, 1).real() == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("matrix_sqrt_psd: recovers B from B*B") {
    std::mt19937 rng(5);
    ComplexMatrix b = random_psd(10, rng);
    ComplexMatrix s = matrix_sqrt_psd(b * b);
    CHECK((s - b).cwiseAbs().maxCoeff() <= 1e-9 * b.cwiseAbs().maxCoeff());
}

TEST_CASE("matrix_sqrt_psd: S*S = A over random PSD matrices up to dim 64") {
    std::mt19937 rng(31);
    std::uniform_int_distribution<int> dim_dist(2, 64);
    for (int trial = 0; trial < 100; ++trial) {
        const int dim = dim_dist(rng);
        ComplexMatrix a = random_psd(dim, rng);
        ComplexMatrix s = matrix_sqrt_psd(a);
        const double scale = std::max(1e-300, a.cwiseAbs().maxCoeff());
        CHECK((s * s - a).cwiseAbs().maxCoeff() <= 1e-9 * scale);
    }
}

TEST_CASE("matrix_sqrt_psd: clearly negative eigenvalue is an error") {
    ComplexMatrix a = ComplexMatrix::Zero(2, 2);
    a(0, 0) = 1.0;
    a(1, 1) = -1e-3;
    CHECK_THROWS_WITH_AS(matrix_sqrt_psd(a), doctest::Contains("positive semidefinite"),
                         NumericError);
}

TEST_CASE("unitary_function_of_hermitian: phase 0 is the identity") {
    std::mt19937 rng(3);
    ComplexMatrix a = random_hermitian(6, rng);
    ComplexMatrix u = unitary_function_of_hermitian(a, 0.0);
    CHECK((u - ComplexMatrix::Identity(6, 6)).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("unitary_function_of_hermitian: exp(i pi sigma_z) = -identity") {
    ComplexMatrix u = unitary_function_of_hermitian(pauli_matrix(Pauli::Z), 3.14159265358979323846);
    CHECK(std::abs(u(0, 0) - Complex(-1.0, 0.0)) <= 1e-12);
    CHECK(std::abs(u(1, 1) - Complex(-1.0, 0.0)) <= 1e-12);
    CHECK(std::abs(u(0, 1)) <= 1e-12);
}

TEST_CASE("unitary_function_of_hermitian: result is unitary") {
    std::mt19937 rng(17);
    ComplexMatrix a = random_hermitian(20, rng);
    ComplexMatrix u = unitary_function_of_hermitian(a, 0.7);
    const double defect =
        (u.adjoint() * u - ComplexMatrix::Identity(20, 20)).cwiseAbs().maxCoeff();
    CHECK(defect <= 1e-10);
}

TEST_CASE("kron: identity blocks and index arithmetic") {
    ComplexMatrix i2 = ComplexMatrix::Identity(2, 2);
    CHECK((kron(i2, i2) - ComplexMatrix::Identity(4, 4)).cwiseAbs().maxCoeff() == 0.0);

    // sigma_x on the slow qubit maps basis index 0 to index 2
    ComplexMatrix sx_i = kron(pauli_matrix(Pauli::X), i2);
    CHECK(sx_i(2, 0).real() == doctest::Approx(1.0));
    CHECK(sx_i(0, 0).real() == doctest::Approx(0.0));
}

TEST_CASE("kron: mixed-product identity on random inputs") {
    std::mt19937 rng(13);
    std::normal_distribution<double> dist;
    ComplexMatrix a(2, 2), b(3, 3);
    ComplexVector u(2), v(3);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            a(i, j) = Complex(dist(rng), dist(rng));
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            b(i, j) = Complex(dist(rng), dist(rng));
    for (int i = 0; i < 2; ++i)
        u[i] = Complex(dist(rng), dist(rng));
    for (int i = 0; i < 3; ++i)
        v[i] = Complex(dist(rng), dist(rng));

    ComplexVector uv(6);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 3; ++j)
            uv[i * 3 + j] = u[i] * v[j];
    ComplexVector lhs = kron(a, b) * uv;
    ComplexVector au = a * u, bv = b * v;
    ComplexVector rhs(6);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 3; ++j)
            rhs[i * 3 + j] = au[i] * bv[j];
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("pauli_decompose_2q: identity and sigma_z x I") {
    ComplexMatrix h = 2.5 * ComplexMatrix::Identity(4, 4);
    PauliTensor2Q t = pauli_decompose_2q(h);
    CHECK(t.c[0][0] == doctest::Approx(2.5).epsilon(1e-14));
    double off = 0.0;
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
            if (a || b)
                off = std::max(off, std::abs(t.c[a][b]));
    CHECK(off <= 1e-14);

    const double omega = 3.7;
    ComplexMatrix hz = 0.5 * omega * kron(pauli_matrix(Pauli::Z), ComplexMatrix::Identity(2, 2));
    CHECK(pauli_decompose_2q(hz).c[3][0] == doctest::Approx(0.5 * omega).epsilon(1e-14));
}

TEST_CASE("pauli_decompose_2q: round trip against known coefficients") {
    std::mt19937 rng(41);
    std::normal_distribution<double> dist;
    PauliTensor2Q in;
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
            in.c[a][b] = dist(rng);
    PauliTensor2Q out = pauli_decompose_2q(in.reconstruct());
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
            CHECK(std::abs(out.c[a][b] - in.c[a][b]) <= 1e-12);
}

TEST_CASE("pauli_decompose_2q: reconstruction inverts decomposition") {
    std::mt19937 rng(43);
    ComplexMatrix h = random_hermitian(4, rng);
    ComplexMatrix back = pauli_decompose_2q(h).reconstruct();
    CHECK((back - h).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("pauli_decompose_2q: wrong dimension rejected") {
    CHECK_THROWS_AS(pauli_decompose_2q(ComplexMatrix::Identity(3, 3)), InputError);
}

TEST_SUITE_END();
