#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <string>
#include <vector>

namespace memq {

using cplx = std::complex<double>;

// Dense row-major complex matrix. Everything in this library is small
// (at most 1024 x 1024), so no sparse or blocked machinery.
class CMatrix {
public:
    CMatrix() = default;
    CMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), a_(rows * cols) {}

    static CMatrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    cplx& operator()(std::size_t r, std::size_t c) { return a_[r * cols_ + c]; }
    const cplx& operator()(std::size_t r, std::size_t c) const { return a_[r * cols_ + c]; }

    cplx* data() { return a_.data(); }
    const cplx* data() const { return a_.data(); }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<cplx> a_;
};

CMatrix operator*(const CMatrix& a, const CMatrix& b);
CMatrix operator+(const CMatrix& a, const CMatrix& b);
CMatrix operator-(const CMatrix& a, const CMatrix& b);
CMatrix operator*(cplx s, const CMatrix& a);

CMatrix adjoint(const CMatrix& a);
CMatrix kron(const CMatrix& a, const CMatrix& b);
cplx trace(const CMatrix& a);

double max_abs_diff(const CMatrix& a, const CMatrix& b);
bool is_unitary(const CMatrix& a, double tol);
bool is_hermitian(const CMatrix& a, double tol);

// Largest |a - e^{i phi} b| over entries, with phi chosen so the
// largest-magnitude entry of b lines up in phase with the matching
// entry of a. Used to compare circuits that agree up to global phase.
double diff_up_to_global_phase(const CMatrix& a, const CMatrix& b);

// Eigenvalues of a Hermitian matrix, ascending. Cyclic Jacobi on the
// real symmetric embedding [[Re, -Im], [Im, Re]].
std::vector<double> hermitian_eigenvalues(const CMatrix& h);

// Minimal real 3-vector / 3x3 matrix support for Bloch-space maps.
struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;
};

Vec3 operator+(Vec3 a, Vec3 b);
Vec3 operator-(Vec3 a, Vec3 b);
Vec3 operator*(double s, Vec3 a);
double dot(Vec3 a, Vec3 b);
double norm(Vec3 a);
double max_abs_component(Vec3 a);

struct Mat3 {
    std::array<std::array<double, 3>, 3> m{};

    static Mat3 identity();
    double& operator()(int r, int c) { return m[r][c]; }
    double operator()(int r, int c) const { return m[r][c]; }
};

Vec3 operator*(const Mat3& a, Vec3 v);
Mat3 operator-(const Mat3& a, const Mat3& b);

// Direct 3x3 Gaussian elimination with partial pivoting. When the system
// is singular the solver reports the affine solution family: a particular
// solution (free variables set to zero) plus a null-space basis. The
// condition number is the 1-norm estimate ||A||_1 ||A^-1||_1.
struct Solve3Result {
    bool singular = false;
    bool consistent = true;
    Vec3 solution;
    int nullity = 0;
    std::array<Vec3, 3> null_basis{};
    double condition = 0.0;
};

Solve3Result solve3(const Mat3& a, Vec3 b);

}  // namespace memq
