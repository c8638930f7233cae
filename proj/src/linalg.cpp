#include "memq/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace memq {

CMatrix CMatrix::identity(std::size_t n) {
    CMatrix out(n, n);
    for (std::size_t i = 0; i < n; ++i) out(i, i) = 1.0;
    return out;
}

CMatrix operator*(const CMatrix& a, const CMatrix& b) {
    if (a.cols() != b.rows()) throw std::invalid_argument("matrix product: dimension mismatch");
    CMatrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const cplx aik = a(i, k);
            if (aik == cplx(0.0)) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
        }
    }
    return out;
}

CMatrix operator+(const CMatrix& a, const CMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw std::invalid_argument("matrix sum: dimension mismatch");
    CMatrix out(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows() * a.cols(); ++i) out.data()[i] = a.data()[i] + b.data()[i];
    return out;
}

CMatrix operator-(const CMatrix& a, const CMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw std::invalid_argument("matrix difference: dimension mismatch");
    CMatrix out(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows() * a.cols(); ++i) out.data()[i] = a.data()[i] - b.data()[i];
    return out;
}

CMatrix operator*(cplx s, const CMatrix& a) {
    CMatrix out(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows() * a.cols(); ++i) out.data()[i] = s * a.data()[i];
    return out;
}

CMatrix adjoint(const CMatrix& a) {
    CMatrix out(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) out(j, i) = std::conj(a(i, j));
    return out;
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
    CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) {
            const cplx aij = a(i, j);
            if (aij == cplx(0.0)) continue;
            for (std::size_t k = 0; k < b.rows(); ++k)
                for (std::size_t l = 0; l < b.cols(); ++l)
                    out(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
        }
    return out;
}

cplx trace(const CMatrix& a) {
    cplx t = 0.0;
    for (std::size_t i = 0; i < std::min(a.rows(), a.cols()); ++i) t += a(i, i);
    return t;
}

double max_abs_diff(const CMatrix& a, const CMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        return std::numeric_limits<double>::infinity();
    double m = 0.0;
    for (std::size_t i = 0; i < a.rows() * a.cols(); ++i)
        m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
    return m;
}

bool is_unitary(const CMatrix& a, double tol) {
    if (a.rows() != a.cols()) return false;
    return max_abs_diff(adjoint(a) * a, CMatrix::identity(a.rows())) <= tol;
}

bool is_hermitian(const CMatrix& a, double tol) {
    if (a.rows() != a.cols()) return false;
    return max_abs_diff(a, adjoint(a)) <= tol;
}

double diff_up_to_global_phase(const CMatrix& a, const CMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        return std::numeric_limits<double>::infinity();
    std::size_t best = 0;
    double best_mag = -1.0;
    for (std::size_t i = 0; i < b.rows() * b.cols(); ++i) {
        const double m = std::abs(b.data()[i]);
        if (m > best_mag) {
            best_mag = m;
            best = i;
        }
    }
    if (best_mag < 1e-300) return max_abs_diff(a, b);
    const cplx phase = a.data()[best] / b.data()[best];
    const double pm = std::abs(phase);
    if (pm < 1e-300) return max_abs_diff(a, b);
    const cplx unit = phase / pm;
    double m = 0.0;
    for (std::size_t i = 0; i < a.rows() * a.cols(); ++i)
        m = std::max(m, std::abs(a.data()[i] - unit * b.data()[i]));
    return m;
}

namespace {

// Cyclic Jacobi for a real symmetric matrix stored densely.
std::vector<double> symmetric_eigenvalues(std::vector<double> s, std::size_t n) {
    auto at = [&](std::size_t i, std::size_t j) -> double& { return s[i * n + j]; };
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) off += at(i, j) * at(i, j);
        if (off < 1e-26) break;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = at(p, q);
                if (std::abs(apq) < 1e-300) continue;
                const double tau = (at(q, q) - at(p, p)) / (2.0 * apq);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double sn = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = at(k, p), akq = at(k, q);
                    at(k, p) = c * akp - sn * akq;
                    at(k, q) = sn * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = at(p, k), aqk = at(q, k);
                    at(p, k) = c * apk - sn * aqk;
                    at(q, k) = sn * apk + c * aqk;
                }
            }
        }
    }
    std::vector<double> eig(n);
    for (std::size_t i = 0; i < n; ++i) eig[i] = at(i, i);
    std::sort(eig.begin(), eig.end());
    return eig;
}

}  // namespace

std::vector<double> hermitian_eigenvalues(const CMatrix& h) {
    if (h.rows() != h.cols()) throw std::invalid_argument("hermitian_eigenvalues: not square");
    const std::size_t n = h.rows();
    std::vector<double> s(4 * n * n, 0.0);
    const std::size_t dim = 2 * n;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const double re = h(i, j).real(), im = h(i, j).imag();
            s[i * dim + j] = re;
            s[(i + n) * dim + (j + n)] = re;
            s[i * dim + (j + n)] = -im;
            s[(i + n) * dim + j] = im;
        }
    const std::vector<double> both = symmetric_eigenvalues(std::move(s), dim);
    // Each eigenvalue of h appears twice in the embedding.
    std::vector<double> eig(n);
    for (std::size_t i = 0; i < n; ++i) eig[i] = both[2 * i];
    return eig;
}

Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
Vec3 operator*(double s, Vec3 a) { return {s * a.x, s * a.y, s * a.z}; }
double dot(Vec3 a, Vec3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
double norm(Vec3 a) { return std::sqrt(dot(a, a)); }
double max_abs_component(Vec3 a) {
    return std::max({std::abs(a.x), std::abs(a.y), std::abs(a.z)});
}

Mat3 Mat3::identity() {
    Mat3 out;
    out(0, 0) = out(1, 1) = out(2, 2) = 1.0;
    return out;
}

Vec3 operator*(const Mat3& a, Vec3 v) {
    return {a(0, 0) * v.x + a(0, 1) * v.y + a(0, 2) * v.z,
            a(1, 0) * v.x + a(1, 1) * v.y + a(1, 2) * v.z,
            a(2, 0) * v.x + a(2, 1) * v.y + a(2, 2) * v.z};
}

Mat3 operator-(const Mat3& a, const Mat3& b) {
    Mat3 out;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) out(i, j) = a(i, j) - b(i, j);
    return out;
}

namespace {

double norm1(const Mat3& a) {
    double best = 0.0;
    for (int j = 0; j < 3; ++j) {
        double col = 0.0;
        for (int i = 0; i < 3; ++i) col += std::abs(a(i, j));
        best = std::max(best, col);
    }
    return best;
}

}  // namespace

Solve3Result solve3(const Mat3& a, Vec3 b) {
    constexpr double kPivotTol = 1e-12;
    Solve3Result out;

    double aug[3][4] = {{a(0, 0), a(0, 1), a(0, 2), b.x},
                        {a(1, 0), a(1, 1), a(1, 2), b.y},
                        {a(2, 0), a(2, 1), a(2, 2), b.z}};
    // Scale the pivot tolerance by the matrix magnitude.
    double scale = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) scale = std::max(scale, std::abs(aug[i][j]));
    const double tol = kPivotTol * std::max(1.0, scale);

    int pivot_col_of_row[3] = {-1, -1, -1};
    bool col_is_pivot[3] = {false, false, false};
    int row = 0;
    for (int col = 0; col < 3 && row < 3; ++col) {
        int best = row;
        for (int r = row + 1; r < 3; ++r)
            if (std::abs(aug[r][col]) > std::abs(aug[best][col])) best = r;
        if (std::abs(aug[best][col]) <= tol) continue;
        std::swap(aug[row], aug[best]);
        for (int r = 0; r < 3; ++r) {
            if (r == row) continue;
            const double f = aug[r][col] / aug[row][col];
            for (int c = col; c < 4; ++c) aug[r][c] -= f * aug[row][c];
        }
        pivot_col_of_row[row] = col;
        col_is_pivot[col] = true;
        ++row;
    }
    const int rank = row;

    for (int r = rank; r < 3; ++r)
        if (std::abs(aug[r][3]) > 1e-9 * std::max(1.0, std::abs(b.x) + std::abs(b.y) + std::abs(b.z)))
            out.consistent = false;

    double sol[3] = {0.0, 0.0, 0.0};
    for (int r = 0; r < rank; ++r) {
        const int pc = pivot_col_of_row[r];
        double v = aug[r][3];
        for (int c = pc + 1; c < 3; ++c) v -= aug[r][c] * sol[c];
        sol[pc] = v / aug[r][pc];
    }
    out.solution = {sol[0], sol[1], sol[2]};

    if (rank < 3) {
        out.singular = true;
        out.nullity = 3 - rank;
        out.condition = std::numeric_limits<double>::infinity();
        int idx = 0;
        for (int free_col = 0; free_col < 3; ++free_col) {
            if (col_is_pivot[free_col]) continue;
            double nv[3] = {0.0, 0.0, 0.0};
            nv[free_col] = 1.0;
            for (int r = rank - 1; r >= 0; --r) {
                const int pc = pivot_col_of_row[r];
                double v = -aug[r][free_col];
                for (int c = pc + 1; c < 3; ++c)
                    if (c != free_col) v -= aug[r][c] * nv[c];
                nv[pc] = v / aug[r][pc];
            }
            const double nn = std::sqrt(nv[0] * nv[0] + nv[1] * nv[1] + nv[2] * nv[2]);
            out.null_basis[idx++] = {nv[0] / nn, nv[1] / nn, nv[2] / nn};
        }
        return out;
    }

    // Condition estimate from the explicit inverse (adjugate over determinant).
    const double det = a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1)) -
                       a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0)) +
                       a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0));
    Mat3 inv;
    inv(0, 0) = (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1)) / det;
    inv(0, 1) = (a(0, 2) * a(2, 1) - a(0, 1) * a(2, 2)) / det;
    inv(0, 2) = (a(0, 1) * a(1, 2) - a(0, 2) * a(1, 1)) / det;
    inv(1, 0) = (a(1, 2) * a(2, 0) - a(1, 0) * a(2, 2)) / det;
    inv(1, 1) = (a(0, 0) * a(2, 2) - a(0, 2) * a(2, 0)) / det;
    inv(1, 2) = (a(0, 2) * a(1, 0) - a(0, 0) * a(1, 2)) / det;
    inv(2, 0) = (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0)) / det;
    inv(2, 1) = (a(0, 1) * a(2, 0) - a(0, 0) * a(2, 1)) / det;
    inv(2, 2) = (a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0)) / det;
    out.condition = norm1(a) * norm1(inv);
    return out;
}

}  // namespace memq
