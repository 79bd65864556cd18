#include "dilation/random.hpp"

#include <cmath>
#include <numbers>

namespace dilation {

double Rng::uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(eng_);
}

int Rng::uniform_int(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(eng_); }

double Rng::gaussian() { return std::normal_distribution<double>(0.0, 1.0)(eng_); }

cplx Rng::phase() { return std::polar(1.0, uniform(0.0, 2.0 * std::numbers::pi)); }

CMatrix Rng::gaussian_matrix(Index rows, Index cols) {
    CMatrix m(rows, cols);
    for (Index j = 0; j < cols; ++j)
        for (Index i = 0; i < rows; ++i) {
            double re = gaussian();
            double im = gaussian();
            m(i, j) = cplx(re, im);
        }
    return m;
}

CMatrix Rng::unitary(Index n) {
    if (n == 0) return CMatrix(0, 0);
    CMatrix g = gaussian_matrix(n, n);
    Eigen::HouseholderQR<CMatrix> qr(g);
    CMatrix q = qr.householderQ() * identity(n);
    CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    // fix column phases so the distribution is Haar
    for (Index j = 0; j < n; ++j) {
        cplx d = r(j, j);
        double a = std::abs(d);
        if (a > 0) q.col(j) *= d / a;
    }
    return q;
}

CMatrix Rng::projection(Index n, Index rank) {
    CMatrix q = unitary(n).leftCols(rank);
    return q * q.adjoint();
}

CMatrix Rng::contraction(Index n, double norm) {
    CMatrix g = gaussian_matrix(n, n);
    double s = op_norm(g);
    if (s == 0.0) return g;
    return (norm / s) * g;
}

CMatrix Rng::hermitian(Index n) {
    CMatrix g = gaussian_matrix(n, n);
    return hermitian_part(g);
}

}  // namespace dilation
