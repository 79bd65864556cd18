#pragma once

// Test-side helpers and independent oracles. Nothing here calls into the
// library routines it is used to check.

#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "dilation/dilation.hpp"

namespace testing_support {

using dilation::cplx;
using dilation::CMatrix;
using dilation::Index;

inline CMatrix eye(Index n) { return CMatrix::Identity(n, n); }

inline CMatrix scalar(cplx v) {
    CMatrix m(1, 1);
    m(0, 0) = v;
    return m;
}

inline CMatrix diag(std::initializer_list<cplx> values) {
    CMatrix m = CMatrix::Zero(static_cast<Index>(values.size()), static_cast<Index>(values.size()));
    Index k = 0;
    for (cplx v : values) m(k, k) = v, ++k;
    return m;
}

inline double fro(const CMatrix& m) { return m.size() == 0 ? 0.0 : m.norm(); }

inline double norm2(const CMatrix& m) {
    if (m.size() == 0) return 0.0;
    Eigen::JacobiSVD<CMatrix> svd(m);
    return svd.singularValues()(0);
}

inline CMatrix power(const CMatrix& t, int k) {
    CMatrix out = eye(t.rows());
    for (int i = 0; i < k; ++i) out = out * t;
    return out;
}

inline CMatrix multi_power(const std::vector<CMatrix>& factors, const std::vector<int>& exps) {
    CMatrix out = eye(factors.front().rows());
    for (size_t i = 0; i < factors.size(); ++i) out = out * power(factors[i], exps[i]);
    return out;
}

// Unique c with (1 - |ab|^2) c = (1 - |b|^2) a.
inline cplx scalar_fundamental(cplx a, cplx b) {
    return (1.0 - std::norm(b)) * a / (1.0 - std::norm(a * b));
}

// Square root by eigendecomposition of the Hermitian part.
inline CMatrix sqrt_psd(const CMatrix& a) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (a + a.adjoint()));
    Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return es.eigenvectors() * ev.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
}

inline CMatrix defect(const CMatrix& t) { return sqrt_psd(eye(t.cols()) - t.adjoint() * t); }

// Matrix polynomial in z, coefficient k multiplies z^k.
struct Poly {
    std::vector<CMatrix> c;

    Poly operator*(const Poly& o) const {
        const Index e = c.front().rows();
        Poly r;
        r.c.assign(c.size() + o.c.size() - 1, CMatrix::Zero(e, e));
        for (size_t i = 0; i < c.size(); ++i)
            for (size_t j = 0; j < o.c.size(); ++j) r.c[i + j] += c[i] * o.c[j];
        return r;
    }
    double distance(const Poly& o) const {
        const size_t n = std::max(c.size(), o.c.size());
        const Index e = c.front().rows();
        double d = 0.0;
        for (size_t k = 0; k < n; ++k) {
            const CMatrix a = k < c.size() ? c[k] : CMatrix::Zero(e, e);
            const CMatrix b = k < o.c.size() ? o.c[k] : CMatrix::Zero(e, e);
            d = std::max(d, norm2(a - b));
        }
        return d;
    }
};

// Symbol U P^perp + z U P.
inline Poly bdf_symbol(const CMatrix& u, const CMatrix& p) {
    const CMatrix q = eye(u.rows()) - p;
    return Poly{{u * q, u * p}};
}

// Commuting isometric multipliers with product z, decided on symbol coefficients:
// A0 + zA1 is isometric on the circle iff A0*A0 + A1*A1 = I and A0*A1 = 0.
inline bool bdf_algebra_oracle(const std::vector<std::pair<CMatrix, CMatrix>>& pairs, double thr) {
    const Index e = pairs.front().first.rows();
    std::vector<Poly> v;
    for (const auto& [u, p] : pairs) v.push_back(bdf_symbol(u, p));
    Poly prod{{eye(e)}};
    for (const auto& s : v) {
        if (norm2(s.c[0].adjoint() * s.c[0] + s.c[1].adjoint() * s.c[1] - eye(e)) > thr) return false;
        if (norm2(s.c[0].adjoint() * s.c[1]) > thr) return false;
        prod = prod * s;
    }
    for (size_t i = 0; i < v.size(); ++i)
        for (size_t j = i + 1; j < v.size(); ++j)
            if ((v[i] * v[j]).distance(v[j] * v[i]) > thr) return false;
    Poly z{{CMatrix::Zero(e, e), eye(e)}};
    return prod.distance(z) <= thr;
}

// Theta_T(lambda) as the series -T + sum_k lambda^{k+1} D_{T*} T*^k D_T on the
// ambient space; converges geometrically for strict contractions.
inline CMatrix theta_series(const CMatrix& t, cplx lambda, int terms) {
    const CMatrix dt = defect(t);
    const CMatrix dts = defect(t.adjoint());
    CMatrix out = -t;
    CMatrix pw = eye(t.rows());
    cplx lk = lambda;
    for (int k = 0; k < terms; ++k) {
        out += lk * dts * pw * dt;
        pw = pw * t.adjoint();
        lk *= lambda;
    }
    return out;
}

inline Eigen::VectorXd singular_values(const CMatrix& m) {
    Eigen::JacobiSVD<CMatrix> svd(m);
    return svd.singularValues();
}

// Random commuting contractions: simultaneously triangularisable through a
// shared unitary and diagonal entries, or polynomials of one matrix.
inline std::vector<CMatrix> random_commuting(dilation::Rng& rng, Index d, int n) {
    const CMatrix z = rng.unitary(d);
    std::vector<CMatrix> out;
    for (int i = 0; i < n; ++i) {
        CMatrix t = CMatrix::Zero(d, d);
        for (Index k = 0; k < d; ++k) t(k, k) = std::sqrt(rng.uniform(0.0, 0.95)) * rng.phase();
        out.push_back(z * t * z.adjoint());
    }
    return out;
}

}  // namespace testing_support
