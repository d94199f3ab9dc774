// hermitian_eigen.hpp: cyclic Jacobi eigenvalues of small Hermitian matrices

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>

#include "qdeph/errors.hpp"

namespace qdeph {

template <std::size_t N>
using MatrixNc = std::array<std::array<std::complex<double>, N>, N>;

// Eigenvalues in ascending order. Each rotation first rephases column/row q so that a_pq is real
// and positive, then applies the real Jacobi rotation that annihilates it.
template <std::size_t N>
std::array<double, N> hermitian_eigenvalues(MatrixNc<N> a, double tol = 1e-13, int max_sweeps = 64) {
    const auto off_norm = [&a] {
        double s = 0.0;
        for (std::size_t i = 0; i < N; ++i)
            for (std::size_t j = 0; j < N; ++j)
                if (i != j) s += std::norm(a[i][j]);
        return s;
    };
    double total = 0.0;
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j) total += std::norm(a[i][j]);

    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j)
            if (std::abs(a[i][j] - std::conj(a[j][i])) > 1e-10 * (1.0 + std::sqrt(total)))
                throw EigenFailure("matrix is not Hermitian");

    int sweep = 0;
    while (off_norm() > tol * tol * total && total > 0.0) {
        if (++sweep > max_sweeps) throw EigenFailure("Jacobi iteration did not converge");
        for (std::size_t p = 0; p + 1 < N; ++p) {
            for (std::size_t q = p + 1; q < N; ++q) {
                const double mag = std::abs(a[p][q]);
                if (mag == 0.0) continue;
                const std::complex<double> d = std::conj(a[p][q]) / mag;
                for (std::size_t k = 0; k < N; ++k) a[k][q] *= d;
                for (std::size_t k = 0; k < N; ++k) a[q][k] *= std::conj(d);
                a[q][q] = a[q][q].real();
                a[p][q] = mag;
                a[q][p] = mag;

                const double theta = (a[q][q].real() - a[p][p].real()) / (2.0 * mag);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < N; ++k) {
                    const auto kp = a[k][p];
                    const auto kq = a[k][q];
                    a[k][p] = c * kp - s * kq;
                    a[k][q] = s * kp + c * kq;
                }
                for (std::size_t k = 0; k < N; ++k) {
                    const auto pk = a[p][k];
                    const auto qk = a[q][k];
                    a[p][k] = c * pk - s * qk;
                    a[q][k] = s * pk + c * qk;
                }
                a[p][q] = 0.0;
                a[q][p] = 0.0;
            }
        }
    }

    std::array<double, N> values{};
    for (std::size_t i = 0; i < N; ++i) values[i] = a[i][i].real();
    std::sort(values.begin(), values.end());
    return values;
}

}  // namespace qdeph
