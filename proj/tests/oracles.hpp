#pragma once

// Slow, obviously-correct reference implementations used to check the library.

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

namespace oracle {

struct Window {
    std::array<std::size_t, 3> offset;
    std::vector<double> values;
};

/// Every window position with offset % stride == 0 that fits, lexicographic order.
inline std::vector<Window> enumerate_windows(const std::vector<double>& data, std::array<std::size_t, 3> size,
                                             std::array<std::size_t, 3> patch, std::array<std::size_t, 3> stride) {
    std::vector<Window> out;
    for (std::size_t a = 0; a + patch[0] <= size[0]; ++a) {
        if (a % stride[0]) continue;
        for (std::size_t b = 0; b + patch[1] <= size[1]; ++b) {
            if (b % stride[1]) continue;
            for (std::size_t c = 0; c + patch[2] <= size[2]; ++c) {
                if (c % stride[2]) continue;
                Window w{{a, b, c}, {}};
                for (std::size_t i = 0; i < patch[0]; ++i)
                    for (std::size_t j = 0; j < patch[1]; ++j)
                        for (std::size_t k = 0; k < patch[2]; ++k)
                            w.values.push_back(data[((a + i) * size[1] + b + j) * size[2] + c + k]);
                out.push_back(std::move(w));
            }
        }
    }
    return out;
}

/// Streaming form of enumerate_windows: calls visit(offset, values) per window.
template <class Visit>
void visit_windows(const std::vector<double>& data, std::array<std::size_t, 3> size, std::array<std::size_t, 3> patch,
                   std::array<std::size_t, 3> stride, Visit&& visit) {
    std::vector<double> values;
    for (std::size_t a = 0; a + patch[0] <= size[0]; a += stride[0])
        for (std::size_t b = 0; b + patch[1] <= size[1]; b += stride[1])
            for (std::size_t c = 0; c + patch[2] <= size[2]; c += stride[2]) {
                values.clear();
                for (std::size_t i = 0; i < patch[0]; ++i)
                    for (std::size_t j = 0; j < patch[1]; ++j)
                        for (std::size_t k = 0; k < patch[2]; ++k)
                            values.push_back(data[((a + i) * size[1] + b + j) * size[2] + c + k]);
                visit(std::array<std::size_t, 3>{a, b, c}, values);
            }
}

/// Direct O(N^2) DFT.
inline std::vector<std::complex<double>> naive_dft(const std::vector<double>& x) {
    const std::size_t n = x.size();
    std::vector<std::complex<double>> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        std::complex<double> acc = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const double ang = -2.0 * std::numbers::pi * double((k * j) % n) / double(n);
            acc += x[j] * std::complex<double>(std::cos(ang), std::sin(ang));
        }
        out[k] = acc;
    }
    return out;
}

/// Direct 2-D DFT of a row-major rows x cols array.
inline std::vector<std::complex<double>> naive_dft_2d(const std::vector<double>& x, std::size_t rows,
                                                      std::size_t cols) {
    std::vector<std::complex<double>> out(rows * cols);
    for (std::size_t kr = 0; kr < rows; ++kr)
        for (std::size_t kc = 0; kc < cols; ++kc) {
            std::complex<double> acc = 0.0;
            for (std::size_t r = 0; r < rows; ++r)
                for (std::size_t c = 0; c < cols; ++c) {
                    const double ang = -2.0 * std::numbers::pi *
                                       (double((kr * r) % rows) / double(rows) + double((kc * c) % cols) / double(cols));
                    acc += x[r * cols + c] * std::complex<double>(std::cos(ang), std::sin(ang));
                }
            out[kr * cols + kc] = acc;
        }
    return out;
}

/// Solves the discrete Laplace equation on the NaN cells of a ny x nx slice
/// (5-point stencil, neighbours outside the slice ignored) with a sparse LU.
inline std::vector<double> laplace_fill(const std::vector<double>& slice, std::size_t ny, std::size_t nx) {
    std::vector<long> unknown(slice.size(), -1);
    long n = 0;
    for (std::size_t i = 0; i < slice.size(); ++i)
        if (std::isnan(slice[i])) unknown[i] = n++;
    std::vector<Eigen::Triplet<double>> trip;
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
    for (std::size_t i = 0; i < slice.size(); ++i) {
        if (unknown[i] < 0) continue;
        const std::size_t y = i / nx, x = i % nx;
        std::vector<std::size_t> nb;
        if (y > 0) nb.push_back(i - nx);
        if (y + 1 < ny) nb.push_back(i + nx);
        if (x > 0) nb.push_back(i - 1);
        if (x + 1 < nx) nb.push_back(i + 1);
        trip.emplace_back(unknown[i], unknown[i], double(nb.size()));
        for (auto j : nb) {
            if (unknown[j] >= 0) trip.emplace_back(unknown[i], unknown[j], -1.0);
            else rhs[unknown[i]] += slice[j];
        }
    }
    Eigen::SparseMatrix<double> A(n, n);
    A.setFromTriplets(trip.begin(), trip.end());
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.compute(A);
    const Eigen::VectorXd sol = lu.solve(rhs);
    std::vector<double> out = slice;
    for (std::size_t i = 0; i < slice.size(); ++i)
        if (unknown[i] >= 0) out[i] = sol[unknown[i]];
    return out;
}

}  // namespace oracle
