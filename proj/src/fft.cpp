#include "obench/fft.hpp"

#include <cstring>
#include <mutex>

#include <fftw3.h>

#include "obench/error.hpp"

namespace obench {

namespace {

// FFTW planning is not thread-safe; execution is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

class FftwBuffer {
public:
    explicit FftwBuffer(std::size_t n) : n_(n), p_(fftw_alloc_complex(n)) {
        if (!p_) fail("FFTW allocation failed");
    }
    ~FftwBuffer() { fftw_free(p_); }
    FftwBuffer(const FftwBuffer&) = delete;
    FftwBuffer& operator=(const FftwBuffer&) = delete;
    fftw_complex* get() { return p_; }
    std::size_t size() const { return n_; }

private:
    std::size_t n_;
    fftw_complex* p_;
};

std::vector<std::complex<double>> run(FftwBuffer& in, int rank, const int* dims, int sign) {
    FftwBuffer out(in.size());
    fftw_plan plan;
    {
        std::lock_guard lock(planner_mutex());
        plan = fftw_plan_dft(rank, dims, in.get(), out.get(), sign, FFTW_ESTIMATE);
    }
    if (!plan) fail("FFTW planning failed");
    fftw_execute(plan);
    {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(plan);
    }
    std::vector<std::complex<double>> result(in.size());
    for (std::size_t i = 0; i < result.size(); ++i) result[i] = {out.get()[i][0], out.get()[i][1]};
    return result;
}

}  // namespace

std::vector<std::complex<double>> dft_1d(std::span<const double> x) {
    FftwBuffer in(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        in.get()[i][0] = x[i];
        in.get()[i][1] = 0.0;
    }
    const int dims[1] = {static_cast<int>(x.size())};
    return run(in, 1, dims, FFTW_FORWARD);
}

std::vector<std::complex<double>> dft_2d(std::span<const double> x, std::size_t rows, std::size_t cols) {
    if (x.size() != rows * cols) fail("dft_2d: size mismatch");
    FftwBuffer in(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        in.get()[i][0] = x[i];
        in.get()[i][1] = 0.0;
    }
    const int dims[2] = {static_cast<int>(rows), static_cast<int>(cols)};
    return run(in, 2, dims, FFTW_FORWARD);
}

std::vector<double> idft_2d_real(std::span<const std::complex<double>> X, std::size_t rows, std::size_t cols) {
    if (X.size() != rows * cols) fail("idft_2d_real: size mismatch");
    FftwBuffer in(X.size());
    std::memcpy(in.get(), X.data(), X.size() * sizeof(fftw_complex));
    const int dims[2] = {static_cast<int>(rows), static_cast<int>(cols)};
    auto c = run(in, 2, dims, FFTW_BACKWARD);
    std::vector<double> out(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) out[i] = c[i].real();
    return out;
}

}  // namespace obench
