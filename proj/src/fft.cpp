#include "wigflow/fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <stdexcept>

namespace wigflow {

Fft::Fft(std::size_t n) : n_(n) {
    if (n == 0) throw std::invalid_argument("Fft: length must be positive");
    auto* buf = fftw_alloc_complex(n);
    buf_ = buf;
    // FFTW_ESTIMATE keeps planning deterministic (no runtime measurement).
    plan_f_ = fftw_plan_dft_1d(static_cast<int>(n), buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
    plan_b_ = fftw_plan_dft_1d(static_cast<int>(n), buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
}

Fft::~Fft() {
    fftw_destroy_plan(static_cast<fftw_plan>(plan_f_));
    fftw_destroy_plan(static_cast<fftw_plan>(plan_b_));
    fftw_free(static_cast<fftw_complex*>(buf_));
}

void Fft::run(std::complex<double>* data, bool fwd) const {
    auto* buf = static_cast<fftw_complex*>(buf_);
    std::memcpy(static_cast<void*>(buf), static_cast<const void*>(data),
                n_ * sizeof(fftw_complex));
    fftw_execute(static_cast<fftw_plan>(fwd ? plan_f_ : plan_b_));
    std::memcpy(static_cast<void*>(data), static_cast<const void*>(buf),
                n_ * sizeof(fftw_complex));
}

void Fft::forward(std::complex<double>* data) const { run(data, true); }
void Fft::backward(std::complex<double>* data) const { run(data, false); }

void centered_dft(std::vector<std::complex<double>>& row, int sign, const Fft& fft) {
    const std::size_t n = row.size();
    if (n != fft.size()) throw std::invalid_argument("centered_dft: length mismatch");
    if (n % 4 != 0) throw std::invalid_argument("centered_dft: length must be a multiple of 4");
    // (k-c)(j-c) = kj - c(k+j) + c^2 with c = n/2: the c-terms are (-1)^j, (-1)^k
    // modulations and the corner phase exp(sign*i*pi*n/2) is 1 for n % 4 == 0.
    for (std::size_t j = 1; j < n; j += 2) row[j] = -row[j];
    if (sign > 0) {
        fft.backward(row.data());
    } else {
        fft.forward(row.data());
    }
    for (std::size_t k = 1; k < n; k += 2) row[k] = -row[k];
}

}  // namespace wigflow
