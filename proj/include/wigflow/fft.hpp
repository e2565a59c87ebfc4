#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace wigflow {

/// One-dimensional complex DFT of fixed length, deterministic plans.
///
/// forward:  out_k = sum_j in_j exp(-2 pi i j k / n)   (unnormalized)
/// backward: out_k = sum_j in_j exp(+2 pi i j k / n)   (unnormalized)
class Fft {
public:
    explicit Fft(std::size_t n);
    ~Fft();
    Fft(const Fft&) = delete;
    Fft& operator=(const Fft&) = delete;

    void forward(std::complex<double>* data) const;
    void backward(std::complex<double>* data) const;
    std::size_t size() const { return n_; }

private:
    void run(std::complex<double>* data, bool fwd) const;

    std::size_t n_;
    void* buf_;    // fftw_complex[n]
    void* plan_f_; // fftw_plan
    void* plan_b_;
};

/// Centered transform: out_k = sum_j in_j exp(sign * 2 pi i (k - n/2)(j - n/2) / n).
/// This is the discrete form of the half-range kernel exp(±2ipy/hbar) on grids with
/// dp*dy = pi*hbar/n. Requires n divisible by 4 so the corner phase is unity.
/// centered_dft(-1) ∘ centered_dft(+1) == n * identity.
void centered_dft(std::vector<std::complex<double>>& row, int sign, const Fft& fft);

}  // namespace wigflow
