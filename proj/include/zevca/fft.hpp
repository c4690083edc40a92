#pragma once

// Minimal in-place radix-2 FFT for the split-operator stepper. Grid sizes are
// powers of two by construction, so nothing more general is needed.

#include <complex>
#include <vector>

namespace zevca {

class Fft {
  public:
    explicit Fft(int n); // n must be a power of two, n >= 2

    int size() const { return n_; }

    // Unnormalized forward transform, X_k = sum_j x_j exp(-2 pi i j k / n).
    void forward(std::vector<std::complex<double>>& a) const;
    // Inverse transform including the 1/n factor.
    void inverse(std::vector<std::complex<double>>& a) const;

  private:
    void transform(std::vector<std::complex<double>>& a, bool invert) const;

    int n_;
    std::vector<int> bit_reversal_;
    std::vector<std::complex<double>> twiddles_; // stage tables, n-1 entries total
};

} // namespace zevca
