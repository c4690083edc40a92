#include "zevca/fft.hpp"

#include <numbers>
#include <stdexcept>

namespace zevca {

namespace {

bool power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

} // namespace

Fft::Fft(int n) : n_(n) {
    if (!power_of_two(n) || n < 2)
        throw std::invalid_argument("fft: size must be a power of two >= 2");

    bit_reversal_.resize(static_cast<std::size_t>(n));
    int log2n = 0;
    while ((1 << log2n) < n) ++log2n;
    for (int i = 0; i < n; ++i) {
        int rev = 0;
        for (int b = 0; b < log2n; ++b)
            if (i & (1 << b)) rev |= 1 << (log2n - 1 - b);
        bit_reversal_[static_cast<std::size_t>(i)] = rev;
    }

    // Forward twiddles for every butterfly length, packed consecutively:
    // length 2 contributes 1 entry, length 4 contributes 2, ... total n-1.
    twiddles_.reserve(static_cast<std::size_t>(n - 1));
    for (int len = 2; len <= n; len <<= 1) {
        const double base = -2.0 * std::numbers::pi / len;
        for (int k = 0; k < len / 2; ++k)
            twiddles_.push_back(std::polar(1.0, base * k));
    }
}

void Fft::transform(std::vector<std::complex<double>>& a, bool invert) const {
    if (static_cast<int>(a.size()) != n_)
        throw std::invalid_argument("fft: buffer size does not match plan");
    for (int i = 0; i < n_; ++i) {
        const int j = bit_reversal_[static_cast<std::size_t>(i)];
        if (i < j) std::swap(a[static_cast<std::size_t>(i)], a[static_cast<std::size_t>(j)]);
    }
    std::size_t stage_offset = 0;
    for (int len = 2; len <= n_; len <<= 1) {
        const int half = len / 2;
        for (int block = 0; block < n_; block += len) {
            for (int k = 0; k < half; ++k) {
                std::complex<double> w = twiddles_[stage_offset + static_cast<std::size_t>(k)];
                if (invert) w = std::conj(w);
                auto& lo = a[static_cast<std::size_t>(block + k)];
                auto& hi = a[static_cast<std::size_t>(block + k + half)];
                const std::complex<double> v = hi * w;
                hi = lo - v;
                lo += v;
            }
        }
        stage_offset += static_cast<std::size_t>(half);
    }
}

void Fft::forward(std::vector<std::complex<double>>& a) const { transform(a, false); }

void Fft::inverse(std::vector<std::complex<double>>& a) const {
    transform(a, true);
    const double scale = 1.0 / n_;
    for (auto& z : a) z *= scale;
}

} // namespace zevca
