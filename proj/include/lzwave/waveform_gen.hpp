#pragma once

#include <complex>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace lzwave {

/// Zadoff-Chu sequence of the given length and root, x[n] = exp(-i pi r n^2 / L)
/// for even lengths (n(n+1) replaces n^2 for odd lengths). Constant modulus,
/// zero periodic autocorrelation at all nonzero lags when gcd(root, L) = 1.
inline std::vector<std::complex<double>> gen_zadoff_chu(int length, int root) {
    if (length < 1) throw std::invalid_argument("gen_zadoff_chu: length must be >= 1");
    if (std::gcd(root, length) != 1)
        throw std::invalid_argument("gen_zadoff_chu: root and length must be coprime");
    std::vector<std::complex<double>> seq(static_cast<std::size_t>(length));
    const double scale = std::numbers::pi * static_cast<double>(root) / length;
    for (int n = 0; n < length; ++n) {
        const double quad = length % 2 == 0
            ? static_cast<double>(n) * n
            : static_cast<double>(n) * (n + 1);
        const double phase = -scale * quad;
        seq[static_cast<std::size_t>(n)] = {std::cos(phase), std::sin(phase)};
    }
    return seq;
}

/// Unit-modulus upsweep chirp: instantaneous normalized frequency runs
/// linearly from 0 to norm_bandwidth over the sample count.
inline std::vector<std::complex<double>> gen_lfm(int samples, double norm_bandwidth) {
    if (samples < 2) throw std::invalid_argument("gen_lfm: need at least 2 samples");
    std::vector<std::complex<double>> seq(static_cast<std::size_t>(samples));
    const double rate = std::numbers::pi * norm_bandwidth / samples;
    for (int n = 0; n < samples; ++n) {
        const double phase = rate * static_cast<double>(n) * n;
        seq[static_cast<std::size_t>(n)] = {std::cos(phase), std::sin(phase)};
    }
    return seq;
}

}  // namespace lzwave
