#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

namespace lzwave {

/// A symbol fell outside the alphabet it was declared with.
struct AlphabetError : std::out_of_range {
    using std::out_of_range::out_of_range;
};

/// A cost sample violated the configured bound. Signals a bug in the cost
/// pipeline, not a recoverable condition.
struct CostBoundError : std::domain_error {
    using std::domain_error::domain_error;
};

/// Malformed configuration: bad transition tables, unknown keys, impossible
/// parameter combinations.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline constexpr double kLogHalf = -0.69314718055994530942;

/// log(exp(a) + exp(b)) without leaving the log domain.
inline double log_add_exp(double a, double b) {
    if (a < b) std::swap(a, b);
    if (std::isinf(b))  // adding zero probability
        return a;
    return a + std::log1p(std::exp(b - a));
}

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

}  // namespace lzwave
