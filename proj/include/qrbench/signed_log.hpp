#pragma once

// Overflow-proof product carriers: a sign plus log|x| for reals, and an exact
// phase (in units of pi/(2q)) plus log|z| for complex numbers on a fixed grid.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>

#include "qrbench/arith.hpp"

namespace qrbench {

struct SignedLog {
    int sign = 1;
    double log_mag = 0.0;

    static SignedLog zero() { return {0, -std::numeric_limits<double>::infinity()}; }
    static SignedLog from_value(double x) {
        if (x == 0.0) return zero();
        return {x > 0 ? 1 : -1, std::log(std::fabs(x))};
    }

    bool is_zero() const { return sign == 0; }

    SignedLog& operator*=(const SignedLog& o) {
        if (sign == 0 || o.sign == 0) return *this = zero();
        sign *= o.sign;
        log_mag += o.log_mag;
        return *this;
    }
    friend SignedLog operator*(SignedLog a, const SignedLog& b) { return a *= b; }

    SignedLog inverse() const {
        if (sign == 0) throw std::domain_error("SignedLog: inverse of zero");
        return {sign, -log_mag};
    }

    SignedLog pow(std::int64_t k) const {
        if (k == 0) return {};
        if (sign == 0) {
            if (k < 0) throw std::domain_error("SignedLog: negative power of zero");
            return zero();
        }
        return {(k % 2 == 0) ? 1 : sign, log_mag * static_cast<double>(k)};
    }

    double value() const { return sign == 0 ? 0.0 : sign * std::exp(log_mag); }

    std::string to_string() const {
        std::ostringstream os;
        os.precision(15);
        if (sign == 0) return "0";
        os << (sign > 0 ? "+" : "-") << "exp(" << log_mag << ")";
        return os.str();
    }
};

/// |a.log - b.log| <= tol * sqrt(factors) * max(1, |a.log|, |b.log|).
inline bool log_close(double la, double lb, double tol, double factors) {
    const double scale = std::max({1.0, std::fabs(la), std::fabs(lb)});
    return std::fabs(la - lb) <= tol * std::sqrt(std::max(1.0, factors)) * scale;
}

/// Sign equality plus log_close on magnitudes.
inline bool slog_match(const SignedLog& a, const SignedLog& b, double tol, double factors) {
    if (a.sign != b.sign) return false;
    if (a.sign == 0) return true;
    return log_close(a.log_mag, b.log_mag, tol, factors);
}

/// r * exp(i pi phase / (2q)) with phase kept exactly modulo 4q.
struct PolarLog {
    std::uint64_t q = 1;
    std::int64_t phase = 0;
    double log_mag = 0.0;
    bool zero = false;

    explicit PolarLog(std::uint64_t modulus = 1) : q(modulus) {}

    void add_phase(std::int64_t units) { phase = static_cast<std::int64_t>(arith::mod(phase + units, 4 * q)); }

    PolarLog& operator*=(const PolarLog& o) {
        if (o.q != q) throw std::invalid_argument("PolarLog: mismatched modulus");
        zero = zero || o.zero;
        add_phase(o.phase);
        log_mag += o.log_mag;
        return *this;
    }

    /// +1 or -1 when the value is real, 0 when it is zero, and nullopt-like 2 otherwise.
    int real_sign() const {
        if (zero) return 0;
        if (phase == 0) return 1;
        if (phase == static_cast<std::int64_t>(2 * q)) return -1;
        return 2;
    }

    std::string to_string() const {
        std::ostringstream os;
        os.precision(15);
        if (zero) return "0";
        os << "exp(" << log_mag << ")*e^(i*pi*" << phase << "/" << 2 * q << ")";
        return os.str();
    }
};

}  // namespace qrbench
