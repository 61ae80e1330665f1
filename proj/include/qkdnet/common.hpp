// common.hpp
// Shared scalar types, bit strings and error hierarchy for the qkdnet library.

#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace qkdnet {

using Amplitude = std::complex<double>;
using BitString = std::vector<std::uint8_t>;  // one bit per element, 0 or 1

inline constexpr double kNormTolerance = 1e-12;
inline constexpr double kZeroProbability = 1e-15;

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ZeroProbability : Error {
    ZeroProbability() : Error("projection probability is zero") {}
};

struct LengthMismatch : Error {
    using Error::Error;
};

struct InvalidAncilla : Error {
    using Error::Error;
};

struct FileLengthMismatch : Error {
    using Error::Error;
};

struct CellConsumed : Error {
    using Error::Error;
};

struct EmptyKey : Error {
    using Error::Error;
};

struct DegenerateSample : Error {
    using Error::Error;
};

struct OutputTooLong : Error {
    using Error::Error;
};

struct PoolEmpty : Error {
    using Error::Error;
};

struct ParseError : Error {
    ParseError(const std::string& what, std::size_t line_no)
        : Error("line " + std::to_string(line_no) + ": " + what), line(line_no) {}
    std::size_t line;
};

struct RangeError : Error {
    using Error::Error;
};

inline std::string to_string(const BitString& bits) {
    std::string s;
    s.reserve(bits.size());
    for (auto b : bits) s.push_back(b ? '1' : '0');
    return s;
}

inline BitString bits_from_string(const std::string& s) {
    BitString out;
    out.reserve(s.size());
    for (char c : s) out.push_back(c == '1' ? 1 : 0);
    return out;
}

}  // namespace qkdnet
