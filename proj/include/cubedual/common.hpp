#pragma once
// Shared scalar types, the error hierarchy, and small text helpers.

#include <charconv>
#include <cstdint>
#include <istream>
#include <iterator>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>

namespace cubedual {

using Real = double;
using Index = std::int64_t;

/// Sign flip that maps zero to plain +0.0, so emitted text never reads "-0".
inline Real negated_value(Real v) { return v == 0.0 ? 0.0 : -v; }

class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what_arg) : std::runtime_error(what_arg) {}
};

/// Malformed input; carries the byte offset of the offending token.
class ParseError : public Error {
public:
    ParseError(std::size_t byte_offset, const std::string& what_arg)
        : Error(what_arg + " (byte " + std::to_string(byte_offset) + ")"),
          byte_offset_(byte_offset) {}

    std::size_t byte_offset() const { return byte_offset_; }

private:
    std::size_t byte_offset_;
};

class PreconditionError : public Error {
public:
    using Error::Error;
};

/// The operation needs cube-keyed cells, i.e. complexes straight out of the
/// box builders.
class UnsupportedComplexError : public Error {
public:
    using Error::Error;
};

/// Dualization found a codimension-1 cell without exactly two top cofaces.
class NotClosedManifoldError : public Error {
public:
    using Error::Error;
};

/// A diagram transform received data inconsistent with the identities it
/// relies on; emitting a result would be silently wrong.
class IntegrityError : public Error {
public:
    using Error::Error;
};

/// A brute-force routine refused an input above its size guard.
class GuardError : public Error {
public:
    using Error::Error;
};

/// Shortest round-trip decimal representation of a double.
inline std::string format_real(Real v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

/// Parses a full token as a double; returns false on leftover characters.
inline bool parse_real(std::string_view token, Real& out) {
    const char* first = token.data();
    const char* last = first + token.size();
    auto res = std::from_chars(first, last, out);
    return res.ec == std::errc() && res.ptr == last;
}

inline bool parse_integer(std::string_view token, long long& out) {
    const char* first = token.data();
    const char* last = first + token.size();
    auto res = std::from_chars(first, last, out);
    return res.ec == std::errc() && res.ptr == last;
}

namespace detail {

inline std::string slurp(std::istream& in) {
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

}  // namespace detail

}  // namespace cubedual
