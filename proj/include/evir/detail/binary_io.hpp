#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <string>

#include "evir/errors.hpp"

namespace evir::detail {

// Little-endian primitives shared by the EVEC and EIDX file formats.

inline void put_bytes(std::ostream& out, const void* data, std::size_t n) {
    out.write(static_cast<const char*>(data), static_cast<std::streamsize>(n));
}

template <typename T>
void put_le(std::ostream& out, T value) {
    static_assert(std::is_integral_v<T>);
    unsigned char bytes[sizeof(T)];
    auto u = static_cast<std::make_unsigned_t<T>>(value);
    for (std::size_t i = 0; i < sizeof(T); ++i) bytes[i] = static_cast<unsigned char>(u >> (8 * i));
    put_bytes(out, bytes, sizeof(T));
}

inline void put_f32_le(std::ostream& out, float value) {
    put_le(out, std::bit_cast<std::uint32_t>(value));
}

inline void put_f64_le(std::ostream& out, double value) {
    put_le(out, std::bit_cast<std::uint64_t>(value));
}

inline void put_string(std::ostream& out, const std::string& s) {
    if (s.size() > 0xFFFF) throw InternalError("string too long for u16 length prefix");
    put_le<std::uint16_t>(out, static_cast<std::uint16_t>(s.size()));
    put_bytes(out, s.data(), s.size());
}

inline void get_bytes(std::istream& in, void* data, std::size_t n, const std::string& context) {
    in.read(static_cast<char*>(data), static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(in.gcount()) != n) {
        throw DataError(DataErrorKind::Truncated, context + ": unexpected end of file");
    }
}

template <typename T>
T get_le(std::istream& in, const std::string& context) {
    static_assert(std::is_integral_v<T>);
    unsigned char bytes[sizeof(T)];
    get_bytes(in, bytes, sizeof(T), context);
    std::make_unsigned_t<T> u = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) u |= static_cast<std::make_unsigned_t<T>>(bytes[i]) << (8 * i);
    return static_cast<T>(u);
}

inline float get_f32_le(std::istream& in, const std::string& context) {
    return std::bit_cast<float>(get_le<std::uint32_t>(in, context));
}

inline double get_f64_le(std::istream& in, const std::string& context) {
    return std::bit_cast<double>(get_le<std::uint64_t>(in, context));
}

inline std::string get_string(std::istream& in, const std::string& context) {
    auto length = get_le<std::uint16_t>(in, context);
    std::string s(length, '\0');
    if (length > 0) get_bytes(in, s.data(), length, context);
    return s;
}

inline void expect_end(std::istream& in, const std::string& context) {
    if (in.peek() != std::istream::traits_type::eof()) {
        throw DataError(DataErrorKind::TrailingBytes, context + ": data past the last record");
    }
}

}  // namespace evir::detail
