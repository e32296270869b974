#ifndef LAGSURF_UTIL_HPP
#define LAGSURF_UTIL_HPP

#include <cstdint>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace lagsurf {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Exact conversion of a decimal literal ("-12.0625", "3e-2", "7") to a rational.
// Used for mesh coordinates so that combinatorial decisions never depend on
// binary rounding of the input text.
Rational parse_decimal(const std::string& text);

// Exact value of an IEEE double (every finite double is a dyadic rational).
Rational rational_of_double(double x);

double to_double(const Rational& q);

// SHA-256 of a byte string, lowercase hex. Reports embed these digests so
// results stay auditable; no crypto dependency is pulled in for one hash.
std::string sha256_hex(const void* data, std::size_t size);
std::string sha256_hex(const std::string& bytes);

// FNV-1a, used only to derive deterministic seeds from content.
std::uint64_t fnv1a64(const void* data, std::size_t size);
std::uint64_t fnv1a64(const std::string& bytes);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);

long long gcd_ll(long long a, long long b);

}  // namespace lagsurf

#endif
