#include "lagsurf/util.hpp"

#include <array>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include "lagsurf/errors.hpp"

namespace lagsurf {

const char* error_kind_name(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::NonManifold: return "NonManifold";
        case ErrorKind::NonOrientable: return "NonOrientable";
        case ErrorKind::Disconnected: return "Disconnected";
        case ErrorKind::DegenerateFrame: return "DegenerateFrame";
        case ErrorKind::ResolutionTooLow: return "ResolutionTooLow";
        case ErrorKind::InternalRankError: return "InternalRankError";
        case ErrorKind::MeshMismatch: return "MeshMismatch";
        case ErrorKind::NotIntegral: return "NotIntegral";
        case ErrorKind::EdgeAliasing: return "EdgeAliasing";
        case ErrorKind::TriangleWrap: return "TriangleWrap";
        case ErrorKind::SingularMatrix: return "SingularMatrix";
        case ErrorKind::DegenerateBlock: return "DegenerateBlock";
        case ErrorKind::NotSPD: return "NotSPD";
        case ErrorKind::NondegeneracyFailure: return "NondegeneracyFailure";
        case ErrorKind::InvalidFormField: return "InvalidFormField";
        case ErrorKind::WrongGenus: return "WrongGenus";
        case ErrorKind::InconsistentPrismSplit: return "InconsistentPrismSplit";
        case ErrorKind::NotACycle: return "NotACycle";
        case ErrorKind::DegenerateTrivialization: return "DegenerateTrivialization";
        case ErrorKind::NoRegularValue: return "NoRegularValue";
        case ErrorKind::RegularValueDisagreement: return "RegularValueDisagreement";
        case ErrorKind::NotRegular: return "NotRegular";
        case ErrorKind::DegenerateImage: return "DegenerateImage";
        case ErrorKind::NotNullHomologous: return "NotNullHomologous";
        case ErrorKind::BoundaryConditionViolated: return "BoundaryConditionViolated";
        case ErrorKind::InvalidSphereMap: return "InvalidSphereMap";
        case ErrorKind::IoError: return "IoError";
        case ErrorKind::SchemaError: return "SchemaError";
        case ErrorKind::InternalError: return "InternalError";
    }
    return "UnknownError";
}

ErrorCategory error_category(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::NonManifold:
        case ErrorKind::NonOrientable:
        case ErrorKind::Disconnected:
        case ErrorKind::DegenerateFrame:
        case ErrorKind::ResolutionTooLow:
        case ErrorKind::MeshMismatch:
        case ErrorKind::SingularMatrix:
        case ErrorKind::DegenerateBlock:
        case ErrorKind::NotSPD:
        case ErrorKind::NondegeneracyFailure:
        case ErrorKind::InvalidFormField:
        case ErrorKind::WrongGenus:
        case ErrorKind::DegenerateTrivialization:
        case ErrorKind::BoundaryConditionViolated:
        case ErrorKind::InvalidSphereMap:
        case ErrorKind::SchemaError:
            return ErrorCategory::Validation;
        case ErrorKind::EdgeAliasing:
        case ErrorKind::TriangleWrap:
        case ErrorKind::NotIntegral:
        case ErrorKind::NoRegularValue:
        case ErrorKind::RegularValueDisagreement:
        case ErrorKind::NotRegular:
        case ErrorKind::DegenerateImage:
            return ErrorCategory::Resolution;
        case ErrorKind::NotNullHomologous:
            return ErrorCategory::Undefined;
        case ErrorKind::IoError:
            return ErrorCategory::Io;
        case ErrorKind::InternalRankError:
        case ErrorKind::InconsistentPrismSplit:
        case ErrorKind::NotACycle:
        case ErrorKind::InternalError:
            return ErrorCategory::Internal;
    }
    return ErrorCategory::Internal;
}

Rational parse_decimal(const std::string& text) {
    std::size_t i = 0;
    const std::size_t n = text.size();
    auto bad = [&]() -> Rational {
        fail(ErrorKind::SchemaError, "not a decimal number: '" + text + "'");
    };
    if (n == 0) return bad();

    bool negative = false;
    if (text[i] == '+' || text[i] == '-') {
        negative = (text[i] == '-');
        ++i;
    }
    BigInt mantissa = 0;
    long long frac_digits = 0;
    bool any_digit = false;
    for (; i < n && text[i] >= '0' && text[i] <= '9'; ++i) {
        mantissa = mantissa * 10 + (text[i] - '0');
        any_digit = true;
    }
    if (i < n && text[i] == '.') {
        ++i;
        for (; i < n && text[i] >= '0' && text[i] <= '9'; ++i) {
            mantissa = mantissa * 10 + (text[i] - '0');
            ++frac_digits;
            any_digit = true;
        }
    }
    if (!any_digit) return bad();
    long long exponent = 0;
    if (i < n && (text[i] == 'e' || text[i] == 'E')) {
        ++i;
        bool exp_neg = false;
        if (i < n && (text[i] == '+' || text[i] == '-')) {
            exp_neg = (text[i] == '-');
            ++i;
        }
        if (i == n) return bad();
        for (; i < n && text[i] >= '0' && text[i] <= '9'; ++i)
            exponent = exponent * 10 + (text[i] - '0');
        if (exp_neg) exponent = -exponent;
    }
    if (i != n) return bad();

    Rational value(mantissa);
    long long net = exponent - frac_digits;
    if (net > 0) {
        BigInt scale = 1;
        for (long long k = 0; k < net; ++k) scale *= 10;
        value *= Rational(scale);
    } else if (net < 0) {
        BigInt scale = 1;
        for (long long k = 0; k < -net; ++k) scale *= 10;
        value /= Rational(scale);
    }
    if (negative) value = -value;
    return value;
}

Rational rational_of_double(double x) {
    if (!std::isfinite(x)) fail(ErrorKind::SchemaError, "non-finite coordinate");
    if (x == 0.0) return Rational(0);
    int exp = 0;
    double m = std::frexp(x, &exp);  // x = m * 2^exp, 0.5 <= |m| < 1
    // 53 bits of mantissa
    long long mant = static_cast<long long>(std::ldexp(m, 53));
    exp -= 53;
    Rational value(mant);
    BigInt two = 1;
    if (exp > 0) {
        two <<= exp;
        value *= Rational(two);
    } else if (exp < 0) {
        two <<= -exp;
        value /= Rational(two);
    }
    return value;
}

double to_double(const Rational& q) {
    return static_cast<double>(q);
}

namespace {

// Compact SHA-256 (FIPS 180-4), enough for content digests in reports.
struct Sha256 {
    std::uint32_t h[8] = {0x6a09e667u, 0xbb67ae85u, 0x3c6ef372u, 0xa54ff53au,
                          0x510e527fu, 0x9b05688cu, 0x1f83d9abu, 0x5be0cd19u};
    unsigned char buffer[64];
    std::size_t buffered = 0;
    std::uint64_t total_bits = 0;

    static std::uint32_t rotr(std::uint32_t v, int s) { return (v >> s) | (v << (32 - s)); }

    void process(const unsigned char* p) {
        static const std::uint32_t K[64] = {
            0x428a2f98, 0x71374491, 0xb5c0fbcf, 0xe9b5dba5, 0x3956c25b, 0x59f111f1,
            0x923f82a4, 0xab1c5ed5, 0xd807aa98, 0x12835b01, 0x243185be, 0x550c7dc3,
            0x72be5d74, 0x80deb1fe, 0x9bdc06a7, 0xc19bf174, 0xe49b69c1, 0xefbe4786,
            0x0fc19dc6, 0x240ca1cc, 0x2de92c6f, 0x4a7484aa, 0x5cb0a9dc, 0x76f988da,
            0x983e5152, 0xa831c66d, 0xb00327c8, 0xbf597fc7, 0xc6e00bf3, 0xd5a79147,
            0x06ca6351, 0x14292967, 0x27b70a85, 0x2e1b2138, 0x4d2c6dfc, 0x53380d13,
            0x650a7354, 0x766a0abb, 0x81c2c92e, 0x92722c85, 0xa2bfe8a1, 0xa81a664b,
            0xc24b8b70, 0xc76c51a3, 0xd192e819, 0xd6990624, 0xf40e3585, 0x106aa070,
            0x19a4c116, 0x1e376c08, 0x2748774c, 0x34b0bcb5, 0x391c0cb3, 0x4ed8aa4a,
            0x5b9cca4f, 0x682e6ff3, 0x748f82ee, 0x78a5636f, 0x84c87814, 0x8cc70208,
            0x90befffa, 0xa4506ceb, 0xbef9a3f7, 0xc67178f2};
        std::uint32_t w[64];
        for (int i = 0; i < 16; ++i)
            w[i] = (std::uint32_t(p[4 * i]) << 24) | (std::uint32_t(p[4 * i + 1]) << 16) |
                   (std::uint32_t(p[4 * i + 2]) << 8) | std::uint32_t(p[4 * i + 3]);
        for (int i = 16; i < 64; ++i) {
            std::uint32_t s0 = rotr(w[i - 15], 7) ^ rotr(w[i - 15], 18) ^ (w[i - 15] >> 3);
            std::uint32_t s1 = rotr(w[i - 2], 17) ^ rotr(w[i - 2], 19) ^ (w[i - 2] >> 10);
            w[i] = w[i - 16] + s0 + w[i - 7] + s1;
        }
        std::uint32_t a = h[0], b = h[1], c = h[2], d = h[3];
        std::uint32_t e = h[4], f = h[5], g = h[6], hh = h[7];
        for (int i = 0; i < 64; ++i) {
            std::uint32_t S1 = rotr(e, 6) ^ rotr(e, 11) ^ rotr(e, 25);
            std::uint32_t ch = (e & f) ^ (~e & g);
            std::uint32_t t1 = hh + S1 + ch + K[i] + w[i];
            std::uint32_t S0 = rotr(a, 2) ^ rotr(a, 13) ^ rotr(a, 22);
            std::uint32_t maj = (a & b) ^ (a & c) ^ (b & c);
            std::uint32_t t2 = S0 + maj;
            hh = g; g = f; f = e; e = d + t1;
            d = c; c = b; b = a; a = t1 + t2;
        }
        h[0] += a; h[1] += b; h[2] += c; h[3] += d;
        h[4] += e; h[5] += f; h[6] += g; h[7] += hh;
    }

    void update(const unsigned char* data, std::size_t size) {
        total_bits += std::uint64_t(size) * 8;
        while (size > 0) {
            std::size_t take = std::min(size, std::size_t(64) - buffered);
            std::memcpy(buffer + buffered, data, take);
            buffered += take;
            data += take;
            size -= take;
            if (buffered == 64) {
                process(buffer);
                buffered = 0;
            }
        }
    }

    std::string finish() {
        unsigned char pad = 0x80;
        std::uint64_t bits = total_bits;
        update(&pad, 1);
        unsigned char zero = 0;
        while (buffered != 56) update(&zero, 1);
        unsigned char len[8];
        for (int i = 7; i >= 0; --i) {
            len[i] = static_cast<unsigned char>(bits & 0xff);
            bits >>= 8;
        }
        update(len, 8);
        static const char* hexdigits = "0123456789abcdef";
        std::string out(64, '0');
        for (int i = 0; i < 8; ++i)
            for (int j = 0; j < 4; ++j) {
                unsigned char byte = static_cast<unsigned char>(h[i] >> (24 - 8 * j));
                out[8 * i + 2 * j] = hexdigits[byte >> 4];
                out[8 * i + 2 * j + 1] = hexdigits[byte & 0xf];
            }
        return out;
    }
};

}  // namespace

std::string sha256_hex(const void* data, std::size_t size) {
    Sha256 hasher;
    hasher.update(static_cast<const unsigned char*>(data), size);
    return hasher.finish();
}

std::string sha256_hex(const std::string& bytes) {
    return sha256_hex(bytes.data(), bytes.size());
}

std::uint64_t fnv1a64(const void* data, std::size_t size) {
    const unsigned char* p = static_cast<const unsigned char*>(data);
    std::uint64_t hash = 1469598103934665603ull;
    for (std::size_t i = 0; i < size; ++i) {
        hash ^= p[i];
        hash *= 1099511628211ull;
    }
    return hash;
}

std::uint64_t fnv1a64(const std::string& bytes) {
    return fnv1a64(bytes.data(), bytes.size());
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorKind::IoError, "cannot open '" + path + "' for reading");
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

void write_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorKind::IoError, "cannot open '" + path + "' for writing");
    out << contents;
    if (!out) fail(ErrorKind::IoError, "write failed for '" + path + "'");
}

long long gcd_ll(long long a, long long b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
        long long t = a % b;
        a = b;
        b = t;
    }
    return a;
}

}  // namespace lagsurf
