#include "glab/field.hpp"

#include <algorithm>
#include <string>

namespace glab {

bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

std::uint64_t prime_power_base(std::uint64_t n) {
    if (n < 2) return 0;
    for (std::uint64_t p = 2; p * p <= n; ++p) {
        if (n % p != 0) continue;
        std::uint64_t m = n;
        while (m % p == 0) m /= p;
        return m == 1 ? p : 0;
    }
    return n;  // n itself prime
}

namespace {

// Polynomials over F_p as little-endian coefficient vectors.
using Poly = std::vector<std::uint32_t>;

Poly poly_mod(Poly a, const Poly& m, std::uint32_t p) {
    const std::size_t dm = m.size() - 1;
    while (a.size() > dm) {
        std::uint32_t lead = a.back();
        if (lead != 0) {
            const std::size_t shift = a.size() - 1 - dm;
            // m is monic, subtract lead * x^shift * m
            for (std::size_t i = 0; i <= dm; ++i) {
                std::uint64_t v = a[shift + i] + static_cast<std::uint64_t>(p) * p;
                v -= static_cast<std::uint64_t>(lead) * m[i] % p;
                a[shift + i] = static_cast<std::uint32_t>(v % p);
            }
        }
        a.pop_back();
    }
    return a;
}

Poly poly_mul(const Poly& a, const Poly& b, std::uint32_t p) {
    Poly r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j)
            r[i + j] = static_cast<std::uint32_t>((r[i + j] + static_cast<std::uint64_t>(a[i]) * b[j]) % p);
    return r;
}

Poly decode_poly(std::uint32_t code, std::uint32_t p, std::uint32_t k) {
    Poly c(k, 0);
    for (std::uint32_t i = 0; i < k; ++i) {
        c[i] = code % p;
        code /= p;
    }
    return c;
}

std::uint32_t encode_poly(const Poly& c, std::uint32_t p, std::uint32_t k) {
    std::uint32_t code = 0;
    for (std::uint32_t i = k; i-- > 0;) code = code * p + (i < c.size() ? c[i] : 0);
    return code;
}

// Brute-force irreducibility: no monic divisor of degree 1..k/2.
bool divides(const Poly& d, const Poly& m, std::uint32_t p) {
    Poly r = poly_mod(m, d, p);
    return std::all_of(r.begin(), r.end(), [](std::uint32_t c) { return c == 0; });
}

Poly find_irreducible(std::uint32_t p, std::uint32_t k) {
    std::uint64_t count = 1;
    for (std::uint32_t i = 0; i < k; ++i) count *= p;
    for (std::uint64_t tail = 0; tail < count; ++tail) {
        Poly m = decode_poly(static_cast<std::uint32_t>(tail), p, k);
        m.push_back(1);  // monic of degree k
        bool red = false;
        for (std::uint32_t dd = 1; !red && 2 * dd <= k; ++dd) {
            std::uint64_t dcount = 1;
            for (std::uint32_t i = 0; i < dd; ++i) dcount *= p;
            for (std::uint64_t t2 = 0; t2 < dcount; ++t2) {
                Poly d = decode_poly(static_cast<std::uint32_t>(t2), p, dd);
                d.push_back(1);
                if (divides(d, m, p)) {
                    red = true;
                    break;
                }
            }
        }
        if (!red) return m;
    }
    throw ValidationError("q", "no irreducible polynomial found (internal)");
}

}  // namespace

Fq::Fq(std::uint32_t q) : q_(q) {
    if (q > 4096) throw ValidationError("q", "field size " + std::to_string(q) + " exceeds limit 4096");
    std::uint64_t p = prime_power_base(q);
    if (p == 0) throw ValidationError("q", std::to_string(q) + " is not a prime power");
    p_ = static_cast<std::uint32_t>(p);
    k_ = 0;
    for (std::uint64_t m = q; m > 1; m /= p) ++k_;

    add_.assign(static_cast<std::size_t>(q) * q, 0);
    mul_.assign(static_cast<std::size_t>(q) * q, 0);
    neg_.assign(q, 0);
    inv_.assign(q, 0);

    if (k_ == 1) {
        for (std::uint32_t a = 0; a < q; ++a) {
            neg_[a] = (q - a) % q;
            for (std::uint32_t b = 0; b < q; ++b) {
                add_[a * q + b] = (a + b) % q;
                mul_[a * q + b] = static_cast<std::uint32_t>(static_cast<std::uint64_t>(a) * b % q);
            }
        }
    } else {
        Poly irred = find_irreducible(p_, k_);
        for (std::uint32_t a = 0; a < q; ++a) {
            Poly pa = decode_poly(a, p_, k_);
            Poly na(k_, 0);
            for (std::uint32_t i = 0; i < k_; ++i) na[i] = (p_ - pa[i]) % p_;
            neg_[a] = encode_poly(na, p_, k_);
            for (std::uint32_t b = 0; b < q; ++b) {
                Poly pb = decode_poly(b, p_, k_);
                Poly s(k_, 0);
                for (std::uint32_t i = 0; i < k_; ++i) s[i] = (pa[i] + pb[i]) % p_;
                add_[a * q + b] = encode_poly(s, p_, k_);
                Poly m = poly_mod(poly_mul(pa, pb, p_), irred, p_);
                mul_[a * q + b] = encode_poly(m, p_, k_);
            }
        }
    }
    for (std::uint32_t a = 1; a < q; ++a)
        for (std::uint32_t b = 1; b < q; ++b)
            if (mul_[a * q + b] == 1) {
                inv_[a] = b;
                break;
            }
}

std::uint32_t Fq::inv(std::uint32_t a) const {
    if (a == 0) throw ValidationError("element", "zero has no multiplicative inverse");
    return inv_[a];
}

}  // namespace glab
