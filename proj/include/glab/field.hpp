#pragma once

#include <cstdint>
#include <vector>

#include "glab/errors.hpp"

namespace glab {

bool is_prime(std::uint64_t n);

// Returns p when n = p^k for a prime p (k >= 1), otherwise 0.
std::uint64_t prime_power_base(std::uint64_t n);

// Arithmetic tables for F_q with q = p^k. Element codes are 0..q-1; for k > 1
// the code is the base-p digit string of the polynomial representative, so
// code 0 is the additive and code 1 the multiplicative identity.
class Fq {
public:
    explicit Fq(std::uint32_t q);

    std::uint32_t q() const { return q_; }
    std::uint32_t p() const { return p_; }
    std::uint32_t degree() const { return k_; }

    std::uint32_t add(std::uint32_t a, std::uint32_t b) const { return add_[a * q_ + b]; }
    std::uint32_t sub(std::uint32_t a, std::uint32_t b) const { return add(a, neg_[b]); }
    std::uint32_t mul(std::uint32_t a, std::uint32_t b) const { return mul_[a * q_ + b]; }
    std::uint32_t neg(std::uint32_t a) const { return neg_[a]; }
    std::uint32_t inv(std::uint32_t a) const;

private:
    std::uint32_t q_, p_, k_;
    std::vector<std::uint32_t> add_, mul_, neg_, inv_;
};

}  // namespace glab
