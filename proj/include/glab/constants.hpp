#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <string>

#include "glab/errors.hpp"

namespace glab {

// Exact value of the form  rat + coeff * log2(J)  with J a positive integer.
// Comparisons and ceilings resolve through integer power comparisons, never
// floating point.
class ExactVal {
public:
    ExactVal() : rat_(0), coeff_(0), jordan_(1) {}
    ExactVal(mpq_class rat, mpz_class coeff, mpz_class jordan);
    static ExactVal rational(const mpq_class& r) { return ExactVal(r, 0, 1); }

    ExactVal operator+(const ExactVal& o) const;
    ExactVal scaled(const mpq_class& s) const;

    // -1, 0, +1 of (*this - o), exact.
    int compare(const ExactVal& o) const;
    bool operator<(const ExactVal& o) const { return compare(o) < 0; }
    bool operator<=(const ExactVal& o) const { return compare(o) <= 0; }
    bool operator==(const ExactVal& o) const { return compare(o) == 0; }

    mpz_class ceil() const;  // smallest integer >= value
    double approx() const;
    std::string str() const;

    const mpq_class& rat() const { return rat_; }
    const mpz_class& coeff() const { return coeff_; }
    const mpz_class& jordan() const { return jordan_; }

private:
    mpq_class rat_;
    mpz_class coeff_;    // coefficient of log2(jordan_), non-negative
    mpz_class jordan_;   // J >= 1
};

// J(m) policy. Under collins_large_m, J(1) = 1 (finite subgroups of GL_1(C)
// are cyclic, so the normal abelian subgroup is everything) and J(m) = (m+1)!
// otherwise: exact for m >= 71, a lower bound below. User tables must respect
// J(m) >= (m+1)! for m >= 2.
struct JordanPolicy {
    enum class Mode { CollinsLargeM, UserSupplied };
    Mode mode = Mode::CollinsLargeM;
    std::map<std::uint32_t, mpz_class> table;

    mpz_class jordan(std::uint32_t m, bool* exact = nullptr) const;
};

// N_#(m) = 1 + 5m/2 + log2(J(m)).
ExactVal n_sharp(std::uint32_t m, const JordanPolicy& policy = {});
// Decides n >= N_#(m) exactly via 2^(2n-2-5m) vs J(m)^2.
bool n_sharp_met(std::uint32_t m, std::int64_t n, const JordanPolicy& policy = {});
std::int64_t n_sharp_min_n(std::uint32_t m, const JordanPolicy& policy = {});

// N(m,0) = N_#(m); N(m,D+1) = N(m,0) + max_{0<=j<=D} N(m,j).
ExactVal n_recursive(std::uint32_t m, std::uint32_t D, const JordanPolicy& policy = {});
// Closed form (D+1) * N_#(m).
ExactVal n_closed(std::uint32_t m, std::uint32_t D, const JordanPolicy& policy = {});

// Smallest integer >= 2 m^2 log2(m) + 3 m^2 + b, exact via 2^t vs m^(2m^2).
mpz_class intro_bound(std::uint32_t m, std::uint64_t b);

struct ConstantReport {
    std::uint32_t m = 0;
    mpz_class J;
    bool J_exact = false;  // false: J is only a lower bound (m < 71 under collins_large_m)
    ExactVal N_sharp;
    ExactVal N;        // 2m N_#(m)
    ExactVal Z;        // N(m, m(m+3)/2)
    mpz_class T;       // 2m (1 + m + J(m))
    std::uint64_t ell_Um = 0;      // 2m - 1
    std::uint64_t ell_a_GLm = 0;   // m(m+3)/2
    mpz_class sufficient_n_thmA;   // ceil(N(m)) + 2 + floor(3m/2)
    mpz_class intro_bound_b;       // ceil(2 m^2 log2 m + 3 m^2 + b)
    std::uint64_t b = 0;
};

ConstantReport constant_report(std::uint32_t m, const JordanPolicy& policy = {}, std::uint64_t b = 1000);

}  // namespace glab
