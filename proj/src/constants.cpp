#include "glab/constants.hpp"

#include <cmath>
#include <sstream>
#include <vector>

namespace glab {

ExactVal::ExactVal(mpq_class rat, mpz_class coeff, mpz_class jordan)
    : rat_(std::move(rat)), coeff_(std::move(coeff)), jordan_(std::move(jordan)) {
    if (jordan_ < 1) throw ValidationError("jordan", "J must be >= 1");
    if (coeff_ < 0) throw ValidationError("coeff", "log2 coefficient must be >= 0");
    rat_.canonicalize();
    if (jordan_ == 1) coeff_ = 0;  // log2(1) = 0
}

ExactVal ExactVal::operator+(const ExactVal& o) const {
    mpz_class j = jordan_;
    if (coeff_ != 0 && o.coeff_ != 0 && jordan_ != o.jordan_)
        throw ValidationError("exactval", "mixed Jordan bases");
    if (coeff_ == 0) j = o.jordan_;
    return ExactVal(rat_ + o.rat_, coeff_ + o.coeff_, j);
}

ExactVal ExactVal::scaled(const mpq_class& s) const {
    if (s < 0) throw ValidationError("exactval", "negative scaling unsupported");
    mpq_class c = s * coeff_;
    c.canonicalize();
    if (c.get_den() != 1) throw ValidationError("exactval", "scaling must keep the log coefficient integral");
    return ExactVal(rat_ * s, mpz_class(c.get_num()), jordan_);
}

namespace {

// sign of (p/q - c*log2(J)) with q > 0, c >= 0, J >= 1: compare 2^p vs J^(q c).
int compare_rat_to_clog(const mpq_class& r, const mpz_class& c, const mpz_class& J) {
    if (c == 0 || J == 1) return sgn(r);
    if (r <= 0) return (c == 0) ? sgn(r) : -1;  // c*log2(J) >= 0, and > 0 here
    const mpz_class& p = r.get_num();
    const mpz_class& q = r.get_den();
    mpz_class lhs;
    mpz_pow_ui(lhs.get_mpz_t(), mpz_class(2).get_mpz_t(), mpz_get_ui(p.get_mpz_t()));
    mpz_class rhs, e = q * c;
    mpz_pow_ui(rhs.get_mpz_t(), J.get_mpz_t(), mpz_get_ui(e.get_mpz_t()));
    return cmp(lhs, rhs) < 0 ? -1 : (cmp(lhs, rhs) > 0 ? 1 : 0);
}

}  // namespace

int ExactVal::compare(const ExactVal& o) const {
    mpq_class dr = rat_ - o.rat_;
    mpz_class dc = coeff_ - o.coeff_;
    mpz_class J = coeff_ != 0 ? jordan_ : o.jordan_;
    if (coeff_ != 0 && o.coeff_ != 0 && jordan_ != o.jordan_)
        throw ValidationError("exactval", "mixed Jordan bases");
    if (dc == 0 || J == 1) return sgn(dr);
    // sign of dr + dc*log2(J)
    if (dc > 0) {
        if (dr >= 0) return 1;  // both parts >= 0, log part > 0
        return -compare_rat_to_clog(-dr, dc, J);
    }
    // dc < 0
    if (dr <= 0) return -1;
    return compare_rat_to_clog(dr, -dc, J);
}

mpz_class ExactVal::ceil() const {
    double a = approx();
    mpz_class t(std::floor(a) - 2);
    while (true) {
        // t >= value ?
        if (compare_rat_to_clog(mpq_class(t) - rat_, coeff_, jordan_) >= 0) return t;
        ++t;
    }
}

double ExactVal::approx() const {
    double r = rat_.get_d();
    if (coeff_ == 0) return r;
    signed long exp = 0;
    double d = mpz_get_d_2exp(&exp, jordan_.get_mpz_t());
    double l2 = std::log2(d) + static_cast<double>(exp);
    return r + coeff_.get_d() * l2;
}

std::string ExactVal::str() const {
    std::ostringstream os;
    os << rat_.get_str();
    if (coeff_ != 0) os << " + " << coeff_.get_str() << "*log2(" << jordan_.get_str() << ")";
    return os.str();
}

mpz_class JordanPolicy::jordan(std::uint32_t m, bool* exact) const {
    if (m < 1) throw ValidationError("m", "need m >= 1");
    if (mode == Mode::UserSupplied) {
        auto it = table.find(m);
        if (it == table.end()) throw ValidationError("jordan", "no table entry for m = " + std::to_string(m));
        if (m >= 2) {
            mpz_class fact;
            mpz_fac_ui(fact.get_mpz_t(), m + 1);
            if (it->second < fact)
                throw ValidationError("jordan", "J(m) < (m+1)! violates the permutation lower bound");
        }
        if (exact) *exact = true;
        return it->second;
    }
    if (m == 1) {
        if (exact) *exact = true;
        return 1;
    }
    mpz_class fact;
    mpz_fac_ui(fact.get_mpz_t(), m + 1);
    if (exact) *exact = m >= 71;
    return fact;
}

ExactVal n_sharp(std::uint32_t m, const JordanPolicy& policy) {
    if (m < 1) throw ValidationError("m", "need m >= 1");
    mpz_class J = policy.jordan(m);
    return ExactVal(mpq_class(2 + 5 * static_cast<long>(m), 2), 1, J);
}

bool n_sharp_met(std::uint32_t m, std::int64_t n, const JordanPolicy& policy) {
    // n >= 1 + 5m/2 + log2(J)  <=>  2^(2n-2-5m) >= J^2
    mpz_class J = policy.jordan(m);
    std::int64_t e = 2 * n - 2 - 5 * static_cast<std::int64_t>(m);
    if (e < 0) return false;  // J >= 1 makes the right side >= 1 > 2^e
    mpz_class lhs;
    mpz_pow_ui(lhs.get_mpz_t(), mpz_class(2).get_mpz_t(), static_cast<unsigned long>(e));
    return lhs >= J * J;
}

std::int64_t n_sharp_min_n(std::uint32_t m, const JordanPolicy& policy) {
    std::int64_t n = 1;
    while (!n_sharp_met(m, n, policy)) ++n;
    return n;
}

ExactVal n_recursive(std::uint32_t m, std::uint32_t D, const JordanPolicy& policy) {
    ExactVal base = n_sharp(m, policy);
    std::vector<ExactVal> vals{base};
    for (std::uint32_t d = 1; d <= D; ++d) {
        ExactVal mx = vals[0];
        for (const auto& v : vals)
            if (mx < v) mx = v;
        vals.push_back(base + mx);
    }
    return vals[D];
}

ExactVal n_closed(std::uint32_t m, std::uint32_t D, const JordanPolicy& policy) {
    return n_sharp(m, policy).scaled(mpq_class(D + 1));
}

mpz_class intro_bound(std::uint32_t m, std::uint64_t b) {
    if (m < 1) throw ValidationError("m", "need m >= 1");
    mpz_class base = 3 * mpz_class(m) * m + mpz_class(static_cast<unsigned long>(b));
    if (m == 1) return base;  // log2(1) = 0
    // smallest t >= 2 m^2 log2(m): 2^t >= m^(2m^2)
    const unsigned long e = 2ul * m * m;
    mpz_class pw;
    mpz_ui_pow_ui(pw.get_mpz_t(), m, e);
    double t_approx = static_cast<double>(e) * std::log2(static_cast<double>(m));
    long t = static_cast<long>(std::floor(t_approx)) - 2;
    if (t < 0) t = 0;
    while (true) {
        mpz_class lhs;
        mpz_pow_ui(lhs.get_mpz_t(), mpz_class(2).get_mpz_t(), static_cast<unsigned long>(t));
        if (lhs >= pw) break;
        ++t;
    }
    return base + t;
}

ConstantReport constant_report(std::uint32_t m, const JordanPolicy& policy, std::uint64_t b) {
    if (m < 1) throw ValidationError("m", "need m >= 1");
    ConstantReport r;
    r.m = m;
    r.b = b;
    r.J = policy.jordan(m, &r.J_exact);
    r.N_sharp = n_sharp(m, policy);
    r.N = r.N_sharp.scaled(mpq_class(2 * static_cast<long>(m)));
    const std::uint64_t ell_a = static_cast<std::uint64_t>(m) * (m + 3) / 2;
    r.Z = n_closed(m, static_cast<std::uint32_t>(ell_a), policy);
    r.T = 2 * mpz_class(m) * (1 + mpz_class(m) + r.J);
    r.ell_Um = 2ull * m - 1;
    r.ell_a_GLm = ell_a;
    r.sufficient_n_thmA = r.N.ceil() + 2 + (3 * static_cast<std::uint64_t>(m)) / 2;
    r.intro_bound_b = intro_bound(m, b);
    return r;
}

}  // namespace glab
