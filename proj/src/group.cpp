#include "glab/group.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include "glab/field.hpp"
#include "json.hpp"

namespace glab {

namespace {

constexpr std::uint64_t kTableLimit = 4096;      // full Cayley table below this order
constexpr std::uint64_t kOrderLimit = 1u << 20;  // hard construction limit

std::vector<std::uint32_t> lehmer_decode(std::uint64_t code, std::uint32_t n) {
    // Factorial number system; code 0 is the identity permutation.
    std::vector<std::uint32_t> digits(n, 0);
    for (std::uint32_t i = 2; i <= n; ++i) {
        digits[n - i] = static_cast<std::uint32_t>(code % i);
        code /= i;
    }
    std::vector<std::uint32_t> pool(n);
    std::iota(pool.begin(), pool.end(), 0);
    std::vector<std::uint32_t> perm(n);
    for (std::uint32_t i = 0; i < n; ++i) {
        perm[i] = pool[digits[i]];
        pool.erase(pool.begin() + digits[i]);
    }
    return perm;
}

std::uint64_t lehmer_encode(const std::vector<std::uint32_t>& perm) {
    const std::uint32_t n = static_cast<std::uint32_t>(perm.size());
    std::uint64_t code = 0;
    for (std::uint32_t i = 0; i < n; ++i) {
        std::uint32_t smaller = 0;
        for (std::uint32_t j = i + 1; j < n; ++j)
            if (perm[j] < perm[i]) ++smaller;
        code = code * (n - i) + smaller;
    }
    return code;
}

std::uint64_t checked_pow(std::uint64_t base, std::uint32_t exp, const char* field) {
    std::uint64_t r = 1;
    for (std::uint32_t i = 0; i < exp; ++i) {
        if (base != 0 && r > kOrderLimit) throw ValidationError(field, "group order exceeds construction limit");
        r *= base;
    }
    return r;
}

}  // namespace

// ---------------------------------------------------------------- GroupSpec

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

std::uint64_t parse_u64(const std::string& s, const char* field) {
    try {
        std::size_t pos = 0;
        std::uint64_t v = std::stoull(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ValidationError(field, "expected a positive integer, got '" + s + "'");
    }
}

}  // namespace

GroupSpec GroupSpec::parse(const std::string& dsl) {
    GroupSpec g;
    if (dsl.rfind("prod(", 0) == 0) {
        if (dsl.back() != ')') throw ValidationError("spec", "unterminated prod(...)");
        g.kind = Kind::Product;
        std::string body = dsl.substr(5, dsl.size() - 6);
        // split on ';' at depth 0
        int depth = 0;
        std::string cur;
        std::vector<std::string> parts;
        for (char c : body) {
            if (c == '(') ++depth;
            if (c == ')') --depth;
            if (c == ';' && depth == 0) {
                parts.push_back(cur);
                cur.clear();
            } else {
                cur += c;
            }
        }
        parts.push_back(cur);
        for (const auto& p : parts) g.factors.push_back(GroupSpec::parse(p));
        if (g.factors.empty()) throw ValidationError("spec", "prod() needs at least one factor");
        return g;
    }
    auto colon = dsl.find(':');
    if (colon == std::string::npos) throw ValidationError("spec", "unrecognized group spec '" + dsl + "'");
    const std::string head = dsl.substr(0, colon), body = dsl.substr(colon + 1);
    if (head == "sym") {
        g.kind = Kind::Symmetric;
        g.letters = static_cast<std::uint32_t>(parse_u64(body, "sym:n"));
        if (g.letters < 1) throw ValidationError("sym:n", "need n >= 1");
    } else if (head == "cyc") {
        g.kind = Kind::Cyclic;
        g.modulus = parse_u64(body, "cyc:N");
        if (g.modulus < 1) throw ValidationError("cyc:N", "need N >= 1");
    } else if (head == "ab") {
        g.kind = Kind::Abelian;
        for (const auto& part : split(body, ',')) {
            std::uint64_t d = parse_u64(part, "ab:moduli");
            if (d < 1) throw ValidationError("ab:moduli", "factor moduli must be >= 1");
            g.moduli.push_back(d);
        }
        if (g.moduli.empty()) throw ValidationError("ab:moduli", "need at least one factor");
    } else if (head == "gl" || head == "sl") {
        g.kind = head == "gl" ? Kind::GeneralLinear : Kind::SpecialLinear;
        auto parts = split(body, ',');
        if (parts.size() != 2) throw ValidationError(head, "expected " + head + ":r,q");
        g.dim = static_cast<std::uint32_t>(parse_u64(parts[0], "r"));
        g.q = static_cast<std::uint32_t>(parse_u64(parts[1], "q"));
        if (g.dim < 1) throw ValidationError("r", "need r >= 1");
        if (prime_power_base(g.q) == 0) throw ValidationError("q", std::to_string(g.q) + " is not a prime power");
    } else if (head == "lamp") {
        g.kind = Kind::Lamplighter;
        auto parts = split(body, ',');
        if (parts.size() != 2) throw ValidationError("lamp", "expected lamp:r,q");
        g.shift_mod = static_cast<std::uint32_t>(parse_u64(parts[0], "lamp:r"));
        g.lamp_mod = static_cast<std::uint32_t>(parse_u64(parts[1], "lamp:q"));
        if (g.shift_mod < 1 || g.lamp_mod < 1) throw ValidationError("lamp", "need r, q >= 1");
    } else if (head == "cayley") {
        g.kind = Kind::Cayley;
        g.cayley_path = body;
    } else {
        throw ValidationError("spec", "unknown group family '" + head + "'");
    }
    return g;
}

std::string GroupSpec::str() const {
    std::ostringstream os;
    switch (kind) {
        case Kind::Symmetric: os << "sym:" << letters; break;
        case Kind::Cyclic: os << "cyc:" << modulus; break;
        case Kind::Abelian:
            os << "ab:";
            for (std::size_t i = 0; i < moduli.size(); ++i) os << (i ? "," : "") << moduli[i];
            break;
        case Kind::GeneralLinear: os << "gl:" << dim << "," << q; break;
        case Kind::SpecialLinear: os << "sl:" << dim << "," << q; break;
        case Kind::Lamplighter: os << "lamp:" << shift_mod << "," << lamp_mod; break;
        case Kind::Product:
            os << "prod(";
            for (std::size_t i = 0; i < factors.size(); ++i) os << (i ? ";" : "") << factors[i].str();
            os << ")";
            break;
        case Kind::Cayley: os << "cayley:" << (cayley_path.empty() ? "<inline>" : cayley_path); break;
    }
    return os.str();
}

// --------------------------------------------------------------------- Word

Word Word::inverted() const {
    Word w;
    w.letters.reserve(letters.size());
    for (auto it = letters.rbegin(); it != letters.rend(); ++it) w.letters.push_back(-*it);
    return w;
}

Word Word::concat(const Word& a, const Word& b) {
    Word w = a;
    for (std::int32_t l : b.letters) {
        if (!w.letters.empty() && w.letters.back() == -l)
            w.letters.pop_back();
        else
            w.letters.push_back(l);
    }
    return w;
}

// ------------------------------------------------------------- FiniteGroup

struct FiniteGroup::Impl {
    GroupSpec spec;
    std::uint64_t order = 0;
    bool abelian = false;

    std::vector<std::uint16_t> table;  // full multiplication table when order <= kTableLimit
    std::vector<elem_t> inverse;
    std::vector<std::uint32_t> eorder;

    // family data
    std::shared_ptr<const Fq> field;                   // GL/SL
    std::uint32_t dim = 0;                             // GL/SL
    std::vector<std::vector<std::uint8_t>> mats;       // GL/SL: id -> row-major codes
    std::unordered_map<std::uint64_t, elem_t> matidx;  // matrix code -> id
    std::vector<FiniteGroup> factors;                  // Product
    std::vector<std::uint64_t> radix;                  // Abelian moduli / Product factor orders
    std::vector<std::vector<elem_t>> cayley;           // Cayley
    std::vector<std::string> names;                    // Cayley

    elem_t mul_structured(elem_t a, elem_t b) const;
    elem_t mul(elem_t a, elem_t b) const {
        if (!table.empty()) return table[static_cast<std::size_t>(a) * order + b];
        return mul_structured(a, b);
    }

    std::uint64_t mat_code(std::span<const std::uint8_t> m) const {
        std::uint64_t code = 0;
        for (std::size_t i = m.size(); i-- > 0;) code = code * field->q() + m[i];
        return code;
    }
};

namespace {

using Impl = FiniteGroup::Impl;

elem_t mul_sym(const GroupSpec& s, elem_t a, elem_t b) {
    auto pa = lehmer_decode(a, s.letters);
    auto pb = lehmer_decode(b, s.letters);
    std::vector<std::uint32_t> r(s.letters);
    for (std::uint32_t x = 0; x < s.letters; ++x) r[x] = pa[pb[x]];  // apply b first
    return static_cast<elem_t>(lehmer_encode(r));
}

}  // namespace

elem_t Impl::mul_structured(elem_t a, elem_t b) const {
    switch (spec.kind) {
        case GroupSpec::Kind::Symmetric:
            return mul_sym(spec, a, b);
        case GroupSpec::Kind::Cyclic:
            return static_cast<elem_t>((static_cast<std::uint64_t>(a) + b) % spec.modulus);
        case GroupSpec::Kind::Abelian: {
            elem_t out = 0;
            std::uint64_t mult = 1;
            for (std::uint64_t m : spec.moduli) {
                std::uint64_t da = a % m, db = b % m;
                a = static_cast<elem_t>(a / m);
                b = static_cast<elem_t>(b / m);
                out += static_cast<elem_t>(((da + db) % m) * mult);
                mult *= m;
            }
            return out;
        }
        case GroupSpec::Kind::GeneralLinear:
        case GroupSpec::Kind::SpecialLinear: {
            const auto& ma = mats[a];
            const auto& mb = mats[b];
            const std::uint32_t r = dim;
            std::vector<std::uint8_t> out(r * r, 0);
            for (std::uint32_t i = 0; i < r; ++i)
                for (std::uint32_t j = 0; j < r; ++j) {
                    std::uint32_t acc = 0;
                    for (std::uint32_t k = 0; k < r; ++k)
                        acc = field->add(acc, field->mul(ma[i * r + k], mb[k * r + j]));
                    out[i * r + j] = static_cast<std::uint8_t>(acc);
                }
            return matidx.at(mat_code(out));
        }
        case GroupSpec::Kind::Lamplighter: {
            const std::uint32_t r = spec.shift_mod, q = spec.lamp_mod;
            std::uint64_t lampspace = 1;
            for (std::uint32_t i = 0; i < r; ++i) lampspace *= q;
            std::uint32_t s1 = static_cast<std::uint32_t>(a / lampspace), s2 = static_cast<std::uint32_t>(b / lampspace);
            std::uint64_t f1 = a % lampspace, f2 = b % lampspace;
            // (s1,f1)(s2,f2) = (s1+s2, f1 + f2 shifted by s1):  (shift_k f)(x) = f(x-k)
            std::vector<std::uint32_t> l1(r), l2(r);
            for (std::uint32_t i = 0; i < r; ++i) {
                l1[i] = f1 % q;
                f1 /= q;
                l2[i] = f2 % q;
                f2 /= q;
            }
            std::uint64_t fo = 0, mult = 1;
            for (std::uint32_t x = 0; x < r; ++x) {
                std::uint32_t shifted = l2[(x + r - s1 % r) % r];
                fo += ((l1[x] + shifted) % q) * mult;
                mult *= q;
            }
            return static_cast<elem_t>(static_cast<std::uint64_t>((s1 + s2) % r) * lampspace + fo);
        }
        case GroupSpec::Kind::Product: {
            elem_t out = 0;
            std::uint64_t mult = 1;
            for (const auto& f : factors) {
                std::uint64_t m = f.order();
                elem_t da = static_cast<elem_t>(a % m), db = static_cast<elem_t>(b % m);
                a = static_cast<elem_t>(a / m);
                b = static_cast<elem_t>(b / m);
                out += static_cast<elem_t>(f.mul(da, db) * mult);
                mult *= m;
            }
            return out;
        }
        case GroupSpec::Kind::Cayley:
            return cayley[a][b];
    }
    throw ValidationError("spec", "unreachable group kind");
}

namespace {

void finalize(Impl& im) {
    const std::uint64_t n = im.order;
    if (n <= kTableLimit) {
        im.table.assign(n * n, 0);
        for (std::uint64_t a = 0; a < n; ++a)
            for (std::uint64_t b = 0; b < n; ++b)
                im.table[a * n + b] =
                    static_cast<std::uint16_t>(im.mul_structured(static_cast<elem_t>(a), static_cast<elem_t>(b)));
    }
    im.inverse.assign(n, 0);
    im.eorder.assign(n, 0);
    bool ab = true;
    for (std::uint64_t a = 0; a < n; ++a) {
        // order and inverse by cycling
        elem_t x = static_cast<elem_t>(a);
        std::uint32_t ord = 1;
        while (x != 0) {
            elem_t nx = im.mul(x, static_cast<elem_t>(a));
            if (nx == 0) im.inverse[a] = x;
            x = nx;
            ++ord;
        }
        if (a == 0) im.inverse[0] = 0;
        im.eorder[a] = (a == 0) ? 1 : ord;
    }
    if (!im.table.empty()) {
        for (std::uint64_t a = 0; ab && a < n; ++a)
            for (std::uint64_t b = a + 1; ab && b < n; ++b)
                if (im.table[a * n + b] != im.table[b * n + a]) ab = false;
    } else {
        for (std::uint64_t a = 0; ab && a < n; ++a)
            for (std::uint64_t b = a + 1; ab && b < n; ++b)
                if (im.mul(static_cast<elem_t>(a), static_cast<elem_t>(b)) !=
                    im.mul(static_cast<elem_t>(b), static_cast<elem_t>(a)))
                    ab = false;
    }
    im.abelian = ab;
}

void build_matrix_group(Impl& im, const GroupSpec& spec) {
    const std::uint32_t r = spec.dim, q = spec.q;
    im.field = std::make_shared<Fq>(q);
    im.dim = r;
    std::uint64_t space = checked_pow(q, r * r, "gl");
    const Fq& F = *im.field;

    auto det = [&](const std::vector<std::uint8_t>& m) -> std::uint32_t {
        // Gaussian elimination over F_q
        std::vector<std::uint32_t> a(m.begin(), m.end());
        std::uint32_t d = 1;
        for (std::uint32_t c = 0; c < r; ++c) {
            std::uint32_t piv = c;
            while (piv < r && a[piv * r + c] == 0) ++piv;
            if (piv == r) return 0;
            if (piv != c) {
                for (std::uint32_t j = 0; j < r; ++j) std::swap(a[piv * r + j], a[c * r + j]);
                d = F.neg(d);
            }
            d = F.mul(d, a[c * r + c]);
            std::uint32_t ipiv = F.inv(a[c * r + c]);
            for (std::uint32_t i = c + 1; i < r; ++i) {
                if (a[i * r + c] == 0) continue;
                std::uint32_t f = F.mul(a[i * r + c], ipiv);
                for (std::uint32_t j = c; j < r; ++j)
                    a[i * r + j] = F.sub(a[i * r + j], F.mul(f, a[c * r + j]));
            }
        }
        return d;
    };

    std::vector<std::uint8_t> identity(r * r, 0);
    for (std::uint32_t i = 0; i < r; ++i) identity[i * r + i] = 1;

    im.mats.push_back(identity);
    for (std::uint64_t code = 0; code < space; ++code) {
        std::vector<std::uint8_t> m(r * r);
        std::uint64_t c = code;
        for (std::uint32_t i = 0; i < r * r; ++i) {
            m[i] = static_cast<std::uint8_t>(c % q);
            c /= q;
        }
        if (m == identity) continue;
        std::uint32_t d = det(m);
        if (d == 0) continue;
        if (spec.kind == GroupSpec::Kind::SpecialLinear && d != 1) continue;
        im.mats.push_back(std::move(m));
        if (im.mats.size() > kOrderLimit) throw ValidationError("gl", "group order exceeds construction limit");
    }
    im.order = im.mats.size();
    for (std::size_t i = 0; i < im.mats.size(); ++i) im.matidx[im.mat_code(im.mats[i])] = static_cast<elem_t>(i);
}

void validate_cayley(const std::vector<std::vector<elem_t>>& t) {
    const std::size_t n = t.size();
    if (n == 0) throw ValidationError("cayley.table", "empty table");
    for (const auto& row : t)
        if (row.size() != n) throw ValidationError("cayley.table", "table is not square");
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (t[i][j] >= n) throw ValidationError("cayley.table", "entry out of range");
    // Latin square
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<char> seen_row(n, 0), seen_col(n, 0);
        for (std::size_t j = 0; j < n; ++j) {
            if (seen_row[t[i][j]]++) throw ValidationError("cayley.table", "row " + std::to_string(i) + " repeats an entry");
            if (seen_col[t[j][i]]++) throw ValidationError("cayley.table", "column " + std::to_string(i) + " repeats an entry");
        }
    }
    // identity at 0
    for (std::size_t j = 0; j < n; ++j)
        if (t[0][j] != j || t[j][0] != j)
            throw ValidationError("cayley.identity", "element 0 is not a two-sided identity");
    // inverses
    for (std::size_t i = 0; i < n; ++i) {
        bool has = false;
        for (std::size_t j = 0; j < n && !has; ++j) has = t[i][j] == 0 && t[j][i] == 0;
        if (!has) throw ValidationError("cayley.inverse", "element " + std::to_string(i) + " has no inverse");
    }
    // associativity: exhaustive when small, randomized above
    if (n <= 200) {
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b)
                for (std::size_t c = 0; c < n; ++c)
                    if (t[t[a][b]][c] != t[a][t[b][c]])
                        throw ValidationError("cayley.assoc", "table is not associative");
    } else {
        std::mt19937_64 rng(12345);
        std::uniform_int_distribution<std::size_t> d(0, n - 1);
        for (int k = 0; k < 10000; ++k) {
            std::size_t a = d(rng), b = d(rng), c = d(rng);
            if (t[t[a][b]][c] != t[a][t[b][c]])
                throw ValidationError("cayley.assoc", "table is not associative");
        }
    }
}

void load_cayley(Impl& im, const GroupSpec& spec) {
    if (!spec.cayley.empty()) {
        im.cayley = spec.cayley;
        im.names = spec.cayley_names;
    } else {
        std::ifstream in(spec.cayley_path);
        if (!in) throw ValidationError("cayley.path", "cannot open '" + spec.cayley_path + "'");
        nlohmann::json j;
        try {
            in >> j;
        } catch (const std::exception& e) {
            throw ValidationError("cayley.path", std::string("invalid JSON: ") + e.what());
        }
        if (!j.contains("order") || !j.contains("table"))
            throw ValidationError("cayley.json", "need fields 'order' and 'table'");
        std::size_t n = j["order"].get<std::size_t>();
        im.cayley = j["table"].get<std::vector<std::vector<elem_t>>>();
        if (im.cayley.size() != n) throw ValidationError("cayley.order", "order does not match table size");
        if (j.contains("names")) im.names = j["names"].get<std::vector<std::string>>();
    }
    validate_cayley(im.cayley);
    im.order = im.cayley.size();
}

}  // namespace

FiniteGroup FiniteGroup::build(const GroupSpec& spec) {
    auto im = std::make_shared<Impl>();
    im->spec = spec;
    switch (spec.kind) {
        case GroupSpec::Kind::Symmetric: {
            if (spec.letters < 1) throw ValidationError("sym:n", "need n >= 1");
            std::uint64_t f = 1;
            for (std::uint32_t i = 2; i <= spec.letters; ++i) {
                f *= i;
                if (f > kOrderLimit) throw ValidationError("sym:n", "group order exceeds construction limit");
            }
            im->order = f;
            break;
        }
        case GroupSpec::Kind::Cyclic:
            if (spec.modulus < 1) throw ValidationError("cyc:N", "need N >= 1");
            if (spec.modulus > kOrderLimit) throw ValidationError("cyc:N", "group order exceeds construction limit");
            im->order = spec.modulus;
            break;
        case GroupSpec::Kind::Abelian: {
            std::uint64_t o = 1;
            for (std::uint64_t m : spec.moduli) {
                if (m < 1) throw ValidationError("ab:moduli", "factor moduli must be >= 1");
                o *= m;
                if (o > kOrderLimit) throw ValidationError("ab:moduli", "group order exceeds construction limit");
            }
            im->order = o;
            im->radix = spec.moduli;
            break;
        }
        case GroupSpec::Kind::GeneralLinear:
        case GroupSpec::Kind::SpecialLinear:
            build_matrix_group(*im, spec);
            break;
        case GroupSpec::Kind::Lamplighter: {
            std::uint64_t lamp = checked_pow(spec.lamp_mod, spec.shift_mod, "lamp");
            std::uint64_t o = lamp * spec.shift_mod;
            if (o > kOrderLimit) throw ValidationError("lamp", "group order exceeds construction limit");
            im->order = o;
            break;
        }
        case GroupSpec::Kind::Product: {
            std::uint64_t o = 1;
            for (const auto& fs : spec.factors) {
                im->factors.push_back(FiniteGroup::build(fs));
                o *= im->factors.back().order();
                if (o > kOrderLimit) throw ValidationError("prod", "group order exceeds construction limit");
            }
            im->order = o;
            break;
        }
        case GroupSpec::Kind::Cayley:
            load_cayley(*im, spec);
            break;
    }
    finalize(*im);

    // Family order formulas double as construction checks.
    if (spec.kind == GroupSpec::Kind::GeneralLinear || spec.kind == GroupSpec::Kind::SpecialLinear) {
        std::uint64_t expect = 1;
        std::uint64_t qr = 1;
        for (std::uint32_t i = 0; i < spec.dim; ++i) qr *= spec.q;
        std::uint64_t qi = 1;
        for (std::uint32_t i = 0; i < spec.dim; ++i) {
            expect *= qr - qi;
            qi *= spec.q;
        }
        if (spec.kind == GroupSpec::Kind::SpecialLinear) expect /= spec.q - 1;
        if (expect != im->order) throw ValidationError("gl", "enumerated order disagrees with the order formula");
    }
    return FiniteGroup(std::move(im));
}

std::uint64_t FiniteGroup::order() const { return impl_->order; }
elem_t FiniteGroup::mul(elem_t a, elem_t b) const { return impl_->mul(a, b); }
elem_t FiniteGroup::inv(elem_t a) const { return impl_->inverse[a]; }
std::uint32_t FiniteGroup::element_order(elem_t a) const { return impl_->eorder[a]; }
bool FiniteGroup::is_abelian() const { return impl_->abelian; }
const GroupSpec& FiniteGroup::spec() const { return impl_->spec; }

elem_t FiniteGroup::pow(elem_t a, std::int64_t e) const {
    if (e < 0) {
        a = inv(a);
        e = -e;
    }
    elem_t r = 0;
    while (e > 0) {
        if (e & 1) r = mul(r, a);
        a = mul(a, a);
        e >>= 1;
    }
    return r;
}

std::string FiniteGroup::describe(elem_t e) const {
    const auto& s = impl_->spec;
    std::ostringstream os;
    switch (s.kind) {
        case GroupSpec::Kind::Symmetric: {
            auto p = lehmer_decode(e, s.letters);
            std::vector<char> seen(s.letters, 0);
            bool any = false;
            for (std::uint32_t i = 0; i < s.letters; ++i) {
                if (seen[i] || p[i] == i) continue;
                os << '(';
                std::uint32_t x = i;
                bool first = true;
                while (!seen[x]) {
                    seen[x] = 1;
                    os << (first ? "" : " ") << x + 1;
                    first = false;
                    x = p[x];
                }
                os << ')';
                any = true;
            }
            if (!any) os << "e";
            return os.str();
        }
        case GroupSpec::Kind::Cyclic:
            return std::to_string(e);
        case GroupSpec::Kind::Abelian: {
            os << '(';
            elem_t x = e;
            for (std::size_t i = 0; i < s.moduli.size(); ++i) {
                os << (i ? "," : "") << x % s.moduli[i];
                x = static_cast<elem_t>(x / s.moduli[i]);
            }
            os << ')';
            return os.str();
        }
        case GroupSpec::Kind::GeneralLinear:
        case GroupSpec::Kind::SpecialLinear: {
            const auto& m = impl_->mats[e];
            os << '[';
            for (std::uint32_t i = 0; i < impl_->dim; ++i) {
                os << (i ? ";" : "");
                for (std::uint32_t j = 0; j < impl_->dim; ++j)
                    os << (j ? "," : "") << static_cast<int>(m[i * impl_->dim + j]);
            }
            os << ']';
            return os.str();
        }
        case GroupSpec::Kind::Lamplighter: {
            std::uint64_t lampspace = impl_->order / s.shift_mod;
            os << '(' << e / lampspace << '|';
            std::uint64_t f = e % lampspace;
            for (std::uint32_t i = 0; i < s.shift_mod; ++i) {
                os << f % s.lamp_mod;
                f /= s.lamp_mod;
            }
            os << ')';
            return os.str();
        }
        case GroupSpec::Kind::Product: {
            os << '(';
            elem_t x = e;
            for (std::size_t i = 0; i < impl_->factors.size(); ++i) {
                const auto& f = impl_->factors[i];
                os << (i ? "," : "") << f.describe(static_cast<elem_t>(x % f.order()));
                x = static_cast<elem_t>(x / f.order());
            }
            os << ')';
            return os.str();
        }
        case GroupSpec::Kind::Cayley:
            if (e < impl_->names.size()) return impl_->names[e];
            return "g" + std::to_string(e);
    }
    return std::to_string(e);
}

std::uint32_t FiniteGroup::determinant_class(elem_t e) const {
    if (impl_->spec.kind != GroupSpec::Kind::GeneralLinear)
        throw ValidationError("group", "determinant_class requires a general_linear group");
    const Fq& F = *impl_->field;
    const std::uint32_t r = impl_->dim;
    const auto& m = impl_->mats[e];
    // determinant by elimination
    std::vector<std::uint32_t> a(m.begin(), m.end());
    std::uint32_t d = 1;
    for (std::uint32_t c = 0; c < r; ++c) {
        std::uint32_t piv = c;
        while (piv < r && a[piv * r + c] == 0) ++piv;
        if (piv == r) return 0;  // cannot happen for group members
        if (piv != c) {
            for (std::uint32_t j = 0; j < r; ++j) std::swap(a[piv * r + j], a[c * r + j]);
            d = F.neg(d);
        }
        d = F.mul(d, a[c * r + c]);
        std::uint32_t ipiv = F.inv(a[c * r + c]);
        for (std::uint32_t i = c + 1; i < r; ++i) {
            if (a[i * r + c] == 0) continue;
            std::uint32_t f = F.mul(a[i * r + c], ipiv);
            for (std::uint32_t j = c; j < r; ++j) a[i * r + j] = F.sub(a[i * r + j], F.mul(f, a[c * r + j]));
        }
    }
    return std::min(d, F.neg(d));
}

std::optional<elem_t> FiniteGroup::element_from_matrix(std::span<const std::uint32_t> rowmajor) const {
    if (impl_->spec.kind != GroupSpec::Kind::GeneralLinear && impl_->spec.kind != GroupSpec::Kind::SpecialLinear)
        return std::nullopt;
    if (rowmajor.size() != static_cast<std::size_t>(impl_->dim) * impl_->dim) return std::nullopt;
    std::uint64_t code = 0;
    for (std::size_t i = rowmajor.size(); i-- > 0;) {
        if (rowmajor[i] >= impl_->field->q()) return std::nullopt;
        code = code * impl_->field->q() + rowmajor[i];
    }
    auto it = impl_->matidx.find(code);
    if (it == impl_->matidx.end()) return std::nullopt;
    return it->second;
}

std::vector<std::uint32_t> FiniteGroup::matrix_of(elem_t e) const {
    if (impl_->spec.kind != GroupSpec::Kind::GeneralLinear && impl_->spec.kind != GroupSpec::Kind::SpecialLinear)
        throw ValidationError("group", "matrix_of requires a matrix group");
    const auto& m = impl_->mats[e];
    return std::vector<std::uint32_t>(m.begin(), m.end());
}

// ----------------------------------------------------------------- Subgroup

bool Subgroup::contains(elem_t e) const { return std::binary_search(members.begin(), members.end(), e); }

Subgroup closure(const FiniteGroup& g, std::span<const elem_t> gens, bool with_witnesses) {
    const std::uint64_t n = g.order();
    for (elem_t x : gens)
        if (x >= n) throw ValidationError("gens", "element id out of range");

    Subgroup s;
    s.owner = g;
    s.gens.assign(gens.begin(), gens.end());

    // stamp-based visited set, reused across calls
    thread_local std::vector<std::uint32_t> stamp;
    thread_local std::uint32_t stamp_val = 0;
    if (stamp.size() < n) stamp.resize(n, 0);
    ++stamp_val;
    if (stamp_val == 0) {  // wrapped
        std::fill(stamp.begin(), stamp.end(), 0);
        stamp_val = 1;
    }

    std::vector<elem_t> frontier{0};
    stamp[0] = stamp_val;
    s.members.push_back(0);
    struct Step {
        elem_t parent;
        std::int32_t letter;
    };
    std::unordered_map<elem_t, Step> parent;

    std::vector<std::pair<elem_t, std::int32_t>> mult;  // (element, signed letter)
    for (std::size_t i = 0; i < gens.size(); ++i) {
        mult.emplace_back(gens[i], static_cast<std::int32_t>(i + 1));
        mult.emplace_back(g.inv(gens[i]), -static_cast<std::int32_t>(i + 1));
    }

    while (!frontier.empty()) {
        std::vector<elem_t> next;
        for (elem_t cur : frontier) {
            for (auto [m, letter] : mult) {
                elem_t nx = g.mul(m, cur);  // left multiplication
                if (stamp[nx] == stamp_val) continue;
                stamp[nx] = stamp_val;
                s.members.push_back(nx);
                if (with_witnesses) parent[nx] = {cur, letter};
                next.push_back(nx);
            }
        }
        frontier = std::move(next);
    }
    std::sort(s.members.begin(), s.members.end());

    if (with_witnesses) {
        for (elem_t m : s.members) {
            Word w;
            elem_t x = m;
            while (x != 0) {
                auto st = parent.at(x);
                w.letters.push_back(st.letter);
                x = st.parent;
            }
            s.witness[m] = std::move(w);
        }
    }
    return s;
}

elem_t evaluate_word(const FiniteGroup& g, std::span<const elem_t> gens, const Word& w) {
    elem_t r = 0;
    for (std::int32_t l : w.letters) {
        std::size_t i = static_cast<std::size_t>(l > 0 ? l : -l) - 1;
        if (i >= gens.size()) throw ValidationError("word", "letter out of range");
        r = g.mul(r, l > 0 ? gens[i] : g.inv(gens[i]));
    }
    return r;
}

bool is_normal(const FiniteGroup& g, const Subgroup& s) {
    for (std::uint64_t x = 0; x < g.order(); ++x)
        for (elem_t m : s.members)
            if (!s.contains(g.conj(static_cast<elem_t>(x), m))) return false;
    return true;
}

bool is_abelian_set(const FiniteGroup& g, std::span<const elem_t> members) {
    for (std::size_t i = 0; i < members.size(); ++i)
        for (std::size_t j = i + 1; j < members.size(); ++j)
            if (g.mul(members[i], members[j]) != g.mul(members[j], members[i])) return false;
    return true;
}

std::pair<FiniteGroup, std::vector<elem_t>> quotient(const FiniteGroup& g, const Subgroup& n) {
    if (!g.same_group(n.owner)) throw ValidationError("subgroup", "subgroup belongs to a different group");
    if (!is_normal(g, n)) throw ValidationError("subgroup", "subgroup is not normal");

    const std::uint64_t go = g.order();
    std::vector<elem_t> proj(go, static_cast<elem_t>(-1));
    std::vector<elem_t> reps;
    for (std::uint64_t x = 0; x < go; ++x) {
        if (proj[x] != static_cast<elem_t>(-1)) continue;
        elem_t c = static_cast<elem_t>(reps.size());
        reps.push_back(static_cast<elem_t>(x));
        for (elem_t m : n.members) proj[g.mul(static_cast<elem_t>(x), m)] = c;
    }
    const std::size_t qo = reps.size();
    if (qo > kTableLimit) throw ValidationError("quotient", "quotient order exceeds table limit");

    GroupSpec qs;
    qs.kind = GroupSpec::Kind::Cayley;
    qs.cayley.assign(qo, std::vector<elem_t>(qo, 0));
    for (std::size_t a = 0; a < qo; ++a)
        for (std::size_t b = 0; b < qo; ++b) qs.cayley[a][b] = proj[g.mul(reps[a], reps[b])];
    qs.cayley_names.reserve(qo);
    for (elem_t r : reps) qs.cayley_names.push_back("[" + g.describe(r) + "]");

    FiniteGroup q = FiniteGroup::build(qs);
    return {q, proj};
}

std::pair<FiniteGroup, std::vector<elem_t>> subgroup_as_group(const FiniteGroup& g,
                                                              const std::vector<elem_t>& members) {
    if (members.empty() || members[0] != 0 || !std::is_sorted(members.begin(), members.end()))
        throw ValidationError("members", "member list must be sorted and contain the identity");
    if (members.size() > kTableLimit) throw ValidationError("members", "subgroup exceeds table limit");
    auto local = [&](elem_t x) {
        auto it = std::lower_bound(members.begin(), members.end(), x);
        if (it == members.end() || *it != x) throw ValidationError("members", "member set is not closed");
        return static_cast<elem_t>(it - members.begin());
    };
    GroupSpec qs;
    qs.kind = GroupSpec::Kind::Cayley;
    qs.cayley.assign(members.size(), std::vector<elem_t>(members.size(), 0));
    for (std::size_t a = 0; a < members.size(); ++a)
        for (std::size_t b = 0; b < members.size(); ++b) qs.cayley[a][b] = local(g.mul(members[a], members[b]));
    qs.cayley_names.reserve(members.size());
    for (elem_t m : members) qs.cayley_names.push_back(g.describe(m));
    return {FiniteGroup::build(qs), members};
}

}  // namespace glab
