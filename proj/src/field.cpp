#include "evoclass/field.hpp"

#include <cctype>

namespace evoclass {

const char* error_kind_name(ErrorKind k) {
    switch (k) {
    case ErrorKind::DivisionByZero: return "DivisionByZero";
    case ErrorKind::FieldMismatch: return "FieldMismatch";
    case ErrorKind::AmbientMismatch: return "AmbientMismatch";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::NotAnIdeal: return "NotAnIdeal";
    case ErrorKind::NotEvolution: return "NotEvolution";
    case ErrorKind::Unsupported: return "Unsupported";
    case ErrorKind::PreconditionViolated: return "PreconditionViolated";
    case ErrorKind::IncompatibleForm: return "IncompatibleForm";
    case ErrorKind::InvalidGroupElement: return "InvalidGroupElement";
    case ErrorKind::InternalInconsistency: return "InternalInconsistency";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    }
    return "Error";
}

bool is_prime_number(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

FieldSpec FieldSpec::prime(std::uint64_t p) {
    if (p > 65521 || !is_prime_number(p))
        throw Error(ErrorKind::InvalidArgument, "characteristic must be a prime below 2^16, got " + std::to_string(p));
    return {Kind::Prime, static_cast<std::uint32_t>(p)};
}

std::string FieldSpec::name() const { return is_prime() ? "F" + std::to_string(p) : "Q"; }

namespace {

std::uint32_t mod_inv(std::uint32_t a, std::uint32_t p) {
    std::int64_t t = 0, nt = 1, r = p, nr = a;
    while (nr != 0) {
        std::int64_t q = r / nr;
        t -= q * nt; std::swap(t, nt);
        r -= q * nr; std::swap(r, nr);
    }
    if (t < 0) t += p;
    return static_cast<std::uint32_t>(t);
}

std::uint32_t reduce(long long n, std::uint32_t p) {
    long long r = n % static_cast<long long>(p);
    if (r < 0) r += p;
    return static_cast<std::uint32_t>(r);
}

std::uint32_t reduce(const mpz_class& n, std::uint32_t p) {
    mpz_class r = n % p;
    if (r < 0) r += p;
    return static_cast<std::uint32_t>(r.get_ui());
}

}  // namespace

Scalar Scalar::zero(const FieldSpec& f) { return from_int(f, 0); }
Scalar Scalar::one(const FieldSpec& f) { return from_int(f, 1); }

Scalar Scalar::from_int(const FieldSpec& f, long long n) {
    if (f.is_prime()) return Residue{reduce(n, f.p), f.p};
    return Scalar(mpq_class(mpz_class(std::to_string(n))));
}

Scalar Scalar::parse(const FieldSpec& f, const std::string& text) {
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    auto slash = s.find('/');
    std::string num = s.substr(0, slash);
    std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
    auto valid = [](const std::string& t) {
        std::size_t i = (!t.empty() && (t[0] == '-' || t[0] == '+')) ? 1 : 0;
        if (i >= t.size()) return false;
        for (; i < t.size(); ++i)
            if (!std::isdigit(static_cast<unsigned char>(t[i]))) return false;
        return true;
    };
    if (!valid(num) || !valid(den) || (den[0] == '-' || den[0] == '+'))
        throw Error(ErrorKind::ParseError, "bad scalar '" + text + "'");
    mpz_class a(num[0] == '+' ? num.substr(1) : num), b(den);
    if (b == 0) throw Error(ErrorKind::DivisionByZero, "zero denominator in '" + text + "'");
    if (f.is_rationals()) return Scalar(mpq_class(a, b));
    std::uint32_t bb = reduce(b, f.p);
    if (bb == 0) throw Error(ErrorKind::DivisionByZero, "denominator divisible by " + std::to_string(f.p));
    std::uint64_t r = static_cast<std::uint64_t>(reduce(a, f.p)) * mod_inv(bb, f.p) % f.p;
    return Residue{static_cast<std::uint32_t>(r), f.p};
}

FieldSpec Scalar::field() const {
    if (auto* r = std::get_if<Residue>(&v_)) return {FieldSpec::Kind::Prime, r->p};
    return FieldSpec::rationals();
}

bool Scalar::is_zero() const {
    if (auto* r = std::get_if<Residue>(&v_)) return r->r == 0;
    return sgn(std::get<mpq_class>(v_)) == 0;
}

bool Scalar::is_one() const {
    if (auto* r = std::get_if<Residue>(&v_)) return r->r == 1;
    return std::get<mpq_class>(v_) == 1;
}

void Scalar::check_same(const Scalar& o) const {
    if (v_.index() != o.v_.index() ||
        (v_.index() == 0 && std::get<Residue>(v_).p != std::get<Residue>(o.v_).p))
        throw Error(ErrorKind::FieldMismatch, field().name() + " vs " + o.field().name());
}

Scalar Scalar::operator-() const {
    if (auto* r = std::get_if<Residue>(&v_)) return Residue{r->r == 0 ? 0 : r->p - r->r, r->p};
    return Scalar(mpq_class(-std::get<mpq_class>(v_)));
}

Scalar Scalar::inverse() const {
    if (is_zero()) throw Error(ErrorKind::DivisionByZero, "inverse of zero");
    if (auto* r = std::get_if<Residue>(&v_)) return Residue{mod_inv(r->r, r->p), r->p};
    return Scalar(mpq_class(1 / std::get<mpq_class>(v_)));
}

Scalar Scalar::pow(long long e) const {
    Scalar base = e < 0 ? inverse() : *this;
    unsigned long long k = e < 0 ? -static_cast<unsigned long long>(e) : e;
    Scalar acc = one(field());
    while (k) {
        if (k & 1) acc *= base;
        base *= base;
        k >>= 1;
    }
    return acc;
}

Scalar& Scalar::operator+=(const Scalar& o) {
    check_same(o);
    if (auto* r = std::get_if<Residue>(&v_)) {
        std::uint32_t s = r->r + std::get<Residue>(o.v_).r;
        r->r = s >= r->p ? s - r->p : s;
    } else {
        std::get<mpq_class>(v_) += std::get<mpq_class>(o.v_);
    }
    return *this;
}

Scalar& Scalar::operator-=(const Scalar& o) { return *this += -o; }

Scalar& Scalar::operator*=(const Scalar& o) {
    check_same(o);
    if (auto* r = std::get_if<Residue>(&v_)) {
        r->r = static_cast<std::uint32_t>(static_cast<std::uint64_t>(r->r) * std::get<Residue>(o.v_).r % r->p);
    } else {
        std::get<mpq_class>(v_) *= std::get<mpq_class>(o.v_);
    }
    return *this;
}

Scalar& Scalar::operator/=(const Scalar& o) {
    check_same(o);
    return *this *= o.inverse();
}

bool operator==(const Scalar& a, const Scalar& b) {
    a.check_same(b);
    if (auto* r = std::get_if<Residue>(&a.v_)) return r->r == std::get<Residue>(b.v_).r;
    return std::get<mpq_class>(a.v_) == std::get<mpq_class>(b.v_);
}

std::strong_ordering operator<=>(const Scalar& a, const Scalar& b) {
    a.check_same(b);
    if (auto* r = std::get_if<Residue>(&a.v_)) return r->r <=> std::get<Residue>(b.v_).r;
    int c = cmp(std::get<mpq_class>(a.v_), std::get<mpq_class>(b.v_));
    return c < 0 ? std::strong_ordering::less : c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal;
}

std::string Scalar::to_string() const {
    if (auto* r = std::get_if<Residue>(&v_)) return std::to_string(r->r);
    return std::get<mpq_class>(v_).get_str();
}

std::optional<Scalar> nth_root(const Scalar& x, unsigned n) {
    if (n == 0) throw Error(ErrorKind::InvalidArgument, "zeroth root");
    if (x.is_zero() || n == 1) return x;
    if (x.is_rational()) {
        const mpq_class& q = x.rational();
        mpz_class num = q.get_num(), den = q.get_den();
        bool neg = num < 0;
        if (neg) {
            if (n % 2 == 0) return std::nullopt;
            num = -num;
        }
        mpz_class rn, rd;
        if (!mpz_root(rn.get_mpz_t(), num.get_mpz_t(), n)) return std::nullopt;
        if (!mpz_root(rd.get_mpz_t(), den.get_mpz_t(), n)) return std::nullopt;
        if (neg) rn = -rn;
        return Scalar(mpq_class(rn, rd));
    }
    FieldSpec f = x.field();
    for (std::uint32_t r = 1; r < f.p; ++r) {
        Scalar c = Residue{r, f.p};
        if (c.pow(n) == x) return c;
    }
    return std::nullopt;
}

std::optional<Scalar> sqrt(const Scalar& x) { return nth_root(x, 2); }
bool is_square(const Scalar& x) { return sqrt(x).has_value(); }

std::vector<Scalar> elements(const FieldSpec& f) {
    if (!f.is_prime()) throw Error(ErrorKind::Unsupported, "cannot enumerate Q");
    std::vector<Scalar> out;
    for (std::uint32_t r = 0; r < f.p; ++r) out.push_back(Residue{r, f.p});
    return out;
}

std::vector<Scalar> units(const FieldSpec& f) {
    auto all = elements(f);
    all.erase(all.begin());
    return all;
}

Scalar random_scalar(const FieldSpec& f, std::mt19937_64& rng, bool nonzero) {
    for (;;) {
        Scalar s;
        if (f.is_prime()) {
            s = Residue{static_cast<std::uint32_t>(rng() % f.p), f.p};
        } else {
            long long a = static_cast<long long>(rng() % 11) - 5;
            long long b = static_cast<long long>(rng() % 4) + 1;
            s = Scalar(mpq_class(mpz_class(static_cast<long>(a)), mpz_class(static_cast<long>(b))));
        }
        if (!nonzero || !s.is_zero()) return s;
    }
}

}  // namespace evoclass
