#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include <gmpxx.h>

#include "evoclass/error.hpp"

namespace evoclass {

/// Either the rationals or a prime field F_p.
struct FieldSpec {
    enum class Kind { Rationals, Prime };
    Kind kind = Kind::Rationals;
    std::uint32_t p = 0;

    static FieldSpec rationals() { return {}; }
    static FieldSpec prime(std::uint64_t p);

    bool is_prime() const { return kind == Kind::Prime; }
    bool is_rationals() const { return kind == Kind::Rationals; }
    std::uint32_t characteristic() const { return is_prime() ? p : 0; }
    std::string name() const;

    friend bool operator==(const FieldSpec&, const FieldSpec&) = default;
};

bool is_prime_number(std::uint64_t n);

struct Residue {
    std::uint32_t r = 0;
    std::uint32_t p = 2;
};

class Scalar {
public:
    Scalar() : v_(mpq_class(0)) {}
    explicit Scalar(mpq_class q) : v_(std::move(q)) { std::get<mpq_class>(v_).canonicalize(); }
    Scalar(Residue r) : v_(r) {}

    static Scalar zero(const FieldSpec& f);
    static Scalar one(const FieldSpec& f);
    static Scalar from_int(const FieldSpec& f, long long n);
    /// Accepts "a" or "a/b" with integer a, b.
    static Scalar parse(const FieldSpec& f, const std::string& text);

    FieldSpec field() const;
    bool is_zero() const;
    bool is_one() const;
    bool is_rational() const { return std::holds_alternative<mpq_class>(v_); }

    const mpq_class& rational() const { return std::get<mpq_class>(v_); }
    std::uint32_t residue() const { return std::get<Residue>(v_).r; }

    Scalar operator-() const;
    Scalar inverse() const;
    Scalar pow(long long e) const;

    Scalar& operator+=(const Scalar& o);
    Scalar& operator-=(const Scalar& o);
    Scalar& operator*=(const Scalar& o);
    Scalar& operator/=(const Scalar& o);

    friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
    friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
    friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
    friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }

    friend bool operator==(const Scalar& a, const Scalar& b);
    /// Total order used for canonical forms: residues by representative, rationals by value.
    friend std::strong_ordering operator<=>(const Scalar& a, const Scalar& b);

    std::string to_string() const;

private:
    std::variant<Residue, mpq_class> v_;
    void check_same(const Scalar& o) const;
};

/// A square root if one exists in the field.
std::optional<Scalar> sqrt(const Scalar& x);
bool is_square(const Scalar& x);
/// An n-th root over Q (exact) or F_p (by search), if one exists.
std::optional<Scalar> nth_root(const Scalar& x, unsigned n);

/// All elements of a prime field, in residue order.
std::vector<Scalar> elements(const FieldSpec& f);
/// Nonzero elements of a prime field.
std::vector<Scalar> units(const FieldSpec& f);

/// Random element; over Q small numerator/denominator.
Scalar random_scalar(const FieldSpec& f, std::mt19937_64& rng, bool nonzero = false);

}  // namespace evoclass
