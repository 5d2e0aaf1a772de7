#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "evoclass/algebra.hpp"

namespace evoclass {

/// Isomorphism invariants used to skip hopeless searches.
struct Fingerprint {
    std::size_t dim_square = 0;
    std::size_t dim_ann = 0;
    std::size_t asi = 0;
    std::vector<std::size_t> minimal_ideal_dims;
    std::size_t socle_dim = 0;
    std::size_t ssi = 0;
    std::size_t idempotents = 0;

    friend bool operator==(const Fingerprint&, const Fingerprint&) = default;
    friend auto operator<=>(const Fingerprint&, const Fingerprint&) = default;
    std::string to_string() const;
};
Fingerprint fingerprint(const Algebra& a);

struct BruteForceOptions {
    bool use_fingerprint = true;
    /// Reject partial matrices as soon as a fully determined product fails.
    bool prune_partial = true;
};

struct BruteForceResult {
    std::optional<Matrix> witness;  ///< columns are images of the basis of a, in the basis of b
    std::uint64_t candidates = 0;   ///< complete invertible matrices tested
    bool fingerprint_mismatch = false;
};

/// Largest field and dimension accepted by the enumeration engine.
bool brute_force_supported(const FieldSpec& f, std::size_t n);

BruteForceResult brute_force_iso(const Algebra& a, const Algebra& b, const BruteForceOptions& opt = {});
std::vector<Matrix> all_isomorphisms(const Algebra& a, const Algebra& b);
std::vector<Matrix> automorphisms(const Algebra& a);

struct CanonicalForm {
    Algebra algebra;
    Matrix basis;  ///< columns: the basis of a in which the tensor is least
    std::vector<std::uint32_t> key;
};
/// The lexicographically least structure tensor over all bases (GL_n(F_p) orbit minimum).
CanonicalForm canonical_form(const Algebra& a);

/// Visits every matrix of GL_n(F_p) (columns as basis images); stop by returning false.
std::uint64_t for_each_invertible(const FieldSpec& f, std::size_t n, const std::function<bool(const Matrix&)>& visit);

}  // namespace evoclass
