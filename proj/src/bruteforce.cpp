#include "evoclass/bruteforce.hpp"

#include <map>
#include <memory>
#include <mutex>

namespace evoclass {

std::string Fingerprint::to_string() const {
    std::string s = "A2=" + std::to_string(dim_square) + " ann=" + std::to_string(dim_ann) +
                    " asi=" + std::to_string(asi) + " min=[";
    for (std::size_t i = 0; i < minimal_ideal_dims.size(); ++i)
        s += (i ? "," : "") + std::to_string(minimal_ideal_dims[i]);
    return s + "] soc=" + std::to_string(socle_dim) + " ssi=" + std::to_string(ssi) +
           " idem=" + std::to_string(idempotents);
}

bool brute_force_supported(const FieldSpec& f, std::size_t n) {
    if (!f.is_prime() || f.p > 7 || n > 4 || n == 0) return false;
    std::uint64_t q = 1;
    for (std::size_t i = 0; i < n; ++i) q *= f.p;
    return q <= 2401;
}

namespace {

/// F_p^n with vectors encoded as base-p integers.
struct Space {
    std::uint32_t p;
    std::size_t n;
    std::uint32_t q;
    std::vector<std::uint8_t> digits;  // q * n

    Space(std::uint32_t p_, std::size_t n_) : p(p_), n(n_), q(1) {
        for (std::size_t i = 0; i < n; ++i) q *= p;
        digits.resize(static_cast<std::size_t>(q) * n);
        for (std::uint32_t c = 0; c < q; ++c) {
            std::uint32_t x = c;
            for (std::size_t k = 0; k < n; ++k) {
                digits[c * n + k] = static_cast<std::uint8_t>(x % p);
                x /= p;
            }
        }
    }
    std::uint8_t digit(std::uint32_t c, std::size_t k) const { return digits[c * n + k]; }
    std::uint32_t encode(const std::uint32_t* d) const {
        std::uint32_t c = 0;
        for (std::size_t k = n; k-- > 0;) c = c * p + d[k] % p;
        return c;
    }
    std::uint32_t add_scaled(std::uint32_t a, std::uint32_t t, std::uint32_t b) const {
        std::uint32_t d[8];
        for (std::size_t k = 0; k < n; ++k) d[k] = digit(a, k) + t * digit(b, k);
        return encode(d);
    }
};

std::shared_ptr<const Space> space_for(std::uint32_t p, std::size_t n) {
    static std::mutex mu;
    static std::map<std::pair<std::uint32_t, std::size_t>, std::shared_ptr<const Space>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = cache[{p, n}];
    if (!slot) slot = std::make_shared<Space>(p, n);
    return slot;
}

/// Residue tensor plus an optional product table on codes.
struct CodedAlgebra {
    const Space* sp;
    std::vector<std::uint8_t> c;  // n^3
    std::vector<std::uint16_t> table;

    CodedAlgebra(const Algebra& a, const Space& s) : sp(&s) {
        std::size_t n = s.n;
        c.resize(n * n * n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                for (std::size_t k = 0; k < n; ++k) c[(i * n + j) * n + k] = static_cast<std::uint8_t>(a.c(i, j, k).residue());
        if (s.q <= 729) {
            table.resize(static_cast<std::size_t>(s.q) * s.q);
            for (std::uint32_t x = 0; x < s.q; ++x)
                for (std::uint32_t y = x; y < s.q; ++y) {
                    auto v = static_cast<std::uint16_t>(compute(x, y));
                    table[x * s.q + y] = v;
                    table[y * s.q + x] = v;
                }
        }
    }
    std::uint32_t compute(std::uint32_t x, std::uint32_t y) const {
        std::size_t n = sp->n;
        std::uint32_t d[8] = {0, 0, 0, 0, 0, 0, 0, 0};
        for (std::size_t i = 0; i < n; ++i) {
            std::uint32_t xi = sp->digit(x, i);
            if (!xi) continue;
            for (std::size_t j = 0; j < n; ++j) {
                std::uint32_t s = xi * sp->digit(y, j) % sp->p;
                if (!s) continue;
                for (std::size_t k = 0; k < n; ++k) d[k] += s * c[(i * n + j) * n + k];
            }
        }
        return sp->encode(d);
    }
    std::uint32_t mul(std::uint32_t x, std::uint32_t y) const {
        return table.empty() ? compute(x, y) : table[x * sp->q + y];
    }
    /// Image of e_i e_j under the map sending e_k to f[k].
    std::uint32_t image(std::size_t i, std::size_t j, const std::uint32_t* f) const {
        std::size_t n = sp->n;
        std::uint32_t d[8] = {0, 0, 0, 0, 0, 0, 0, 0};
        for (std::size_t k = 0; k < n; ++k) {
            std::uint32_t ck = c[(i * n + j) * n + k];
            if (!ck) continue;
            for (std::size_t t = 0; t < n; ++t) d[t] += ck * sp->digit(f[k], t);
        }
        return sp->encode(d);
    }
};

/// Depth-first search over invertible matrices column by column.
class Search {
public:
    Search(const Space& s, const CodedAlgebra* src, const CodedAlgebra* dst, bool prune)
        : s_(s), src_(src), dst_(dst), checks_(s.n) {
        std::size_t n = s.n;
        if (!src) return;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i; j < n; ++j) {
                std::size_t level = j;
                if (prune) {
                    for (std::size_t k = 0; k < n; ++k)
                        if (src->c[(i * n + j) * n + k]) level = std::max(level, k);
                } else {
                    level = n - 1;
                }
                checks_[level].push_back({i, j});
            }
    }

    std::uint64_t run(const std::function<bool(const std::uint32_t*)>& leaf) {
        leaf_ = &leaf;
        stop_ = false;
        leaves_ = 0;
        std::vector<std::uint32_t> span = {0};
        descend(0, span);
        return leaves_;
    }

private:
    const Space& s_;
    const CodedAlgebra* src_;
    const CodedAlgebra* dst_;
    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> checks_;
    const std::function<bool(const std::uint32_t*)>* leaf_ = nullptr;
    std::uint32_t f_[8] = {};
    bool stop_ = false;
    std::uint64_t leaves_ = 0;

    void descend(std::size_t m, const std::vector<std::uint32_t>& span) {
        std::vector<char> in_span(s_.q, 0);
        for (auto v : span) in_span[v] = 1;
        for (std::uint32_t v = 1; v < s_.q && !stop_; ++v) {
            if (in_span[v]) continue;
            f_[m] = v;
            bool ok = true;
            if (src_)
                for (auto [i, j] : checks_[m])
                    if (src_->image(i, j, f_) != dst_->mul(f_[i], f_[j])) {
                        ok = false;
                        break;
                    }
            if (!ok) {
                if (m + 1 == s_.n) ++leaves_;
                continue;
            }
            if (m + 1 == s_.n) {
                ++leaves_;
                if (!(*leaf_)(f_)) stop_ = true;
                continue;
            }
            std::vector<std::uint32_t> next;
            next.reserve(span.size() * s_.p);
            for (auto u : span)
                for (std::uint32_t t = 0; t < s_.p; ++t) next.push_back(s_.add_scaled(u, t, v));
            descend(m + 1, next);
        }
    }
};

Matrix decode_matrix(const FieldSpec& f, const Space& s, const std::uint32_t* cols) {
    Matrix m(f, s.n, s.n);
    for (std::size_t j = 0; j < s.n; ++j)
        for (std::size_t i = 0; i < s.n; ++i) m(i, j) = Residue{s.digit(cols[j], i), f.p};
    return m;
}

void require_supported(const Algebra& a) {
    if (!brute_force_supported(a.field(), a.dim()))
        throw Error(ErrorKind::Unsupported, "brute force needs F_p with p <= 7 and p^n <= 2401");
}

std::size_t count_idempotents(const Algebra& a) {
    auto sp = space_for(a.field().p, a.dim());
    CodedAlgebra ca(a, *sp);
    std::size_t count = 0;
    for (std::uint32_t x = 1; x < sp->q; ++x)
        if (ca.mul(x, x) == x) ++count;
    return count;
}

}  // namespace

Fingerprint fingerprint(const Algebra& a) {
    require_supported(a);
    Fingerprint fp;
    fp.dim_square = square(a).dim();
    auto ann = ann_series(a);
    fp.dim_ann = ann.chain.size() > 1 ? ann.chain[1].dim() : 0;
    fp.asi = ann.asi;
    auto soc = socle(a);
    for (const auto& m : soc.minimal_ideals) fp.minimal_ideal_dims.push_back(m.dim());
    std::sort(fp.minimal_ideal_dims.begin(), fp.minimal_ideal_dims.end());
    fp.socle_dim = soc.socle.dim();
    fp.ssi = soc.ssi;
    fp.idempotents = count_idempotents(a);
    return fp;
}

BruteForceResult brute_force_iso(const Algebra& a, const Algebra& b, const BruteForceOptions& opt) {
    if (!(a.field() == b.field())) throw Error(ErrorKind::FieldMismatch, "algebras over different fields");
    if (a.dim() != b.dim()) return {};
    require_supported(a);
    BruteForceResult r;
    if (opt.use_fingerprint && !(fingerprint(a) == fingerprint(b))) {
        r.fingerprint_mismatch = true;
        return r;
    }
    auto sp = space_for(a.field().p, a.dim());
    CodedAlgebra ca(a, *sp), cb(b, *sp);
    Search search(*sp, &ca, &cb, opt.prune_partial);
    r.candidates = search.run([&](const std::uint32_t* f) {
        r.witness = decode_matrix(a.field(), *sp, f);
        return false;
    });
    return r;
}

std::vector<Matrix> all_isomorphisms(const Algebra& a, const Algebra& b) {
    if (!(a.field() == b.field())) throw Error(ErrorKind::FieldMismatch, "algebras over different fields");
    std::vector<Matrix> out;
    if (a.dim() != b.dim()) return out;
    if (a.dim() == 0) return {Matrix(a.field(), 0, 0)};
    require_supported(a);
    auto sp = space_for(a.field().p, a.dim());
    CodedAlgebra ca(a, *sp), cb(b, *sp);
    Search search(*sp, &ca, &cb, true);
    search.run([&](const std::uint32_t* f) {
        out.push_back(decode_matrix(a.field(), *sp, f));
        return true;
    });
    return out;
}

std::vector<Matrix> automorphisms(const Algebra& a) { return all_isomorphisms(a, a); }

CanonicalForm canonical_form(const Algebra& a) {
    require_supported(a);
    auto sp = space_for(a.field().p, a.dim());
    CodedAlgebra ca(a, *sp);
    std::size_t n = sp->n;
    std::vector<std::uint32_t> best, key(n * (n + 1) / 2);
    std::vector<std::uint32_t> best_cols(n);
    std::vector<std::uint32_t> coord(sp->q);
    Search search(*sp, nullptr, nullptr, false);
    search.run([&](const std::uint32_t* f) {
        // coord[v] = coordinates of v in the basis f, encoded.
        for (std::uint32_t c = 0; c < sp->q; ++c) {
            std::uint32_t d[8] = {0, 0, 0, 0, 0, 0, 0, 0};
            for (std::size_t k = 0; k < n; ++k) {
                std::uint32_t ck = sp->digit(c, k);
                if (!ck) continue;
                for (std::size_t t = 0; t < n; ++t) d[t] += ck * sp->digit(f[k], t);
            }
            coord[sp->encode(d)] = c;
        }
        std::size_t idx = 0;
        bool better = best.empty(), decided = best.empty();
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i; j < n; ++j, ++idx) {
                key[idx] = coord[ca.mul(f[i], f[j])];
                if (!decided && key[idx] != best[idx]) {
                    decided = true;
                    better = key[idx] < best[idx];
                    if (!better) return true;
                }
            }
        if (better) {
            best = key;
            best_cols.assign(f, f + n);
        }
        return true;
    });
    Matrix basis = decode_matrix(a.field(), *sp, best_cols.data());
    return {a.change_basis(basis), basis, best};
}

std::uint64_t for_each_invertible(const FieldSpec& f, std::size_t n, const std::function<bool(const Matrix&)>& visit) {
    if (!brute_force_supported(f, n)) throw Error(ErrorKind::Unsupported, "GL_n enumeration budget");
    auto sp = space_for(f.p, n);
    Search search(*sp, nullptr, nullptr, false);
    return search.run([&](const std::uint32_t* cols) { return visit(decode_matrix(f, *sp, cols)); });
}

}  // namespace evoclass
