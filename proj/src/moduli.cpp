#include "evoclass/moduli.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <unordered_map>

#include "evoclass/bruteforce.hpp"

namespace evoclass {

namespace {

struct ActionInfo {
    ActionId id;
    const char* name;
};

constexpr ActionInfo kActions[] = {
    {ActionId::SquareClass, "square-class"},
    {ActionId::MonomialPlane, "monomial-plane"},
    {ActionId::SocleMinimalPair, "socle-minimal-pair"},
    {ActionId::SocleMinimalSingle, "socle-minimal-single"},
    {ActionId::SocleMinimalPairWeighted, "socle-minimal-pair-weighted"},
    {ActionId::SocleMinimalSingleWeighted, "socle-minimal-single-weighted"},
    {ActionId::SocleSplit, "socle-split"},
    {ActionId::SocleSplitWeighted, "socle-split-weighted"},
    {ActionId::TypeISwap, "type-i-swap"},
    {ActionId::AdGroup, "ad-group"},
    {ActionId::AuGroupK0, "au-group-k0"},
    {ActionId::AuGroupK1, "au-group-k1"},
    {ActionId::AwGroup, "aw-group"},
};

[[noreturn]] void bad_element(const std::string& what) { throw Error(ErrorKind::InvalidGroupElement, what); }
[[noreturn]] void bad_shape(const std::string& what) { throw Error(ErrorKind::ShapeMismatch, what); }

bool is_au(ActionId id) { return id == ActionId::AuGroupK0 || id == ActionId::AuGroupK1; }
bool is_form(ActionId id) { return id == ActionId::AdGroup || id == ActionId::AwGroup; }

std::size_t base_dim(const ModuliPoint& x) { return x.base ? x.base->dim() : 0; }

Matrix square_block(const FieldSpec& f, const std::vector<Scalar>& v, std::size_t n) {
    Matrix m(f, n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m(i, j) = v[i * n + j];
    return m;
}

std::vector<Scalar> flatten(const Matrix& m) {
    std::vector<Scalar> out;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) out.push_back(m(i, j));
    return out;
}

Matrix swap_matrix(const FieldSpec& f) {
    Matrix e(f, 2, 2);
    e(0, 1) = e(1, 0) = Scalar::one(f);
    return e;
}

Matrix diag2(const Scalar& a, const Scalar& b) {
    Matrix d(a.field(), 2, 2);
    d(0, 0) = a;
    d(1, 1) = b;
    return d;
}

bool in_w(const Matrix& m) { return !m(0, 1).is_zero() && !m(1, 0).is_zero() && !det(m).is_zero(); }

Matrix block2(const Matrix& m3) {
    Matrix m(m3.field(), 2, 2);
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) m(i, j) = m3(i, j);
    return m;
}

Vec weighted_column(ActionId id, const FieldSpec& f) {
    Vec v{Scalar::one(f), Scalar::one(f)};
    if (id == ActionId::SocleMinimalSingleWeighted) v[1] = Scalar::zero(f);
    return v;
}

Matrix weighted_matrix(ActionId id, const Matrix& m, const Scalar& w) {
    FieldSpec f = w.field();
    Matrix out(f, 3, 3);
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) out(i, j) = m(i, j);
    Vec v = weighted_column(id, f);
    out(0, 2) = v[0];
    out(1, 2) = v[1];
    out(2, 2) = w;
    return out;
}

bool is_symmetric(const Matrix& m) { return m == m.transpose(); }

/// (i, j) -> t(e_i e_j).
Matrix functional_of_product(const Algebra& b, const Vec& t) {
    std::size_t n = b.dim();
    Matrix m(b.field(), n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t l = 0; l < n; ++l) m(i, j) += t[l] * b.c(i, j, l);
    return m;
}

/// (i, j) -> a_i f_j + a_j f_i.
Matrix symmetric_product(const Vec& a, const Vec& f) {
    std::size_t n = a.size();
    Matrix m(a.empty() ? FieldSpec{} : a[0].field(), n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m(i, j) = a[i] * f[j] + a[j] * f[i];
    return m;
}

Vec row_times(const Vec& t, const Matrix& m) {
    Vec out = zero_vec(m.field(), m.cols());
    for (std::size_t j = 0; j < m.cols(); ++j)
        for (std::size_t i = 0; i < m.rows(); ++i) out[j] += t[i] * m(i, j);
    return out;
}

std::size_t scalar_count(ActionId id) {
    switch (id) {
        case ActionId::TypeISwap:
        case ActionId::AuGroupK1:
            return 0;
        case ActionId::MonomialPlane:
        case ActionId::SocleMinimalSingle:
        case ActionId::SocleMinimalSingleWeighted:
            return 2;
        default:
            return 1;
    }
}

bool has_flip(ActionId id) {
    switch (id) {
        case ActionId::MonomialPlane:
        case ActionId::SocleMinimalPair:
        case ActionId::SocleMinimalPairWeighted:
        case ActionId::SocleSplit:
        case ActionId::SocleSplitWeighted:
        case ActionId::TypeISwap:
            return true;
        default:
            return false;
    }
}

/// Index of the scalar required to be a nonzero square, if any.
std::optional<std::size_t> square_scalar(ActionId id) {
    switch (id) {
        case ActionId::SquareClass:
        case ActionId::SocleMinimalPair:
        case ActionId::SocleSplit:
        case ActionId::SocleMinimalSingle:
            return 0;
        default:
            return std::nullopt;
    }
}

std::optional<std::string> defect(const ModuliPoint& x) {
    if (action_needs_base(x.id) != x.base.has_value())
        return std::string(action_needs_base(x.id) ? "a base algebra is required" : "unexpected base algebra");
    if (x.values.empty()) return std::string("empty payload");
    FieldSpec f = x.values[0].field();
    for (const auto& v : x.values)
        if (!(v.field() == f)) return std::string("mixed fields");
    if (x.base && !(x.base->field() == f)) return std::string("base over a different field");
    auto count = [&](std::size_t k) -> std::optional<std::string> {
        if (x.values.size() != k) return "expected " + std::to_string(k) + " values";
        return std::nullopt;
    };
    switch (x.id) {
        case ActionId::SquareClass:
            if (auto e = count(1)) return e;
            if (x.values[0].is_zero()) return std::string("point must be nonzero");
            return std::nullopt;
        case ActionId::MonomialPlane:
        case ActionId::SocleSplit:
            if (auto e = count(2)) return e;
            if (x.values[0].is_zero() && x.values[1].is_zero()) return std::string("vector must be nonzero");
            return std::nullopt;
        case ActionId::SocleSplitWeighted:
            if (auto e = count(3)) return e;
            if (x.values[0].is_zero() && x.values[1].is_zero()) return std::string("(x, y) must be nonzero");
            if (x.values[2].is_zero()) return std::string("z must be nonzero");
            return std::nullopt;
        case ActionId::SocleMinimalPair:
        case ActionId::SocleMinimalSingle:
            if (auto e = count(4)) return e;
            if (!in_w(x.matrix())) return std::string("matrix not in W");
            return std::nullopt;
        case ActionId::SocleMinimalPairWeighted:
        case ActionId::SocleMinimalSingleWeighted: {
            if (auto e = count(9)) return e;
            Matrix m = x.matrix();
            if (!in_w(block2(m))) return std::string("socle block not in W");
            Vec v = weighted_column(x.id, f);
            if (!(m(0, 2) == v[0]) || !(m(1, 2) == v[1])) return std::string("socle column has the wrong normal form");
            if (!m(2, 0).is_zero() || !m(2, 1).is_zero()) return std::string("last row must vanish off the diagonal");
            if (m(2, 2).is_zero()) return std::string("weight must be nonzero");
            return std::nullopt;
        }
        case ActionId::TypeISwap: {
            if (auto e = count(4)) return e;
            Matrix m = x.matrix();
            if (!m(0, 0).is_one() || !m(1, 1).is_one()) return std::string("diagonal must be 1");
            if (m(0, 1).is_zero() || m(1, 0).is_zero()) return std::string("off-diagonal entries must be nonzero");
            if ((m(0, 1) * m(1, 0)).is_one()) return std::string("x y must differ from 1");
            return std::nullopt;
        }
        case ActionId::AdGroup:
        case ActionId::AwGroup: {
            std::size_t n = base_dim(x);
            if (auto e = count(n * n)) return e;
            if (!is_symmetric(x.matrix())) return std::string("form must be symmetric");
            if (x.id == ActionId::AwGroup) {
                if (x.functional.size() != n) return std::string("functional has the wrong length");
                for (const auto& v : x.functional)
                    if (!(v.field() == f)) return std::string("mixed fields");
            }
            return std::nullopt;
        }
        case ActionId::AuGroupK0:
        case ActionId::AuGroupK1: {
            std::size_t n = base_dim(x);
            if (auto e = count(n * n + n)) return e;
            return std::nullopt;
        }
    }
    return std::string("unknown action");
}

void require_same_set(const ModuliPoint& x, const ModuliPoint& y) {
    validate(x);
    validate(y);
    if (x.id != y.id) bad_shape("points belong to different actions");
    if (!(x.field() == y.field())) bad_shape("points over different fields");
    if (x.values.size() != y.values.size()) bad_shape("payload sizes differ");
    if (x.base != y.base) bad_shape("points over different base algebras");
    if (!(x.functional == y.functional)) bad_shape("points with different functionals");
}

std::vector<Matrix> cached_automorphisms(const Algebra& b) {
    static std::mutex mu;
    static std::map<std::string, std::vector<Matrix>> cache;
    std::string key = b.field().name() + "|" + b.to_string();
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
    }
    std::vector<Matrix> maps;
    if (b.field().is_prime() && brute_force_supported(b.field(), b.dim()))
        maps = automorphisms(b);
    else
        maps = enumerate_isomorphisms(b, b).maps;
    if (maps.empty()) maps.push_back(Matrix::identity(b.field(), b.dim()));
    std::lock_guard<std::mutex> lock(mu);
    cache.emplace(key, maps);
    return maps;
}

/// Automorphisms of the base that the group may use: all of Aut(B), or the stabilizer of the functional.
std::vector<Matrix> group_maps(const ModuliPoint& context) {
    auto maps = cached_automorphisms(*context.base);
    if (context.id != ActionId::AwGroup) return maps;
    std::vector<Matrix> out;
    for (const auto& m : maps)
        if (row_times(context.functional, m) == context.functional) out.push_back(m);
    return out;
}

std::vector<Scalar> nonzero_squares(const FieldSpec& f) {
    std::vector<Scalar> out;
    for (const auto& u : units(f)) {
        Scalar s = u * u;
        if (std::find(out.begin(), out.end(), s) == out.end()) out.push_back(s);
    }
    std::sort(out.begin(), out.end());
    return out;
}

/// All r with r^3 = x.
std::vector<Scalar> cube_roots(const Scalar& x) {
    std::vector<Scalar> out;
    FieldSpec f = x.field();
    if (f.is_prime()) {
        for (const auto& u : units(f))
            if (u * u * u == x) out.push_back(u);
    } else if (auto r = nth_root(x, 3)) {
        out.push_back(*r);
    }
    return out;
}

const ModuliPoint& need_context(ActionId id, const ModuliPoint* context) {
    if (!context || context->id != id || !context->base)
        throw Error(ErrorKind::InvalidArgument, std::string(action_name(id)) + " needs a context point with a base algebra");
    validate(*context);
    return *context;
}

std::uint64_t point_key(const ModuliPoint& x) {
    std::uint64_t key = 0, p = x.field().p;
    for (const auto& v : x.values) key = key * p + v.residue();
    return key;
}

Scalar random_unit(const FieldSpec& f, std::mt19937_64& rng) { return random_scalar(f, rng, true); }

}  // namespace

const char* action_name(ActionId id) {
    for (const auto& a : kActions)
        if (a.id == id) return a.name;
    return "unknown";
}

ActionId parse_action(const std::string& s) {
    for (const auto& a : kActions)
        if (s == a.name) return a.id;
    throw Error(ErrorKind::ParseError, "unknown action '" + s + "'");
}

std::vector<ActionId> all_actions() {
    std::vector<ActionId> out;
    for (const auto& a : kActions) out.push_back(a.id);
    return out;
}

bool action_needs_base(ActionId id) { return is_au(id) || is_form(id); }

FieldSpec ModuliPoint::field() const {
    if (!values.empty()) return values[0].field();
    if (base) return base->field();
    return FieldSpec::rationals();
}

Matrix ModuliPoint::matrix() const {
    FieldSpec f = field();
    switch (id) {
        case ActionId::SocleMinimalPair:
        case ActionId::SocleMinimalSingle:
        case ActionId::TypeISwap:
            if (values.size() != 4) bad_shape("expected a 2x2 payload");
            return square_block(f, values, 2);
        case ActionId::SocleMinimalPairWeighted:
        case ActionId::SocleMinimalSingleWeighted:
            if (values.size() != 9) bad_shape("expected a 3x3 payload");
            return square_block(f, values, 3);
        case ActionId::AdGroup:
        case ActionId::AwGroup:
        case ActionId::AuGroupK0:
        case ActionId::AuGroupK1: {
            std::size_t n = base_dim(*this);
            if (values.size() < n * n) bad_shape("payload too short");
            return square_block(f, values, n);
        }
        default:
            bad_shape(std::string(action_name(id)) + " points are not matrices");
    }
}

Vec ModuliPoint::b0() const {
    if (!is_au(id)) bad_shape("b0 is only defined for Au points");
    std::size_t n = base_dim(*this);
    if (values.size() != n * n + n) bad_shape("payload has the wrong length");
    return Vec(values.begin() + static_cast<std::ptrdiff_t>(n * n), values.end());
}

ModuliPoint ModuliPoint::of_values(ActionId id, std::vector<Scalar> values) {
    ModuliPoint x;
    x.id = id;
    x.values = std::move(values);
    validate(x);
    return x;
}

ModuliPoint ModuliPoint::of_matrix(ActionId id, const Matrix& m) { return of_values(id, flatten(m)); }

ModuliPoint ModuliPoint::ad(const Algebra& b, const Matrix& form) {
    ModuliPoint x;
    x.id = ActionId::AdGroup;
    x.base = b;
    x.values = flatten(form);
    validate(x);
    return x;
}

ModuliPoint ModuliPoint::au(const Algebra& b, const Matrix& phi, const Vec& b0, bool k0_one) {
    ModuliPoint x;
    x.id = k0_one ? ActionId::AuGroupK1 : ActionId::AuGroupK0;
    x.base = b;
    if (phi.rows() != b.dim() || phi.cols() != b.dim() || b0.size() != b.dim()) bad_shape("phi or b0 does not match the base");
    x.values = flatten(phi);
    x.values.insert(x.values.end(), b0.begin(), b0.end());
    validate(x);
    return x;
}

ModuliPoint ModuliPoint::aw(const Algebra& b, const Matrix& form, const Vec& functional) {
    ModuliPoint x;
    x.id = ActionId::AwGroup;
    x.base = b;
    x.values = flatten(form);
    x.functional = functional;
    validate(x);
    return x;
}

bool operator==(const ModuliPoint& a, const ModuliPoint& b) {
    return a.id == b.id && a.values == b.values && a.base == b.base && a.functional == b.functional;
}

void validate(const ModuliPoint& x) {
    if (auto e = defect(x)) bad_shape(std::string(action_name(x.id)) + ": " + *e);
}

void validate(const GroupElement& g, const ModuliPoint& x) {
    FieldSpec f = x.field();
    ActionId id = x.id;
    if (g.scalars.size() != scalar_count(id)) bad_element("expected " + std::to_string(scalar_count(id)) + " scalars");
    for (const auto& s : g.scalars) {
        if (!(s.field() == f)) bad_element("scalar over a different field");
        if (s.is_zero()) bad_element("scalars must be nonzero");
    }
    if (auto i = square_scalar(id); i && !is_square(g.scalars[*i])) bad_element("scalar " + g.scalars[*i].to_string() + " is not a square");
    if (g.flip && !has_flip(id)) bad_element("this group has no swap component");
    if (!action_needs_base(id)) {
        if (g.map.rows() != 0 || !g.shift.empty()) bad_element("unexpected map or shift");
        return;
    }
    std::size_t n = base_dim(x);
    if (g.map.rows() != n || g.map.cols() != n || !(g.map.field() == f)) bad_element("map has the wrong shape");
    if (g.shift.size() != n) bad_element("shift has the wrong length");
    for (const auto& s : g.shift)
        if (!(s.field() == f)) bad_element("shift over a different field");
    if (det(g.map).is_zero() || !x.base->is_homomorphism(g.map, *x.base)) bad_element("map is not an automorphism of the base");
    if (id == ActionId::AwGroup && !(row_times(x.functional, g.map) == x.functional)) bad_element("map does not fix the functional");
}

ModuliPoint act(const GroupElement& g, const ModuliPoint& x) {
    validate(x);
    validate(g, x);
    FieldSpec f = x.field();
    ModuliPoint y = x;
    const auto& s = g.scalars;
    auto swap_pair = [&](Scalar a, Scalar b) { return g.flip ? std::pair{b, a} : std::pair{a, b}; };
    switch (x.id) {
        case ActionId::SquareClass:
            y.values[0] = s[0] * x.values[0];
            break;
        case ActionId::MonomialPlane: {
            auto [u, v] = swap_pair(s[0] * x.values[0], s[1] * x.values[1]);
            y.values = {u, v};
            break;
        }
        case ActionId::SocleSplit: {
            auto [u, v] = swap_pair(x.values[0], x.values[1]);
            y.values = {s[0] * u, s[0] * v};
            break;
        }
        case ActionId::SocleSplitWeighted: {
            auto [u, v] = swap_pair(x.values[0], x.values[1]);
            Scalar l2 = s[0] * s[0];
            y.values = {l2 * u, l2 * v, s[0] * x.values[2]};
            break;
        }
        case ActionId::SocleMinimalPair: {
            Matrix m = x.matrix();
            if (g.flip) m = swap_matrix(f) * m * swap_matrix(f);
            y.values = flatten(s[0] * m);
            break;
        }
        case ActionId::SocleMinimalSingle: {
            Matrix m = diag2(s[0], s[1]) * x.matrix() * diag2((s[0] * s[0]).inverse(), (s[1] * s[1]).inverse());
            y.values = flatten(m);
            break;
        }
        case ActionId::SocleMinimalPairWeighted: {
            Matrix full = x.matrix();
            Matrix m = block2(full);
            if (g.flip) m = swap_matrix(f) * m * swap_matrix(f);
            y.values = flatten(weighted_matrix(x.id, (s[0] * s[0]) * m, s[0] * full(2, 2)));
            break;
        }
        case ActionId::SocleMinimalSingleWeighted: {
            Matrix full = x.matrix();
            Scalar a2 = s[0] * s[0];
            Matrix m = diag2(a2, s[1]) * block2(full) * diag2((a2 * a2).inverse(), (s[1] * s[1]).inverse());
            y.values = flatten(weighted_matrix(x.id, m, full(2, 2) / s[0]));
            break;
        }
        case ActionId::TypeISwap:
            if (g.flip) y.values = flatten(x.matrix().transpose());
            break;
        case ActionId::AdGroup: {
            Matrix inv = *inverse(g.map);
            Matrix form = s[0] * x.matrix() + functional_of_product(*x.base, g.shift);
            y.values = flatten(inv.transpose() * form * inv);
            break;
        }
        case ActionId::AwGroup: {
            Matrix inv = *inverse(g.map);
            Matrix form = s[0] * x.matrix() + functional_of_product(*x.base, g.shift) - symmetric_product(g.shift, x.functional);
            y.values = flatten(inv.transpose() * form * inv);
            break;
        }
        case ActionId::AuGroupK0:
        case ActionId::AuGroupK1: {
            // [[theta, c], [0, k]] maps Au(B, phi, b0, k0) onto Au(B, phi', b0', k0).
            Scalar k = x.id == ActionId::AuGroupK0 ? s[0] : Scalar::one(f);
            Scalar k0 = x.id == ActionId::AuGroupK0 ? Scalar::zero(f) : Scalar::one(f);
            const Algebra& b = *x.base;
            const Vec& c = g.shift;
            Matrix inv = *inverse(g.map);
            Matrix phi = k.inverse() * (g.map * x.matrix() * inv - b.left_multiplication(c));
            Vec rest = g.map.apply(x.b0()) + k0 * c - b.multiply(c, c) - (Scalar::from_int(f, 2) * k) * phi.apply(c);
            Vec b0 = (k * k).inverse() * rest;
            y.values = flatten(phi);
            y.values.insert(y.values.end(), b0.begin(), b0.end());
            break;
        }
    }
    validate(y);
    return y;
}

GroupElement compose(const GroupElement& g, const GroupElement& h, const ModuliPoint& context) {
    validate(g, context);
    validate(h, context);
    GroupElement out;
    out.flip = g.flip != h.flip;
    switch (context.id) {
        case ActionId::MonomialPlane: {
            // E^f D E^f' D' = E^(f + f') (E^f' D E^f') D'.
            Scalar a = h.flip ? g.scalars[1] : g.scalars[0];
            Scalar b = h.flip ? g.scalars[0] : g.scalars[1];
            out.scalars = {a * h.scalars[0], b * h.scalars[1]};
            return out;
        }
        case ActionId::AdGroup:
        case ActionId::AwGroup:
            out.scalars = {g.scalars[0] * h.scalars[0]};
            out.map = g.map * h.map;
            out.shift = g.scalars[0] * h.shift + row_times(g.shift, h.map);
            return out;
        case ActionId::AuGroupK0:
            out.scalars = {g.scalars[0] * h.scalars[0]};
            out.map = g.map * h.map;
            out.shift = g.map.apply(h.shift) + h.scalars[0] * g.shift;
            return out;
        case ActionId::AuGroupK1:
            out.map = g.map * h.map;
            out.shift = g.map.apply(h.shift) + g.shift;
            return out;
        default:
            for (std::size_t i = 0; i < g.scalars.size(); ++i) out.scalars.push_back(g.scalars[i] * h.scalars[i]);
            return out;
    }
}

GroupElement identity_element(const ModuliPoint& context) {
    validate(context);
    FieldSpec f = context.field();
    GroupElement e;
    e.scalars.assign(scalar_count(context.id), Scalar::one(f));
    if (action_needs_base(context.id)) {
        e.map = Matrix::identity(f, base_dim(context));
        e.shift = zero_vec(f, base_dim(context));
    }
    return e;
}

GroupElement inverse(const GroupElement& g, const ModuliPoint& context) {
    validate(g, context);
    GroupElement out;
    out.flip = g.flip;
    switch (context.id) {
        case ActionId::MonomialPlane: {
            // (E^f D)^-1 = E^f (E^f D^-1 E^f).
            Scalar a = g.scalars[0].inverse(), b = g.scalars[1].inverse();
            out.scalars = g.flip ? std::vector<Scalar>{b, a} : std::vector<Scalar>{a, b};
            return out;
        }
        case ActionId::AdGroup:
        case ActionId::AwGroup: {
            Scalar ki = g.scalars[0].inverse();
            out.scalars = {ki};
            out.map = *evoclass::inverse(g.map);
            out.shift = -ki * row_times(g.shift, out.map);
            return out;
        }
        case ActionId::AuGroupK0: {
            Scalar ki = g.scalars[0].inverse();
            out.scalars = {ki};
            out.map = *evoclass::inverse(g.map);
            out.shift = -ki * out.map.apply(g.shift);
            return out;
        }
        case ActionId::AuGroupK1:
            out.map = *evoclass::inverse(g.map);
            out.shift = -Scalar::one(context.field()) * out.map.apply(g.shift);
            return out;
        default:
            for (const auto& s : g.scalars) out.scalars.push_back(s.inverse());
            return out;
    }
}

OrbitDecision same_orbit(const ModuliPoint& x, const ModuliPoint& y) {
    require_same_set(x, y);
    FieldSpec f = x.field();
    OrbitDecision out;
    out.verdict = Verdict::No;
    std::vector<GroupElement> cands;
    auto flips = [&]() { return has_flip(x.id) ? std::vector<bool>{false, true} : std::vector<bool>{false}; };
    auto with = [](std::vector<Scalar> s, bool flip) {
        GroupElement g;
        g.scalars = std::move(s);
        g.flip = flip;
        return g;
    };
    switch (x.id) {
        case ActionId::SquareClass:
            cands.push_back(with({y.values[0] / x.values[0]}, false));
            break;
        case ActionId::MonomialPlane:
            for (bool fl : flips()) {
                Scalar u0 = fl ? x.values[1] : x.values[0], u1 = fl ? x.values[0] : x.values[1];
                if (u0.is_zero() != y.values[0].is_zero() || u1.is_zero() != y.values[1].is_zero()) continue;
                Scalar a = u0.is_zero() ? Scalar::one(f) : y.values[0] / u0;
                Scalar b = u1.is_zero() ? Scalar::one(f) : y.values[1] / u1;
                // g acts by E^f diag(a, b); undo the swap on the scalars.
                cands.push_back(with(fl ? std::vector<Scalar>{b, a} : std::vector<Scalar>{a, b}, fl));
            }
            break;
        case ActionId::SocleSplit:
        case ActionId::SocleSplitWeighted:
            for (bool fl : flips()) {
                Scalar u0 = fl ? x.values[1] : x.values[0], u1 = fl ? x.values[0] : x.values[1];
                if (u0.is_zero() != y.values[0].is_zero() || u1.is_zero() != y.values[1].is_zero()) continue;
                if (x.id == ActionId::SocleSplit) {
                    cands.push_back(with({u0.is_zero() ? y.values[1] / u1 : y.values[0] / u0}, fl));
                } else {
                    cands.push_back(with({y.values[2] / x.values[2]}, fl));
                }
            }
            break;
        case ActionId::SocleMinimalPair:
            for (bool fl : flips()) {
                // Off-diagonal entries are nonzero in W; after the swap the (0, 1) entry of x is m(1, 0).
                Scalar src = fl ? x.matrix()(1, 0) : x.matrix()(0, 1);
                cands.push_back(with({y.matrix()(0, 1) / src}, fl));
            }
            break;
        case ActionId::SocleMinimalPairWeighted:
            for (bool fl : flips()) cands.push_back(with({y.matrix()(2, 2) / x.matrix()(2, 2)}, fl));
            break;
        case ActionId::SocleMinimalSingle: {
            // y01 = a m01 / b^2 and y10 = b m10 / a^2 give b^3 = m10 m01^2 / (y10 y01^2).
            Matrix m = x.matrix(), t = y.matrix();
            for (const auto& b : cube_roots(m(1, 0) * m(0, 1) * m(0, 1) / (t(1, 0) * t(0, 1) * t(0, 1))))
                cands.push_back(with({t(0, 1) * b * b / m(0, 1), b}, false));
            break;
        }
        case ActionId::SocleMinimalSingleWeighted: {
            // w' = w / a, and y10 = b m10 / a^4.
            Matrix m = x.matrix(), t = y.matrix();
            Scalar a = m(2, 2) / t(2, 2);
            Scalar a4 = a * a * a * a;
            cands.push_back(with({a, t(1, 0) * a4 / m(1, 0)}, false));
            break;
        }
        case ActionId::TypeISwap:
            for (bool fl : flips()) cands.push_back(with({}, fl));
            break;
        case ActionId::AdGroup: {
            auto r = ad_form_transport(*x.base, x.matrix(), *y.base, y.matrix());
            if (r.verdict == Verdict::Unknown) out.verdict = Verdict::Unknown;
            if (r.data) cands.push_back(GroupElement{{r.data->k}, false, r.data->beta, r.data->t});
            break;
        }
        case ActionId::AuGroupK0:
        case ActionId::AuGroupK1: {
            auto r = au_transport(adjunction_spec(x), adjunction_spec(y));
            if (r.verdict == Verdict::Unknown) out.verdict = Verdict::Unknown;
            if (r.data) {
                GroupElement g{{}, false, r.data->theta, r.data->c};
                if (x.id == ActionId::AuGroupK0) g.scalars = {r.data->k};
                cands.push_back(g);
            }
            break;
        }
        case ActionId::AwGroup: {
            auto r = aw_transport(adjunction_spec(x), adjunction_spec(y));
            if (r.verdict == Verdict::Unknown) out.verdict = Verdict::Unknown;
            if (r.data) cands.push_back(GroupElement{{r.data->k}, false, r.data->beta, r.data->alpha});
            break;
        }
    }
    for (const auto& g : cands) {
        try {
            validate(g, x);
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::InvalidGroupElement) throw;
            continue;
        }
        if (act(g, x) == y) {
            out.verdict = Verdict::Yes;
            out.witness = g;
            return out;
        }
        if (action_needs_base(x.id)) throw Error(ErrorKind::InternalInconsistency, "orbit witness does not replay");
    }
    return out;
}

std::vector<ModuliPoint> all_points(ActionId id, const FieldSpec& f, const ModuliPoint* context) {
    if (!f.is_prime()) throw Error(ErrorKind::Unsupported, "point sets are enumerated over F_p only");
    std::vector<ModuliPoint> out;
    auto keep = [&](ModuliPoint x) {
        if (!defect(x)) out.push_back(std::move(x));
    };
    ModuliPoint proto;
    proto.id = id;
    if (action_needs_base(id)) {
        const ModuliPoint& c = need_context(id, context);
        proto.base = c.base;
        proto.functional = c.functional;
    }
    Scalar one = Scalar::one(f);
    switch (id) {
        case ActionId::SquareClass:
        case ActionId::MonomialPlane:
        case ActionId::SocleSplit:
        case ActionId::SocleSplitWeighted:
        case ActionId::SocleMinimalPair:
        case ActionId::SocleMinimalSingle: {
            std::size_t k = id == ActionId::SquareClass ? 1 : id == ActionId::SocleSplitWeighted ? 3 : (id == ActionId::SocleMinimalPair || id == ActionId::SocleMinimalSingle) ? 4 : 2;
            for (auto& v : all_vectors(f, k)) {
                proto.values = v;
                keep(proto);
            }
            break;
        }
        case ActionId::SocleMinimalPairWeighted:
        case ActionId::SocleMinimalSingleWeighted:
            for (const auto& v : all_vectors(f, 5)) {
                Matrix m = square_block(f, {v[0], v[1], v[2], v[3]}, 2);
                proto.values = flatten(weighted_matrix(id, m, v[4]));
                keep(proto);
            }
            break;
        case ActionId::TypeISwap:
            for (const auto& v : all_vectors(f, 2)) {
                proto.values = {one, v[0], v[1], one};
                keep(proto);
            }
            break;
        case ActionId::AdGroup:
        case ActionId::AwGroup: {
            std::size_t n = base_dim(proto);
            for (const auto& v : all_vectors(f, n * (n + 1) / 2)) {
                Matrix m(f, n, n);
                std::size_t t = 0;
                for (std::size_t i = 0; i < n; ++i)
                    for (std::size_t j = i; j < n; ++j) m(i, j) = m(j, i) = v[t++];
                proto.values = flatten(m);
                keep(proto);
            }
            break;
        }
        case ActionId::AuGroupK0:
        case ActionId::AuGroupK1: {
            std::size_t n = base_dim(proto);
            for (auto& v : all_vectors(f, n * n + n)) {
                proto.values = v;
                keep(proto);
            }
            break;
        }
    }
    return out;
}

std::vector<GroupElement> all_elements(ActionId id, const FieldSpec& f, const ModuliPoint* context) {
    if (!f.is_prime()) throw Error(ErrorKind::Unsupported, "groups are enumerated over F_p only");
    std::vector<GroupElement> out;
    auto us = units(f);
    auto sq = nonzero_squares(f);
    std::vector<bool> flips = has_flip(id) ? std::vector<bool>{false, true} : std::vector<bool>{false};
    auto push = [&](std::vector<Scalar> s, bool fl) {
        GroupElement g;
        g.scalars = std::move(s);
        g.flip = fl;
        out.push_back(std::move(g));
    };
    switch (id) {
        case ActionId::SquareClass:
            for (const auto& l : sq) push({l}, false);
            break;
        case ActionId::SocleMinimalPair:
        case ActionId::SocleSplit:
            for (const auto& l : sq)
                for (bool fl : flips) push({l}, fl);
            break;
        case ActionId::SocleMinimalPairWeighted:
        case ActionId::SocleSplitWeighted:
            for (const auto& l : us)
                for (bool fl : flips) push({l}, fl);
            break;
        case ActionId::MonomialPlane:
            for (const auto& a : us)
                for (const auto& b : us)
                    for (bool fl : flips) push({a, b}, fl);
            break;
        case ActionId::SocleMinimalSingle:
            for (const auto& a : sq)
                for (const auto& b : us) push({a, b}, false);
            break;
        case ActionId::SocleMinimalSingleWeighted:
            for (const auto& a : us)
                for (const auto& b : us) push({a, b}, false);
            break;
        case ActionId::TypeISwap:
            for (bool fl : flips) push({}, fl);
            break;
        case ActionId::AdGroup:
        case ActionId::AwGroup:
        case ActionId::AuGroupK0:
        case ActionId::AuGroupK1: {
            const ModuliPoint& c = need_context(id, context);
            auto shifts = all_vectors(f, base_dim(c));
            std::vector<Scalar> ks = id == ActionId::AuGroupK1 ? std::vector<Scalar>{} : us;
            for (const auto& m : group_maps(c))
                for (const auto& t : shifts) {
                    if (id == ActionId::AuGroupK1) {
                        out.push_back(GroupElement{{}, false, m, t});
                        continue;
                    }
                    for (const auto& k : ks) out.push_back(GroupElement{{k}, false, m, t});
                }
            break;
        }
    }
    return out;
}

OrbitCount orbit_count(ActionId id, const FieldSpec& f, const ModuliPoint* context) {
    if (!f.is_prime()) throw Error(ErrorKind::Unsupported, "orbit_count needs a finite field");
    auto points = all_points(id, f, context);
    auto group = all_elements(id, f, context);
    std::unordered_map<std::uint64_t, std::size_t> index;
    for (std::size_t i = 0; i < points.size(); ++i) index.emplace(point_key(points[i]), i);
    OrbitCount out;
    const std::size_t unset = SIZE_MAX;
    out.orbit_of.assign(points.size(), unset);
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (out.orbit_of[i] != unset) continue;
        std::size_t orbit = out.count++;
        out.representatives.push_back(points[i]);
        out.orbit_of[i] = orbit;
        for (const auto& g : group) {
            auto it = index.find(point_key(act(g, points[i])));
            if (it == index.end()) throw Error(ErrorKind::InternalInconsistency, "action leaves the point set");
            if (out.orbit_of[it->second] == unset) {
                out.orbit_of[it->second] = orbit;
            } else if (out.orbit_of[it->second] != orbit) {
                throw Error(ErrorKind::InternalInconsistency, "orbits overlap");
            }
        }
    }
    return out;
}

GroupElement random_element(ActionId id, const FieldSpec& f, std::mt19937_64& rng, const ModuliPoint* context) {
    GroupElement g;
    std::size_t k = scalar_count(id);
    for (std::size_t i = 0; i < k; ++i) g.scalars.push_back(random_unit(f, rng));
    if (auto i = square_scalar(id)) g.scalars[*i] *= g.scalars[*i];
    if (has_flip(id)) g.flip = rng() % 2 == 1;
    if (action_needs_base(id)) {
        const ModuliPoint& c = need_context(id, context);
        auto maps = group_maps(c);
        g.map = maps[rng() % maps.size()];
        for (std::size_t i = 0; i < base_dim(c); ++i) g.shift.push_back(random_scalar(f, rng));
    }
    return g;
}

ModuliPoint random_point(ActionId id, const FieldSpec& f, std::mt19937_64& rng, const ModuliPoint* context) {
    ModuliPoint x;
    x.id = id;
    if (action_needs_base(id)) {
        const ModuliPoint& c = need_context(id, context);
        x.base = c.base;
        x.functional = c.functional;
    }
    std::size_t n = base_dim(x);
    Scalar one = Scalar::one(f);
    for (int attempt = 0; attempt < 10000; ++attempt) {
        switch (id) {
            case ActionId::SquareClass:
                x.values = {random_scalar(f, rng)};
                break;
            case ActionId::MonomialPlane:
            case ActionId::SocleSplit:
                x.values = {random_scalar(f, rng), random_scalar(f, rng)};
                break;
            case ActionId::SocleSplitWeighted:
                x.values = {random_scalar(f, rng), random_scalar(f, rng), random_scalar(f, rng)};
                break;
            case ActionId::SocleMinimalPair:
            case ActionId::SocleMinimalSingle:
                x.values.clear();
                for (int i = 0; i < 4; ++i) x.values.push_back(random_scalar(f, rng));
                break;
            case ActionId::SocleMinimalPairWeighted:
            case ActionId::SocleMinimalSingleWeighted: {
                Matrix m(f, 2, 2);
                for (std::size_t i = 0; i < 2; ++i)
                    for (std::size_t j = 0; j < 2; ++j) m(i, j) = random_scalar(f, rng);
                x.values = flatten(weighted_matrix(id, m, random_scalar(f, rng)));
                break;
            }
            case ActionId::TypeISwap:
                x.values = {one, random_scalar(f, rng), random_scalar(f, rng), one};
                break;
            case ActionId::AdGroup:
            case ActionId::AwGroup: {
                Matrix m(f, n, n);
                for (std::size_t i = 0; i < n; ++i)
                    for (std::size_t j = i; j < n; ++j) m(i, j) = m(j, i) = random_scalar(f, rng);
                x.values = flatten(m);
                break;
            }
            case ActionId::AuGroupK0:
            case ActionId::AuGroupK1:
                x.values.clear();
                for (std::size_t i = 0; i < n * n + n; ++i) x.values.push_back(random_scalar(f, rng));
                break;
        }
        if (!defect(x)) return x;
    }
    throw Error(ErrorKind::Unsupported, "could not sample a point; the point set may be empty");
}

Matrix structure_matrix(const ModuliPoint& x) {
    validate(x);
    FieldSpec f = x.field();
    Scalar one = Scalar::one(f);
    switch (x.id) {
        case ActionId::SocleMinimalPair:
        case ActionId::SocleMinimalSingle: {
            ActionId w = x.id == ActionId::SocleMinimalPair ? ActionId::SocleMinimalPairWeighted : ActionId::SocleMinimalSingleWeighted;
            return weighted_matrix(w, x.matrix(), Scalar::zero(f));
        }
        case ActionId::SocleMinimalPairWeighted:
        case ActionId::SocleMinimalSingleWeighted:
        case ActionId::TypeISwap:
            return x.matrix();
        case ActionId::SocleSplit:
        case ActionId::SocleSplitWeighted: {
            Matrix m(f, 3, 3);
            m(0, 0) = m(1, 1) = one;
            m(0, 2) = x.values[0];
            m(1, 2) = x.values[1];
            if (x.id == ActionId::SocleSplitWeighted) m(2, 2) = x.values[2];
            return m;
        }
        default:
            throw Error(ErrorKind::InvalidArgument, std::string(action_name(x.id)) + " points have no structure matrix");
    }
}

AdjunctionSpec adjunction_spec(const ModuliPoint& x) {
    validate(x);
    FieldSpec f = x.field();
    switch (x.id) {
        case ActionId::AuGroupK0:
        case ActionId::AuGroupK1:
            return AdjunctionSpec::au(*x.base, x.matrix(), x.b0(), x.id == ActionId::AuGroupK1 ? Scalar::one(f) : Scalar::zero(f));
        case ActionId::AwGroup:
            return AdjunctionSpec::aw(*x.base, x.matrix(), x.functional);
        case ActionId::AdGroup: {
            Matrix m = x.matrix();
            Vec d;
            for (std::size_t i = 0; i < m.rows(); ++i) {
                for (std::size_t j = 0; j < m.cols(); ++j)
                    if (i != j && !m(i, j).is_zero()) throw Error(ErrorKind::IncompatibleForm, "form is not diagonal");
                d.push_back(m(i, i));
            }
            return AdjunctionSpec::ad(*x.base, d);
        }
        default:
            throw Error(ErrorKind::InvalidArgument, std::string(action_name(x.id)) + " points carry no adjunction data");
    }
}

}  // namespace evoclass
