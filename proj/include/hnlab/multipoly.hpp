#ifndef HNLAB_MULTIPOLY_HPP
#define HNLAB_MULTIPOLY_HPP

// Multivariate complex polynomials, trigonometric polynomials on the torus,
// and truncated power series. Coefficient storage for polynomials is a sparse
// map over multi-indices; truncated series are dense over their index box.

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "hnlab/util.hpp"

namespace hnlab {

/// Exponent vector; entries are >= 0 for polynomial exponents. Fourier
/// tables reuse the same type with signed entries.
using MultiIndex = std::vector<int>;

inline int abs_total(const MultiIndex& a) {
    int s = 0;
    for (int v : a) s += std::abs(v);
    return s;
}

inline bool leq_componentwise(const MultiIndex& a, const MultiIndex& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t j = 0; j < a.size(); ++j)
        if (a[j] > b[j]) return false;
    return true;
}

inline MultiIndex sub(const MultiIndex& a, const MultiIndex& b) {
    MultiIndex r(a.size());
    for (std::size_t j = 0; j < a.size(); ++j) r[j] = a[j] - b[j];
    return r;
}

// ---------------------------------------------------------------------------
// IndexBox: the box of multi-indices 0 <= alpha_j <= n_j, iterated in
// lexicographic order.
// ---------------------------------------------------------------------------
class IndexBox {
  public:
    explicit IndexBox(MultiIndex bound) : bound_(std::move(bound)) {
        if (bound_.empty())
            throw std::invalid_argument("IndexBox: dimension must be >= 1");
        for (int v : bound_)
            if (v < 0) throw std::invalid_argument("IndexBox: negative bound entry");
    }

    int dim() const { return static_cast<int>(bound_.size()); }
    const MultiIndex& bound() const { return bound_; }

    std::size_t size() const {
        std::size_t s = 1;
        for (int v : bound_) s *= static_cast<std::size_t>(v + 1);
        return s;
    }

    bool contains(const MultiIndex& a) const {
        if (a.size() != bound_.size()) return false;
        for (std::size_t j = 0; j < a.size(); ++j)
            if (a[j] < 0 || a[j] > bound_[j]) return false;
        return true;
    }

    /// Lexicographic rank (first coordinate most significant).
    std::size_t rank(const MultiIndex& a) const {
        std::size_t r = 0;
        for (std::size_t j = 0; j < a.size(); ++j)
            r = r * static_cast<std::size_t>(bound_[j] + 1) + static_cast<std::size_t>(a[j]);
        return r;
    }

    MultiIndex unrank(std::size_t r) const {
        MultiIndex a(bound_.size());
        for (std::size_t j = bound_.size(); j-- > 0;) {
            std::size_t base = static_cast<std::size_t>(bound_[j] + 1);
            a[j] = static_cast<int>(r % base);
            r /= base;
        }
        return a;
    }

    template <class F>
    void for_each(F&& f) const {
        MultiIndex a(bound_.size(), 0);
        for (;;) {
            f(const_cast<const MultiIndex&>(a));
            std::size_t j = bound_.size();
            while (j-- > 0) {
                if (a[j] < bound_[j]) {
                    ++a[j];
                    std::fill(a.begin() + static_cast<long>(j) + 1, a.end(), 0);
                    break;
                }
                if (j == 0) return;
            }
        }
    }

  private:
    MultiIndex bound_;
};

// ---------------------------------------------------------------------------
// CPoly: sparse multivariate polynomial with complex coefficients. Zero
// coefficients are never stored.
// ---------------------------------------------------------------------------
class CPoly {
  public:
    explicit CPoly(int dim) : dim_(dim) {
        if (dim < 1) throw std::invalid_argument("CPoly: dimension must be >= 1");
    }

    static CPoly constant(int dim, Complex c) {
        CPoly p(dim);
        p.add_term(MultiIndex(static_cast<std::size_t>(dim), 0), c);
        return p;
    }

    static CPoly monomial(int dim, MultiIndex alpha, Complex c) {
        CPoly p(dim);
        p.add_term(std::move(alpha), c);
        return p;
    }

    int dim() const { return dim_; }
    const std::map<MultiIndex, Complex>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    void add_term(MultiIndex alpha, Complex c) {
        if (static_cast<int>(alpha.size()) != dim_)
            throw std::invalid_argument("CPoly::add_term: index dimension mismatch");
        for (int v : alpha)
            if (v < 0) throw std::invalid_argument("CPoly::add_term: negative exponent");
        if (c == Complex{}) return;
        auto it = terms_.find(alpha);
        if (it == terms_.end()) {
            terms_.emplace(std::move(alpha), c);
        } else {
            it->second += c;
            if (it->second == Complex{}) terms_.erase(it);
        }
    }

    Complex coeff(const MultiIndex& alpha) const {
        auto it = terms_.find(alpha);
        return it == terms_.end() ? Complex{} : it->second;
    }

    /// Per-variable degrees; the zero polynomial has multi-degree (0,...,0).
    MultiIndex multi_degree() const {
        MultiIndex n(static_cast<std::size_t>(dim_), 0);
        for (const auto& [a, c] : terms_)
            for (int j = 0; j < dim_; ++j) n[static_cast<std::size_t>(j)] =
                std::max(n[static_cast<std::size_t>(j)], a[static_cast<std::size_t>(j)]);
        return n;
    }

    CPoly operator+(const CPoly& o) const {
        check_dim(o);
        CPoly r = *this;
        for (const auto& [a, c] : o.terms_) r.add_term(a, c);
        return r;
    }

    CPoly operator-(const CPoly& o) const {
        check_dim(o);
        CPoly r = *this;
        for (const auto& [a, c] : o.terms_) r.add_term(a, -c);
        return r;
    }

    CPoly operator*(const CPoly& o) const {
        check_dim(o);
        CPoly r(dim_);
        for (const auto& [a, ca] : terms_)
            for (const auto& [b, cb] : o.terms_) {
                MultiIndex s(a);
                for (int j = 0; j < dim_; ++j) s[static_cast<std::size_t>(j)] += b[static_cast<std::size_t>(j)];
                r.add_term(std::move(s), ca * cb);
            }
        return r;
    }

    CPoly operator*(Complex s) const {
        CPoly r(dim_);
        if (s == Complex{}) return r;
        for (const auto& [a, c] : terms_) r.terms_.emplace(a, c * s);
        return r;
    }

    /// Horner-style evaluation: the sorted term map is consumed as a nested
    /// polynomial in z_1 whose coefficients are polynomials in z_2, ...
    Complex eval(const std::vector<Complex>& z) const {
        if (static_cast<int>(z.size()) != dim_)
            throw std::invalid_argument("CPoly::eval: point dimension mismatch");
        if (terms_.empty()) return {};
        return eval_range(terms_.begin(), terms_.end(), 0, z);
    }

    Complex operator()(const std::vector<Complex>& z) const { return eval(z); }

  private:
    using It = std::map<MultiIndex, Complex>::const_iterator;

    void check_dim(const CPoly& o) const {
        if (o.dim_ != dim_) throw std::invalid_argument("CPoly: dimension mismatch");
    }

    // Terms in [lo, hi) share the exponents at levels < level. Horner over
    // the level-th variable, with pow() bridging exponent gaps.
    static Complex eval_range(It lo, It hi, int level, const std::vector<Complex>& z) {
        const int d = static_cast<int>(z.size());
        if (level == d - 1) {
            Complex acc{};
            int top_exp = std::prev(hi)->first[static_cast<std::size_t>(level)];
            auto it = std::prev(hi);
            int cur = top_exp;
            for (;;) {
                acc += it->second;
                bool first = (it == lo);
                int next_exp = first ? 0 : std::prev(it)->first[static_cast<std::size_t>(level)];
                int gap = cur - next_exp;
                if (first) {
                    if (cur > 0) acc *= pow_int(z[static_cast<std::size_t>(level)], cur);
                    break;
                }
                acc *= pow_int(z[static_cast<std::size_t>(level)], gap);
                --it;
                cur = next_exp;
            }
            return acc;
        }
        // Split [lo, hi) into runs of constant exponent at this level and
        // recurse; runs arrive in increasing exponent order.
        struct Run { int exp; Complex value; };
        std::vector<Run> runs;
        It it = lo;
        while (it != hi) {
            int e = it->first[static_cast<std::size_t>(level)];
            It runEnd = it;
            while (runEnd != hi && runEnd->first[static_cast<std::size_t>(level)] == e) ++runEnd;
            runs.push_back({e, eval_range(it, runEnd, level + 1, z)});
            it = runEnd;
        }
        Complex acc{};
        int cur = runs.back().exp;
        for (std::size_t k = runs.size(); k-- > 0;) {
            acc += runs[k].value;
            int next_exp = (k == 0) ? 0 : runs[k - 1].exp;
            int gap = cur - next_exp;
            if (k == 0) {
                if (cur > 0) acc *= pow_int(z[static_cast<std::size_t>(level)], cur);
                break;
            }
            acc *= pow_int(z[static_cast<std::size_t>(level)], gap);
            cur = next_exp;
        }
        return acc;
    }

    static Complex pow_int(Complex z, int e) {
        Complex r{1.0, 0.0};
        while (e > 0) {
            if (e & 1) r *= z;
            z *= z;
            e >>= 1;
        }
        return r;
    }

    int dim_;
    std::map<MultiIndex, Complex> terms_;
};

inline CPoly operator*(Complex s, const CPoly& p) { return p * s; }

/// Reflection p*(z) = z^n conj(p(1/conj(z))): the coefficient at alpha moves
/// to n - alpha, conjugated. Requires n >= multi-degree(p) componentwise.
inline CPoly reflect(const CPoly& p, const MultiIndex& n) {
    if (static_cast<int>(n.size()) != p.dim())
        throw std::invalid_argument("reflect: dimension mismatch");
    if (!leq_componentwise(p.multi_degree(), n))
        throw std::invalid_argument("reflect: n below the multi-degree of p");
    CPoly r(p.dim());
    for (const auto& [a, c] : p.terms()) r.add_term(sub(n, a), std::conj(c));
    return r;
}

// ---------------------------------------------------------------------------
// TrigPoly: real trigonometric polynomial on T^d,
//   P(xi) = sum_{alpha in box} r_a (conj(xi)^a + xi^a)/2
//                            + rt_a (conj(xi)^a - xi^a)/(2i),
// stored as cos/sin coefficient arrays in lexicographic box order.
// ---------------------------------------------------------------------------
struct TrigPoly {
    int dim = 1;
    IndexBox box;
    std::vector<double> cos_coeff;  // r_alpha
    std::vector<double> sin_coeff;  // r~_alpha

    explicit TrigPoly(IndexBox b)
        : dim(b.dim()), box(std::move(b)),
          cos_coeff(box.size(), 0.0), sin_coeff(box.size(), 0.0) {}

    double& r(const MultiIndex& a) { return cos_coeff[box.rank(a)]; }
    double& rt(const MultiIndex& a) { return sin_coeff[box.rank(a)]; }

    /// Evaluation at a point of T^d. (conj^a + ^a)/2 = Re xi^a and
    /// (conj^a - ^a)/(2i) = -Im xi^a.
    double eval(const std::vector<Complex>& xi) const {
        if (static_cast<int>(xi.size()) != dim)
            throw std::invalid_argument("TrigPoly::eval: point dimension mismatch");
        // Per-axis power tables.
        std::vector<std::vector<Complex>> pows(static_cast<std::size_t>(dim));
        for (int j = 0; j < dim; ++j) {
            int nj = box.bound()[static_cast<std::size_t>(j)];
            auto& t = pows[static_cast<std::size_t>(j)];
            t.resize(static_cast<std::size_t>(nj) + 1);
            t[0] = {1.0, 0.0};
            for (int k = 1; k <= nj; ++k) t[static_cast<std::size_t>(k)] = t[static_cast<std::size_t>(k - 1)] * xi[static_cast<std::size_t>(j)];
        }
        double v = 0.0;
        std::size_t idx = 0;
        box.for_each([&](const MultiIndex& a) {
            Complex m{1.0, 0.0};
            for (int j = 0; j < dim; ++j) m *= pows[static_cast<std::size_t>(j)][static_cast<std::size_t>(a[static_cast<std::size_t>(j)])];
            v += cos_coeff[idx] * m.real() - sin_coeff[idx] * m.imag();
            ++idx;
        });
        return v;
    }

    double operator()(const std::vector<Complex>& xi) const { return eval(xi); }
};

// ---------------------------------------------------------------------------
// PowerSeries: Taylor section on an index box, dense in lexicographic order.
// The truncation box is part of the value.
// ---------------------------------------------------------------------------
class PowerSeries {
  public:
    explicit PowerSeries(IndexBox box)
        : box_(std::move(box)), coeff_(box_.size(), Complex{}) {}

    int dim() const { return box_.dim(); }
    const IndexBox& box() const { return box_; }
    const std::vector<Complex>& coefficients() const { return coeff_; }

    Complex at(const MultiIndex& a) const {
        if (!box_.contains(a)) return {};
        return coeff_[box_.rank(a)];
    }

    void set(const MultiIndex& a, Complex c) {
        if (!box_.contains(a))
            throw std::invalid_argument("PowerSeries::set: index outside the box");
        coeff_[box_.rank(a)] = c;
    }

    Complex constant_term() const { return coeff_[0]; }

    PowerSeries operator+(const PowerSeries& o) const {
        require_same_box(o);
        PowerSeries r(box_);
        for (std::size_t i = 0; i < coeff_.size(); ++i) r.coeff_[i] = coeff_[i] + o.coeff_[i];
        return r;
    }

    PowerSeries operator-(const PowerSeries& o) const {
        require_same_box(o);
        PowerSeries r(box_);
        for (std::size_t i = 0; i < coeff_.size(); ++i) r.coeff_[i] = coeff_[i] - o.coeff_[i];
        return r;
    }

    PowerSeries operator*(Complex s) const {
        PowerSeries r(box_);
        for (std::size_t i = 0; i < coeff_.size(); ++i) r.coeff_[i] = coeff_[i] * s;
        return r;
    }

    /// Dense nested Horner evaluation.
    Complex eval(const std::vector<Complex>& z) const {
        if (static_cast<int>(z.size()) != dim())
            throw std::invalid_argument("PowerSeries::eval: point dimension mismatch");
        return eval_level(0, 0, z);
    }

    Complex operator()(const std::vector<Complex>& z) const { return eval(z); }

  private:
    void require_same_box(const PowerSeries& o) const {
        if (o.box_.bound() != box_.bound())
            throw std::invalid_argument("PowerSeries: box mismatch");
    }

    Complex eval_level(int level, std::size_t offset, const std::vector<Complex>& z) const {
        const auto& n = box_.bound();
        const int d = dim();
        if (level == d - 1) {
            int top = n[static_cast<std::size_t>(level)];
            Complex acc = coeff_[offset + static_cast<std::size_t>(top)];
            for (int k = top - 1; k >= 0; --k)
                acc = acc * z[static_cast<std::size_t>(level)] + coeff_[offset + static_cast<std::size_t>(k)];
            return acc;
        }
        std::size_t stride = 1;
        for (int j = level + 1; j < d; ++j) stride *= static_cast<std::size_t>(n[static_cast<std::size_t>(j)] + 1);
        int top = n[static_cast<std::size_t>(level)];
        Complex acc = eval_level(level + 1, offset + static_cast<std::size_t>(top) * stride, z);
        for (int k = top - 1; k >= 0; --k)
            acc = acc * z[static_cast<std::size_t>(level)] + eval_level(level + 1, offset + static_cast<std::size_t>(k) * stride, z);
        return acc;
    }

    IndexBox box_;
    std::vector<Complex> coeff_;
};

/// Taylor section of a polynomial: coefficients inside the box, rest dropped.
inline PowerSeries truncate(const CPoly& p, const IndexBox& box) {
    if (p.dim() != box.dim())
        throw std::invalid_argument("truncate: dimension mismatch");
    PowerSeries s(box);
    for (const auto& [a, c] : p.terms())
        if (box.contains(a)) s.set(a, c);
    return s;
}

/// Product truncated to the box (convolution over sub-indices).
inline PowerSeries series_multiply(const PowerSeries& a, const PowerSeries& b,
                                   const IndexBox& box) {
    if (a.dim() != b.dim() || a.dim() != box.dim())
        throw std::invalid_argument("series_multiply: dimension mismatch");
    PowerSeries r(box);
    box.for_each([&](const MultiIndex& alpha) {
        Complex acc{};
        IndexBox subbox{alpha};
        subbox.for_each([&](const MultiIndex& beta) {
            acc += a.at(beta) * b.at(sub(alpha, beta));
        });
        r.set(alpha, acc);
    });
    return r;
}

/// Truncated Taylor expansion of numer/denom on the box. Solves the
/// convolution q * denom = numer coefficient-wise in lexicographic order,
/// which refines the componentwise partial order.
inline PowerSeries series_divide(const PowerSeries& numer, const PowerSeries& denom,
                                 const IndexBox& box) {
    if (numer.dim() != denom.dim() || numer.dim() != box.dim())
        throw std::invalid_argument("series_divide: dimension mismatch");
    const Complex d0 = denom.constant_term();
    if (d0 == Complex{})
        throw std::domain_error("series_divide: denominator has zero constant term");
    PowerSeries q(box);
    box.for_each([&](const MultiIndex& alpha) {
        Complex acc = numer.at(alpha);
        IndexBox subbox{alpha};
        subbox.for_each([&](const MultiIndex& beta) {
            if (beta == alpha) return;
            acc -= q.at(beta) * denom.at(sub(alpha, beta));
        });
        q.set(alpha, acc / d0);
    });
    return q;
}

inline PowerSeries series_divide(const CPoly& numer, const CPoly& denom,
                                 const IndexBox& box) {
    return series_divide(truncate(numer, box), truncate(denom, box), box);
}

/// Restriction of a series to a smaller box.
inline PowerSeries truncate_to(const PowerSeries& s, const IndexBox& box) {
    PowerSeries r(box);
    box.for_each([&](const MultiIndex& a) { r.set(a, s.at(a)); });
    return r;
}

namespace detail {

/// d/dz_j of a truncated series, exact on the box shrunk by one along axis j.
inline PowerSeries series_derivative(const PowerSeries& s, int axis, const IndexBox& outBox) {
    PowerSeries r(outBox);
    outBox.for_each([&](const MultiIndex& a) {
        MultiIndex up(a);
        up[static_cast<std::size_t>(axis)] += 1;
        r.set(a, static_cast<double>(up[static_cast<std::size_t>(axis)]) * s.at(up));
    });
    return r;
}

}  // namespace detail

/// Truncated logarithm, principal branch at the constant term. Computed from
/// (log s)' = s'/s one variable at a time: each coefficient with alpha_j >= 1
/// comes from the division along the first such axis, which sidesteps the
/// convergence-radius issues of composing with the scalar log series.
inline PowerSeries series_log(const PowerSeries& s, const IndexBox& box) {
    if (s.dim() != box.dim())
        throw std::invalid_argument("series_log: dimension mismatch");
    const Complex s0 = s.constant_term();
    if (s0 == Complex{})
        throw std::domain_error("series_log: s(0) = 0");
    if (s0.imag() == 0.0 && s0.real() < 0.0)
        throw std::domain_error("series_log: s(0) on the negative real axis");
    const int d = box.dim();
    PowerSeries out(box);
    out.set(MultiIndex(static_cast<std::size_t>(d), 0), std::log(s0));

    // One division per axis, on the box shrunk along that axis.
    std::vector<PowerSeries> ratio;
    ratio.reserve(static_cast<std::size_t>(d));
    for (int j = 0; j < d; ++j) {
        MultiIndex nb = box.bound();
        nb[static_cast<std::size_t>(j)] = std::max(0, nb[static_cast<std::size_t>(j)] - 1);
        IndexBox shrunk(nb);
        ratio.push_back(series_divide(detail::series_derivative(s, j, shrunk),
                                      truncate_to(s, shrunk), shrunk));
    }
    box.for_each([&](const MultiIndex& a) {
        int j = -1;
        for (int k = 0; k < d; ++k)
            if (a[static_cast<std::size_t>(k)] > 0) { j = k; break; }
        if (j < 0) return;  // constant term done
        MultiIndex down(a);
        down[static_cast<std::size_t>(j)] -= 1;
        out.set(a, ratio[static_cast<std::size_t>(j)].at(down) / static_cast<double>(a[static_cast<std::size_t>(j)]));
    });
    return out;
}

/// Truncated exponential, solved from (exp L)' = (exp L) L' in lexicographic
/// order (each coefficient depends only on lexicographically earlier ones).
inline PowerSeries series_exp(const PowerSeries& l, const IndexBox& box) {
    if (l.dim() != box.dim())
        throw std::invalid_argument("series_exp: dimension mismatch");
    const int d = box.dim();
    PowerSeries e(box);
    e.set(MultiIndex(static_cast<std::size_t>(d), 0), std::exp(l.constant_term()));
    box.for_each([&](const MultiIndex& a) {
        int j = -1;
        for (int k = 0; k < d; ++k)
            if (a[static_cast<std::size_t>(k)] > 0) { j = k; break; }
        if (j < 0) return;
        MultiIndex am(a);
        am[static_cast<std::size_t>(j)] -= 1;  // coefficient index of d_j(exp L) being matched
        Complex acc{};
        IndexBox subbox{am};
        subbox.for_each([&](const MultiIndex& beta) {
            MultiIndex g = sub(am, beta);
            g[static_cast<std::size_t>(j)] += 1;
            acc += e.at(beta) * static_cast<double>(g[static_cast<std::size_t>(j)]) * l.at(g);
        });
        e.set(a, acc / static_cast<double>(a[static_cast<std::size_t>(j)]));
    });
    return e;
}

/// Euclidean norm of the coefficient vector of a Taylor section.
inline double taylor_l2(const PowerSeries& s) {
    double acc = 0.0;
    for (const Complex& c : s.coefficients()) acc += std::norm(c);
    return std::sqrt(acc);
}

// ---------------------------------------------------------------------------
// JSON serialization.
//   CPoly:    {"dim": d, "terms": [{"alpha": [...], "re": x, "im": y}, ...]}
//   TrigPoly: {"dim": d, "box": [...], "cos": [...], "sin": [...]}
// Terms are emitted in lexicographic order.
// ---------------------------------------------------------------------------
inline nlohmann::json to_json(const CPoly& p) {
    nlohmann::json terms = nlohmann::json::array();
    for (const auto& [a, c] : p.terms())
        terms.push_back({{"alpha", a}, {"re", c.real()}, {"im", c.imag()}});
    return {{"dim", p.dim()}, {"terms", terms}};
}

inline CPoly cpoly_from_json(const nlohmann::json& j) {
    CPoly p(j.at("dim").get<int>());
    for (const auto& t : j.at("terms")) {
        MultiIndex a = t.at("alpha").get<MultiIndex>();
        p.add_term(std::move(a), Complex{t.at("re").get<double>(),
                                         t.value("im", 0.0)});
    }
    return p;
}

inline nlohmann::json to_json(const TrigPoly& tp) {
    return {{"dim", tp.dim},
            {"box", tp.box.bound()},
            {"cos", tp.cos_coeff},
            {"sin", tp.sin_coeff}};
}

inline TrigPoly trigpoly_from_json(const nlohmann::json& j) {
    TrigPoly tp(IndexBox{j.at("box").get<MultiIndex>()});
    tp.cos_coeff = j.at("cos").get<std::vector<double>>();
    tp.sin_coeff = j.at("sin").get<std::vector<double>>();
    if (tp.cos_coeff.size() != tp.box.size() || tp.sin_coeff.size() != tp.box.size())
        throw std::invalid_argument("TrigPoly JSON: coefficient count mismatch");
    return tp;
}

}  // namespace hnlab

#endif  // HNLAB_MULTIPOLY_HPP
