#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "hnlab/multipoly.hpp"
#include "hnlab/util.hpp"

using namespace hnlab;
using Cx = Complex;

namespace {

CPoly random_poly(Rng& rng, int dim, int max_deg, int terms) {
    CPoly p(dim);
    for (int t = 0; t < terms; ++t) {
        MultiIndex a(static_cast<std::size_t>(dim));
        for (int j = 0; j < dim; ++j)
            a[static_cast<std::size_t>(j)] = static_cast<int>(rng() % static_cast<std::uint64_t>(max_deg + 1));
        p.add_term(a, Cx{uniform(rng, -1, 1), uniform(rng, -1, 1)});
    }
    return p;
}

}  // namespace

TEST_CASE("index box iteration, rank and cardinality") {
    IndexBox box(MultiIndex{2, 1});
    CHECK(box.size() == 6);
    std::vector<MultiIndex> seen;
    box.for_each([&](const MultiIndex& a) { seen.push_back(a); });
    REQUIRE(seen.size() == 6);
    CHECK(seen.front() == MultiIndex{0, 0});
    CHECK(seen[1] == MultiIndex{0, 1});
    CHECK(seen[2] == MultiIndex{1, 0});
    CHECK(seen.back() == MultiIndex{2, 1});
    for (std::size_t i = 0; i < seen.size(); ++i) {
        CHECK(box.rank(seen[i]) == i);
        CHECK(box.unrank(i) == seen[i]);
    }
    CHECK(box.contains(MultiIndex{2, 1}));
    CHECK_FALSE(box.contains(MultiIndex{3, 0}));
    CHECK_FALSE(box.contains(MultiIndex{0, -1}));
}

TEST_CASE("reflection of polynomials") {
    SUBCASE("constant at degree zero") {
        CPoly p = CPoly::constant(1, Cx{2.0, -3.0});
        CPoly r = reflect(p, MultiIndex{0});
        CHECK(r.coeff(MultiIndex{0}) == Cx{2.0, 3.0});
    }
    SUBCASE("z - a reflects to 1 - conj(a) z") {
        Cx a{0.3, 0.4};
        CPoly p(1);
        p.add_term(MultiIndex{1}, 1.0);
        p.add_term(MultiIndex{0}, -a);
        CPoly r = reflect(p, MultiIndex{1});
        CHECK(r.coeff(MultiIndex{0}) == Cx{1.0, 0.0});
        CHECK(r.coeff(MultiIndex{1}) == -std::conj(a));
    }
    SUBCASE("2 - z1 - z2 reflects to 2 z1 z2 - z2 - z1") {
        CPoly p(2);
        p.add_term(MultiIndex{0, 0}, 2.0);
        p.add_term(MultiIndex{1, 0}, -1.0);
        p.add_term(MultiIndex{0, 1}, -1.0);
        CPoly r = reflect(p, MultiIndex{1, 1});
        CHECK(r.coeff(MultiIndex{1, 1}) == Cx{2.0, 0.0});
        CHECK(r.coeff(MultiIndex{0, 1}) == Cx{-1.0, 0.0});
        CHECK(r.coeff(MultiIndex{1, 0}) == Cx{-1.0, 0.0});
        CHECK(r.coeff(MultiIndex{0, 0}) == Cx{0.0, 0.0});
    }
    SUBCASE("errors") {
        CPoly p(2);
        p.add_term(MultiIndex{1, 0}, 1.0);
        CHECK_THROWS_AS(reflect(p, MultiIndex{1}), std::invalid_argument);
        CHECK_THROWS_AS(reflect(p, MultiIndex{0, 0}), std::invalid_argument);
    }
}

TEST_CASE("reflection involution and torus modulus invariance") {
    Rng rng(7);
    for (int trial = 0; trial < 40; ++trial) {
        int dim = 1 + static_cast<int>(rng() % 3);
        CPoly p = random_poly(rng, dim, 3, 5);
        MultiIndex n = p.multi_degree();
        if (p.is_zero() || p.coeff(n) == Cx{}) continue;
        CPoly back = reflect(reflect(p, n), n);
        for (const auto& [a, c] : p.terms())
            CHECK(std::abs(back.coeff(a) - c) == 0.0);  // exact involution

        // |p*(xi)| = |p(xi)| on the torus
        CPoly star = reflect(p, n);
        for (int s = 0; s < 25; ++s) {
            std::vector<Cx> xi(static_cast<std::size_t>(dim));
            for (auto& x : xi) x = std::polar(1.0, uniform(rng, 0, 2 * kPi));
            CHECK(std::abs(std::abs(star.eval(xi)) - std::abs(p.eval(xi))) < 1e-12);
        }
    }
}

TEST_CASE("series division") {
    SUBCASE("geometric series 1/(1-z)") {
        CPoly one = CPoly::constant(1, 1.0);
        CPoly den(1);
        den.add_term(MultiIndex{0}, 1.0);
        den.add_term(MultiIndex{1}, -1.0);
        PowerSeries q = series_divide(one, den, IndexBox{MultiIndex{3}});
        for (int k = 0; k <= 3; ++k)
            CHECK(std::abs(q.at(MultiIndex{k}) - Cx{1.0, 0.0}) < 1e-15);
    }
    SUBCASE("1/(2-z1-z2) on the unit box") {
        CPoly one = CPoly::constant(2, 1.0);
        CPoly den(2);
        den.add_term(MultiIndex{0, 0}, 2.0);
        den.add_term(MultiIndex{1, 0}, -1.0);
        den.add_term(MultiIndex{0, 1}, -1.0);
        PowerSeries q = series_divide(one, den, IndexBox{MultiIndex{1, 1}});
        CHECK(std::abs(q.at(MultiIndex{0, 0}) - Cx{0.5, 0.0}) < 1e-15);
        CHECK(std::abs(q.at(MultiIndex{1, 0}) - Cx{0.25, 0.0}) < 1e-15);
        CHECK(std::abs(q.at(MultiIndex{0, 1}) - Cx{0.25, 0.0}) < 1e-15);
        CHECK(std::abs(q.at(MultiIndex{1, 1}) - Cx{0.25, 0.0}) < 1e-15);
    }
    SUBCASE("constants divide to the quotient on any box") {
        CPoly c = CPoly::constant(2, Cx{3.0, 1.0});
        CPoly cp = CPoly::constant(2, Cx{0.0, 2.0});
        PowerSeries q = series_divide(c, cp, IndexBox{MultiIndex{2, 2}});
        CHECK(std::abs(q.at(MultiIndex{0, 0}) - Cx{3.0, 1.0} / Cx{0.0, 2.0}) < 1e-15);
        CHECK(std::abs(q.at(MultiIndex{1, 2})) == 0.0);
    }
    SUBCASE("zero constant term rejected") {
        CPoly one = CPoly::constant(1, 1.0);
        CPoly den = CPoly::monomial(1, MultiIndex{1}, 1.0);
        CHECK_THROWS_AS(series_divide(one, den, IndexBox{MultiIndex{2}}), std::domain_error);
    }
}

TEST_CASE("series_divide then multiply-and-truncate is the identity on the box") {
    Rng rng(11);
    for (int trial = 0; trial < 30; ++trial) {
        int dim = 1 + static_cast<int>(rng() % 2);
        MultiIndex bound(static_cast<std::size_t>(dim), 3 + static_cast<int>(rng() % 3));
        IndexBox box(bound);
        CPoly numer = random_poly(rng, dim, 2, 4);
        CPoly denom = random_poly(rng, dim, 2, 4);
        denom.add_term(MultiIndex(static_cast<std::size_t>(dim), 0),
                       Cx{2.0 + uniform01(rng), uniform(rng, -1, 1)});
        if (denom.coeff(MultiIndex(static_cast<std::size_t>(dim), 0)) == Cx{}) continue;
        PowerSeries q = series_divide(numer, denom, box);
        PowerSeries back = series_multiply(q, truncate(denom, box), box);
        PowerSeries expect = truncate(numer, box);
        box.for_each([&](const MultiIndex& a) {
            CHECK(std::abs(back.at(a) - expect.at(a)) < 1e-12);
        });
    }
}

TEST_CASE("series logarithm") {
    SUBCASE("log 1 = 0") {
        CPoly one = CPoly::constant(1, 1.0);
        PowerSeries l = series_log(truncate(one, IndexBox{MultiIndex{4}}), IndexBox{MultiIndex{4}});
        for (int k = 0; k <= 4; ++k) CHECK(std::abs(l.at(MultiIndex{k})) == 0.0);
    }
    SUBCASE("Mercator series of -log(1-z)") {
        CPoly one = CPoly::constant(1, 1.0);
        CPoly den(1);
        den.add_term(MultiIndex{0}, 1.0);
        den.add_term(MultiIndex{1}, -1.0);
        IndexBox box{MultiIndex{3}};
        PowerSeries l = series_log(series_divide(one, den, box), box);
        CHECK(std::abs(l.at(MultiIndex{0})) < 1e-15);
        CHECK(std::abs(l.at(MultiIndex{1}) - Cx{1.0, 0.0}) < 1e-14);
        CHECK(std::abs(l.at(MultiIndex{2}) - Cx{0.5, 0.0}) < 1e-14);
        CHECK(std::abs(l.at(MultiIndex{3}) - Cx{1.0 / 3.0, 0.0}) < 1e-14);
    }
    SUBCASE("log((1+z)/(1-z)) has odd coefficients 2/k") {
        CPoly num(1), den(1);
        num.add_term(MultiIndex{0}, 1.0);
        num.add_term(MultiIndex{1}, 1.0);
        den.add_term(MultiIndex{0}, 1.0);
        den.add_term(MultiIndex{1}, -1.0);
        IndexBox box{MultiIndex{3}};
        PowerSeries l = series_log(series_divide(num, den, box), box);
        CHECK(std::abs(l.at(MultiIndex{1}) - Cx{2.0, 0.0}) < 1e-14);
        CHECK(std::abs(l.at(MultiIndex{2})) < 1e-14);
        CHECK(std::abs(l.at(MultiIndex{3}) - Cx{2.0 / 3.0, 0.0}) < 1e-14);
    }
    SUBCASE("branch errors") {
        IndexBox box{MultiIndex{2}};
        PowerSeries zero(box);
        CHECK_THROWS_AS(series_log(zero, box), std::domain_error);
        PowerSeries neg(box);
        neg.set(MultiIndex{0}, Cx{-1.0, 0.0});
        CHECK_THROWS_AS(series_log(neg, box), std::domain_error);
    }
}

TEST_CASE("exp(series_log(s)) = s on the box") {
    Rng rng(13);
    for (int trial = 0; trial < 25; ++trial) {
        int dim = 1 + static_cast<int>(rng() % 2);
        MultiIndex bound(static_cast<std::size_t>(dim), 4);
        IndexBox box(bound);
        CPoly s = random_poly(rng, dim, 3, 5);
        s.add_term(MultiIndex(static_cast<std::size_t>(dim), 0), Cx{3.0, uniform(rng, -1, 1)});
        PowerSeries st = truncate(s, box);
        if (st.constant_term() == Cx{}) continue;
        PowerSeries l = series_log(st, box);
        PowerSeries back = series_exp(l, box);
        box.for_each([&](const MultiIndex& a) {
            CHECK(std::abs(back.at(a) - st.at(a)) < 1e-10);
        });
    }
}

TEST_CASE("evaluation") {
    SUBCASE("CPoly at a point") {
        CPoly p(2);
        p.add_term(MultiIndex{0, 0}, 2.0);
        p.add_term(MultiIndex{1, 0}, -1.0);
        p.add_term(MultiIndex{0, 1}, -1.0);
        CHECK(std::abs(p.eval({Cx{1, 0}, Cx{1, 0}})) == 0.0);
        CHECK_THROWS_AS(p.eval({Cx{1, 0}}), std::invalid_argument);
    }
    SUBCASE("TrigPoly sine coefficient gives -sin(theta)") {
        TrigPoly tp{IndexBox{MultiIndex{1}}};
        tp.rt(MultiIndex{1}) = 1.0;
        for (double th : {0.3, 1.2, 4.0}) {
            Cx xi = std::polar(1.0, th);
            CHECK(std::abs(tp.eval({xi}) - (-std::sin(th))) < 1e-14);
        }
    }
    SUBCASE("PowerSeries nested Horner") {
        IndexBox box{MultiIndex{2}};
        PowerSeries s(box);
        s.set(MultiIndex{0}, 1.0);
        s.set(MultiIndex{1}, 1.0);
        s.set(MultiIndex{2}, 1.0);
        CHECK(std::abs(s.eval({Cx{0.5, 0}}) - Cx{1.75, 0.0}) < 1e-15);
    }
    SUBCASE("random agreement between sparse and dense evaluation") {
        Rng rng(17);
        for (int trial = 0; trial < 20; ++trial) {
            int dim = 1 + static_cast<int>(rng() % 3);
            CPoly p = random_poly(rng, dim, 3, 6);
            IndexBox box(p.is_zero() ? MultiIndex(static_cast<std::size_t>(dim), 0) : p.multi_degree());
            PowerSeries s = truncate(p, box);
            std::vector<Cx> z(static_cast<std::size_t>(dim));
            for (auto& v : z) v = Cx{uniform(rng, -0.7, 0.7), uniform(rng, -0.7, 0.7)};
            CHECK(std::abs(p.eval(z) - s.eval(z)) < 1e-12);
        }
    }
}

TEST_CASE("json round trips") {
    CPoly p(2);
    p.add_term(MultiIndex{1, 1}, Cx{2.0, -1.0});
    p.add_term(MultiIndex{0, 1}, Cx{0.0, 3.0});
    CPoly q = cpoly_from_json(to_json(p));
    CHECK(q.dim() == 2);
    CHECK(q.coeff(MultiIndex{1, 1}) == Cx{2.0, -1.0});
    CHECK(q.coeff(MultiIndex{0, 1}) == Cx{0.0, 3.0});

    TrigPoly tp{IndexBox{MultiIndex{1, 1}}};
    tp.r(MultiIndex{0, 0}) = 0.5;
    tp.rt(MultiIndex{1, 1}) = -2.0;
    TrigPoly tq = trigpoly_from_json(to_json(tp));
    for (double th1 : {0.2, 2.2}) {
        for (double th2 : {0.9, 5.0}) {
            std::vector<Cx> xi{std::polar(1.0, th1), std::polar(1.0, th2)};
            CHECK(std::abs(tp.eval(xi) - tq.eval(xi)) == 0.0);
        }
    }
}
