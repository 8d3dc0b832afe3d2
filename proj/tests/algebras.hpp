#pragma once

// Shared builders for the algebras used across the test suites.

#include <random>

#include "nilforge/dga.hpp"
#include "nilforge/symmetry.hpp"

namespace testalg {

using namespace nilforge;
using F = Form<Rational>;

inline Dga<Rational> make_n6() {
    auto gens = make_generators({"b1", "b2", "c1", "c2", "e1", "e2"});
    auto g = [&](int i) { return F::generator(gens, i); };
    std::vector<F> dgen(6, F::zero(gens, 2));
    dgen[4] = Rational(-1) * wedge(g(0), g(2)) + wedge(g(1), g(2)) + wedge(g(0), g(3)) +
              Rational(2) * wedge(g(1), g(3));
    dgen[5] = Rational(2) * wedge(g(0), g(2)) + wedge(g(1), g(2)) + wedge(g(0), g(3)) -
              wedge(g(1), g(3));
    return Dga<Rational>(gens, std::move(dgen));
}

inline Dga<Rational> make_m8() {
    auto gens = make_generators({"a1", "a2", "b1", "b2", "c1", "c2", "e1", "e2"});
    auto g = [&](int i) { return F::generator(gens, i); };
    std::vector<F> dgen(8, F::zero(gens, 2));
    dgen[6] = Rational(-1) * wedge(g(2), g(4)) + wedge(g(3), g(4)) + wedge(g(2), g(5)) +
              Rational(2) * wedge(g(3), g(5));
    dgen[7] = Rational(2) * wedge(g(2), g(4)) + wedge(g(3), g(4)) + wedge(g(2), g(5)) -
              wedge(g(3), g(5));
    return Dga<Rational>(gens, std::move(dgen));
}

inline Dga<Rational> make_t2() {
    return Dga<Rational>::torus(make_generators({"a1", "a2"}));
}

inline Dga<Rational> make_t8() {
    return Dga<Rational>::torus(
        make_generators({"a1", "a2", "b1", "b2", "c1", "c2", "e1", "e2"}));
}

inline Dga<Rational> make_heisenberg3() {
    auto gens = make_generators({"x", "y", "z"});
    std::vector<F> dgen(3, F::zero(gens, 2));
    dgen[2] = wedge(F::generator(gens, 0), F::generator(gens, 1));
    return Dga<Rational>(gens, std::move(dgen));
}

/// Order-three rotation on every generator pair of M (or any algebra whose
/// generators come in consecutive pairs).
inline CyclicAction<Rational> make_rho(const Dga<Rational>& dga) {
    auto gens = dga.gens();
    std::vector<F> images;
    for (int p = 0; p < dga.n() / 2; ++p) {
        int i = 2 * p, j = 2 * p + 1;
        images.push_back(Rational(-1) * F::generator(gens, i) - F::generator(gens, j));
        images.push_back(F::generator(gens, i));
    }
    return CyclicAction<Rational>{Morphism<Rational>(gens, std::move(images)), 3};
}

inline F omega_form(const Dga<Rational>& m8) {
    auto gens = m8.gens();
    auto g = [&](int i) { return F::generator(gens, i); };
    return wedge(g(0), g(1)) + wedge(g(7), g(2)) - wedge(g(6), g(3)) + wedge(g(4), g(5));
}

inline F xi_form(const Dga<Rational>& m8) {
    auto gens = m8.gens();
    auto g = [&](int i) { return F::generator(gens, i); };
    auto w3 = [&](int i, int j, int k) { return wedge(g(i), wedge(g(j), g(k))); };
    // indices: a1 a2 b1 b2 c1 c2 e1 e2 = 0..7
    return Rational(-1, 6) *
           (w3(4, 2, 7) + w3(4, 3, 7) + w3(4, 3, 6) + w3(5, 2, 7) + w3(5, 2, 6) + w3(5, 3, 6));
}

inline F varsigma_form(const Dga<Rational>& m8) {
    auto gens = m8.gens();
    auto g = [&](int i) { return F::generator(gens, i); };
    auto w3 = [&](int i, int j, int k) { return wedge(g(i), wedge(g(j), g(k))); };
    return Rational(1, 3) * (Rational(-1) * (w3(0, 7, 2) + w3(0, 6, 2) + w3(0, 6, 3)) +
                             w3(1, 7, 3) - w3(1, 6, 2));
}

inline F sigma_form(const Dga<Rational>& m8) {
    auto gens = m8.gens();
    auto g = [&](int i) { return F::generator(gens, i); };
    return Rational(2) * wedge(g(0), g(5)) - wedge(g(1), g(4)) + wedge(g(0), g(4)) +
           wedge(g(1), g(5));
}

inline F random_form(std::mt19937_64& rng, const GenSetPtr& gens, int degree, long spread = 3) {
    std::uniform_int_distribution<long> coeff(-spread, spread);
    F out = F::zero(gens, degree);
    for (Mono m : basis_of_degree(*gens, degree)) out.add_term(m, Rational(coeff(rng)));
    return out;
}

/// Random element of the degree-k slice of a complex.
inline F random_in_slice(const Complex<Rational>& c, int k, std::mt19937_64& rng, long spread = 3) {
    std::uniform_int_distribution<long> coeff(-spread, spread);
    F out = F::zero(c.dga().gens(), k);
    for (const F& basis_form : c.slice_basis(k)) out = out + Rational(coeff(rng)) * basis_form;
    return out;
}

/// Random closed form of degree k inside a complex's slice.
inline F random_closed(const Complex<Rational>& c, int k, std::mt19937_64& rng, long spread = 3) {
    std::uniform_int_distribution<long> coeff(-spread, spread);
    F out = F::zero(c.dga().gens(), k);
    for (const auto& v : kernel_basis(c.d_matrix(k))) {
        Rational weight(coeff(rng));
        if (weight.is_zero()) continue;
        out = out + weight * c.from_coords(k, v);
    }
    return out;
}

}  // namespace testalg
