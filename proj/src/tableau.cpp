#include "rlw/tableau.hpp"

#include <cmath>
#include <string>

namespace rlw {

ButcherTableau gauss_tableau(int s) {
    if (s < 1 || s > 3)
        throw ConfigError("gauss_tableau supports 1, 2 or 3 stages, got " + std::to_string(s));
    ButcherTableau t;
    t.s = s;
    t.order = 2 * s;

    if (s == 1) {
        t.a = {0.5};
        t.b = {1.0};
        t.c = {0.5};
        return t;
    }
    if (s == 2) {
        const long double r3 = sqrtl(3.0L);
        t.a = {0.25, static_cast<double>(0.25L - r3 / 6.0L),
               static_cast<double>(0.25L + r3 / 6.0L), 0.25};
        t.b = {0.5, 0.5};
        t.c = {static_cast<double>(0.5L - r3 / 6.0L), static_cast<double>(0.5L + r3 / 6.0L)};
        return t;
    }
    if (s == 3) {
        const long double r15 = sqrtl(15.0L);
        const long double a11 = 5.0L / 36.0L;
        const long double a22 = 2.0L / 9.0L;
        t.a = {static_cast<double>(a11),
               static_cast<double>(a22 - r15 / 15.0L),
               static_cast<double>(a11 - r15 / 30.0L),
               static_cast<double>(a11 + r15 / 24.0L),
               static_cast<double>(a22),
               static_cast<double>(a11 - r15 / 24.0L),
               static_cast<double>(a11 + r15 / 30.0L),
               static_cast<double>(a22 + r15 / 15.0L),
               static_cast<double>(a11)};
        t.b = {static_cast<double>(5.0L / 18.0L), static_cast<double>(4.0L / 9.0L),
               static_cast<double>(5.0L / 18.0L)};
        t.c = {static_cast<double>(0.5L - r15 / 10.0L), 0.5,
               static_cast<double>(0.5L + r15 / 10.0L)};
    }
    return t;
}

double symplectic_residual(const ButcherTableau& t) {
    double worst = 0.0;
    for (int i = 0; i < t.s; ++i)
        for (int j = 0; j < t.s; ++j)
            worst = std::max(worst, std::abs(t.b[i] * t.a_ij(i, j) + t.b[j] * t.a_ij(j, i) -
                                             t.b[i] * t.b[j]));
    return worst;
}

}  // namespace rlw
