// Exact spectra: axis families, product enumeration, zero modes, the
// determinant oracles (path = n, cycle' = n^2), rescale/mass bookkeeping,
// thread-count determinism, and the integer face-count identities.
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "lapzeta/errors.hpp"
#include "lapzeta/spectra.hpp"

using namespace lapzeta;

namespace {
bool close_rel(double a, double b, double tol) {
    return std::abs(a - b) <= tol * std::max({std::abs(a), std::abs(b), 1.0});
}
}  // namespace

TEST_CASE("axis eigenvalue check values") {
    // Dirichlet n=2: {2}; n=3: {1,3} (tridiag(2,-1) of size n-1).
    // 4 sin^2(pi/4) rounds within an ulp of 2, not to 2 exactly.
    {
        const auto e = axis_eigenvalues(2, BoundaryCondition::Dirichlet);
        REQUIRE(e.size() == 1);
        CHECK(close_rel(e[0], 2.0, 1e-15));
    }
    {
        const auto e = axis_eigenvalues(3, BoundaryCondition::Dirichlet);
        REQUIRE(e.size() == 2);
        CHECK(close_rel(e[0], 1.0, 1e-15));
        CHECK(close_rel(e[1], 3.0, 1e-15));
    }
    // Periodic n=3: {0,3,3} (circulant); exact zero first.
    {
        const auto e = axis_eigenvalues(3, BoundaryCondition::Periodic);
        REQUIRE(e.size() == 3);
        CHECK(e[0] == 0.0);
        CHECK(close_rel(e[1], 3.0, 1e-15));
        CHECK(close_rel(e[2], 3.0, 1e-15));
    }
    // Free n=2: {0,2}; free n=1 and periodic n=1: {0}; Dirichlet n=1: {}.
    {
        const auto e = axis_eigenvalues(2, BoundaryCondition::Free);
        REQUIRE(e.size() == 2);
        CHECK(e[0] == 0.0);
        CHECK(close_rel(e[1], 2.0, 1e-15));
    }
    CHECK(axis_eigenvalues(1, BoundaryCondition::Free) ==
          std::vector<double>{0.0});
    CHECK(axis_eigenvalues(1, BoundaryCondition::Periodic) ==
          std::vector<double>{0.0});
    CHECK(axis_eigenvalues(1, BoundaryCondition::Dirichlet).empty());
}

TEST_CASE("axis symmetry: Dirichlet eigenvalues pair to 4") {
    for (std::int64_t n : {4, 9, 64}) {
        const auto e = axis_eigenvalues(n, BoundaryCondition::Dirichlet);
        REQUIRE(std::int64_t(e.size()) == n - 1);
        for (std::size_t q = 0; q < e.size(); ++q) {
            const double partner = e[e.size() - 1 - q];
            CHECK(std::abs((e[q] + partner) - 4.0) <= 1e-14);
        }
    }
}

TEST_CASE("product spectrum: 3x3 Dirichlet enumerates {2,4,4,6}") {
    LatticeSpec spec;
    spec.sizes = {3, 3};
    auto v = product_spectrum(spec).to_vector();
    std::sort(v.begin(), v.end());
    REQUIRE(v.size() == 4);
    CHECK(close_rel(v[0], 2.0, 1e-15));
    CHECK(close_rel(v[1], 4.0, 1e-15));
    CHECK(close_rel(v[2], 4.0, 1e-15));
    CHECK(close_rel(v[3], 6.0, 1e-15));
}

TEST_CASE("product spectrum: periodic n=2 with unit mass is {1,5}") {
    LatticeSpec spec;
    spec.sizes = {2};
    spec.bc = BoundaryCondition::Periodic;
    spec.mass_squared = 1.0;
    auto v = product_spectrum(spec).to_vector();
    std::sort(v.begin(), v.end());
    REQUIRE(v.size() == 2);
    CHECK(close_rel(v[0], 1.0, 1e-15));
    CHECK(close_rel(v[1], 5.0, 1e-15));
}

TEST_CASE("zero-mode detection and flat-index-0 placement") {
    LatticeSpec dirichlet;
    dirichlet.sizes = {4, 4};
    CHECK_FALSE(product_spectrum(dirichlet).has_zero_mode());

    LatticeSpec torus;
    torus.sizes = {4, 4};
    torus.bc = BoundaryCondition::Periodic;
    CHECK(product_spectrum(torus).has_zero_mode());

    // The zero sits at flat index 0 and nowhere else.
    const Spectrum s = product_spectrum(torus);
    std::vector<double> sums(s.total_count());
    s.fill_axis_sums(0, s.total_count(), sums.data());
    CHECK(sums[0] == 0.0);
    CHECK(std::count(sums.begin(), sums.end(), 0.0) == 1);

    torus.mass_squared = 0.5;
    CHECK_FALSE(product_spectrum(torus).has_zero_mode());
}

TEST_CASE("logdet oracles: path determinant n, cycle determinant' n^2") {
    for (std::int64_t n : {2, 3, 5, 17, 64, 1000}) {
        LatticeSpec path;
        path.sizes = {n};
        CHECK(close_rel(logdet_exact(path), std::log(double(n)), 5e-14));

        LatticeSpec cycle;
        cycle.sizes = {n};
        cycle.bc = BoundaryCondition::Periodic;
        LogdetOptions opts;
        opts.exclude_zero_modes = true;
        CHECK(close_rel(logdet_exact(cycle, opts),
                        2.0 * std::log(double(n)), 5e-13));
    }
}

TEST_CASE("logdet throws on an unexcluded zero mode") {
    LatticeSpec torus;
    torus.sizes = {2, 2};
    torus.bc = BoundaryCondition::Periodic;
    CHECK_THROWS_AS((void)logdet_exact(torus), ZeroEigenvalue);
}

TEST_CASE("empty Dirichlet spectra give log of the empty product") {
    LatticeSpec unit;
    unit.sizes = {1};
    CHECK(logdet_exact(unit) == 0.0);
    LatticeSpec mixed;
    mixed.sizes = {1, 3};  // the n=1 axis empties the whole product
    CHECK(logdet_exact(mixed) == 0.0);
}

TEST_CASE("rescale bookkeeping: logdet(u^2 Delta) = logdet + count log u^2") {
    LatticeSpec spec;
    spec.sizes = {5, 7};
    const double plain = logdet_exact(spec);
    spec.rescale = 3.0;
    const double scaled = logdet_exact(spec);
    const double count = 4.0 * 6.0;
    CHECK(close_rel(scaled, plain + count * std::log(9.0), 1e-14));
}

TEST_CASE("mass is added before the rescale") {
    // Eigenvalues u^2 (lambda + msq): for the single-eigenvalue lattice
    // {2}, logdet = log(u^2 (2 + msq)).
    LatticeSpec spec;
    spec.sizes = {2};
    spec.mass_squared = 1.5;
    spec.rescale = 2.0;
    CHECK(close_rel(logdet_exact(spec), std::log(4.0 * 3.5), 1e-15));
}

TEST_CASE("logdet is bit-identical across thread counts") {
    LatticeSpec spec;
    spec.sizes = {100, 100, 100};  // 1e6 eigenvalues (99^3 ~ 9.7e5)
    spec.bc = BoundaryCondition::Periodic;
    spec.mass_squared = 1.0;
    LogdetOptions one, four, eight;
    one.threads = 1;
    four.threads = 4;
    eight.threads = 8;
    const double a = logdet_exact(spec, one);
    const double b = logdet_exact(spec, four);
    const double c = logdet_exact(spec, eight);
    CHECK(a == b);
    CHECK(b == c);
}

TEST_CASE("discrete_theta equals the explicit eigenvalue sum") {
    LatticeSpec spec;
    spec.sizes = {3};
    const double t = 0.2;
    CHECK(close_rel(discrete_theta(spec, t),
                    std::exp(-0.2) + std::exp(-0.6), 1e-14));

    LatticeSpec spec2;
    spec2.sizes = {4, 6};
    spec2.bc = BoundaryCondition::Periodic;
    spec2.mass_squared = 0.3;
    const auto v = product_spectrum(spec2).to_vector();
    double direct = 0.0;
    for (double lam : v) direct += std::exp(-lam * 0.7);
    CHECK(close_rel(discrete_theta(spec2, 0.7), direct, 1e-13));
}

TEST_CASE("discrete_theta guards") {
    LatticeSpec spec;
    spec.sizes = {3};
    CHECK_THROWS_AS((void)discrete_theta(spec, 0.0), NonPositiveT);
    LatticeSpec big;
    big.sizes = {10001, 10001};  // > 1e8 eigenvalues
    big.bc = BoundaryCondition::Periodic;
    CHECK_THROWS_AS((void)discrete_theta(big, 1.0), TooLarge);
}

TEST_CASE("volume vector: V_k = 2^{k-d} e_k") {
    const VolumeVector v = volume_vector({2.0, 3.0});
    REQUIRE(v.v.size() == 3);
    CHECK(v.v[0] == 0.25);          // 2^{-2} * 1
    CHECK(v.v[1] == 2.5);           // 2^{-1} * 5
    CHECK(v.v[2] == 6.0);           // 2^{0} * 6
    const VolumeVector w = volume_vector_sizes({6, 9});
    CHECK(w.v[0] == 0.25);
    CHECK(w.v[1] == 7.5);
    CHECK(w.v[2] == 54.0);
}

TEST_CASE("integer face-count identity prod(n_i - 1) = alternating e_k sum") {
    const std::vector<std::vector<std::int64_t>> cases = {
        {2}, {5}, {3, 4}, {2, 7, 9}, {3, 3, 3, 3}, {2, 3, 4, 5, 6}};
    for (const auto& sizes : cases) {
        const auto e = elementary_symmetric_int(sizes);
        const int d = int(sizes.size());
        std::int64_t lhs = 1;
        for (auto n : sizes) lhs *= (n - 1);
        std::int64_t rhs = 0;
        std::int64_t sign = (d % 2 == 0) ? 1 : -1;  // (-1)^{d-k} at k=0
        for (int k = 0; k <= d; ++k) {
            rhs += sign * e[std::size_t(k)];
            sign = -sign;
        }
        CHECK(lhs == rhs);
    }
}

TEST_CASE("Dirichlet cube logdet equals alternating free-cube combination") {
    for (int d = 1; d <= 3; ++d) {
        for (std::int64_t n : {2, 3, 6}) {
            const auto [lhs, rhs] = dirichlet_free_logdet_relation(d, n);
            CHECK(close_rel(lhs, rhs, 1e-12));
        }
    }
}
