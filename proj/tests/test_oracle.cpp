#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

#include "mch/error.hpp"
#include "mch/oracle.hpp"
#include "mch/transition.hpp"

using namespace mch;

namespace {

// Exact nine-oscillator levels, Omega = 1, Omega_0 = 2, hbar = 1.
const double kChainNineExact[20] = {
    10.944060480668, 12.944060480668, 13.057803869484, 13.057803869484, 13.321601993380,
    13.321601993380, 13.589811791733, 13.589811791733, 13.751084748745, 13.751084748745,
    14.944060480668, 15.057803869484, 15.057803869484, 15.171547258300, 15.171547258300,
    15.171547258300, 15.321601993380, 15.321601993380, 15.435345382196, 15.435345382196,
};

// Composite Simpson on [a, b] with an even number of panels.
double simpson(const std::function<double(double)>& f, double a, double b, int panels) {
    const double h = (b - a) / panels;
    double s = f(a) + f(b);
    for (int i = 1; i < panels; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
    return s * h / 3.0;
}

ModelSpec particle(PotentialSpec p) { return ModelSpec::particle(std::move(p), {}, TimeWindow{1.0, 64}); }

}  // namespace

TEST_CASE("nine-oscillator chain reproduces the reference exact levels") {
    const auto spec = chain_levels(ChainSpec{9, 1.0, 2.0}, 1.0, 20);
    REQUIRE(spec.levels.size() == 20);
    for (std::size_t i = 0; i < 20; ++i) CHECK(std::abs(spec.levels[i].energy - kChainNineExact[i]) < 1e-9);
    double half_sum = 0.0;
    for (double w : spec.frequencies) half_sum += 0.5 * w;
    CHECK(std::abs(half_sum - 10.944060480668) < 1e-9);
    // E_2 - E_1 is one k = 0 phonon
    CHECK(std::abs(spec.levels[1].energy - spec.levels[0].energy - 2.0) < 1e-12);
}

TEST_CASE("dispersion matches the coupling matrix spectrum") {
    for (int n = 2; n <= 12; ++n) {
        for (const auto& [coupling, onsite] : std::vector<std::pair<double, double>>{{1.0, 2.0}, {0.3, 0.7}, {2.5, 1.0}}) {
            const ChainSpec spec{n, coupling, onsite};
            auto w = chain_frequencies(spec);
            REQUIRE(w.size() == static_cast<std::size_t>(n));
            const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(chain_coupling_matrix(spec));
            std::vector<double> direct;
            for (Eigen::Index i = 0; i < eig.eigenvalues().size(); ++i) direct.push_back(std::sqrt(eig.eigenvalues()(i)));
            std::sort(w.begin(), w.end());
            for (std::size_t i = 0; i < w.size(); ++i) CHECK(std::abs(w[i] - direct[i]) < 1e-12);
        }
    }
}

TEST_CASE("coupling matrix is the quadratic form of the chain potential") {
    const ChainSpec spec{5, 1.3, 0.9};
    const auto model = ModelSpec::chain(spec, {}, TimeWindow{});
    const auto a = chain_coupling_matrix(spec);
    const Eigen::VectorXd q = (Eigen::VectorXd(5) << 0.3, -1.0, 2.0, 0.1, -0.7).finished();
    const std::vector<double> qv(q.data(), q.data() + q.size());
    CHECK(0.5 * q.dot(a * q) == doctest::Approx(*evaluate_potential(model, qv)).epsilon(1e-14));
}

TEST_CASE("momenta and frequencies") {
    CHECK(chain_frequencies(ChainSpec{1, 1.0, 2.0}) == std::vector<double>{2.0});
    for (double w : chain_frequencies(ChainSpec{7, 0.0, 1.5})) CHECK(w == 1.5);
    for (int n = 1; n <= 10; ++n) {
        const ChainSpec spec{n, 1.0, 2.0};
        const auto l = chain_momenta(spec);
        const auto w = chain_frequencies(spec);
        REQUIRE(l.size() == static_cast<std::size_t>(n));
        CHECK(l.front() == -((n - 1) / 2));
        CHECK(l.back() == n / 2);
        for (std::size_t i = 0; i < l.size(); ++i) {
            CHECK(w[i] > 0.0);
            // l -> -l is the same mode (mod N)
            const int mirror = ((-l[i]) % n + n) % n;
            const auto it = std::find_if(l.begin(), l.end(), [&](int m) { return ((m % n) + n) % n == mirror; });
            REQUIRE(it != l.end());
            CHECK(std::abs(w[static_cast<std::size_t>(it - l.begin())] - w[i]) < 1e-14);
        }
    }
    // mass enters as omega^2 / m
    const auto heavy = chain_frequencies(ChainSpec{4, 1.0, 2.0}, 4.0);
    const auto unit = chain_frequencies(ChainSpec{4, 1.0, 2.0});
    for (std::size_t i = 0; i < unit.size(); ++i) CHECK(heavy[i] == doctest::Approx(unit[i] / 2.0));
}

TEST_CASE("chain levels: decoupled pair and occupation bookkeeping") {
    const auto pair = chain_levels(ChainSpec{2, 0.0, 2.0}, 1.0, 6);
    const double expected[] = {2.0, 4.0, 4.0, 6.0, 6.0, 6.0};
    for (std::size_t i = 0; i < 6; ++i) CHECK(pair.levels[i].energy == doctest::Approx(expected[i]));
    CHECK(pair.closes_multiplet);
    CHECK_FALSE(chain_levels(ChainSpec{2, 0.0, 2.0}, 1.0, 2).closes_multiplet);

    for (int n : {3, 4, 9}) {
        const auto s = chain_levels(ChainSpec{n, 1.0, 2.0}, 0.7, 60);
        double zp = 0.0;
        for (double w : s.frequencies) zp += 0.5 * w;
        CHECK(s.levels[0].energy == doctest::Approx(0.7 * zp).epsilon(1e-14));
        for (std::size_t i = 0; i < s.levels.size(); ++i) {
            double e = zp;
            for (std::size_t k = 0; k < s.frequencies.size(); ++k) e += s.levels[i].occupation[k] * s.frequencies[k];
            CHECK(s.levels[i].energy == 0.7 * e);
            if (i > 0) CHECK(s.levels[i].energy >= s.levels[i - 1].energy);
        }
        // distinct occupation multisets
        for (std::size_t i = 0; i < s.levels.size(); ++i)
            for (std::size_t j = 0; j < i; ++j) CHECK(s.levels[i].occupation != s.levels[j].occupation);
    }
}

TEST_CASE("chain levels are complete: brute force over bounded occupations") {
    const ChainSpec spec{3, 1.0, 2.0};
    const auto w = chain_frequencies(spec);
    std::vector<double> brute;
    for (int a = 0; a < 8; ++a)
        for (int b = 0; b < 8; ++b)
            for (int c = 0; c < 8; ++c) brute.push_back(0.5 * (w[0] + w[1] + w[2]) + a * w[0] + b * w[1] + c * w[2]);
    std::sort(brute.begin(), brute.end());
    const auto s = chain_levels(spec, 1.0, 40);
    for (std::size_t i = 0; i < 40; ++i) CHECK(s.levels[i].energy == doctest::Approx(brute[i]).epsilon(1e-13));
}

TEST_CASE("harmonic kernel: free limit, symmetry, trace and semigroup") {
    const PhysicalParams p{};
    const std::vector<double> a{0.4}, b{-1.1};
    const double t = 1.3;
    const double slow = 1e-6 / t;
    CHECK(exact_kernel(HarmonicKernel{slow}, p, 1, a, b, t) ==
          doctest::Approx(exact_kernel(FreeKernel{}, p, 1, a, b, t)).epsilon(1e-5));
    CHECK(exact_kernel(FreeKernel{}, p, 1, a, b, t) == free_kernel(p, 1, a, b, t));
    CHECK(exact_kernel(HarmonicKernel{1.0}, p, 1, a, b, t) == doctest::Approx(exact_kernel(HarmonicKernel{1.0}, p, 1, b, a, t)).epsilon(1e-15));
    CHECK(exact_kernel(HarmonicKernel{1.0}, p, 1, std::vector{8.0}, std::vector{-8.0}, t) > 0.0);

    for (double omega : {0.5, 1.0, 2.0}) {
        auto diag = [&](double x) { return exact_kernel(HarmonicKernel{omega}, p, 1, std::vector{x}, std::vector{x}, t); };
        const double trace = simpson(diag, -15.0, 15.0, 6000);
        CHECK(trace == doctest::Approx(1.0 / (2.0 * std::sinh(0.5 * omega * t))).epsilon(1e-6));
    }

    for (const KernelKind kind : {KernelKind{FreeKernel{}}, KernelKind{HarmonicKernel{0.8}}}) {
        auto integrand = [&](double y) {
            return exact_kernel(kind, p, 1, a, std::vector{y}, t / 2) * exact_kernel(kind, p, 1, std::vector{y}, b, t / 2);
        };
        CHECK(simpson(integrand, -20.0, 20.0, 8000) == doctest::Approx(exact_kernel(kind, p, 1, a, b, t)).epsilon(1e-6));
    }

    // isotropic D = 2 kernel factorises
    const std::vector<double> a2{0.4, 0.9}, b2{-1.1, 0.2};
    CHECK(exact_kernel(HarmonicKernel{1.0}, p, 2, a2, b2, t) ==
          doctest::Approx(exact_kernel(HarmonicKernel{1.0}, p, 1, std::vector{0.4}, std::vector{-1.1}, t) *
                          exact_kernel(HarmonicKernel{1.0}, p, 1, std::vector{0.9}, std::vector{0.2}, t))
              .epsilon(1e-14));
    CHECK_THROWS_AS(exact_kernel(FreeKernel{}, p, 1, a, b, 0.0), InputError);
}

TEST_CASE("chain kernel") {
    const PhysicalParams p{};
    // no coupling: product of single-oscillator kernels
    const std::vector<double> qa{0.2, -0.5, 1.0}, qb{0.7, 0.1, -0.3};
    double product = 1.0;
    for (std::size_t i = 0; i < 3; ++i)
        product *= exact_kernel(HarmonicKernel{2.0}, p, 1, std::vector{qa[i]}, std::vector{qb[i]}, 1.5);
    CHECK(chain_kernel(ChainSpec{3, 0.0, 2.0}, p, qa, qb, 1.5) == doctest::Approx(product).epsilon(1e-12));

    // coupled pair: trace over the plane equals the partition function
    const ChainSpec pair{2, 1.0, 1.5};
    const double t = 1.0;
    const auto w = chain_frequencies(pair);
    const double z = 1.0 / (4.0 * std::sinh(0.5 * w[0] * t) * std::sinh(0.5 * w[1] * t));
    auto inner = [&](double x) {
        return simpson([&](double y) { return chain_kernel(pair, p, std::vector{x, y}, std::vector{x, y}, t); }, -8.0,
                       8.0, 800);
    };
    CHECK(simpson(inner, -8.0, 8.0, 800) == doctest::Approx(z).epsilon(1e-6));
    CHECK(chain_kernel(pair, p, std::vector{0.3, 1.0}, std::vector{-0.2, 0.4}, t) ==
          doctest::Approx(chain_kernel(pair, p, std::vector{-0.2, 0.4}, std::vector{0.3, 1.0}, t)).epsilon(1e-14));
}

TEST_CASE("grid oracle: oscillator, box and wall") {
    const auto h = particle(potential::Harmonic1D{1.0});
    const auto levels = grid_hamiltonian_levels(h, GridSpec{{2000}, {-10.0}, {10.0}}, 3);
    CHECK(std::abs(levels.energies[0] - 0.5) < 1e-3);
    CHECK(std::abs(levels.energies[1] - 1.5) < 1e-3);
    CHECK(std::abs(levels.energies[2] - 2.5) < 1e-3);
    CHECK(levels.boundary_ok());
    CHECK_FALSE(grid_hamiltonian_levels(h, GridSpec{{200}, {-2.0}, {2.0}}, 1).boundary_ok());

    const double length = 3.0;
    const auto box = grid_hamiltonian_levels(particle(potential::Zero{}), GridSpec{{2000}, {0.0}, {length}}, 1);
    const double box_exact = std::numbers::pi * std::numbers::pi / (2.0 * length * length);
    CHECK(std::abs(box.energies[0] / box_exact - 1.0) < 1e-3);

    // wall: grid starts on the wall so psi(0) = 0 is the Dirichlet face
    const auto wall = particle(potential::WallLinear{1.0});
    const double coarse = grid_hamiltonian_levels(wall, GridSpec{{999}, {0.0}, {15.0}}, 1).energies[0];
    const double fine = grid_hamiltonian_levels(wall, GridSpec{{1999}, {0.0}, {15.0}}, 1).energies[0];
    const double richardson = (4.0 * fine - coarse) / 3.0;
    MESSAGE("wall ground level " << coarse << " " << fine << " extrapolated " << richardson);
    CHECK(std::abs(fine - coarse) < 1e-3);
    CHECK(std::abs(richardson - fine) < std::abs(fine - coarse));
    // (hbar^2 F^2 / 2m)^{1/3} times the first Airy zero
    CHECK(std::abs(richardson - std::cbrt(0.5) * 2.338107410459767) < 1e-6);
    CHECK(std::abs(fine - 1.8557571) < 1e-4);
}

TEST_CASE("grid oracle converges at second order") {
    const auto h = particle(potential::Harmonic1D{1.0});
    // h = L/(n+1): 99 -> 199 interior points halves the spacing
    const double e1 = grid_hamiltonian_levels(h, GridSpec{{99}, {-10.0}, {10.0}}, 1).energies[0];
    const double e2 = grid_hamiltonian_levels(h, GridSpec{{199}, {-10.0}, {10.0}}, 1).energies[0];
    const double ratio = std::abs(e1 - 0.5) / std::abs(e2 - 0.5);
    MESSAGE("error ratio " << ratio);
    CHECK(ratio >= 3.5);
}

TEST_CASE("grid oracle in two dimensions") {
    const auto iso = particle(potential::Harmonic2D{1.0});
    const auto l = grid_hamiltonian_levels(iso, GridSpec{{40, 40}, {-6.0, -6.0}, {6.0, 6.0}}, 6);
    const double expected[] = {1.0, 2.0, 2.0, 3.0, 3.0, 3.0};
    for (std::size_t i = 0; i < 6; ++i) CHECK(std::abs(l.energies[i] - expected[i]) < 2e-2 * expected[i]);

    // V = (x^2+y^2)/2 + lambda x y has normal modes sqrt(1 +- lambda)
    const double lambda = 0.5;
    const auto coupled = particle(potential::CoupledHarmonic2D{1.0, lambda});
    const auto c = grid_hamiltonian_levels(coupled, GridSpec{{40, 40}, {-6.0, -6.0}, {6.0, 6.0}}, 2);
    const double wp = std::sqrt(1.0 + lambda), wm = std::sqrt(1.0 - lambda);
    CHECK(std::abs(c.energies[0] - 0.5 * (wp + wm)) < 1e-2);
    CHECK(std::abs(c.energies[1] - (0.5 * (wp + wm) + wm)) < 2e-2);

    CHECK_THROWS_AS(grid_hamiltonian_levels(particle(potential::Harmonic3D{}), GridSpec{{5, 5, 5}, {-1, -1, -1}, {1, 1, 1}}, 1),
                    UsageError);
    CHECK_THROWS_AS(grid_hamiltonian_levels(ModelSpec::chain(ChainSpec{2, 1.0, 1.0}, {}, TimeWindow{}),
                                            GridSpec{{5, 5}, {-1, -1}, {1, 1}}, 1),
                    UsageError);
}

TEST_CASE("analytic isotropic oscillator levels") {
    const auto l = harmonic_levels(1.0, 1.0, 3, 10);
    const double expected[] = {1.5, 2.5, 2.5, 2.5, 3.5, 3.5, 3.5, 3.5, 3.5, 3.5};
    for (std::size_t i = 0; i < 10; ++i) CHECK(l[i] == expected[i]);
    CHECK(harmonic_levels(2.0, 0.5, 1, 3) == std::vector<double>{0.5, 1.5, 2.5});
}
