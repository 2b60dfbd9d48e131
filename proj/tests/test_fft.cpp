#include <catch_amalgamated.hpp>

#include "flab/fft.hpp"
#include "flab/rng.hpp"

using namespace flab;

TEST_CASE("fft matches the direct DFT on small sizes", "[fft]") {
    Rng rng(5);
    for (int n : {2, 8, 32}) {
        std::vector<Complex> a(static_cast<size_t>(n));
        for (auto& z : a) z = Complex(rng.uniform(-1, 1), rng.uniform(-1, 1));
        std::vector<Complex> ref(static_cast<size_t>(n));
        for (int k = 0; k < n; ++k) {
            Complex s = 0;
            for (int j = 0; j < n; ++j)
                s += a[size_t(j)] * std::polar(1.0, -2 * M_PI * j * k / Real(n));
            ref[size_t(k)] = s;
        }
        auto b = a;
        fft(b);
        for (int k = 0; k < n; ++k) REQUIRE(std::abs(b[size_t(k)] - ref[size_t(k)]) < 1e-10);
        fft(b, true);
        for (int k = 0; k < n; ++k) REQUIRE(std::abs(b[size_t(k)] - a[size_t(k)]) < 1e-10);
    }
}

TEST_CASE("2-D fft round-trip and Plancherel", "[fft]") {
    Rng rng(9);
    const int nx = 64, ny = 32;
    std::vector<Complex> a(size_t(nx) * ny);
    for (auto& z : a) z = Complex(rng.normal(), rng.normal());
    Real l2_space = 0;
    for (auto& z : a) l2_space += std::norm(z);

    auto b = a;
    fft2(b, nx, ny);
    Real l2_freq = 0;
    for (auto& z : b) l2_freq += std::norm(z);
    // Unitary normalization carries the 1/(nx*ny) factor.
    REQUIRE(std::abs(l2_freq / (Real(nx) * ny) - l2_space) < 1e-10 * l2_space);

    fft2(b, nx, ny, true);
    Real err = 0;
    for (size_t i = 0; i < a.size(); ++i) err = std::max(err, std::abs(a[i] - b[i]));
    REQUIRE(err < 1e-12);
}

TEST_CASE("2-D fft is thread-count invariant", "[fft]") {
    Rng rng(11);
    const int n = 64;
    std::vector<Complex> a(size_t(n) * n);
    for (auto& z : a) z = Complex(rng.uniform(), rng.uniform());
    auto b1 = a, b2 = a;
    fft2(b1, n, n, false, 1);
    fft2(b2, n, n, false, 2);
    for (size_t i = 0; i < a.size(); ++i) REQUIRE(b1[i] == b2[i]);
}
