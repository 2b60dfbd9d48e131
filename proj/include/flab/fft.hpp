#pragma once

#include <complex>
#include <span>
#include <unordered_map>
#include <vector>

#include "flab/common.hpp"
#include "flab/parallel.hpp"

namespace flab {

using Complex = std::complex<Real>;

namespace detail {

struct FftTables {
    std::vector<Complex> twiddle; // exp(-2*pi*i*j/n), j < n/2
    std::vector<int> bitrev;
};

inline const FftTables& fft_tables(int n) {
    thread_local std::unordered_map<int, FftTables> cache;
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    FftTables t;
    t.twiddle.resize(size_t(n / 2));
    for (int j = 0; j < n / 2; ++j) {
        Real a = -2.0 * M_PI * Real(j) / Real(n);
        t.twiddle[size_t(j)] = Complex(std::cos(a), std::sin(a));
    }
    t.bitrev.resize(size_t(n));
    int bits = 0;
    while ((1 << bits) < n) ++bits;
    for (int i = 0; i < n; ++i) {
        int r = 0;
        for (int b = 0; b < bits; ++b)
            if (i & (1 << b)) r |= 1 << (bits - 1 - b);
        t.bitrev[size_t(i)] = r;
    }
    return cache.emplace(n, std::move(t)).first->second;
}

} // namespace detail

/// In-place radix-2 FFT; n must be a power of two. Forward uses the
/// exp(-2*pi*i*jk/n) kernel; inverse includes the 1/n factor.
inline void fft(std::span<Complex> a, bool inverse = false) {
    const int n = int(a.size());
    if (n <= 1) return;
    if (n & (n - 1)) throw std::invalid_argument("fft: size must be a power of two");
    const auto& tabs = detail::fft_tables(n);
    for (int i = 0; i < n; ++i) {
        int r = tabs.bitrev[size_t(i)];
        if (i < r) std::swap(a[size_t(i)], a[size_t(r)]);
    }
    for (int len = 2; len <= n; len <<= 1) {
        int half = len >> 1;
        int stride = n / len;
        for (int base = 0; base < n; base += len) {
            const Complex* tw = tabs.twiddle.data();
            for (int j = 0; j < half; ++j) {
                Complex w = tw[size_t(j) * size_t(stride)];
                if (inverse) w = std::conj(w);
                Complex u = a[size_t(base + j)];
                Complex v = a[size_t(base + j + half)] * w;
                a[size_t(base + j)] = u + v;
                a[size_t(base + j + half)] = u - v;
            }
        }
    }
    if (inverse) {
        Real inv = 1.0 / Real(n);
        for (auto& z : a) z *= inv;
    }
}

/// 2-D FFT over a row-major nx-by-ny array (index = ix*ny + iy).
inline void fft2(std::vector<Complex>& a, int nx, int ny, bool inverse = false,
                 int threads = 1) {
    if (int64_t(nx) * ny != int64_t(a.size()))
        throw std::invalid_argument("fft2: bad dimensions");
    parallel_for(nx, threads, [&](int64_t ix) {
        fft(std::span<Complex>(a.data() + ix * ny, size_t(ny)), inverse);
    });
    // Column pass through a transpose to keep rows contiguous.
    std::vector<Complex> tr(a.size());
    for (int ix = 0; ix < nx; ++ix)
        for (int iy = 0; iy < ny; ++iy) tr[size_t(iy) * nx + ix] = a[size_t(ix) * ny + iy];
    parallel_for(ny, threads, [&](int64_t iy) {
        fft(std::span<Complex>(tr.data() + iy * nx, size_t(nx)), inverse);
    });
    for (int iy = 0; iy < ny; ++iy)
        for (int ix = 0; ix < nx; ++ix) a[size_t(ix) * ny + iy] = tr[size_t(iy) * nx + ix];
}

} // namespace flab
