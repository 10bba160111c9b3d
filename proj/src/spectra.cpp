// spectra.cpp -- streaming product spectra and deterministic log-determinants.

#include "lapzeta/spectra.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <string>
#include <thread>

#include "lapzeta/errors.hpp"
#include "lapzeta/kernels.hpp"

namespace lapzeta {

namespace {

constexpr std::uint64_t kBlock = 65536;  // flat indices per reduction block

// pi to full double precision
constexpr double kPi = 3.14159265358979323846264338327950288;

int resolve_thread_count(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("LAPZETA_THREADS")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end && *end == '\0' && v >= 1 && v <= 1024) return static_cast<int>(v);
        // Invalid values are ignored (reported by the CLI layer, which
        // validates the variable before calling in).
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? static_cast<int>(hw) : 1;
}

}  // namespace

std::vector<double> axis_eigenvalues(std::int64_t n, BoundaryCondition bc) {
    if (n < 1) throw Error("axis_eigenvalues: axis size must be >= 1");
    std::vector<double> eig;
    switch (bc) {
        case BoundaryCondition::Dirichlet:
            eig.reserve(static_cast<std::size_t>(n - 1));
            for (std::int64_t q = 1; q < n; ++q) {
                const double s = std::sin(kPi * static_cast<double>(q) /
                                          (2.0 * static_cast<double>(n)));
                eig.push_back(4.0 * s * s);
            }
            break;
        case BoundaryCondition::Free:
            eig.reserve(static_cast<std::size_t>(n));
            for (std::int64_t q = 0; q < n; ++q) {
                const double s = std::sin(kPi * static_cast<double>(q) /
                                          (2.0 * static_cast<double>(n)));
                eig.push_back(4.0 * s * s);
            }
            break;
        case BoundaryCondition::Periodic:
            eig.reserve(static_cast<std::size_t>(n));
            for (std::int64_t q = 0; q < n; ++q) {
                const double s = std::sin(kPi * static_cast<double>(q) /
                                          static_cast<double>(n));
                eig.push_back(4.0 * s * s);
            }
            break;
    }
    return eig;
}

Spectrum::Spectrum(std::vector<std::vector<double>> axes, double shift, double scale)
    : axes_(std::move(axes)), shift_(shift), scale_(scale) {
    total_ = 1;
    for (const auto& a : axes_) total_ *= static_cast<std::uint64_t>(a.size());
    if (axes_.empty()) total_ = 1;  // zero-dimensional lattice: one point
}

bool Spectrum::has_zero_mode() const {
    if (shift_ != 0.0) return false;
    if (total_ == 0) return false;
    for (const auto& a : axes_)
        if (a.empty() || a.front() != 0.0) return false;
    return true;  // includes the zero-dimensional case: empty product = 0
}

void Spectrum::fill_axis_sums(std::uint64_t begin, std::uint64_t end,
                              double* buf) const {
    const int d = static_cast<int>(axes_.size());
    if (d == 0) {
        for (std::uint64_t f = begin; f < end; ++f) *buf++ = 0.0;
        return;
    }
    // Decompose `begin` into the odometer state (last axis fastest).
    std::vector<std::uint64_t> q(static_cast<std::size_t>(d));
    std::uint64_t r = begin;
    for (int i = d - 1; i >= 0; --i) {
        const std::uint64_t len = axes_[static_cast<std::size_t>(i)].size();
        q[static_cast<std::size_t>(i)] = r % len;
        r /= len;
    }
    // Prefix sums pre[i] = sum_{j<i} axes[j][q[j]].
    std::vector<double> pre(static_cast<std::size_t>(d) + 1, 0.0);
    for (int i = 0; i < d; ++i)
        pre[static_cast<std::size_t>(i) + 1] =
            pre[static_cast<std::size_t>(i)] +
            axes_[static_cast<std::size_t>(i)][q[static_cast<std::size_t>(i)]];

    std::uint64_t remaining = end - begin;
    std::uint64_t o = 0;
    const auto& last = axes_[static_cast<std::size_t>(d - 1)];
    const std::uint64_t last_len = last.size();
    while (remaining > 0) {
        const std::uint64_t k = q[static_cast<std::size_t>(d - 1)];
        const std::uint64_t chunk = std::min(last_len - k, remaining);
        const double base = pre[static_cast<std::size_t>(d - 1)];
        for (std::uint64_t j = 0; j < chunk; ++j) buf[o + j] = base + last[k + j];
        o += chunk;
        remaining -= chunk;
        if (remaining == 0) break;
        // carry into the slower axes
        q[static_cast<std::size_t>(d - 1)] = 0;
        int i = d - 2;
        while (i >= 0) {
            auto& qi = q[static_cast<std::size_t>(i)];
            if (++qi < axes_[static_cast<std::size_t>(i)].size()) break;
            qi = 0;
            --i;
        }
        if (i < 0) break;  // wrapped past the end (cannot happen: end <= total)
        for (int j = i; j < d - 1; ++j)
            pre[static_cast<std::size_t>(j) + 1] =
                pre[static_cast<std::size_t>(j)] +
                axes_[static_cast<std::size_t>(j)][q[static_cast<std::size_t>(j)]];
    }
}

std::vector<double> Spectrum::to_vector(bool exclude_zero_mode,
                                        std::uint64_t cap) const {
    if (total_ > cap)
        throw TooLarge("Spectrum::to_vector: " + std::to_string(total_) +
                       " eigenvalues exceeds materialization cap");
    const bool skip0 = exclude_zero_mode && has_zero_mode();
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(total_ - (skip0 ? 1 : 0)));
    std::vector<double> buf(static_cast<std::size_t>(std::min<std::uint64_t>(kBlock, total_)));
    for (std::uint64_t b = 0; b < total_; b += kBlock) {
        const std::uint64_t e = std::min(b + kBlock, total_);
        fill_axis_sums(b, e, buf.data());
        for (std::uint64_t f = b; f < e; ++f) {
            if (skip0 && f == 0) continue;
            out.push_back(scale_ * (buf[static_cast<std::size_t>(f - b)] + shift_));
        }
    }
    return out;
}

Spectrum product_spectrum(const LatticeSpec& spec) {
    if (spec.sizes.empty()) throw Error("product_spectrum: dimension must be >= 1");
    if (spec.mass_squared < 0.0) throw Error("product_spectrum: mass_squared < 0");
    if (spec.rescale && *spec.rescale <= 0.0)
        throw Error("product_spectrum: rescale factor must be > 0");
    std::vector<std::vector<double>> axes;
    axes.reserve(spec.sizes.size());
    for (std::int64_t n : spec.sizes) axes.push_back(axis_eigenvalues(n, spec.bc));
    const double u = spec.rescale ? *spec.rescale : 1.0;
    return Spectrum(std::move(axes), spec.mass_squared, u * u);
}

double logdet_exact(const LatticeSpec& spec, LogdetOptions opts) {
    const Spectrum sp = product_spectrum(spec);
    const bool zero_mode = sp.has_zero_mode();
    if (zero_mode && !opts.exclude_zero_modes)
        throw ZeroEigenvalue(
            "logdet_exact: spectrum contains an exact zero eigenvalue "
            "(massless free/periodic lattice); pass exclude_zero_modes");
    const std::uint64_t skip = (zero_mode && opts.exclude_zero_modes) ? 1 : 0;
    const std::uint64_t total = sp.total_count();
    if (total <= skip) return 0.0;  // empty product
    const std::uint64_t count = total - skip;

    const std::uint64_t nblocks = (count + kBlock - 1) / kBlock;
    std::vector<double> block_sums(static_cast<std::size_t>(nblocks), 0.0);
    std::atomic<std::uint64_t> next{0};
    const double shift = sp.shift();

    auto worker = [&]() {
        std::vector<double> buf(static_cast<std::size_t>(std::min<std::uint64_t>(kBlock, count)));
        for (;;) {
            const std::uint64_t b = next.fetch_add(1, std::memory_order_relaxed);
            if (b >= nblocks) break;
            const std::uint64_t lo = skip + b * kBlock;
            const std::uint64_t hi = std::min(lo + kBlock, total);
            sp.fill_axis_sums(lo, hi, buf.data());
            block_sums[static_cast<std::size_t>(b)] =
                kernels::sum_log_shifted(buf.data(),
                                         static_cast<std::size_t>(hi - lo), shift);
        }
    };

    int nthreads = resolve_thread_count(opts.threads);
    if (static_cast<std::uint64_t>(nthreads) > nblocks)
        nthreads = static_cast<int>(nblocks);
    if (nthreads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(nthreads));
        for (int i = 0; i < nthreads; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    double logdet = kernels::pairwise_sum(block_sums.data(), block_sums.size());
    if (!std::isfinite(logdet))
        throw ZeroEigenvalue("logdet_exact: non-finite log encountered "
                             "(zero or negative eigenvalue in the sum)");
    if (spec.rescale) {
        const double u = *spec.rescale;
        logdet += static_cast<double>(count) * std::log(u * u);
    }
    return logdet;
}

double discrete_theta(const LatticeSpec& spec, double t) {
    if (t <= 0.0) throw NonPositiveT("discrete_theta: t must be > 0");
    const Spectrum sp = product_spectrum(spec);
    const std::uint64_t total = sp.total_count();
    if (total > 100000000ull)
        throw TooLarge("discrete_theta: lattice too large for exact summation");
    const std::uint64_t nblocks = (total + kBlock - 1) / kBlock;
    std::vector<double> block_sums(static_cast<std::size_t>(nblocks), 0.0);
    std::vector<double> buf(static_cast<std::size_t>(std::min<std::uint64_t>(kBlock, total)));
    const double scale = sp.scale();
    const double shift = sp.shift();
    for (std::uint64_t b = 0; b < nblocks; ++b) {
        const std::uint64_t lo = b * kBlock;
        const std::uint64_t hi = std::min(lo + kBlock, total);
        sp.fill_axis_sums(lo, hi, buf.data());
        // fold shift and scale into the value: exp(-(scale*(x+shift))*t)
        for (std::uint64_t j = 0; j < hi - lo; ++j)
            buf[static_cast<std::size_t>(j)] =
                scale * (buf[static_cast<std::size_t>(j)] + shift);
        block_sums[static_cast<std::size_t>(b)] = kernels::sum_exp_neg_scaled(
            buf.data(), static_cast<std::size_t>(hi - lo), t);
    }
    return kernels::pairwise_sum(block_sums.data(), block_sums.size());
}

VolumeVector volume_vector(const std::vector<double>& x) {
    const int d = static_cast<int>(x.size());
    if (d < 1) throw Error("volume_vector: dimension must be >= 1");
    // elementary symmetric polynomials by the standard DP
    std::vector<double> e(static_cast<std::size_t>(d) + 1, 0.0);
    e[0] = 1.0;
    for (int i = 0; i < d; ++i)
        for (int k = std::min(i + 1, d); k >= 1; --k)
            e[static_cast<std::size_t>(k)] +=
                e[static_cast<std::size_t>(k - 1)] * x[static_cast<std::size_t>(i)];
    VolumeVector vv;
    vv.v.resize(static_cast<std::size_t>(d) + 1);
    for (int k = 0; k <= d; ++k)
        vv.v[static_cast<std::size_t>(k)] =
            std::ldexp(e[static_cast<std::size_t>(k)], k - d);  // e_k * 2^{k-d}
    return vv;
}

VolumeVector volume_vector_sizes(const std::vector<std::int64_t>& sizes) {
    std::vector<double> x(sizes.begin(), sizes.end());
    return volume_vector(x);
}

std::vector<std::int64_t> elementary_symmetric_int(
    const std::vector<std::int64_t>& sizes) {
    const int d = static_cast<int>(sizes.size());
    std::vector<std::int64_t> e(static_cast<std::size_t>(d) + 1, 0);
    e[0] = 1;
    for (int i = 0; i < d; ++i)
        for (int k = std::min(i + 1, d); k >= 1; --k)
            e[static_cast<std::size_t>(k)] +=
                e[static_cast<std::size_t>(k - 1)] * sizes[static_cast<std::size_t>(i)];
    return e;
}

std::pair<double, double> dirichlet_free_logdet_relation(int d, std::int64_t n) {
    if (d < 1 || n < 2)
        throw Error("dirichlet_free_logdet_relation: need d >= 1 and n >= 2");
    LatticeSpec dspec;
    dspec.sizes.assign(static_cast<std::size_t>(d), n);
    dspec.bc = BoundaryCondition::Dirichlet;
    const double lhs = logdet_exact(dspec);

    // rhs = sum_{i=0..d} (-1)^{d-i} C(d,i) * logdet' of the i-dim free cube.
    // The i = 0 term is the zero-dimensional lattice: its only eigenvalue is
    // the zero mode, so det' is an empty product and contributes 0.
    double rhs = 0.0;
    double binom = 1.0;  // C(d, 0)
    for (int i = 0; i <= d; ++i) {
        if (i > 0) binom = binom * static_cast<double>(d - i + 1) / static_cast<double>(i);
        double Fi = 0.0;
        if (i >= 1) {
            LatticeSpec f;
            f.sizes.assign(static_cast<std::size_t>(i), n);
            f.bc = BoundaryCondition::Free;
            Fi = logdet_exact(f, LogdetOptions{/*exclude_zero_modes=*/true, 0});
        }
        const double sign = ((d - i) % 2 == 0) ? 1.0 : -1.0;
        rhs += sign * binom * Fi;
    }
    return {lhs, rhs};
}

}  // namespace lapzeta
