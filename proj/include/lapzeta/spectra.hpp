// spectra.hpp -- exact spectra of discrete Laplacians on product lattices.
//
// Geometry and spectra
// --------------------
// One axis of size n contributes the eigenvalue family
//
//     Dirichlet :  2 - 2cos(pi q / n)   = 4 sin^2(pi q / (2n)),  q = 1..n-1
//     Free      :  2 - 2cos(pi q / n)   = 4 sin^2(pi q / (2n)),  q = 0..n-1
//     Periodic  :  2 - 2cos(2 pi q / n) = 4 sin^2(pi q / n),     q = 0..n-1
//
// and a d-dimensional product lattice has eigenvalues
//
//     lambda(q_1..q_d) = sum_i lambda_i(q_i) + msq            (mass shift)
//     scaled by u^2 when a rescale factor u is set (mass added BEFORE the
//     rescale: the physical operator is u^2 (Delta + msq)).
//
// The 4 sin^2 form is used instead of 2 - 2cos because it is exact near the
// zero mode: 4 sin^2(0) == 0 with no cancellation, and small eigenvalues
// keep full relative precision (2 - 2cos(x) loses half the digits for
// x ~ 1e-8).
//
// Zero modes: Free and Periodic axes contribute eigenvalue 0 exactly once
// (q = 0); a massless Free/Periodic product lattice therefore has exactly
// one zero eigenvalue, at flattened index 0.  Dirichlet lattices never have
// one.  logdet_exact refuses to sum through a zero mode unless the caller
// passes exclude_zero_modes.
//
// Check values:
//     axis(2, Dirichlet)  = {2}               (cos(pi/2) = 0)
//     axis(3, Dirichlet)  = {1, 3}            (tridiag(2,-1) of size 2)
//     axis(3, Periodic)   = {0, 3, 3}         (circulant of size 3)
//     logdet path n=3     = log 3             (det tridiag(2,-1) size 2 = 3)
//     logdet cycle n, excl. zero  = log n^2   (spanning trees of a cycle)
//
// Streaming: eigenvalues are never materialized for the whole lattice; the
// flat index space [0, total_count) is cut into fixed 65536-wide blocks,
// each filled by an odometer walk (last axis fastest) and reduced by the
// deterministic kernels.  Worker threads grab blocks through an atomic
// counter; since every block's partial sum is a pure function of the block
// index, and the block sums are merged by a fixed pairwise tree, the result
// is bit-identical for any thread count.
#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace lapzeta {

enum class BoundaryCondition { Dirichlet, Free, Periodic };

struct LatticeSpec {
    std::vector<std::int64_t> sizes;  // n_1..n_d, each >= 1
    BoundaryCondition bc = BoundaryCondition::Dirichlet;
    double mass_squared = 0.0;        // msq >= 0, added before any rescale
    std::optional<double> rescale;    // u > 0: eigenvalues multiplied by u^2
};

// Eigenvalues of one axis, ascending in q (NOT sorted by value for Periodic).
std::vector<double> axis_eigenvalues(std::int64_t n, BoundaryCondition bc);

// A streamable product spectrum: per-axis eigenvalue tables plus the mass
// shift and rescale factor.  The value at flat index f (odometer order,
// last axis fastest) is scale * (sum_i axis[i][q_i(f)] + shift).
class Spectrum {
  public:
    Spectrum(std::vector<std::vector<double>> axes, double shift, double scale);

    std::uint64_t total_count() const { return total_; }
    double shift() const { return shift_; }
    double scale() const { return scale_; }
    int dimension() const { return static_cast<int>(axes_.size()); }

    // True if the spectrum contains an exact zero eigenvalue (analytic:
    // shift == 0 and every axis table starts with 0; it then sits at flat
    // index 0 and nowhere else).
    bool has_zero_mode() const;

    // Fill buf[0..end-begin) with the UNSHIFTED axis sums for flat indices
    // [begin, end).  Shift/scale are applied by the consumer so that the
    // log kernel can fold the shift into its base argument.
    void fill_axis_sums(std::uint64_t begin, std::uint64_t end, double* buf) const;

    // Materialize (value, multiplicity=1) eigenvalues, shift and scale
    // applied, optionally skipping the zero mode.  Refuses above the cap.
    std::vector<double> to_vector(bool exclude_zero_mode = false,
                                  std::uint64_t cap = (1u << 24)) const;

  private:
    std::vector<std::vector<double>> axes_;
    double shift_;
    double scale_;
    std::uint64_t total_;
};

Spectrum product_spectrum(const LatticeSpec& spec);

struct LogdetOptions {
    bool exclude_zero_modes = false;
    // 0 = resolve from LAPZETA_THREADS env var, else hardware concurrency.
    int threads = 0;
};

// Sum of log(eigenvalue) over the (possibly zero-mode-excluded) spectrum.
// Deterministic: bit-identical across thread counts.  Empty spectra (n_i = 1
// Dirichlet, or everything excluded) give 0 = log of the empty product.
// Throws ZeroEigenvalue if a zero mode is present and not excluded.
double logdet_exact(const LatticeSpec& spec, LogdetOptions opts = {});

// Heat trace sum_lambda exp(-lambda t) over the full spectrum (zero modes
// included: they contribute 1).  Brute force; throws TooLarge above 1e8.
double discrete_theta(const LatticeSpec& spec, double t);

// Weighted face-volume vectors V_k = 2^{k-d} e_k(x_1..x_d), k = 0..d, where
// e_k is the elementary symmetric polynomial.  V_d = prod x_i, V_0 = 2^{-d}.
struct VolumeVector {
    std::vector<double> v;  // v[k], k = 0..d
    int dimension() const { return static_cast<int>(v.size()) - 1; }
};
VolumeVector volume_vector(const std::vector<double>& x);
VolumeVector volume_vector_sizes(const std::vector<std::int64_t>& sizes);

// Elementary symmetric polynomials e_0..e_d of integer sizes, exact in
// int64.  Used for the exact face-count identity
//     prod_i (n_i - 1) = sum_{k=0..d} (-1)^{d-k} e_k(n_1..n_d),
// equivalently  prod(n_i - 1) = (-1)^d + sum_{k>=1} (-2)^{d-k} V_k * 2^{d-k}.
std::vector<std::int64_t> elementary_symmetric_int(
    const std::vector<std::int64_t>& sizes);

// Both sides of the inclusion-exclusion determinant identity on the cube
// (n,..,n) of dimension d:
//     log det Dirichlet_d = sum_{i=0..d} (-1)^{d-i} C(d,i) log det' Free_i
// where det' excludes the single zero mode of each free cube and the
// zero-dimensional cube contributes log det' = 0 (empty product).  Returned
// as (lhs, rhs) computed independently from spectra.
std::pair<double, double> dirichlet_free_logdet_relation(int d, std::int64_t n);

}  // namespace lapzeta
