#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <vector>

#include "mr1l/czt.hpp"
#include "mr1l/freqset.hpp"
#include "mr1l/plan.hpp"

namespace mr1l {

// p(x) = sum_i coeffs[i] * exp(2*pi*i * <support[i], x>), x in [0,1)^d.
struct TrigPolynomial {
  FrequencySet support;
  std::vector<cdouble> coeffs;
};

// Coefficients with modulus in [1/2, 1] and uniform phase, drawn
// reproducibly from `seed` (identical across platforms).
TrigPolynomial random_polynomial(const FrequencySet& support,
                                 std::uint64_t seed);

cdouble eval_poly(const TrigPolynomial& p, const std::vector<double>& x);

using PointFunction = std::function<cdouble(const std::vector<double>&)>;

// Values of a function on every lattice of a plan: samples[l][j] is the value
// at node j*z/primes[l] mod 1.  `evaluations` counts the distinct nodes (the
// origin is common to all lattices and counted once).
struct SampleSet {
  std::uint64_t fingerprint = 0;
  std::uint64_t evaluations = 0;
  std::vector<std::vector<cdouble>> samples;
};

// Stable 64-bit identifier of a plan (variant, z, source modulus, lattice
// sizes), used to pair a SampleSet with the plan that produced it.
std::uint64_t plan_fingerprint(const MultiLatticePlan& plan);

// Evaluate f at all lattice nodes.  Node coordinates come from the integer
// residues j*z_t mod P, so each coordinate is a correctly rounded rational.
SampleSet sample_on_plan(const MultiLatticePlan& plan, const PointFunction& f);

// Same nodes for a trigonometric polynomial, computed spectrally: the
// coefficients are binned by residue <k,z> mod P and each lattice's value
// vector is one length-P backward transform of the binned spectrum.
SampleSet sample_on_plan(const MultiLatticePlan& plan,
                         const TrigPolynomial& p);

// Normalized transform of one lattice's values:
// out[r] = (1/P) * sum_j samples[j] * exp(-2*pi*i*j*r/P).
std::vector<cdouble> lattice_dft(const std::vector<cdouble>& samples);

// Read each coefficient from its residue bin on its assigned lattice.
// Requires a plan whose assignments certify uniqueness against the entire
// support (the one-shot variant).
std::vector<cdouble> reconstruct_direct(const MultiLatticePlan& plan,
                                        const FrequencySet& support,
                                        const SampleSet& s);

// Average the residue bin over every lattice that admits the coefficient;
// one-shot variant only.  With noisy data the average damps the aliasing
// picked up by any single lattice.
std::vector<cdouble> reconstruct_average(const MultiLatticePlan& plan,
                                         const FrequencySet& support,
                                         const SampleSet& s);

// Walk the lattices in round order; before reading a round's coefficients,
// subtract every previously recovered coefficient from that lattice's bins.
// Correct for both variants and required for reduction plans, whose
// uniqueness certificates hold only within each round's residual set.
std::vector<cdouble> reconstruct_peeling(const MultiLatticePlan& plan,
                                         const FrequencySet& support,
                                         const SampleSet& s);

void write_samples(std::ostream& os, const SampleSet& s);
SampleSet read_samples(std::istream& is);

// One "re im" line per coefficient, aligned with the support's row order.
void write_coeffs(std::ostream& os, const std::vector<cdouble>& c);
std::vector<cdouble> read_coeffs(std::istream& is);

}  // namespace mr1l
