#include "mr1l/spectral.hpp"

#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <random>
#include <string>

#include "mr1l/errors.hpp"
#include "mr1l/flatten.hpp"

namespace mr1l {

namespace {

// Uniform in [0,1) from the top 53 bits of the stream; exact on every
// platform, unlike std::uniform_real_distribution.
double canonical_unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::uint64_t fnv1a(std::uint64_t h, const char* data, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    h ^= static_cast<unsigned char>(data[i]);
    h *= 0x100000001b3ull;
  }
  return h;
}

void check_pairing(const MultiLatticePlan& plan, const FrequencySet& support,
                   const SampleSet& s) {
  if (support.size() != plan.assignment.size())
    throw validation_error("support size does not match the plan");
  if (s.samples.size() != plan.primes.size())
    throw validation_error("sample set has the wrong number of lattices");
  for (std::size_t l = 0; l < plan.primes.size(); ++l)
    if (s.samples[l].size() != plan.primes[l])
      throw validation_error(
          "lattice value vector length differs from its modulus");
  if (s.fingerprint != plan_fingerprint(plan))
    throw validation_error("sample set was produced for a different plan");
}

void require_one_shot(const MultiLatticePlan& plan, const char* what) {
  if (plan.variant != Variant::full)
    throw validation_error(std::string(what) +
                           " needs uniqueness certificates against the whole "
                           "support; use peeling for reduction plans");
}

}  // namespace

TrigPolynomial random_polynomial(const FrequencySet& support,
                                 std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  TrigPolynomial p;
  p.support = support;
  p.coeffs.resize(support.size());
  const double tau = 2.0 * std::numbers::pi;
  for (auto& c : p.coeffs) {
    double mag = 0.5 + 0.5 * canonical_unit(rng);
    double phase = tau * canonical_unit(rng);
    c = std::polar(mag, phase);
  }
  return p;
}

cdouble eval_poly(const TrigPolynomial& p, const std::vector<double>& x) {
  if (p.coeffs.size() != p.support.size())
    throw validation_error("coefficient count differs from the support");
  if (x.size() != p.support.dim())
    throw validation_error("evaluation point has the wrong dimension");
  const std::uint32_t d = p.support.dim();
  const double tau = 2.0 * std::numbers::pi;
  cdouble acc{0.0, 0.0};
  for (std::size_t i = 0; i < p.support.size(); ++i) {
    auto k = p.support[i];
    double frac = 0.0;
    for (std::uint32_t t = 0; t < d; ++t)
      frac += std::fmod(static_cast<double>(k[t]) * x[t], 1.0);
    acc += p.coeffs[i] * std::polar(1.0, tau * std::fmod(frac, 1.0));
  }
  return acc;
}

std::uint64_t plan_fingerprint(const MultiLatticePlan& plan) {
  std::string s(variant_name(plan.variant));
  s += ';';
  s += plan.source_m.get_str();
  for (const BigInt& z : plan.z) {
    s += ',';
    s += z.get_str();
  }
  for (std::uint64_t p : plan.primes) {
    s += ';';
    s += std::to_string(p);
  }
  return fnv1a(14695981039346656037ull, s.data(), s.size());
}

SampleSet sample_on_plan(const MultiLatticePlan& plan, const PointFunction& f) {
  const std::size_t d = plan.z.size();
  SampleSet out;
  out.fingerprint = plan_fingerprint(plan);
  out.evaluations = plan.total_samples();
  out.samples.resize(plan.primes.size());
  const cdouble at_origin = f(std::vector<double>(d, 0.0));
  std::vector<std::uint64_t> w(d), r(d);
  std::vector<double> x(d);
  for (std::size_t l = 0; l < plan.primes.size(); ++l) {
    const std::uint64_t P = plan.primes[l];
    for (std::size_t t = 0; t < d; ++t) {
      w[t] = mod_word(plan.z[t], P);
      r[t] = 0;
    }
    auto& v = out.samples[l];
    v.resize(P);
    v[0] = at_origin;
    for (std::uint64_t j = 1; j < P; ++j) {
      for (std::size_t t = 0; t < d; ++t) {
        r[t] += w[t];
        if (r[t] >= P) r[t] -= P;
        x[t] = static_cast<double>(r[t]) / static_cast<double>(P);
      }
      v[j] = f(x);
    }
  }
  return out;
}

SampleSet sample_on_plan(const MultiLatticePlan& plan,
                         const TrigPolynomial& p) {
  if (p.coeffs.size() != p.support.size())
    throw validation_error("coefficient count differs from the support");
  if (p.support.dim() != plan.z.size())
    throw validation_error("polynomial dimension differs from the plan");
  SampleSet out;
  out.fingerprint = plan_fingerprint(plan);
  out.evaluations = plan.total_samples();
  out.samples.resize(plan.primes.size());
  FlattenedSet fl(p.support, plan.z);
  for (std::size_t l = 0; l < plan.primes.size(); ++l) {
    const std::uint64_t P = plan.primes[l];
    std::vector<cdouble> bins(P, cdouble{0.0, 0.0});
    for (std::size_t i = 0; i < p.coeffs.size(); ++i)
      bins[fl.residue(i, P)] += p.coeffs[i];
    out.samples[l] = czt_dft(bins, +1);
  }
  return out;
}

std::vector<cdouble> lattice_dft(const std::vector<cdouble>& samples) {
  std::vector<cdouble> out = czt_dft(samples, -1);
  if (!samples.empty()) {
    const double inv = 1.0 / static_cast<double>(samples.size());
    for (auto& v : out) v *= inv;
  }
  return out;
}

std::vector<cdouble> reconstruct_direct(const MultiLatticePlan& plan,
                                        const FrequencySet& support,
                                        const SampleSet& s) {
  check_pairing(plan, support, s);
  require_one_shot(plan, "direct read-off");
  FlattenedSet fl(support, plan.z);
  std::vector<std::vector<cdouble>> bins(plan.primes.size());
  std::vector<cdouble> c(support.size());
  for (std::size_t i = 0; i < support.size(); ++i) {
    const std::uint32_t l = plan.assignment[i];
    if (bins[l].empty()) bins[l] = lattice_dft(s.samples[l]);
    c[i] = bins[l][fl.residue(i, plan.primes[l])];
  }
  return c;
}

std::vector<cdouble> reconstruct_average(const MultiLatticePlan& plan,
                                         const FrequencySet& support,
                                         const SampleSet& s) {
  check_pairing(plan, support, s);
  require_one_shot(plan, "bin averaging");
  if (plan.recoverable.size() != plan.primes.size())
    throw validation_error(
        "plan carries no recoverable lists; rebuild them before averaging");
  FlattenedSet fl(support, plan.z);
  std::vector<cdouble> acc(support.size(), cdouble{0.0, 0.0});
  std::vector<std::uint32_t> cnt(support.size(), 0);
  for (std::size_t l = 0; l < plan.primes.size(); ++l) {
    const std::vector<cdouble> bins = lattice_dft(s.samples[l]);
    for (std::uint32_t idx : plan.recoverable[l]) {
      acc[idx] += bins[fl.residue(idx, plan.primes[l])];
      ++cnt[idx];
    }
  }
  std::vector<cdouble> c(support.size());
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (cnt[i] == 0)
      throw validation_error(
          "recoverable lists do not cover the support; rebuild them after "
          "reading a plan from a file");
    c[i] = acc[i] / static_cast<double>(cnt[i]);
  }
  return c;
}

std::vector<cdouble> reconstruct_peeling(const MultiLatticePlan& plan,
                                         const FrequencySet& support,
                                         const SampleSet& s) {
  check_pairing(plan, support, s);
  FlattenedSet fl(support, plan.z);
  const std::size_t L = plan.primes.size();
  std::vector<std::vector<std::uint32_t>> by_round(L);
  for (std::size_t i = 0; i < support.size(); ++i)
    by_round[plan.assignment[i]].push_back(static_cast<std::uint32_t>(i));
  std::vector<cdouble> c(support.size());
  std::vector<std::uint32_t> done;
  done.reserve(support.size());
  for (std::size_t l = 0; l < L; ++l) {
    std::vector<cdouble> bins = lattice_dft(s.samples[l]);
    const std::uint64_t P = plan.primes[l];
    for (std::uint32_t i : done) bins[fl.residue(i, P)] -= c[i];
    for (std::uint32_t i : by_round[l]) c[i] = bins[fl.residue(i, P)];
    done.insert(done.end(), by_round[l].begin(), by_round[l].end());
  }
  return c;
}

void write_samples(std::ostream& os, const SampleSet& s) {
  os << "samples 1\n";
  os << "fingerprint " << s.fingerprint << "\n";
  os << "evaluations " << s.evaluations << "\n";
  os << "count " << s.samples.size() << "\n";
  os << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (const auto& v : s.samples) {
    os << "lattice " << v.size() << "\n";
    for (const cdouble& zv : v) os << zv.real() << ' ' << zv.imag() << "\n";
  }
}

SampleSet read_samples(std::istream& is) {
  std::string tag;
  int version = 0;
  SampleSet s;
  if (!(is >> tag >> version) || tag != "samples" || version != 1)
    throw validation_error("not a sample file");
  if (!(is >> tag >> s.fingerprint) || tag != "fingerprint")
    throw validation_error("malformed sample file: fingerprint");
  if (!(is >> tag >> s.evaluations) || tag != "evaluations")
    throw validation_error("malformed sample file: evaluations");
  std::size_t count = 0;
  if (!(is >> tag >> count) || tag != "count")
    throw validation_error("malformed sample file: count");
  s.samples.resize(count);
  for (auto& v : s.samples) {
    std::size_t n = 0;
    if (!(is >> tag >> n) || tag != "lattice")
      throw validation_error("malformed sample file: lattice header");
    v.resize(n);
    for (auto& zv : v) {
      double re = 0.0, im = 0.0;
      if (!(is >> re >> im))
        throw validation_error("truncated sample file");
      zv = {re, im};
    }
  }
  return s;
}

void write_coeffs(std::ostream& os, const std::vector<cdouble>& c) {
  os << "coeffs " << c.size() << "\n";
  os << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (const cdouble& zv : c) os << zv.real() << ' ' << zv.imag() << "\n";
}

std::vector<cdouble> read_coeffs(std::istream& is) {
  std::string tag;
  std::size_t n = 0;
  if (!(is >> tag >> n) || tag != "coeffs")
    throw validation_error("not a coefficient file");
  std::vector<cdouble> c(n);
  for (auto& zv : c) {
    double re = 0.0, im = 0.0;
    if (!(is >> re >> im)) throw validation_error("truncated coefficient file");
    zv = {re, im};
  }
  return c;
}

}  // namespace mr1l
