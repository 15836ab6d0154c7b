// Python bindings: frequency sets, single-lattice constructions,
// multi-lattice plans, sampling, reconstruction, and the built-in test
// function. Arbitrary-width integers cross the boundary as Python ints.

#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <complex>
#include <cstdint>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "mr1l/errors.hpp"
#include "mr1l/freqset.hpp"
#include "mr1l/plan.hpp"
#include "mr1l/rank1.hpp"
#include "mr1l/spectral.hpp"
#include "mr1l/testfn.hpp"

namespace py = pybind11;
using namespace py::literals;
using namespace mr1l;

namespace pybind11 {
namespace detail {

// mpz_class <-> Python int, via decimal strings (exact at any width).
template <>
struct type_caster<mpz_class> {
 public:
  PYBIND11_TYPE_CASTER(mpz_class, const_name("int"));

  bool load(handle src, bool) {
    PyObject* ptr = src.ptr();
    if (!PyLong_Check(ptr)) return false;
    object text = reinterpret_steal<object>(PyObject_Str(ptr));
    if (!text) return false;
    const char* chars = PyUnicode_AsUTF8(text.ptr());
    if (!chars) {
      PyErr_Clear();
      return false;
    }
    return value.set_str(chars, 10) == 0;
  }

  static handle cast(const mpz_class& v, return_value_policy, handle) {
    return PyLong_FromString(v.get_str().c_str(), nullptr, 10);
  }
};

}  // namespace detail
}  // namespace pybind11

namespace {

std::vector<std::int32_t> require_dim(const FrequencySet& s,
                                      std::vector<std::int32_t> k) {
  if (k.size() != s.dim())
    throw validation_error("frequency vector has dimension " +
                           std::to_string(k.size()) + ", the set has " +
                           std::to_string(s.dim()));
  return k;
}

template <typename T, typename WriteFn>
std::string to_text(const T& v, WriteFn write) {
  std::ostringstream os;
  write(os, v);
  return os.str();
}

template <typename ReadFn>
auto from_text(const std::string& text, ReadFn read) {
  std::istringstream is(text);
  return read(is);
}

}  // namespace

PYBIND11_MODULE(mr1l, m) {
  m.doc() =
      "Multiple rank-1 lattices: deterministic construction, sampling of "
      "multivariate trigonometric polynomials, and exact reconstruction of "
      "their Fourier coefficients.";

  py::register_exception<internal_error>(m, "InternalError", PyExc_RuntimeError);
  py::register_exception<validation_error>(m, "ValidationError", PyExc_ValueError);

  py::class_<FrequencySet>(m, "FrequencySet")
      .def(py::init([](std::uint32_t dim, std::vector<std::int32_t> flat) {
             return FrequencySet(dim, std::move(flat));
           }),
           "dim"_a, "flat"_a,
           "Build from a flat row-major list of dim-sized frequency vectors.")
      .def_static(
          "from_rows",
          [](const std::vector<std::vector<std::int32_t>>& rows) {
            if (rows.empty())
              throw validation_error("from_rows needs at least one row");
            std::vector<std::int32_t> flat;
            flat.reserve(rows.size() * rows[0].size());
            for (const auto& r : rows) {
              if (r.size() != rows[0].size())
                throw validation_error("rows must share one dimension");
              flat.insert(flat.end(), r.begin(), r.end());
            }
            return FrequencySet(static_cast<std::uint32_t>(rows[0].size()),
                                std::move(flat));
          },
          "rows"_a)
      .def_property_readonly("dim", &FrequencySet::dim)
      .def("__len__", &FrequencySet::size)
      .def("row",
           [](const FrequencySet& s, std::size_t i) {
             if (i >= s.size()) throw py::index_error();
             auto sp = s[i];
             return std::vector<std::int32_t>(sp.begin(), sp.end());
           },
           "i"_a)
      .def("rows",
           [](const FrequencySet& s) {
             std::vector<std::vector<std::int32_t>> out(s.size());
             for (std::size_t i = 0; i < s.size(); ++i) {
               auto sp = s[i];
               out[i].assign(sp.begin(), sp.end());
             }
             return out;
           })
      .def("contains",
           [](const FrequencySet& s, std::vector<std::int32_t> k) {
             auto v = require_dim(s, std::move(k));
             return s.contains(std::span<const std::int32_t>(v.data(), v.size()));
           },
           "k"_a)
      .def("index_of",
           [](const FrequencySet& s, std::vector<std::int32_t> k) {
             auto v = require_dim(s, std::move(k));
             return s.index_of(std::span<const std::int32_t>(v.data(), v.size()));
           },
           "k"_a, "Row index of k, or len(self) when absent.");

  m.def("hyperbolic_cross_even", &hyperbolic_cross_even, "d"_a, "radius"_a,
        "cap"_a = std::size_t{4'000'000},
        "Even frequency vectors with product of max(1,|k_t|) <= radius.");
  m.def("random_cube_set", &random_cube_set, "d"_a, "radius"_a, "size"_a,
        "seed"_a,
        "Distinct vectors drawn without replacement from [-radius,radius]^d.");

  py::class_<Rank1Lattice>(m, "Rank1Lattice")
      .def_property_readonly("z",
                             [](const Rank1Lattice& l) { return l.z; })
      .def_property_readonly("m", [](const Rank1Lattice& l) { return l.m; })
      .def_property_readonly(
          "source",
          [](const Rank1Lattice& l) { return std::string(source_name(l.source)); })
      .def_property_readonly("dim", &Rank1Lattice::dim);

  m.def("build_mixed_radix", &build_mixed_radix, "freqs"_a);
  m.def("build_crt", &build_crt, "freqs"_a);
  m.def("build_cbc",
        [](const FrequencySet& I) { return build_cbc(I); }, "freqs"_a);
  m.def("build_lattice",
        [](const FrequencySet& I, const std::string& source) {
          switch (source_from_name(source)) {
            case Rank1Lattice::Source::mixed_radix:
              return build_mixed_radix(I);
            case Rank1Lattice::Source::crt:
              return build_crt(I);
            case Rank1Lattice::Source::cbc:
              return build_cbc(I);
            default:
              throw validation_error("cannot build source kind: " + source);
          }
        },
        "freqs"_a, "source"_a, "source is mixed-radix, crt, or cbc.");
  m.def("is_reconstructing", &is_reconstructing, "freqs"_a, "lattice"_a);
  m.def("lattice_node", &lattice_node, "lattice"_a, "j"_a,
        "Node j of the lattice as floats in [0,1)^d.");

  py::class_<MultiLatticePlan>(m, "MultiLatticePlan")
      .def_property_readonly(
          "variant",
          [](const MultiLatticePlan& p) { return std::string(variant_name(p.variant)); })
      .def_property_readonly("z", [](const MultiLatticePlan& p) { return p.z; })
      .def_property_readonly("source_m",
                             [](const MultiLatticePlan& p) { return p.source_m; })
      .def_property_readonly("spread",
                             [](const MultiLatticePlan& p) { return p.spread; })
      .def_property_readonly("primes",
                             [](const MultiLatticePlan& p) { return p.primes; })
      .def_property_readonly(
          "assignment", [](const MultiLatticePlan& p) { return p.assignment; })
      .def_property_readonly("lattice_count", &MultiLatticePlan::lattice_count)
      .def_property_readonly("total_samples", &MultiLatticePlan::total_samples);

  m.def("build_plan",
        [](const FrequencySet& I, const Rank1Lattice& single,
           const std::string& variant, unsigned threads) {
          PlanOptions opts;
          opts.threads = threads;
          return variant_from_name(variant) == Variant::full
                     ? build_full(I, single, opts)
                     : build_reduction(I, single, opts);
        },
        "freqs"_a, "lattice"_a, "variant"_a = "full", "threads"_a = 0,
        "Split a reconstructing single lattice into multiple small ones.");
  m.def("verify_plan", &verify_plan, "plan"_a, "freqs"_a,
        "Re-derive every structural guarantee; empty string means all hold.");
  m.def("recompute_recoverable", &recompute_recoverable, "plan"_a, "freqs"_a,
        "Rebuild the per-lattice recoverable lists of a deserialized plan.");
  m.def("full_sample_bound", &full_sample_bound, "size"_a, "spread"_a);
  m.def("reduction_sample_bound", &reduction_sample_bound, "size"_a, "spread"_a);
  m.def("overall_sample_bound", &overall_sample_bound, "size"_a, "d"_a,
        "expansion"_a, "m"_a);

  py::class_<TrigPolynomial>(m, "TrigPolynomial")
      .def(py::init([](FrequencySet support, std::vector<cdouble> coeffs) {
             if (coeffs.size() != support.size())
               throw validation_error(
                   "coefficient count must equal the support size");
             return TrigPolynomial{std::move(support), std::move(coeffs)};
           }),
           "support"_a, "coeffs"_a)
      .def_readonly("support", &TrigPolynomial::support)
      .def_readonly("coeffs", &TrigPolynomial::coeffs)
      .def("__call__",
           [](const TrigPolynomial& p, const std::vector<double>& x) {
             return eval_poly(p, x);
           },
           "x"_a);

  m.def("random_polynomial", &random_polynomial, "support"_a, "seed"_a,
        "Coefficients with modulus in [1/2,1] and uniform phase, "
        "reproducible from the seed.");

  py::class_<SampleSet>(m, "SampleSet")
      .def_readonly("fingerprint", &SampleSet::fingerprint)
      .def_readonly("evaluations", &SampleSet::evaluations)
      .def_readonly("samples", &SampleSet::samples);

  m.def("plan_fingerprint", &plan_fingerprint, "plan"_a);
  m.def("sample_function",
        [](const MultiLatticePlan& plan, const PointFunction& f) {
          return sample_on_plan(plan, f);
        },
        "plan"_a, "f"_a,
        "Evaluate a point function at every node of every lattice.");
  m.def("sample_polynomial",
        [](const MultiLatticePlan& plan, const TrigPolynomial& p) {
          return sample_on_plan(plan, p);
        },
        "plan"_a, "poly"_a,
        "Spectral fast path: one backward transform per lattice.");

  m.def("reconstruct_direct", &reconstruct_direct, "plan"_a, "support"_a,
        "samples"_a);
  m.def("reconstruct_average", &reconstruct_average, "plan"_a, "support"_a,
        "samples"_a);
  m.def("reconstruct_peeling", &reconstruct_peeling, "plan"_a, "support"_a,
        "samples"_a);

  m.def("g3", &g3, "x"_a, "Built-in 1-periodic test function (unit L2 norm).");
  m.def("g3d", &g3d, "x"_a, "Tensor product of g3 over the coordinates.");
  m.def("g3_coeff", &g3_coeff, "k"_a, "Closed-form Fourier coefficient of g3.");
  m.def("g3d_coeff",
        [](const std::vector<std::int32_t>& k) {
          return g3d_coeff(std::span<const std::int32_t>(k.data(), k.size()));
        },
        "k"_a);
  m.def("g3d_rel_l2_error", &g3d_rel_l2_error, "support"_a, "coeffs"_a,
        "Relative L2 distance from the tensor test function to the "
        "polynomial with these coefficients on this support.");

  m.def("freqset_to_text", [](const FrequencySet& v) {
    return to_text(v, [](std::ostream& os, const FrequencySet& x) {
      write_freqset(os, x);
    });
  });
  m.def("freqset_from_text", [](const std::string& t) {
    return from_text(t, [](std::istream& is) { return read_freqset(is); });
  });
  m.def("lattice_to_text", [](const Rank1Lattice& v) {
    return to_text(v, [](std::ostream& os, const Rank1Lattice& x) {
      write_lattice(os, x);
    });
  });
  m.def("lattice_from_text", [](const std::string& t) {
    return from_text(t, [](std::istream& is) { return read_lattice(is); });
  });
  m.def("plan_to_text", [](const MultiLatticePlan& v) {
    return to_text(v, [](std::ostream& os, const MultiLatticePlan& x) {
      write_plan(os, x);
    });
  });
  m.def("plan_from_text", [](const std::string& t) {
    return from_text(t, [](std::istream& is) { return read_plan(is); });
  });
}
