#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <algorithm>
#include <string>

#include "chanvese/image_io.hpp"
#include "chanvese/levelset.hpp"
#include "chanvese/metrics.hpp"
#include "chanvese/solver.hpp"

namespace py = pybind11;
using namespace chanvese;

namespace {

using DoubleArray = py::array_t<double, py::array::c_style | py::array::forcecast>;
using MaskArray = py::array_t<bool, py::array::c_style | py::array::forcecast>;

std::pair<int, int> shape_of(const py::array& a, const char* name) {
  if (a.ndim() != 2) throw DimensionError(std::string(name) + " must be a 2-D array");
  return {static_cast<int>(a.shape(1)), static_cast<int>(a.shape(0))};
}

std::vector<double> copy_values(const DoubleArray& a) {
  return std::vector<double>(a.data(), a.data() + a.size());
}

GrayImage to_image(const DoubleArray& a) {
  const auto [w, h] = shape_of(a, "image");
  return GrayImage(w, h, copy_values(a));
}

LevelSetField to_phi(const DoubleArray& a, double dx = 1.0, double dy = 1.0) {
  const auto [w, h] = shape_of(a, "phi");
  return LevelSetField(ScalarField(w, h, copy_values(a), dx, dy));
}

SegmentationMask to_mask(const MaskArray& a) {
  const auto [w, h] = shape_of(a, "mask");
  SegmentationMask m(w, h);
  std::copy(a.data(), a.data() + a.size(), m.values().begin());
  return m;
}

template <typename T>
py::array_t<T> to_array(const Grid<T>& g) {
  py::array_t<T> out({g.height(), g.width()});
  std::copy(g.values().begin(), g.values().end(), out.mutable_data());
  return out;
}

py::array_t<bool> to_array(const SegmentationMask& m) {
  py::array_t<bool> out({m.height(), m.width()});
  std::transform(m.values().begin(), m.values().end(), out.mutable_data(),
                 [](std::uint8_t v) { return v != 0; });
  return out;
}

py::list contours_to_list(const ContourSet& c) {
  py::list out;
  for (const Polyline& line : c.polylines) {
    py::array_t<double> pts({static_cast<py::ssize_t>(line.points.size()), py::ssize_t{2}});
    double* p = pts.mutable_data();
    for (const Point& q : line.points) {
      *p++ = q.x;
      *p++ = q.y;
    }
    out.append(py::make_tuple(pts, line.closed));
  }
  return out;
}

py::dict record_to_dict(const EnergyRecord& r) {
  py::dict d;
  d["fit_inside"] = r.fit_inside;
  d["fit_outside"] = r.fit_outside;
  d["length"] = r.length_term;
  d["area"] = r.area_term;
  d["total"] = r.total;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Chan-Vese level-set segmentation";

  auto error = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<IoError>(m, "IoError", error);
  py::register_exception<FormatError>(m, "FormatError", error);
  py::register_exception<DimensionError>(m, "DimensionError", error);
  auto parameter = py::register_exception<ParameterError>(m, "ParameterError", error);
  py::register_exception<CflError>(m, "CflError", parameter);
  py::register_exception<DegenerateInputError>(m, "DegenerateInputError", error);
  py::register_exception<NumericalInstabilityError>(m, "NumericalInstabilityError", error);

  py::enum_<BoundaryMode>(m, "BoundaryMode")
      .value("REPLICATE", BoundaryMode::Replicate)
      .value("PERIODIC", BoundaryMode::Periodic);

  py::class_<SolverParams>(m, "SolverParams")
      .def(py::init<>())
      .def_readwrite("lambda1", &SolverParams::lambda1)
      .def_readwrite("lambda2", &SolverParams::lambda2)
      .def_readwrite("mu", &SolverParams::mu)
      .def_readwrite("nu", &SolverParams::nu)
      .def_readwrite("tau", &SolverParams::tau)
      .def_readwrite("max_iters", &SolverParams::max_iters)
      .def_readwrite("band_width", &SolverParams::band_width)
      .def_readwrite("reinit_every", &SolverParams::reinit_every)
      .def_readwrite("reinit_sweeps", &SolverParams::reinit_sweeps)
      .def_readwrite("convergence_tol", &SolverParams::convergence_tol)
      .def_readwrite("convergence_window", &SolverParams::convergence_window)
      .def_readwrite("convergence_interval", &SolverParams::convergence_interval)
      .def_readwrite("boundary", &SolverParams::boundary)
      .def_readwrite("dx", &SolverParams::dx)
      .def_readwrite("dy", &SolverParams::dy)
      .def_readwrite("curvature_eps", &SolverParams::curvature_eps)
      .def("max_tau", &SolverParams::max_tau)
      .def("__repr__", [](const SolverParams& p) {
        return "SolverParams(lambda1=" + std::to_string(p.lambda1) + ", lambda2=" +
               std::to_string(p.lambda2) + ", mu=" + std::to_string(p.mu) + ", nu=" +
               std::to_string(p.nu) + ", tau=" + std::to_string(p.tau) + ", max_iters=" +
               std::to_string(p.max_iters) + ")";
      });

  py::class_<SegmentationResult>(m, "SegmentationResult")
      .def_property_readonly("phi", [](const SegmentationResult& r) { return to_array(r.phi.field()); })
      .def_property_readonly("mask", [](const SegmentationResult& r) { return to_array(r.mask); })
      .def_property_readonly("contours",
                             [](const SegmentationResult& r) { return contours_to_list(r.contours); })
      .def_property_readonly("trace",
                             [](const SegmentationResult& r) {
                               py::list out;
                               for (const auto& rec : r.trace) out.append(record_to_dict(rec));
                               return out;
                             })
      .def_readonly("iterations", &SegmentationResult::iterations)
      .def_readonly("converged", &SegmentationResult::converged)
      .def_readonly("u", &SegmentationResult::u)
      .def_readonly("v", &SegmentationResult::v);

  // image_io
  m.def("load_image", [](const std::filesystem::path& p) { return to_array(load_image(p)); },
        py::arg("path"), "Grayscale samples on the [0, 255] scale, shape (height, width).");
  m.def("normalize", [](const DoubleArray& img) { return to_array(normalize(to_image(img))); },
        py::arg("image"));
  m.def("gaussian_smooth",
        [](const DoubleArray& img, double sigma) {
          return to_array(gaussian_smooth(to_image(img), sigma));
        },
        py::arg("image"), py::arg("sigma"));
  m.def("save_mask", [](const MaskArray& mask, const std::filesystem::path& p) {
    save_mask(to_mask(mask), p);
  }, py::arg("mask"), py::arg("path"));
  m.def("load_mask", [](const std::filesystem::path& p) { return to_array(load_mask(p)); },
        py::arg("path"));

  // levelset
  m.def("sdf_circle",
        [](int width, int height, double cx, double cy, double r) {
          return to_array(sdf_circle(width, height, cx, cy, r).field());
        },
        py::arg("width"), py::arg("height"), py::arg("cx"), py::arg("cy"), py::arg("r"));
  m.def("sdf_from_mask",
        [](const MaskArray& mask) { return to_array(sdf_from_mask(to_mask(mask)).field()); },
        py::arg("mask"));
  m.def("curvature",
        [](const DoubleArray& phi, BoundaryMode mode) {
          return to_array(curvature(to_phi(phi), kCurvatureEps, mode));
        },
        py::arg("phi"), py::arg("boundary") = BoundaryMode::Replicate);
  m.def("upwind_norm",
        [](const DoubleArray& phi, int sign, BoundaryMode mode) {
          return to_array(upwind_norm(to_phi(phi), sign, mode));
        },
        py::arg("phi"), py::arg("sign"), py::arg("boundary") = BoundaryMode::Replicate);
  m.def("sussman_reinit",
        [](const DoubleArray& phi, double dt, int iterations, BoundaryMode mode) {
          return to_array(sussman_reinit(to_phi(phi), dt, iterations, mode).field());
        },
        py::arg("phi"), py::arg("dt") = 0.5, py::arg("iterations") = 10,
        py::arg("boundary") = BoundaryMode::Replicate);
  m.def("extract_contour",
        [](const DoubleArray& phi) { return contours_to_list(extract_contour(to_phi(phi))); },
        py::arg("phi"), "List of (points, closed); points has shape (n, 2) holding x, y.");

  // solver
  m.def("cfl_check", &cfl_check, py::arg("params"));
  m.def("region_means",
        [](const DoubleArray& img, const DoubleArray& phi) {
          const RegionMeans r = region_means(to_image(img), to_phi(phi));
          return py::make_tuple(r.u, r.v);
        },
        py::arg("image"), py::arg("phi"));
  m.def("energy",
        [](const DoubleArray& img, const DoubleArray& phi, const SolverParams& p) {
          return record_to_dict(energy(to_image(img), to_phi(phi, p.dx, p.dy), p));
        },
        py::arg("image"), py::arg("phi"), py::arg("params") = SolverParams{});
  m.def("step",
        [](const DoubleArray& img, const DoubleArray& phi, double u, double v,
           const SolverParams& p) {
          return to_array(step(to_image(img), to_phi(phi, p.dx, p.dy), RegionMeans{u, v}, p).field());
        },
        py::arg("image"), py::arg("phi"), py::arg("u"), py::arg("v"),
        py::arg("params") = SolverParams{});
  m.def("run",
        [](const DoubleArray& img, const DoubleArray& phi0, const SolverParams& p) {
          const GrayImage image = to_image(img);
          const LevelSetField phi = to_phi(phi0, p.dx, p.dy);
          py::gil_scoped_release release;
          return run(image, phi, p);
        },
        py::arg("image"), py::arg("phi0"), py::arg("params") = SolverParams{});

  // metrics
  m.def("dice", [](const MaskArray& a, const MaskArray& b) { return dice(to_mask(a), to_mask(b)); },
        py::arg("a"), py::arg("b"));
  m.def("iou", [](const MaskArray& a, const MaskArray& b) { return iou(to_mask(a), to_mask(b)); },
        py::arg("a"), py::arg("b"));
  m.def("otsu_threshold",
        [](const DoubleArray& img, bool bright_inside) {
          return to_array(otsu_threshold(to_image(img), bright_inside ? OtsuPolarity::BrightInside
                                                                      : OtsuPolarity::DarkInside));
        },
        py::arg("image"), py::arg("bright_inside") = true);
}
