#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "reidgale/bundles.hpp"
#include "reidgale/fan.hpp"
#include "reidgale/gale.hpp"
#include "reidgale/group.hpp"
#include "reidgale/surfaces.hpp"
#include "reidgale/zmat.hpp"

namespace py = pybind11;
using namespace reidgale;

namespace {

// cpp_int <-> python int through decimal strings; entries stay exact.
py::object int_to_py(const Int& x) {
    return py::int_(py::str(x.str()));
}

Int int_from_py(py::handle h) {
    return Int(py::str(h).cast<std::string>());
}

py::list matrix_to_py(const ZMatrix& m) {
    py::list rows;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        py::list row;
        for (std::size_t j = 0; j < m.cols(); ++j) row.append(int_to_py(m(i, j)));
        rows.append(row);
    }
    return rows;
}

ZMatrix matrix_from_py(py::sequence rows, std::size_t forced_cols = SIZE_MAX) {
    std::size_t nrows = rows.size();
    std::size_t ncols = 0;
    if (nrows) ncols = py::len(rows[0]);
    else if (forced_cols != SIZE_MAX) ncols = 0;
    ZMatrix m(nrows, ncols);
    for (std::size_t i = 0; i < nrows; ++i) {
        py::sequence row = rows[i].cast<py::sequence>();
        if (row.size() != ncols) throw py::value_error("ragged matrix");
        for (std::size_t j = 0; j < ncols; ++j) m(i, j) = int_from_py(row[j]);
    }
    return m;
}

py::object report_to_py(const GaleReport& rep) {
    py::module_ json = py::module_::import("json");
    return json.attr("loads")(rep.to_json().dump());
}

void translate_error(const Error& e) {
    PyErr_SetString(PyExc_ValueError, e.what());
}

} // namespace

PYBIND11_MODULE(_reidgale, m) {
    m.doc() = "Gale duality and Reid's recipe for crepant resolutions of "
              "cyclic quotient singularities";

    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            translate_error(e);
        }
    });

    m.def("hermite_normal_form", [](py::sequence mat) {
        HermiteResult res = hermite_normal_form(matrix_from_py(mat));
        return py::make_tuple(matrix_to_py(res.h), matrix_to_py(res.u));
    });
    m.def("smith_normal_form", [](py::sequence mat) {
        SNFDecomposition res = smith_normal_form(matrix_from_py(mat));
        return py::make_tuple(matrix_to_py(res.u), matrix_to_py(res.d), matrix_to_py(res.v));
    });
    m.def("invariant_factors", [](py::sequence mat) {
        py::list out;
        for (const Int& f : smith_normal_form(matrix_from_py(mat)).invariant_factors())
            out.append(int_to_py(f));
        return out;
    });
    m.def("kernel_basis", [](py::sequence mat) {
        return matrix_to_py(kernel_basis(matrix_from_py(mat)));
    });
    m.def("gale_dual", [](py::sequence mat) {
        return matrix_to_py(gale_dual(matrix_from_py(mat)));
    });
    m.def("verify_short_exact", [](py::sequence k, py::sequence l) {
        ZMatrix lm = matrix_from_py(l);
        ZMatrix km = matrix_from_py(k);
        ExactnessReport rep = verify_short_exact(km, lm);
        py::dict out;
        out["pass"] = rep.pass();
        out["composite_zero"] = rep.composite_zero;
        out["kernel_matches"] = rep.kernel_matches;
        out["surjective"] = rep.surjective;
        out["failures"] = rep.failures;
        return out;
    });

    m.def("junior_points", [](long long r, long long a, long long b, long long c) {
        py::list out;
        for (const JuniorPoint& jp : junior_points(validate_action(r, a, b, c))) {
            py::dict d;
            d["p"] = py::make_tuple(jp.p[0], jp.p[1], jp.p[2]);
            d["boundary"] = jp.boundary;
            d["corner"] = jp.corner;
            out.append(d);
        }
        return out;
    });

    m.def(
        "analyze",
        [](const std::string& fan_path) { return report_to_py(analyze(CrepantFan::load(fan_path))); },
        py::arg("fan_path"));

    m.def(
        "analyze_data",
        [](long long r, std::tuple<long long, long long, long long> weights, py::sequence points,
           py::sequence triangles) {
            CyclicAction act = validate_action(r, std::get<0>(weights), std::get<1>(weights),
                                               std::get<2>(weights));
            std::vector<Point> pts;
            for (py::handle h : points) {
                auto t = h.cast<std::tuple<long long, long long, long long>>();
                pts.push_back({std::get<0>(t), std::get<1>(t), std::get<2>(t)});
            }
            std::vector<std::array<int, 3>> tris;
            for (py::handle h : triangles) {
                auto t = h.cast<std::tuple<int, int, int>>();
                tris.push_back({std::get<0>(t), std::get<1>(t), std::get<2>(t)});
            }
            return report_to_py(analyze(CrepantFan::from_data(act, std::move(pts), std::move(tris))));
        },
        py::arg("r"), py::arg("weights"), py::arg("points"), py::arg("triangles"));

    m.def(
        "matrix_mode",
        [](py::sequence l, py::object k, py::object v, py::object labels) {
            ZMatrix lm = matrix_from_py(l);
            std::optional<ZMatrix> km;
            if (!k.is_none()) {
                ZMatrix parsed = matrix_from_py(k.cast<py::sequence>());
                if (parsed.rows() == 0) parsed = ZMatrix(lm.cols(), 0);
                km = parsed;
            }
            std::vector<Int> vv;
            if (!v.is_none())
                for (py::handle h : v.cast<py::sequence>()) vv.push_back(int_from_py(h));
            std::vector<std::string> ll;
            if (!labels.is_none())
                for (py::handle h : labels.cast<py::sequence>()) ll.push_back(py::str(h));
            return report_to_py(matrix_mode(lm, km, std::move(vv), std::move(ll)));
        },
        py::arg("L"), py::arg("K") = py::none(), py::arg("v") = py::none(),
        py::arg("labels") = py::none());

    m.def("validate_fan", [](const std::string& path) {
        std::ifstream in(path);
        if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
        std::stringstream ss;
        ss << in.rdbuf();
        py::list out;
        for (const FanCheck& c : CrepantFan::validate_report(ss.str())) {
            py::dict d;
            d["name"] = c.name;
            d["pass"] = c.pass;
            d["detail"] = c.detail;
            out.append(d);
        }
        return out;
    });
}
