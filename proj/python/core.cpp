#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "gramtrans/analytics.hpp"
#include "gramtrans/app.hpp"
#include "gramtrans/lexicon.hpp"
#include "gramtrans/realizer.hpp"

namespace py = pybind11;
using namespace gramtrans;

// JSON crosses the boundary as text; the package wrapper does the dumps/loads.
namespace {

GrammarUnit unit(const std::string& text) { return json::parse(text).get<GrammarUnit>(); }

std::optional<GrammarUnit> maybe_unit(const std::optional<std::string>& text) {
  if (!text) return std::nullopt;
  return unit(*text);
}

std::vector<GrammarUnit> units(const std::string& text) { return json::parse(text).get<std::vector<GrammarUnit>>(); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "gramtrans native core";
  static py::exception<Error> error(m, "Error");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      error(e.what());
    } catch (const json::exception& e) {
      PyErr_SetString(PyExc_ValueError, e.what());
    }
  });

  m.def("category_labels", [] {
    std::vector<std::string> out;
    for (auto c : all_categories()) out.emplace_back(to_string(c));
    return out;
  });

  m.def(
      "classify_change",
      [](const std::optional<std::string>& before, const std::optional<std::string>& after,
         const std::optional<std::string>& before_text, const std::optional<std::string>& after_text) {
        std::vector<std::string> out;
        for (auto c : classify_change(maybe_unit(before), maybe_unit(after), before_text, after_text)) {
          out.emplace_back(to_string(c));
        }
        return out;
      },
      py::arg("before"), py::arg("after"), py::arg("before_text") = py::none(), py::arg("after_text") = py::none());

  m.def("validate_unit", [](const std::string& u) {
    std::vector<std::string> out;
    for (const auto& v : validate_unit(unit(u))) out.push_back(v.message);
    return out;
  });

  m.def("match_rate", [](const std::string& auto_units, const std::string& edited_units) {
    return match_units(units(auto_units), units(edited_units)).match_rate;
  });

  m.def("realize_unit", [](const std::string& u, const std::string& lexicon_dir) {
    const GrammarUnit g = unit(u);
    return realize_unit(g, load_context(lexicon_dir, g.locale));
  });

  m.def("generate", [](const std::string& project, const std::string& data, const std::string& locale,
                       const std::string& lexicon_dir) {
    const Locale l = parse_locale(locale);
    return generate_jsonl(load_project(project), load_records(data), load_context(lexicon_dir, l));
  });

  m.def("analyze", [](const std::string& log, const std::string& units_path, const std::string& out_dir) {
    const AnalysisSummary s = run_analyze(log, units_path, out_dir);
    py::dict d;
    d["changed_units"] = s.changed.changed_units;
    d["unit_total"] = s.changed.unit_total;
    d["changed_fraction"] = s.changed.fraction();
    d["match_rate"] = s.match_rate;
    d["records"] = s.records;
    return d;
  });
}
