#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>
#include <sstream>

#include "convbrowse/catalog.hpp"
#include "convbrowse/engine.hpp"
#include "convbrowse/errors.hpp"
#include "convbrowse/input.hpp"
#include "convbrowse/search.hpp"
#include "convbrowse/simulator.hpp"
#include "convbrowse/synthetic.hpp"
#include "convbrowse/transcript.hpp"

namespace py = pybind11;
namespace cb = convbrowse;

namespace {

using CatalogPtr = std::shared_ptr<const cb::CatalogIndex>;

py::object to_python(const cb::Json& j) {
  switch (j.type()) {
    case cb::Json::value_t::null: return py::none();
    case cb::Json::value_t::boolean: return py::bool_(j.get<bool>());
    case cb::Json::value_t::number_integer: return py::int_(j.get<std::int64_t>());
    case cb::Json::value_t::number_unsigned: return py::int_(j.get<std::uint64_t>());
    case cb::Json::value_t::number_float: return py::float_(j.get<double>());
    case cb::Json::value_t::string: return py::str(j.get<std::string>());
    case cb::Json::value_t::array: {
      py::list out;
      for (const auto& v : j) out.append(to_python(v));
      return out;
    }
    case cb::Json::value_t::object: {
      py::dict out;
      for (const auto& [k, v] : j.items()) out[py::str(k)] = to_python(v);
      return out;
    }
    default: return py::none();
  }
}

std::vector<cb::EntityRef> entities_of(const std::vector<std::pair<std::string, std::string>>& pairs) {
  std::vector<cb::EntityRef> out;
  for (const auto& [a, v] : pairs) out.push_back({a, v});
  return out;
}

cb::SelectionConfig selection(std::size_t l, std::optional<std::size_t> linear_threshold,
                              std::size_t max_turns) {
  cb::SelectionConfig c;
  c.l = l;
  c.linear_threshold = linear_threshold;
  c.max_turns = max_turns;
  c.validate();
  return c;
}

cb::CatalogManifest manifest_of(const std::string& identifier,
                                const std::vector<std::string>& browsable, const std::string& name,
                                char delimiter, char separator) {
  cb::CatalogManifest m;
  m.identifier_attribute = identifier;
  m.browsable_attributes = browsable;
  m.name = name;
  m.multi_value_delimiter = delimiter;
  m.field_separator = separator;
  return m;
}

/// One dialogue: an engine over a shared catalog plus its live state.
class Session {
 public:
  Session(CatalogPtr catalog, cb::SelectionConfig config)
      : catalog_(std::move(catalog)), engine_(*catalog_, config) {
    auto [state, message] = engine_.start_session();
    state_ = std::move(state);
    opening_ = std::move(message);
  }

  py::object opening() const { return to_python(cb::to_json(opening_)); }

  py::object act(const std::string& kind,
                 const std::vector<std::pair<std::string, std::string>>& entities) {
    const auto parsed = cb::parse_action_kind(kind);
    if (!parsed) throw cb::ProtocolError("malformed_action", "unknown action kind '" + kind + "'");
    return to_python(cb::to_json(engine_.apply_action(state_, {*parsed, entities_of(entities)})));
  }

  py::object say(const std::string& text) {
    const auto action = cb::parse_user_input(text, state_.latest_message());
    return to_python(cb::to_json(engine_.apply_action(state_, action)));
  }

  py::object latest() const { return to_python(cb::to_json(state_.latest_message())); }
  std::string phase() const { return std::string(cb::to_string(state_.phase)); }
  std::size_t turn() const { return state_.turn; }
  bool done() const { return state_.done(); }
  std::vector<std::string> candidates() const { return cb::item_ids_of(*catalog_, state_.candidates); }
  std::string transcript() const { return cb::export_transcript(state_.transcript); }

 private:
  CatalogPtr catalog_;
  cb::DialogueEngine engine_;
  cb::SessionState state_;
  cb::Message opening_;
};

class Search {
 public:
  Search(CatalogPtr catalog, bool stemming)
      : catalog_(std::move(catalog)), index_(cb::SearchIndex::build(*catalog_, {stemming})) {}

  py::list search(const std::string& query, std::size_t k) const {
    py::list out;
    for (const auto& h : index_.search(query, k)) {
      py::dict d;
      d["item_id"] = h.item_id;
      d["score"] = h.score;
      d["rank"] = h.rank;
      out.append(d);
    }
    return out;
  }

  std::vector<std::string> vocabulary() const { return index_.vocabulary(); }

 private:
  CatalogPtr catalog_;
  cb::SearchIndex index_;
};

}  // namespace

PYBIND11_MODULE(_convbrowse, m) {
  m.doc() = "Conversational browsing over tabular catalogs";

  auto error = py::register_exception<cb::Error>(m, "Error");
  py::register_exception<cb::ConfigurationError>(m, "ConfigurationError", error);
  py::register_exception<cb::IngestionError>(m, "IngestionError", error);
  auto contract = py::register_exception<cb::ContractError>(m, "ContractError", error);
  py::register_exception<cb::UnknownEntityError>(m, "UnknownEntityError", contract);
  py::register_exception<cb::UnrecognizedInputError>(m, "UnrecognizedInputError", error);
  // Leaked on purpose: must outlive interpreter shutdown.
  static auto* protocol = new py::exception<cb::ProtocolError>(m, "ProtocolError", error.ptr());
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const cb::ProtocolError& e) {
      py::object instance = py::reinterpret_borrow<py::object>(*protocol)(e.what());
      instance.attr("code") = e.code();
      PyErr_SetObject(protocol->ptr(), instance.ptr());
    }
  });

  py::class_<cb::CatalogIndex, std::shared_ptr<cb::CatalogIndex>>(m, "Catalog")
      .def_static(
          "from_files",
          [](const std::string& table, const std::string& manifest) {
            return std::make_shared<cb::CatalogIndex>(
                cb::CatalogIndex::load_file(table, cb::CatalogManifest::load_file(manifest)));
          },
          py::arg("table"), py::arg("manifest"))
      .def_static(
          "from_string",
          [](const std::string& text, const std::string& identifier,
             const std::vector<std::string>& browsable, const std::string& name, char delimiter,
             char separator) {
            return std::make_shared<cb::CatalogIndex>(cb::CatalogIndex::load_string(
                text, manifest_of(identifier, browsable, name, delimiter, separator)));
          },
          py::arg("text"), py::arg("identifier"), py::arg("browsable"),
          py::arg("name") = "the catalog", py::arg("multi_value_delimiter") = ',',
          py::arg("field_separator") = ';')
      .def_property_readonly("item_count", &cb::CatalogIndex::item_count)
      .def_property_readonly("name", [](const cb::CatalogIndex& c) { return c.manifest().name; })
      .def_property_readonly("attributes",
                             [](const cb::CatalogIndex& c) {
                               std::vector<std::string> out;
                               for (const auto& a : c.attributes()) out.push_back(a.name);
                               return out;
                             })
      .def("item_ids",
           [](const cb::CatalogIndex& c) { return cb::item_ids_of(c, c.all_items()); })
      .def("item_record",
           [](const cb::CatalogIndex& c, const std::string& id) {
             py::dict values;
             for (const auto& [a, v] : c.item_record(id).values) values[py::str(a)] = v;
             return values;
           })
      .def(
          "ranked_entities",
          [](const cb::CatalogIndex& c, const std::string& attribute,
             std::optional<std::vector<std::string>> items, std::size_t offset, std::size_t k) {
            const auto cand = items ? cb::candidates_of(c, *items) : c.all_items();
            std::vector<std::pair<std::string, std::size_t>> out;
            for (const auto& r : cb::ranked_entities(c, attribute, cand, offset, k)) {
              out.emplace_back(r.entity.value, r.score);
            }
            return out;
          },
          py::arg("attribute"), py::arg("items") = py::none(), py::arg("offset") = 0,
          py::arg("k") = 6)
      .def(
          "filter_items",
          [](const cb::CatalogIndex& c, const std::vector<std::string>& items,
             const std::vector<std::pair<std::string, std::string>>& entities) {
            return cb::item_ids_of(
                c, cb::filter_items(c, cb::candidates_of(c, items), entities_of(entities)));
          },
          py::arg("items"), py::arg("entities"))
      .def(
          "exclude_items",
          [](const cb::CatalogIndex& c, const std::vector<std::string>& items,
             const std::vector<std::pair<std::string, std::string>>& entities) {
            return cb::item_ids_of(
                c, cb::exclude_items(c, cb::candidates_of(c, items), entities_of(entities)));
          },
          py::arg("items"), py::arg("entities"));

  py::class_<Session>(m, "Session")
      .def(py::init([](CatalogPtr catalog, std::size_t l, std::optional<std::size_t> linear,
                       std::size_t max_turns) {
             return Session(std::move(catalog), selection(l, linear, max_turns));
           }),
           py::arg("catalog"), py::arg("l") = 6, py::arg("linear_threshold") = py::none(),
           py::arg("max_turns") = 200)
      .def_property_readonly("opening", &Session::opening)
      .def_property_readonly("latest", &Session::latest)
      .def_property_readonly("phase", &Session::phase)
      .def_property_readonly("turn", &Session::turn)
      .def_property_readonly("done", &Session::done)
      .def_property_readonly("candidates", &Session::candidates)
      .def("act", &Session::act, py::arg("kind"),
           py::arg("entities") = std::vector<std::pair<std::string, std::string>>{})
      .def("say", &Session::say, py::arg("text"))
      .def("transcript", &Session::transcript);

  py::class_<Search>(m, "SearchIndex")
      .def(py::init<CatalogPtr, bool>(), py::arg("catalog"), py::arg("stemming") = false)
      .def("search", &Search::search, py::arg("query"), py::arg("k") = 10)
      .def("vocabulary", &Search::vocabulary);

  m.def("tokenize", &cb::tokenize, py::arg("text"), py::arg("stemming") = false);

  m.def(
      "simulate",
      [](CatalogPtr catalog, const std::string& item, std::size_t l, std::size_t max_turns) {
        const auto r = cb::simulate(*catalog, selection(l, std::nullopt, max_turns),
                                    cb::GoalSpec::for_item(*catalog, item));
        py::list actions;
        for (const auto& a : r.action_trace) actions.append(to_python(cb::to_json(a)));
        py::dict d;
        d["item"] = r.goal.item;
        d["turns"] = r.turns;
        d["success"] = r.success;
        d["actions"] = actions;
        d["transcript"] = cb::export_transcript(r.transcript);
        return d;
      },
      py::arg("catalog"), py::arg("item"), py::arg("l") = 6, py::arg("max_turns") = 200);

  m.def(
      "brute_force_min_turns",
      [](CatalogPtr catalog, const std::string& item, std::size_t l) {
        return cb::brute_force_min_turns(*catalog, selection(l, std::nullopt, 200),
                                         cb::GoalSpec::for_item(*catalog, item));
      },
      py::arg("catalog"), py::arg("item"), py::arg("l") = 6);

  m.def(
      "sweep",
      [](CatalogPtr catalog, std::vector<std::size_t> l_values, std::size_t runs,
         std::uint64_t seed, unsigned threads, std::size_t max_turns) {
        cb::SweepOptions options;
        options.threads = threads;
        options.base.max_turns = max_turns;
        cb::SweepReport report;
        {
          py::gil_scoped_release release;
          report = cb::sweep(*catalog, l_values, runs, seed, options);
        }
        py::list rows;
        for (const auto& r : report.rows) {
          py::dict d;
          d["l"] = r.l;
          d["runs"] = r.runs;
          d["failures"] = r.failures;
          d["min"] = r.min_turns;
          d["mean"] = r.mean_turns;
          d["max"] = r.max_turns;
          rows.append(d);
        }
        return rows;
      },
      py::arg("catalog"), py::arg("l_values"), py::arg("runs") = 500, py::arg("seed") = 42,
      py::arg("threads") = 0, py::arg("max_turns") = 200);

  m.def(
      "generate_synthetic_catalog",
      [](std::uint64_t seed, std::size_t items, const std::string& spec) {
        return cb::generate_synthetic_catalog(
            seed, items, spec.empty() ? cb::default_attribute_spec() : cb::parse_attribute_spec(spec));
      },
      py::arg("seed") = 42, py::arg("items") = 2000, py::arg("attributes") = "");
}
