#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "caseledger/bench.hpp"
#include "caseledger/cli.hpp"
#include "caseledger/extraction.hpp"
#include "caseledger/json_codec.hpp"
#include "caseledger/ledger.hpp"
#include "caseledger/rbac.hpp"
#include "caseledger/record_store.hpp"
#include "caseledger/tokens.hpp"
#include "caseledger/workload.hpp"

namespace py = pybind11;
using namespace caseledger;

namespace {

struct PyFixture {
  Fixture fx;

  std::vector<std::string> cases() const {
    std::vector<std::string> out;
    for (const auto& c : fx.workload.cases) out.push_back(c.str());
    return out;
  }

  py::dict extract(const std::string& case_id, const std::string& method) const {
    auto m = parse_extraction_method(method);
    if (!m) throw py::value_error("unknown extraction method: " + method);
    auto result = caseledger::extract(*m, *fx.store, *fx.ledger, CaseId(case_id));
    py::list lines;
    for (const auto& r : result.records) lines.append(record_to_line(r));
    py::dict d;
    d["case"] = case_id;
    d["method"] = std::string(to_string(result.method));
    d["records"] = lines;
    d["blocks_scanned"] = result.blocks_scanned;
    d["elapsed_ns"] = result.elapsed.count();
    if (result.verification) d["verdict"] = std::string(to_string(result.verification->verdict));
    else d["verdict"] = py::none();
    return d;
  }

  std::string verify(const std::string& case_id) const {
    CaseId c(case_id);
    auto history = fx.ledger->case_root_history(c);
    auto report = fx.store->verify_case_records(c, fx.ledger->latest_case_root(c).first, history);
    return std::string(to_string(report.verdict));
  }

  std::pair<std::string, std::uint64_t> latest_root(const std::string& case_id) const {
    auto [root, block] = fx.ledger->latest_case_root(CaseId(case_id));
    return {root.hex(), block};
  }

  std::vector<std::string> case_lines(const std::string& case_id) const { return fx.store->case_lines(CaseId(case_id)); }
  void replace_case_lines(const std::string& case_id, std::vector<std::string> lines) {
    fx.store->replace_case_lines(CaseId(case_id), std::move(lines));
  }

  bool validate_chain() const { return caseledger::validate_chain(fx.ledger->blocks()).ok; }
  std::string state_json() const { return fx.ledger->state_snapshot().to_json().dump(); }
};

PyFixture make_fixture(std::size_t num_cases, std::size_t num_blocks, std::size_t tx_per_block, std::uint64_t seed,
                       bool with_case_roots) {
  WorkloadSpec spec;
  spec.num_cases = num_cases;
  spec.num_blocks = num_blocks;
  spec.tx_per_block = tx_per_block;
  spec.seed = seed;
  FixtureOptions options;
  options.with_case_roots = with_case_roots;
  return PyFixture{build_fixture(spec, options)};
}

py::dict check_access_impl(const std::string& declared_stage, const std::string& actual_stage,
                           std::optional<std::string> role, std::optional<std::string> policy_json) {
  auto actual = parse_stage(actual_stage);
  if (!actual) throw py::value_error("unknown stage: " + actual_stage);
  PolicyMatrix policy =
      policy_json ? PolicyMatrix::from_json(nlohmann::json::parse(*policy_json)) : PolicyMatrix::defaults();

  UserRegistry registry;
  KeyPair user = derive_workload_key(0, 0);
  if (role) {
    auto r = parse_role(*role);
    if (!r) throw py::value_error("unknown role: " + *role);
    registry.register_user(user.public_key, *r);
  }
  auto d = retrieve_access_info(declared_stage, user.public_key.fingerprint(), registry, policy, *actual);
  py::dict out;
  out["outcome"] = std::string(to_string(d.outcome));
  std::vector<std::string> rights;
  for (auto r : d.rights.to_vector()) rights.emplace_back(to_string(r));
  out["rights"] = rights;
  return out;
}

std::vector<py::dict> rows_to_dicts(const std::vector<BenchRow>& rows) {
  std::vector<py::dict> out;
  for (const auto& row : rows) {
    py::dict d;
    d["experiment"] = row.experiment;
    d["blocks"] = row.blocks;
    d["cases"] = row.cases;
    d["method_or_kind"] = row.method_or_kind;
    d["samples"] = row.stats.samples;
    d["mean_ns"] = row.stats.mean;
    d["median_ns"] = row.stats.median;
    d["q1_ns"] = row.stats.q1;
    d["q3_ns"] = row.stats.q3;
    d["max_ns"] = row.stats.max;
    out.push_back(std::move(d));
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_caseledger, m) {
  m.doc() = "Case provenance ledger";

  static py::exception<Error> error(m, "CaseLedgerError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object exc = py::reinterpret_borrow<py::object>(error.ptr())(e.what());
      exc.attr("code") = std::string(to_string(e.code()));
      PyErr_SetObject(error.ptr(), exc.ptr());
    }
  });

  m.def("digest", [](py::bytes data) { return caseledger::digest(std::string_view(data)).hex(); }, py::arg("data"));

  m.def(
      "original_token_id",
      [](const std::string& case_id, const std::string& file_id, const std::string& content_hex, std::int64_t t) {
        return original_token_id(CaseId(case_id), file_id, Digest::from_hex(content_hex), t).hex();
      },
      py::arg("case_id"), py::arg("file_id"), py::arg("content"), py::arg("time_ms"));

  m.def(
      "derived_token_id",
      [](const std::vector<std::string>& parents, std::int64_t t) {
        std::vector<Digest> ds;
        for (const auto& p : parents) ds.push_back(Digest::from_hex(p));
        return derived_token_id(ds, t).hex();
      },
      py::arg("parents"), py::arg("time_ms"));

  m.def("default_policy_json", &default_policy_json);
  m.def("check_access", &check_access_impl, py::arg("declared_stage"), py::arg("actual_stage"),
        py::arg("role") = py::none(), py::arg("policy_json") = py::none(),
        "Runs the staged access check for a user holding `role` (None for an unregistered user).");

  py::class_<PyFixture>(m, "Fixture")
      .def_property_readonly("height", [](const PyFixture& f) { return f.fx.ledger->height(); })
      .def("cases", &PyFixture::cases)
      .def("extract", &PyFixture::extract, py::arg("case_id"), py::arg("method") = "offchain")
      .def("verify", &PyFixture::verify, py::arg("case_id"))
      .def("latest_root", &PyFixture::latest_root, py::arg("case_id"))
      .def("case_lines", &PyFixture::case_lines, py::arg("case_id"))
      .def("replace_case_lines", &PyFixture::replace_case_lines, py::arg("case_id"), py::arg("lines"))
      .def("validate_chain", &PyFixture::validate_chain)
      .def("state_json", &PyFixture::state_json);

  m.def("build_fixture", &make_fixture, py::arg("num_cases") = 10, py::arg("num_blocks") = 100,
        py::arg("tx_per_block") = 10, py::arg("seed") = 1, py::arg("with_case_roots") = true,
        py::call_guard<py::gil_scoped_release>());

  m.def(
      "retrieval_benchmark",
      [](std::vector<std::size_t> blocks, std::vector<std::size_t> cases, std::size_t reps, std::uint64_t seed) {
        RetrievalOptions options;
        options.blocks_grid = std::move(blocks);
        options.cases_grid = std::move(cases);
        options.reps = reps;
        options.seed = seed;
        RetrievalReport report;
        {
          py::gil_scoped_release release;
          report = run_retrieval_benchmark(options);
        }
        return rows_to_dicts(report.rows);
      },
      py::arg("blocks"), py::arg("cases"), py::arg("reps") = 30, py::arg("seed") = 1);

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        int code = cli::dispatch(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Runs a caseledger command; returns (exit_code, stdout, stderr).");
}
