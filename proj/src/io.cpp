#include "mmkit/io.hpp"

#include <fstream>
#include <sstream>
#include <utility>

#include "mmkit/errors.hpp"

namespace mmkit {

namespace {

Rat rat_from_json(const Json& v, const char* where) {
  if (v.is_string()) return parse_rational(v.get<std::string>());
  if (v.is_number_integer()) {
    return Rat(static_cast<long long>(v.get<std::int64_t>()));
  }
  if (v.is_number_float()) {
    throw validation_error(errc::parse_error,
                           std::string(where) +
                               ": floating point numbers are inexact; "
                               "write rationals as strings");
  }
  throw validation_error(errc::parse_error,
                         std::string(where) + ": expected a rational");
}

const Json& field(const Json& doc, const char* key) {
  if (!doc.is_object() || !doc.contains(key)) {
    throw validation_error(errc::parse_error,
                           std::string("missing field \"") + key + "\"");
  }
  return doc.at(key);
}

const Json& array_field(const Json& doc, const char* key) {
  const Json& v = field(doc, key);
  if (!v.is_array()) {
    throw validation_error(errc::parse_error,
                           std::string("field \"") + key + "\" must be an array");
  }
  return v;
}

std::vector<Rat> rat_vector(const Json& arr, const char* where) {
  std::vector<Rat> out;
  out.reserve(arr.size());
  for (const Json& v : arr) out.push_back(rat_from_json(v, where));
  return out;
}

Json rat_array(const std::vector<Rat>& v) {
  Json arr = Json::array();
  for (const Rat& x : v) arr.push_back(rat_to_string(x));
  return arr;
}

}  // namespace

Json space_to_json(const FiniteMmSpace& x) {
  Json doc = Json::object();
  doc["labels"] = x.labels();
  Json dist = Json::array();
  for (const auto& row : x.dist_matrix()) dist.push_back(rat_array(row));
  doc["dist"] = std::move(dist);
  doc["weights"] = rat_array(x.weights());
  return doc;
}

FiniteMmSpace space_from_json(const Json& doc) {
  FiniteMmSpace::Data data;
  for (const Json& l : array_field(doc, "labels")) {
    if (!l.is_string()) {
      throw validation_error(errc::parse_error, "labels must be strings");
    }
    data.labels.push_back(l.get<std::string>());
  }
  for (const Json& row : array_field(doc, "dist")) {
    if (!row.is_array()) {
      throw validation_error(errc::parse_error,
                             "dist must be an array of arrays");
    }
    data.dist.push_back(rat_vector(row, "dist"));
  }
  data.weights = rat_vector(array_field(doc, "weights"), "weights");
  return FiniteMmSpace::validate(std::move(data));
}

Json step_function_to_json(const StepFunction& f) {
  Json doc = Json::object();
  doc["domain"] =
      Json::array({rat_to_string(f.domain_lo()), rat_to_string(f.domain_hi())});
  doc["breaks"] = rat_array(f.breaks());
  doc["values"] = rat_array(f.values());
  return doc;
}

StepFunction step_function_from_json(const Json& doc) {
  const Json& dom = array_field(doc, "domain");
  if (dom.size() != 2) {
    throw validation_error(errc::parse_error,
                           "domain must be a two-element array");
  }
  return StepFunction(rat_from_json(dom[0], "domain"),
                      rat_from_json(dom[1], "domain"),
                      rat_vector(array_field(doc, "breaks"), "breaks"),
                      rat_vector(array_field(doc, "values"), "values"));
}

Json coupling_to_json(const Coupling& pi) {
  Json doc = Json::object();
  Json matrix = Json::array();
  for (const auto& row : pi.matrix()) matrix.push_back(rat_array(row));
  doc["matrix"] = std::move(matrix);
  return doc;
}

Coupling coupling_from_json(const Json& doc, const std::vector<Rat>& mu,
                            const std::vector<Rat>& nu) {
  std::vector<std::vector<Rat>> matrix;
  for (const Json& row : array_field(doc, "matrix")) {
    if (!row.is_array()) {
      throw validation_error(errc::parse_error,
                             "matrix must be an array of arrays");
    }
    matrix.push_back(rat_vector(row, "matrix"));
  }
  return Coupling::validate(std::move(matrix), mu, nu);
}

Json box_bounds_to_json(const BoxBounds& b) {
  Json doc = Json::object();
  doc["lower"] = rat_to_string(b.lower);
  doc["upper"] = rat_to_string(b.upper);
  doc["exact"] = b.exact;
  if (b.witness.has_value()) {
    Json w = Json::object();
    w["coupling"] = coupling_to_json(b.witness->coupling);
    Json kept = Json::array();
    for (const auto& [i, j] : b.witness->kept_pairs) {
      kept.push_back(Json::array({i, j}));
    }
    w["kept_pairs"] = std::move(kept);
    w["eps"] = rat_to_string(b.witness->eps);
    doc["witness"] = std::move(w);
  } else {
    doc["witness"] = nullptr;
  }
  return doc;
}

Json sep_value_to_json(const SepValue& v) {
  Json doc = Json::object();
  if (v.is_infinite()) {
    doc["infinite"] = true;
  } else {
    doc["finite"] = rat_to_string(v.finite_value());
  }
  return doc;
}

SepValue sep_value_from_json(const Json& doc) {
  if (doc.is_object() && doc.contains("infinite")) {
    if (doc.at("infinite") != Json(true)) {
      throw validation_error(errc::parse_error,
                             "field \"infinite\" must be true when present");
    }
    return SepValue::infinite();
  }
  return SepValue::finite(rat_from_json(field(doc, "finite"), "finite"));
}

Json report_to_json(const ExperimentReport& r) {
  Json doc = Json::object();
  doc["name"] = r.name;
  doc["columns"] = r.columns;
  Json rows = Json::array();
  for (const auto& row : r.rows) rows.push_back(row);
  doc["rows"] = std::move(rows);
  Json asserts = Json::array();
  for (const ReportAssertion& a : r.assertions) {
    Json e = Json::object();
    e["label"] = a.label;
    e["lhs"] = rat_to_string(a.lhs);
    e["op"] = a.op;
    e["rhs"] = rat_to_string(a.rhs);
    e["pass"] = a.pass;
    asserts.push_back(std::move(e));
  }
  doc["assertions"] = std::move(asserts);
  doc["passed"] = r.passed();
  return doc;
}

ExperimentReport report_from_json(const Json& doc) {
  ExperimentReport r;
  const Json& name = field(doc, "name");
  if (!name.is_string()) {
    throw validation_error(errc::parse_error, "name must be a string");
  }
  r.name = name.get<std::string>();
  for (const Json& c : array_field(doc, "columns")) {
    if (!c.is_string()) {
      throw validation_error(errc::parse_error, "columns must be strings");
    }
    r.columns.push_back(c.get<std::string>());
  }
  for (const Json& row : array_field(doc, "rows")) {
    if (!row.is_array()) {
      throw validation_error(errc::parse_error,
                             "rows must be arrays of strings");
    }
    std::vector<std::string> cells;
    for (const Json& c : row) {
      if (!c.is_string()) {
        throw validation_error(errc::parse_error,
                               "row cells must be strings");
      }
      cells.push_back(c.get<std::string>());
    }
    r.rows.push_back(std::move(cells));
  }
  for (const Json& e : array_field(doc, "assertions")) {
    ReportAssertion a;
    const Json& label = field(e, "label");
    const Json& op = field(e, "op");
    if (!label.is_string() || !op.is_string()) {
      throw validation_error(errc::parse_error,
                             "assertion label and op must be strings");
    }
    a.label = label.get<std::string>();
    a.op = op.get<std::string>();
    a.lhs = rat_from_json(field(e, "lhs"), "lhs");
    a.rhs = rat_from_json(field(e, "rhs"), "rhs");
    const Json& pass = field(e, "pass");
    if (!pass.is_boolean()) {
      throw validation_error(errc::parse_error,
                             "assertion pass flag must be a boolean");
    }
    a.pass = pass.get<bool>();
    // Stored verdicts must match a fresh evaluation of the comparison; a
    // report edited after the fact fails here.
    bool fresh;
    if (a.op == "le") {
      fresh = a.lhs <= a.rhs;
    } else if (a.op == "eq") {
      fresh = a.lhs == a.rhs;
    } else {
      throw validation_error(errc::parse_error,
                             "assertion op must be \"le\" or \"eq\"");
    }
    if (fresh != a.pass) {
      throw validation_error(errc::parse_error,
                             "assertion verdict does not match its operands");
    }
    r.assertions.push_back(std::move(a));
  }
  const Json& passed = field(doc, "passed");
  if (!passed.is_boolean() || passed.get<bool>() != r.passed()) {
    throw validation_error(errc::parse_error,
                           "passed flag does not match the assertions");
  }
  return r;
}

std::string report_to_csv(const ExperimentReport& r) {
  std::ostringstream out;
  for (std::size_t j = 0; j < r.columns.size(); ++j) {
    if (j) out << ',';
    out << r.columns[j];
  }
  out << '\n';
  for (const auto& row : r.rows) {
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (j) out << ',';
      out << row[j];
    }
    out << '\n';
  }
  out << '\n';
  out << "assertion,lhs,op,rhs,pass\n";
  for (const ReportAssertion& a : r.assertions) {
    out << a.label << ',' << rat_to_string(a.lhs) << ',' << a.op << ','
        << rat_to_string(a.rhs) << ',' << (a.pass ? "true" : "false") << '\n';
  }
  return out.str();
}

std::string step_function_to_csv(const StepFunction& f) {
  std::ostringstream out;
  out << "segment_start,segment_end,value\n";
  Rat start = f.domain_lo();
  for (std::size_t j = 0; j < f.values().size(); ++j) {
    const Rat& end =
        j < f.breaks().size() ? f.breaks()[j] : f.domain_hi();
    out << rat_to_string(start) << ',' << rat_to_string(end) << ','
        << rat_to_string(f.values()[j]) << '\n';
    start = end;
  }
  return out.str();
}

Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw validation_error(errc::parse_error, "cannot read file " + path);
  }
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw validation_error(errc::parse_error,
                           path + " is not valid JSON: " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) {
    throw validation_error(errc::parse_error, "cannot open " + path +
                                                  " for writing");
  }
  out << content;
  if (!out) {
    throw validation_error(errc::parse_error, "failed writing " + path);
  }
}

}  // namespace mmkit
