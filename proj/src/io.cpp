#include "conefp/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace conefp {

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ParseError(where + ": " + what);
}

std::string at(const std::string& where, std::size_t i) { return where + "[" + std::to_string(i) + "]"; }

std::string field(const std::string& where, const std::string& key) {
  return where.empty() ? key : where + "." + key;
}

const Json& require(const Json& obj, const std::string& key, const std::string& where) {
  if (!obj.is_object()) fail(where.empty() ? "<root>" : where, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) fail(field(where, key), "missing required field");
  return *it;
}

void reject_unknown(const Json& obj, const std::set<std::string>& known, const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!known.count(it.key())) fail(field(where, it.key()), "unknown field");
  }
}

long parse_integer(const Json& v, const std::string& where) {
  if (!v.is_number_integer()) fail(where, "expected an integer");
  return v.get<long>();
}

Vector parse_vector(const Json& v, const std::string& where) {
  if (!v.is_array()) fail(where, "expected an array of numbers");
  Vector out(static_cast<Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out(static_cast<Index>(i)) = parse_number(v[i], at(where, i));
  return out;
}

Matrix parse_real_matrix(const Json& v, const std::string& where) {
  if (!v.is_array() || v.empty()) fail(where, "expected a non-empty array of rows");
  const std::size_t rows = v.size();
  std::size_t cols = 0;
  Matrix out;
  for (std::size_t i = 0; i < rows; ++i) {
    const std::string row_where = at(where, i);
    if (!v[i].is_array()) fail(row_where, "expected an array of numbers");
    if (i == 0) {
      cols = v[i].size();
      out.resize(static_cast<Index>(rows), static_cast<Index>(cols));
    } else if (v[i].size() != cols) {
      fail(row_where, "row has " + std::to_string(v[i].size()) + " entries, expected " + std::to_string(cols));
    }
    for (std::size_t j = 0; j < cols; ++j) {
      out(static_cast<Index>(i), static_cast<Index>(j)) = parse_number(v[i][j], at(row_where, j));
    }
  }
  return out;
}

Matrix square(const Json& v, const std::string& where, Index n) {
  Matrix m = parse_real_matrix(v, where);
  if (m.rows() != n || m.cols() != n) {
    fail(where, "expected a " + std::to_string(n) + "x" + std::to_string(n) + " matrix");
  }
  return m;
}

Vector sized_vector(const Json& v, const std::string& where, Index n) {
  Vector x = parse_vector(v, where);
  if (x.size() != n) fail(where, "expected " + std::to_string(n) + " entries");
  return x;
}

bool is_nested_array(const Json& v) { return v.is_array() && !v.empty() && v[0].is_array(); }

Json matrix_to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(number_to_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

bool all_scalars(const Json& arr) {
  for (const auto& e : arr) {
    if (e.is_array() || e.is_object()) return false;
  }
  return true;
}

void write_json(std::ostringstream& os, const Json& j, int indent, int depth) {
  const std::string pad(static_cast<std::size_t>(indent * (depth + 1)), ' ');
  const std::string close_pad(static_cast<std::size_t>(indent * depth), ' ');
  switch (j.type()) {
    case Json::value_t::number_float: {
      const double v = j.get<double>();
      os << (std::isfinite(v) ? format_double(v) : "\"" + format_double(v) + "\"");
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        os << "[]";
        return;
      }
      if (all_scalars(j) || indent == 0) {
        os << "[";
        for (std::size_t i = 0; i < j.size(); ++i) {
          if (i) os << (indent == 0 ? "," : ", ");
          write_json(os, j[i], indent, depth + 1);
        }
        os << "]";
        return;
      }
      os << "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        os << pad;
        write_json(os, j[i], indent, depth + 1);
        os << (i + 1 < j.size() ? ",\n" : "\n");
      }
      os << close_pad << "]";
      return;
    }
    case Json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << (indent == 0 ? "{" : "{\n");
      std::size_t i = 0;
      for (auto it = j.begin(); it != j.end(); ++it, ++i) {
        if (indent) os << pad;
        os << Json(it.key()).dump() << (indent ? ": " : ":");
        write_json(os, it.value(), indent, depth + 1);
        if (i + 1 < j.size()) os << ",";
        if (indent) os << "\n";
      }
      if (indent) os << close_pad;
      os << "}";
      return;
    }
    default:
      os << j.dump();
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

double parse_number(const Json& v, const std::string& where) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  }
  fail(where, "expected a number");
}

CMatrix parse_matrix(const Json& v, const std::string& where) {
  if (v.is_object()) {
    reject_unknown(v, {"re", "im"}, where);
    const Matrix re = parse_real_matrix(require(v, "re", where), field(where, "re"));
    Matrix im = Matrix::Zero(re.rows(), re.cols());
    if (v.contains("im")) {
      im = parse_real_matrix(v["im"], field(where, "im"));
      if (im.rows() != re.rows() || im.cols() != re.cols()) {
        fail(field(where, "im"), "shape differs from the real part");
      }
    }
    CMatrix out(re.rows(), re.cols());
    out.real() = re;
    out.imag() = im;
    return out;
  }
  return parse_real_matrix(v, where).cast<std::complex<double>>();
}

Element parse_point(const Json& v, const std::string& where) {
  if (v.is_object() || is_nested_array(v)) {
    const CMatrix m = parse_matrix(v, where);
    if (m.rows() != m.cols()) fail(where, "matrix point must be square");
    try {
      return Element::hermitian(m);
    } catch (const Error& e) {
      fail(where, e.what());
    }
  }
  return Element::vector(parse_vector(v, where));
}

std::string Problem::map_type() const {
  switch (family.index()) {
    case 0:
      return "affine";
    case 1:
      return "perm_affine";
    default:
      return "riccati";
  }
}

MapModel Problem::model() const {
  return std::visit([](const auto& fam) { return fam.model(); }, family);
}

Problem parse_problem(const Json& doc) {
  if (!doc.is_object()) fail("<root>", "expected an object");
  reject_unknown(doc, {"cone", "dimension", "map", "solver", "certify"}, "");

  const Json& cone_v = require(doc, "cone", "");
  if (!cone_v.is_string()) fail("cone", "expected \"orthant\" or \"pd\"");
  const auto cone_name = cone_v.get<std::string>();
  if (cone_name != "orthant" && cone_name != "pd") fail("cone", "expected \"orthant\" or \"pd\"");

  const long n = parse_integer(require(doc, "dimension", ""), "dimension");
  if (n <= 0) fail("dimension", "must be positive");
  const Cone cone = cone_name == "orthant" ? Cone::orthant(n) : Cone::pd(n);

  const Json& map = require(doc, "map", "");
  const Json& type_v = require(map, "type", "map");
  if (!type_v.is_string()) fail("map.type", "expected a string");
  const auto type = type_v.get<std::string>();

  auto family = [&]() -> std::variant<AffineOrthantMap, PermutationAffineMap, RiccatiProblem> {
    try {
      if (type == "affine") {
        if (cone.kind != ConeKind::Orthant) fail("map.type", "affine maps act on the orthant cone");
        reject_unknown(map, {"type", "M", "b"}, "map");
        Matrix m = square(require(map, "M", "map"), "map.M", n);
        Vector b = map.contains("b") ? sized_vector(map["b"], "map.b", n) : Vector::Zero(n);
        return AffineOrthantMap(std::move(m), std::move(b));
      }
      if (type == "perm_affine") {
        if (cone.kind != ConeKind::Orthant) fail("map.type", "perm_affine maps act on the orthant cone");
        reject_unknown(map, {"type", "perm", "b"}, "map");
        const Json& perm_v = require(map, "perm", "map");
        if (!perm_v.is_array()) fail("map.perm", "expected an array of indices");
        std::vector<Index> perm;
        for (std::size_t i = 0; i < perm_v.size(); ++i) perm.push_back(parse_integer(perm_v[i], at("map.perm", i)));
        Vector b = map.contains("b") ? sized_vector(map["b"], "map.b", n) : Vector::Zero(n);
        return PermutationAffineMap(std::move(perm), std::move(b));
      }
      if (type == "riccati") {
        if (cone.kind != ConeKind::PositiveDefinite) fail("map.type", "riccati maps act on the pd cone");
        reject_unknown(map, {"type", "A", "B", "N", "rank_tol"}, "map");
        auto mat = [&](const char* key) {
          CMatrix m = parse_matrix(require(map, key, "map"), field("map", key));
          if (m.rows() != n || m.cols() != n) {
            fail(field("map", key), "expected a " + std::to_string(n) + "x" + std::to_string(n) + " matrix");
          }
          return m;
        };
        std::optional<double> rank_tol;
        if (map.contains("rank_tol")) rank_tol = parse_number(map["rank_tol"], "map.rank_tol");
        return RiccatiProblem(mat("A"), mat("B"), mat("N"), rank_tol);
      }
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      fail("map", e.what());
    }
    fail("map.type", "unknown map type \"" + type + "\" (expected affine, perm_affine or riccati)");
  }();

  IterationConfig solver;
  if (doc.contains("solver")) {
    const Json& s = doc["solver"];
    if (!s.is_object()) fail("solver", "expected an object");
    reject_unknown(s, {"alpha", "tol", "max_iter"}, "solver");
    if (s.contains("alpha")) solver.alpha = parse_number(s["alpha"], "solver.alpha");
    if (s.contains("tol")) solver.tol = parse_number(s["tol"], "solver.tol");
    if (s.contains("max_iter")) solver.max_iter = parse_integer(s["max_iter"], "solver.max_iter");
    try {
      solver.validate();
    } catch (const Error& e) {
      fail("solver", e.what());
    }
  }

  CertifyOptions certify;
  if (doc.contains("certify")) {
    const Json& c = doc["certify"];
    if (!c.is_object()) fail("certify", "expected an object");
    reject_unknown(c, {"delta", "k_max", "t_min_exp", "t_max_exp"}, "certify");
    if (c.contains("delta")) certify.delta = parse_number(c["delta"], "certify.delta");
    if (c.contains("k_max")) certify.k_max = static_cast<int>(parse_integer(c["k_max"], "certify.k_max"));
    if (c.contains("t_min_exp")) certify.t_min_exp = static_cast<int>(parse_integer(c["t_min_exp"], "certify.t_min_exp"));
    if (c.contains("t_max_exp")) certify.t_max_exp = static_cast<int>(parse_integer(c["t_max_exp"], "certify.t_max_exp"));
    if (!(certify.delta > 0.0 && certify.delta < 1.0)) fail("certify.delta", "must lie in (0,1)");
    if (certify.k_max <= 0) fail("certify.k_max", "must be positive");
    if (certify.t_min_exp > certify.t_max_exp) fail("certify.t_min_exp", "exceeds t_max_exp");
  }

  return Problem{cone, std::move(family), solver, certify};
}

Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open file");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
}

Problem load_problem(const std::string& path) {
  const Json doc = load_json_file(path);
  try {
    return parse_problem(doc);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Json number_to_json(double v) { return Json(v); }

Json point_to_json(const Element& e) {
  if (e.is_orthant()) {
    Json arr = Json::array();
    for (Index i = 0; i < e.dim(); ++i) arr.push_back(number_to_json(e.vec()(i)));
    return arr;
  }
  if (e.is_real()) return matrix_to_json(e.mat().real());
  Json obj = Json::object();
  obj["re"] = matrix_to_json(e.mat().real());
  obj["im"] = matrix_to_json(e.mat().imag());
  return obj;
}

Json certificate_to_json(const Certificate& cert) {
  Json j = Json::object();
  j["kind"] = to_string(cert.kind);
  j["delta"] = number_to_json(cert.delta);
  if (cert.kind == Certificate::Kind::SubSuperPair) {
    j["x"] = point_to_json(*cert.x);
    j["y"] = point_to_json(*cert.y);
    j["margin_x"] = number_to_json(cert.margin_x);
    j["margin_y"] = number_to_json(cert.margin_y);
  } else {
    j["lower_cw"] = number_to_json(cert.lower_cw);
    j["upper_cw"] = number_to_json(cert.upper_cw);
    j["k_witness"] = cert.k_witness ? Json(*cert.k_witness) : Json(nullptr);
    j["l_witness"] = cert.l_witness ? Json(*cert.l_witness) : Json(nullptr);
  }
  return j;
}

Json solve_report_to_json(const SolveReport& rep) {
  Json j = Json::object();
  j["status"] = to_string(rep.status);
  j["iterations"] = rep.iterations;
  j["residual"] = number_to_json(rep.residual);
  j["point"] = point_to_json(rep.point);
  j["certificate"] = rep.certificate ? certificate_to_json(*rep.certificate) : Json(nullptr);
  return j;
}

std::string dump_json(const Json& j, int indent) {
  std::ostringstream os;
  write_json(os, j, indent, 0);
  return os.str();
}

}  // namespace conefp
