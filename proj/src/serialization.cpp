#include "midconv/serialization.hpp"

#include <cmath>
#include <limits>

#include "midconv/error.hpp"

namespace midconv {

namespace {

std::string escape_token(const std::string& key) {
  std::string out;
  for (char c : key) {
    if (c == '~') {
      out += "~0";
    } else if (c == '/') {
      out += "~1";
    } else {
      out += c;
    }
  }
  return out;
}

std::string child(const std::string& path, const std::string& key) { return path + "/" + escape_token(key); }
std::string child(const std::string& path, std::size_t index) { return path + "/" + std::to_string(index); }

[[noreturn]] void fail(const std::string& path, const std::string& message) {
  throw Error(ErrorCode::ParseError, "at " + (path.empty() ? std::string("/") : path) + ": " + message);
}

// Re-throws construction errors with the document position attached.
template <class F>
auto at_path(const std::string& path, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ParseError) throw;
    throw Error(e.code(), "at " + (path.empty() ? std::string("/") : path) + ": " + e.what());
  }
}

void require_object(const json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
}

void require_array(const json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array");
}

const json& field(const json& j, const std::string& key, const std::string& path) {
  require_object(j, path);
  auto it = j.find(key);
  if (it == j.end()) fail(path, "missing field '" + key + "'");
  return *it;
}

const json* optional_field(const json& j, const std::string& key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return nullptr;
  return &*it;
}

long get_long(const json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  return j.get<long>();
}

bool get_bool(const json& j, const std::string& path) {
  if (!j.is_boolean()) fail(path, "expected a boolean");
  return j.get<bool>();
}

double get_double(const json& j, const std::string& path) {
  if (j.is_null()) return std::numeric_limits<double>::infinity();
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<double>();
}

std::string get_string(const json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected a string");
  return j.get<std::string>();
}

json finite_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

std::vector<long> get_long_list(const json& j, const std::string& path) {
  require_array(j, path);
  std::vector<long> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(get_long(j[i], child(path, i)));
  return out;
}

json element_list(const std::vector<GroupElement>& xs) {
  json out = json::array();
  for (const auto& x : xs) out.push_back(to_json(x.value()));
  return out;
}

std::vector<GroupElement> parse_element_list(const json& j, GroupMode mode, const std::string& path) {
  require_array(j, path);
  std::vector<GroupElement> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(parse_element(j[i], mode, child(path, i)));
  return out;
}

json complex_list(const std::vector<cd>& xs) {
  json out = json::array();
  for (cd z : xs) out.push_back(to_json(z));
  return out;
}

std::vector<cd> parse_complex_list(const json& j, const std::string& path) {
  require_array(j, path);
  std::vector<cd> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(parse_complex(j[i], child(path, i)));
  return out;
}

std::set<std::string> generator_names(const std::vector<EigDivisor>& gs) {
  std::set<std::string> names;
  for (const auto& g : gs) {
    for (const auto& [alpha, m] : g.entries()) {
      for (const auto& [name, c] : alpha.value().exponents()) names.insert(name);
    }
  }
  return names;
}

json classes_document(GroupMode mode, const std::vector<EigDivisor>& gs) {
  json out;
  out["mode"] = std::string(mode_name(mode));
  out["points"] = gs.size();
  json gens = json::array();
  for (const auto& name : generator_names(gs)) gens.push_back(name);
  out["generators"] = gens;
  json classes = json::array();
  for (const auto& g : gs) classes.push_back(to_json(g));
  out["classes"] = classes;
  return out;
}

GroupMode parse_mode_field(const json& j, const std::string& path) {
  const std::string p = child(path, "mode");
  return at_path(p, [&] { return parse_mode(get_string(field(j, "mode", path), p)); });
}

json point_checks(const std::vector<PointCheck>& checks) {
  json out = json::array();
  for (const auto& c : checks) {
    out.push_back({{"point", c.point + 1}, {"ok", c.ok}, {"offending", element_list(c.offending)}});
  }
  return out;
}

std::vector<PointCheck> parse_point_checks(const json& j, GroupMode mode, const std::string& path) {
  require_array(j, path);
  std::vector<PointCheck> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string p = child(path, i);
    PointCheck c;
    c.point = static_cast<std::size_t>(get_long(field(j[i], "point", p), child(p, "point")) - 1);
    c.ok = get_bool(field(j[i], "ok", p), child(p, "ok"));
    c.offending = parse_element_list(field(j[i], "offending", p), mode, child(p, "offending"));
    out.push_back(std::move(c));
  }
  return out;
}

GenerateOptions::LastPoint parse_last_point(const std::string& name, const std::string& path) {
  if (name == "auto") return GenerateOptions::LastPoint::Auto;
  if (name == "prescribed") return GenerateOptions::LastPoint::Prescribed;
  if (name == "free") return GenerateOptions::LastPoint::Free;
  fail(path, "last_point must be auto, prescribed or free");
}

void check_declared(const std::set<std::string>& used, const std::vector<std::string>& declared,
                    const std::string& path) {
  std::set<std::string> known(declared.begin(), declared.end());
  for (const auto& name : used) {
    if (!known.count(name)) fail(path, "generator '" + name + "' is not declared");
  }
}

void collect(const std::vector<GroupElement>& xs, std::set<std::string>& names) {
  for (const auto& x : xs) {
    for (const auto& [name, c] : x.value().exponents()) names.insert(name);
  }
}

}  // namespace

json to_json(const Rational& q) { return rational_to_string(q); }

json to_json(const ScalarExpr& x) {
  json exps = json::object();
  for (const auto& [name, coeff] : x.exponents()) exps[name] = rational_to_string(coeff);
  return json{{"const", rational_to_string(x.constant())}, {"exps", exps}};
}

json to_json(const EigDivisor& g) {
  json out = json::array();
  for (const auto& [alpha, m] : g.entries()) out.push_back({{"value", to_json(alpha.value())}, {"mult", m}});
  return out;
}

json to_json(cd z) { return json::array({z.real(), z.imag()}); }

json to_json(const Convoluter& beta) {
  return json{{"mode", std::string(mode_name(beta.mode))},
              {"h", element_list(beta.h)},
              {"v", element_list(beta.v)},
              {"t", to_json(beta.t.value())},
              {"u", element_list(beta.u)}};
}

json to_json(const ConventionReport& report) {
  json out;
  out["ok"] = report.ok();
  out["de_rham"] = report.de_rham;
  out["chi_nontrivial"] = report.chi_nontrivial;
  out["chirhobeta"] = point_checks(report.chirhobeta);
  out["diag_res_not_integer"] = report.diag_res_not_integer;
  out["alphabetabeta"] = point_checks(report.alphabetabeta);
  out["one_generic"] = report.one_generic ? json(*report.one_generic) : json(nullptr);
  if (!report.ok()) out["failure"] = report.describe_failure();
  return out;
}

json to_json(const EmptinessCertificate& cert) {
  return json{{"point", cert.point + 1}, {"lhs", cert.lhs}, {"rhs", cert.rhs}, {"coefficient", cert.coefficient}};
}

json to_json(const DimensionReport& report) {
  return json{{"r", report.r},
              {"n", report.n},
              {"class_dims", report.class_dims},
              {"naive_dim", report.naive_dim},
              {"defect", report.defect},
              {"superdefects", report.superdefects},
              {"total_superdefect", report.total_superdefect},
              {"mid_h1_end", report.mid_h1_end},
              {"assumes_stable_nonempty", report.assumes_stable_nonempty}};
}

json to_json(const Dim2Match& match) {
  return json{{"family", std::string(dim2_family_name(match.family))}, {"d", match.d}};
}

json to_json(const Arrangement& arr) {
  json weights = json::array();
  for (const auto& a : arr.weights) weights.push_back(rational_to_string(a));
  json parts = json::array();
  for (const auto& part : arr.parts()) {
    json p = json::array();
    for (const auto& a : part) p.push_back(rational_to_string(a));
    parts.push_back(p);
  }
  return json{{"point", arr.point + 1}, {"weights", weights}, {"descents", arr.descents()}, {"parts", parts}};
}

json to_json(const HiggsData& data) {
  json arrs = json::array();
  for (const auto& arr : data.arrangements) arrs.push_back(to_json(arr));
  return json{{"arrangements", arrs}, {"k", data.k},           {"z", data.z},
              {"tau", data.tau},      {"method", data.method}, {"degree_check", rational_to_string(parabolic_degree(data))}};
}

json to_json(const NumericInstance& inst) {
  json ms = json::array();
  for (const auto& m : inst.M) {
    json rows = json::array();
    for (long i = 0; i < m.rows(); ++i) {
      json row = json::array();
      for (long j = 0; j < m.cols(); ++j) row.push_back(to_json(m(i, j)));
      rows.push_back(row);
    }
    ms.push_back(rows);
  }
  return json{{"M", ms}, {"b", complex_list(inst.b)}, {"w", complex_list(inst.w)}, {"chi", to_json(inst.chi)},
              {"tol", inst.tol}};
}

json to_json(const VerificationReport& report) {
  auto points = [](const std::vector<PointComparison>& ps) {
    json out = json::array();
    for (const auto& p : ps) {
      out.push_back({{"predicted", complex_list(p.predicted)},
                     {"measured", complex_list(p.measured)},
                     {"deviation", finite_or_null(p.deviation)}});
    }
    return out;
  };
  return json{{"passed", report.passed},
              {"n", report.n},
              {"r", report.r},
              {"tol", report.tol},
              {"raw_dim", report.raw_dim},
              {"expected_raw_dim", report.expected_raw_dim},
              {"middle_dim", report.middle_dim},
              {"expected_middle_dim", report.expected_middle_dim},
              {"measured_defect", report.measured_defect},
              {"symbolic_defect", report.symbolic_defect ? json(*report.symbolic_defect) : json(nullptr)},
              {"defect_agrees", report.defect_agrees},
              {"raw_deviation", finite_or_null(report.raw_deviation)},
              {"middle_deviation", finite_or_null(report.middle_deviation)},
              {"block_deviation", finite_or_null(report.block_deviation)},
              {"det_product", to_json(report.det_product)},
              {"det_deviation", finite_or_null(report.det_deviation)},
              {"semisimple", report.semisimple},
              {"raw_points", points(report.raw_points)},
              {"middle_points", points(report.middle_points)}};
}

json vector_document(const MonodromyVector& v) { return classes_document(v.mode(), v.divisors()); }

json to_json(const KappaResult& result, const Convoluter& beta, long input_rank) {
  json out = classes_document(beta.mode, result.divisors);
  json t;
  t["status"] = std::string(kappa_status_name(result.status));
  t["input_rank"] = input_rank;
  t["rank"] = result.rank;
  t["defect"] = result.defect;
  t["new_eigenvalue_dims"] = result.new_eigenvalue_dims;
  t["convoluter"] = to_json(beta);
  t["conventions"] = to_json(result.conventions);
  t["certificate"] = result.certificate ? to_json(*result.certificate) : json(nullptr);
  out["transform"] = t;
  return out;
}

json to_json(const AlgorithmTrace& trace) {
  json steps = json::array();
  for (const auto& s : trace.steps) {
    steps.push_back({{"input", vector_document(s.input)},
                     {"convoluter", to_json(s.convoluter)},
                     {"defect", s.defect},
                     {"output", vector_document(s.output)}});
  }
  json out;
  out["status"] = std::string(terminal_status_name(trace.status));
  out["steps"] = steps;
  out["final"] = vector_document(trace.final_vector);
  out["final_rank"] = trace.final_vector.rank();
  out["final_defect"] = trace.final_defect;
  out["terminal_convoluter"] = trace.terminal_convoluter ? to_json(*trace.terminal_convoluter) : json(nullptr);
  out["conventions"] = trace.convention_report ? to_json(*trace.convention_report) : json(nullptr);
  out["certificate"] = trace.certificate ? to_json(*trace.certificate) : json(nullptr);
  return out;
}

Rational parse_rational_json(const json& j, const std::string& path) {
  if (j.is_number_integer()) return Rational(j.get<long>());
  if (j.is_number()) fail(path, "floating-point numbers are not allowed; write rationals as \"p/q\"");
  if (!j.is_string()) fail(path, "expected a rational string");
  try {
    return parse_rational(j.get<std::string>());
  } catch (const Error& e) {
    fail(path, e.what());
  }
}

ScalarExpr parse_scalar(const json& j, const std::string& path) {
  if (!j.is_object()) return ScalarExpr(parse_rational_json(j, path));
  Rational constant = 0;
  std::map<std::string, Rational> exps;
  for (const auto& [key, value] : j.items()) {
    if (key == "const") {
      constant = parse_rational_json(value, child(path, "const"));
    } else if (key == "exps") {
      const std::string p = child(path, "exps");
      require_object(value, p);
      for (const auto& [name, coeff] : value.items()) {
        if (name.empty()) fail(p, "generator names must be non-empty");
        exps[name] = parse_rational_json(coeff, child(p, name));
      }
    } else {
      fail(path, "unexpected field '" + key + "' in scalar");
    }
  }
  return ScalarExpr(constant, std::move(exps));
}

GroupElement parse_element(const json& j, GroupMode mode, const std::string& path) {
  ScalarExpr x = parse_scalar(j, path);
  return at_path(path, [&] { return GroupElement(mode, std::move(x)); });
}

EigDivisor parse_divisor(const json& j, GroupMode mode, const std::string& path) {
  require_array(j, path);
  EigDivisor g(mode);
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string p = child(path, i);
    GroupElement alpha = parse_element(field(j[i], "value", p), mode, child(p, "value"));
    long m = get_long(field(j[i], "mult", p), child(p, "mult"));
    g.add(alpha, m);
  }
  return g;
}

std::vector<EigDivisor> parse_classes(const json& j, GroupMode mode, const std::string& path) {
  require_array(j, path);
  std::vector<EigDivisor> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(parse_divisor(j[i], mode, child(path, i)));
  return out;
}

MonodromyVector parse_vector_document(const json& j) {
  const GroupMode mode = parse_mode_field(j, "");
  auto classes = parse_classes(field(j, "classes", ""), mode, "/classes");
  if (const json* pts = optional_field(j, "points")) {
    if (get_long(*pts, "/points") != static_cast<long>(classes.size())) {
      fail("/points", "points does not match the number of classes");
    }
  }
  if (const json* gens = optional_field(j, "generators")) {
    require_array(*gens, "/generators");
    std::vector<std::string> declared;
    for (std::size_t i = 0; i < gens->size(); ++i) declared.push_back(get_string((*gens)[i], child("/generators", i)));
    check_declared(generator_names(classes), declared, "/classes");
  }
  return at_path("/classes", [&] { return MonodromyVector(std::move(classes)); });
}

Convoluter parse_convoluter(const json& j, const std::string& path) {
  const GroupMode mode = parse_mode_field(j, path);
  auto h = parse_element_list(field(j, "h", path), mode, child(path, "h"));
  auto v = parse_element_list(field(j, "v", path), mode, child(path, "v"));
  Convoluter beta = at_path(path, [&] { return Convoluter::from_h_and_v(std::move(h), std::move(v)); });
  if (const json* t = optional_field(j, "t")) {
    if (!(parse_element(*t, mode, child(path, "t")) == beta.t)) fail(child(path, "t"), "inconsistent beta^T");
  }
  if (const json* u = optional_field(j, "u")) {
    if (parse_element_list(*u, mode, child(path, "u")) != beta.u) fail(child(path, "u"), "inconsistent beta^U");
  }
  return beta;
}

ConventionReport parse_convention_report(const json& j, GroupMode mode, const std::string& path) {
  ConventionReport r;
  r.de_rham = get_bool(field(j, "de_rham", path), child(path, "de_rham"));
  r.chi_nontrivial = get_bool(field(j, "chi_nontrivial", path), child(path, "chi_nontrivial"));
  r.chirhobeta = parse_point_checks(field(j, "chirhobeta", path), mode, child(path, "chirhobeta"));
  r.diag_res_not_integer = get_bool(field(j, "diag_res_not_integer", path), child(path, "diag_res_not_integer"));
  r.alphabetabeta = parse_point_checks(field(j, "alphabetabeta", path), mode, child(path, "alphabetabeta"));
  if (const json* g = optional_field(j, "one_generic")) r.one_generic = get_bool(*g, child(path, "one_generic"));
  return r;
}

EmptinessCertificate parse_certificate(const json& j, const std::string& path) {
  EmptinessCertificate c;
  c.point = static_cast<std::size_t>(get_long(field(j, "point", path), child(path, "point")) - 1);
  c.lhs = get_long(field(j, "lhs", path), child(path, "lhs"));
  c.rhs = get_long(field(j, "rhs", path), child(path, "rhs"));
  c.coefficient = get_long(field(j, "coefficient", path), child(path, "coefficient"));
  return c;
}

DimensionReport parse_dimension_report(const json& j, const std::string& path) {
  DimensionReport r;
  r.r = get_long(field(j, "r", path), child(path, "r"));
  r.n = get_long(field(j, "n", path), child(path, "n"));
  r.class_dims = get_long_list(field(j, "class_dims", path), child(path, "class_dims"));
  r.naive_dim = get_long(field(j, "naive_dim", path), child(path, "naive_dim"));
  r.defect = get_long(field(j, "defect", path), child(path, "defect"));
  r.superdefects = get_long_list(field(j, "superdefects", path), child(path, "superdefects"));
  r.total_superdefect = get_long(field(j, "total_superdefect", path), child(path, "total_superdefect"));
  r.mid_h1_end = get_long(field(j, "mid_h1_end", path), child(path, "mid_h1_end"));
  r.assumes_stable_nonempty =
      get_bool(field(j, "assumes_stable_nonempty", path), child(path, "assumes_stable_nonempty"));
  return r;
}

Dim2Match parse_dim2_match(const json& j, const std::string& path) {
  const std::string p = child(path, "family");
  Dim2Family family = at_path(p, [&] { return parse_dim2_family(get_string(field(j, "family", path), p)); });
  return Dim2Match{family, get_long(field(j, "d", path), child(path, "d"))};
}

Arrangement parse_arrangement(const json& j, const std::string& path) {
  Arrangement arr;
  arr.point = static_cast<std::size_t>(get_long(field(j, "point", path), child(path, "point")) - 1);
  const std::string p = child(path, "weights");
  const json& w = field(j, "weights", path);
  require_array(w, p);
  for (std::size_t i = 0; i < w.size(); ++i) arr.weights.push_back(parse_rational_json(w[i], child(p, i)));
  return arr;
}

HiggsData parse_higgs(const json& j, const std::string& path) {
  HiggsData data;
  const std::string p = child(path, "arrangements");
  const json& arrs = field(j, "arrangements", path);
  require_array(arrs, p);
  for (std::size_t i = 0; i < arrs.size(); ++i) data.arrangements.push_back(parse_arrangement(arrs[i], child(p, i)));
  data.k = get_long_list(field(j, "k", path), child(path, "k"));
  data.z = get_long_list(field(j, "z", path), child(path, "z"));
  data.tau = get_long_list(field(j, "tau", path), child(path, "tau"));
  if (const json* m = optional_field(j, "method")) data.method = get_string(*m, child(path, "method"));
  return data;
}

cd parse_complex(const json& j, const std::string& path) {
  if (j.is_number()) return cd(j.get<double>(), 0.0);
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    fail(path, "expected a complex number [re, im]");
  }
  return cd(j[0].get<double>(), j[1].get<double>());
}

NumericInstance parse_instance(const json& j, const std::string& path) {
  NumericInstance inst;
  const std::string mp = child(path, "M");
  const json& ms = field(j, "M", path);
  require_array(ms, mp);
  for (std::size_t k = 0; k < ms.size(); ++k) {
    const std::string kp = child(mp, k);
    require_array(ms[k], kp);
    const long r = static_cast<long>(ms[k].size());
    Eigen::MatrixXcd m(r, r);
    for (long i = 0; i < r; ++i) {
      const std::string ip = child(kp, static_cast<std::size_t>(i));
      const json& row = ms[k][i];
      require_array(row, ip);
      if (static_cast<long>(row.size()) != r) fail(ip, "matrices must be square");
      for (long c = 0; c < r; ++c) m(i, c) = parse_complex(row[c], child(ip, static_cast<std::size_t>(c)));
    }
    inst.M.push_back(std::move(m));
  }
  inst.b = parse_complex_list(field(j, "b", path), child(path, "b"));
  if (const json* w = optional_field(j, "w")) {
    inst.w = parse_complex_list(*w, child(path, "w"));
  } else {
    inst.w = inst.b;
  }
  if (const json* chi = optional_field(j, "chi")) {
    inst.chi = parse_complex(*chi, child(path, "chi"));
  } else {
    cd prod = 1.0;
    for (cd x : inst.b) prod *= x;
    inst.chi = 1.0 / prod;
  }
  if (const json* tol = optional_field(j, "tol")) inst.tol = get_double(*tol, child(path, "tol"));
  if (!(inst.tol > 0)) fail(child(path, "tol"), "tolerance must be positive");
  return inst;
}

VerificationReport parse_verification(const json& j, const std::string& path) {
  VerificationReport r;
  auto num = [&](const char* key) { return get_long(field(j, key, path), child(path, key)); };
  auto dbl = [&](const char* key) { return get_double(field(j, key, path), child(path, key)); };
  auto flag = [&](const char* key) { return get_bool(field(j, key, path), child(path, key)); };
  auto points = [&](const char* key) {
    const std::string p = child(path, key);
    const json& arr = field(j, key, path);
    require_array(arr, p);
    std::vector<PointComparison> out;
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string ip = child(p, i);
      PointComparison c;
      c.predicted = parse_complex_list(field(arr[i], "predicted", ip), child(ip, "predicted"));
      c.measured = parse_complex_list(field(arr[i], "measured", ip), child(ip, "measured"));
      c.deviation = get_double(field(arr[i], "deviation", ip), child(ip, "deviation"));
      out.push_back(std::move(c));
    }
    return out;
  };
  r.passed = flag("passed");
  r.n = num("n");
  r.r = num("r");
  r.tol = dbl("tol");
  r.raw_dim = num("raw_dim");
  r.expected_raw_dim = num("expected_raw_dim");
  r.middle_dim = num("middle_dim");
  r.expected_middle_dim = num("expected_middle_dim");
  r.measured_defect = num("measured_defect");
  if (const json* s = optional_field(j, "symbolic_defect")) r.symbolic_defect = get_long(*s, child(path, "symbolic_defect"));
  r.defect_agrees = flag("defect_agrees");
  r.raw_deviation = dbl("raw_deviation");
  r.middle_deviation = dbl("middle_deviation");
  r.block_deviation = dbl("block_deviation");
  r.det_product = parse_complex(field(j, "det_product", path), child(path, "det_product"));
  r.det_deviation = dbl("det_deviation");
  r.semisimple = flag("semisimple");
  r.raw_points = points("raw_points");
  r.middle_points = points("middle_points");
  return r;
}

ParsedKappa parse_kappa(const json& j) {
  const GroupMode mode = parse_mode_field(j, "");
  ParsedKappa out;
  out.result.divisors = parse_classes(field(j, "classes", ""), mode, "/classes");
  const json& t = field(j, "transform", "");
  const std::string p = "/transform";
  const std::string status = get_string(field(t, "status", p), child(p, "status"));
  if (status == kappa_status_name(KappaStatus::Effective)) {
    out.result.status = KappaStatus::Effective;
  } else if (status == kappa_status_name(KappaStatus::Noneffective)) {
    out.result.status = KappaStatus::Noneffective;
  } else if (status == kappa_status_name(KappaStatus::DegenerateRank)) {
    out.result.status = KappaStatus::DegenerateRank;
  } else {
    fail(child(p, "status"), "unknown transform status '" + status + "'");
  }
  out.input_rank = get_long(field(t, "input_rank", p), child(p, "input_rank"));
  out.result.rank = get_long(field(t, "rank", p), child(p, "rank"));
  out.result.defect = get_long(field(t, "defect", p), child(p, "defect"));
  out.result.new_eigenvalue_dims = get_long_list(field(t, "new_eigenvalue_dims", p), child(p, "new_eigenvalue_dims"));
  out.beta = parse_convoluter(field(t, "convoluter", p), child(p, "convoluter"));
  out.result.conventions = parse_convention_report(field(t, "conventions", p), mode, child(p, "conventions"));
  if (const json* c = optional_field(t, "certificate")) out.result.certificate = parse_certificate(*c, child(p, "certificate"));
  return out;
}

AlgorithmTrace parse_trace(const json& j) {
  const std::string status_path = "/status";
  TerminalStatus status =
      at_path(status_path, [&] { return parse_terminal_status(get_string(field(j, "status", ""), status_path)); });
  AlgorithmTrace trace{.steps = {},
                       .status = status,
                       .final_vector = parse_vector_document(field(j, "final", "")),
                       .final_defect = get_long(field(j, "final_defect", ""), "/final_defect"),
                       .terminal_convoluter = {},
                       .convention_report = {},
                       .certificate = {}};
  const json& steps = field(j, "steps", "");
  require_array(steps, "/steps");
  for (std::size_t i = 0; i < steps.size(); ++i) {
    const std::string p = child("/steps", i);
    trace.steps.push_back(KatzStep{parse_vector_document(field(steps[i], "input", p)),
                                   parse_convoluter(field(steps[i], "convoluter", p), child(p, "convoluter")),
                                   get_long(field(steps[i], "defect", p), child(p, "defect")),
                                   parse_vector_document(field(steps[i], "output", p))});
  }
  if (const json* c = optional_field(j, "terminal_convoluter")) {
    trace.terminal_convoluter = parse_convoluter(*c, "/terminal_convoluter");
  }
  if (const json* c = optional_field(j, "conventions")) {
    trace.convention_report = parse_convention_report(*c, trace.final_vector.mode(), "/conventions");
  }
  if (const json* c = optional_field(j, "certificate")) trace.certificate = parse_certificate(*c, "/certificate");
  return trace;
}

ProblemDocument parse_problem(const json& j) {
  require_object(j, "");
  ProblemDocument doc;
  if (optional_field(j, "mode")) doc.mode = parse_mode_field(j, "");
  if (const json* gens = optional_field(j, "generators")) {
    require_array(*gens, "/generators");
    for (std::size_t i = 0; i < gens->size(); ++i) {
      doc.generators.push_back(get_string((*gens)[i], child("/generators", i)));
    }
  }
  std::set<std::string> used;
  if (const json* classes = optional_field(j, "classes")) {
    auto gs = parse_classes(*classes, doc.mode, "/classes");
    if (const json* pts = optional_field(j, "points")) {
      if (get_long(*pts, "/points") != static_cast<long>(gs.size())) {
        fail("/points", "points does not match the number of classes");
      }
    }
    used = generator_names(gs);
    doc.vector = at_path("/classes", [&] { return MonodromyVector(std::move(gs)); });
  }
  if (const json* conv = optional_field(j, "convoluter")) {
    require_object(*conv, "/convoluter");
    ConvoluterSpec spec;
    if (const json* h = optional_field(*conv, "h")) {
      if (h->is_string() && h->get<std::string>() == "max-multiplicity") {
      } else {
        spec.h = parse_element_list(*h, doc.mode, "/convoluter/h");
        collect(*spec.h, used);
      }
    }
    if (const json* v = optional_field(*conv, "v")) {
      if (v->is_string()) {
        const std::string name = v->get<std::string>();
        if (name == "same-as-h") {
          spec.policy = BetaVPolicy::SameAsH;
        } else if (name == "fresh") {
          spec.policy = BetaVPolicy::Fresh;
        } else {
          fail("/convoluter/v", "expected a list, \"same-as-h\" or \"fresh\"");
        }
      } else {
        spec.v = parse_element_list(*v, doc.mode, "/convoluter/v");
        spec.policy = BetaVPolicy::Explicit;
        collect(*spec.v, used);
      }
    }
    if (doc.vector && spec.h && spec.h->size() != doc.vector->points()) {
      fail("/convoluter/h", "needs one entry per point");
    }
    if (spec.v && spec.v->size() != (spec.h ? spec.h->size() : doc.vector ? doc.vector->points() : spec.v->size())) {
      fail("/convoluter/v", "needs one entry per point");
    }
    doc.convoluter = std::move(spec);
  }
  if (optional_field(j, "generators")) check_declared(used, doc.generators, "/classes");
  if (const json* a = optional_field(j, "assignment")) {
    require_object(*a, "/assignment");
    for (const auto& [name, value] : a->items()) doc.assignment[name] = parse_complex(value, child("/assignment", name));
  }
  if (const json* s = optional_field(j, "seed")) {
    if (!s->is_number_unsigned() && !(s->is_number_integer() && s->get<long long>() >= 0)) {
      fail("/seed", "expected a nonnegative integer");
    }
    doc.seed = s->get<std::uint64_t>();
  }
  if (const json* t = optional_field(j, "tol")) {
    doc.tol = get_double(*t, "/tol");
    if (!(*doc.tol > 0)) fail("/tol", "tolerance must be positive");
  }
  if (const json* inst = optional_field(j, "instance")) doc.instance = parse_instance(*inst, "/instance");
  if (const json* opts = optional_field(j, "instance_options")) {
    require_object(*opts, "/instance_options");
    if (const json* lp = optional_field(*opts, "last_point")) {
      doc.instance_options.last_point =
          parse_last_point(get_string(*lp, "/instance_options/last_point"), "/instance_options/last_point");
    }
    if (const json* ad = optional_field(*opts, "adopt_last_eigenvalue")) {
      doc.instance_options.adopt_last_eigenvalue = get_bool(*ad, "/instance_options/adopt_last_eigenvalue");
    }
  }
  return doc;
}

Convoluter resolve_convoluter(const ProblemDocument& doc, const MonodromyVector& v,
                              std::optional<BetaVPolicy> override_policy) {
  BetaVPolicy policy = doc.convoluter ? doc.convoluter->policy : BetaVPolicy::SameAsH;
  if (override_policy) policy = *override_policy;
  std::vector<GroupElement> h;
  if (doc.convoluter && doc.convoluter->h) {
    h = *doc.convoluter->h;
  } else {
    for (const auto& g : v.divisors()) h.push_back(invert(max_multiplicity(g).eigenvalue));
  }
  switch (policy) {
    case BetaVPolicy::SameAsH:
      return at_path("/convoluter", [&] { return Convoluter::same_as_h(std::move(h)); });
    case BetaVPolicy::Fresh: {
      std::set<std::string> taken = v.generators();
      collect(h, taken);
      return at_path("/convoluter", [&] { return Convoluter::fresh(std::move(h), taken); });
    }
    case BetaVPolicy::Explicit:
      if (!doc.convoluter || !doc.convoluter->v) {
        throw Error(ErrorCode::InvalidInput, "at /convoluter/v: an explicit beta-v policy needs a v list");
      }
      return at_path("/convoluter", [&] { return Convoluter::from_h_and_v(std::move(h), *doc.convoluter->v); });
  }
  throw Error(ErrorCode::InternalError, "unhandled beta-v policy");
}

}  // namespace midconv
