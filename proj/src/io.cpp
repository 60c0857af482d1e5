#include "holodyn/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace holodyn {

namespace {

json complex_to_json(cplx v) { return json{{"re", v.real()}, {"im", v.imag()}}; }

cplx complex_from_json(const json& j, const char* field) {
  if (!j.is_object() || !j.contains("re") || !j.contains("im"))
    throw std::invalid_argument(std::string("expected {re, im} object in field '") + field + "'");
  return {j.at("re").get<double>(), j.at("im").get<double>()};
}

std::vector<cplx> complex_vector_from_json(const json& j, const char* field) {
  if (!j.is_array() || j.empty())
    throw std::invalid_argument(std::string("field '") + field + "' must be a non-empty array");
  std::vector<cplx> v;
  for (const auto& e : j) v.push_back(complex_from_json(e, field));
  return v;
}

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw std::invalid_argument(std::string(what) + ": non-finite value");
}

}  // namespace

json poly_to_json(const TaylorPoly& f) {
  json terms = json::array();
  const IndexTable& tab = f.table();
  for (int pos = 0; pos < tab.size(); ++pos) {
    cplx c = f.data()[static_cast<std::size_t>(pos)];
    double re = c.real(), im = c.imag();
    require_finite(re, "poly_to_json");
    require_finite(im, "poly_to_json");
    if (re == 0.0 && im == 0.0 && !std::signbit(re) && !std::signbit(im)) continue;
    json alpha = json::array();
    for (int e : tab.at(pos).exponents()) alpha.push_back(e);
    terms.push_back(json{{"alpha", alpha}, {"re", re}, {"im", im}});
  }
  json out{{"dim", f.dim()},
           {"trunc_degree", f.trunc_degree()},
           {"valid_degree", f.valid_degree()},
           {"entire", f.entire()},
           {"terms", terms}};
  if (f.contaminated()) out["contaminated"] = true;
  return out;
}

TaylorPoly poly_from_json(const json& j) {
  for (const char* field : {"dim", "trunc_degree", "valid_degree", "terms"})
    if (!j.contains(field))
      throw std::invalid_argument(std::string("poly_from_json: missing field '") + field + "'");
  int dim = j.at("dim").get<int>();
  int trunc = j.at("trunc_degree").get<int>();
  if (dim < 1) throw std::invalid_argument("poly_from_json: dim must be positive");
  if (trunc < 0) throw std::invalid_argument("poly_from_json: trunc_degree must be >= 0");
  TaylorPoly f = TaylorPoly::zero(dim, trunc);
  for (const auto& term : j.at("terms")) {
    if (!term.contains("alpha"))
      throw std::invalid_argument("poly_from_json: term missing field 'alpha'");
    std::vector<int> alpha = term.at("alpha").get<std::vector<int>>();
    cplx c = complex_from_json(term, "terms");
    if (static_cast<int>(alpha.size()) != dim)
      throw std::invalid_argument("poly_from_json: alpha length does not match dim");
    f.set_coeff(alpha, c);
  }
  f.set_valid_degree(j.at("valid_degree").get<int>());
  f.set_entire(j.contains("entire") ? j.at("entire").get<bool>()
                                    : f.valid_degree() == f.trunc_degree());
  f.set_contaminated(j.value("contaminated", false));
  return f;
}

json operator_to_json(const OperatorSymbol& op) {
  json out{{"dim", op.dim()}, {"kind", op.kind_name()}};
  switch (op.kind()) {
    case OperatorSymbol::Kind::translation: {
      json z0 = json::array();
      for (cplx v : op.z0()) z0.push_back(complex_to_json(v));
      out["z0"] = z0;
      break;
    }
    case OperatorSymbol::Kind::directional: {
      json a = json::array();
      for (cplx v : op.direction()) a.push_back(complex_to_json(v));
      out["a"] = a;
      break;
    }
    case OperatorSymbol::Kind::scaled_identity:
      out["lambda"] = complex_to_json(op.lambda());
      break;
    default: {
      json terms = json::array();
      for (const auto& [alpha, b] : op.terms()) {
        json a = json::array();
        for (int e : alpha.exponents()) a.push_back(e);
        terms.push_back(json{{"alpha", a}, {"re", b.real()}, {"im", b.imag()}});
      }
      out["terms"] = terms;
      break;
    }
  }
  return out;
}

OperatorSymbol operator_from_json(const json& j) {
  if (!j.contains("dim")) throw std::invalid_argument("operator_from_json: missing field 'dim'");
  if (!j.contains("kind")) throw std::invalid_argument("operator_from_json: missing field 'kind'");
  int dim = j.at("dim").get<int>();
  if (dim < 1) throw std::invalid_argument("operator_from_json: dim must be positive");
  std::string kind = j.at("kind").get<std::string>();
  if (kind == "translation") {
    if (!j.contains("z0")) throw std::invalid_argument("operator_from_json: missing field 'z0'");
    auto z0 = complex_vector_from_json(j.at("z0"), "z0");
    if (static_cast<int>(z0.size()) != dim)
      throw std::invalid_argument("operator_from_json: z0 length does not match dim");
    return OperatorSymbol::translation(std::move(z0));
  }
  if (kind == "directional_derivative") {
    if (!j.contains("a")) throw std::invalid_argument("operator_from_json: missing field 'a'");
    auto a = complex_vector_from_json(j.at("a"), "a");
    if (static_cast<int>(a.size()) != dim)
      throw std::invalid_argument("operator_from_json: a length does not match dim");
    return OperatorSymbol::directional(std::move(a));
  }
  if (kind == "scaled_identity") {
    if (!j.contains("lambda"))
      throw std::invalid_argument("operator_from_json: missing field 'lambda'");
    return OperatorSymbol::scaled_identity(dim, complex_from_json(j.at("lambda"), "lambda"));
  }
  if (kind == "generic") {
    if (!j.contains("terms"))
      throw std::invalid_argument("operator_from_json: missing field 'terms'");
    std::vector<std::pair<MultiIndex, cplx>> terms;
    for (const auto& term : j.at("terms")) {
      if (!term.contains("alpha"))
        throw std::invalid_argument("operator_from_json: term missing field 'alpha'");
      std::vector<int> alpha = term.at("alpha").get<std::vector<int>>();
      if (static_cast<int>(alpha.size()) != dim)
        throw std::invalid_argument("operator_from_json: alpha length does not match dim");
      terms.emplace_back(MultiIndex(std::move(alpha)), complex_from_json(term, "terms"));
    }
    return OperatorSymbol::generic(dim, std::move(terms));
  }
  throw std::invalid_argument("operator_from_json: unknown kind '" + kind + "'");
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << contents;
}

OperatorSymbol load_operator(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("operator spec not found: " + path);
  json j = json::parse(in);
  return operator_from_json(j);
}

std::uint64_t fnv1a64(const std::string& data) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string config_hash(const json& config) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fnv1a64(config.dump())));
  return buf;
}

}  // namespace holodyn
