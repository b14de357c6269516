#include "flagcert/problem.hpp"

#include <fstream>
#include <sstream>

#include "flagcert/error.hpp"
#include "json.hpp"

namespace flagcert {

namespace {

using Json = nlohmann::json;

std::vector<Forbidden> graph_list(const Json& obj, const char* field, int r, bool induced) {
  std::vector<Forbidden> out;
  if (!obj.contains(field)) return out;
  const Json& list = obj.at(field);
  if (!list.is_array()) throw ParseError(std::string("field \"") + field + "\" must be a list of graphs");
  for (const Json& g : list) {
    if (!g.is_string()) throw ParseError(std::string("field \"") + field + "\" must hold graph notations");
    out.push_back({Graph::parse(g.get<std::string>(), r), induced});
  }
  return out;
}

int int_field(const Json& obj, const char* field) {
  if (!obj.contains(field)) throw ParseError(std::string("missing field \"") + field + "\"");
  const Json& v = obj.at(field);
  if (!v.is_number_integer()) throw ParseError(std::string("field \"") + field + "\" must be an integer");
  return v.get<int>();
}

}  // namespace

ProblemFile parse_problem(std::string_view text) {
  Json obj;
  try {
    obj = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(std::string("problem file: ") + e.what());
  }
  if (!obj.is_object()) throw ParseError("problem file must be a JSON object");
  ProblemFile p;
  p.spec.r = int_field(obj, "r");
  if (p.spec.r != 2 && p.spec.r != 3) throw DomainError("r must be 2 or 3");
  p.spec.m = int_field(obj, "order");
  p.spec.forbidden = graph_list(obj, "forbid", p.spec.r, false);
  for (auto& f : graph_list(obj, "forbid_induced", p.spec.r, true)) p.spec.forbidden.push_back(std::move(f));
  if (obj.contains("target_bound") && !obj.at("target_bound").is_null()) {
    const Json& t = obj.at("target_bound");
    if (t.is_number_integer()) p.target_bound = Rational(t.get<long>());
    else if (t.is_string()) p.target_bound = parse_rational(t.get<std::string>());
    else throw ParseError("target_bound must be an integer or a \"p/q\" string");
  }
  if (obj.contains("construction") && !obj.at("construction").is_null()) {
    if (!obj.at("construction").is_string()) throw ParseError("construction must be a string");
    p.construction = obj.at("construction").get<std::string>();
  }
  p.spec.validate();
  return p;
}

ProblemFile read_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return parse_problem(s.str());
}

}  // namespace flagcert
