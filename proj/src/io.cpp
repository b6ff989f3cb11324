#include "mvtsp/io.hpp"

#include <fstream>
#include <sstream>

namespace mvtsp {

namespace {

Rational rational_field(const Json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(parse_integer(j.dump()));
  throw StructuralError("expected a rational string, got " + j.dump());
}

Integer integer_field(const Json& j) {
  if (j.is_string()) return parse_integer(j.get<std::string>());
  if (j.is_number_integer()) return parse_integer(j.dump());
  throw StructuralError("expected an integer string, got " + j.dump());
}

int small_int(const Json& j, const char* what) {
  if (!j.is_number_integer()) throw StructuralError(std::string(what) + " must be an integer");
  return j.get<int>();
}

}  // namespace

Json instance_to_json(const Instance& inst) {
  Json cost = Json::array();
  for (Vertex u = 0; u < inst.n; ++u) {
    Json row = Json::array();
    for (Vertex v = 0; v < inst.n; ++v) row.push_back(format_rational(inst.c(u, v)));
    cost.push_back(std::move(row));
  }
  Json requests = Json::array();
  for (const auto& r : inst.requests) requests.push_back(format_integer(r));
  Json out;
  out["n"] = inst.n;
  out["cost"] = std::move(cost);
  out["requests"] = std::move(requests);
  out["s"] = inst.s;
  out["t"] = inst.t ? Json(*inst.t) : Json(nullptr);
  return out;
}

Instance instance_from_json(const Json& j) {
  if (!j.is_object()) throw StructuralError("instance must be a JSON object");
  for (const char* key : {"n", "cost", "requests", "s"}) {
    if (!j.contains(key)) throw StructuralError(std::string("missing field '") + key + "'");
  }
  Instance inst;
  inst.n = small_int(j.at("n"), "n");
  if (inst.n < 1) throw StructuralError("n must be positive");
  const Json& cost = j.at("cost");
  if (!cost.is_array() || cost.size() != static_cast<std::size_t>(inst.n)) {
    throw StructuralError("cost must have n rows");
  }
  inst.cost.reserve(static_cast<std::size_t>(inst.n) * inst.n);
  for (const Json& row : cost) {
    if (!row.is_array() || row.size() != static_cast<std::size_t>(inst.n)) {
      throw StructuralError("cost rows must have n entries");
    }
    for (const Json& entry : row) inst.cost.push_back(rational_field(entry));
  }
  const Json& req = j.at("requests");
  if (!req.is_array()) throw StructuralError("requests must be an array");
  for (const Json& r : req) inst.requests.push_back(integer_field(r));
  inst.s = small_int(j.at("s"), "s");
  if (j.contains("t") && !j.at("t").is_null()) inst.t = small_int(j.at("t"), "t");
  check_structure(inst);
  return inst;
}

Json tour_to_json(const CompactMultigraph& g, const Rational& cost) {
  Json edges = Json::array();
  for (std::size_t id : g.support()) {
    const auto [u, v] = edge_ends(g.vertex_count(), id);
    edges.push_back(Json::array({u, v, format_integer(g.mult(id))}));
  }
  Json out;
  out["edges"] = std::move(edges);
  out["cost"] = format_rational(cost);
  return out;
}

CompactMultigraph tour_from_json(const Json& j, int n) {
  CompactMultigraph g(n);
  if (!j.contains("edges") || !j.at("edges").is_array()) {
    throw StructuralError("tour needs an edges array");
  }
  for (const Json& e : j.at("edges")) {
    if (!e.is_array() || e.size() != 3) throw StructuralError("edge entries are [u, v, mult]");
    const int u = small_int(e[0], "u"), v = small_int(e[1], "v");
    if (u < 0 || v < 0 || u >= n || v >= n) throw StructuralError("edge endpoint out of range");
    g.add(u, v, integer_field(e[2]));
  }
  return g;
}

Instance read_instance_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
  return instance_from_json(j);
}

void write_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw StructuralError("cannot write " + path);
  out << j.dump(2) << "\n";
}

}  // namespace mvtsp
