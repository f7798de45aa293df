#include "hodge/io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "hodge/error.hpp"

namespace hodge::io {

using nlohmann::json;

namespace {

SimplexRef ref_from(const json& j) {
  if (!j.is_array() || j.size() != 2) throw Error(ErrorCode::InvalidInput, "simplex reference must be [dim, index]");
  return {j[0].get<int>(), j[1].get<int>()};
}

json ref_to(const SimplexRef& r) { return json::array({r.dim, r.index}); }

}  // namespace

RawComplex parse_scx(const std::string& text) {
  RawComplex raw;
  try {
    json j = json::parse(text);
    for (const auto& v : j.at("vertices")) {
      if (v.size() != 4) throw Error(ErrorCode::InvalidInput, "vertex entries are [id, x, y, z]");
      raw.vertices.emplace_back(v[0].get<VertexId>(), Point3{v[1].get<double>(), v[2].get<double>(), v[3].get<double>()});
    }
    if (j.contains("simplices")) {
      for (int d = 1; d <= 3; ++d) {
        auto key = std::to_string(d);
        if (!j["simplices"].contains(key)) continue;
        for (const auto& t : j["simplices"][key]) raw.simplices[d].push_back(t.get<std::vector<VertexId>>());
      }
    }
    if (j.contains("in_K"))
      for (const auto& r : j["in_K"]) raw.in_K.push_back(ref_from(r));
    if (j.contains("collapses"))
      for (const auto& p : j["collapses"]) {
        if (p.size() != 2) throw Error(ErrorCode::InvalidInput, "collapse entries are [sigma, tau]");
        raw.collapses.emplace_back(ref_from(p[0]), ref_from(p[1]));
      }
    if (j.contains("ambient_tets") && !j["ambient_tets"].is_null()) {
      std::vector<std::array<VertexId, 4>> amb;
      for (const auto& t : j["ambient_tets"]) amb.push_back(t.get<std::array<VertexId, 4>>());
      raw.ambient_tets = std::move(amb);
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidInput, std::string("malformed .scx: ") + e.what());
  }
  return raw;
}

std::string dump_scx(const RawComplex& raw) {
  json j;
  j["vertices"] = json::array();
  for (const auto& [id, p] : raw.vertices) j["vertices"].push_back({id, p[0], p[1], p[2]});
  j["simplices"] = json::object();
  for (int d = 1; d <= 3; ++d) j["simplices"][std::to_string(d)] = raw.simplices[d];
  j["in_K"] = json::array();
  for (const auto& r : raw.in_K) j["in_K"].push_back(ref_to(r));
  j["collapses"] = json::array();
  for (const auto& [s, t] : raw.collapses) j["collapses"].push_back({ref_to(s), ref_to(t)});
  if (raw.ambient_tets) j["ambient_tets"] = *raw.ambient_tets;
  return j.dump();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path);
  out << text;
  if (!out) throw Error(ErrorCode::Io, "write failed for " + path);
}

RawComplex read_scx(const std::string& path) { return parse_scx(read_file(path)); }
void write_scx(const std::string& path, const RawComplex& raw) { write_file(path, dump_scx(raw)); }

Chain parse_chain(const std::string& text) {
  try {
    json j = json::parse(text);
    Chain c;
    c.dim = j.at("dim").get<int>();
    c.scope = scope_from_string(j.value("scope", std::string("K")));
    c.values = j.at("values").get<std::vector<double>>();
    if (c.dim < 0 || c.dim > 3) throw Error(ErrorCode::DimOutOfRange, "chain dim " + std::to_string(c.dim));
    return c;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidInput, std::string("malformed chain file: ") + e.what());
  }
}

std::string dump_chain(const Chain& c) {
  json j;
  j["dim"] = c.dim;
  j["scope"] = to_string(c.scope);
  j["values"] = c.values;
  return j.dump();
}

Chain read_chain(const std::string& path) { return parse_chain(read_file(path)); }
void write_chain(const std::string& path, const Chain& c) { write_file(path, dump_chain(c)); }

}  // namespace hodge::io
