#pragma once

#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "bj/operators.hpp"
#include "bj/orthogonality.hpp"
#include "bj/space.hpp"
#include "bj/symmetry.hpp"

namespace bj::io {

using nlohmann::json;

// --------------------------------------------------------------------------
// Space descriptors: {"kind":"lp","p":3.0,"dim":2} with p = inf encoded as
// the string "inf", or {"kind":"sum1","left":{...},"right":{...}}.

inline json to_json(const SpaceDescriptor& s) {
  if (s.kind() == SpaceKind::lp) {
    json j{{"kind", "lp"}, {"dim", s.dim()}};
    if (std::isinf(s.p()))
      j["p"] = "inf";
    else
      j["p"] = s.p();
    return j;
  }
  return json{{"kind", "sum1"}, {"left", to_json(s.left())}, {"right", to_json(s.right())}};
}

inline SpaceDescriptor space_from_json(const json& j) {
  if (!j.is_object() || !j.contains("kind")) throw input_error("space JSON must carry a kind");
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "lp") {
    double p;
    const auto& pj = j.at("p");
    if (pj.is_string()) {
      if (pj.get<std::string>() != "inf") throw input_error("p must be a number or \"inf\"");
      p = kInf;
    } else {
      p = pj.get<double>();
    }
    return SpaceDescriptor::lp(p, j.at("dim").get<int>());
  }
  if (kind == "sum1")
    return SpaceDescriptor::sum1(space_from_json(j.at("left")), space_from_json(j.at("right")));
  throw input_error("unknown space kind: " + kind);
}

/// Compact selector syntax used on the command line:
///   lp:<p>:<dim> | l1:<dim> | l2:<dim> | linf:<dim> | sum1(<sel>,<sel>)
inline SpaceDescriptor parse_space_selector(const std::string& text) {
  auto fail = [&]() -> SpaceDescriptor { throw input_error("bad space selector: " + text); };
  if (text.rfind("sum1(", 0) == 0) {
    if (text.back() != ')') return fail();
    const std::string inner = text.substr(5, text.size() - 6);
    int depth = 0;
    for (std::size_t i = 0; i < inner.size(); ++i) {
      if (inner[i] == '(') ++depth;
      if (inner[i] == ')') --depth;
      if (inner[i] == ',' && depth == 0)
        return SpaceDescriptor::sum1(parse_space_selector(inner.substr(0, i)),
                                     parse_space_selector(inner.substr(i + 1)));
    }
    return fail();
  }
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ':')) parts.push_back(tok);
  try {
    if (parts.size() == 2 && parts[0] == "l1") return l1(std::stoi(parts[1]));
    if (parts.size() == 2 && parts[0] == "l2") return l2(std::stoi(parts[1]));
    if (parts.size() == 2 && parts[0] == "linf") return linf(std::stoi(parts[1]));
    if (parts.size() == 3 && parts[0] == "lp") {
      const double p = parts[1] == "inf" ? kInf : std::stod(parts[1]);
      return SpaceDescriptor::lp(p, std::stoi(parts[2]));
    }
  } catch (const std::exception&) {
    return fail();
  }
  return fail();
}

inline std::string selector_string(const SpaceDescriptor& s) {
  if (s.kind() == SpaceKind::sum1)
    return "sum1(" + selector_string(s.left()) + "," + selector_string(s.right()) + ")";
  if (s.p() == 1.0) return "l1:" + std::to_string(s.dim());
  if (std::isinf(s.p())) return "linf:" + std::to_string(s.dim());
  std::ostringstream os;
  os << "lp:" << s.p() << ":" << s.dim();
  return os.str();
}

// --------------------------------------------------------------------------
// Vectors, functionals, operators

inline json to_json(const VectorInSpace& v) {
  return json{{"space", to_json(v.space)}, {"coords", v.coords}};
}

inline json to_json(const Functional& f) {
  return json{{"space", to_json(f.space)}, {"coords", f.coords}};
}

inline json to_json(const LinearOperator& T) {
  json rows = json::array();
  for (int r = 0; r < T.rows(); ++r) {
    json row = json::array();
    for (int c = 0; c < T.cols(); ++c) row.push_back(T.at(r, c));
    rows.push_back(std::move(row));
  }
  return json{{"matrix", std::move(rows)}, {"domain", to_json(T.domain)}, {"codomain", to_json(T.codomain)}};
}

inline LinearOperator operator_from_json(const json& j) {
  const auto dom = space_from_json(j.at("domain"));
  const auto cod = space_from_json(j.at("codomain"));
  const auto& rows = j.at("matrix");
  if (!rows.is_array() || static_cast<int>(rows.size()) != cod.dim())
    throw input_error("matrix row count must equal the codomain dimension");
  std::vector<double> m;
  m.reserve(static_cast<std::size_t>(dom.dim() * cod.dim()));
  for (const auto& row : rows) {
    if (!row.is_array() || static_cast<int>(row.size()) != dom.dim())
      throw input_error("matrix column count must equal the domain dimension");
    for (const auto& v : row) m.push_back(v.get<double>());
  }
  return LinearOperator(dom, cod, std::move(m));
}

// --------------------------------------------------------------------------
// Verdicts and reports

inline json to_json(const OrthogonalityVerdict& v) {
  return json{{"orthogonal", v.orthogonal}, {"minimizer", v.minimizer}, {"min_value", v.min_value},
              {"margin", v.margin},         {"method", to_string(v.method)}, {"tolerance", v.tolerance}};
}

inline json to_json(const NormAttainment& a) {
  json pts = json::array();
  for (const auto& p : a.points) pts.push_back(p);
  return json{{"norm_value", a.norm_value},
              {"exactness", to_string(a.exactness)},
              {"attainment_tolerance", a.attainment_tolerance},
              {"entire_sphere", a.entire_sphere},
              {"points", std::move(pts)}};
}

inline json to_json(const MtOrthogonalityVerdict& v) {
  json j{{"orthogonal", v.orthogonal},
         {"attainment", to_json(v.attainment)},
         {"tolerance", v.tolerance}};
  j["plus_witness"] = v.plus_witness ? json(v.plus_witness->coords) : json(nullptr);
  j["minus_witness"] = v.minus_witness ? json(v.minus_witness->coords) : json(nullptr);
  return j;
}

inline json to_json(const PointSymmetryReport& r) {
  json j{{"subject", to_json(r.subject)},
         {"direction", to_string(r.direction)},
         {"verdict", to_string(r.verdict)},
         {"trials_used", r.trials_used},
         {"seed", r.seed},
         {"tolerance", r.tolerance}};
  j["witness"] = r.witness ? json(r.witness->coords) : json(nullptr);
  return j;
}

inline json to_json(const OperatorSymmetryReport& r) {
  json j{{"subject", to_json(r.subject)},
         {"direction", to_string(r.direction)},
         {"verdict", to_string(r.verdict)},
         {"strategy", r.strategy},
         {"trials_used", r.trials_used},
         {"seed", r.seed},
         {"tolerance", r.tolerance}};
  j["witness"] = r.witness ? to_json(*r.witness) : json(nullptr);
  return j;
}

inline json to_json(const ClassifierVerdict& v) {
  json j{{"result", to_string(v.result)}, {"active_index", v.active_index}, {"violation", v.violation}};
  j["f"] = v.f ? json(v.f->coords) : json(nullptr);
  j["w"] = v.w ? json(v.w->coords) : json(nullptr);
  j["point_report"] = v.point_report ? to_json(*v.point_report) : json(nullptr);
  return j;
}

inline json to_json(const Step3Certificate& c) {
  return json{{"x", to_json(c.x)}, {"y", to_json(c.y)}, {"v", to_json(c.v)},
              {"r", c.r},          {"t", c.t},          {"eps", c.eps},
              {"w", c.w},          {"A", to_json(c.A)}};
}

// --------------------------------------------------------------------------
// File helpers

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw input_error("cannot read file: " + path);
  json j;
  in >> j;
  return j;
}

inline void write_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw input_error("cannot write file: " + path);
  out << j.dump(2) << "\n";
}

/// FNV-1a content hash, used to give persisted reports collision-free names.
inline std::string content_hash(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream os;
  os << std::hex << h;
  return os.str();
}

inline std::vector<double> parse_csv_numbers(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    try {
      out.push_back(std::stod(tok));
    } catch (const std::exception&) {
      throw input_error("bad number in list: " + tok);
    }
  }
  if (out.empty()) throw input_error("empty coordinate list");
  return out;
}

}  // namespace bj::io
