#pragma once

#include <sstream>
#include <string>

#include <json.hpp>

#include "criteria.hpp"
#include "parser.hpp"
#include "reduce.hpp"

namespace polysmith {

inline constexpr int kReportFormatVersion = 1;

using Json = nlohmann::ordered_json;

namespace detail {

inline Json matrix_json(const PolyMatrix& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json r = Json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) r.push_back(m(i, j).to_string());
    rows.push_back(r);
  }
  return rows;
}

inline PolyMatrix matrix_from_json(const Json& j, const VarSet& vs) {
  if (!j.is_array() || j.empty()) throw UsageError("matrix must be a non-empty array of rows");
  std::vector<std::vector<Polynomial>> rows;
  for (auto& r : j) {
    if (!r.is_array()) throw UsageError("matrix row must be an array");
    rows.emplace_back();
    for (auto& e : r) rows.back().push_back(parse_polynomial(e.get<std::string>(), vs));
  }
  return PolyMatrix::from_rows(vs, rows);
}

inline Json witness_json(const Witness& w) {
  return Json{{"U", matrix_json(w.U)}, {"V", matrix_json(w.V)}, {"S", matrix_json(w.S)}};
}

inline Witness witness_from_json(const Json& j, const VarSet& vs) {
  return {matrix_from_json(j.at("U"), vs), matrix_from_json(j.at("V"), vs), matrix_from_json(j.at("S"), vs)};
}

inline VarSet vars_from_json(const Json& j) { return VarSet(j.at("vars").get<std::vector<std::string>>()); }

inline void expect_kind(const Json& j, const std::string& kind) {
  if (j.at("format_version").get<int>() != kReportFormatVersion)
    throw UsageError("unsupported report format_version " + j.at("format_version").dump());
  if (j.at("kind").get<std::string>() != kind)
    throw UsageError("expected a '" + kind + "' report, found '" + j.at("kind").get<std::string>() + "'");
}

inline Json header(const std::string& kind, const VarSet& vs) {
  return Json{{"format_version", kReportFormatVersion}, {"kind", kind}, {"vars", vs.names()}};
}

inline ShapeKind shape_from_name(const std::string& s) {
  for (auto k : {ShapeKind::Chain, ShapeKind::Linear, ShapeKind::UnivariateDr, ShapeKind::Unsupported})
    if (s == shape_name(k)) return k;
  throw UsageError("unknown shape '" + s + "'");
}

inline Verdict verdict_from_name(const std::string& s) {
  for (auto v : {Verdict::Equivalent, Verdict::NotEquivalent, Verdict::UndecidableShape})
    if (s == verdict_name(v)) return v;
  throw UsageError("unknown verdict '" + s + "'");
}

inline FailureKind failure_from_marker(const std::string& s) {
  for (auto k : {FailureKind::KernelNotZlp, FailureKind::CompletionNotFound, FailureKind::UnsupportedShape})
    if (s == failure_marker(k)) return k;
  throw UsageError("unknown failure marker '" + s + "'");
}

inline std::size_t var_index(const VarSet& vs, const std::string& n) {
  auto i = vs.index_of(n);
  if (!i) throw UsageError("unknown variable '" + n + "'");
  return *i;
}

}  // namespace detail

inline Json to_json(const EquivalenceReport& r, const VarSet& vs) {
  Json j = detail::header("equivalence", vs);
  j["rows"] = r.rows;
  j["cols"] = r.cols;
  j["rank"] = r.rank;
  Json shape{{"kind", shape_name(r.shape.kind)}};
  Json chain = Json::array();
  for (auto& c : r.shape.chain) chain.push_back(Json{{"var", vs.name(c.var)}, {"f", c.f.to_string()}});
  shape["chain"] = chain;
  Json forms = Json::array();
  for (auto& g : r.shape.forms) forms.push_back(g.to_polynomial(vs).to_string());
  shape["forms"] = forms;
  shape["tail"] = r.shape.tail.varset().size() ? r.shape.tail.to_string() : "0";
  shape["tail_var"] = vs.name(r.shape.tail_var);
  shape["reason"] = r.shape.reason;
  j["shape"] = shape;
  j["classified"] = r.classified.to_string();
  Json dk = Json::array(), jk = Json::array();
  for (auto& d : r.per_k) {
    dk.push_back(d.dk.to_string());
    jk.push_back(d.unit ? Json(*d.unit) : Json(nullptr));
  }
  j["d_k"] = dk;
  j["jk"] = jk;
  j["verdict"] = verdict_name(r.verdict);
  j["theorem"] = r.theorem;
  j["witnesses"] = r.witnesses ? detail::witness_json(*r.witnesses) : Json(nullptr);
  return j;
}

inline EquivalenceReport equivalence_from_json(const Json& j) {
  detail::expect_kind(j, "equivalence");
  VarSet vs = detail::vars_from_json(j);
  auto P = [&](const Json& s) { return parse_polynomial(s.get<std::string>(), vs); };
  EquivalenceReport r;
  r.rows = j.at("rows").get<std::size_t>();
  r.cols = j.at("cols").get<std::size_t>();
  r.rank = j.at("rank").get<std::size_t>();
  const Json& s = j.at("shape");
  r.shape.kind = detail::shape_from_name(s.at("kind").get<std::string>());
  for (auto& c : s.at("chain")) r.shape.chain.push_back({detail::var_index(vs, c.at("var").get<std::string>()), P(c.at("f"))});
  for (auto& g : s.at("forms")) r.shape.forms.push_back(LinearForm::from_polynomial(P(g)));
  r.shape.tail = P(s.at("tail"));
  r.shape.tail_var = detail::var_index(vs, s.at("tail_var").get<std::string>());
  r.shape.reason = s.at("reason").get<std::string>();
  r.classified = P(j.at("classified"));
  const Json& dk = j.at("d_k");
  const Json& jk = j.at("jk");
  if (dk.size() != jk.size()) throw UsageError("d_k and jk lists differ in length");
  for (std::size_t k = 0; k < dk.size(); ++k) {
    KDiagnostic d{k + 1, P(dk[k]), std::nullopt};
    if (!jk[k].is_null()) d.unit = jk[k].get<bool>();
    r.per_k.push_back(d);
  }
  r.verdict = detail::verdict_from_name(j.at("verdict").get<std::string>());
  r.theorem = j.at("theorem").get<std::string>();
  if (!j.at("witnesses").is_null()) r.witnesses = detail::witness_from_json(j.at("witnesses"), vs);
  return r;
}

inline Json to_json(const ReductionTrace& t, const VarSet& vs) {
  Json j = detail::header("reduction", vs);
  j["orientation"] = t.orientation;
  Json steps = Json::array();
  for (auto& s : t.steps)
    steps.push_back(Json{{"description", s.description},
                         {"left", detail::matrix_json(s.left)},
                         {"right", detail::matrix_json(s.right)},
                         {"state", detail::matrix_json(s.state)}});
  j["steps"] = steps;
  j["result"] = t.result ? detail::witness_json(*t.result) : Json(nullptr);
  j["failure"] = t.failure ? Json(failure_marker(*t.failure)) : Json(nullptr);
  j["detail"] = t.detail;
  return j;
}

inline ReductionTrace reduction_from_json(const Json& j) {
  detail::expect_kind(j, "reduction");
  VarSet vs = detail::vars_from_json(j);
  ReductionTrace t;
  t.orientation = j.at("orientation").get<std::string>();
  for (auto& s : j.at("steps"))
    t.steps.push_back({s.at("description").get<std::string>(), detail::matrix_from_json(s.at("left"), vs),
                       detail::matrix_from_json(s.at("right"), vs), detail::matrix_from_json(s.at("state"), vs)});
  if (!j.at("result").is_null()) t.result = detail::witness_from_json(j.at("result"), vs);
  if (!j.at("failure").is_null()) t.failure = detail::failure_from_marker(j.at("failure").get<std::string>());
  t.detail = j.at("detail").get<std::string>();
  return t;
}

inline Json to_json(const InvariantFactorList& f, const VarSet& vs) {
  Json j = detail::header("smith-form", vs);
  j["rows"] = f.rows;
  j["cols"] = f.cols;
  j["rank"] = f.rank;
  Json fs = Json::array();
  for (auto& p : f.factors) fs.push_back(p.to_string());
  j["factors"] = fs;
  return j;
}

inline InvariantFactorList smith_form_from_json(const Json& j) {
  detail::expect_kind(j, "smith-form");
  VarSet vs = detail::vars_from_json(j);
  InvariantFactorList f;
  f.rows = j.at("rows").get<std::size_t>();
  f.cols = j.at("cols").get<std::size_t>();
  f.rank = j.at("rank").get<std::size_t>();
  for (auto& p : j.at("factors")) f.factors.push_back(parse_polynomial(p.get<std::string>(), vs));
  return f;
}

inline Json verification_json(bool verified, const VarSet& vs) {
  Json j = detail::header("verification", vs);
  j["verified"] = verified;
  return j;
}

// Human-readable layout of a report tree: one `key: value` per line, nested
// containers indented by two spaces, array items prefixed with "- ". Scalars
// and all-scalar arrays are written as JSON literals so the text parses back
// to the same tree.
namespace detail {

inline bool inline_value(const Json& v) {
  if (v.is_primitive() || v.empty()) return true;
  if (!v.is_array()) return false;
  for (auto& e : v)
    if (!e.is_primitive()) return false;
  return true;
}

inline void render_block(const Json& v, std::size_t indent, std::ostringstream& os) {
  std::string pad(indent, ' ');
  if (v.is_object()) {
    for (auto& [k, e] : v.items()) {
      if (inline_value(e)) {
        os << pad << k << ": " << e.dump() << "\n";
      } else {
        os << pad << k << ":\n";
        render_block(e, indent + 2, os);
      }
    }
  } else {
    for (auto& e : v) {
      if (inline_value(e)) {
        os << pad << "- " << e.dump() << "\n";
      } else {
        os << pad << "-\n";
        render_block(e, indent + 2, os);
      }
    }
  }
}

struct HumanLine {
  std::size_t indent;
  bool item;
  std::string key, value;
  std::size_t lineno;
};

inline Json parse_block(const std::vector<HumanLine>& ls, std::size_t& pos, std::size_t indent) {
  if (pos >= ls.size() || ls[pos].indent != indent) throw ParseError("expected an indented block", pos < ls.size() ? ls[pos].lineno : 0, indent + 1);
  bool array = ls[pos].item;
  Json out = array ? Json::array() : Json::object();
  while (pos < ls.size() && ls[pos].indent >= indent) {
    const HumanLine& l = ls[pos];
    if (l.indent != indent || l.item != array) throw ParseError("inconsistent indentation", l.lineno, l.indent + 1);
    ++pos;
    Json v;
    if (l.value.empty()) {
      v = parse_block(ls, pos, indent + 2);
    } else {
      try {
        v = Json::parse(l.value);
      } catch (const Json::parse_error& e) {
        throw ParseError(std::string("bad value: ") + e.what(), l.lineno, l.indent + 1);
      }
    }
    if (array) {
      out.push_back(std::move(v));
    } else {
      out[l.key] = std::move(v);
    }
  }
  return out;
}

}  // namespace detail

inline std::string render_human(const Json& doc) {
  std::ostringstream os;
  detail::render_block(doc, 0, os);
  return os.str();
}

inline Json parse_human(const std::string& text) {
  std::vector<detail::HumanLine> ls;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(' ') == std::string::npos) continue;
    std::size_t ind = line.find_first_not_of(' ');
    std::string body = line.substr(ind);
    detail::HumanLine h{ind, false, "", "", lineno};
    if (body == "-" || body.rfind("- ", 0) == 0) {
      h.item = true;
      h.value = body.size() > 2 ? body.substr(2) : "";
    } else {
      std::size_t c = body.find(':');
      if (c == std::string::npos) throw ParseError("expected 'key: value'", lineno, ind + 1);
      h.key = body.substr(0, c);
      h.value = c + 1 < body.size() ? body.substr(c + 2) : "";
    }
    ls.push_back(h);
  }
  if (ls.empty()) throw ParseError("empty report", lineno, 1);
  std::size_t pos = 0;
  Json doc = detail::parse_block(ls, pos, 0);
  if (pos != ls.size()) throw ParseError("trailing content", ls[pos].lineno, ls[pos].indent + 1);
  return doc;
}

}  // namespace polysmith
