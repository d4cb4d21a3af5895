#include "rdl/json_io.hpp"

#include <fstream>
#include <sstream>

#include "rdl/errors.hpp"

namespace rdl::json_io {

namespace {

template <typename F>
auto decoding(const char* what, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed ") + what + ": " + e.what());
  }
}

json vec3(const Eigen::Vector3d& v) { return json::array({v(0), v(1), v(2)}); }

Eigen::Vector3d vec3_from(const json& j, const char* what) {
  if (!j.is_array() || j.size() != 3)
    throw InputError(std::string(what) + " must be an array of 3 reals");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

}  // namespace

json parse(const std::string& text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1;
    std::size_t col = 1;
    const std::size_t stop = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size());
    for (std::size_t k = 0; k < stop; ++k) {
      if (text[k] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    std::string msg = e.what();
    if (auto pos = msg.find("parse error"); pos != std::string::npos) msg = msg.substr(pos);
    throw InputError(source + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + msg);
  }
}

json load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str(), path);
}

json to_json(const ComplexMatrix& m) {
  json data = json::array();
  for (Index r = 0; r < m.rows(); ++r)
    for (Index c = 0; c < m.cols(); ++c) data.push_back(json::array({m(r, c).real(), m(r, c).imag()}));
  return json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

ComplexMatrix matrix_from_json(const json& j) {
  return decoding("matrix", [&] {
    if (!j.is_object()) throw InputError("matrix must be a JSON object");
    const auto rows = j.at("rows").get<Index>();
    const auto cols = j.at("cols").get<Index>();
    const json& data = j.at("data");
    if (rows < 1 || cols < 1) throw InputError("matrix dimensions must be positive");
    if (!data.is_array() || static_cast<Index>(data.size()) != rows * cols)
      throw InputError("matrix data must hold rows*cols = " + std::to_string(rows * cols) +
                       " entries");
    ComplexMatrix m(rows, cols);
    for (Index r = 0; r < rows; ++r) {
      for (Index c = 0; c < cols; ++c) {
        const json& z = data[static_cast<std::size_t>(r * cols + c)];
        if (!z.is_array() || z.size() != 2) throw InputError("matrix entries must be [re, im] pairs");
        m(r, c) = Complex(z[0].get<double>(), z[1].get<double>());
      }
    }
    return m;
  });
}

std::vector<ComplexMatrix> matrices_from_json(const json& j) {
  if (!j.is_array()) throw InputError("expected an array of matrices");
  std::vector<ComplexMatrix> out;
  for (const auto& e : j) out.push_back(matrix_from_json(e));
  return out;
}

json to_json(const StateFamily& f) {
  json members = json::array();
  for (const auto& m : f.members) members.push_back(to_json(m));
  return json{{"d_s", f.dims.d_s}, {"d_e", f.dims.d_e}, {"label", f.label}, {"members", members}};
}

StateFamily family_from_json(const json& j, const ToleranceConfig& tol) {
  const auto [dims, label, members] = decoding("family", [&] {
    if (!j.is_object()) throw InputError("family must be a JSON object");
    BipartiteDims d{j.at("d_s").get<Index>(), j.at("d_e").get<Index>()};
    return std::tuple(d, j.value("label", std::string()), matrices_from_json(j.at("members")));
  });
  return make_family(dims, members, label, tol);
}

json to_json(const TwoQubitParams& p) {
  json gamma = json::array();
  for (int i = 0; i < 3; ++i) gamma.push_back(json::array({p.gamma(i, 0), p.gamma(i, 1), p.gamma(i, 2)}));
  return json{{"alpha", vec3(p.alpha)}, {"beta", vec3(p.beta)}, {"gamma", gamma}};
}

TwoQubitParams params_from_json(const json& j) {
  return decoding("two-qubit parameters", [&] {
    TwoQubitParams p;
    p.alpha = vec3_from(j.at("alpha"), "alpha");
    p.beta = vec3_from(j.at("beta"), "beta");
    const json& g = j.at("gamma");
    if (!g.is_array() || g.size() != 3) throw InputError("gamma must be a 3x3 array");
    for (int i = 0; i < 3; ++i) p.gamma.row(i) = vec3_from(g[static_cast<std::size_t>(i)], "gamma row");
    return p;
  });
}

json to_json(const SubspaceV& v) {
  json span = json::array();
  for (const auto& b : v.span_basis()) span.push_back(to_json(b));
  json kernel = json::array();
  for (const auto& b : v.kernel_basis()) kernel.push_back(to_json(b));
  json pairs = json::array();
  for (const auto& p : v.independent_pairs)
    pairs.push_back({{"member_index", p.member_index},
                     {"reduced", to_json(p.reduced)},
                     {"joint", to_json(p.joint)}});
  return json{{"d_s", v.dims.d_s},       {"d_e", v.dims.d_e},     {"tol_rank", v.tol_rank},
              {"dim", v.dim()},          {"m", v.m()},            {"kernel_dim", v.kernel_dim()},
              {"span_basis", span},      {"kernel_basis", kernel}, {"independent_pairs", pairs}};
}

json to_json(const ConsistencyReport& r) {
  json j{{"consistent", r.consistent},
         {"status", to_string(r.status)},
         {"max_violation", r.max_violation},
         {"tolerance", r.tolerance}};
  j["witness"] = r.witness ? to_json(*r.witness) : json(nullptr);
  j["pairs_tested"] = r.pairs_tested ? json(*r.pairs_tested) : json(nullptr);
  return j;
}

json to_json(const Superoperator& s) {
  return json{{"d_s", s.d_s},
              {"matrix", to_json(s.matrix)},
              {"choi", to_json(s.choi)},
              {"extension", to_string(s.extension)},
              {"domain_dim", static_cast<Index>(std::lround(s.domain_projector.trace()))},
              {"consistency_certified", s.consistency_certified}};
}

json to_json(const SignedKraus& k) {
  json terms = json::array();
  for (const auto& t : k.terms) terms.push_back({{"e", t.e}, {"op", to_json(t.op)}});
  return json{{"terms", terms}};
}

json to_json(const Verdicts& v) {
  return json{{"hermitian_preserving", v.hermitian_preserving},
              {"trace_preserving", v.trace_preserving},
              {"completely_positive", v.completely_positive},
              {"hermiticity_error", v.hermiticity_error},
              {"trace_error", v.trace_error},
              {"min_choi_eigenvalue", v.min_choi_eigenvalue}};
}

json to_json(const ToleranceConfig& t) {
  return json{{"herm", t.herm},   {"trace", t.trace}, {"unitary", t.unitary},
              {"psd", t.psd},     {"rank", t.rank},   {"consistency", t.consistency}};
}

ToleranceConfig tolerances_from_json(const json& j, ToleranceConfig base) {
  return decoding("tolerances", [&] {
    if (!j.is_object()) throw InputError("tolerances must be a JSON object");
    base.herm = j.value("herm", base.herm);
    base.trace = j.value("trace", base.trace);
    base.unitary = j.value("unitary", base.unitary);
    base.psd = j.value("psd", base.psd);
    base.rank = j.value("rank", base.rank);
    base.consistency = j.value("consistency", base.consistency);
    return base;
  });
}

json to_json(const LinearityCoefficients& c) {
  return json{{"a11", c.a11}, {"a21", c.a21}, {"b11", vec3(c.b11)}, {"b21", vec3(c.b21)}};
}

LinearityCoefficients coefficients_from_json(const json& j) {
  return decoding("linearity coefficients", [&] {
    LinearityCoefficients c;
    c.a11 = j.at("a11").get<double>();
    c.a21 = j.at("a21").get<double>();
    c.b11 = vec3_from(j.at("b11"), "b11");
    c.b21 = vec3_from(j.at("b21"), "b21");
    return c;
  });
}

json to_json(const std::vector<LinearityResidual>& r) {
  json out = json::array();
  for (const auto& x : r) out.push_back({{"gamma_tilde11", x.gamma11}, {"gamma_tilde21", x.gamma21}});
  return out;
}

json to_json(const std::vector<PairDistance>& pairs) {
  json out = json::array();
  for (const auto& p : pairs)
    out.push_back({{"first", p.first},
                   {"second", p.second},
                   {"before", p.before},
                   {"after", p.after},
                   {"increased", p.increased}});
  return out;
}

json to_json(const std::vector<BlochRow>& rows) {
  json out = json::array();
  for (const auto& r : rows)
    out.push_back({{"alpha", vec3(r.alpha)},
                   {"gamma11", r.gamma11},
                   {"gamma21", r.gamma21},
                   {"analytic", vec3(r.analytic)},
                   {"mapped", vec3(r.mapped)},
                   {"direct", vec3(r.direct)}});
  return out;
}

}  // namespace rdl::json_io
