#include "ncavg/json_io.hpp"

#include <charconv>
#include <cmath>
#include <string>

namespace ncavg {

namespace {

[[noreturn]] void invalid(const std::string& what) { throw Error(ErrorCode::InvalidArgument, what); }

double parse_real(std::string_view text, std::string_view whole) {
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(value)) {
    invalid("cannot parse complex number '" + std::string(whole) + "'");
  }
  return value;
}

double finite_number(const Json& j, const char* what) {
  if (!j.is_number()) invalid(std::string(what) + " must be a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) invalid(std::string(what) + " must be finite");
  return v;
}

}  // namespace

Complex parse_complex(std::string_view text) {
  std::string compact;
  for (char c : text) {
    if (c != ' ' && c != '\t') compact.push_back(c);
  }
  const std::string_view s(compact);
  if (s.empty()) invalid("empty complex literal");
  if (s.back() != 'i' && s.back() != 'j') return {parse_real(s, text), 0.0};

  const std::string_view body = s.substr(0, s.size() - 1);
  // The imaginary part starts at the last sign that is not an exponent sign.
  std::size_t split = 0;
  for (std::size_t k = body.size(); k-- > 1;) {
    if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
      split = k;
      break;
    }
  }
  const std::string_view re = body.substr(0, split);
  std::string_view im = body.substr(split);
  double imag = 0.0;
  if (im.empty() || im == "+") {
    imag = 1.0;
  } else if (im == "-") {
    imag = -1.0;
  } else {
    imag = parse_real(im, text);
  }
  return {re.empty() ? 0.0 : parse_real(re, text), imag};
}

Json complex_to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Complex complex_from_json(const Json& j) {
  if (j.is_number()) return {finite_number(j, "matrix entry"), 0.0};
  if (j.is_string()) return parse_complex(j.get<std::string>());
  if (!j.is_array() || j.size() != 2) invalid("complex entry must be [re, im] or a number");
  return {finite_number(j[0], "real part"), finite_number(j[1], "imaginary part")};
}

Json matrix_to_json(const ComplexMatrix& m) {
  Json rows = Json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Index k = 0; k < m.cols(); ++k) row.push_back(complex_to_json(m(i, k)));
    rows.push_back(std::move(row));
  }
  return rows;
}

ComplexMatrix matrix_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) invalid("matrix must be a non-empty array of rows");
  const auto rows = static_cast<Index>(j.size());
  if (!j[0].is_array() || j[0].empty()) invalid("matrix rows must be non-empty arrays");
  const auto cols = static_cast<Index>(j[0].size());
  ComplexMatrix m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    const Json& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Index>(row.size()) != cols) invalid("matrix rows have unequal lengths");
    for (Index k = 0; k < cols; ++k) m(i, k) = complex_from_json(row[static_cast<std::size_t>(k)]);
  }
  return m;
}

Json vector_to_json(const ComplexVector& v) {
  Json out = Json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(complex_to_json(v(i)));
  return out;
}

ComplexVector vector_from_json(const Json& j) {
  if (!j.is_array()) invalid("vector must be an array");
  ComplexVector v(static_cast<Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Index>(i)) = complex_from_json(j[i]);
  return v;
}

NormalState normal_state_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("eigenvalues") || !j["eigenvalues"].is_array()) {
    invalid("normal state needs an \"eigenvalues\" array");
  }
  const Json& ev = j["eigenvalues"];
  RealVector values(static_cast<Index>(ev.size()));
  for (std::size_t i = 0; i < ev.size(); ++i) values(static_cast<Index>(i)) = finite_number(ev[i], "eigenvalue");
  if (!j.contains("tail_mass") || j["tail_mass"].is_null()) return NormalState::from_prefix(std::move(values));
  return NormalState(std::move(values), finite_number(j["tail_mass"], "tail_mass"));
}

Json normal_state_to_json(const NormalState& s) {
  Json ev = Json::array();
  for (Index i = 0; i < s.eigenvalues().size(); ++i) ev.push_back(s.eigenvalues()(i));
  return {{"eigenvalues", ev}, {"tail_mass", s.tail_mass()}};
}

Json projection_to_json(const LazyProjection& p) {
  Json frame = Json::array();
  for (Index c = 0; c < p.frame().cols(); ++c) frame.push_back(vector_to_json(p.frame().col(c)));
  Json out = {{"frame", frame}, {"window", p.window()}, {"rank", p.rank().to_string()},
              {"corank", p.corank().to_string()}};
  out["cofinite_excluding"] = nullptr;
  out["tail_block"] = nullptr;
  if (const auto& tail = p.tail()) {
    if (tail->block == 1) {
      Json excluded = Json::array();
      for (std::size_t i = 0; i < tail->start; ++i) excluded.push_back(i);
      out["cofinite_excluding"] = excluded;
    } else {
      out["tail_block"] = {{"start", tail->start}, {"size", tail->block}};
    }
  }
  return out;
}

LazyProjection projection_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("frame") || !j["frame"].is_array()) {
    invalid("projection needs a \"frame\" array of columns");
  }
  const Json& cols = j["frame"];
  std::size_t window = 0;
  if (j.contains("window")) {
    if (!j["window"].is_number_unsigned()) invalid("window must be a non-negative integer");
    window = j["window"].get<std::size_t>();
  } else if (!cols.empty()) {
    window = cols[0].size();
  }
  ComplexMatrix frame(static_cast<Index>(window), static_cast<Index>(cols.size()));
  for (std::size_t c = 0; c < cols.size(); ++c) {
    const ComplexVector v = vector_from_json(cols[c]);
    if (static_cast<std::size_t>(v.size()) != window) invalid("frame columns must have the window length");
    frame.col(static_cast<Index>(c)) = v;
  }

  std::optional<BlockTail> tail;
  const bool has_cofinite = j.contains("cofinite_excluding") && !j["cofinite_excluding"].is_null();
  const bool has_block = j.contains("tail_block") && !j["tail_block"].is_null();
  if (has_cofinite && has_block) invalid("cofinite_excluding and tail_block are exclusive");
  if (has_block) {
    const Json& b = j["tail_block"];
    if (!b.is_object() || !b.contains("start") || !b.contains("size") || !b["start"].is_number_unsigned() ||
        !b["size"].is_number_unsigned()) {
      invalid("tail_block needs unsigned \"start\" and \"size\"");
    }
    tail = BlockTail{b["start"].get<std::size_t>(), b["size"].get<std::size_t>()};
  }
  if (!has_cofinite) return LazyProjection(std::move(frame), tail);

  const Json& ex = j["cofinite_excluding"];
  if (!ex.is_array()) invalid("cofinite_excluding must be an array or null");
  std::vector<std::size_t> excluded;
  for (const auto& e : ex) {
    if (!e.is_number_unsigned()) invalid("cofinite_excluding entries must be non-negative integers");
    excluded.push_back(e.get<std::size_t>());
  }
  // Indices below the window are covered by the frame; unstored indices
  // between the window and the tail start that are not excluded join as unit
  // columns.
  std::size_t start = window;
  for (auto e : excluded) start = std::max(start, e + 1);
  std::vector<char> listed(start, 0);
  for (auto e : excluded) listed[e] = 1;
  std::vector<std::size_t> kept;
  for (std::size_t i = window; i < start; ++i) {
    if (listed[i] == 0) kept.push_back(i);
  }
  ComplexMatrix full = ComplexMatrix::Zero(static_cast<Index>(start), frame.cols() + static_cast<Index>(kept.size()));
  full.topLeftCorner(frame.rows(), frame.cols()) = frame;
  for (std::size_t c = 0; c < kept.size(); ++c) {
    full(static_cast<Index>(kept[c]), frame.cols() + static_cast<Index>(c)) = 1.0;
  }
  return LazyProjection(std::move(full), BlockTail{start, 1});
}

Json certificate_to_json(const Certificate& cert) {
  Json out = {{"construction", cert.construction}, {"passed", cert.passed()}, {"failures", cert.failures}};
  const auto put = [&](const char* key, const auto& field) {
    if (field) out[key] = *field;
  };
  put("unitarity_residual", cert.unitarity_residual);
  put("eigenphase_clusters", cert.eigenphase_clusters);
  put("cluster_budget", cert.cluster_budget);
  put("target_residual", cert.target_residual);
  put("norm_residual", cert.norm_residual);
  put("structure_residual", cert.structure_residual);
  put("containment_residual", cert.containment_residual);
  put("orthonormality_residual", cert.orthonormality_residual);
  put("error_bound", cert.error_bound);
  return out;
}

}  // namespace ncavg
