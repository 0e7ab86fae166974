#pragma once

#include <string_view>

#include <json.hpp>

#include "ncavg/certificate.hpp"
#include "ncavg/infdim.hpp"
#include "ncavg/linalg.hpp"

namespace ncavg {

using Json = nlohmann::json;

/// Parses "a+bi" style literals: "0", "2", "0.5i", "-i", "0.3-0.4i", "1e-3+2E-2i".
/// A trailing 'j' is accepted in place of 'i'.
Complex parse_complex(std::string_view text);

Json complex_to_json(Complex z);
/// Accepts [re, im] or a plain number.
Complex complex_from_json(const Json& j);

/// Row-major nested arrays of [re, im] pairs.
Json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const Json& j);

/// Columns of the frame as arrays of [re, im].
Json vector_to_json(const ComplexVector& v);
ComplexVector vector_from_json(const Json& j);

/// {"eigenvalues": [...], "tail_mass": eps}; a missing tail_mass is taken as
/// 1 - sum.
NormalState normal_state_from_json(const Json& j);
Json normal_state_to_json(const NormalState& s);

/// {"frame": [columns], "window": W, "cofinite_excluding": [...] | null,
///  "tail_block": {"start": S, "size": b} | null}. Basis indices are 0-based.
Json projection_to_json(const LazyProjection& p);
LazyProjection projection_from_json(const Json& j);

Json certificate_to_json(const Certificate& cert);

}  // namespace ncavg
