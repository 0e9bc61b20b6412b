#pragma once

#include <json.hpp>

#include "qconv/engine.hpp"

namespace qconv {

using ordered_json = nlohmann::ordered_json;

/// JSON report of one scenario run. Key order is fixed, doubles serialize
/// with round-trip precision, so reports are byte-deterministic and lossless.
ordered_json make_report(const std::string& scenario_name, const Model& m,
                         const PipelineResult& pr,
                         const std::optional<GermValidation>& germs,
                         double tol = kSymbolicTol,
                         double residual_tol = 1e-3);

std::string render_text(const ordered_json& report);

}  // namespace qconv
