#pragma once

#include "wickito/chaos.hpp"
#include "wickito/integrator.hpp"
#include "wickito/ito.hpp"
#include "wickito/process.hpp"

#include <json.hpp>

namespace wickito {

// [{"alpha": "1,0,2", "coeff": 0.5}, ...] in canonical index order.
void to_json(nlohmann::json& j, const ChaosVector& f);
void from_json(const nlohmann::json& j, ChaosVector& f);

void to_json(nlohmann::json& j, const McStatistic& s);

// Chaos vectors are summarized (constant term, support size, norm) unless
// with_vectors is set.
nlohmann::json report_json(const ItoReport& r, bool with_vectors = false);
nlohmann::json report_json(const ExponentialItoReport& r, bool with_vectors = false);
nlohmann::json report_json(const ConvergenceReport& r);
nlohmann::json report_json(const LipschitzFit& f);

}  // namespace wickito
