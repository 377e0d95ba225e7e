#include "wickito/serialize.hpp"

#include "wickito/errors.hpp"

namespace wickito {

using nlohmann::json;

void to_json(json& j, const ChaosVector& f) {
    j = json::array();
    for (const auto& t : f.terms()) j.push_back({{"alpha", t.alpha.to_string()}, {"coeff", t.coeff}});
}

void from_json(const json& j, ChaosVector& f) {
    if (!j.is_array()) throw ParameterError("chaos vector JSON must be an array");
    std::vector<ChaosVector::Term> terms;
    terms.reserve(j.size());
    for (const auto& e : j) {
        if (!e.is_object() || !e.contains("alpha") || !e.contains("coeff"))
            throw ParameterError("chaos vector JSON entries need 'alpha' and 'coeff'");
        terms.push_back({MultiIndex::parse(e.at("alpha").get<std::string>()), e.at("coeff").get<double>()});
    }
    f = ChaosVector(std::move(terms));
}

void to_json(json& j, const McStatistic& s) { j = {{"mean", s.mean}, {"std_error", s.std_error}}; }

namespace {

json summary(const ChaosVector& v, int p, bool with_vector) {
    json j = {{"constant", v.constant_term()},
              {"terms", v.terms().size()},
              {"dual_norm", dual_norm_k(v, p)}};
    if (with_vector) j["coefficients"] = v;
    return j;
}

}  // namespace

json report_json(const ItoReport& r, bool with_vectors) {
    json j = {{"function", r.f_descriptor}, {"density", r.density}, {"regime", to_string(r.regime)},
              {"t0", r.t0},           {"t", r.t},              {"n_steps", r.n_steps},
              {"modes", r.modes}};
    if (r.regime == Regime::monte_carlo) {
        j["paths"] = r.paths;
        j["seed"] = r.seed;
        j["lhs"] = r.mc_lhs;
        j["wick_sum"] = r.mc_wick;
        j["correction"] = r.mc_correction;
        j["residual"] = r.mc_residual;
        j["max_abs_residual"] = r.mc_max_abs_residual;
        return j;
    }
    j["variance"] = to_string(r.variance);
    j["p"] = r.p;
    j["max_order"] = r.max_order;
    j["lhs"] = summary(r.lhs, r.p, with_vectors);
    j["initial"] = summary(r.initial, r.p, with_vectors);
    j["wick_integral"] = summary(r.wick_integral, r.p, with_vectors);
    j["correction"] = summary(r.correction, r.p, with_vectors);
    j["residual"] = r.residual;
    j["residual_without_correction"] = r.residual_without_correction;
    j["riemann_residual"] = r.riemann_residual;
    j["residual_by_order"] = r.residual_by_order;
    j["tail_bound"] = r.tail_bound;
    return j;
}

json report_json(const ExponentialItoReport& r, bool with_vectors) {
    return {{"alpha", r.alpha},
            {"residual", r.residual},
            {"representation_gap", r.representation_gap},
            {"constant_term", r.constant_term},
            {"characteristic", r.characteristic},
            {"tail_bound", r.tail_bound},
            {"cos", report_json(r.cos_part, with_vectors)},
            {"sin", report_json(r.sin_part, with_vectors)}};
}

json report_json(const ConvergenceReport& r) {
    json j = {{"integrand", r.label}, {"density", r.density},   {"a", r.a},
              {"b", r.b},             {"p", r.p},               {"partitions", r.partitions},
              {"errors", r.errors},   {"bounds", r.bounds},     {"reference_error", r.reference_error}};
    j["slope"] = r.slope ? json(*r.slope) : json(nullptr);
    return j;
}

json report_json(const LipschitzFit& f) {
    return {{"L", f.L},         {"exponent_fit", f.exponent_fit}, {"exponent_bound", f.exponent_bound},
            {"C1", f.C1},       {"C2", f.C2},                     {"series_CN", f.series_CN},
            {"norm_CN", f.norm_CN}};
}

}  // namespace wickito
