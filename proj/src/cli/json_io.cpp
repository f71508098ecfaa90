#include "purify/json_io.hpp"

#include <initializer_list>
#include <stdexcept>
#include <string>

namespace purify {

namespace {

using nlohmann::json;

void reject_unknown_keys(const json& j, std::initializer_list<std::string_view> allowed) {
    if (!j.is_object()) throw std::invalid_argument("expected a JSON object");
    for (const auto& [key, value] : j.items()) {
        bool known = false;
        for (auto a : allowed) known = known || key == a;
        if (!known) throw std::invalid_argument("unknown key '" + key + "'");
    }
}

}  // namespace

std::string to_string(LossPlacement placement) {
    return placement == LossPlacement::BeforeRound ? "before" : "after";
}

LossPlacement parse_loss_placement(std::string_view text) {
    if (text == "before") return LossPlacement::BeforeRound;
    if (text == "after") return LossPlacement::AfterRound;
    throw std::invalid_argument("loss placement must be 'before' or 'after'");
}

void to_json(json& j, const SectorDistribution& s) { j = json{{"p0", s.p0()}, {"p1", s.p1()}, {"p2", s.p2()}}; }

void from_json(const json& j, SectorDistribution& s) {
    reject_unknown_keys(j, {"p0", "p1", "p2"});
    s = SectorDistribution{j.at("p0").get<double>(), j.at("p1").get<double>(), j.at("p2").get<double>()};
}

void to_json(json& j, const PairEnsemble& p) {
    j = p.sectors;
    j["fidelity"] = p.fidelity;
}

void from_json(const json& j, PairEnsemble& p) {
    reject_unknown_keys(j, {"p0", "p1", "p2", "fidelity"});
    json sectors = j;
    sectors.erase("fidelity");
    p.sectors = sectors.get<SectorDistribution>();
    p.fidelity = j.at("fidelity").get<double>();
    if (!(p.fidelity >= 0.0 && p.fidelity <= 1.0)) throw std::domain_error("fidelity must lie in [0, 1]");
}

void to_json(json& j, const LossChannel& c) { j = json{{"eta", c.eta()}}; }

void from_json(const json& j, LossChannel& c) {
    reject_unknown_keys(j, {"eta"});
    c = LossChannel{j.at("eta").get<double>()};
}

void to_json(json& j, const CascadeConfig& c) {
    j = c.initial.sectors;
    j["rounds"] = c.rounds;
    j["eta"] = c.eta;
    j["loss_placement"] = to_string(c.loss_placement);
    j["f0"] = c.initial.fidelity;
}

void from_json(const json& j, CascadeConfig& c) {
    reject_unknown_keys(j, {"rounds", "eta", "loss_placement", "f0", "p0", "p1", "p2"});
    CascadeConfig parsed;
    parsed.rounds = j.value("rounds", parsed.rounds);
    parsed.eta = LossChannel{j.value("eta", parsed.eta)}.eta();
    if (j.contains("loss_placement")) {
        parsed.loss_placement = parse_loss_placement(j.at("loss_placement").get<std::string>());
    }
    const auto& defaults = parsed.initial.sectors;
    parsed.initial.sectors = SectorDistribution{j.value("p0", defaults.p0()), j.value("p1", defaults.p1()),
                                                j.value("p2", defaults.p2())};
    parsed.initial.fidelity = j.value("f0", parsed.initial.fidelity);
    if (parsed.rounds < 1) throw std::domain_error("rounds must be at least 1");
    if (!(parsed.initial.fidelity >= 0.0 && parsed.initial.fidelity <= 1.0)) {
        throw std::domain_error("f0 must lie in [0, 1]");
    }
    c = parsed;
}

}  // namespace purify
