#include "censtail/types.hpp"

#include <cmath>

namespace censtail {

CensoredSample::CensoredSample(std::vector<double> z, std::vector<unsigned char> delta)
    : z_(std::move(z)), delta_(std::move(delta)) {
    if (z_.empty()) raise(ErrorCode::domain, "sample must contain at least one observation");
    if (z_.size() != delta_.size())
        raise(ErrorCode::domain, "z and delta lengths differ");
    for (std::size_t i = 0; i < z_.size(); ++i) {
        if (!std::isfinite(z_[i]) || z_[i] <= 0.0)
            raise(ErrorCode::domain,
                  "observation " + std::to_string(i + 1) + " is not a positive finite value");
        if (delta_[i] > 1)
            raise(ErrorCode::domain,
                  "censoring flag " + std::to_string(i + 1) + " is not 0 or 1");
    }
}

namespace {

struct EstimatorNames {
    Estimator id;
    std::string_view table;
    std::string_view cli;
};

constexpr std::array<EstimatorNames, 12> kNames = {{
    {Estimator::hill, "Hill", "hill"},
    {Estimator::mvrb, "MVRB", "mvrb"},
    {Estimator::zipf, "Zipf", "zipf"},
    {Estimator::uh, "UH", "uh"},
    {Estimator::ww_km, "WW.KM", "wwkm"},
    {Estimator::ww_l, "WW.L", "wwl"},
    {Estimator::mom, "MOM", "mom"},
    {Estimator::mom_r, "MomR", "momr"},
    {Estimator::p_mom, "PMom", "pmom"},
    {Estimator::pot, "POT", "pot"},
    {Estimator::pot_l, "POT.L", "potl"},
    {Estimator::erm, "ERM", "erm"},
}};

}  // namespace

std::string_view estimator_name(Estimator e) {
    for (const auto& n : kNames)
        if (n.id == e) return n.table;
    return "?";
}

std::string_view estimator_cli_name(Estimator e) {
    for (const auto& n : kNames)
        if (n.id == e) return n.cli;
    return "?";
}

std::optional<Estimator> estimator_from_cli_name(std::string_view name) {
    for (const auto& n : kNames)
        if (n.cli == name) return n.id;
    return std::nullopt;
}

}  // namespace censtail
