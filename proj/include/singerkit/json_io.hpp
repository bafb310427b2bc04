#pragma once

#include <json.hpp>

#include "dynamics.hpp"
#include "min_principle.hpp"
#include "schwarzian.hpp"
#include "settings.hpp"
#include "sweep.hpp"

// JSON views of the report types. ordered_json keeps insertion order, so a
// fixed field layout dumps byte-identically run to run.

namespace singerkit {

using Json = nlohmann::ordered_json;

Json to_json(const Settings& st);
Json to_json(const Interval& J);

Json to_json(const NegativityReport& r);
Json to_json(const ChainReport& r);

Json to_json(const DerivExtremum& e);
Json to_json(const MinPrincipleReport& r);

Json to_json(const PeriodicOrbit& o);
Json to_json(const CriticalPoint& c);
Json to_json(const BasinEstimate& b);
Json to_json(const NeutralCheck& c);
Json to_json(const SingerReport& r);

Json to_json(const BifurcationRow& row);

}  // namespace singerkit
