// serialize.hpp — JSON representations of the state types. Complex numbers
// are [re, im] pairs throughout.

#pragma once

#include "bhvar/cs_algebra.hpp"
#include "bhvar/fock.hpp"
#include "bhvar/gutzwiller.hpp"

#include <json.hpp>

namespace bhvar {

using json = nlohmann::json;

json complex_to_json(const cx& value);
cx complex_from_json(const json& j, const std::string& where);

json vector_to_json(const Vec& v);
Vec vector_from_json(const json& j, const std::string& where);

// {"M":..., "N":..., "amps":[[re,im],...]} in basis order.
json to_json(const SectorVector& v);
SectorVector sector_vector_from_json(const json& j, int dim_cap = kDefaultDimCap);

// {"type":"suM","N":...,"xi":[[re,im],...]}
json to_json(const SuMState& s);
SuMState sum_state_from_json(const json& j);

// {"type":"glauber","z":[[re,im],...]}
json to_json(const GlauberState& s);
GlauberState glauber_state_from_json(const json& j);

// {"M":..., "n_max":..., "f":[[[re,im],...],...]}
json to_json(const GutzwillerState& s);
GutzwillerState gutzwiller_state_from_json(const json& j);

}  // namespace bhvar
