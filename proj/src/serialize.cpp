#include "bhvar/serialize.hpp"

#include <sstream>

namespace bhvar {

json complex_to_json(const cx& value) {
    return json::array({value.real(), value.imag()});
}

cx complex_from_json(const json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
        throw std::invalid_argument(where + ": expected a [re, im] pair");
    }
    return cx(j[0].get<double>(), j[1].get<double>());
}

json vector_to_json(const Vec& v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(complex_to_json(v(i)));
    return out;
}

Vec vector_from_json(const json& j, const std::string& where) {
    if (!j.is_array()) throw std::invalid_argument(where + ": expected an array");
    Vec v(static_cast<Eigen::Index>(j.size()));
    for (size_t i = 0; i < j.size(); ++i) {
        v(static_cast<Eigen::Index>(i)) = complex_from_json(j[i], where);
    }
    return v;
}

json to_json(const SectorVector& v) {
    return json{{"M", v.basis->sites()}, {"N", v.basis->bosons()}, {"amps", vector_to_json(v.amps)}};
}

SectorVector sector_vector_from_json(const json& j, int dim_cap) {
    const int M = j.at("M").get<int>();
    const int N = j.at("N").get<int>();
    BasisPtr basis = enumerate_sector(M, N, dim_cap);
    Vec amps = vector_from_json(j.at("amps"), "sector_vector.amps");
    if (amps.size() != basis->dim()) {
        std::ostringstream os;
        os << "sector_vector_from_json: " << amps.size() << " amplitudes for a sector of dimension "
           << basis->dim();
        throw std::invalid_argument(os.str());
    }
    return SectorVector{basis, std::move(amps)};
}

json to_json(const SuMState& s) {
    return json{{"type", "suM"}, {"N", s.N}, {"xi", vector_to_json(s.xi)}};
}

SuMState sum_state_from_json(const json& j) {
    if (j.at("type").get<std::string>() != "suM") {
        throw std::invalid_argument("sum_state_from_json: type must be \"suM\"");
    }
    return make_sum_state(j.at("N").get<int>(), vector_from_json(j.at("xi"), "suM.xi"));
}

json to_json(const GlauberState& s) {
    return json{{"type", "glauber"}, {"z", vector_to_json(s.z)}};
}

GlauberState glauber_state_from_json(const json& j) {
    if (j.at("type").get<std::string>() != "glauber") {
        throw std::invalid_argument("glauber_state_from_json: type must be \"glauber\"");
    }
    return make_glauber_state(vector_from_json(j.at("z"), "glauber.z"));
}

json to_json(const GutzwillerState& s) {
    json rows = json::array();
    for (int i = 0; i < s.M; ++i) {
        json row = json::array();
        for (int n = 0; n <= s.n_max; ++n) row.push_back(complex_to_json(s.f(i, n)));
        rows.push_back(std::move(row));
    }
    return json{{"M", s.M}, {"n_max", s.n_max}, {"f", std::move(rows)}};
}

GutzwillerState gutzwiller_state_from_json(const json& j) {
    const int M = j.at("M").get<int>();
    const int n_max = j.at("n_max").get<int>();
    const json& rows = j.at("f");
    if (!rows.is_array() || static_cast<int>(rows.size()) != M) {
        throw std::invalid_argument("gutzwiller_state_from_json: f must have M rows");
    }
    Eigen::MatrixXcd f(M, n_max + 1);
    for (int i = 0; i < M; ++i) {
        const json& row = rows[i];
        if (!row.is_array() || static_cast<int>(row.size()) != n_max + 1) {
            throw std::invalid_argument("gutzwiller_state_from_json: f rows must have n_max+1 entries");
        }
        for (int n = 0; n <= n_max; ++n) {
            f(i, n) = complex_from_json(row[n], "gutzwiller.f");
        }
    }
    return make_gutzwiller_state(std::move(f));
}

}  // namespace bhvar
