#include "bhvar/serialize.hpp"

#include "test_support.hpp"

#include <doctest.h>

#include <random>

using namespace bhvar;
using namespace bhvar::testing;

TEST_CASE("state JSON round trips") {
    std::mt19937_64 rng(401);

    SUBCASE("sector vectors") {
        BasisPtr basis = enumerate_sector(3, 4);
        SectorVector v{basis, random_unit_vector(rng, basis->dim())};
        const json j = to_json(v);
        CHECK(j.at("M") == 3);
        CHECK(j.at("N") == 4);
        const SectorVector back = sector_vector_from_json(j);
        CHECK((back.amps - v.amps).cwiseAbs().maxCoeff() == 0.0);

        json broken = j;
        broken["amps"].erase(0);
        CHECK_THROWS_AS(sector_vector_from_json(broken), std::invalid_argument);
    }

    SUBCASE("coherent and fixed-N states") {
        const SuMState xi = random_sum_state(rng, 4, 6);
        const SuMState xi_back = sum_state_from_json(to_json(xi));
        CHECK(xi_back.N == 6);
        CHECK((xi_back.xi - xi.xi).cwiseAbs().maxCoeff() == 0.0);

        const GlauberState z = random_glauber(rng, 3, 1.1);
        const GlauberState z_back = glauber_state_from_json(to_json(z));
        CHECK((z_back.z - z.z).cwiseAbs().maxCoeff() == 0.0);

        json wrong = to_json(z);
        wrong["type"] = "suM";
        CHECK_THROWS_AS(glauber_state_from_json(wrong), std::invalid_argument);
    }

    SUBCASE("coefficient tables") {
        const GutzwillerState state = random_gutzwiller(rng, 3, 7);
        const GutzwillerState back = gutzwiller_state_from_json(to_json(state));
        CHECK(back.M == 3);
        CHECK(back.n_max == 7);
        CHECK((back.f - state.f).cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("malformed complex entries are reported with their location") {
    json j = json::parse(R"({"type":"glauber","z":[[0.5,0.5],[1.0]]})");
    try {
        glauber_state_from_json(j);
        FAIL("expected invalid_argument");
    } catch (const std::invalid_argument& err) {
        CHECK(std::string(err.what()).find("glauber.z") != std::string::npos);
    }
}
