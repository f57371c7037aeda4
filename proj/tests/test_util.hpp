#pragma once

#include <string>

#include "flipdist/fixture.hpp"

inline std::string fixture_path(const std::string& name) {
    return std::string(FLIPDIST_FIXTURE_DIR) + "/" + name;
}

inline flipdist::Fixture load(const std::string& name) {
    return flipdist::load_fixture(fixture_path(name));
}
