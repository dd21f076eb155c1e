#pragma once

#include "reinhardt/spec_model.hpp"

#include <string>
#include <vector>

inline std::string fixture_path(const std::string& name) { return std::string(REINHARDT_FIXTURE_DIR) + "/" + name; }

inline reinhardt::DomainSpec load_fixture(const std::string& name) { return reinhardt::load_domain(fixture_path(name)); }

inline std::vector<std::string> fixture_names()
{
	return {"bidisc.dom", "ball.dom", "triangle.dom", "annular_triangle.dom", "ellipsoid42.dom",
	        "expchannel.dom", "omega23.dom", "hartogs.dom", "model_d.dom"};
}
