#pragma once

#include <string>
#include <vector>

#include "gpoi/cli.hpp"

namespace gpoi::cli {

// A named experiment: one or more configured pipeline runs, each in its
// own subdirectory of the recipe output root.
struct Recipe {
    std::string name;
    std::string description;
    std::vector<std::pair<std::string, Config>> runs;  // (subdir, config)
    bool anchors_only = false;  // energy-anchor evaluation, no pipeline
};

std::vector<std::string> recipe_names();
Recipe make_recipe(const std::string& name, bool paper_scale, std::uint64_t seed,
                   const std::string& out_root);

}  // namespace gpoi::cli
