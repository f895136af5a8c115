#pragma once

#include <string>

#include "edgelq/game.hpp"

namespace edgelq {

// Loads a problem instance from a JSON file. Every validation failure is
// reported as a ConfigError naming the offending field. See README.md for
// the schema; tests/data holds working examples.
GameSpec load_game_config(const std::string& path);

// Same, but from an in-memory JSON string (used by the loader and tests).
GameSpec parse_game_config(const std::string& text);

}  // namespace edgelq
