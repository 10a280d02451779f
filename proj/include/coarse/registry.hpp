#pragma once

#include <memory>
#include <string>

#include "coarse/game.hpp"
#include "coarse/space.hpp"

namespace coarse {

/// Robber specs: bigon, bottleneck, lamplighter, bs-sheet,
/// greedy-evader[:<margin>], meta:<preset>, proj:<i>,<j>:<inner>.
/// Options: psi, R, confine (greedy-evader), searchRadius (bigon).
std::unique_ptr<RobberAgent> make_robber(const std::string& spec, const Json& options = Json::object());

/// Cop specs: greedy[:<n>], random[:<n>], pusher[:<n>], scripted:<file>.
/// Options: sigma, rho. The remote cop is created by the serve module.
std::unique_ptr<CopAgent> make_cop(const std::string& spec, const Json& options = Json::object());

}  // namespace coarse
