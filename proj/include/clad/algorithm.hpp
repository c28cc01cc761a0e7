#pragma once

#include <string>

namespace clad {

enum class Algorithm { Clad, Local, FedAvg, Ifca, CflAds, CflAde };

std::string to_string(Algorithm a);
// accepts the CLI spellings: clad, local, fedavg, ifca, cfl-ads, cfl-ade
Algorithm algorithm_from_string(const std::string& name);

}  // namespace clad
