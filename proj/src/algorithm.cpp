#include "clad/algorithm.hpp"

#include <stdexcept>

namespace clad {

std::string to_string(Algorithm a) {
    switch (a) {
        case Algorithm::Clad: return "clad";
        case Algorithm::Local: return "local";
        case Algorithm::FedAvg: return "fedavg";
        case Algorithm::Ifca: return "ifca";
        case Algorithm::CflAds: return "cfl-ads";
        case Algorithm::CflAde: return "cfl-ade";
    }
    return "unknown";
}

Algorithm algorithm_from_string(const std::string& name) {
    if (name == "clad") return Algorithm::Clad;
    if (name == "local") return Algorithm::Local;
    if (name == "fedavg") return Algorithm::FedAvg;
    if (name == "ifca") return Algorithm::Ifca;
    if (name == "cfl-ads") return Algorithm::CflAds;
    if (name == "cfl-ade") return Algorithm::CflAde;
    throw std::invalid_argument("unknown algorithm '" + name +
                                "' (expected clad, local, fedavg, ifca, cfl-ads or cfl-ade)");
}

}  // namespace clad
