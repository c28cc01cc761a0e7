#include "clad/accounting.hpp"

#include <stdexcept>

namespace clad::accounting {

std::uint64_t model_bytes(std::size_t param_count) {
    return static_cast<std::uint64_t>(param_count) * 4;
}

void CostLedger::add_flops(std::size_t client, std::uint64_t flops) {
    clients.at(client).flops += flops;
}

void CostLedger::snapshot() {
    snapshots.push_back(clients);
}

double CostLedger::mean_bytes() const {
    if (clients.empty()) return 0.0;
    double sum = 0.0;
    for (const Totals& t : clients) sum += static_cast<double>(t.down + t.up);
    return sum / static_cast<double>(clients.size());
}

double CostLedger::mean_flops() const {
    if (clients.empty()) return 0.0;
    double sum = 0.0;
    for (const Totals& t : clients) sum += static_cast<double>(t.flops);
    return sum / static_cast<double>(clients.size());
}

void record_round(CostLedger& ledger, Algorithm algorithm, Phase phase, int k,
                  const std::vector<int>& participants) {
    if (k < 1) throw std::invalid_argument("record_round: k must be >= 1");
    const std::uint64_t mb = ledger.wire_bytes;
    for (const int id : participants) {
        CostLedger::Totals& t = ledger.clients.at(static_cast<std::size_t>(id));
        switch (algorithm) {
            case Algorithm::Clad:
                if (phase == Phase::Clustering) {
                    t.down += static_cast<std::uint64_t>(k) * mb;
                    t.up += mb + static_cast<std::uint64_t>(k) * 8;  // weights + loss vector
                } else if (phase == Phase::Stabilized) {
                    t.down += mb;
                    t.up += mb;
                }
                break;
            case Algorithm::FedAvg:
            case Algorithm::CflAds:
            case Algorithm::CflAde:
                if (phase != Phase::Initial) {
                    t.down += mb;
                    t.up += mb;
                }
                break;
            case Algorithm::Ifca:
                if (phase != Phase::Initial) {
                    t.down += static_cast<std::uint64_t>(k) * mb;
                    t.up += mb;
                }
                break;
            case Algorithm::Local:
                if (phase == Phase::Initial) t.down += mb;  // one-time weights download
                break;
        }
    }
}

}  // namespace clad::accounting
