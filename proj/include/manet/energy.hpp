#pragma once

#include "manet/messages.hpp"

#include <cstdint>

namespace manet {

// All energy is integer microjoules so per-event ledgers sum exactly
// (the defend-vs-control delta must equal cost_screen * screen count to the digit).
struct EnergyCosts {
    std::uint64_t initial_uj = 100'000'000; // 100 J
    std::uint64_t tx_uj = 20'000;           // 0.020 J per transmission
    std::uint64_t rx_uj = 10'000;           // 0.010 J per reception
    std::uint64_t screen_uj = 2'000;        // 0.002 J per screened RREP
};

enum class EnergyAction : std::uint8_t { Tx, Rx, Screen };

class EnergyLedger {
public:
    EnergyLedger() = default;
    explicit EnergyLedger(std::uint64_t initial_uj) : initial_(initial_uj) {}

    // Debits up to the remaining charge; returns remaining after the debit.
    // A node whose remaining hits 0 transmits nothing from then on.
    std::uint64_t debit(EnergyAction action, std::uint64_t cost_uj) {
        std::uint64_t rem = remaining();
        std::uint64_t spend = cost_uj < rem ? cost_uj : rem;
        switch (action) {
            case EnergyAction::Tx: tx_ += spend; break;
            case EnergyAction::Rx: rx_ += spend; break;
            case EnergyAction::Screen: screen_ += spend; break;
        }
        return remaining();
    }

    std::uint64_t remaining() const { return initial_ - spent(); }
    std::uint64_t spent() const { return tx_ + rx_ + screen_; }
    std::uint64_t spent_tx() const { return tx_; }
    std::uint64_t spent_rx() const { return rx_; }
    std::uint64_t spent_screen() const { return screen_; }
    bool alive() const { return remaining() > 0; }

private:
    std::uint64_t initial_ = 100'000'000;
    std::uint64_t tx_ = 0;
    std::uint64_t rx_ = 0;
    std::uint64_t screen_ = 0;
};

} // namespace manet
