#pragma once

namespace wmsn {

// First-order radio model parameters (transceiver electronics plus
// transmit amplifier with a d^2 path-loss term).
struct RadioParams {
    double e_elec = 5e-6;    // J/bit spent by the electronics on tx and rx
    double eps_amp = 1e-9;   // J/bit/m^2 spent by the transmit amplifier
    double max_range = 80.0; // m, no link exists beyond this
};

// Energy to transmit `bits` over `dist_m` meters: bits * (e_elec + eps_amp * d^2).
// Throws std::invalid_argument for bits <= 0, dist < 0 or dist > max_range.
double tx_energy(const RadioParams& params, double bits, double dist_m);

// Energy to receive `bits`: bits * e_elec.
double rx_energy(const RadioParams& params, double bits);

// Forwarding score of a neighbor: its remaining energy minus the cost of
// relaying one data packet through it. May be negative for a nearly dead
// neighbor.
double neighbor_score(const RadioParams& params, double neighbor_energy_j,
                      double neighbor_dist_m, double bits);

} // namespace wmsn
