#include "wmsn/energy.hpp"

#include <stdexcept>

namespace wmsn {

double tx_energy(const RadioParams& params, double bits, double dist_m)
{
    if (bits <= 0.0)
        throw std::invalid_argument("tx_energy: bits must be positive");
    if (dist_m < 0.0 || dist_m > params.max_range)
        throw std::invalid_argument("tx_energy: distance outside radio range");
    return bits * (params.e_elec + params.eps_amp * dist_m * dist_m);
}

double rx_energy(const RadioParams& params, double bits)
{
    if (bits <= 0.0)
        throw std::invalid_argument("rx_energy: bits must be positive");
    return bits * params.e_elec;
}

double neighbor_score(const RadioParams& params, double neighbor_energy_j,
                      double neighbor_dist_m, double bits)
{
    return neighbor_energy_j - tx_energy(params, bits, neighbor_dist_m) - rx_energy(params, bits);
}

} // namespace wmsn
