#include "wmsn/link.hpp"

#include <cmath>
#include <stdexcept>

namespace wmsn {

double LinkModel::rate(double length_m) const
{
    if (length_m < min_length)
        throw std::invalid_argument("LinkModel::rate: link shorter than min_length");
    return base_rate / std::sqrt(length_m);
}

double transmit_time(const LinkModel& model, double link_length_m, double packet_bits)
{
    return packet_bits / model.rate(link_length_m);
}

} // namespace wmsn
