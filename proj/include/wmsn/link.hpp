#pragma once

namespace wmsn {

// Abstract link: the data rate falls off with the square root of the link
// length. Only defined for lengths >= min_length.
struct LinkModel {
    double base_rate = 250000.0; // bits/s at 1 m
    double min_length = 1.0;     // m

    // bits/s over a link of the given length. Throws std::invalid_argument
    // for lengths below min_length.
    double rate(double length_m) const;
};

// Seconds to push `packet_bits` over a link of the given length.
double transmit_time(const LinkModel& model, double link_length_m, double packet_bits);

} // namespace wmsn
