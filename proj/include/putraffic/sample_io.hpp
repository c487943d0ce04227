#pragma once

#include <iosfwd>
#include <string>

#include "putraffic/types.hpp"

namespace putraffic {

// Plain-text sample file:
//   # putraffic-samples v1
//   n <N>
//   gaps uniform <t_c>          (or: gaps list <T_1> ... <T_{N-1}>)
//   bits 0100110...
void write_samples(const SampleVector& samples, std::ostream& out);
void write_samples_file(const SampleVector& samples, const std::string& path);

SampleVector read_samples(std::istream& in);
SampleVector read_samples_file(const std::string& path);

}  // namespace putraffic
