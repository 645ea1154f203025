#pragma once

#include <iosfwd>
#include <string>

#include "roughlab/rough_path.hpp"

namespace roughlab {

// Columnar text format for rough paths:
//
//   # roughpath d=<d> n=<n> gamma=<g>
//   t x_1 ... x_d              (one line per node, n lines)
//   a_11 a_12 ... a_dd         (one line per step, n-1 lines, row-major)
//
// Values are written with full round-trip precision.
void write_rough_path(std::ostream& os, const RoughPath& rp);
void write_rough_path_file(const std::string& path, const RoughPath& rp);

RoughPath read_rough_path(std::istream& is);
RoughPath read_rough_path_file(const std::string& path);

// Sampled paths reuse the node section of the same format (no area block);
// past noise segments are stored this way with negative times.
void write_sampled_path(std::ostream& os, const SampledPath& p);
void write_sampled_path_file(const std::string& path, const SampledPath& p);
SampledPath read_sampled_path(std::istream& is);
SampledPath read_sampled_path_file(const std::string& path);

}  // namespace roughlab
