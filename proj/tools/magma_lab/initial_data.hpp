#ifndef MAGMA_LAB_INITIAL_DATA_HPP
#define MAGMA_LAB_INITIAL_DATA_HPP

#include <string>

#include "config.hpp"
#include "magma/grid.hpp"

namespace magma::lab {

/// Builds the initial field named by the `init` key:
///   constant:V
///   modes:BASE;AMP@m1,...,md;AMP@...      BASE + sum AMP cos(k.x)
///   random:AMP@SEED                        1 + smooth random data, max |phi - 1| = AMP
///   file:PATH                              binary snapshot (grid taken from the file)
///   profile:RUN_DIR                        solitary wave from a shoot run, centred
/// Grid keys (d, n_points, length, widths, center) are read only when needed.
Field build_initial(Config& cfg);

/// Embeds RUN_DIR/profile.csv on a grid of side `widths` half widths unless
/// `length` is given, centred at `center` (default: the middle of the box).
Field embed_profile(Config& cfg, const std::string& run_dir);

/// Grid from d, n_points, length.
TorusGrid grid_from_config(Config& cfg, double default_length, long long default_d = 1);

}  // namespace magma::lab

#endif  // MAGMA_LAB_INITIAL_DATA_HPP
