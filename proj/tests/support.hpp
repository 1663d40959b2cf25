#pragma once

// Test-only generators and brute-force oracles. Nothing here calls into the
// decoder or kernels it is used to check.

#include "structforge/kernels.hpp"
#include "structforge/level.hpp"
#include "structforge/raster.hpp"

#include <map>
#include <random>
#include <string>
#include <tuple>

namespace structforge::testing {

using Rng = std::mt19937_64;

// Non-overlapping blocks and pigs at arbitrary real positions.
Structure random_structure(Rng& rng, int blocks, int pigs);

// Blocks and pigs whose lower-left corners sit on cell boundaries, pairwise
// separated by at least `gap` empty cells.
Structure grid_aligned_structure(Rng& rng, int max_blocks, int max_pigs, double raster_size = 0.07, int gap = 1);

// Random confidence tensor: smooth blobs per layer plus uniform noise in [-1, 1].
LayerTensor random_confidence_tensor(Rng& rng, int size = 128);

// One-hot tensor of a structure with every value replaced by v * scale + noise.
LayerTensor noisy_encoding(const Structure& s, Rng& rng, double noise);

using BlockKind = std::tuple<BlockType, Orientation, Material>;
std::map<BlockKind, int> block_multiset(const Structure& s);

// Occupied cells of an axis-aligned window, counted cell by cell.
int brute_window_count(const BinaryMask& mask, int row, int col, int w, int h);

// Number of cells whose center lies inside [x0, x1) x [y0, y1) in cell units,
// computed by enumerating cell edges (used as the footprint oracle).
int brute_cells(double start, double end, double raster_size);

std::string data_path(const std::string& name);

}  // namespace structforge::testing
