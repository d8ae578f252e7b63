#pragma once

#include "qgol/engine.hpp"
#include "qgol/lattice.hpp"
#include "qgol/parallel.hpp"

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <utility>
#include <vector>

namespace qgol {

/// Maximal 8-connected set of alive cells.
struct BlobRecord {
    std::vector<std::pair<int, int>> cells;  // (row, col) in flood-fill order
    int area = 0;
    int perimeter = 0;  // exposed unit edges; the lattice border counts as dead
    double circularity = 0.0;  // perimeter / area, at most 4
    double centroid_row = 0.0;
    double centroid_col = 0.0;
};

/// Forward row-major scan; every unvisited alive cell seeds a flood fill.
/// Blobs come out in seed order.
std::vector<BlobRecord> extract_blobs(const BinaryState& state);

/// Unit edges between a cell of `cells` and anything outside it (including
/// the border). For an 8-connected region this is its taxicab contour length.
int perimeter(const std::vector<std::pair<int, int>>& cells, int side);

struct FrameBlobStats {
    std::vector<BlobRecord> blobs;
    std::size_t blob_count = 0;
    std::size_t alive_count = 0;
    double frame_centroid_row = 0.0;  // meaningless when alive_count == 0
    double frame_centroid_col = 0.0;
    double circ_min = 0.0;
    double circ_max = 0.0;
    double circ_mean = 0.0;
    /// Pearson correlation of blob-centroid rows vs columns; empty with
    /// fewer than two blobs or zero variance in either coordinate.
    std::optional<double> centroid_correlation;
};

FrameBlobStats frame_stats(const BinaryState& state);

/// Stats for every frame of a trace; frames are independent.
std::vector<FrameBlobStats> trace_stats(const GenerationTrace& trace, Exec exec = Exec::parallel);

/// Largest number of blobs an L x L frame can hold: ceil(L/2)^2.
std::size_t max_blob_count(int side) noexcept;

/// Frame centroids rounded half-up to the nearest cell, counted per cell.
class CentroidHistogram {
public:
    explicit CentroidHistogram(int side);

    void add(const FrameBlobStats& stats);
    void merge(const CentroidHistogram& other);

    int side() const noexcept { return side_; }
    std::size_t count(int row, int col) const noexcept { return counts_[static_cast<std::size_t>(row * side_ + col)]; }
    std::size_t total() const noexcept;
    std::size_t frames_seen() const noexcept { return frames_; }
    std::size_t empty_frames() const noexcept { return empty_; }
    std::size_t occupied_cells() const noexcept;

    const std::vector<std::size_t>& counts() const noexcept { return counts_; }

private:
    int side_;
    std::vector<std::size_t> counts_;
    std::size_t frames_ = 0;
    std::size_t empty_ = 0;
};

CentroidHistogram accumulate_centroids(const std::vector<FrameBlobStats>& stats, int side);

struct NormalizedCounts {
    double alive_fraction = 0.0;  // alive / L^2
    double blob_fraction = 0.0;   // blobs / ceil(L/2)^2
};

std::vector<NormalizedCounts> normalized_series(const GenerationTrace& trace, Exec exec = Exec::parallel);

/// generation,alive,blobs,circ_min,circ_mean,circ_max,frame_centroid_row,frame_centroid_col,correlation
void write_frame_stats_csv(std::ostream& os, const std::vector<FrameBlobStats>& stats);
void write_histogram_csv(std::ostream& os, const CentroidHistogram& hist);
void write_histogram_pgm(std::ostream& os, const CentroidHistogram& hist);

} // namespace qgol
