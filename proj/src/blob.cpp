#include "qgol/blob.hpp"

#include "qgol/error.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>

namespace qgol {

int perimeter(const std::vector<std::pair<int, int>>& cells, int side)
{
    std::vector<std::uint8_t> mask(static_cast<std::size_t>(side * side), 0);
    for (auto [r, c] : cells)
        mask[static_cast<std::size_t>(r * side + c)] = 1;
    auto inside = [&](int r, int c) {
        return r >= 0 && r < side && c >= 0 && c < side && mask[static_cast<std::size_t>(r * side + c)];
    };
    int edges = 0;
    for (auto [r, c] : cells)
        edges += !inside(r - 1, c) + !inside(r + 1, c) + !inside(r, c - 1) + !inside(r, c + 1);
    return edges;
}

std::vector<BlobRecord> extract_blobs(const BinaryState& state)
{
    const int side = state.spec().side();
    std::vector<std::uint8_t> visited(state.size(), 0);
    std::vector<BlobRecord> blobs;
    std::vector<int> stack;
    for (int seed = 0; seed < static_cast<int>(state.size()); ++seed) {
        if (!state[static_cast<std::size_t>(seed)] || visited[static_cast<std::size_t>(seed)])
            continue;
        BlobRecord blob;
        visited[static_cast<std::size_t>(seed)] = 1;
        stack.push_back(seed);
        while (!stack.empty()) {
            const int cell = stack.back();
            stack.pop_back();
            const int r = cell / side;
            const int c = cell % side;
            blob.cells.emplace_back(r, c);
            for (int dr = -1; dr <= 1; ++dr) {
                for (int dc = -1; dc <= 1; ++dc) {
                    const int rr = r + dr;
                    const int cc = c + dc;
                    if (rr < 0 || rr >= side || cc < 0 || cc >= side)
                        continue;
                    const int nb = rr * side + cc;
                    if (state[static_cast<std::size_t>(nb)] && !visited[static_cast<std::size_t>(nb)]) {
                        visited[static_cast<std::size_t>(nb)] = 1;
                        stack.push_back(nb);
                    }
                }
            }
        }
        blob.area = static_cast<int>(blob.cells.size());
        blob.perimeter = perimeter(blob.cells, side);
        blob.circularity = static_cast<double>(blob.perimeter) / blob.area;
        double sr = 0.0;
        double sc = 0.0;
        for (auto [r, c] : blob.cells) {
            sr += r;
            sc += c;
        }
        blob.centroid_row = sr / blob.area;
        blob.centroid_col = sc / blob.area;
        blobs.push_back(std::move(blob));
    }
    return blobs;
}

namespace {

std::optional<double> pearson(const std::vector<BlobRecord>& blobs)
{
    if (blobs.size() < 2)
        return std::nullopt;
    const double n = static_cast<double>(blobs.size());
    double mr = 0.0;
    double mc = 0.0;
    for (const auto& b : blobs) {
        mr += b.centroid_row;
        mc += b.centroid_col;
    }
    mr /= n;
    mc /= n;
    double srr = 0.0;
    double scc = 0.0;
    double src = 0.0;
    for (const auto& b : blobs) {
        const double dr = b.centroid_row - mr;
        const double dc = b.centroid_col - mc;
        srr += dr * dr;
        scc += dc * dc;
        src += dr * dc;
    }
    if (srr == 0.0 || scc == 0.0)
        return std::nullopt;
    return std::clamp(src / std::sqrt(srr * scc), -1.0, 1.0);
}

} // namespace

FrameBlobStats frame_stats(const BinaryState& state)
{
    FrameBlobStats st;
    st.blobs = extract_blobs(state);
    st.blob_count = st.blobs.size();
    const int side = state.spec().side();
    double sr = 0.0;
    double sc = 0.0;
    for (std::size_t i = 0; i < state.size(); ++i) {
        if (!state[i])
            continue;
        ++st.alive_count;
        sr += static_cast<double>(static_cast<int>(i) / side);
        sc += static_cast<double>(static_cast<int>(i) % side);
    }
    if (st.alive_count > 0) {
        st.frame_centroid_row = sr / static_cast<double>(st.alive_count);
        st.frame_centroid_col = sc / static_cast<double>(st.alive_count);
    }
    if (!st.blobs.empty()) {
        st.circ_min = st.blobs.front().circularity;
        st.circ_max = st.circ_min;
        double sum = 0.0;
        for (const auto& b : st.blobs) {
            st.circ_min = std::min(st.circ_min, b.circularity);
            st.circ_max = std::max(st.circ_max, b.circularity);
            sum += b.circularity;
        }
        st.circ_mean = sum / static_cast<double>(st.blobs.size());
    }
    st.centroid_correlation = pearson(st.blobs);
    return st;
}

std::vector<FrameBlobStats> trace_stats(const GenerationTrace& trace, Exec exec)
{
    std::vector<FrameBlobStats> out(trace.generations());
    const auto n = static_cast<std::ptrdiff_t>(trace.generations());
    if (exec == Exec::serial) {
        for (std::ptrdiff_t k = 0; k < n; ++k)
            out[static_cast<std::size_t>(k)] = frame_stats(trace.states[static_cast<std::size_t>(k)]);
    } else {
#pragma omp parallel for schedule(dynamic, 16)
        for (std::ptrdiff_t k = 0; k < n; ++k)
            out[static_cast<std::size_t>(k)] = frame_stats(trace.states[static_cast<std::size_t>(k)]);
    }
    return out;
}

std::size_t max_blob_count(int side) noexcept
{
    const auto h = static_cast<std::size_t>((side + 1) / 2);
    return h * h;
}

CentroidHistogram::CentroidHistogram(int side)
    : side_(side), counts_(static_cast<std::size_t>(side * side), 0)
{
    if (side < 1)
        throw ConfigError("histogram side must be positive");
}

void CentroidHistogram::add(const FrameBlobStats& stats)
{
    ++frames_;
    if (stats.alive_count == 0) {
        ++empty_;
        return;
    }
    const int r = std::clamp(static_cast<int>(std::floor(stats.frame_centroid_row + 0.5)), 0, side_ - 1);
    const int c = std::clamp(static_cast<int>(std::floor(stats.frame_centroid_col + 0.5)), 0, side_ - 1);
    ++counts_[static_cast<std::size_t>(r * side_ + c)];
}

void CentroidHistogram::merge(const CentroidHistogram& other)
{
    if (other.side_ != side_)
        throw ConfigError("cannot merge histograms of different sizes");
    for (std::size_t i = 0; i < counts_.size(); ++i)
        counts_[i] += other.counts_[i];
    frames_ += other.frames_;
    empty_ += other.empty_;
}

std::size_t CentroidHistogram::total() const noexcept
{
    std::size_t t = 0;
    for (auto c : counts_)
        t += c;
    return t;
}

std::size_t CentroidHistogram::occupied_cells() const noexcept
{
    return static_cast<std::size_t>(std::count_if(counts_.begin(), counts_.end(), [](std::size_t c) { return c > 0; }));
}

CentroidHistogram accumulate_centroids(const std::vector<FrameBlobStats>& stats, int side)
{
    CentroidHistogram h(side);
    for (const auto& s : stats)
        h.add(s);
    return h;
}

std::vector<NormalizedCounts> normalized_series(const GenerationTrace& trace, Exec exec)
{
    const auto stats = trace_stats(trace, exec);
    std::vector<NormalizedCounts> out;
    out.reserve(stats.size());
    for (std::size_t k = 0; k < stats.size(); ++k) {
        const auto& spec = trace.states[k].spec();
        out.push_back({static_cast<double>(stats[k].alive_count) / spec.cell_count(),
                       static_cast<double>(stats[k].blob_count) / static_cast<double>(max_blob_count(spec.side()))});
    }
    return out;
}

void write_frame_stats_csv(std::ostream& os, const std::vector<FrameBlobStats>& stats)
{
    const auto prec = os.precision();
    os << std::setprecision(17);
    os << "generation,alive,blobs,circ_min,circ_mean,circ_max,frame_centroid_row,frame_centroid_col,correlation\n";
    for (std::size_t k = 0; k < stats.size(); ++k) {
        const auto& s = stats[k];
        os << k << ',' << s.alive_count << ',' << s.blob_count << ',' << s.circ_min << ',' << s.circ_mean << ','
           << s.circ_max << ',';
        if (s.alive_count > 0)
            os << s.frame_centroid_row << ',' << s.frame_centroid_col << ',';
        else
            os << "NA,NA,";
        if (s.centroid_correlation)
            os << *s.centroid_correlation;
        else
            os << "NA";
        os << '\n';
    }
    os.precision(prec);
}

void write_histogram_csv(std::ostream& os, const CentroidHistogram& hist)
{
    os << "row,col,count\n";
    for (int r = 0; r < hist.side(); ++r)
        for (int c = 0; c < hist.side(); ++c)
            os << r << ',' << c << ',' << hist.count(r, c) << '\n';
}

void write_histogram_pgm(std::ostream& os, const CentroidHistogram& hist)
{
    std::size_t maxval = 0;
    for (auto c : hist.counts())
        maxval = std::max(maxval, c);
    // Plain PGM caps maxval at 65535; larger counts are rescaled.
    const std::size_t cap = 65535;
    const std::size_t outmax = std::max<std::size_t>(1, std::min(maxval, cap));
    os << "P2\n" << hist.side() << ' ' << hist.side() << '\n' << outmax << '\n';
    for (int r = 0; r < hist.side(); ++r) {
        for (int c = 0; c < hist.side(); ++c) {
            std::size_t v = hist.count(r, c);
            if (maxval > cap)
                v = static_cast<std::size_t>(std::llround(static_cast<double>(v) * cap / static_cast<double>(maxval)));
            if (c)
                os << ' ';
            os << v;
        }
        os << '\n';
    }
}

} // namespace qgol
