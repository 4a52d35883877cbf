#pragma once

#include "edgesample/graph.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

namespace edgesample {

namespace detail {

inline std::vector<std::string_view> split_fields(std::string_view line)
{
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    while (pos < line.size()) {
        while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t' || line[pos] == '\r'))
            ++pos;
        const std::size_t start = pos;
        while (pos < line.size() && line[pos] != ' ' && line[pos] != '\t' && line[pos] != '\r')
            ++pos;
        if (pos > start)
            out.push_back(line.substr(start, pos - start));
    }
    return out;
}

template <typename T>
bool parse_number(std::string_view text, T& out)
{
    const char* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, out);
    return ec == std::errc() && ptr == end;
}

/// Shortest decimal form that reads back to the same double.
inline std::string format_double(double v)
{
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

inline std::string line_error(std::size_t line_no, std::string_view what)
{
    return "line " + std::to_string(line_no) + ": " + std::string(what);
}

inline std::ifstream open_in(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw Error(ErrorCode::ParseError, "cannot open " + path);
    return in;
}

inline std::ofstream open_out(const std::string& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error(ErrorCode::FormatError, "cannot write " + path);
    return out;
}

} // namespace detail

// ---------------------------------------------------------------------------
// Edge-list TSV: "i<TAB>j<TAB>w" per line, 0-indexed, '#' starts a comment.
// The writer adds a "# nodes <N>" header so isolated trailing nodes survive;
// without it N is one past the largest id.

inline Graph read_edge_list(std::istream& in)
{
    std::vector<Edge> edges;
    std::size_t num_nodes = 0;
    bool declared = false;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view view(line);
        if (const auto hash = view.find('#'); hash != std::string_view::npos) {
            const auto fields = detail::split_fields(view.substr(hash + 1));
            if (fields.size() == 2 && fields[0] == "nodes") {
                if (!detail::parse_number(fields[1], num_nodes))
                    throw Error(ErrorCode::ParseError, detail::line_error(line_no, "bad node count"));
                declared = true;
            }
            view = view.substr(0, hash);
        }
        const auto fields = detail::split_fields(view);
        if (fields.empty())
            continue;
        Edge e;
        if (fields.size() < 2 || fields.size() > 3 || !detail::parse_number(fields[0], e.i) ||
            !detail::parse_number(fields[1], e.j) || (fields.size() == 3 && !detail::parse_number(fields[2], e.w)))
            throw Error(ErrorCode::ParseError, detail::line_error(line_no, "expected \"i<TAB>j<TAB>w\", got \"" + line + "\""));
        if (!declared)
            num_nodes = std::max({num_nodes, e.i + 1, e.j + 1});
        edges.push_back(e);
    }
    return build_graph(num_nodes, edges);
}

inline Graph read_edge_list(const std::string& path)
{
    auto in = detail::open_in(path);
    return read_edge_list(in);
}

inline void write_edge_list(const Graph& g, std::ostream& out)
{
    out << "# nodes " << g.num_nodes() << '\n';
    for (const Edge& e : g.edges())
        out << e.i << '\t' << e.j << '\t' << detail::format_double(e.w) << '\n';
}

inline void write_edge_list(const Graph& g, const std::string& path)
{
    auto out = detail::open_out(path);
    write_edge_list(g, out);
}

// ---------------------------------------------------------------------------
// Coordinate sidecar: "i<TAB>x<TAB>y".

inline std::vector<Point2> read_coords(std::istream& in, std::size_t num_nodes)
{
    std::vector<Point2> pts(num_nodes);
    std::vector<bool> seen(num_nodes, false);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view view(line);
        view = view.substr(0, view.find('#'));
        const auto fields = detail::split_fields(view);
        if (fields.empty())
            continue;
        std::size_t i = 0;
        Point2 p;
        if (fields.size() != 3 || !detail::parse_number(fields[0], i) || !detail::parse_number(fields[1], p.x) ||
            !detail::parse_number(fields[2], p.y))
            throw Error(ErrorCode::ParseError, detail::line_error(line_no, "expected \"i<TAB>x<TAB>y\""));
        if (i >= num_nodes)
            throw Error(ErrorCode::NodeOutOfRange, detail::line_error(line_no, "node " + std::to_string(i)));
        pts[i] = p;
        seen[i] = true;
    }
    if (std::find(seen.begin(), seen.end(), false) != seen.end())
        throw Error(ErrorCode::ParseError, "coordinate file does not cover every node");
    return pts;
}

inline void write_coords(const std::vector<Point2>& pts, std::ostream& out)
{
    for (std::size_t i = 0; i < pts.size(); ++i)
        out << i << '\t' << detail::format_double(pts[i].x) << '\t' << detail::format_double(pts[i].y) << '\n';
}

inline void write_coords(const std::vector<Point2>& pts, const std::string& path)
{
    auto out = detail::open_out(path);
    write_coords(pts, out);
}

// ---------------------------------------------------------------------------
// Matrix Market coordinate format.

struct MatrixMarketOptions {
    bool drop_self_loops = false;
};

/**
 * Reads a square coordinate-format adjacency matrix as an undirected graph.
 * "symmetric" files may list either triangle; "general" files must list both
 * (i, j) and (j, i) with equal values. "pattern" entries get weight 1.
 */
inline Graph read_matrix_market(std::istream& in, const MatrixMarketOptions& opt = {})
{
    std::string line;
    std::size_t line_no = 0;
    if (!std::getline(in, line))
        throw Error(ErrorCode::FormatError, "empty input");
    ++line_no;
    std::string lower = line;
    std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
    const auto header = detail::split_fields(lower);
    if (header.size() < 5 || header[0] != "%%matrixmarket" || header[1] != "matrix" || header[2] != "coordinate")
        throw Error(ErrorCode::FormatError, "expected a %%MatrixMarket matrix coordinate header");
    const std::string_view field = header[3];
    const std::string_view symmetry = header[4];
    if (field != "real" && field != "integer" && field != "pattern")
        throw Error(ErrorCode::FormatError, "unsupported field type " + std::string(field));
    if (symmetry != "symmetric" && symmetry != "general")
        throw Error(ErrorCode::FormatError, "unsupported symmetry " + std::string(symmetry));
    const bool pattern = field == "pattern";

    std::size_t rows = 0, cols = 0, nnz = 0;
    bool have_size = false;
    std::vector<Edge> entries;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '%')
            continue;
        const auto fields = detail::split_fields(line);
        if (fields.empty())
            continue;
        if (!have_size) {
            if (fields.size() != 3 || !detail::parse_number(fields[0], rows) || !detail::parse_number(fields[1], cols) ||
                !detail::parse_number(fields[2], nnz))
                throw Error(ErrorCode::FormatError, detail::line_error(line_no, "bad size line"));
            if (rows != cols)
                throw Error(ErrorCode::FormatError, "adjacency matrix must be square");
            have_size = true;
            continue;
        }
        std::size_t r = 0, c = 0;
        double w = 1.0;
        if (fields.size() != (pattern ? 2u : 3u) || !detail::parse_number(fields[0], r) ||
            !detail::parse_number(fields[1], c) || (!pattern && !detail::parse_number(fields[2], w)))
            throw Error(ErrorCode::FormatError, detail::line_error(line_no, "bad entry \"" + line + "\""));
        if (r < 1 || c < 1 || r > rows || c > cols)
            throw Error(ErrorCode::NodeOutOfRange, detail::line_error(line_no, "index outside matrix"));
        if (r == c) {
            if (opt.drop_self_loops)
                continue;
            throw Error(ErrorCode::SelfLoop, detail::line_error(line_no, "diagonal entry"));
        }
        entries.push_back({r - 1, c - 1, w});
    }
    if (!have_size)
        throw Error(ErrorCode::FormatError, "missing size line");

    if (symmetry == "general") {
        std::vector<Edge> upper, lower_t;
        for (const Edge& e : entries)
            (e.i < e.j ? upper : lower_t).push_back({std::min(e.i, e.j), std::max(e.i, e.j), e.w});
        const auto key = [](const Edge& a, const Edge& b) { return std::tie(a.i, a.j, a.w) < std::tie(b.i, b.j, b.w); };
        std::sort(upper.begin(), upper.end(), key);
        std::sort(lower_t.begin(), lower_t.end(), key);
        if (upper != lower_t)
            throw Error(ErrorCode::AsymmetricInput, "general matrix is not symmetric");
        return build_graph(rows, upper);
    }
    return build_graph(rows, entries);
}

inline Graph read_matrix_market(const std::string& path, const MatrixMarketOptions& opt = {})
{
    auto in = detail::open_in(path);
    return read_matrix_market(in, opt);
}

/// Writes a sparse matrix; symmetric matrices are written as their lower triangle.
inline void write_matrix_market(const SparseMatrix& m, std::ostream& out, bool symmetric)
{
    std::vector<Triplet> entries;
    for (Eigen::Index k = 0; k < m.outerSize(); ++k)
        for (SparseMatrix::InnerIterator it(m, k); it; ++it)
            if (!symmetric || it.row() >= it.col())
                entries.emplace_back(it.row(), it.col(), it.value());
    out << "%%MatrixMarket matrix coordinate real " << (symmetric ? "symmetric" : "general") << '\n';
    out << m.rows() << ' ' << m.cols() << ' ' << entries.size() << '\n';
    for (const Triplet& t : entries)
        out << t.row() + 1 << ' ' << t.col() + 1 << ' ' << detail::format_double(t.value()) << '\n';
}

inline void write_matrix_market(const SparseMatrix& m, const std::string& path, bool symmetric)
{
    auto out = detail::open_out(path);
    write_matrix_market(m, out, symmetric);
}

/// Graph as a symmetric adjacency matrix (lower triangle).
inline void write_matrix_market(const Graph& g, std::ostream& out)
{
    write_matrix_market(adjacency(g), out, true);
}

} // namespace edgesample
