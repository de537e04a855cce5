#include "nnsp/io.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>
#include <string_view>
#include <system_error>

namespace nnsp::io {

namespace {

std::string location(const std::filesystem::path& path, int line) {
    return path.string() + ":" + std::to_string(line);
}

// Rows of comma-separated fields; blank lines and '#' comments skipped.
// Carriage returns from CRLF files are stripped.
std::vector<std::pair<int, std::vector<std::string>>> read_rows(
    const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path.string());
    std::vector<std::pair<int, std::vector<std::string>>> rows;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::size_t first = line.find_first_not_of(" \t");
        if (first == std::string::npos || line[first] == '#') continue;
        std::vector<std::string> fields;
        std::size_t start = 0;
        while (true) {
            std::size_t comma = line.find(',', start);
            std::string field = line.substr(
                start, comma == std::string::npos ? comma : comma - start);
            std::size_t b = field.find_first_not_of(" \t");
            std::size_t e = field.find_last_not_of(" \t");
            fields.push_back(b == std::string::npos
                                 ? std::string()
                                 : field.substr(b, e - b + 1));
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        rows.emplace_back(lineno, std::move(fields));
    }
    return rows;
}

bool parse_int64(const std::string& s, std::int64_t& out) {
    const char* b = s.data();
    const char* e = s.data() + s.size();
    auto [p, ec] = std::from_chars(b, e, out);
    return ec == std::errc() && p == e;
}

bool parse_double(const std::string& s, double& out) {
    const char* b = s.data();
    const char* e = s.data() + s.size();
    auto [p, ec] = std::from_chars(b, e, out);
    return ec == std::errc() && p == e;
}

// The first row may be a header; it is one exactly when its first field is
// not numeric.
template <typename Rows>
std::size_t skip_header(const Rows& rows) {
    if (rows.empty()) return 0;
    double probe;
    return parse_double(rows.front().second.front(), probe) ? 0 : 1;
}

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);  // binary: LF on all platforms
    if (!out) throw ParseError("cannot write " + path.string());
    return out;
}

}  // namespace

std::string format_double(double v) {
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, p);
}

std::vector<EdgeTriple> read_edge_list(const std::filesystem::path& path) {
    auto rows = read_rows(path);
    std::vector<EdgeTriple> triples;
    for (std::size_t r = skip_header(rows); r < rows.size(); ++r) {
        const auto& [lineno, fields] = rows[r];
        if (fields.size() != 3)
            throw ParseError(location(path, lineno) +
                             ": expected `i,j,weight`");
        EdgeTriple t;
        if (!parse_int64(fields[0], t.u) || !parse_int64(fields[1], t.v) ||
            !parse_double(fields[2], t.weight))
            throw ParseError(location(path, lineno) + ": malformed edge row");
        triples.push_back(t);
    }
    return triples;
}

void write_edge_list(const std::filesystem::path& path,
                     const std::vector<EdgeTriple>& triples) {
    auto out = open_out(path);
    out << "i,j,weight\n";
    for (const auto& t : triples)
        out << t.u << ',' << t.v << ',' << format_double(t.weight) << '\n';
}

std::vector<std::pair<std::int64_t, double>> read_signal(
    const std::filesystem::path& path) {
    auto rows = read_rows(path);
    std::vector<std::pair<std::int64_t, double>> vals;
    for (std::size_t r = skip_header(rows); r < rows.size(); ++r) {
        const auto& [lineno, fields] = rows[r];
        std::int64_t node;
        double value;
        if (fields.size() != 2 || !parse_int64(fields[0], node) ||
            !parse_double(fields[1], value))
            throw ParseError(location(path, lineno) +
                             ": expected `node,value`");
        vals.emplace_back(node, value);
    }
    return vals;
}

void write_signal(const std::filesystem::path& path, const BuildResult& built,
                  const GraphSignal& x) {
    if (x.size() != built.original_ids.size())
        throw DimensionMismatch("signal length vs node count");
    auto out = open_out(path);
    out << "node,value\n";
    for (std::size_t i = 0; i < x.size(); ++i)
        out << built.original_ids[i] << ',' << format_double(x[i]) << '\n';
}

Partition read_partition(const std::filesystem::path& path,
                         const BuildResult& built) {
    auto rows = read_rows(path);
    const int n = static_cast<int>(built.original_ids.size());
    std::vector<int> cluster_of(n, -1);
    int max_cluster = -1;
    for (std::size_t r = skip_header(rows); r < rows.size(); ++r) {
        const auto& [lineno, fields] = rows[r];
        std::int64_t node, cluster;
        if (fields.size() != 2 || !parse_int64(fields[0], node) ||
            !parse_int64(fields[1], cluster))
            throw ParseError(location(path, lineno) +
                             ": expected `node,cluster`");
        if (cluster < 0)
            throw ParseError(location(path, lineno) +
                             ": cluster ids must be non-negative");
        int idx;
        try {
            idx = built.require_index(node);
        } catch (const Error& err) {
            throw ParseError(location(path, lineno) + ": " + err.what());
        }
        if (cluster_of[idx] >= 0)
            throw ParseError(location(path, lineno) + ": node " +
                             std::to_string(node) + " assigned twice");
        cluster_of[idx] = static_cast<int>(cluster);
        max_cluster = std::max(max_cluster, static_cast<int>(cluster));
    }
    for (int i = 0; i < n; ++i)
        if (cluster_of[i] < 0)
            throw ParseError(path.string() + ": node " +
                             std::to_string(built.original_ids[i]) +
                             " has no cluster");
    return Partition{std::move(cluster_of), max_cluster + 1};
}

void write_partition(const std::filesystem::path& path,
                     const BuildResult& built, const Partition& part) {
    auto out = open_out(path);
    out << "node,cluster\n";
    for (std::size_t i = 0; i < part.cluster_of.size(); ++i)
        out << built.original_ids[i] << ',' << part.cluster_of[i] << '\n';
}

SamplingSet read_sampling_set(const std::filesystem::path& path,
                              const BuildResult& built) {
    auto rows = read_rows(path);
    std::vector<int> nodes;
    for (std::size_t r = skip_header(rows); r < rows.size(); ++r) {
        const auto& [lineno, fields] = rows[r];
        std::int64_t node;
        if (fields.size() != 1 || !parse_int64(fields[0], node))
            throw ParseError(location(path, lineno) +
                             ": expected a single node id");
        try {
            nodes.push_back(built.require_index(node));
        } catch (const Error& err) {
            throw ParseError(location(path, lineno) + ": " + err.what());
        }
    }
    return SamplingSet(std::move(nodes));
}

void write_sampling_set(const std::filesystem::path& path,
                        const BuildResult& built, const SamplingSet& samples) {
    auto out = open_out(path);
    out << "node\n";
    for (int v : samples.nodes()) out << built.original_ids[v] << '\n';
}

void write_trace(const std::filesystem::path& path,
                 const std::vector<TracePoint>& trace) {
    auto out = open_out(path);
    out << "iteration,tv,residual\n";
    for (const auto& p : trace)
        out << p.iteration << ',' << format_double(p.tv_value) << ','
            << format_double(p.residual) << '\n';
}

void write_flow(const std::filesystem::path& path, const FlowAssignment& f) {
    auto out = open_out(path);
    out << "edge_index,flow\n";
    for (std::size_t e = 0; e < f.edge_flow.size(); ++e)
        out << e << ',' << format_double(f.edge_flow[e]) << '\n';
}

std::string file_digest(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open " + path.string());
    std::uint64_t h = 0xcbf29ce484222325ull;  // FNV-1a offset basis
    char buf[4096];
    while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
        for (std::streamsize i = 0; i < in.gcount(); ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 0x100000001b3ull;  // FNV prime
        }
    }
    char hex[17];
    static const char* digits = "0123456789abcdef";
    for (int i = 15; i >= 0; --i) {
        hex[i] = digits[h & 0xf];
        h >>= 4;
    }
    hex[16] = '\0';
    return std::string(hex);
}

}  // namespace nnsp::io
