#ifndef HGSTS_IO_HPP
#define HGSTS_IO_HPP

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "hgsts/core.hpp"

namespace hgsts {

// Reals are written with 17 significant digits, '.' decimal, no locale.
inline std::string format_real(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

// ---------------------------------------------------------------------------
// STS file format.
//   line 1:  sts <n_vertices> <n_triples>
//   then one triple per line, three space-separated 0-based integers sorted
//   ascending; '#' begins a comment line; LF endings; trailing newline.

inline void write_sts(std::ostream& os, const TripleSystem& sys,
                      const std::vector<std::string>& comments = {}) {
    os << "sts " << sys.n_vertices() << ' ' << sys.size() << '\n';
    for (const auto& c : comments) os << "# " << c << '\n';
    for (const auto& t : sys.triples())
        os << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
}

inline std::string sts_to_string(const TripleSystem& sys) {
    std::ostringstream ss;
    write_sts(ss, sys);
    return ss.str();
}

namespace detail {
inline bool is_comment_or_blank(const std::string& line) {
    for (char ch : line) {
        if (ch == '#') return true;
        if (ch != ' ' && ch != '\t' && ch != '\r') return false;
    }
    return true;
}
} // namespace detail

inline TripleSystem read_sts(std::istream& is, const std::string& name = "<stream>") {
    std::string line;
    int lineno = 0;
    auto fail = [&](const std::string& what) -> ParseError {
        return ParseError(name + ":" + std::to_string(lineno) + ": " + what);
    };
    // header
    long long n = -1, m = -1;
    while (std::getline(is, line)) {
        ++lineno;
        if (detail::is_comment_or_blank(line)) continue;
        std::istringstream ss(line);
        std::string tag;
        if (!(ss >> tag) || tag != "sts" || !(ss >> n >> m) || n < 0 || m < 0)
            throw fail("expected header 'sts <n_vertices> <n_triples>'");
        break;
    }
    if (n < 0) throw fail("missing sts header");
    std::vector<Triple> ts;
    ts.reserve(static_cast<std::size_t>(m));
    while (std::getline(is, line)) {
        ++lineno;
        if (detail::is_comment_or_blank(line)) continue;
        std::istringstream ss(line);
        long long a, b, c;
        if (!(ss >> a >> b >> c)) throw fail("expected three integers");
        std::string rest;
        if (ss >> rest && rest[0] != '#') throw fail("trailing tokens");
        if (a < 0 || b < 0 || c < 0 || a >= n || b >= n || c >= n)
            throw fail("vertex out of range");
        if (!(a < b && b < c)) throw fail("triple not sorted ascending");
        ts.emplace_back(static_cast<Vertex>(a), static_cast<Vertex>(b),
                        static_cast<Vertex>(c));
    }
    if (static_cast<long long>(ts.size()) != m)
        throw fail("triple count mismatch: header says " + std::to_string(m) +
                   ", found " + std::to_string(ts.size()));
    return TripleSystem(static_cast<Vertex>(n), std::move(ts));
}

inline TripleSystem read_sts_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ParseError(path + ": cannot open");
    return read_sts(f, path);
}

inline void write_sts_file(const std::string& path, const TripleSystem& sys,
                           const std::vector<std::string>& comments = {}) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ParseError(path + ": cannot open for writing");
    write_sts(f, sys, comments);
}

// ---------------------------------------------------------------------------
// Configuration-family file format.
//   line 1:  cfgfam <j> <count>
//   then one configuration per line: semicolon-separated triples, each triple
//   three space-separated integers. Comments with '#'.

inline void write_cfgfam(std::ostream& os, int j,
                         const std::vector<std::vector<Triple>>& fam) {
    os << "cfgfam " << j << ' ' << fam.size() << '\n';
    for (const auto& cfg : fam) {
        for (std::size_t i = 0; i < cfg.size(); ++i) {
            if (i) os << ';';
            os << cfg[i][0] << ' ' << cfg[i][1] << ' ' << cfg[i][2];
        }
        os << '\n';
    }
}

inline std::pair<int, std::vector<std::vector<Triple>>> read_cfgfam(
    std::istream& is, const std::string& name = "<stream>") {
    std::string line;
    int lineno = 0;
    auto fail = [&](const std::string& what) -> ParseError {
        return ParseError(name + ":" + std::to_string(lineno) + ": " + what);
    };
    long long j = -1, cnt = -1;
    while (std::getline(is, line)) {
        ++lineno;
        if (detail::is_comment_or_blank(line)) continue;
        std::istringstream ss(line);
        std::string tag;
        if (!(ss >> tag) || tag != "cfgfam" || !(ss >> j >> cnt))
            throw fail("expected header 'cfgfam <j> <count>'");
        break;
    }
    if (j < 0) throw fail("missing cfgfam header");
    std::vector<std::vector<Triple>> fam;
    while (std::getline(is, line)) {
        ++lineno;
        if (detail::is_comment_or_blank(line)) continue;
        std::vector<Triple> cfg;
        std::istringstream ls(line);
        std::string part;
        while (std::getline(ls, part, ';')) {
            std::istringstream ps(part);
            long long a, b, c;
            if (!(ps >> a >> b >> c)) throw fail("expected triple '<a> <b> <c>'");
            if (a < 0 || b < 0 || c < 0) throw fail("negative vertex");
            cfg.emplace_back(static_cast<Vertex>(a), static_cast<Vertex>(b),
                             static_cast<Vertex>(c));
        }
        if (cfg.empty()) throw fail("empty configuration");
        fam.push_back(std::move(cfg));
    }
    if (static_cast<long long>(fam.size()) != cnt)
        throw fail("configuration count mismatch");
    return {static_cast<int>(j), std::move(fam)};
}

// ---------------------------------------------------------------------------
// Uniform hypergraph file format.
//   line 1:  hyp <n> <k> <m>
//   then one edge per line, k sorted integers.

inline void write_hyp(std::ostream& os, int n, int k,
                      const std::vector<std::vector<int>>& edges) {
    os << "hyp " << n << ' ' << k << ' ' << edges.size() << '\n';
    for (const auto& e : edges) {
        for (std::size_t i = 0; i < e.size(); ++i) os << (i ? " " : "") << e[i];
        os << '\n';
    }
}

struct HypFile {
    int n = 0;
    int k = 0;
    std::vector<std::vector<int>> edges;
};

inline HypFile read_hyp(std::istream& is, const std::string& name = "<stream>") {
    std::string line;
    int lineno = 0;
    auto fail = [&](const std::string& what) -> ParseError {
        return ParseError(name + ":" + std::to_string(lineno) + ": " + what);
    };
    HypFile h;
    long long m = -1;
    bool have_header = false;
    while (std::getline(is, line)) {
        ++lineno;
        if (detail::is_comment_or_blank(line)) continue;
        std::istringstream ss(line);
        if (!have_header) {
            std::string tag;
            if (!(ss >> tag) || tag != "hyp" || !(ss >> h.n >> h.k >> m))
                throw fail("expected header 'hyp <n> <k> <m>'");
            have_header = true;
            continue;
        }
        std::vector<int> e(static_cast<std::size_t>(h.k));
        for (int i = 0; i < h.k; ++i)
            if (!(ss >> e[static_cast<std::size_t>(i)])) throw fail("expected k integers");
        for (int i = 0; i + 1 < h.k; ++i)
            if (e[static_cast<std::size_t>(i)] >= e[static_cast<std::size_t>(i + 1)])
                throw fail("edge not sorted");
        h.edges.push_back(std::move(e));
    }
    if (!have_header) throw fail("missing hyp header");
    if (static_cast<long long>(h.edges.size()) != m) throw fail("edge count mismatch");
    return h;
}

// ---------------------------------------------------------------------------
// Line-oriented `key = value` files (pipeline config, run manifests).

struct KeyValueFile {
    std::vector<std::pair<std::string, std::string>> items;

    void set(const std::string& k, const std::string& v) { items.emplace_back(k, v); }
    void set(const std::string& k, double v) { items.emplace_back(k, format_real(v)); }
    void set(const std::string& k, std::uint64_t v) { items.emplace_back(k, std::to_string(v)); }
    void set(const std::string& k, std::int64_t v) { items.emplace_back(k, std::to_string(v)); }
    void set(const std::string& k, int v) { items.emplace_back(k, std::to_string(v)); }

    const std::string* find(const std::string& k) const {
        for (const auto& [key, val] : items)
            if (key == k) return &val;
        return nullptr;
    }

    void write(std::ostream& os) const {
        for (const auto& [k, v] : items) os << k << " = " << v << '\n';
    }

    static KeyValueFile read(std::istream& is, const std::string& name = "<stream>") {
        KeyValueFile kv;
        std::string line;
        int lineno = 0;
        while (std::getline(is, line)) {
            ++lineno;
            if (detail::is_comment_or_blank(line)) continue;
            auto eq = line.find('=');
            if (eq == std::string::npos)
                throw ParseError(name + ":" + std::to_string(lineno) +
                                 ": expected 'key = value'");
            auto trim = [](std::string s) {
                std::size_t a = s.find_first_not_of(" \t\r");
                std::size_t b = s.find_last_not_of(" \t\r");
                return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
            };
            kv.items.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
        }
        return kv;
    }
};

// FNV-1a digest of a file's bytes, as fixed-width hex (for run manifests).
inline std::string file_digest(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) return "absent";
    std::uint64_t h = 0xcbf29ce484222325ULL;
    char buf[4096];
    while (f.read(buf, sizeof buf) || f.gcount() > 0) {
        for (std::streamsize i = 0; i < f.gcount(); ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 0x100000001b3ULL;
        }
        if (!f) break;
    }
    char out[32];
    std::snprintf(out, sizeof out, "%016llx", static_cast<unsigned long long>(h));
    return out;
}

} // namespace hgsts

#endif
