#include "qcsched/base_graph.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "qcsched/errors.hpp"

namespace qcsched {

namespace {

std::string strip_comment(const std::string& line) {
    const auto pos = line.find('#');
    return pos == std::string::npos ? line : line.substr(0, pos);
}

std::vector<std::string> tokenize(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream is(line);
    std::string tok;
    while (is >> tok) out.push_back(tok);
    return out;
}

int parse_int(const std::string& tok, const char* what) {
    int value = 0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (ec != std::errc() || ptr != tok.data() + tok.size())
        throw DataError(std::string("base graph: bad ") + what + " '" + tok + "'");
    return value;
}

std::vector<int> parse_punct_list(const std::string& spec, int cols) {
    std::vector<int> out;
    if (spec == "default") return {0, 1};
    if (spec == "none" || spec.empty()) return {};
    std::string item;
    std::istringstream is(spec);
    while (std::getline(is, item, ',')) out.push_back(parse_int(item, "puncture column"));
    std::set<int> seen(out.begin(), out.end());
    if (seen.size() != out.size())
        throw DataError("base graph: duplicate entries in puncture list");
    for (int c : out)
        if (c < 0 || c >= cols) throw DataError("base graph: puncture column out of range");
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

Rate parse_rate(std::string_view text) {
    const std::string s(text);
    Rate r;
    const auto slash = s.find('/');
    if (slash == std::string::npos) {
        r.num = parse_int(s, "rate");
        r.den = 1;
    } else {
        r.num = parse_int(s.substr(0, slash), "rate numerator");
        r.den = parse_int(s.substr(slash + 1), "rate denominator");
    }
    if (r.den <= 0 || r.num <= 0 || r.num > r.den)
        throw DataError("rate must be in (0, 1]");
    return r;
}

BaseGraph parse_base_graph(std::string_view text) {
    std::istringstream stream{std::string(text)};
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(stream, line)) {
        auto toks = tokenize(strip_comment(line));
        if (!toks.empty()) rows.push_back(std::move(toks));
    }
    if (rows.empty()) throw DataError("base graph: empty input");

    auto& header = rows.front();
    if (header.size() < 3) throw DataError("base graph: malformed header");
    BaseGraph bg;
    bg.rows = parse_int(header[0], "row count");
    bg.cols = parse_int(header[1], "column count");
    bg.lift = parse_int(header[2], "lifting size");
    std::size_t next = 3;
    if (next < header.size() && header[next].rfind("punct=", 0) != 0) {
        bg.info_cols = parse_int(header[next], "info column count");
        ++next;
    } else {
        bg.info_cols = std::max(bg.cols - bg.rows, 0);
    }
    if (next < header.size()) {
        if (header[next].rfind("punct=", 0) != 0 || next + 1 != header.size())
            throw DataError("base graph: malformed header");
        bg.punct_cols = parse_punct_list(header[next].substr(6), bg.cols);
    }

    if (static_cast<int>(rows.size()) != bg.rows + 1)
        throw DataError("base graph: expected " + std::to_string(bg.rows) + " shift rows, got " +
                        std::to_string(rows.size() - 1));
    bg.shifts.resize(bg.rows, bg.cols);
    for (int r = 0; r < bg.rows; ++r) {
        const auto& toks = rows[r + 1];
        if (static_cast<int>(toks.size()) != bg.cols)
            throw DataError("base graph: row " + std::to_string(r) + " has " +
                            std::to_string(toks.size()) + " entries, expected " +
                            std::to_string(bg.cols));
        for (int c = 0; c < bg.cols; ++c) bg.shifts(r, c) = parse_int(toks[c], "shift");
    }
    validate(bg);
    return bg;
}

BaseGraph load_base_graph(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open base graph file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_base_graph(buf.str());
}

std::string serialize(const BaseGraph& bg) {
    std::ostringstream out;
    out << bg.rows << ' ' << bg.cols << ' ' << bg.lift << ' ' << bg.info_cols << " punct=";
    if (bg.punct_cols.empty()) {
        out << "none";
    } else {
        for (std::size_t i = 0; i < bg.punct_cols.size(); ++i)
            out << (i ? "," : "") << bg.punct_cols[i];
    }
    out << '\n';
    for (int r = 0; r < bg.rows; ++r) {
        for (int c = 0; c < bg.cols; ++c) out << (c ? " " : "") << bg.shifts(r, c);
        out << '\n';
    }
    return out.str();
}

void validate(const BaseGraph& bg) {
    if (bg.rows < 1 || bg.cols < 1) throw DataError("base graph: dimensions must be positive");
    if (bg.lift < 1) throw DataError("base graph: lifting size must be >= 1");
    if (bg.info_cols < 0 || bg.info_cols > bg.cols)
        throw DataError("base graph: info column count out of range");
    if (bg.shifts.rows() != bg.rows || bg.shifts.cols() != bg.cols)
        throw DataError("base graph: shift table dimension mismatch");
    for (int r = 0; r < bg.rows; ++r)
        for (int c = 0; c < bg.cols; ++c) {
            const int s = bg.shifts(r, c);
            if (s != kNoEdge && (s < 0 || s >= bg.lift))
                throw DataError("base graph: shift out of range at (" + std::to_string(r) + "," +
                                std::to_string(c) + ")");
        }
    for (int r = 0; r < bg.rows; ++r)
        if ((bg.shifts.row(r).array() != kNoEdge).count() == 0)
            throw DataError("base graph: empty row " + std::to_string(r));
    for (int c = 0; c < bg.cols; ++c)
        if ((bg.shifts.col(c).array() != kNoEdge).count() == 0)
            throw DataError("base graph: empty column " + std::to_string(c));
    for (std::size_t i = 0; i < bg.punct_cols.size(); ++i) {
        const int c = bg.punct_cols[i];
        if (c < 0 || c >= bg.cols) throw DataError("base graph: puncture column out of range");
        if (i && bg.punct_cols[i - 1] == c)
            throw DataError("base graph: duplicate entries in puncture list");
    }
    if (!std::is_sorted(bg.punct_cols.begin(), bg.punct_cols.end()))
        throw DataError("base graph: puncture list not sorted");
}

LayerStats layer_stats(const BaseGraph& bg) {
    LayerStats st;
    const int m = bg.rows;
    st.degrees.resize(m);
    st.punctures.resize(m);
    st.common.resize(m, m);
    std::vector<std::vector<char>> mask(m, std::vector<char>(bg.cols, 0));
    std::vector<char> punct(bg.cols, 0);
    for (int c : bg.punct_cols) punct[c] = 1;
    for (int r = 0; r < m; ++r) {
        int d = 0, p = 0;
        for (int c = 0; c < bg.cols; ++c)
            if (bg.shifts(r, c) != kNoEdge) {
                mask[r][c] = 1;
                ++d;
                p += punct[c];
            }
        st.degrees[r] = d;
        st.punctures[r] = p;
    }
    for (int a = 0; a < m; ++a)
        for (int b = a; b < m; ++b) {
            int shared = 0;
            for (int c = 0; c < bg.cols; ++c) shared += mask[a][c] & mask[b][c];
            st.common(a, b) = shared;
            st.common(b, a) = shared;
        }
    return st;
}

LiftedCode lift(const BaseGraph& bg) {
    const int z = bg.lift;
    LiftedCode code;
    code.n = bg.cols * z;
    code.m = bg.rows * z;
    code.lift = z;
    code.base_rows = bg.rows;
    code.base_cols = bg.cols;
    code.info_cols = bg.info_cols;
    code.check_vars.resize(code.m);
    code.layer_of_check.resize(code.m);
    code.transmitted.assign(code.n, 1);
    for (int c : bg.punct_cols)
        std::fill_n(code.transmitted.begin() + static_cast<std::size_t>(c) * z, z, 0);
    for (int r = 0; r < bg.rows; ++r)
        for (int zz = 0; zz < z; ++zz) {
            const int check = r * z + zz;
            code.layer_of_check[check] = r;
            auto& vars = code.check_vars[check];
            for (int c = 0; c < bg.cols; ++c) {
                const int s = bg.shifts(r, c);
                if (s != kNoEdge) vars.push_back(c * z + (zz + s) % z);
            }
        }
    return code;
}

BaseGraph select_rate(const BaseGraph& bg, Rate target) {
    if (bg.info_cols < 1) throw DataError("select_rate: base graph has no info columns");
    const int punct = static_cast<int>(bg.punct_cols.size());
    // r = round(k_b / rate) - k_b + punct, with rate = num/den
    const long long scaled = 2LL * bg.info_cols * target.den + target.num;  // round half up
    const int total = static_cast<int>(scaled / (2LL * target.num));
    const int r = total - bg.info_cols + punct;
    if (r < 4 || r > bg.rows || bg.info_cols + r > bg.cols)
        throw DataError("select_rate: unreachable rate " + std::to_string(target.num) + "/" +
                        std::to_string(target.den));
    BaseGraph out;
    out.rows = r;
    out.cols = bg.info_cols + r;
    out.lift = bg.lift;
    out.info_cols = bg.info_cols;
    out.punct_cols = bg.punct_cols;
    out.shifts = bg.shifts.topLeftCorner(out.rows, out.cols);
    validate(out);
    return out;
}

}  // namespace qcsched
