#include "alm_cli/trace.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>
#include <unistd.h>

#include "alm/errors.hpp"

namespace alm::cli {

namespace {

std::vector<std::string> split(const std::string &s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

std::string opt(const std::optional<double> &v) { return v ? format_double(*v) : std::string(); }

std::optional<double> parse_opt(const std::string &s) {
    if (s.empty())
        return std::nullopt;
    return parse_double(s);
}

int parse_int(const std::string &s) {
    int v = 0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size())
        throw DataError("not an integer: '" + s + "'");
    return v;
}

std::pair<std::string, std::string> parse_meta(const std::string &line) {
    std::string body = line.substr(1);
    if (!body.empty() && body.front() == ' ')
        body.erase(0, 1);
    const auto eq = body.find('=');
    if (eq == std::string::npos)
        return {body, ""};
    return {body.substr(0, eq), body.substr(eq + 1)};
}

} // namespace

std::optional<std::string> TraceFile::header_value(const std::string &key) const {
    for (const auto &[k, v] : header)
        if (k == key)
            return v;
    return std::nullopt;
}

std::string format_double(double v) {
    char buf[64];
    const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, p);
}

double parse_double(const std::string &s) {
    double v = 0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size())
        throw DataError("not a number: '" + s + "'");
    return v;
}

double trace_distance(const TraceRow &r) {
    if (r.dist_primal && r.dist_dual)
        return std::hypot(*r.dist_primal, *r.dist_dual);
    return r.residual;
}

TraceFile trace_from_run(const RunTrace &run, std::vector<std::pair<std::string, std::string>> header) {
    TraceFile t;
    t.header = std::move(header);
    for (const IterationRecord &rec : run.records) {
        TraceRow row{rec.k, rec.rho, rec.eps, rec.residual, rec.step_norm, rec.inner_iters,
                     rec.dist_primal, rec.dist_dual, std::nullopt};
        if (!t.rows.empty()) {
            const double prev = trace_distance(t.rows.back());
            row.q_ratio = prev > 0 ? trace_distance(row) / prev : 0.0;
        }
        t.rows.push_back(row);
    }
    t.footer.emplace_back("status", to_string(run.status));
    return t;
}

std::string format_trace(const TraceFile &t) {
    std::ostringstream os;
    for (const auto &[k, v] : t.header)
        os << "# " << k << '=' << v << '\n';
    os << kTraceColumns << '\n';
    for (const TraceRow &r : t.rows)
        os << r.k << ',' << format_double(r.rho) << ',' << format_double(r.eps) << ',' << format_double(r.residual)
           << ',' << format_double(r.step_norm) << ',' << r.inner_iters << ',' << opt(r.dist_primal) << ','
           << opt(r.dist_dual) << ',' << opt(r.q_ratio) << '\n';
    for (const auto &[k, v] : t.footer)
        os << "# " << k << '=' << v << '\n';
    return os.str();
}

TraceFile parse_trace(std::istream &in) {
    TraceFile t;
    std::string line;
    bool seen_columns = false;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        if (line.front() == '#') {
            (seen_columns ? t.footer : t.header).push_back(parse_meta(line));
            continue;
        }
        if (!seen_columns) {
            if (line != kTraceColumns)
                throw DataError("line " + std::to_string(lineno) + ": expected column header '" + kTraceColumns + "'");
            seen_columns = true;
            continue;
        }
        if (!t.footer.empty())
            throw DataError("line " + std::to_string(lineno) + ": data row after footer");
        const std::vector<std::string> f = split(line, ',');
        if (f.size() != 9)
            throw DataError("line " + std::to_string(lineno) + ": expected 9 fields, got " + std::to_string(f.size()));
        try {
            t.rows.push_back(TraceRow{parse_int(f[0]), parse_double(f[1]), parse_double(f[2]), parse_double(f[3]),
                                      parse_double(f[4]), parse_int(f[5]), parse_opt(f[6]), parse_opt(f[7]),
                                      parse_opt(f[8])});
        } catch (const DataError &e) {
            throw DataError("line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    if (!seen_columns)
        throw DataError("no column header found");
    return t;
}

TraceFile read_trace(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in)
        throw DataError("cannot open trace '" + path.string() + "'");
    return parse_trace(in);
}

RateReport rates_from_trace(const TraceFile &t, bool use_distances) {
    std::vector<double> d;
    for (const TraceRow &r : t.rows) {
        if (use_distances) {
            if (!r.dist_primal || !r.dist_dual)
                throw DataError("row k=" + std::to_string(r.k) + " has no solution distances");
            d.push_back(std::hypot(*r.dist_primal, *r.dist_dual));
        } else {
            d.push_back(r.residual);
        }
    }
    RateReport rep;
    try {
        rep = rates_from_sequence(d);
    } catch (const InsufficientDataError &e) {
        throw DataError(e.what());
    } catch (const InputError &e) {
        throw DataError(e.what());
    }
    rep.used_known_solution = use_distances;
    return rep;
}

void write_file_atomic(const std::filesystem::path &path, const std::string &content) {
    std::filesystem::path tmp = path;
    tmp += ".tmp" + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw std::runtime_error("cannot write '" + tmp.string() + "'");
        out << content;
        out.flush();
        if (!out)
            throw std::runtime_error("write to '" + tmp.string() + "' failed");
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        throw std::runtime_error("cannot rename onto '" + path.string() + "': " + ec.message());
    }
}

} // namespace alm::cli
