#include "mbpf/touchstone.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace mbpf {

namespace {

constexpr double kDegPerRad = 180.0 / std::numbers::pi;

double unit_scale(FrequencyUnit u) {
    switch (u) {
        case FrequencyUnit::hz: return 1.0;
        case FrequencyUnit::khz: return 1e3;
        case FrequencyUnit::mhz: return 1e6;
        case FrequencyUnit::ghz: return 1e9;
    }
    return 1.0;
}

const char* unit_token(FrequencyUnit u) {
    switch (u) {
        case FrequencyUnit::hz: return "HZ";
        case FrequencyUnit::khz: return "KHZ";
        case FrequencyUnit::mhz: return "MHZ";
        case FrequencyUnit::ghz: return "GHZ";
    }
    return "HZ";
}

const char* format_token(NumberFormat f) {
    switch (f) {
        case NumberFormat::ri: return "RI";
        case NumberFormat::ma: return "MA";
        case NumberFormat::db: return "DB";
    }
    return "RI";
}

std::string upper(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    return out;
}

std::vector<std::string> tokenize(std::string_view line) {
    std::vector<std::string> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) {
            ++i;
        }
        std::size_t start = i;
        while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) {
            ++i;
        }
        if (i > start) {
            out.emplace_back(line.substr(start, i - start));
        }
    }
    return out;
}

// Locale-independent formatting; snprintf("%g") would honor a comma locale.
std::string num(double v, int precision) {
    char buf[64];
    const auto res =
        std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, precision);
    return std::string(buf, res.ptr);
}

double parse_number(const std::string& token, int line_no) {
    double value = 0.0;
    const char* begin = token.data();
    const char* end = begin + token.size();
    if (begin != end && *begin == '+') {
        ++begin;  // from_chars rejects an explicit leading plus
    }
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end || begin == end) {
        throw ParseError(line_no, "expected a number, got \"" + token + "\"");
    }
    return value;
}

std::complex<double> decode_pair(double a, double b, NumberFormat fmt) {
    switch (fmt) {
        case NumberFormat::ri:
            return {a, b};
        case NumberFormat::ma:
            return std::polar(a, b / kDegPerRad);
        case NumberFormat::db:
            return std::polar(std::pow(10.0, a / 20.0), b / kDegPerRad);
    }
    return {a, b};
}

void encode_pair(std::complex<double> v, NumberFormat fmt, double& a, double& b) {
    switch (fmt) {
        case NumberFormat::ri:
            a = v.real();
            b = v.imag();
            return;
        case NumberFormat::ma:
            a = std::abs(v);
            b = std::arg(v) * kDegPerRad;
            return;
        case NumberFormat::db:
            a = 20.0 * std::log10(std::max(std::abs(v), 1e-300));
            b = std::arg(v) * kDegPerRad;
            return;
    }
}

TouchstoneOptions parse_option_line(const std::vector<std::string>& tokens, int line_no) {
    TouchstoneOptions opts;  // format defaults: GHZ S MA R 50
    for (std::size_t i = 1; i < tokens.size(); ++i) {
        const std::string t = upper(tokens[i]);
        if (t == "HZ") {
            opts.unit = FrequencyUnit::hz;
        } else if (t == "KHZ") {
            opts.unit = FrequencyUnit::khz;
        } else if (t == "MHZ") {
            opts.unit = FrequencyUnit::mhz;
        } else if (t == "GHZ") {
            opts.unit = FrequencyUnit::ghz;
        } else if (t == "RI") {
            opts.format = NumberFormat::ri;
        } else if (t == "MA") {
            opts.format = NumberFormat::ma;
        } else if (t == "DB") {
            opts.format = NumberFormat::db;
        } else if (t == "S") {
            // S is both the default and the only supported parameter type
        } else if (t == "Y" || t == "Z" || t == "G" || t == "H") {
            throw UnsupportedFormatError("only S-parameter files are supported (got " + t +
                                         " on line " + std::to_string(line_no) + ")");
        } else if (t == "R") {
            if (i + 1 >= tokens.size()) {
                throw ParseError(line_no, "option R needs a resistance value");
            }
            opts.resistance_ohm = parse_number(tokens[++i], line_no);
            if (!(opts.resistance_ohm > 0.0)) {
                throw ParseError(line_no, "reference resistance must be positive");
            }
        } else {
            throw ParseError(line_no, "unknown option token \"" + tokens[i] + "\"");
        }
    }
    return opts;
}

}  // namespace

ParsedTouchstone parse_touchstone(std::string_view text) {
    ParsedTouchstone out;
    bool option_seen = false;
    struct Row {
        SParameterPoint point;
        int line;
    };
    std::vector<Row> rows;

    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t eol = text.find('\n', pos);
        std::string_view line = text.substr(
            pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
        ++line_no;

        if (!line.empty() && line.back() == '\r') {
            line.remove_suffix(1);
        }
        // strip trailing comment
        if (const std::size_t bang = line.find('!'); bang != std::string_view::npos) {
            line = line.substr(0, bang);
        }
        const auto tokens = tokenize(line);
        if (tokens.empty()) {
            continue;
        }
        if (tokens[0][0] == '[') {
            throw UnsupportedFormatError("Touchstone v2 keyword " + tokens[0] + " on line " +
                                         std::to_string(line_no) +
                                         " is not supported; this reader is v1 only");
        }
        if (tokens[0][0] == '#') {
            if (option_seen) {
                throw ParseError(line_no, "duplicate option line");
            }
            if (!rows.empty()) {
                throw ParseError(line_no, "option line must precede all data rows");
            }
            option_seen = true;
            // '#' may be glued to the first token
            std::vector<std::string> opt_tokens = tokens;
            if (opt_tokens[0].size() > 1) {
                opt_tokens.insert(opt_tokens.begin() + 1, opt_tokens[0].substr(1));
            }
            out.options = parse_option_line(opt_tokens, line_no);
            continue;
        }

        if (tokens.size() != 9) {
            throw ParseError(line_no, "data row needs 9 numeric fields, got " +
                                          std::to_string(tokens.size()));
        }
        double v[9];
        for (int i = 0; i < 9; ++i) {
            v[i] = parse_number(tokens[static_cast<std::size_t>(i)], line_no);
        }
        if (!(v[0] > 0.0)) {
            throw ParseError(line_no, "frequency must be positive");
        }
        Row r;
        r.line = line_no;
        r.point.frequency_hz = v[0];  // scaled once the full file is read
        r.point.s11 = decode_pair(v[1], v[2], out.options.format);
        r.point.s21 = decode_pair(v[3], v[4], out.options.format);
        r.point.s12 = decode_pair(v[5], v[6], out.options.format);
        r.point.s22 = decode_pair(v[7], v[8], out.options.format);
        rows.push_back(r);
    }

    const double scale = unit_scale(out.options.unit);
    for (auto& r : rows) {
        r.point.frequency_hz *= scale;
        r.point.z0_ohm = out.options.resistance_ohm;
    }

    bool monotonic = true;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (rows[i].point.frequency_hz <= rows[i - 1].point.frequency_hz) {
            monotonic = false;
            break;
        }
    }
    if (!monotonic) {
        out.warnings.push_back("frequencies were not strictly increasing; rows were sorted");
        std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
            return a.point.frequency_hz < b.point.frequency_hz;
        });
    }
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (rows[i].point.frequency_hz == rows[i - 1].point.frequency_hz) {
            throw ParseError(rows[i].line,
                             "duplicate frequency " +
                                 std::to_string(rows[i].point.frequency_hz) + " Hz");
        }
    }

    out.table.z0_ohm = out.options.resistance_ohm;
    for (const auto& r : rows) {
        out.table.append(r.point);
    }
    return out;
}

std::string write_touchstone(const SweepTable& sweep, const TouchstoneOptions& opts) {
    if (sweep.points.empty()) {
        throw DataError("cannot write an empty sweep");
    }
    std::string out;
    out += "! two-port S-parameter sweep, written by mbpf\n";

    // The option line must state the sweep's actual reference impedance.
    out += std::string("# ") + unit_token(opts.unit) + " S " + format_token(opts.format) +
           " R " + num(sweep.z0_ohm, 10) + "\n";

    const double scale = unit_scale(opts.unit);
    for (const auto& p : sweep.points) {
        double fields[8];
        encode_pair(p.s11, opts.format, fields[0], fields[1]);
        encode_pair(p.s21, opts.format, fields[2], fields[3]);
        encode_pair(p.s12, opts.format, fields[4], fields[5]);
        encode_pair(p.s22, opts.format, fields[6], fields[7]);
        out += num(p.frequency_hz / scale, 17);
        for (double f : fields) {
            out += ' ';
            out += num(f, 12);
        }
        out += '\n';
    }
    return out;
}

std::string write_csv(const SweepTable& sweep) {
    std::string out =
        "frequency_hz,s11_re,s11_im,s21_re,s21_im,s12_re,s12_im,s22_re,s22_im,"
        "s11_db,s21_db\n";
    for (const auto& p : sweep.points) {
        const double s11_db = 20.0 * std::log10(std::max(std::abs(p.s11), 1e-300));
        const double s21_db = 20.0 * std::log10(std::max(std::abs(p.s21), 1e-300));
        out += num(p.frequency_hz, 17);
        for (double v : {p.s11.real(), p.s11.imag(), p.s21.real(), p.s21.imag(),
                         p.s12.real(), p.s12.imag(), p.s22.real(), p.s22.imag(), s11_db,
                         s21_db}) {
            out += ',';
            out += num(v, 12);
        }
        out += '\n';
    }
    return out;
}

std::string write_csv(const std::vector<DispersionPoint>& curve) {
    std::string out = "frequency_hz,re_g,beta_l_rad,alpha_l_neper,regime\n";
    for (const auto& p : curve) {
        const char* regime = p.regime == Regime::passband  ? "passband"
                             : p.regime == Regime::stopband ? "stopband"
                                                            : "edge";
        out += num(p.frequency_hz, 17) + "," + num(p.g.real(), 12) + "," +
               num(p.beta_l_rad, 12) + "," + num(p.alpha_l_neper, 12) + "," + regime + "\n";
    }
    return out;
}

std::string write_csv(const std::vector<GroupDelayPoint>& delays) {
    std::string out = "frequency_hz,group_delay_s\n";
    for (const auto& p : delays) {
        out += num(p.frequency_hz, 17) + "," + num(p.delay_s, 12) + "\n";
    }
    return out;
}

std::string write_csv(const FilterMetrics& m) {
    std::string out =
        "f0_hz,bw3db_hz,fbw_percent,il_db,rl_db_at_f0,f_cl_hz,f_cu_hz,"
        "att_db_at_08fcl,att_db_at_12fcu,group_delay_s_at_f0\n";
    bool first = true;
    for (double v : {m.f0_hz, m.bw3db_hz, m.fbw_percent, m.il_db, m.rl_db_at_f0, m.f_cl_hz,
                     m.f_cu_hz, m.att_db_at_08fcl, m.att_db_at_12fcu,
                     m.group_delay_s_at_f0}) {
        if (!first) {
            out += ',';
        }
        out += num(v, 12);
        first = false;
    }
    out += '\n';
    return out;
}

}  // namespace mbpf
