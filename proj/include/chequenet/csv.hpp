#pragma once

#include <charconv>
#include <fstream>
#include <istream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "chequenet/cheque.hpp"
#include "chequenet/errors.hpp"
#include "chequenet/format.hpp"
#include "chequenet/network.hpp"
#include "chequenet/risk.hpp"

namespace chequenet {

namespace detail {

inline std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (;;) {
        std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            fields.push_back(line.substr(start));
            return fields;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

inline std::string strip_cr(std::string line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
}

inline std::int64_t parse_int(const std::string& s, std::size_t line_no,
                              const char* field) {
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw invalid_input("line " + std::to_string(line_no) + ": " + field +
                            " is not an integer: '" + s + "'");
    return v;
}

inline double parse_double(const std::string& s, std::size_t line_no, const char* field) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw invalid_input("line " + std::to_string(line_no) + ": " + field +
                            " is not a number: '" + s + "'");
    return v;
}

} // namespace detail

inline constexpr const char* kChequeCsvHeader =
    "cheque_id,issuer_id,recipient_id,value_cents,issue_date,maturity_date";

// Reads the cheque table. Every diagnostic carries the 1-based line number.
// Fields are plain comma-separated (no quoting); blank lines are skipped.
inline std::vector<Cheque> read_cheque_csv(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    if (!std::getline(in, line))
        throw invalid_input("empty network: input has no header row");
    ++line_no;
    if (detail::strip_cr(line) != kChequeCsvHeader)
        throw invalid_input("line 1: expected header '" + std::string(kChequeCsvHeader) +
                            "', got '" + detail::strip_cr(line) + "'");
    std::vector<Cheque> cheques;
    while (std::getline(in, line)) {
        ++line_no;
        line = detail::strip_cr(line);
        if (line.empty()) continue;
        auto fields = detail::split_fields(line);
        if (fields.size() != 6)
            throw invalid_input("line " + std::to_string(line_no) + ": expected 6 fields, got " +
                                std::to_string(fields.size()));
        Cheque c;
        c.cheque_id = fields[0];
        c.issuer_id = fields[1];
        c.recipient_id = fields[2];
        c.value = detail::parse_int(fields[3], line_no, "value_cents");
        c.issue_date = fields[4];
        c.maturity_date = fields[5];
        try {
            validate_cheque(c);
        } catch (const invalid_input& e) {
            throw invalid_input("line " + std::to_string(line_no) + ": " + e.what());
        }
        cheques.push_back(std::move(c));
    }
    return cheques;
}

inline std::vector<Cheque> read_cheque_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw invalid_input("cannot open " + path);
    return read_cheque_csv(in);
}

inline std::string cheque_csv(const std::vector<Cheque>& cheques) {
    std::string out = kChequeCsvHeader;
    out += '\n';
    for (const Cheque& c : cheques) {
        out += c.cheque_id;
        out += ',';
        out += c.issuer_id;
        out += ',';
        out += c.recipient_id;
        out += ',';
        out += std::to_string(c.value);
        out += ',';
        out += c.issue_date;
        out += ',';
        out += c.maturity_date;
        out += '\n';
    }
    return out;
}

// `customer_id,p` — independent failure probabilities for the scenario
// calculus.
inline std::map<std::string, double> read_probability_csv(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    if (!std::getline(in, line)) throw invalid_input("probability file has no header row");
    ++line_no;
    if (detail::strip_cr(line) != "customer_id,p")
        throw invalid_input("line 1: expected header 'customer_id,p', got '" +
                            detail::strip_cr(line) + "'");
    std::map<std::string, double> probabilities;
    while (std::getline(in, line)) {
        ++line_no;
        line = detail::strip_cr(line);
        if (line.empty()) continue;
        auto fields = detail::split_fields(line);
        if (fields.size() != 2)
            throw invalid_input("line " + std::to_string(line_no) + ": expected 2 fields, got " +
                                std::to_string(fields.size()));
        double p = detail::parse_double(fields[1], line_no, "p");
        if (p < 0.0 || p > 1.0)
            throw invalid_input("line " + std::to_string(line_no) + ": p outside [0, 1]: " +
                                fields[1]);
        if (!probabilities.emplace(fields[0], p).second)
            throw invalid_input("line " + std::to_string(line_no) + ": duplicate customer_id " +
                                fields[0]);
    }
    return probabilities;
}

inline std::map<std::string, double> read_probability_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw invalid_input("cannot open " + path);
    return read_probability_csv(in);
}

// Ranking table. Percentages carry 4 decimals; `raw` swaps them for plain
// fractions with 10 decimals (and renames the columns to match).
inline std::string rank_report_csv(const CollateralNetwork& net,
                                   const std::vector<RankEntry>& entries,
                                   const std::string& invocation, bool raw = false) {
    const char* suffix = raw ? "frac" : "pct";
    auto value = [&](double fraction) {
        return raw ? detail::fmt_fixed(fraction, 10) : detail::fmt_pct(fraction, 4);
    };
    std::string out = "# invocation: " + invocation + "\n";
    out += "rank,customer_id,metric_value_";
    out += suffix;
    out += ",weighted_in_degree_";
    out += suffix;
    out += ",weighted_out_degree_";
    out += suffix;
    out += '\n';
    std::size_t rank = 1;
    for (const RankEntry& e : entries) {
        out += std::to_string(rank++);
        out += ',';
        out += net.id_of(e.node);
        out += ',';
        out += value(e.value);
        out += ',';
        out += value(net.weighted_in_degree(e.node));
        out += ',';
        out += value(net.weighted_out_degree(e.node));
        out += '\n';
    }
    return out;
}

// Loss distribution, ascending by loss, with the expected loss as a trailing
// summary line.
inline std::string distribution_report_csv(const LossDistribution& dist,
                                           const std::string& invocation, bool raw = false) {
    std::string out = "# invocation: " + invocation + "\n";
    out += raw ? "loss_frac,probability\n" : "loss_pct,probability\n";
    for (const DistributionPoint& p : dist.points) {
        double fraction = dist.loss_fraction(p);
        out += raw ? detail::fmt_fixed(fraction, 10) : detail::fmt_pct(fraction, 4);
        out += ',';
        out += detail::fmt_general(p.probability);
        out += '\n';
    }
    out += raw ? "# expected_loss_frac: " + detail::fmt_fixed(dist.expected_loss, 10)
               : "# expected_loss_pct: " + detail::fmt_pct(dist.expected_loss, 4);
    out += '\n';
    if (dist.mode == DistributionMode::monte_carlo)
        out += "# draws: " + std::to_string(dist.draws) + "\n";
    return out;
}

} // namespace chequenet
