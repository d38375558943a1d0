#pragma once

#include <cstdint>
#include <string>

#include "chequenet/errors.hpp"

namespace chequenet {

// Money is integer euro cents throughout; fractions of total value are the
// only derived quantity and are materialized as doubles at report time.
using Cents = std::int64_t;

// One payment instrument: issuer wrote the cheque, recipient pledged it to
// the bank as loan collateral. Dates are carried as metadata only.
struct Cheque {
    std::string cheque_id;
    std::string issuer_id;
    std::string recipient_id;
    Cents value = 0;
    std::string issue_date;    // ISO-8601 or empty
    std::string maturity_date; // ISO-8601 or empty
};

inline bool is_iso_date(const std::string& s) {
    if (s.size() != 10 || s[4] != '-' || s[7] != '-') return false;
    for (int i : {0, 1, 2, 3, 5, 6, 8, 9})
        if (s[static_cast<std::size_t>(i)] < '0' || s[static_cast<std::size_t>(i)] > '9') return false;
    int y = std::stoi(s.substr(0, 4));
    int m = std::stoi(s.substr(5, 2));
    int d = std::stoi(s.substr(8, 2));
    if (m < 1 || m > 12 || d < 1) return false;
    static const int days[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    int dim = days[m - 1];
    bool leap = (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
    if (m == 2 && leap) dim = 29;
    return d <= dim;
}

// Throws invalid_input naming the offending cheque; duplicate-id detection
// needs the whole batch and lives in the ingestion path.
inline void validate_cheque(const Cheque& c) {
    if (c.cheque_id.empty())
        throw invalid_input("cheque with empty cheque_id");
    if (c.issuer_id.empty() || c.recipient_id.empty())
        throw invalid_input("cheque " + c.cheque_id + ": empty customer id");
    if (c.value <= 0)
        throw invalid_input("cheque " + c.cheque_id + ": value must be positive, got " +
                            std::to_string(c.value));
    if (c.issuer_id == c.recipient_id)
        throw invalid_input("cheque " + c.cheque_id + ": issuer equals recipient (" +
                            c.issuer_id + ")");
    if (!c.issue_date.empty() && !is_iso_date(c.issue_date))
        throw invalid_input("cheque " + c.cheque_id + ": bad issue_date '" + c.issue_date + "'");
    if (!c.maturity_date.empty() && !is_iso_date(c.maturity_date))
        throw invalid_input("cheque " + c.cheque_id + ": bad maturity_date '" +
                            c.maturity_date + "'");
}

} // namespace chequenet
