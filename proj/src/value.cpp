#include "value.hpp"

#include <cstdio>

namespace vlens {

std::string to_string(AttrType t) {
    switch (t) {
        case AttrType::Int: return "int";
        case AttrType::String: return "string";
        case AttrType::Date: return "date";
    }
    return "?";
}

Value Value::of_date(const std::string& iso) {
    if (!is_valid_date(iso)) throw std::invalid_argument("invalid date literal: '" + iso + "'");
    return Value(AttrType::Date, 0, iso);
}

std::string Value::repr() const {
    if (type_ == AttrType::Int) return std::to_string(int_);
    return "'" + str_ + "'";
}

std::string Value::raw() const {
    if (type_ == AttrType::Int) return std::to_string(int_);
    return str_;
}

static bool leap(long long y) { return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0; }

bool is_valid_date(const std::string& iso) {
    if (iso.size() != 10 || iso[4] != '-' || iso[7] != '-') return false;
    for (size_t i : {0u, 1u, 2u, 3u, 5u, 6u, 8u, 9u})
        if (iso[i] < '0' || iso[i] > '9') return false;
    long long y = std::stoll(iso.substr(0, 4));
    long long m = std::stoll(iso.substr(5, 2));
    long long d = std::stoll(iso.substr(8, 2));
    if (m < 1 || m > 12 || d < 1) return false;
    static const int mdays[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    long long dm = mdays[m - 1] + ((m == 2 && leap(y)) ? 1 : 0);
    return d <= dm;
}

// Howard Hinnant's days-from-civil algorithm.
long long date_to_days(const std::string& iso) {
    if (!is_valid_date(iso)) throw std::invalid_argument("invalid date: '" + iso + "'");
    long long y = std::stoll(iso.substr(0, 4));
    long long m = std::stoll(iso.substr(5, 2));
    long long d = std::stoll(iso.substr(8, 2));
    y -= m <= 2;
    const long long era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<long long>(doe) - 719468;
}

std::string days_to_date(long long z) {
    z += 719468;
    const long long era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const long long y = static_cast<long long>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    const unsigned d = doy - (153 * mp + 2) / 5 + 1;
    const unsigned m = mp + (mp < 10 ? 3 : -9);
    char buf[32];
    std::snprintf(buf, sizeof buf, "%04lld-%02u-%02u", y + (m <= 2), m, d);
    return buf;
}

std::string tuple_repr(const Tuple& t) {
    std::string s = "(";
    for (size_t i = 0; i < t.size(); ++i) {
        if (i) s += ", ";
        s += t[i].repr();
    }
    return s + ")";
}

}  // namespace vlens
