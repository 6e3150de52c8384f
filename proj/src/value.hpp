#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace vlens {

/// Attribute types supported by relation schemas.
enum class AttrType { Int, String, Date };

std::string to_string(AttrType t);

/// A typed constant. Dates are stored in ISO form (YYYY-MM-DD), whose
/// lexicographic order coincides with chronological order.
class Value {
public:
    Value() : type_(AttrType::Int), int_(0) {}

    static Value of_int(long long v) { return Value(AttrType::Int, v, {}); }
    static Value of_string(std::string v) { return Value(AttrType::String, 0, std::move(v)); }
    static Value of_date(const std::string& iso);

    AttrType type() const { return type_; }
    long long as_int() const { return int_; }
    const std::string& as_text() const { return str_; }  // string or ISO date

    /// Source-syntax rendering: ints bare, strings/dates single-quoted.
    std::string repr() const;
    /// Raw rendering without quotes (CSV cells, SQL literals body).
    std::string raw() const;

    friend bool operator==(const Value& a, const Value& b) {
        return a.type_ == b.type_ && a.int_ == b.int_ && a.str_ == b.str_;
    }
    friend std::strong_ordering operator<=>(const Value& a, const Value& b) {
        if (a.type_ != b.type_) return a.type_ <=> b.type_;
        if (a.type_ == AttrType::Int) return a.int_ <=> b.int_;
        return a.str_ <=> b.str_;
    }

private:
    Value(AttrType t, long long i, std::string s) : type_(t), int_(i), str_(std::move(s)) {}

    AttrType type_;
    long long int_;
    std::string str_;
};

using Tuple = std::vector<Value>;
using Relation = std::set<Tuple>;

/// True if `iso` has the shape YYYY-MM-DD and denotes a real calendar date.
bool is_valid_date(const std::string& iso);

/// Days since 1970-01-01 (proleptic Gregorian); used for gap arithmetic.
long long date_to_days(const std::string& iso);
std::string days_to_date(long long days);

std::string tuple_repr(const Tuple& t);

}  // namespace vlens
