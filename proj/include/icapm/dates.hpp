#pragma once

#include <compare>
#include <string>
#include <string_view>

namespace icapm {

/// Calendar month stamp, the only date resolution the panel formats use.
struct YearMonth {
    int year = 0;
    int month = 1;  // 1..12

    auto operator<=>(const YearMonth&) const = default;

    /// Months since year 0, for distance arithmetic.
    int index() const { return year * 12 + (month - 1); }

    YearMonth next() const {
        return month == 12 ? YearMonth{year + 1, 1} : YearMonth{year, month + 1};
    }
    YearMonth prev() const {
        return month == 1 ? YearMonth{year - 1, 12} : YearMonth{year, month - 1};
    }

    /// Formats as "YYYY-MM" (zero-padded).
    std::string str() const;

    /// Parses strict "YYYY-MM"; throws an input error on anything else.
    static YearMonth parse(std::string_view text);
};

}  // namespace icapm
