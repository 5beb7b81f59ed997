#include "icapm/dates.hpp"

#include <cstdio>

#include "icapm/error.hpp"

namespace icapm {

std::string YearMonth::str() const {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02d", year, month);
    return buf;
}

YearMonth YearMonth::parse(std::string_view text) {
    auto bad = [&]() -> YearMonth {
        throw_input("E_DATE", "bad date '" + std::string(text) + "', expected YYYY-MM");
    };
    if (text.size() != 7 || text[4] != '-') return bad();
    for (int i : {0, 1, 2, 3, 5, 6})
        if (text[i] < '0' || text[i] > '9') return bad();
    int y = (text[0] - '0') * 1000 + (text[1] - '0') * 100 + (text[2] - '0') * 10 + (text[3] - '0');
    int m = (text[5] - '0') * 10 + (text[6] - '0');
    if (m < 1 || m > 12) return bad();
    return YearMonth{y, m};
}

}  // namespace icapm
