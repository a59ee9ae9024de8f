#include "obench/timeutil.hpp"

#include <cmath>
#include <cstdio>

#include <fmt/format.h>

#include "obench/error.hpp"

namespace obench {

namespace {

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s) {
        if (c < '0' || c > '9') return false;
    }
    return true;
}

int to_int(std::string_view s) {
    int v = 0;
    for (char c : s) v = v * 10 + (c - '0');
    return v;
}

[[noreturn]] void bad_timestamp(std::string_view text) {
    fail_parse("timestamp", fmt::format("cannot parse '{}' as ISO-8601 UTC", text));
}

}  // namespace

Timestamp parse_iso(std::string_view text) {
    using namespace std::chrono;
    if (text.size() < 10 || text[4] != '-' || text[7] != '-') bad_timestamp(text);
    auto ys = text.substr(0, 4), ms = text.substr(5, 2), ds = text.substr(8, 2);
    if (!all_digits(ys) || !all_digits(ms) || !all_digits(ds)) bad_timestamp(text);
    year_month_day ymd{year{to_int(ys)}, month{static_cast<unsigned>(to_int(ms))},
                       day{static_cast<unsigned>(to_int(ds))}};
    if (!ymd.ok()) bad_timestamp(text);
    Timestamp t = time_point_cast<microseconds>(sys_days{ymd});
    if (text.size() == 10) return t;

    // Time of day: THH:MM:SS[.f+]Z
    auto rest = text.substr(10);
    if (rest.size() < 10 || rest[0] != 'T' || rest[3] != ':' || rest[6] != ':' || rest.back() != 'Z')
        bad_timestamp(text);
    auto hh = rest.substr(1, 2), mi = rest.substr(4, 2), ss = rest.substr(7, 2);
    if (!all_digits(hh) || !all_digits(mi) || !all_digits(ss)) bad_timestamp(text);
    int h = to_int(hh), m = to_int(mi), s = to_int(ss);
    if (h > 23 || m > 59 || s > 59) bad_timestamp(text);
    t += hours{h} + minutes{m} + seconds{s};

    auto frac = rest.substr(9, rest.size() - 10);
    if (!frac.empty()) {
        if (frac[0] != '.') bad_timestamp(text);
        frac.remove_prefix(1);
        if (!all_digits(frac) || frac.size() > 6) bad_timestamp(text);
        long long us = to_int(frac);
        for (std::size_t i = frac.size(); i < 6; ++i) us *= 10;
        t += microseconds{us};
    }
    return t;
}

std::string format_iso(Timestamp t) {
    using namespace std::chrono;
    auto day_start = floor<days>(t);
    year_month_day ymd{day_start};
    auto tod = t - day_start;
    auto h = duration_cast<hours>(tod);
    auto m = duration_cast<minutes>(tod - h);
    auto s = duration_cast<seconds>(tod - h - m);
    auto us = (tod - h - m - s).count();
    auto base = fmt::format("{:04d}-{:02d}-{:02d}T{:02d}:{:02d}:{:02d}", static_cast<int>(ymd.year()),
                            static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                            h.count(), m.count(), s.count());
    if (us != 0) {
        auto f = fmt::format("{:06d}", us);
        while (!f.empty() && f.back() == '0') f.pop_back();
        base += "." + f;
    }
    return base + "Z";
}

double days_between(Timestamp from, Timestamp to) {
    return static_cast<double>((to - from).count()) / (kSecondsPerDay * 1e6);
}

Timestamp add_days(Timestamp t, double days) {
    return t + std::chrono::microseconds{std::llround(days * kSecondsPerDay * 1e6)};
}

Timestamp floor_to_day(Timestamp t) {
    return std::chrono::time_point_cast<std::chrono::microseconds>(std::chrono::floor<std::chrono::days>(t));
}

}  // namespace obench
