#include "obench/grid_io.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "obench/error.hpp"

namespace obench {

using json = nlohmann::json;

namespace {

void put_u64_le(std::string& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

std::uint64_t get_u64_le(const char* p) {
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | static_cast<unsigned char>(p[i]);
    return v;
}

std::vector<double> axis_from_json(const json& header, const char* key) {
    if (!header.contains(key) || !header[key].is_array()) fail_parse(key, "missing coordinate array");
    std::vector<double> out;
    out.reserve(header[key].size());
    for (const auto& v : header[key]) {
        if (!v.is_number()) fail_parse(key, "coordinate is not a number");
        out.push_back(v.get<double>());
    }
    return out;
}

std::string string_field(const json& header, const char* key) {
    if (!header.contains(key) || !header[key].is_string()) fail_parse(key, "missing string field");
    return header[key].get<std::string>();
}

}  // namespace

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail_io(fmt::format("cannot open '{}' for reading", path.string()));
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) fail_io(fmt::format("cannot open '{}' for writing", path.string()));
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) fail_io(fmt::format("write to '{}' failed", path.string()));
}

std::string encode_grid(const GriddedField& field) {
    json header;
    header["var"] = field.var();
    header["units"] = field.units();
    header["dims"] = {"time", "lat", "lon"};
    const auto shape = field.shape();
    header["shape"] = {shape.nt, shape.ny, shape.nx};
    header["epoch"] = format_iso(field.epoch());
    header["time"] = field.time().values;
    header["lat"] = field.lat().values;
    header["lon"] = field.lon().values;
    header["axis_units"] = {{"time", field.time().units}, {"lat", field.lat().units}, {"lon", field.lon().units}};
    header["attrs"] = json::object();
    for (const auto& [k, v] : field.attrs()) header["attrs"][k] = v;
    const std::string text = header.dump();

    std::string out(kGridMagic, sizeof(kGridMagic));
    put_u64_le(out, text.size());
    out += text;
    const auto data = field.data();
    const std::size_t offset = out.size();
    out.resize(offset + data.size() * 8);
    for (std::size_t i = 0; i < data.size(); ++i) {
        auto bits = std::bit_cast<std::uint64_t>(data[i]);
        for (int b = 0; b < 8; ++b) out[offset + i * 8 + b] = static_cast<char>((bits >> (8 * b)) & 0xFF);
    }
    return out;
}

GriddedField decode_grid(const std::string& bytes) {
    if (bytes.size() < 16 || std::memcmp(bytes.data(), kGridMagic, 8) != 0)
        fail_parse("magic", "not an OBG v1 file (bad magic)");
    const std::uint64_t header_len = get_u64_le(bytes.data() + 8);
    if (header_len > bytes.size() - 16) fail_parse("header_length", "header length exceeds file size");

    json header;
    try {
        header = json::parse(bytes.begin() + 16, bytes.begin() + 16 + static_cast<std::ptrdiff_t>(header_len));
    } catch (const json::parse_error& e) {
        fail_parse("header", e.what());
    }
    if (!header.is_object()) fail_parse("header", "header is not a JSON object");

    if (!header.contains("dims") || header["dims"] != json({"time", "lat", "lon"}))
        fail_parse("dims", "dims must be [\"time\",\"lat\",\"lon\"]");
    if (!header.contains("shape") || !header["shape"].is_array() || header["shape"].size() != 3)
        fail_parse("shape", "shape must be a 3-element array");
    std::array<std::uint64_t, 3> shape{};
    for (std::size_t i = 0; i < 3; ++i) {
        if (!header["shape"][i].is_number_unsigned()) fail_parse("shape", "shape entries must be non-negative integers");
        shape[i] = header["shape"][i].get<std::uint64_t>();
    }

    auto time = axis_from_json(header, "time");
    auto lat = axis_from_json(header, "lat");
    auto lon = axis_from_json(header, "lon");
    if (time.size() != shape[0]) fail_parse("time", "axis length does not match shape[0]");
    if (lat.size() != shape[1]) fail_parse("lat", "axis length does not match shape[1]");
    if (lon.size() != shape[2]) fail_parse("lon", "axis length does not match shape[2]");

    const std::uint64_t count = shape[0] * shape[1] * shape[2];
    const std::uint64_t payload = bytes.size() - 16 - header_len;
    if (payload != count * 8)
        fail_parse("payload length", fmt::format("payload length {} bytes, header shape requires {} values ({} bytes)",
                                                 payload, count, count * 8));

    std::string time_units = units::kDays, lat_units = units::kDegreesNorth, lon_units = units::kDegreesEast;
    if (header.contains("axis_units")) {
        const auto& au = header["axis_units"];
        if (!au.is_object()) fail_parse("axis_units", "must be an object");
        if (au.contains("time")) time_units = au["time"].get<std::string>();
        if (au.contains("lat")) lat_units = au["lat"].get<std::string>();
        if (au.contains("lon")) lon_units = au["lon"].get<std::string>();
    }

    Attrs attrs;
    if (header.contains("attrs")) {
        if (!header["attrs"].is_object()) fail_parse("attrs", "must be an object");
        for (const auto& [k, v] : header["attrs"].items()) {
            if (!v.is_string()) fail_parse("attrs." + k, "attribute values must be strings");
            attrs[k] = v.get<std::string>();
        }
    }

    std::vector<double> data(count);
    const char* p = bytes.data() + 16 + header_len;
    for (std::uint64_t i = 0; i < count; ++i) data[i] = std::bit_cast<double>(get_u64_le(p + i * 8));

    return GriddedField(string_field(header, "var"), string_field(header, "units"),
                        make_time_axis(std::move(time), time_units), make_lat_axis(std::move(lat), lat_units),
                        make_lon_axis(std::move(lon), lon_units), std::move(data),
                        parse_iso(string_field(header, "epoch")), std::move(attrs));
}

void write_grid(const GriddedField& field, const std::filesystem::path& path) {
    write_file(path, encode_grid(field));
}

GriddedField read_grid(const std::filesystem::path& path) { return decode_grid(read_file(path)); }

std::string encode_track(const AlongTrackSet& set) {
    std::string out = "time,lat,lon,ssh\n";
    for (const auto& r : set.records()) {
        out += fmt::format("{},{:.17g},{:.17g},{:.17g}\n", format_iso(set.timestamp_of(r)), r.lat, r.lon, r.value);
    }
    return out;
}

namespace {

double parse_double(std::string_view s, const std::string& field) {
    double v = 0.0;
    if (s == "nan" || s == "NaN") return std::nan("");
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
        fail_parse(field, fmt::format("cannot parse '{}' as a number", s));
    return v;
}

}  // namespace

AlongTrackSet decode_track(const std::string& text, std::optional<Timestamp> epoch) {
    std::vector<std::string> lines;
    std::size_t start = 0;
    while (start < text.size()) {
        auto end = text.find('\n', start);
        if (end == std::string::npos) end = text.size();
        std::string line = text.substr(start, end - start);
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(std::move(line));
        start = end + 1;
    }
    if (lines.empty() || lines[0] != "time,lat,lon,ssh")
        fail_parse("header", "missing track header 'time,lat,lon,ssh'");

    std::vector<std::pair<Timestamp, TrackRecord>> rows;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto& line = lines[i];
        if (line.empty()) continue;
        std::vector<std::string_view> cells;
        std::string_view sv(line);
        std::size_t pos = 0;
        while (true) {
            auto comma = sv.find(',', pos);
            cells.push_back(sv.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos));
            if (comma == std::string_view::npos) break;
            pos = comma + 1;
        }
        const auto row = fmt::format("row {}", i);
        if (cells.size() != 4) fail_parse(row, fmt::format("expected 4 columns, found {}", cells.size()));
        Timestamp ts;
        try {
            ts = parse_iso(cells[0]);
        } catch (const Error&) {
            fail_parse(row + ".time", fmt::format("unparseable timestamp '{}'", cells[0]));
        }
        TrackRecord r;
        r.lat = parse_double(cells[1], row + ".lat");
        r.lon = parse_double(cells[2], row + ".lon");
        r.value = parse_double(cells[3], row + ".ssh");
        rows.emplace_back(ts, r);
    }

    Timestamp anchor = epoch ? *epoch : Timestamp{};
    if (!epoch && !rows.empty()) {
        auto first = rows.front().first;
        for (const auto& [ts, r] : rows) first = std::min(first, ts);
        anchor = floor_to_day(first);
    }
    std::vector<TrackRecord> records;
    records.reserve(rows.size());
    for (auto& [ts, r] : rows) {
        r.time = days_between(anchor, ts);
        records.push_back(r);
    }
    return AlongTrackSet(std::move(records), anchor);
}

void write_track(const AlongTrackSet& set, const std::filesystem::path& path) {
    write_file(path, encode_track(set));
}

AlongTrackSet read_track(const std::filesystem::path& path, std::optional<Timestamp> epoch) {
    return decode_track(read_file(path), epoch);
}

}  // namespace obench
