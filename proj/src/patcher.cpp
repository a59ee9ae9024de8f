#include "obench/patcher.hpp"

#include <cmath>
#include <limits>

#include <fmt/format.h>
#include <json.hpp>

#include "obench/error.hpp"

namespace obench {

using json = nlohmann::json;

namespace {

constexpr std::array<const char*, 3> kDimNames = {"time", "lat", "lon"};

std::size_t dim_index(const std::string& name) {
    for (std::size_t d = 0; d < 3; ++d) {
        if (name == kDimNames[d]) return d;
    }
    fail(fmt::format("unknown patch dimension '{}' (expected time, lat or lon)", name));
}

}  // namespace

PatchSpec PatchSpec::from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        fail_parse("patch_spec", e.what());
    }
    if (!j.is_object()) fail_parse("patch_spec", "must be a JSON object");
    PatchSpec spec;
    for (const auto& [key, value] : j.items()) {
        if (key == "check_full_scan") {
            if (!value.is_boolean()) fail_parse("check_full_scan", "must be a boolean");
            spec.check_full_scan = value.get<bool>();
        } else if (key == "dims") {
            if (!value.is_object()) fail_parse("dims", "must be an object");
            for (const auto& [name, entry] : value.items()) {
                const auto path = "dims." + name;
                dim_index(name);
                if (!entry.is_object()) fail_parse(path, "must be an object {patch, stride}");
                PatchDim pd;
                for (const auto& [k, v] : entry.items()) {
                    if (!v.is_number_unsigned()) fail_parse(path + "." + k, "must be a positive integer");
                    if (k == "patch") pd.patch = v.get<std::size_t>();
                    else if (k == "stride") pd.stride = v.get<std::size_t>();
                    else fail_parse(path + "." + k, "unknown key");
                }
                if (pd.patch == 0) fail_parse(path + ".patch", "must be a positive integer");
                if (pd.stride == 0) pd.stride = pd.patch;
                spec.dims[name] = pd;
            }
        } else {
            fail_parse(key, "unknown key in patch spec");
        }
    }
    return spec;
}

std::string PatchSpec::to_json() const {
    json j;
    j["check_full_scan"] = check_full_scan;
    j["dims"] = json::object();
    for (const auto& [name, d] : dims) j["dims"][name] = {{"patch", d.patch}, {"stride", d.stride}};
    return j.dump();
}

PatchGrid::PatchGrid(const PatchSpec& spec, const Shape3& shape) : shape_(shape) {
    const Index3 sizes = {shape.nt, shape.ny, shape.nx};
    for (std::size_t d = 0; d < 3; ++d) {
        patch_[d] = sizes[d];
        stride_[d] = sizes[d];
    }
    for (const auto& [name, pd] : spec.dims) {
        const auto d = dim_index(name);
        if (pd.patch == 0 || pd.stride == 0) fail(fmt::format("patch and stride for '{}' must be positive", name));
        patch_[d] = pd.patch;
        stride_[d] = pd.stride;
    }
    for (std::size_t d = 0; d < 3; ++d) {
        if (sizes[d] == 0) fail(fmt::format("dimension '{}' is empty", kDimNames[d]));
        if (patch_[d] > sizes[d])
            fail(fmt::format("patch size {} exceeds dimension '{}' of size {}", patch_[d], kDimNames[d], sizes[d]));
        if (spec.check_full_scan && (sizes[d] - patch_[d]) % stride_[d] != 0)
            fail(fmt::format("full scan check failed for '{}': (size {} - patch {}) is not a multiple of stride {}",
                             kDimNames[d], sizes[d], patch_[d], stride_[d]));
        counts_[d] = (sizes[d] - patch_[d]) / stride_[d] + 1;
    }
}

Index3 PatchGrid::offsets(std::size_t idx) const {
    if (idx >= count()) fail(fmt::format("patch index {} out of range [0, {})", idx, count()));
    Index3 out{};
    for (std::size_t d = 3; d-- > 0;) {
        out[d] = (idx % counts_[d]) * stride_[d];
        idx /= counts_[d];
    }
    return out;
}

WeightMode parse_weight_mode(const std::string& name) {
    if (name == "uniform") return WeightMode::Uniform;
    if (name == "triangular") return WeightMode::Triangular;
    fail(fmt::format("unknown weight mode '{}' (expected uniform or triangular)", name));
}

std::size_t patch_count(const PatchSpec& spec, const GriddedField& field) {
    return PatchGrid(spec, field.shape()).count();
}

namespace {

PatchView extract(const PatchGrid& grid, const GriddedField& field, std::size_t idx) {
    PatchView view;
    view.index = idx;
    view.offsets = grid.offsets(idx);
    view.shape = grid.patch_shape();
    const auto& o = view.offsets;
    const auto& p = view.shape;
    view.data.reserve(grid.patch_volume());
    for (std::size_t t = 0; t < p[0]; ++t)
        for (std::size_t y = 0; y < p[1]; ++y) {
            const auto row = field.data().subspan(field.index(o[0] + t, o[1] + y, o[2]), p[2]);
            view.data.insert(view.data.end(), row.begin(), row.end());
        }
    auto sub = [](const CoordAxis& a, std::size_t start, std::size_t n) {
        return CoordAxis{a.name,
                         std::vector<double>(a.values.begin() + static_cast<std::ptrdiff_t>(start),
                                             a.values.begin() + static_cast<std::ptrdiff_t>(start + n)),
                         a.units};
    };
    view.time = sub(field.time(), o[0], p[0]);
    view.lat = sub(field.lat(), o[1], p[1]);
    view.lon = sub(field.lon(), o[2], p[2]);
    return view;
}

}  // namespace

PatchView get_patch(const PatchSpec& spec, const GriddedField& field, std::size_t idx) {
    return extract(PatchGrid(spec, field.shape()), field, idx);
}

PatchSequence::PatchSequence(PatchSpec spec, const GriddedField& field)
    : spec_(std::move(spec)), field_(&field), grid_(spec_, field.shape()) {}

PatchView PatchSequence::operator[](std::size_t idx) const { return extract(grid_, *field_, idx); }

PatchSequence iter_patches(const PatchSpec& spec, const GriddedField& field) { return PatchSequence(spec, field); }

std::vector<double> triangular_weights(std::size_t n) {
    std::vector<double> w(n);
    const double peak = static_cast<double>((n + 1) / 2);
    for (std::size_t j = 0; j < n; ++j) w[j] = static_cast<double>(std::min(j + 1, n - j)) / peak;
    return w;
}

GriddedField reconstruct(const PatchSpec& spec, const GriddedField& like,
                         const std::vector<std::pair<std::size_t, std::vector<double>>>& patches,
                         WeightMode weight) {
    const PatchGrid grid(spec, like.shape());
    const auto& p = grid.patch_shape();
    const auto s = like.shape();

    std::array<std::vector<double>, 3> w1;
    for (std::size_t d = 0; d < 3; ++d)
        w1[d] = weight == WeightMode::Triangular ? triangular_weights(p[d]) : std::vector<double>(p[d], 1.0);

    std::vector<double> num(s.volume(), 0.0), den(s.volume(), 0.0);
    std::vector<bool> seen(grid.count(), false);
    for (const auto& [idx, values] : patches) {
        const auto o = grid.offsets(idx);
        if (seen[idx]) fail(fmt::format("duplicate patch index {} in reconstruction", idx));
        seen[idx] = true;
        if (values.size() != grid.patch_volume())
            fail(fmt::format("patch {} holds {} values, expected {} ({}x{}x{})", idx, values.size(),
                             grid.patch_volume(), p[0], p[1], p[2]));
        std::size_t k = 0;
        for (std::size_t t = 0; t < p[0]; ++t)
            for (std::size_t y = 0; y < p[1]; ++y) {
                const double wty = w1[0][t] * w1[1][y];
                std::size_t cell = like.index(o[0] + t, o[1] + y, o[2]);
                for (std::size_t x = 0; x < p[2]; ++x, ++k, ++cell) {
                    const double w = wty * w1[2][x];
                    num[cell] += w * values[k];
                    den[cell] += w;
                }
            }
    }
    std::vector<double> out(s.volume());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = den[i] > 0.0 ? num[i] / den[i] : std::numeric_limits<double>::quiet_NaN();
    return like.with_data(std::move(out));
}

}  // namespace obench
