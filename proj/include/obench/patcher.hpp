#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "obench/grid.hpp"

namespace obench {

struct PatchDim {
    std::size_t patch = 0;
    std::size_t stride = 0;
    friend bool operator==(const PatchDim&, const PatchDim&) = default;
};

/// Per-dimension window configuration. Dimensions not listed span the full axis.
struct PatchSpec {
    std::map<std::string, PatchDim> dims;
    bool check_full_scan = false;

    static PatchSpec from_json(const std::string& text);
    std::string to_json() const;

    friend bool operator==(const PatchSpec&, const PatchSpec&) = default;
};

using Index3 = std::array<std::size_t, 3>;

/// Window geometry resolved against a concrete (time, lat, lon) shape.
class PatchGrid {
public:
    PatchGrid(const PatchSpec& spec, const Shape3& shape);

    std::size_t count() const { return counts_[0] * counts_[1] * counts_[2]; }
    const Index3& patch_shape() const { return patch_; }
    const Index3& strides() const { return stride_; }
    const Index3& counts() const { return counts_; }
    const Shape3& field_shape() const { return shape_; }
    std::size_t patch_volume() const { return patch_[0] * patch_[1] * patch_[2]; }

    /// Row-major decomposition of idx over the per-dimension counts, times the stride.
    Index3 offsets(std::size_t idx) const;

private:
    Shape3 shape_;
    Index3 patch_{}, stride_{}, counts_{};
};

struct PatchView {
    std::size_t index = 0;
    Index3 offsets{};
    Index3 shape{};
    std::vector<double> data;
    CoordAxis time, lat, lon;
};

enum class WeightMode { Uniform, Triangular };

WeightMode parse_weight_mode(const std::string& name);

std::size_t patch_count(const PatchSpec& spec, const GriddedField& field);
PatchView get_patch(const PatchSpec& spec, const GriddedField& field, std::size_t idx);

/// Length-known, restartable sequence of patches in index order.
class PatchSequence {
public:
    PatchSequence(PatchSpec spec, const GriddedField& field);

    std::size_t size() const { return grid_.count(); }
    PatchView operator[](std::size_t idx) const;

    class iterator {
    public:
        using value_type = PatchView;
        using difference_type = std::ptrdiff_t;
        iterator(const PatchSequence* seq, std::size_t i) : seq_(seq), i_(i) {}
        PatchView operator*() const { return (*seq_)[i_]; }
        iterator& operator++() { ++i_; return *this; }
        bool operator==(const iterator& o) const { return i_ == o.i_; }
    private:
        const PatchSequence* seq_;
        std::size_t i_;
    };
    iterator begin() const { return {this, 0}; }
    iterator end() const { return {this, size()}; }

private:
    PatchSpec spec_;
    const GriddedField* field_;
    PatchGrid grid_;
};

PatchSequence iter_patches(const PatchSpec& spec, const GriddedField& field);

/// Weighted average of (possibly overlapping) patches onto the template's geometry.
/// Cells covered by no patch are NaN.
GriddedField reconstruct(const PatchSpec& spec, const GriddedField& like,
                         const std::vector<std::pair<std::size_t, std::vector<double>>>& patches,
                         WeightMode weight = WeightMode::Uniform);

/// 1-D triangular weights min(j+1, n-j) scaled to a peak of 1.
std::vector<double> triangular_weights(std::size_t n);

}  // namespace obench
