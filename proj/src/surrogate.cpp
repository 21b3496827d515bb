#include "unprompt/surrogate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "unprompt/rng.hpp"

namespace unprompt {

namespace {

Sample flip_horizontal(const Dataset& ds, const Sample& s) {
    Sample out = s;
    if (ds.kind == DatasetKind::kGlyphs) {
        for (int r = 0; r < s.rows; ++r) {
            for (int c = 0; c < s.cols; ++c) {
                out.data[static_cast<std::size_t>(r) * s.cols + static_cast<std::size_t>(c)] =
                    s.data[static_cast<std::size_t>(r) * s.cols +
                           static_cast<std::size_t>(s.cols - 1 - c)];
            }
        }
    } else {
        // Planar points mirror across the vertical axis.
        out.data[0] = -s.data[0];
    }
    return out;
}

Sample add_noise(const Dataset& ds, const Sample& s, const SurrogateSpec& spec) {
    if (!(spec.sigma > 0.0)) {
        throw InvalidRange("surrogate: add-noise sigma must be positive, got " +
                           std::to_string(spec.sigma));
    }
    StreamRng rng(spec.seed, "surrogate-noise");
    Sample out = s;
    for (double& v : out.data) v += spec.sigma * rng.normal();
    if (ds.value_range) {
        const auto [lo, hi] = *ds.value_range;
        for (double& v : out.data) v = std::clamp(v, lo, hi);
    }
    return out;
}

Sample mode_shift(const Dataset& ds, std::size_t index) {
    if (ds.kind != DatasetKind::kMixture2d || ds.mode_label.size() != ds.samples.size()) {
        throw StrategyDatasetMismatch("surrogate: mode-shift needs labeled mixture data");
    }
    const Sample& target = ds.samples[index];
    const int own = ds.mode_label[index];

    double best = std::numeric_limits<double>::infinity();
    std::size_t best_i = ds.samples.size();
    for (std::size_t i = 0; i < ds.samples.size(); ++i) {
        if (ds.mode_label[i] == own) continue;
        double d2 = 0.0;
        for (std::size_t k = 0; k < target.dim(); ++k) {
            const double d = ds.samples[i].data[k] - target.data[k];
            d2 += d * d;
        }
        if (d2 < best) {  // strict: ties resolve to the lowest index
            best = d2;
            best_i = i;
        }
    }
    if (best_i == ds.samples.size()) {
        throw StrategyDatasetMismatch("surrogate: no sample of a different mode exists");
    }
    return ds.samples[best_i];
}

Sample attribute_edit(const Dataset& ds, std::size_t index, const SurrogateSpec& spec) {
    if (ds.kind != DatasetKind::kGlyphs || ds.attrs.size() != ds.samples.size()) {
        throw StrategyDatasetMismatch("surrogate: attribute-edit needs glyph data");
    }
    const GlyphAttrs edited = glyph_with_attr(ds.attrs[index], spec.attribute, spec.new_value);
    return render_glyph(edited);
}

}  // namespace

Sample make_surrogate(const Dataset& ds, std::size_t index, const SurrogateSpec& spec) {
    if (index >= ds.samples.size()) {
        throw DimensionMismatch("surrogate: index " + std::to_string(index) + " out of " +
                                std::to_string(ds.samples.size()));
    }
    switch (spec.strategy) {
        case SurrogateStrategy::kFlip:
            return flip_horizontal(ds, ds.samples[index]);
        case SurrogateStrategy::kAddNoise:
            return add_noise(ds, ds.samples[index], spec);
        case SurrogateStrategy::kModeShift:
            return mode_shift(ds, index);
        case SurrogateStrategy::kAttributeEdit:
            return attribute_edit(ds, index, spec);
    }
    throw InvalidRange("surrogate: unknown strategy");
}

}  // namespace unprompt
