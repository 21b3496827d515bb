#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "unprompt/diffusion.hpp"

namespace unprompt {

enum class DatasetKind { kMixture2d, kGlyphs };

// Glyph attribute grid. Every attribute is a small integer so edits are exact
// and each (attribute, value) pair renders to the same pixels every time.
struct GlyphAttrs {
    int eye_offset = 0;   // horizontal eye shift, in kEyeOffsetMin..kEyeOffsetMax
    int mouth_curve = 0;  // bend of the mouth line, kMouthCurveMin..kMouthCurveMax
    int hue = 0;          // face tone level, kHueMin..kHueMax
};

enum class GlyphAttribute { kEyeOffset, kMouthCurve, kHue };

constexpr int kGlyphSide = 12;
constexpr int kEyeOffsetMin = -2, kEyeOffsetMax = 2;
constexpr int kMouthCurveMin = -2, kMouthCurveMax = 2;
constexpr int kHueMin = 0, kHueMax = 5;

struct Dataset {
    DatasetKind kind = DatasetKind::kMixture2d;
    std::vector<Sample> samples;
    // Populated for mixture data: per-sample mode id and the mode centers.
    std::vector<int> mode_label;
    std::vector<Sample> mode_centers;
    // Populated for glyph data: the attributes each sample was rendered from.
    std::vector<GlyphAttrs> attrs;
    // Closed value range for clamping (images only).
    std::optional<std::pair<double, double>> value_range;
};

// `modes` Gaussian bumps spread evenly on a circle of the given radius.
Dataset make_mixture2d(int n, int modes, double radius, double noise_sigma,
                       std::uint64_t seed);

// n glyph faces with attributes drawn uniformly from the attribute grid.
Dataset make_glyphs(int n, std::uint64_t seed);

// Deterministic renderer: attributes -> 12x12 image in [0,1].
Sample render_glyph(const GlyphAttrs& attrs);

// Pixels that are allowed to change when `which` moves from old_value to
// new_value while the other attributes stay fixed. 1 = may change, 0 = must
// not. Row-major over the glyph image.
std::vector<std::uint8_t> glyph_edit_mask(const GlyphAttrs& attrs, GlyphAttribute which,
                                          int old_value, int new_value);

// Attribute helpers shared by the surrogate builder and the CLI.
int glyph_attr_value(const GlyphAttrs& attrs, GlyphAttribute which);
GlyphAttrs glyph_with_attr(const GlyphAttrs& attrs, GlyphAttribute which, int value);
void validate_glyph_attr(GlyphAttribute which, int value);
GlyphAttribute glyph_attribute_from_name(const std::string& name);
std::string glyph_attribute_name(GlyphAttribute which);

}  // namespace unprompt
