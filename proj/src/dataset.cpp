#include "unprompt/dataset.hpp"

#include <cmath>
#include <utility>

#include "unprompt/rng.hpp"

namespace unprompt {

namespace {

constexpr double kBackground = 0.5;
constexpr double kFeatureDrop = 0.12;  // eyes and mouth sit this far below the local tone
constexpr double kToneAmp = 0.36;      // deviation of the tone field from background
constexpr double kValueFloor = 0.02;
constexpr int kFaceLo = 1, kFaceHi = 10;  // inclusive face block bounds
constexpr int kEyeRowTop = 3;             // eyes occupy rows 3..4
constexpr int kMouthRow = 8;              // un-bent mouth row
constexpr int kMouthColLo = 3, kMouthColHi = 8;

constexpr double kPi = 3.14159265358979323846;

// Hue picks the orientation of a two-tone split across the face: one half
// sits kToneAmp above background, the other half the same amount below, with
// the dividing line rotating in 30-degree steps from vertical (hue 0) to
// anti-vertical (hue 5). The split has zero mean over the face block, so hue
// differences survive mean-centering, the two ends of the scale produce
// opposite tone patterns, and every pixel carries a full-strength hue signal
// (a smooth ramp would put most pixels near zero, which drowns at noisy
// timesteps). No pixel falls exactly on the dividing line: the face grid is
// offset from the center by half-integers, so the rotated coordinate never
// vanishes.
double face_tone(int hue, int r, int c) {
    const double theta = static_cast<double>(hue) * kPi / 6.0;
    const double x = (static_cast<double>(c) - 5.5) / 4.5;
    const double y = (static_cast<double>(r) - 5.5) / 4.5;
    const double s = std::cos(theta) * x + std::sin(theta) * y;
    return kBackground + (s > 0.0 ? kToneAmp : -kToneAmp);
}

void check_attrs(const GlyphAttrs& a) {
    validate_glyph_attr(GlyphAttribute::kEyeOffset, a.eye_offset);
    validate_glyph_attr(GlyphAttribute::kMouthCurve, a.mouth_curve);
    validate_glyph_attr(GlyphAttribute::kHue, a.hue);
}

// Pixel coordinates of both eyes for a given horizontal offset.
std::vector<std::pair<int, int>> eye_pixels(int offset) {
    std::vector<std::pair<int, int>> px;
    for (int r = kEyeRowTop; r <= kEyeRowTop + 1; ++r) {
        for (int c : {3 + offset, 4 + offset, 7 + offset, 8 + offset}) {
            px.emplace_back(r, c);
        }
    }
    return px;
}

// Mouth bend: a symmetric integer profile over the mouth columns. curve > 0
// pulls the corners down and the center up (a smile), curve < 0 mirrors it.
std::vector<std::pair<int, int>> mouth_pixels(int curve) {
    std::vector<std::pair<int, int>> px;
    for (int c = kMouthColLo; c <= kMouthColHi; ++c) {
        const double u = static_cast<double>(c) - 5.5;
        const int bend = static_cast<int>(
            std::lround(static_cast<double>(curve) * (u * u - 3.25) / 3.0));
        px.emplace_back(kMouthRow + bend, c);
    }
    return px;
}

}  // namespace

void validate_glyph_attr(GlyphAttribute which, int value) {
    switch (which) {
        case GlyphAttribute::kEyeOffset:
            if (value < kEyeOffsetMin || value > kEyeOffsetMax)
                throw InvalidRange("glyph: eye_offset " + std::to_string(value) +
                                   " outside [" + std::to_string(kEyeOffsetMin) + ", " +
                                   std::to_string(kEyeOffsetMax) + "]");
            return;
        case GlyphAttribute::kMouthCurve:
            if (value < kMouthCurveMin || value > kMouthCurveMax)
                throw InvalidRange("glyph: mouth_curve " + std::to_string(value) +
                                   " outside [" + std::to_string(kMouthCurveMin) + ", " +
                                   std::to_string(kMouthCurveMax) + "]");
            return;
        case GlyphAttribute::kHue:
            if (value < kHueMin || value > kHueMax)
                throw InvalidRange("glyph: hue " + std::to_string(value) + " outside [" +
                                   std::to_string(kHueMin) + ", " + std::to_string(kHueMax) +
                                   "]");
            return;
    }
    throw InvalidRange("glyph: unknown attribute");
}

int glyph_attr_value(const GlyphAttrs& attrs, GlyphAttribute which) {
    switch (which) {
        case GlyphAttribute::kEyeOffset: return attrs.eye_offset;
        case GlyphAttribute::kMouthCurve: return attrs.mouth_curve;
        case GlyphAttribute::kHue: return attrs.hue;
    }
    throw InvalidRange("glyph: unknown attribute");
}

GlyphAttrs glyph_with_attr(const GlyphAttrs& attrs, GlyphAttribute which, int value) {
    validate_glyph_attr(which, value);
    GlyphAttrs out = attrs;
    switch (which) {
        case GlyphAttribute::kEyeOffset: out.eye_offset = value; break;
        case GlyphAttribute::kMouthCurve: out.mouth_curve = value; break;
        case GlyphAttribute::kHue: out.hue = value; break;
    }
    return out;
}

GlyphAttribute glyph_attribute_from_name(const std::string& name) {
    if (name == "eye_offset") return GlyphAttribute::kEyeOffset;
    if (name == "mouth_curve") return GlyphAttribute::kMouthCurve;
    if (name == "hue") return GlyphAttribute::kHue;
    throw InvalidRange("glyph: unknown attribute name '" + name + "'");
}

std::string glyph_attribute_name(GlyphAttribute which) {
    switch (which) {
        case GlyphAttribute::kEyeOffset: return "eye_offset";
        case GlyphAttribute::kMouthCurve: return "mouth_curve";
        case GlyphAttribute::kHue: return "hue";
    }
    return "?";
}

Sample render_glyph(const GlyphAttrs& attrs) {
    check_attrs(attrs);
    Sample s;
    s.rows = kGlyphSide;
    s.cols = kGlyphSide;
    s.data.assign(static_cast<std::size_t>(kGlyphSide) * kGlyphSide, kBackground);

    auto px = [&s](int r, int c) -> double& {
        return s.data[static_cast<std::size_t>(r) * kGlyphSide + static_cast<std::size_t>(c)];
    };

    for (int r = kFaceLo; r <= kFaceHi; ++r) {
        for (int c = kFaceLo; c <= kFaceHi; ++c) px(r, c) = face_tone(attrs.hue, r, c);
    }
    // Eyes and mouth darken the local tone rather than carrying fixed values,
    // so every feature pixel still reflects the hue underneath it.
    auto darken = [&px](int r, int c) {
        px(r, c) = std::max(px(r, c) - kFeatureDrop, kValueFloor);
    };
    for (const auto& [r, c] : eye_pixels(attrs.eye_offset)) darken(r, c);
    for (const auto& [r, c] : mouth_pixels(attrs.mouth_curve)) darken(r, c);
    return s;
}

std::vector<std::uint8_t> glyph_edit_mask([[maybe_unused]] const GlyphAttrs& attrs,
                                          GlyphAttribute which, int old_value, int new_value) {
    validate_glyph_attr(which, old_value);
    validate_glyph_attr(which, new_value);

    std::vector<std::uint8_t> mask(static_cast<std::size_t>(kGlyphSide) * kGlyphSide, 0);
    auto set = [&mask](int r, int c) {
        mask[static_cast<std::size_t>(r) * kGlyphSide + static_cast<std::size_t>(c)] = 1;
    };

    switch (which) {
        case GlyphAttribute::kEyeOffset:
            for (const auto& [r, c] : eye_pixels(old_value)) set(r, c);
            for (const auto& [r, c] : eye_pixels(new_value)) set(r, c);
            return mask;
        case GlyphAttribute::kMouthCurve:
            for (const auto& [r, c] : mouth_pixels(old_value)) set(r, c);
            for (const auto& [r, c] : mouth_pixels(new_value)) set(r, c);
            return mask;
        case GlyphAttribute::kHue: {
            // The tone field covers the whole face block, and the feature
            // pixels ride it, so every face pixel may react to a hue change.
            for (int r = kFaceLo; r <= kFaceHi; ++r)
                for (int c = kFaceLo; c <= kFaceHi; ++c) set(r, c);
            return mask;
        }
    }
    throw InvalidRange("glyph_edit_mask: unknown attribute");
}

Dataset make_mixture2d(int n, int modes, double radius, double noise_sigma,
                       std::uint64_t seed) {
    if (n < 1) throw InvalidRange("make_mixture2d: n must be >= 1");
    if (modes < 1) throw InvalidRange("make_mixture2d: modes must be >= 1");
    if (!(radius > 0.0) || !(noise_sigma > 0.0)) {
        throw InvalidRange("make_mixture2d: radius and noise_sigma must be positive");
    }

    Dataset d;
    d.kind = DatasetKind::kMixture2d;
    d.mode_centers.reserve(static_cast<std::size_t>(modes));
    for (int k = 0; k < modes; ++k) {
        const double angle = 2.0 * 3.14159265358979323846 * static_cast<double>(k) /
                             static_cast<double>(modes);
        Sample c;
        c.rows = 1;
        c.cols = 2;
        c.data = {radius * std::cos(angle), radius * std::sin(angle)};
        d.mode_centers.push_back(std::move(c));
    }

    StreamRng mode_rng(seed, "mixture-mode");
    StreamRng noise_rng(seed, "mixture-noise");
    d.samples.reserve(static_cast<std::size_t>(n));
    d.mode_label.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const int k = static_cast<int>(mode_rng.uniform_int(0, modes - 1));
        Sample s = d.mode_centers[static_cast<std::size_t>(k)];
        s.data[0] += noise_sigma * noise_rng.normal();
        s.data[1] += noise_sigma * noise_rng.normal();
        d.samples.push_back(std::move(s));
        d.mode_label.push_back(k);
    }
    return d;
}

Dataset make_glyphs(int n, std::uint64_t seed) {
    if (n < 1) throw InvalidRange("make_glyphs: n must be >= 1");
    Dataset d;
    d.kind = DatasetKind::kGlyphs;
    d.value_range = std::make_pair(0.0, 1.0);
    StreamRng rng(seed, "glyph-attrs");
    d.samples.reserve(static_cast<std::size_t>(n));
    d.attrs.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        GlyphAttrs a;
        a.eye_offset = static_cast<int>(rng.uniform_int(kEyeOffsetMin, kEyeOffsetMax));
        a.mouth_curve = static_cast<int>(rng.uniform_int(kMouthCurveMin, kMouthCurveMax));
        a.hue = static_cast<int>(rng.uniform_int(kHueMin, kHueMax));
        d.samples.push_back(render_glyph(a));
        d.attrs.push_back(a);
    }
    return d;
}

}  // namespace unprompt
