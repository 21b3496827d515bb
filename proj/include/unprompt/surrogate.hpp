#pragma once

#include <cstdint>

#include "unprompt/dataset.hpp"

namespace unprompt {

// How to construct the stand-in sample that a forgotten instance is steered
// toward. The stand-in should stay on the data manifold while differing from
// the target, which is why every strategy derives it from real data or from
// the generating process rather than from unstructured noise.
enum class SurrogateStrategy {
    kFlip,           // horizontal mirror of the target
    kAddNoise,       // target plus isotropic noise, clamped to the data range
    kModeShift,      // nearest dataset point that belongs to a different mode
    kAttributeEdit,  // re-render the glyph with one attribute changed
};

struct SurrogateSpec {
    SurrogateStrategy strategy = SurrogateStrategy::kFlip;
    double sigma = 0.0;                                  // kAddNoise strength
    GlyphAttribute attribute = GlyphAttribute::kHue;     // kAttributeEdit target
    int new_value = 0;                                   // kAttributeEdit value
    std::uint64_t seed = 0;                              // kAddNoise draws
};

// Build the surrogate for dataset sample `index`. Strategies are picky about
// dataset kinds: attribute edits need glyphs, mode shifts need mixture data;
// flip and add-noise work on both. Throws StrategyDatasetMismatch otherwise.
Sample make_surrogate(const Dataset& ds, std::size_t index, const SurrogateSpec& spec);

}  // namespace unprompt
