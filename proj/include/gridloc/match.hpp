#pragma once

#include "gridloc/dihedral.hpp"
#include "gridloc/raster.hpp"

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

namespace gridloc {

enum class ScoreMethod { hamming, jaccard, zncc };

std::string_view to_string(ScoreMethod m);
std::optional<ScoreMethod> score_method_from_string(std::string_view name);

/// Pixel tallies for one template placement: n pixels, a template bits set,
/// b window bits set, c set in both.
struct WindowCounts {
    std::int64_t n = 0;
    std::int64_t a = 0;
    std::int64_t b = 0;
    std::int64_t c = 0;
};

/// Similarity in [0, 1] from the tallies.
///   hamming: share of agreeing pixels
///   jaccard: c / (a + b - c), 1 when both sets are empty
///   zncc:    (1 + r) / 2 for the Pearson correlation r, 0.5 if either side is constant
double score_from_counts(const WindowCounts& counts, ScoreMethod method);

/// Template's top-left placement in the background.
struct MatchResult {
    int offset_x = 0;
    int offset_y = 0;
    double score = 0;
};

struct TransformedMatch {
    MatchResult match;
    Dihedral dihedral = Dihedral::identity;  ///< applied to the template
    double scale_x = 1;                      ///< applied to the background
    double scale_y = 1;
    int template_width = 0;   ///< after the dihedral
    int template_height = 0;
    int background_width = 0;  ///< before scaling
    int background_height = 0;
    ScoreMethod method = ScoreMethod::hamming;
};

/// Score of the template placed at (offset_x, offset_y). Throws Error when the
/// window overflows the background.
double score(const BinaryImage& background, const BinaryImage& templ, int offset_x, int offset_y,
             ScoreMethod method = ScoreMethod::hamming);

/// Exhaustive argmax over every placement, pixel by pixel. Ties go to the
/// smallest offset_y, then the smallest offset_x.
MatchResult match_template(const BinaryImage& background, const BinaryImage& templ,
                           ScoreMethod method = ScoreMethod::hamming);

/// Same result as match_template, bit for bit, computed on 64-bit packed rows
/// with popcount. Hamming placements are abandoned row-wise once they cannot
/// beat the running best. Offset rows are split across `threads` workers.
MatchResult match_accelerated(const BinaryImage& background, const BinaryImage& templ,
                              ScoreMethod method = ScoreMethod::hamming, int threads = 1);

/// Nearest-neighbour rescale; output dims round(dim * scale), source pixel
/// floor((i + 0.5) / scale) clamped to the input.
BinaryImage resample(const BinaryImage& image, double scale_x, double scale_y);

struct ScalePair {
    double x = 1;
    double y = 1;
};

/// Every (x, y) pair on lo, lo + step, ..., hi for both axes.
std::vector<ScalePair> scale_grid(double lo = 0.85, double hi = 1.15, double step = 0.05);

struct SearchOptions {
    std::vector<ScalePair> scales = scale_grid();
    std::vector<Dihedral> dihedrals{kAllDihedral.begin(), kAllDihedral.end()};
    ScoreMethod method = ScoreMethod::hamming;
    /// Second pass at `refine_step` within one coarse step of the coarse optimum.
    bool refine = false;
    double refine_step = 0.01;
    int threads = 1;
};

/// Best (dihedral on template, scale on background, offset) combination.
/// Ties: higher score, then scale pair closest to (1, 1) in L1, then dihedral
/// enumeration order, then offset_y, offset_x, then smaller scale_x, scale_y.
/// Combinations whose scaled background cannot hold the template are skipped;
/// throws Error when none fits.
TransformedMatch search_transforms(const BinaryImage& background, const BinaryImage& templ,
                                   const SearchOptions& options = {});

}  // namespace gridloc
