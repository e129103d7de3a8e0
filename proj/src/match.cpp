#include "gridloc/match.hpp"

#include "gridloc/error.hpp"
#include "gridloc/parallel.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>

namespace gridloc {

std::string_view to_string(ScoreMethod m) {
    switch (m) {
        case ScoreMethod::hamming: return "hamming";
        case ScoreMethod::jaccard: return "jaccard";
        case ScoreMethod::zncc: return "zncc";
    }
    return "hamming";
}

std::optional<ScoreMethod> score_method_from_string(std::string_view name) {
    for (ScoreMethod m : {ScoreMethod::hamming, ScoreMethod::jaccard, ScoreMethod::zncc}) {
        if (to_string(m) == name) return m;
    }
    return std::nullopt;
}

double score_from_counts(const WindowCounts& k, ScoreMethod method) {
    switch (method) {
        case ScoreMethod::hamming: {
            const std::int64_t mismatches = k.a + k.b - 2 * k.c;
            return static_cast<double>(k.n - mismatches) / static_cast<double>(k.n);
        }
        case ScoreMethod::jaccard: {
            const std::int64_t uni = k.a + k.b - k.c;
            return uni == 0 ? 1.0 : static_cast<double>(k.c) / static_cast<double>(uni);
        }
        case ScoreMethod::zncc: {
            const double n = static_cast<double>(k.n), a = static_cast<double>(k.a),
                         b = static_cast<double>(k.b), c = static_cast<double>(k.c);
            const double var_a = a * (n - a), var_b = b * (n - b);
            if (var_a == 0 || var_b == 0) return 0.5;
            const double r = (n * c - a * b) / std::sqrt(var_a * var_b);
            return std::clamp(0.5 * (1.0 + r), 0.0, 1.0);
        }
    }
    return 0;
}

namespace {

void require_fits(const BinaryImage& bg, const BinaryImage& t) {
    if (t.rows() == 0 || t.cols() == 0) throw Error("template is empty");
    if (t.cols() > bg.cols() || t.rows() > bg.rows()) {
        throw Error("template " + std::to_string(t.cols()) + "x" + std::to_string(t.rows()) +
                    " is larger than background " + std::to_string(bg.cols()) + "x" +
                    std::to_string(bg.rows()));
    }
}

WindowCounts naive_counts(const BinaryImage& bg, const BinaryImage& t, int ox, int oy) {
    WindowCounts k{t.size(), 0, 0, 0};
    for (Eigen::Index y = 0; y < t.rows(); ++y) {
        for (Eigen::Index x = 0; x < t.cols(); ++x) {
            const bool tv = t(y, x), bv = bg(oy + y, ox + x);
            k.a += tv;
            k.b += bv;
            k.c += tv && bv;
        }
    }
    return k;
}

// Rows packed LSB-first into 64-bit words: pixel x is bit x % 64 of word x / 64.
class PackedImage {
public:
    PackedImage(const BinaryImage& img, int pad_words = 0)
        : width_(static_cast<int>(img.cols())),
          height_(static_cast<int>(img.rows())),
          words_per_row_((width_ + 63) / 64 + pad_words),
          words_(static_cast<std::size_t>(height_) * words_per_row_, 0) {
        for (int y = 0; y < height_; ++y) {
            std::uint64_t* row = words_.data() + static_cast<std::size_t>(y) * words_per_row_;
            for (int x = 0; x < width_; ++x) {
                if (img(y, x)) row[x >> 6] |= std::uint64_t{1} << (x & 63);
            }
        }
    }

    int width() const { return width_; }
    int height() const { return height_; }
    int words_per_row() const { return words_per_row_; }
    const std::uint64_t* row(int y) const { return words_.data() + static_cast<std::size_t>(y) * words_per_row_; }
    const std::vector<std::uint64_t>& words() const { return words_; }

    std::int64_t ones() const {
        std::int64_t n = 0;
        for (std::uint64_t w : words_) n += std::popcount(w);
        return n;
    }

private:
    int width_, height_, words_per_row_;
    std::vector<std::uint64_t> words_;
};

// 64 bit-shifted copies of the background so that the window starting at
// column ox is word-aligned in copy ox % 64, beginning at word ox / 64.
class ShiftedBackground {
public:
    explicit ShiftedBackground(const BinaryImage& bg) : base_(bg, 1) {
        const std::size_t total = base_.words().size();
        const int wpr = base_.words_per_row();
        for (int s = 0; s < 64; ++s) {
            auto& copy = shifted_[s];
            copy.resize(total);
            for (int y = 0; y < base_.height(); ++y) {
                const std::uint64_t* src = base_.row(y);
                std::uint64_t* dst = copy.data() + static_cast<std::size_t>(y) * wpr;
                for (int w = 0; w < wpr; ++w) {
                    const std::uint64_t hi = (s && w + 1 < wpr) ? src[w + 1] << (64 - s) : 0;
                    dst[w] = (src[w] >> s) | hi;
                }
            }
        }
        integral_ = Raster<std::int64_t>::Zero(bg.rows() + 1, bg.cols() + 1);
        for (Eigen::Index y = 0; y < bg.rows(); ++y) {
            for (Eigen::Index x = 0; x < bg.cols(); ++x) {
                integral_(y + 1, x + 1) = integral_(y, x + 1) + integral_(y + 1, x) - integral_(y, x) + bg(y, x);
            }
        }
    }

    int width() const { return base_.width(); }
    int height() const { return base_.height(); }

    const std::uint64_t* window_row(int ox, int y) const {
        return shifted_[ox & 63].data() + static_cast<std::size_t>(y) * base_.words_per_row() + (ox >> 6);
    }

    std::int64_t window_ones(int ox, int oy, int w, int h) const {
        return integral_(oy + h, ox + w) - integral_(oy, ox + w) - integral_(oy + h, ox) + integral_(oy, ox);
    }

private:
    PackedImage base_;
    std::array<std::vector<std::uint64_t>, 64> shifted_;
    Raster<std::int64_t> integral_;
};

struct Candidate {
    bool valid = false;
    double score = 0;
    std::int64_t mismatches = 0;
    int ox = 0;
    int oy = 0;
};

// Better within one (dihedral, scale) item: higher score, then row-major earlier.
bool better_offset(const Candidate& a, const Candidate& b) {
    if (!b.valid) return a.valid;
    if (!a.valid) return false;
    if (a.score != b.score) return a.score > b.score;
    if (a.oy != b.oy) return a.oy < b.oy;
    return a.ox < b.ox;
}

constexpr std::int64_t kNoBound = std::numeric_limits<std::int64_t>::max();

// Hamming scan over offset rows [oy_begin, oy_end). `bound` holds the best
// mismatch count seen anywhere; placements strictly worse are abandoned.
Candidate scan_hamming(const ShiftedBackground& bg, const PackedImage& t, int oy_begin, int oy_end,
                       const std::atomic<std::int64_t>* bound) {
    const int tw = t.words_per_row();
    const int th = t.height();
    const int tail_bits = t.width() & 63;
    const std::uint64_t tail_mask = tail_bits ? (std::uint64_t{1} << tail_bits) - 1 : ~std::uint64_t{0};
    const int max_ox = bg.width() - t.width();
    const std::int64_t n = static_cast<std::int64_t>(t.width()) * th;

    Candidate best;
    std::int64_t limit = kNoBound;  // placements reaching `limit` mismatches lose
    for (int oy = oy_begin; oy < oy_end; ++oy) {
        if (bound) {
            const std::int64_t g = bound->load(std::memory_order_relaxed);
            if (g != kNoBound) limit = std::min(limit, g + 1);
        }
        for (int ox = 0; ox <= max_ox; ++ox) {
            std::int64_t mism = 0;
            int r = 0;
            for (; r < th; ++r) {
                const std::uint64_t* tr = t.row(r);
                const std::uint64_t* br = bg.window_row(ox, oy + r);
                for (int w = 0; w + 1 < tw; ++w) mism += std::popcount(tr[w] ^ br[w]);
                mism += std::popcount((tr[tw - 1] ^ br[tw - 1]) & tail_mask);
                if (mism >= limit) break;
            }
            if (r < th) continue;
            limit = mism;
            best = Candidate{true, 0, mism, ox, oy};
        }
    }
    if (best.valid) {
        best.score = static_cast<double>(n - best.mismatches) / static_cast<double>(n);
    }
    return best;
}

// Generic scan via AND popcounts plus window sums; no pruning.
Candidate scan_counts(const ShiftedBackground& bg, const PackedImage& t, std::int64_t template_ones,
                      int oy_begin, int oy_end, ScoreMethod method) {
    const int tw = t.words_per_row();
    const int th = t.height();
    const int max_ox = bg.width() - t.width();
    Candidate best;
    for (int oy = oy_begin; oy < oy_end; ++oy) {
        for (int ox = 0; ox <= max_ox; ++ox) {
            std::int64_t both = 0;
            for (int r = 0; r < th; ++r) {
                const std::uint64_t* tr = t.row(r);
                const std::uint64_t* br = bg.window_row(ox, oy + r);
                for (int w = 0; w < tw; ++w) both += std::popcount(tr[w] & br[w]);
            }
            const WindowCounts k{static_cast<std::int64_t>(t.width()) * th, template_ones,
                                 bg.window_ones(ox, oy, t.width(), th), both};
            Candidate c{true, score_from_counts(k, method), 0, ox, oy};
            if (better_offset(c, best)) best = c;
        }
    }
    return best;
}

Candidate scan(const ShiftedBackground& bg, const PackedImage& t, int oy_begin, int oy_end,
               ScoreMethod method, const std::atomic<std::int64_t>* bound) {
    if (method == ScoreMethod::hamming) return scan_hamming(bg, t, oy_begin, oy_end, bound);
    return scan_counts(bg, t, t.ones(), oy_begin, oy_end, method);
}

bool fits(const ShiftedBackground& bg, const PackedImage& t) {
    return t.width() <= bg.width() && t.height() <= bg.height();
}

}  // namespace

double score(const BinaryImage& background, const BinaryImage& templ, int offset_x, int offset_y,
             ScoreMethod method) {
    if (offset_x < 0 || offset_y < 0 || offset_x + templ.cols() > background.cols() ||
        offset_y + templ.rows() > background.rows())
        throw Error("template window overflows the background");
    if (templ.size() == 0) throw Error("template is empty");
    return score_from_counts(naive_counts(background, templ, offset_x, offset_y), method);
}

MatchResult match_template(const BinaryImage& background, const BinaryImage& templ, ScoreMethod method) {
    require_fits(background, templ);
    MatchResult best{0, 0, -1.0};
    for (int oy = 0; oy + templ.rows() <= background.rows(); ++oy) {
        for (int ox = 0; ox + templ.cols() <= background.cols(); ++ox) {
            const double s = score_from_counts(naive_counts(background, templ, ox, oy), method);
            if (s > best.score) best = {ox, oy, s};
        }
    }
    return best;
}

MatchResult match_accelerated(const BinaryImage& background, const BinaryImage& templ,
                              ScoreMethod method, int threads) {
    require_fits(background, templ);
    const ShiftedBackground bg(background);
    const PackedImage t(templ);
    const int rows = bg.height() - t.height() + 1;
    const int chunks = std::min(rows, std::max(1, threads) * 4);
    std::vector<Candidate> partial(static_cast<std::size_t>(chunks));
    parallel_for(partial.size(), threads, [&](std::size_t i) {
        const int begin = static_cast<int>(rows * i / chunks);
        const int end = static_cast<int>(rows * (i + 1) / chunks);
        partial[i] = scan(bg, t, begin, end, method, nullptr);
    });
    Candidate best;
    for (const Candidate& c : partial) {
        if (better_offset(c, best)) best = c;
    }
    return {best.ox, best.oy, best.score};
}

BinaryImage resample(const BinaryImage& image, double scale_x, double scale_y) {
    if (!(scale_x > 0) || !(scale_y > 0)) throw Error("resample scales must be positive");
    const long w = std::lround(static_cast<double>(image.cols()) * scale_x);
    const long h = std::lround(static_cast<double>(image.rows()) * scale_y);
    if (w < 1 || h < 1) throw Error("resample produces an empty image");
    std::vector<Eigen::Index> src_x(w), src_y(h);
    for (long x = 0; x < w; ++x)
        src_x[x] = std::min<Eigen::Index>(image.cols() - 1, static_cast<Eigen::Index>(std::floor((x + 0.5) / scale_x)));
    for (long y = 0; y < h; ++y)
        src_y[y] = std::min<Eigen::Index>(image.rows() - 1, static_cast<Eigen::Index>(std::floor((y + 0.5) / scale_y)));
    BinaryImage out(h, w);
    for (long y = 0; y < h; ++y) {
        for (long x = 0; x < w; ++x) out(y, x) = image(src_y[y], src_x[x]);
    }
    return out;
}

std::vector<ScalePair> scale_grid(double lo, double hi, double step) {
    if (!(step > 0) || !(lo > 0) || hi < lo) throw Error("invalid scale grid");
    const long steps = std::lround((hi - lo) / step);
    std::vector<double> values;
    for (long i = 0; i <= steps; ++i) values.push_back(std::round((lo + i * step) * 1e9) / 1e9);
    std::vector<ScalePair> out;
    for (double sy : values) {
        for (double sx : values) out.push_back({sx, sy});
    }
    return out;
}

namespace {

constexpr double kScaleEps = 1e-9;

struct SearchCandidate {
    Candidate hit;
    ScalePair scale;
    Dihedral dihedral = Dihedral::identity;
    int template_w = 0, template_h = 0;
};

double l1_from_unit(ScalePair s) { return std::abs(s.x - 1.0) + std::abs(s.y - 1.0); }

bool better_transform(const SearchCandidate& a, const SearchCandidate& b) {
    if (!b.hit.valid) return a.hit.valid;
    if (!a.hit.valid) return false;
    if (a.hit.score != b.hit.score) return a.hit.score > b.hit.score;
    const double da = l1_from_unit(a.scale), db = l1_from_unit(b.scale);
    if (std::abs(da - db) > kScaleEps) return da < db;
    if (a.dihedral != b.dihedral) return a.dihedral < b.dihedral;
    if (a.hit.oy != b.hit.oy) return a.hit.oy < b.hit.oy;
    if (a.hit.ox != b.hit.ox) return a.hit.ox < b.hit.ox;
    if (std::abs(a.scale.x - b.scale.x) > kScaleEps) return a.scale.x < b.scale.x;
    return a.scale.y < b.scale.y - kScaleEps;
}

SearchCandidate run_search(const BinaryImage& background, const std::vector<PackedImage>& templates,
                           const std::vector<Dihedral>& dihedrals, const std::vector<ScalePair>& scales,
                           ScoreMethod method, int threads) {
    // Visit scales nearest (1, 1) first so the shared hamming bound tightens early.
    std::vector<std::size_t> order(scales.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return l1_from_unit(scales[a]) < l1_from_unit(scales[b]) - kScaleEps;
    });

    std::atomic<std::int64_t> bound{kNoBound};
    std::vector<std::vector<SearchCandidate>> results(scales.size());
    parallel_for(order.size(), threads, [&](std::size_t i) {
        const std::size_t si = order[i];
        const ScalePair s = scales[si];
        const long w = std::lround(static_cast<double>(background.cols()) * s.x);
        const long h = std::lround(static_cast<double>(background.rows()) * s.y);
        const bool any_fit = std::any_of(templates.begin(), templates.end(), [&](const PackedImage& t) {
            return t.width() <= w && t.height() <= h;
        });
        if (!any_fit) return;
        const ShiftedBackground bg(resample(background, s.x, s.y));
        for (std::size_t d = 0; d < templates.size(); ++d) {
            const PackedImage& t = templates[d];
            if (!fits(bg, t)) continue;
            SearchCandidate c{scan(bg, t, 0, bg.height() - t.height() + 1, method, &bound), s, dihedrals[d],
                              t.width(), t.height()};
            if (c.hit.valid && method == ScoreMethod::hamming) {
                std::int64_t cur = bound.load();
                while (c.hit.mismatches < cur && !bound.compare_exchange_weak(cur, c.hit.mismatches)) {
                }
            }
            results[si].push_back(c);
        }
    });

    SearchCandidate best;
    for (const auto& per_scale : results) {
        for (const SearchCandidate& c : per_scale) {
            if (better_transform(c, best)) best = c;
        }
    }
    return best;
}

std::vector<PackedImage> pack_templates(const BinaryImage& templ, const std::vector<Dihedral>& dihedrals) {
    std::vector<PackedImage> out;
    out.reserve(dihedrals.size());
    for (Dihedral d : dihedrals) out.emplace_back(dihedral_transform(templ, d));
    return out;
}

}  // namespace

TransformedMatch search_transforms(const BinaryImage& background, const BinaryImage& templ,
                                   const SearchOptions& options) {
    if (options.scales.empty()) throw Error("scale set is empty");
    if (options.dihedrals.empty()) throw Error("dihedral set is empty");
    if (templ.size() == 0) throw Error("template is empty");
    for (const ScalePair& s : options.scales) {
        if (!(s.x > 0) || !(s.y > 0)) throw Error("scales must be positive");
    }

    const auto templates = pack_templates(templ, options.dihedrals);
    SearchCandidate best =
        run_search(background, templates, options.dihedrals, options.scales, options.method, options.threads);
    if (!best.hit.valid) throw Error("template never fits the scaled background");

    if (options.refine) {
        if (!(options.refine_step > 0)) throw Error("refine_step must be positive");
        // Coarse spacing: smallest positive gap between distinct scale values.
        double coarse = INFINITY;
        for (const ScalePair& a : options.scales) {
            for (const ScalePair& b : options.scales) {
                for (double gap : {std::abs(a.x - b.x), std::abs(a.y - b.y)}) {
                    if (gap > kScaleEps) coarse = std::min(coarse, gap);
                }
            }
        }
        if (std::isfinite(coarse)) {
            const long k = std::lround(coarse / options.refine_step) - 1;
            std::vector<ScalePair> fine;
            for (long j = -k; j <= k; ++j) {
                for (long i = -k; i <= k; ++i) {
                    const ScalePair s{std::round((best.scale.x + i * options.refine_step) * 1e9) / 1e9,
                                      std::round((best.scale.y + j * options.refine_step) * 1e9) / 1e9};
                    if (s.x > 0 && s.y > 0) fine.push_back(s);
                }
            }
            const std::vector<Dihedral> one{best.dihedral};
            SearchCandidate refined =
                run_search(background, pack_templates(templ, one), one, fine, options.method, options.threads);
            if (better_transform(refined, best)) best = refined;
        }
    }

    TransformedMatch out;
    out.match = {best.hit.ox, best.hit.oy, best.hit.score};
    out.dihedral = best.dihedral;
    out.scale_x = best.scale.x;
    out.scale_y = best.scale.y;
    out.template_width = best.template_w;
    out.template_height = best.template_h;
    out.background_width = static_cast<int>(background.cols());
    out.background_height = static_cast<int>(background.rows());
    out.method = options.method;
    return out;
}

}  // namespace gridloc
