#include "gridloc/dihedral.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace gridloc;

TEST(Dihedral, FlipHOnRow) {
    Raster<int> img(1, 2);
    img << 1, 2;
    const Raster<int> out = dihedral_transform(img, Dihedral::flip_h);
    EXPECT_EQ(out(0, 0), 2);
    EXPECT_EQ(out(0, 1), 1);
}

TEST(Dihedral, Rot90IsClockwise) {
    Raster<int> img(2, 3);
    img << 1, 2, 3, 4, 5, 6;
    const Raster<int> r = dihedral_transform(img, Dihedral::rot90);
    Raster<int> want(3, 2);
    want << 4, 1, 5, 2, 6, 3;
    EXPECT_TRUE((r == want).all());
}

TEST(Dihedral, NamesRoundTrip) {
    for (Dihedral d : kAllDihedral) EXPECT_EQ(dihedral_from_string(to_string(d)), d);
    EXPECT_FALSE(dihedral_from_string("rot45"));
}

TEST(Dihedral, GroupAxiomsOnImages) {
    oracle::Rng rng(73);
    const BinaryImage img = oracle::random_image(rng, 5, 7);
    for (Dihedral a : kAllDihedral) {
        EXPECT_TRUE((dihedral_transform(dihedral_transform(img, a), inverse(a)) == img).all());
        EXPECT_EQ(compose(a, Dihedral::identity), a);
        EXPECT_EQ(compose(Dihedral::identity, a), a);
        EXPECT_EQ(compose(a, inverse(a)), Dihedral::identity);
        EXPECT_EQ(swaps_axes(a), dihedral_transform(img, a).rows() == 7);
        for (Dihedral b : kAllDihedral) {
            const BinaryImage twice = dihedral_transform(dihedral_transform(img, a), b);
            EXPECT_TRUE((twice == dihedral_transform(img, compose(a, b))).all());
            for (Dihedral c : kAllDihedral) EXPECT_EQ(compose(compose(a, b), c), compose(a, compose(b, c)));
        }
    }
}

TEST(Dihedral, MapIndexFollowsImage) {
    Raster<int> img(3, 4);
    for (int i = 0; i < 12; ++i) img(i / 4, i % 4) = i;
    for (Dihedral d : kAllDihedral) {
        const Raster<int> out = dihedral_transform(img, d);
        for (int y = 0; y < 3; ++y) {
            for (int x = 0; x < 4; ++x) {
                const CellIndex m = map_index(d, {x, y}, 4, 3);
                EXPECT_EQ(out(m.y, m.x), img(y, x)) << to_string(d);
            }
        }
    }
}
