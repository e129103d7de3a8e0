#include "gridloc/error.hpp"
#include "gridloc/pgm.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace gridloc;

TEST(Pgm, BinaryRoundTripAndPolarity) {
    oracle::Rng rng(191);
    const BinaryImage img = oracle::random_image(rng, 9, 13);
    std::stringstream s;
    const std::vector<std::string> comments{"config_sha256=ab seed=3"};
    write_pgm(s, img, comments);
    const std::string bytes = s.str();
    EXPECT_EQ(bytes.rfind("P5\n# config_sha256=ab seed=3\n13 9\n255\n", 0), 0u);
    const GrayImage gray = read_pgm(s);
    EXPECT_EQ(gray(0, 0), img(0, 0) ? 0 : 255);
    s.clear();
    s.seekg(0);
    EXPECT_TRUE((read_binary_pgm(s) == img).all());
}

TEST(Pgm, StretchToGray) {
    RealRaster r(1, 3);
    r << 1.0, 2.0, 3.0;
    const GrayImage g = stretch_to_gray(r);
    EXPECT_EQ(g(0, 0), 0);
    EXPECT_EQ(g(0, 2), 255);
    EXPECT_TRUE((stretch_to_gray(RealRaster::Constant(2, 2, 4.0)) == 0).all());
}

TEST(Pgm, RejectsOtherFormats) {
    std::istringstream p2("P2\n1 1\n255\n0\n");
    EXPECT_THROW(read_pgm(p2), Error);
    std::istringstream truncated("P5\n4 4\n255\nab");
    EXPECT_THROW(read_pgm(truncated), Error);
}
