#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "sadir/types.hpp"

using namespace sadir;

TEST_CASE("uniform geometry covers the span without duplicate angles") {
    Geometry g = Geometry::uniform(180, 64, 0.5);
    CHECK(g.n_views() == 180);
    CHECK(g.angles.front() == 0.0);
    CHECK(g.angles.back() == doctest::Approx(kPi * 179.0 / 180.0).epsilon(1e-15));
    for (int v = 1; v < g.n_views(); ++v)
        CHECK(g.angles[v] > g.angles[v - 1]);
}

TEST_CASE("detector coordinates are centered and symmetric") {
    Geometry g = Geometry::uniform(4, 6, 2.0);
    CHECK(g.det_coord(0) == doctest::Approx(-5.0));
    CHECK(g.det_coord(5) == doctest::Approx(5.0));
    for (int d = 0; d < g.n_det; ++d)
        CHECK(g.det_coord(d) == doctest::Approx(-g.det_coord(g.n_det - 1 - d)));
    g.det_center_offset = 1.5;
    CHECK(g.det_coord(0) == doctest::Approx(-2.0));
}

TEST_CASE("lr/hr counterparts invert each other on metadata") {
    Geometry g = Geometry::uniform(10, 32, 0.25);
    Geometry lr = g.lr_counterpart();
    CHECK(lr.n_det == 16);
    CHECK(lr.det_spacing == doctest::Approx(0.5));
    Geometry back = lr.hr_counterpart();
    CHECK(back.n_det == g.n_det);
    CHECK(back.det_spacing == doctest::Approx(g.det_spacing));

    Geometry odd = Geometry::uniform(4, 5, 1.0);
    CHECK_THROWS_AS((void)odd.lr_counterpart(), std::invalid_argument);
}

TEST_CASE("geometry validation rejects bad shapes") {
    CHECK_THROWS_AS(Geometry::uniform(0, 8, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(Geometry::uniform(4, 1, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(Geometry::uniform(4, 8, 0.0), std::invalid_argument);
    Geometry g = Geometry::uniform(4, 8, 1.0);
    g.angles[2] = std::nan("");
    CHECK_THROWS_AS(g.validate(), std::invalid_argument);
}

TEST_CASE("image addressing is row-major with finite validation") {
    Image img(3, 0.5);
    img.at(1, 2) = 7.0;
    CHECK(img.data[1 * 3 + 2] == 7.0);
    CHECK(img.size() == 9);
    img.validate();
    img.at(0, 0) = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(img.validate(), std::invalid_argument);
}

TEST_CASE("sinogram shape matching and validation") {
    Geometry g = Geometry::uniform(5, 8, 1.5);
    Sinogram s(5, 8, 1.5);
    CHECK(s.shape_matches(g));
    Sinogram wrong(5, 8, 1.0);
    CHECK(!wrong.shape_matches(g));
    s.at(4, 7) = 3.0;
    CHECK(s.row(4)[7] == 3.0);
    s.at(0, 0) = std::nan("");
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
}
