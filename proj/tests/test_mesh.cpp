#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dgdiss/mesh.hpp"

using namespace dgdiss;

TEST_CASE("cell and facet counts") {
    const auto m = build_mesh(2, {3, 4}, {1.0, 2.0});
    CHECK(m.num_cells() == 12);
    CHECK(m.num_facets() == 24);
    CHECK(m.h(0) == doctest::Approx(1.0 / 3));
    CHECK(m.h(1) == doctest::Approx(0.5));
    CHECK(m.cell_volume() == doctest::Approx(1.0 / 6));
    CHECK_FALSE(m.isotropic());
    CHECK(build_mesh(3, {2, 2, 2}, {1, 1, 1}).isotropic());
}

TEST_CASE("lexicographic indexing round-trips with axis 0 fastest") {
    const auto m = build_mesh(3, {2, 3, 4}, {1, 1, 1});
    CHECK(m.cell_index({1, 0, 0}) == 1);
    CHECK(m.cell_index({0, 1, 0}) == 2);
    CHECK(m.cell_index({0, 0, 1}) == 6);
    for (std::size_t c = 0; c < m.num_cells(); ++c)
        CHECK(m.cell_index(m.cell_multi_index(c)) == c);
}

TEST_CASE("facet orientation and periodic wrap") {
    const auto m = build_mesh(2, {3, 2}, {3.0, 2.0});
    for (int a = 0; a < 2; ++a)
        for (std::size_t c = 0; c < m.num_cells(); ++c) {
            const Facet& f = m.facet(m.upper_facet(c, a));
            CHECK(f.axis == a);
            CHECK(f.plus_cell == c);
            CHECK(f.normal[a] == 1.0);
            auto up = m.cell_multi_index(c);
            up[a] = (up[a] + 1) % m.cells_along(a);
            CHECK(f.minus_cell == m.cell_index(up));
            CHECK(m.facet(m.lower_facet(c, a)).minus_cell == c);
        }
    // Wrap-around: last cell along axis 0 neighbours the first.
    CHECK(m.facet(m.upper_facet(2, 0)).minus_cell == 0);
    const auto o = m.cell_origin(m.cell_index({2, 1, 0}));
    CHECK(o[0] == doctest::Approx(2.0));
    CHECK(o[1] == doctest::Approx(1.0));
}

TEST_CASE("single periodic cell is its own neighbour") {
    const auto m = build_mesh(1, {1}, {1.0});
    CHECK(m.num_facets() == 1);
    CHECK(m.facet(0).plus_cell == 0);
    CHECK(m.facet(0).minus_cell == 0);
}

TEST_CASE("length rules") {
    const auto iso = build_mesh(2, {4, 4}, {1, 1});
    CHECK(facet_length_scale(iso, iso.facet(0)) == doctest::Approx(0.25));
    const auto aniso = build_mesh(2, {4, 2}, {1, 1});
    CHECK_THROWS_AS(facet_length_scale(aniso, aniso.facet(0)), std::invalid_argument);
    CHECK(normal_width_length_scale(aniso, aniso.facet(0)) == doctest::Approx(0.25));
    CHECK(normal_width_length_scale(aniso, aniso.facet(aniso.num_cells())) == doctest::Approx(0.5));
}

TEST_CASE("invalid meshes are rejected") {
    CHECK_THROWS(build_mesh(0, {}, {}));
    CHECK_THROWS(build_mesh(4, {1, 1, 1, 1}, {1, 1, 1, 1}));
    CHECK_THROWS(build_mesh(2, {2}, {1, 1}));
    CHECK_THROWS(build_mesh(1, {0}, {1}));
    CHECK_THROWS(build_mesh(1, {2}, {-1}));
}
