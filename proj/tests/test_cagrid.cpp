#include "support.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace branchlab;

namespace {

ExactRational R(long a, long b = 1) { return ExactRational(a, b); }

std::string row_string(const CaRow& r, long hi, long lo) {
    std::string s;
    for (long j = hi; j >= lo; --j) s += r.bit(j) ? '1' : '0';
    return s;
}

std::string rendered(const CaGrid& g, RenderFormat f, RenderOptions o = {}) {
    std::ostringstream os;
    const auto n = render(g, f, os, o);
    EXPECT_EQ(n, os.str().size());
    return os.str();
}

// Row oracle: bits against digits of the value, recomputed by long division.
void expect_rows_match(const CaGrid& g) {
    for (std::size_t n = 0; n < g.rows.size(); ++n)
        for (long j = g.rows[n].offset; j <= g.rows[n].top(); ++j)
            ASSERT_EQ(g.rows[n].bit(j), oracle::digit(g.values[n], 2, j)) << "row " << n << " j " << j;
}

}  // namespace

TEST(CaBuild, SyracuseSevenRowZeroIsFourteen) {
    const auto g = build(CaMode::syracuse, R(7), 6, 32);
    ASSERT_EQ(g.rows.size(), 6u);
    EXPECT_EQ(row_string(g.rows[0], 4, 0), "01110");
    EXPECT_EQ(g.values[0], R(14));
    expect_rows_match(g);
    EXPECT_EQ(transition_violations(g), 0u);
}

// Row n holds S_n with its unit digit at e'_{n+1}.
TEST(CaBuild, SyracuseRowsAreShiftedStates) {
    const auto t = trajectory(7ul);
    const auto g = build_syracuse(BigInt(7), 6, 32);
    for (std::size_t n = 0; n < 6; ++n) {
        const long unit = g.rows[n].unit;
        EXPECT_EQ(scale(g.values[n], 2, unit), embedded_state(t, n)) << n;
        EXPECT_EQ(g.rows[n].at(g.rows[n].start).carry, 1) << n;
    }
}

TEST(CaBuild, RationalPowerRows) {
    const auto g = build(CaMode::rational_power, R(14), 3, 32);
    EXPECT_EQ(g.values, (std::vector<ExactRational>{R(14), R(21), R(63, 2)}));
    expect_rows_match(g);
    EXPECT_EQ(transition_violations(g), 0u);
    EXPECT_EQ(row_string(g.rows[2], 5, -1), "0111111");
}

TEST(CaBuild, UnitSeedRowsAreConstantFromTheirStart) {
    const auto g = build(CaMode::syracuse, R(1), 8, 16);
    const auto& r0 = g.rows[0];
    for (const auto& r : g.rows)
        for (long d = -2; d < 6; ++d) EXPECT_EQ(r.bit(r.start + d), r0.bit(r0.start + d));
}

TEST(CaBuild, Errors) {
    EXPECT_THROW(build(CaMode::syracuse, R(7), 0, 32), std::invalid_argument);
    EXPECT_THROW(build(CaMode::syracuse, R(7), 4, 3), std::invalid_argument);
    EXPECT_THROW(build(CaMode::syracuse, R(8), 4, 32), std::invalid_argument);
    try {
        build(CaMode::syracuse, R(27), 40, 8);
        FAIL() << "expected TruncationError";
    } catch (const TruncationError& e) {
        EXPECT_GT(e.required_width(), 8);
        EXPECT_NO_THROW(build(CaMode::syracuse, R(27), 40, e.required_width()));
    }
}

TEST(CaBuild, FractionTruncationFlagged) {
    EXPECT_FALSE(build(CaMode::syracuse, R(27), 30, 0).fraction_truncated);
    EXPECT_TRUE(build(CaMode::rational_power, R(14), 30, 0, 8).fraction_truncated);
}

TEST(CaBuild, CarriesMatchClosedForm) {
    const auto g = build_rational(R(27), 40, 0, 16);
    const CarryParams cp{3, 2, 1, 1};
    for (std::size_t n = 0; n < g.rows.size(); ++n)
        for (long j = g.rows[n].offset; j <= g.rows[n].top(); ++j)
            ASSERT_EQ(g.rows[n].at(j).carry, carry_at(g.values[n], cp, j)) << n << " " << j;
}

TEST(Gray, HandValues) {
    const auto g = gray(build(CaMode::syracuse, R(7), 1, 8));
    EXPECT_EQ(row_string(g.rows[0], 4, 0), "01001");
    const auto b = gray(grid_from_bits({{1, 0, 1, 1}}));
    EXPECT_EQ(row_string(b.rows[0], 3, 0), "1110");
    const auto z = gray(grid_from_bits({{0, 0, 0, 0}}));
    EXPECT_EQ(row_string(z.rows[0], 3, 0), "0000");
}

TEST(Gray, InverseRecoversBitsAndCarriesPassThrough) {
    for (unsigned long w : {7ul, 27ul, 97ul}) {
        const auto g = build_syracuse(BigInt(w), 60);
        const auto gg = gray(g);
        const auto back = gray_inverse(gg);
        for (std::size_t n = 0; n < g.rows.size(); ++n) {
            EXPECT_EQ(back.rows[n].cells, g.rows[n].cells);
            for (long j = g.rows[n].offset; j <= g.rows[n].top(); ++j)
                EXPECT_EQ(gg.rows[n].at(j).carry, g.rows[n].at(j).carry);
        }
    }
}

TEST(Overlay, SevenRowOneIsIntegerPerturbation) {
    const auto syr = build_syracuse(BigInt(7), 6);
    const auto ref = rational_reference(syr, BigInt(7));
    EXPECT_EQ(ref.values[1], R(21));
    EXPECT_EQ(syr.values[1], R(22));
    const auto o = overlay(ref, syr);
    EXPECT_EQ(o.at(1, 0), OverlayClass::integer_perturbation);
    EXPECT_EQ(o.at(1, 1), OverlayClass::integer_perturbation);
    EXPECT_EQ(o.at(1, 2), OverlayClass::identical);
    for (long j = o.lo; j <= o.hi; ++j) EXPECT_EQ(o.at(0, j), OverlayClass::identical);
}

TEST(Overlay, FractionalCellsBelowTheUnit) {
    const auto syr = build_syracuse(BigInt(7), 6);
    const auto o = overlay(rational_reference(syr, BigInt(7)), syr);
    bool seen = false;
    for (std::size_t n = 0; n < o.cells.size(); ++n)
        for (long j = o.lo; j <= o.hi; ++j)
            if (o.at(n, j) == OverlayClass::fractional_perturbation) {
                seen = true;
                EXPECT_LT(j, syr.rows[n].unit);
            }
    EXPECT_TRUE(seen);
}

TEST(Overlay, Reflexive) {
    const auto g = build_syracuse(BigInt(27), 30);
    const auto o = overlay(g, g);
    for (const auto& line : o.cells)
        for (auto c : line) EXPECT_EQ(c, OverlayClass::identical);
}

TEST(Overlay, OutsideWhereWindowsDiffer) {
    const auto a = build_syracuse(BigInt(7), 3, 12, 2);
    const auto b = build_syracuse(BigInt(7), 3, 16, 2);
    const auto o = overlay(a, b);
    EXPECT_EQ(o.at(0, 15), OverlayClass::outside);
    EXPECT_EQ(o.at(0, 3), OverlayClass::identical);
    EXPECT_THROW(overlay(a, build_syracuse(BigInt(7), 4)), std::invalid_argument);
}

TEST(Render, PbmExactBytes) {
    const auto g = grid_from_bits({{1, 0}, {0, 1}});
    EXPECT_EQ(rendered(g, RenderFormat::pbm), "P1\n2 2\n1 0\n0 1\n");
}

TEST(Render, TextCells) {
    const auto g = build_syracuse(BigInt(7), 2, 6, 0);
    EXPECT_EQ(rendered(g, RenderFormat::text), "..###.\n.#.##.\n");
    RenderOptions o;
    o.carries = true;
    const auto with = rendered(g, RenderFormat::text, o);
    EXPECT_EQ(with.substr(0, 7), "..###.\n");
    EXPECT_NE(with.find("\u00b9"), std::string::npos);
}

TEST(Render, SvgOneRectPerSetCell) {
    const auto g = grid_from_bits({{1, 0, 1}, {0, 1, 0}});
    const auto s = rendered(g, RenderFormat::svg);
    std::size_t rects = 0;
    for (std::size_t p = s.find("fill=\"#000000\""); p != std::string::npos; p = s.find("fill=\"#000000\"", p + 1))
        ++rects;
    EXPECT_EQ(rects, 3u);
    EXPECT_EQ(s.rfind("</svg>\n"), s.size() - 7);
}

TEST(Render, OverlaySvgColors) {
    const auto syr = build_syracuse(BigInt(7), 6);
    std::ostringstream os;
    render(overlay(rational_reference(syr, BigInt(7)), syr), RenderFormat::svg, os);
    const auto s = os.str();
    EXPECT_NE(s.find("#cccccc"), std::string::npos);
    EXPECT_NE(s.find("#d62728"), std::string::npos);
    EXPECT_NE(s.find("#1f77b4"), std::string::npos);
}

TEST(Render, DeterministicAcrossRuns) {
    const auto a = rendered(gray(build_syracuse(BigInt(27), 120)), RenderFormat::pbm);
    const auto b = rendered(gray(build_syracuse(BigInt(27), 120)), RenderFormat::pbm);
    EXPECT_EQ(a, b);
}

TEST(Render, SinkFailurePropagates) {
    std::ostringstream os;
    os.setstate(std::ios::badbit);
    EXPECT_THROW(render(grid_from_bits({{1}}), RenderFormat::pbm, os), std::runtime_error);
}

TEST(Render, FormatNames) {
    EXPECT_EQ(parse_render_format("svg"), RenderFormat::svg);
    EXPECT_THROW(parse_render_format("png"), std::invalid_argument);
}
