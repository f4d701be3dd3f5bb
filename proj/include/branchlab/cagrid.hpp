#pragma once

// Binary cellular automata for the 3/2 map.
//
// Cells live on an absolute lattice: position j is the coefficient of 2^j.
//   syracuse mode:       row n holds V_n = 2 W_n 2^{e'_n}, and
//                        V_{n+1} = V_n + V_n / 2 + 2^{e'_n}
//                        i.e. the addition starts with a carry of 1 at e'_n.
//   rational_power mode: row n holds xi (3/2)^n, no carry injection.
// Row n of the syracuse grid is the embedded state S_n shifted so that its
// unit digit sits at e'_{n+1}.

#include "branchlab/carries.hpp"
#include "branchlab/numkernel.hpp"
#include "branchlab/syracuse.hpp"

#include <cstdint>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace branchlab {

enum class CaMode { syracuse, rational_power };

inline const char* to_string(CaMode m) {
    return m == CaMode::syracuse ? "syracuse" : "rational_power";
}

struct CaCell {
    std::uint8_t bit = 0;
    std::uint8_t carry = 0;
    bool operator==(const CaCell&) const = default;
};

struct CaRow {
    long offset = 0;  // lattice position of cells[0]
    long start = 0;   // position of the injected carry (e'_n); unused in rational_power mode
    long unit = 0;    // position of 2^0 of the represented sequence value
    std::vector<CaCell> cells;

    long top() const { return offset + static_cast<long>(cells.size()) - 1; }
    bool contains(long j) const { return j >= offset && j <= top(); }
    const CaCell& at(long j) const { return cells.at(static_cast<std::size_t>(j - offset)); }
    CaCell& at(long j) { return cells.at(static_cast<std::size_t>(j - offset)); }
    int bit(long j) const { return contains(j) ? at(j).bit : 0; }
};

struct CaGrid {
    CaMode mode = CaMode::syracuse;
    long base = 2;
    long frac_depth = 16;
    bool fraction_truncated = false;  // some row has set bits below the window
    std::vector<CaRow> rows;
    std::vector<ExactRational> values;  // the sequence value each row represents

    long lowest() const {
        long lo = rows.at(0).offset;
        for (const auto& r : rows) lo = std::min(lo, r.offset);
        return lo;
    }
    long highest() const {
        long hi = rows.at(0).top();
        for (const auto& r : rows) hi = std::max(hi, r.top());
        return hi;
    }
};

class TruncationError : public std::invalid_argument {
public:
    explicit TruncationError(long required)
        : std::invalid_argument("grid width too small: required width " + std::to_string(required)),
          required_(required) {}
    long required_width() const { return required_; }

private:
    long required_;
};

namespace detail {

inline long bit_length(const ExactRational& v) {
    const BigInt f = v.floor();
    return f <= 0 ? 0 : static_cast<long>(mpz_sizeinbase(f.get_mpz_t(), 2));
}

inline void fill_bits(CaRow& row, const ExactRational& value) {
    const auto d = digits_window(value, 2, row.offset, row.top());
    for (std::size_t i = 0; i < d.size(); ++i) row.cells[i].bit = static_cast<std::uint8_t>(d.digits[i]);
}

// Carries along the row for the addition x + x/2 (+ injected carry), and
// the next row's bits from the transition rule.
inline void evolve(const CaRow& cur, CaRow& next, int carry_in_lowest, bool inject) {
    int carry = carry_in_lowest;
    auto& cells = const_cast<CaRow&>(cur).cells;
    for (long j = cur.offset; j <= cur.top(); ++j) {
        if (inject && j == cur.start) carry = 1;
        cells[static_cast<std::size_t>(j - cur.offset)].carry = static_cast<std::uint8_t>(carry);
        const int sum = cur.bit(j + 1) + cur.bit(j) + carry;
        if (next.contains(j)) next.at(j).bit = static_cast<std::uint8_t>(sum % 2);
        carry = sum / 2;
    }
}

}  // namespace detail

inline CaGrid build_syracuse(const BigInt& w0, std::size_t rows, long width = 0, long frac_depth = 16) {
    if (rows == 0) throw std::invalid_argument("ca build: rows must be >= 1");
    if (width != 0 && width < 4) throw std::invalid_argument("ca build: width must be >= 4 (or 0 for auto)");
    if (frac_depth < 0) throw std::invalid_argument("ca build: frac_depth must be >= 0");
    const auto t = trajectory(w0, rows, rows);
    CaGrid g;
    g.mode = CaMode::syracuse;
    g.frac_depth = frac_depth;
    std::vector<long> starts;
    for (std::size_t n = 0; n < rows; ++n) {
        const auto& st = t.steps.at(n);
        BigInt v = 2 * st.w;
        mpz_mul_2exp(v.get_mpz_t(), v.get_mpz_t(), st.e_prime);
        g.values.emplace_back(v);
        starts.push_back(static_cast<long>(st.e_prime));
    }
    long required = 4;
    for (const auto& v : g.values) required = std::max(required, detail::bit_length(v) + 1);
    if (width == 0) width = required;
    if (width < required) throw TruncationError(required);

    for (std::size_t n = 0; n < rows; ++n) {
        CaRow r;
        r.offset = -frac_depth;
        r.start = starts[n];
        r.unit = starts[n] + static_cast<long>(t.next_h(n));
        r.cells.resize(static_cast<std::size_t>(width + frac_depth));
        g.rows.push_back(std::move(r));
    }
    detail::fill_bits(g.rows[0], g.values[0]);
    for (std::size_t n = 0; n < rows; ++n) {
        CaRow scratch = g.rows[n];
        CaRow& next = n + 1 < rows ? g.rows[n + 1] : scratch;
        detail::evolve(g.rows[n], next, 0, true);
    }
    for (std::size_t n = 0; n < rows; ++n) {
        const auto d = digits_window(g.values[n], 2, g.rows[n].offset, g.rows[n].top());
        for (long j = g.rows[n].offset; j <= g.rows[n].top(); ++j)
            if (g.rows[n].bit(j) != d.at(j))
                throw InternalError("syracuse grid row " + std::to_string(n) + " disagrees with its value");
    }
    return g;
}

inline CaGrid build_rational(const ExactRational& xi, std::size_t rows, long width = 0, long frac_depth = 16) {
    if (rows == 0) throw std::invalid_argument("ca build: rows must be >= 1");
    if (width != 0 && width < 4) throw std::invalid_argument("ca build: width must be >= 4 (or 0 for auto)");
    if (frac_depth < 0) throw std::invalid_argument("ca build: frac_depth must be >= 0");
    if (xi.sign() <= 0) throw std::invalid_argument("ca build: xi must be positive");
    CaGrid g;
    g.mode = CaMode::rational_power;
    g.frac_depth = frac_depth;
    ExactRational v = xi;
    for (std::size_t n = 0; n < rows; ++n) {
        g.values.push_back(v);
        v = v * ExactRational(3, 2);
    }
    long required = 4;
    for (const auto& x : g.values) required = std::max(required, detail::bit_length(x) + 1);
    if (width == 0) width = required;
    if (width < required) throw TruncationError(required);

    const CarryParams cp{3, 2, 1, 1};
    for (std::size_t n = 0; n < rows; ++n) {
        CaRow r;
        r.offset = -frac_depth;
        r.cells.resize(static_cast<std::size_t>(width + frac_depth));
        if (!scale(g.values[n], 2, -frac_depth).is_integer()) g.fraction_truncated = true;
        g.rows.push_back(std::move(r));
    }
    detail::fill_bits(g.rows[0], g.values[0]);
    for (std::size_t n = 0; n < rows; ++n) {
        CaRow scratch = g.rows[n];
        CaRow& next = n + 1 < rows ? g.rows[n + 1] : scratch;
        detail::evolve(g.rows[n], next, carry_at(g.values[n], cp, g.rows[n].offset), false);
    }
    for (std::size_t n = 0; n < rows; ++n) {
        const auto d = digits_window(g.values[n], 2, g.rows[n].offset, g.rows[n].top());
        for (long j = g.rows[n].offset; j <= g.rows[n].top(); ++j)
            if (g.rows[n].bit(j) != d.at(j))
                throw InternalError("rational grid row " + std::to_string(n) + " disagrees with its value");
    }
    return g;
}

inline CaGrid build(CaMode mode, const ExactRational& seed, std::size_t rows, long width = 0,
                    long frac_depth = 16) {
    if (mode == CaMode::syracuse) {
        if (!seed.is_integer() || seed.sign() <= 0 || mpz_even_p(seed.numerator().get_mpz_t()))
            throw std::invalid_argument("ca build: syracuse seed must be an odd positive integer");
        return build_syracuse(seed.numerator(), rows, width, frac_depth);
    }
    return build_rational(seed, rows, width, frac_depth);
}

// Counts interior cells where the transition rule or the carry recurrence
// fails between consecutive rows.
inline std::size_t transition_violations(const CaGrid& g) {
    std::size_t bad = 0;
    for (std::size_t n = 0; n + 1 < g.rows.size(); ++n) {
        const auto& cur = g.rows[n];
        const auto& nxt = g.rows[n + 1];
        for (long j = cur.offset; j < cur.top(); ++j) {
            const int sum = cur.bit(j + 1) + cur.bit(j) + cur.at(j).carry;
            if (nxt.contains(j) && nxt.at(j).bit != sum % 2) ++bad;
            if (cur.at(j + 1).carry != sum / 2 &&
                !(g.mode == CaMode::syracuse && j + 1 == cur.start))
                ++bad;
        }
        if (g.mode == CaMode::syracuse && cur.contains(cur.start) && cur.at(cur.start).carry != 1) ++bad;
    }
    return bad;
}

// ---------------------------------------------------------------------------
// Gray code

inline CaGrid gray(const CaGrid& g) {
    CaGrid out = g;
    for (auto& row : out.rows) {
        const CaRow& src = g.rows[static_cast<std::size_t>(&row - out.rows.data())];
        for (long j = row.offset; j <= row.top(); ++j)
            row.at(j).bit = static_cast<std::uint8_t>(src.bit(j + 1) ^ src.bit(j));
    }
    return out;
}

// Prefix XOR from the top of each row's window.
inline CaGrid gray_inverse(const CaGrid& g) {
    CaGrid out = g;
    for (auto& row : out.rows) {
        int above = 0;
        for (long j = row.top(); j >= row.offset; --j) {
            above ^= row.at(j).bit;
            row.at(j).bit = static_cast<std::uint8_t>(above);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Overlay

enum class OverlayClass : std::uint8_t { identical, integer_perturbation, fractional_perturbation, outside };

struct OverlayGrid {
    long lo = 0;
    long hi = 0;
    std::vector<std::vector<OverlayClass>> cells;  // [row][hi - j]
    std::vector<std::vector<std::uint8_t>> bits;   // perturbed bit, same layout

    OverlayClass at(std::size_t n, long j) const { return cells.at(n).at(static_cast<std::size_t>(hi - j)); }
    std::size_t width() const { return static_cast<std::size_t>(hi - lo + 1); }
};

inline OverlayGrid overlay(const CaGrid& reference, const CaGrid& perturbed) {
    if (reference.rows.size() != perturbed.rows.size())
        throw std::invalid_argument("overlay: row counts differ");
    if (reference.base != perturbed.base) throw std::invalid_argument("overlay: bases differ");
    OverlayGrid o;
    o.lo = std::min(reference.lowest(), perturbed.lowest());
    o.hi = std::max(reference.highest(), perturbed.highest());
    for (std::size_t n = 0; n < perturbed.rows.size(); ++n) {
        const auto& a = reference.rows[n];
        const auto& b = perturbed.rows[n];
        std::vector<OverlayClass> line;
        std::vector<std::uint8_t> bits;
        for (long j = o.hi; j >= o.lo; --j) {
            bits.push_back(static_cast<std::uint8_t>(b.bit(j)));
            if (!a.contains(j) || !b.contains(j))
                line.push_back(OverlayClass::outside);
            else if (a.bit(j) == b.bit(j))
                line.push_back(OverlayClass::identical);
            else
                line.push_back(j >= b.unit ? OverlayClass::integer_perturbation
                                           : OverlayClass::fractional_perturbation);
        }
        o.cells.push_back(std::move(line));
        o.bits.push_back(std::move(bits));
    }
    return o;
}

// Reference automaton for the overlay of a syracuse grid: the 3/2 powers of
// 2 W_0 on the same lattice.
inline CaGrid rational_reference(const CaGrid& syr, const BigInt& w0) {
    const long width = syr.highest() + 1;
    CaGrid ref = build_rational(ExactRational(2 * w0), syr.rows.size(), 0, syr.frac_depth);
    if (ref.highest() + 1 < width) ref = build_rational(ExactRational(2 * w0), syr.rows.size(), width, syr.frac_depth);
    for (std::size_t n = 0; n < ref.rows.size(); ++n) ref.rows[n].unit = syr.rows[n].unit;
    return ref;
}

// ---------------------------------------------------------------------------
// Rendering

enum class RenderFormat { text, pbm, svg };

inline RenderFormat parse_render_format(const std::string& s) {
    if (s == "text") return RenderFormat::text;
    if (s == "pbm") return RenderFormat::pbm;
    if (s == "svg") return RenderFormat::svg;
    throw std::invalid_argument("unknown render format '" + s + "' (text | pbm | svg)");
}

struct RenderOptions {
    bool carries = false;  // text only: second line per row with carry cells
    int svg_scale = 4;
};

// Rectangular bit matrix with the most significant position on the left.
inline std::vector<std::vector<std::uint8_t>> rectangular_bits(const CaGrid& g) {
    const long lo = g.lowest(), hi = g.highest();
    std::vector<std::vector<std::uint8_t>> m;
    for (const auto& r : g.rows) {
        std::vector<std::uint8_t> line;
        for (long j = hi; j >= lo; --j) line.push_back(static_cast<std::uint8_t>(r.bit(j)));
        m.push_back(std::move(line));
    }
    return m;
}

// Grid from a display-order bit matrix (row 0 first, leftmost cell most
// significant). Used for fixed rendering fixtures.
inline CaGrid grid_from_bits(const std::vector<std::vector<int>>& display) {
    if (display.empty()) throw std::invalid_argument("grid_from_bits: at least one row required");
    CaGrid g;
    g.frac_depth = 0;
    for (const auto& line : display) {
        CaRow r;
        r.offset = 0;
        for (auto it = line.rbegin(); it != line.rend(); ++it) r.cells.push_back({static_cast<std::uint8_t>(*it != 0), 0});
        g.rows.push_back(std::move(r));
        g.values.emplace_back(0);
    }
    return g;
}

namespace detail {

inline std::size_t emit(std::ostream& os, const std::string& s) {
    os << s;
    if (!os) throw std::runtime_error("render: write to sink failed");
    return s.size();
}

inline std::string pbm_from(const std::vector<std::vector<std::uint8_t>>& m) {
    std::string s = "P1\n" + std::to_string(m.empty() ? 0 : m[0].size()) + " " + std::to_string(m.size()) + "\n";
    for (const auto& line : m) {
        for (std::size_t i = 0; i < line.size(); ++i) {
            if (i) s += ' ';
            s += line[i] ? '1' : '0';
        }
        s += '\n';
    }
    return s;
}

inline std::string svg_header(std::size_t w, std::size_t h, int scale) {
    std::ostringstream os;
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
       << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << w * scale
       << "\" height=\"" << h * scale << "\" viewBox=\"0 0 " << w << " " << h << "\">\n"
       << "<rect x=\"0\" y=\"0\" width=\"" << w << "\" height=\"" << h << "\" fill=\"#ffffff\"/>\n";
    return os.str();
}

inline std::string svg_rect(std::size_t x, std::size_t y, const char* fill) {
    return "<rect x=\"" + std::to_string(x) + "\" y=\"" + std::to_string(y) +
           "\" width=\"1\" height=\"1\" fill=\"" + fill + "\"/>\n";
}

}  // namespace detail

inline std::size_t render(const CaGrid& g, RenderFormat fmt, std::ostream& os, const RenderOptions& opt = {}) {
    if (g.rows.empty()) throw std::invalid_argument("render: empty grid");
    const auto m = rectangular_bits(g);
    std::string s;
    switch (fmt) {
        case RenderFormat::text: {
            const long lo = g.lowest(), hi = g.highest();
            for (const auto& r : g.rows) {
                for (long j = hi; j >= lo; --j) s += r.bit(j) ? '#' : '.';
                s += '\n';
                if (opt.carries) {
                    for (long j = hi; j >= lo; --j) s += (r.contains(j) && r.at(j).carry) ? "¹" : "·";
                    s += '\n';
                }
            }
            break;
        }
        case RenderFormat::pbm: s = detail::pbm_from(m); break;
        case RenderFormat::svg: {
            s = detail::svg_header(m[0].size(), m.size(), opt.svg_scale);
            for (std::size_t y = 0; y < m.size(); ++y)
                for (std::size_t x = 0; x < m[y].size(); ++x)
                    if (m[y][x]) s += detail::svg_rect(x, y, "#000000");
            s += "</svg>\n";
            break;
        }
    }
    return detail::emit(os, s);
}

inline const char* overlay_color(OverlayClass c) {
    switch (c) {
        case OverlayClass::identical: return "#cccccc";
        case OverlayClass::integer_perturbation: return "#d62728";
        case OverlayClass::fractional_perturbation: return "#1f77b4";
        case OverlayClass::outside: return "#ffffff";
    }
    return "#ffffff";
}

// Identical cells are drawn where the bit is set; every differing cell is drawn.
inline std::size_t render(const OverlayGrid& o, RenderFormat fmt, std::ostream& os, const RenderOptions& opt = {}) {
    if (o.cells.empty()) throw std::invalid_argument("render: empty overlay");
    std::string s;
    switch (fmt) {
        case RenderFormat::text:
            for (std::size_t n = 0; n < o.cells.size(); ++n) {
                for (std::size_t x = 0; x < o.cells[n].size(); ++x) {
                    switch (o.cells[n][x]) {
                        case OverlayClass::identical: s += o.bits[n][x] ? '#' : '.'; break;
                        case OverlayClass::integer_perturbation: s += 'I'; break;
                        case OverlayClass::fractional_perturbation: s += 'f'; break;
                        case OverlayClass::outside: s += ' '; break;
                    }
                }
                s += '\n';
            }
            break;
        case RenderFormat::pbm: {
            std::vector<std::vector<std::uint8_t>> m;
            for (const auto& line : o.cells) {
                std::vector<std::uint8_t> b;
                for (auto c : line)
                    b.push_back(c == OverlayClass::integer_perturbation || c == OverlayClass::fractional_perturbation);
                m.push_back(std::move(b));
            }
            s = detail::pbm_from(m);
            break;
        }
        case RenderFormat::svg:
            s = detail::svg_header(o.width(), o.cells.size(), opt.svg_scale);
            for (std::size_t y = 0; y < o.cells.size(); ++y)
                for (std::size_t x = 0; x < o.cells[y].size(); ++x) {
                    const auto c = o.cells[y][x];
                    if (c == OverlayClass::outside) continue;
                    if (c == OverlayClass::identical && !o.bits[y][x]) continue;
                    s += detail::svg_rect(x, y, overlay_color(c));
                }
            s += "</svg>\n";
            break;
    }
    return detail::emit(os, s);
}

}  // namespace branchlab
