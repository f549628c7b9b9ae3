#pragma once

#include <array>
#include <cassert>
#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>

#include "evo2048/rng.hpp"

namespace evo2048 {

using Tile = std::uint32_t;

// 2^17 is the theoretical maximum tile on a 4x4 board when 4s can spawn.
inline constexpr Tile kMaxTileValue = 1u << 17;

enum class Direction : int { Up = 0, Right = 1, Down = 2, Left = 3 };

inline constexpr std::array<Direction, 4> kAllDirections = {
    Direction::Up, Direction::Right, Direction::Down, Direction::Left};

// Cyclic rotation UP -> RIGHT -> DOWN -> LEFT -> UP, applied k times.
inline Direction rotate_direction(Direction d, int k = 1) {
    return static_cast<Direction>((static_cast<int>(d) + k) % 4);
}

inline const char* direction_name(Direction d) {
    switch (d) {
        case Direction::Up: return "UP";
        case Direction::Right: return "RIGHT";
        case Direction::Down: return "DOWN";
        case Direction::Left: return "LEFT";
    }
    return "?";
}

inline bool parse_direction(const std::string& s, Direction& out) {
    for (Direction d : kAllDirections) {
        if (s == direction_name(d)) {
            out = d;
            return true;
        }
    }
    return false;
}

// 4x4 board, row-major. Cell value 0 means empty, otherwise a power of two.
struct Board {
    std::array<Tile, 16> cells{};

    Tile& at(int row, int col) { return cells[row * 4 + col]; }
    Tile at(int row, int col) const { return cells[row * 4 + col]; }

    bool operator==(const Board&) const = default;

    int empty_count() const {
        int n = 0;
        for (Tile t : cells) n += (t == 0);
        return n;
    }

    Tile max_tile() const {
        Tile m = 0;
        for (Tile t : cells) m = t > m ? t : m;
        return m;
    }

    std::int64_t tile_sum() const {
        std::int64_t s = 0;
        for (Tile t : cells) s += t;
        return s;
    }

    bool valid() const {
        for (Tile t : cells) {
            if (t == 0) continue;
            if (t < 2 || t > kMaxTileValue || (t & (t - 1)) != 0) return false;
        }
        return true;
    }

    // 90 degrees clockwise; (r,c) -> (c, 3-r).
    Board rotated_cw() const {
        Board out;
        for (int r = 0; r < 4; ++r)
            for (int c = 0; c < 4; ++c) out.at(c, 3 - r) = at(r, c);
        return out;
    }

    // 16 integers, row-major, space-separated.
    std::string to_text() const {
        std::ostringstream os;
        for (int i = 0; i < 16; ++i) {
            if (i) os << ' ';
            os << cells[i];
        }
        return os.str();
    }

    static bool from_text(const std::string& text, Board& out) {
        std::istringstream is(text);
        Board b;
        for (int i = 0; i < 16; ++i) {
            long long v;
            if (!(is >> v) || v < 0) return false;
            b.cells[i] = static_cast<Tile>(v);
        }
        long long extra;
        if (is >> extra) return false;
        if (!b.valid()) return false;
        out = b;
        return true;
    }
};

struct MoveOutcome {
    Board board_after;
    std::int64_t score_gain = 0;
    bool changed = false;
    int merges = 0;
};

struct GameResult {
    std::int64_t total_score = 0;
    Tile highest_tile = 0;
    int moves = 0;
    bool reached_2048 = false;
    std::uint64_t seed = 0;
};

using Row = std::array<Tile, 4>;

struct RowMerge {
    Row row;
    std::int64_t gain;
    int merges;
};

// Compact toward index 0, merging each adjacent equal pair once, scanned
// from index 0. Gain is the sum of the merged-tile results.
inline RowMerge shift_merge_row(const Row& in) {
    Row packed{};
    int n = 0;
    for (Tile t : in)
        if (t != 0) packed[n++] = t;

    RowMerge out{{}, 0, 0};
    int w = 0;
    for (int i = 0; i < n; ++i) {
        if (i + 1 < n && packed[i] == packed[i + 1]) {
            const Tile merged = packed[i] * 2;
            out.row[w++] = merged;
            out.gain += merged;
            out.merges += 1;
            ++i;
        } else {
            out.row[w++] = packed[i];
        }
    }
    return out;
}

namespace detail {

// Cell indices of the four lines for a direction, each ordered so that
// index 0 is the edge the tiles slide toward.
inline const std::array<std::array<int, 4>, 4>& line_indices(Direction d) {
    static const std::array<std::array<std::array<int, 4>, 4>, 4> tables = [] {
        std::array<std::array<std::array<int, 4>, 4>, 4> t{};
        for (int i = 0; i < 4; ++i) {
            for (int j = 0; j < 4; ++j) {
                t[static_cast<int>(Direction::Left)][i][j] = i * 4 + j;
                t[static_cast<int>(Direction::Right)][i][j] = i * 4 + (3 - j);
                t[static_cast<int>(Direction::Up)][i][j] = j * 4 + i;
                t[static_cast<int>(Direction::Down)][i][j] = (3 - j) * 4 + i;
            }
        }
        return t;
    }();
    return tables[static_cast<int>(d)];
}

}  // namespace detail

inline MoveOutcome apply_move(const Board& board, Direction dir) {
    MoveOutcome out;
    out.board_after = board;
    const auto& lines = detail::line_indices(dir);
    for (const auto& line : lines) {
        Row row{board.cells[line[0]], board.cells[line[1]],
                board.cells[line[2]], board.cells[line[3]]};
        const RowMerge merged = shift_merge_row(row);
        out.score_gain += merged.gain;
        out.merges += merged.merges;
        for (int j = 0; j < 4; ++j) out.board_after.cells[line[j]] = merged.row[j];
    }
    out.changed = out.board_after != board;
    return out;
}

struct LegalMoves {
    std::array<bool, 4> legal{};

    bool contains(Direction d) const { return legal[static_cast<int>(d)]; }
    bool empty() const { return !legal[0] && !legal[1] && !legal[2] && !legal[3]; }
    int count() const { return legal[0] + legal[1] + legal[2] + legal[3]; }
};

inline LegalMoves legal_moves(const Board& board) {
    LegalMoves out;
    for (Direction d : kAllDirections)
        out.legal[static_cast<int>(d)] = apply_move(board, d).changed;
    return out;
}

inline bool is_game_over(const Board& board) { return legal_moves(board).empty(); }

// Fills one uniformly chosen empty cell with 2 (p = 0.9) or 4 (p = 0.1).
inline Board spawn_tile(const Board& board, RandomStream& rng) {
    const int empties = board.empty_count();
    if (empties == 0)
        throw std::logic_error("spawn_tile: board is full (internal error)");
    int target = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(empties)));
    const Tile value = rng.next_below(10) < 9 ? 2 : 4;
    Board out = board;
    for (Tile& cell : out.cells) {
        if (cell != 0) continue;
        if (target-- == 0) {
            cell = value;
            break;
        }
    }
    return out;
}

inline Board new_game(RandomStream& rng) {
    Board b;
    b = spawn_tile(b, rng);
    b = spawn_tile(b, rng);
    return b;
}

}  // namespace evo2048
