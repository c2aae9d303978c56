//! Monospaced text drawing of a position.
//!
//! Dots sit on a doubled grid. Unit segments (horizontal, vertical and
//! the two diagonals) are drawn in the gap between their endpoints; longer
//! primitive segments such as (0,0)-(2,1) cannot be drawn on the grid and
//! are listed under the picture instead. Row 0 is printed last so the
//! picture has y growing upwards.

use std::fmt::Write;

use crate::engine::{GameState, Player};
use crate::geometry::Segment;

pub fn render_text(state: &GameState) -> String {
    let board = state.board();
    let (w, h) = (board.width() as usize, board.height() as usize);
    let (cols, rows) = (2 * w - 1, 2 * h - 1);
    let mut grid = vec![vec![' '; cols]; rows];
    for y in 0..h {
        for x in 0..w {
            grid[2 * y][2 * x] = '.';
        }
    }
    let mut long = Vec::new();
    for s in state.drawn() {
        let (a, b) = (s.a(), s.b());
        let (dx, dy) = (b.x - a.x, b.y - a.y);
        let c = match (dx.abs(), dy.abs(), dx * dy) {
            (1, 0, _) => '-',
            (0, 1, _) => '|',
            (1, 1, p) if p > 0 => '/',
            (1, 1, _) => '\\',
            _ => {
                long.push(*s);
                continue;
            }
        };
        let (mx, my) = ((a.x + b.x) as usize, (a.y + b.y) as usize);
        let cell = &mut grid[my][mx];
        // Two unit diagonals of one square cannot both be drawn, so a
        // clash never happens; keep the first character anyway.
        if *cell == ' ' {
            *cell = c;
        }
    }
    for y in 0..h {
        for x in 0..w {
            if state.degree((x as i32, y as i32).into()) > 0 {
                grid[2 * y][2 * x] = 'o';
            }
        }
    }

    let mut out = String::new();
    for (r, row) in grid.iter().enumerate().rev() {
        let label = if r % 2 == 0 { format!("{:>2} ", r / 2) } else { "   ".to_string() };
        let line: String = row.iter().collect();
        let _ = writeln!(out, "{}", format!("{label}{line}").trim_end());
    }
    let mut axis = String::from("   ");
    for x in 0..w {
        let _ = write!(axis, "{:<2}", x % 10);
    }
    let _ = writeln!(out, "{}", axis.trim_end());
    if !long.is_empty() {
        let list: Vec<String> = long.iter().map(segment_text).collect();
        let _ = writeln!(out, "also drawn: {}", list.join(" "));
    }
    let (p1, p2) = state.scores();
    let _ = write!(out, "score {p1} : {p2}, ");
    if state.is_over() {
        let verdict = match p1.cmp(&p2) {
            std::cmp::Ordering::Greater => "first player wins",
            std::cmp::Ordering::Less => "second player wins",
            std::cmp::Ordering::Equal => "draw",
        };
        let _ = writeln!(out, "game over, {verdict}");
    } else {
        let who = match state.to_move() {
            Player::First => "first",
            Player::Second => "second",
        };
        let _ = writeln!(out, "{who} player to move");
    }
    out
}

/// `x1,y1-x2,y2`, the same form the move parser accepts.
pub fn segment_text(s: &Segment) -> String {
    format!("{},{}-{},{}", s.a().x, s.a().y, s.b().x, s.b().y)
}

/// Parses `x1,y1-x2,y2` (spaces allowed around the numbers).
pub fn parse_segment(text: &str) -> Option<Segment> {
    let (a, b) = text.trim().split_once('-')?;
    let point = |t: &str| -> Option<(i32, i32)> {
        let (x, y) = t.split_once(',')?;
        Some((x.trim().parse().ok()?, y.trim().parse().ok()?))
    };
    Segment::new(point(a)?, point(b)?).ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{BoardSpec, Variant};

    #[test]
    fn draws_unit_segments_and_lists_long_ones() {
        let mut g = GameState::new(BoardSpec::new(3, 2).unwrap(), Variant::Triangles);
        g.apply_move(Segment::of((0, 0), (1, 0))).unwrap();
        g.apply_move(Segment::of((0, 0), (1, 1))).unwrap();
        g.apply_move(Segment::of((0, 1), (2, 0))).unwrap_err();
        g.apply_move(Segment::of((1, 0), (2, 1))).unwrap();
        let text = render_text(&g);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], " 1 . o o");
        assert_eq!(lines[1], "    / /");
        assert_eq!(lines[2], " 0 o-o .");
        assert_eq!(lines[3], "   0 1 2");
    }

    #[test]
    fn long_segments_are_listed() {
        let mut g = GameState::new(BoardSpec::new(3, 2).unwrap(), Variant::Polygons);
        g.apply_move(Segment::of((0, 0), (2, 1))).unwrap();
        assert!(render_text(&g).contains("also drawn: 0,0-2,1"));
    }

    #[test]
    fn parses_moves() {
        assert_eq!(parse_segment("0,0-1,1"), Some(Segment::of((0, 0), (1, 1))));
        assert_eq!(parse_segment(" 2, 3 - 1,1 "), Some(Segment::of((2, 3), (1, 1))));
        assert_eq!(parse_segment("0,0-0,0"), None);
        assert_eq!(parse_segment("nonsense"), None);
    }
}
