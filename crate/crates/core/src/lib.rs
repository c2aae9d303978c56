//! Exact engine for the lattice games Dots-and-Triangles and
//! Dots-and-Polygons.
//!
//! Two players alternately draw primitive segments between dots of a
//! rectangular lattice. Closing a claimable region (a unit-area-half
//! triangle, or in the polygon variant any simple polygon with no lines
//! inside) scores its area and grants another move.
//!
//! The crate is organised bottom-up:
//!
//! * [`geometry`]: integer predicates, lattice censuses, Pick's formula.
//! * [`engine`]: game state, legality, face tracking, claiming, records.
//! * [`shapes`]: region taxonomy (reduced shapes, eyes, irises) and
//!   constructive claiming procedures.
//! * [`strategy`]: move choosers and an exact memoised solver.
//! * [`simulate`]: strategy-versus-strategy matches.
//! * [`verify`]: reproducible checks of the game's structural theorems.
//! * [`fixtures`]: the reference regions used throughout the tests.
//! * [`render`]: a monospaced text picture of a position.
//!
//! ```
//! use polydots::engine::{BoardSpec, GameState, Variant};
//! use polydots::geometry::{HalfArea, Segment};
//!
//! let mut game = GameState::new(BoardSpec::new(2, 2).unwrap(), Variant::Triangles);
//! game.apply_move(Segment::of((0, 0), (1, 0))).unwrap();
//! game.apply_move(Segment::of((0, 0), (1, 1))).unwrap();
//! let outcome = game.apply_move(Segment::of((1, 0), (1, 1))).unwrap();
//! assert_eq!(outcome.claimed_area(), HalfArea::from_halves(1));
//! assert!(outcome.extra_turn);
//! ```

pub mod engine;
pub mod fixtures;
pub mod geometry;
pub mod record;
pub mod render;
pub mod shapes;
pub mod simulate;
pub mod strategy;
pub mod verify;

pub use engine::{BoardSpec, GameState, IllegalMove, MoveOutcome, Player, Variant};
pub use geometry::{HalfArea, LatticeCycle, LatticePoint, Segment};
