//! Exact lattice geometry: segment predicates, censuses and two area
//! formulas that must always agree.

use polydots::geometry::{
    interior_lattice_count, is_primitive, lattice_census, pick_area, point_in_cycle, segments_conflict, shoelace_area,
    LatticeCycle, LatticePoint, Segment,
};

fn main() {
    let long = Segment::of((0, 0), (6, 4));
    println!(
        "{long:?}: {} dot(s) strictly inside, primitive: {}",
        interior_lattice_count(&long),
        is_primitive(&long)
    );
    let a = Segment::of((0, 0), (1, 1));
    let b = Segment::of((0, 1), (1, 0));
    println!("the two diagonals of a unit square conflict: {}", segments_conflict(&a, &b));

    let shapes = [
        ("seven-gon", vec![(0, 1), (2, 3), (3, 1), (4, 4), (4, 0), (2, 0), (1, 1)]),
        ("octagon", vec![(0, 0), (1, 1), (0, 1), (1, 2), (0, 3), (2, 2), (3, 3), (2, 0)]),
        ("hexagon", vec![(4, 0), (2, 1), (0, 4), (4, 5), (8, 4), (6, 1)]),
    ];
    for (name, coords) in shapes {
        let c = LatticeCycle::from_coords(&coords).unwrap();
        let census = lattice_census(&c).unwrap();
        let (i, b) = (census.interior.len() as u64, census.boundary.len() as u64);
        println!(
            "{name}: B = {b}, I = {i}, Pick gives {}, shoelace gives {}",
            pick_area(i, b),
            shoelace_area(&c).unwrap()
        );
    }

    let quad = LatticeCycle::from_coords(&[(2, 0), (4, 3), (2, 4), (0, 3)]).unwrap();
    for p in [(2, 2), (3, 4), (4, 3), (0, 0)] {
        println!("{p:?} is {:?} the quadrilateral", point_in_cycle(LatticePoint::from(p), &quad));
    }
}
