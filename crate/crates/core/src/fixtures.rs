//! Reference regions shipped with the crate as JSON data.
//!
//! Each file holds an outer cycle, the segments drawn inside it, claimed
//! polygons, boundary edges not yet drawn, and optionally a few notable
//! moves. The files live in the crate's `fixtures/` directory and are
//! embedded at compile time.

use serde::{Deserialize, Serialize};

use crate::geometry::{LatticeCycle, LatticePoint, Segment};
use crate::shapes::{Region, ShapeError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SegmentData {
    pub from: [i32; 2],
    pub to: [i32; 2],
}

impl SegmentData {
    pub fn segment(&self) -> Result<Segment, ShapeError> {
        Segment::new(LatticePoint::from(self.from), LatticePoint::from(self.to)).map_err(ShapeError::from)
    }
}

/// The on-disk form of a region.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegionData {
    pub name: String,
    pub outer: Vec<[i32; 2]>,
    #[serde(default)]
    pub segments: Vec<SegmentData>,
    #[serde(default)]
    pub claimed: Vec<Vec<[i32; 2]>>,
    #[serde(default)]
    pub omitted: Vec<SegmentData>,
    #[serde(default)]
    pub moves: Vec<SegmentData>,
}

fn cycle(points: &[[i32; 2]]) -> Result<LatticeCycle, ShapeError> {
    Ok(LatticeCycle::new(points.iter().map(|&p| LatticePoint::from(p)).collect())?)
}

impl RegionData {
    pub fn region(&self) -> Result<Region, ShapeError> {
        let segments = self.segments.iter().map(SegmentData::segment).collect::<Result<Vec<_>, _>>()?;
        let claimed = self.claimed.iter().map(|c| cycle(c)).collect::<Result<Vec<_>, _>>()?;
        let omitted = self.omitted.iter().map(SegmentData::segment).collect::<Result<Vec<_>, _>>()?;
        Region::build(cycle(&self.outer)?, &segments, &claimed, &omitted)
    }

    pub fn moves(&self) -> Vec<Segment> {
        self.moves.iter().filter_map(|m| m.segment().ok()).collect()
    }

    pub fn from_region(name: &str, region: &Region) -> RegionData {
        let pair = |p: LatticePoint| [p.x, p.y];
        let seg = |s: &Segment| SegmentData { from: pair(s.a()), to: pair(s.b()) };
        RegionData {
            name: name.to_string(),
            outer: region.outer().vertices().iter().map(|&p| pair(p)).collect(),
            segments: region.interior_segments().iter().map(seg).collect(),
            claimed: region.claimed().iter().map(|c| c.vertices().iter().map(|&p| pair(p)).collect()).collect(),
            omitted: region.omitted().iter().map(seg).collect(),
            moves: Vec::new(),
        }
    }
}

const SOURCES: &[(&str, &str)] = &[
    ("fig2", include_str!("../fixtures/fig2.json")),
    ("fig5", include_str!("../fixtures/fig5.json")),
    ("fig7", include_str!("../fixtures/fig7.json")),
    ("fig8L", include_str!("../fixtures/fig8L.json")),
    ("fig8L-reduced", include_str!("../fixtures/fig8L-reduced.json")),
    ("fig8R", include_str!("../fixtures/fig8R.json")),
    ("fig10", include_str!("../fixtures/fig10.json")),
    ("fig11L", include_str!("../fixtures/fig11L.json")),
    ("fig11M", include_str!("../fixtures/fig11M.json")),
    ("fig11R", include_str!("../fixtures/fig11R.json")),
    ("fig12", include_str!("../fixtures/fig12.json")),
    ("fig13", include_str!("../fixtures/fig13.json")),
    ("fig14", include_str!("../fixtures/fig14.json")),
    ("fig15", include_str!("../fixtures/fig15.json")),
    ("fig16", include_str!("../fixtures/fig16.json")),
];

pub fn names() -> impl Iterator<Item = &'static str> {
    SOURCES.iter().map(|(n, _)| *n)
}

/// Parses the named fixture. Panics on an unknown name.
pub fn data(name: &str) -> RegionData {
    let (_, text) = SOURCES.iter().find(|(n, _)| *n == name).unwrap_or_else(|| panic!("no fixture named {name}"));
    serde_json::from_str(text).expect("fixture JSON is valid")
}

pub fn region(name: &str) -> Region {
    data(name).region().expect("fixture region is valid")
}

pub fn moves(name: &str) -> Vec<Segment> {
    data(name).moves()
}
