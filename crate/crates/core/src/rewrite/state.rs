//! Mutable colored-diagram state for the move calculus.
//!
//! Crossings and edges live in maps with stable, monotonically allocated ids,
//! so a serialized move sequence replays to bit-identical states. Colors are
//! stored per edge; arc consistency (equal colors across over-strand
//! passages) and the Fox relation are re-checked after every move.

use crate::coloring::FoxColoring;
use crate::diagram::Diagram;
use crate::modp::Prime;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MoveError {
    #[error("bad site: {0}")]
    BadSite(String),
    #[error("move would break the diagram: {0}")]
    Structure(String),
    #[error("coloring became invalid: {0}")]
    Color(String),
    #[error("move budget exhausted")]
    BudgetExhausted,
    #[error("no admissible route: {0}")]
    NoRoute(String),
    #[error("precondition not met: {0}")]
    Precondition(String),
}

/// A slot of a crossing in the mutable state: `(crossing id, position 0..4)`.
pub type SDart = (u32, u8);

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ColoredState {
    pub p: Prime,
    pub crossings: BTreeMap<u32, [u32; 4]>,
    pub colors: BTreeMap<u32, u32>,
    pub next_edge: u32,
    pub next_crossing: u32,
    /// Color of the zero-crossing unknot when no crossings remain.
    pub circle_color: Option<u32>,
}

impl ColoredState {
    pub fn from_parts(diagram: &Diagram, coloring: &FoxColoring) -> Result<Self, MoveError> {
        let p = Prime::new(coloring.p).map_err(|e| MoveError::Color(e.to_string()))?;
        coloring
            .validate(diagram, p)
            .map_err(|e| MoveError::Color(e.to_string()))?;
        if diagram.crossing_count() == 0 {
            return Ok(ColoredState {
                p,
                crossings: BTreeMap::new(),
                colors: BTreeMap::new(),
                next_edge: 1,
                next_crossing: 1,
                circle_color: Some(coloring.arcs.values().next().copied().unwrap_or(0)),
            });
        }
        let arc_of = diagram.arc_of_edge();
        let mut crossings = BTreeMap::new();
        for (i, cr) in diagram.crossings().iter().enumerate() {
            crossings.insert(i as u32 + 1, *cr);
        }
        let colors: BTreeMap<u32, u32> = arc_of
            .iter()
            .map(|(&e, arc)| (e, coloring.arcs[arc]))
            .collect();
        let next_edge = colors.keys().max().unwrap() + 1;
        let next_crossing = crossings.len() as u32 + 1;
        let st = ColoredState {
            p,
            crossings,
            colors,
            next_edge,
            next_crossing,
            circle_color: None,
        };
        st.validate()?;
        Ok(st)
    }

    /// Compact back into an immutable diagram plus coloring.
    pub fn to_parts(&self) -> (Diagram, FoxColoring) {
        if self.crossings.is_empty() {
            let d = Diagram::unknot();
            let mut arcs = BTreeMap::new();
            arcs.insert(0, self.circle_color.unwrap_or(0));
            return (
                d,
                FoxColoring {
                    p: self.p.get(),
                    arcs,
                },
            );
        }
        let list: Vec<[u32; 4]> = self.crossings.values().copied().collect();
        let d = Diagram::new(list).expect("state invariants imply a valid diagram");
        let arc_of = d.arc_of_edge();
        let arcs: BTreeMap<u32, u32> = arc_of
            .iter()
            .map(|(&e, &arc)| (arc, self.colors[&e]))
            .collect();
        let coloring = FoxColoring {
            p: self.p.get(),
            arcs,
        };
        (d, coloring)
    }

    pub fn edge_at(&self, d: SDart) -> u32 {
        self.crossings[&d.0][d.1 as usize]
    }

    pub fn color_at(&self, d: SDart) -> u32 {
        self.colors[&self.edge_at(d)]
    }

    /// Edge -> its two slots, in `(crossing, slot)` order.
    pub fn occurrences(&self) -> BTreeMap<u32, Vec<SDart>> {
        let mut occ: BTreeMap<u32, Vec<SDart>> = BTreeMap::new();
        for (&c, tuple) in &self.crossings {
            for (s, &e) in tuple.iter().enumerate() {
                occ.entry(e).or_default().push((c, s as u8));
            }
        }
        occ
    }

    pub fn mate(&self, occ: &BTreeMap<u32, Vec<SDart>>, d: SDart) -> SDart {
        let both = &occ[&self.edge_at(d)];
        if both[0] == d {
            both[1]
        } else {
            both[0]
        }
    }

    /// Faces as dart orbits (walk the edge, then turn counterclockwise),
    /// each listed in walk order from its lowest dart, faces sorted by that
    /// dart. Dart `(c, s)` stands for the corner between slots `s-1` and `s`.
    pub fn faces(&self) -> Vec<Vec<SDart>> {
        let occ = self.occurrences();
        let mut seen: BTreeMap<SDart, bool> = BTreeMap::new();
        let mut faces = Vec::new();
        for (&c, _) in &self.crossings {
            for s in 0..4u8 {
                if seen.get(&(c, s)).copied().unwrap_or(false) {
                    continue;
                }
                let mut orbit = Vec::new();
                let mut cur = (c, s);
                while !seen.get(&cur).copied().unwrap_or(false) {
                    seen.insert(cur, true);
                    orbit.push(cur);
                    let m = self.mate(&occ, cur);
                    cur = (m.0, (m.1 + 1) % 4);
                }
                // canonical rotation: start at the minimum dart
                let k = orbit
                    .iter()
                    .enumerate()
                    .min_by_key(|(_, d)| **d)
                    .map(|(i, _)| i)
                    .unwrap();
                orbit.rotate_left(k);
                faces.push(orbit);
            }
        }
        faces.sort_by_key(|f| f[0]);
        faces
    }

    /// Arc representative (lowest edge id) for every edge.
    pub fn arc_of_edge(&self) -> BTreeMap<u32, u32> {
        let mut parent: BTreeMap<u32, u32> = self.colors.keys().map(|&e| (e, e)).collect();
        fn find(parent: &mut BTreeMap<u32, u32>, x: u32) -> u32 {
            let p = parent[&x];
            if p == x {
                return x;
            }
            let r = find(parent, p);
            parent.insert(x, r);
            r
        }
        for tuple in self.crossings.values() {
            let (ra, rb) = (find(&mut parent, tuple[1]), find(&mut parent, tuple[3]));
            if ra != rb {
                let (lo, hi) = (ra.min(rb), ra.max(rb));
                parent.insert(hi, lo);
            }
        }
        let keys: Vec<u32> = parent.keys().copied().collect();
        keys.into_iter()
            .map(|e| {
                let r = find(&mut parent, e);
                (e, r)
            })
            .collect()
    }

    /// Image of the coloring as a sorted set.
    pub fn image(&self) -> Vec<u32> {
        if self.crossings.is_empty() {
            return self.circle_color.map(|c| vec![c]).unwrap_or_default();
        }
        let mut im: Vec<u32> = self.colors.values().copied().collect();
        im.sort_unstable();
        im.dedup();
        im
    }

    /// Crossing color `{a|c|b}` with `a <= b` at a crossing id.
    pub fn crossing_color(&self, c: u32) -> (u32, u32, u32) {
        let t = &self.crossings[&c];
        let mut a = self.colors[&t[0]];
        let mut b = self.colors[&t[2]];
        let mid = self.colors[&t[1]];
        if a > b {
            std::mem::swap(&mut a, &mut b);
        }
        (a, mid, b)
    }

    pub fn crossing_colors(&self) -> Vec<(u32, (u32, u32, u32))> {
        self.crossings
            .keys()
            .map(|&c| (c, self.crossing_color(c)))
            .collect()
    }

    /// Structural and coloring invariants: every edge label twice, one
    /// component, Euler face count, arc-consistent colors, Fox relation.
    pub fn validate(&self) -> Result<(), MoveError> {
        if self.crossings.is_empty() {
            if self.circle_color.is_none() {
                return Err(MoveError::Structure(
                    "empty state without circle color".into(),
                ));
            }
            return Ok(());
        }
        let occ = self.occurrences();
        for (&e, darts) in &occ {
            if darts.len() != 2 {
                return Err(MoveError::Structure(format!(
                    "edge {e} occurs {} times",
                    darts.len()
                )));
            }
            if !self.colors.contains_key(&e) {
                return Err(MoveError::Color(format!("edge {e} has no color")));
            }
        }
        if self.colors.len() != occ.len() {
            return Err(MoveError::Color("stale colors for removed edges".into()));
        }
        // one component
        let mut seen: BTreeMap<SDart, bool> = BTreeMap::new();
        let mut orbits = 0;
        for (&c, _) in &self.crossings {
            for s in 0..4u8 {
                if seen.get(&(c, s)).copied().unwrap_or(false) {
                    continue;
                }
                orbits += 1;
                let mut cur = (c, s);
                while !seen.get(&cur).copied().unwrap_or(false) {
                    seen.insert(cur, true);
                    cur = self.mate(&occ, (cur.0, (cur.1 + 2) % 4));
                }
            }
        }
        if orbits != 2 {
            return Err(MoveError::Structure(format!(
                "{} components (expected a knot)",
                orbits / 2
            )));
        }
        // Euler
        let faces = self.faces().len();
        let n = self.crossings.len();
        if faces != n + 2 {
            return Err(MoveError::Structure(format!(
                "Euler check failed: {n} crossings, {faces} faces"
            )));
        }
        // arc consistency and Fox relation
        for (&c, tuple) in &self.crossings {
            if self.colors[&tuple[1]] != self.colors[&tuple[3]] {
                return Err(MoveError::Color(format!(
                    "over-strand colors disagree at crossing {c}"
                )));
            }
            let p = self.p.get();
            let a = self.colors[&tuple[0]];
            let b = self.colors[&tuple[2]];
            let m = self.colors[&tuple[1]];
            if (a + b) % p != (2 * m) % p {
                return Err(MoveError::Color(format!(
                    "Fox relation fails at crossing {c}: {a}+{b} != 2*{m}"
                )));
            }
        }
        Ok(())
    }

    /// Stable digest of the canonical serialization.
    pub fn state_hash(&self) -> String {
        let mut h = Sha256::new();
        h.update(self.p.get().to_le_bytes());
        for (&c, tuple) in &self.crossings {
            h.update(c.to_le_bytes());
            for &e in tuple {
                h.update(e.to_le_bytes());
            }
        }
        for (&e, &col) in &self.colors {
            h.update(e.to_le_bytes());
            h.update(col.to_le_bytes());
        }
        h.update([self.circle_color.is_some() as u8]);
        h.update(self.circle_color.unwrap_or(0).to_le_bytes());
        let out = h.finalize();
        out.iter().map(|b| format!("{b:02x}")).collect()
    }

    pub(crate) fn alloc_edges(&mut self, n: u32) -> Vec<u32> {
        let start = self.next_edge;
        self.next_edge += n;
        (start..start + n).collect()
    }

    pub(crate) fn alloc_crossing(&mut self) -> u32 {
        let id = self.next_crossing;
        self.next_crossing += 1;
        id
    }

    pub(crate) fn reduce(&self, x: i64) -> u32 {
        self.p.reduce(x)
    }
}

/// A primitive colored Reidemeister move with a concrete site.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum Move {
    /// Kink on `edge`; `over` = the strand crosses over itself,
    /// `mirror` picks the loop side.
    R1Add { edge: u32, over: bool, mirror: bool },
    /// Kink on the zero-crossing unknot.
    R1AddCircle { over: bool },
    R1Remove { crossing: u32 },
    /// Push a finger of `moving`'s edge across the shared face over (or
    /// under) `target`'s edge.
    R2Push {
        moving: SDart,
        target: SDart,
        moving_over: bool,
    },
    /// Remove the bigon between two crossings.
    R2Pull { c1: u32, c2: u32 },
    /// Slide one side of a triangular face across the opposite crossing;
    /// `side` is the dart whose edge slides (its strand must be over or
    /// under both others at the triangle's corners).
    R3 { side: SDart },
}
