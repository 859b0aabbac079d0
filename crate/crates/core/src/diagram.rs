//! Combinatorial knot diagrams from planar diagram (PD) codes.
//!
//! A crossing is a 4-tuple of edge labels listed counterclockwise starting at
//! the incoming under-edge, so slots 0 and 2 carry the under-strand and slots
//! 1 and 3 the over-strand. The tuple list is a rotation system: faces are
//! recovered combinatorially and the Euler count `F = n + 2` certifies that
//! the code is realizable in the sphere.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DiagramError {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("edge label {0} used {1} times (each label must appear exactly twice)")]
    BadMultiplicity(u32, usize),
    #[error("diagram has {0} components; only knots are supported")]
    MultipleComponents(usize),
    #[error("Euler check failed: {crossings} crossings but {faces} faces (expected {expected})")]
    NotRealizable {
        crossings: usize,
        faces: usize,
        expected: usize,
    },
}

/// A slot of a crossing: `(crossing index, position 0..4)`.
pub type Dart = (usize, u8);

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Diagram {
    crossings: Vec<[u32; 4]>,
}

impl Diagram {
    /// The zero-crossing unknot.
    pub fn unknot() -> Self {
        Diagram { crossings: vec![] }
    }

    pub fn new(crossings: Vec<[u32; 4]>) -> Result<Self, DiagramError> {
        let d = Diagram { crossings };
        d.validate()?;
        Ok(d)
    }

    pub fn crossings(&self) -> &[[u32; 4]] {
        &self.crossings
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    pub fn edge_at(&self, d: Dart) -> u32 {
        self.crossings[d.0][d.1 as usize]
    }

    /// Parse the `X(a,b,c,d)` text format; entries separated by `;` or
    /// newlines, whitespace ignored.
    pub fn parse_pd(text: &str) -> Result<Self, DiagramError> {
        let mut crossings = Vec::new();
        for part in text.split(|c| c == ';' || c == '\n') {
            let entry: String = part.chars().filter(|c| !c.is_whitespace()).collect();
            if entry.is_empty() {
                continue;
            }
            let inner = entry
                .strip_prefix("X(")
                .or_else(|| entry.strip_prefix("x("))
                .and_then(|s| s.strip_suffix(')'))
                .ok_or_else(|| DiagramError::Syntax(format!("bad entry: {part:?}")))?;
            let nums: Vec<u32> = inner
                .split(',')
                .map(|t| {
                    t.parse::<u32>()
                        .map_err(|_| DiagramError::Syntax(format!("bad edge label: {t:?}")))
                })
                .collect::<Result<_, _>>()?;
            if nums.len() != 4 {
                return Err(DiagramError::Syntax(format!(
                    "expected 4 edge labels, got {}",
                    nums.len()
                )));
            }
            if nums.iter().any(|&n| n == 0) {
                return Err(DiagramError::Syntax("edge labels must be positive".into()));
            }
            crossings.push([nums[0], nums[1], nums[2], nums[3]]);
        }
        Diagram::new(crossings)
    }

    pub fn to_pd_string(&self) -> String {
        self.crossings
            .iter()
            .map(|c| format!("X({},{},{},{})", c[0], c[1], c[2], c[3]))
            .collect::<Vec<_>>()
            .join(";")
    }

    fn validate(&self) -> Result<(), DiagramError> {
        if self.crossings.is_empty() {
            return Ok(());
        }
        let occ = self.occurrences_checked()?;
        let comps = self.component_count(&occ);
        if comps != 1 {
            return Err(DiagramError::MultipleComponents(comps));
        }
        let faces = self.faces();
        let expected = self.crossings.len() + 2;
        if faces.len() != expected {
            return Err(DiagramError::NotRealizable {
                crossings: self.crossings.len(),
                faces: faces.len(),
                expected,
            });
        }
        Ok(())
    }

    fn occurrences_checked(&self) -> Result<BTreeMap<u32, Vec<Dart>>, DiagramError> {
        let mut occ: BTreeMap<u32, Vec<Dart>> = BTreeMap::new();
        for (i, cr) in self.crossings.iter().enumerate() {
            for (s, &e) in cr.iter().enumerate() {
                occ.entry(e).or_default().push((i, s as u8));
            }
        }
        for (&e, darts) in &occ {
            if darts.len() != 2 {
                return Err(DiagramError::BadMultiplicity(e, darts.len()));
            }
        }
        Ok(occ)
    }

    /// Edge label -> its two darts, in scan order.
    pub fn occurrences(&self) -> BTreeMap<u32, Vec<Dart>> {
        self.occurrences_checked()
            .expect("validated diagram has well-formed occurrences")
    }

    /// The dart at the other end of the edge in slot `d`.
    pub fn mate(&self, occ: &BTreeMap<u32, Vec<Dart>>, d: Dart) -> Dart {
        let e = self.edge_at(d);
        let both = &occ[&e];
        if both[0] == d {
            both[1]
        } else {
            both[0]
        }
    }

    fn component_count(&self, occ: &BTreeMap<u32, Vec<Dart>>) -> usize {
        // trace the curve: arriving at a crossing through slot s, leave by
        // slot s+2 and jump along that edge
        let n = self.crossings.len();
        let mut seen = vec![[false; 4]; n];
        let mut orbits = 0;
        for c in 0..n {
            for s in 0..4u8 {
                if seen[c][s as usize] {
                    continue;
                }
                orbits += 1;
                let mut cur = (c, s);
                while !seen[cur.0][cur.1 as usize] {
                    seen[cur.0][cur.1 as usize] = true;
                    let out = (cur.0, (cur.1 + 2) % 4);
                    cur = self.mate(occ, out);
                }
            }
        }
        // each component is traced twice, once per direction
        orbits / 2
    }

    /// Faces of the rotation system as orbits of "walk the edge, then turn
    /// counterclockwise". Each dart `(c, s)` stands for the corner of `c`
    /// between slots `s-1` and `s`, and each face is returned as its darts in
    /// boundary-walk order, starting from the lowest dart.
    pub fn faces(&self) -> Vec<Vec<Dart>> {
        let occ = match self.occurrences_checked() {
            Ok(o) => o,
            Err(_) => return vec![],
        };
        let n = self.crossings.len();
        let mut seen = vec![[false; 4]; n];
        let mut faces = Vec::new();
        for c in 0..n {
            for s in 0..4u8 {
                if seen[c][s as usize] {
                    continue;
                }
                let mut orbit = Vec::new();
                let mut cur = (c, s);
                while !seen[cur.0][cur.1 as usize] {
                    seen[cur.0][cur.1 as usize] = true;
                    orbit.push(cur);
                    let m = self.mate(&occ, cur);
                    cur = (m.0, (m.1 + 1) % 4);
                }
                faces.push(orbit);
            }
        }
        faces
    }

    /// Arc partition: edges joined across over-strand passages. Returns the
    /// arc representative (lowest edge label) for every edge.
    pub fn arc_of_edge(&self) -> BTreeMap<u32, u32> {
        let occ = self.occurrences();
        let mut parent: BTreeMap<u32, u32> = occ.keys().map(|&e| (e, e)).collect();
        fn find(parent: &mut BTreeMap<u32, u32>, x: u32) -> u32 {
            let p = parent[&x];
            if p == x {
                return x;
            }
            let r = find(parent, p);
            parent.insert(x, r);
            r
        }
        for cr in &self.crossings {
            let (a, b) = (cr[1], cr[3]);
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
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

    /// Sorted arc representatives. The unknot is a single arc with no edges.
    pub fn arcs(&self) -> Vec<u32> {
        if self.crossings.is_empty() {
            return vec![0];
        }
        let map = self.arc_of_edge();
        let mut arcs: Vec<u32> = map.values().copied().collect();
        arcs.sort_unstable();
        arcs.dedup();
        arcs
    }

    /// Per-crossing arc incidence `(over, under_in, under_out)` in arc
    /// representatives.
    pub fn crossing_incidence(&self) -> Vec<CrossingIncidence> {
        let map = self.arc_of_edge();
        self.crossings
            .iter()
            .enumerate()
            .map(|(i, cr)| CrossingIncidence {
                crossing: i,
                over_arc: map[&cr[1]],
                under_arcs: [map[&cr[0]], map[&cr[2]]],
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CrossingIncidence {
    pub crossing: usize,
    pub over_arc: u32,
    pub under_arcs: [u32; 2],
}

#[cfg(test)]
mod tests {
    use super::*;

    pub const TREFOIL: &str = "X(1,4,2,5);X(3,6,4,1);X(5,2,6,3)";

    #[test]
    fn parse_trefoil() {
        let d = Diagram::parse_pd(TREFOIL).unwrap();
        assert_eq!(d.crossing_count(), 3);
        assert_eq!(d.occurrences().len(), 6);
        assert_eq!(d.arcs().len(), 3);
        assert_eq!(d.faces().len(), 5);
    }

    #[test]
    fn parse_whitespace_and_newlines() {
        let d = Diagram::parse_pd("X(1,4,2,5)\n X( 3,6,4,1 ) ; X(5,2,6,3)").unwrap();
        assert_eq!(d.crossing_count(), 3);
    }

    #[test]
    fn parse_rejects_bad_multiplicity() {
        // X(1,2,1,2) alone is two stacked circles, not a knot
        assert!(matches!(
            Diagram::parse_pd("X(1,2,1,2);X(3,4,3,4)"),
            Err(DiagramError::MultipleComponents(_))
        ));
        assert!(matches!(
            Diagram::parse_pd("X(1,2,1,1)"),
            Err(DiagramError::BadMultiplicity(..))
        ));
    }

    #[test]
    fn parse_rejects_two_trefoils() {
        let two = "X(1,4,2,5);X(3,6,4,1);X(5,2,6,3);X(7,10,8,11);X(9,12,10,7);X(11,8,12,9)";
        assert_eq!(
            Diagram::parse_pd(two),
            Err(DiagramError::MultipleComponents(2))
        );
    }

    #[test]
    fn parse_rejects_syntax() {
        assert!(matches!(
            Diagram::parse_pd("Y(1,2,3,4)"),
            Err(DiagramError::Syntax(_))
        ));
        assert!(matches!(
            Diagram::parse_pd("X(1,2,3)"),
            Err(DiagramError::Syntax(_))
        ));
        assert!(matches!(
            Diagram::parse_pd("X(1,2,3,0)"),
            Err(DiagramError::Syntax(_))
        ));
    }

    #[test]
    fn kink_structure() {
        let d = Diagram::parse_pd("X(1,1,2,2)").unwrap();
        assert_eq!(d.crossing_count(), 1);
        assert_eq!(d.arcs().len(), 1);
        assert_eq!(d.faces().len(), 3);
        let inc = d.crossing_incidence();
        assert_eq!(inc[0].over_arc, inc[0].under_arcs[0]);
        assert_eq!(inc[0].over_arc, inc[0].under_arcs[1]);
    }

    #[test]
    fn arcs_count_equals_crossings() {
        for pd in [TREFOIL, "X(1,1,2,2)", "X(4,2,5,1);X(8,6,1,5);X(6,3,7,4);X(2,7,3,8)"] {
            let d = Diagram::parse_pd(pd).unwrap();
            assert_eq!(d.arcs().len(), d.crossing_count());
        }
    }

    #[test]
    fn trefoil_distinct_over_arcs() {
        let d = Diagram::parse_pd(TREFOIL).unwrap();
        let inc = d.crossing_incidence();
        let mut overs: Vec<u32> = inc.iter().map(|i| i.over_arc).collect();
        overs.sort_unstable();
        overs.dedup();
        assert_eq!(overs.len(), 3);
    }

    #[test]
    fn faces_partition_darts() {
        let d = Diagram::parse_pd(TREFOIL).unwrap();
        let faces = d.faces();
        let total: usize = faces.iter().map(|f| f.len()).sum();
        assert_eq!(total, 4 * d.crossing_count());
        let mut all: Vec<Dart> = faces.into_iter().flatten().collect();
        all.sort_unstable();
        all.dedup();
        assert_eq!(all.len(), 4 * d.crossing_count());
    }

    #[test]
    fn roundtrip() {
        let d = Diagram::parse_pd(TREFOIL).unwrap();
        let text = d.to_pd_string();
        let d2 = Diagram::parse_pd(&text).unwrap();
        assert_eq!(d, d2);
    }

    #[test]
    fn unknot_special_case() {
        let u = Diagram::unknot();
        assert_eq!(u.crossing_count(), 0);
        assert_eq!(u.arcs(), vec![0]);
    }
}
