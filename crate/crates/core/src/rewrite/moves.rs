//! The primitive moves: kinks, finger pushes, bigon pulls, triangle slides.
//!
//! Every move is pure rotation-system surgery plus a local recoloring, and
//! every application ends in a full state validation (Euler count, single
//! component, Fox relation), so an unsound rewrite cannot survive silently.

use super::state::{ColoredState, Move, MoveError, SDart};
use std::collections::BTreeMap;

impl ColoredState {
    /// Apply a primitive move. On success the state is valid again.
    pub fn apply(&mut self, mv: &Move) -> Result<(), MoveError> {
        let backup = self.clone();
        let result = match *mv {
            Move::R1Add { edge, over, mirror } => self.r1_add(edge, over, mirror),
            Move::R1AddCircle { over } => self.r1_add_circle(over),
            Move::R1Remove { crossing } => self.r1_remove(crossing),
            Move::R2Push {
                moving,
                target,
                moving_over,
            } => self.r2_push(moving, target, moving_over).map(|_| ()),
            Move::R2Pull { c1, c2 } => self.r2_pull(c1, c2),
            Move::R3 { side } => self.r3_slide(side),
        };
        match result.and_then(|_| self.validate()) {
            Ok(()) => Ok(()),
            Err(e) => {
                *self = backup;
                Err(e)
            }
        }
    }

    fn r1_add(&mut self, edge: u32, over: bool, mirror: bool) -> Result<(), MoveError> {
        let occ = self.occurrences();
        let darts = occ
            .get(&edge)
            .ok_or_else(|| MoveError::BadSite(format!("no edge {edge}")))?
            .clone();
        let (dp, dq) = (darts[0], darts[1]);
        let ids = self.alloc_edges(3);
        let (f, l, g) = (ids[0], ids[1], ids[2]);
        let x = self.alloc_crossing();
        // strand runs P -> f -> x -> l -> x -> g -> Q
        let tuple = match (over, mirror) {
            (false, false) => [f, l, l, g],
            (false, true) => [f, g, l, l],
            (true, false) => [l, f, g, l],
            (true, true) => [g, f, l, l],
        };
        self.crossings.insert(x, tuple);
        self.crossings.get_mut(&dp.0).unwrap()[dp.1 as usize] = f;
        self.crossings.get_mut(&dq.0).unwrap()[dq.1 as usize] = g;
        let col = self.colors.remove(&edge).unwrap();
        self.colors.insert(f, col);
        self.colors.insert(l, col);
        self.colors.insert(g, col);
        Ok(())
    }

    fn r1_add_circle(&mut self, over: bool) -> Result<(), MoveError> {
        let col = self
            .circle_color
            .ok_or_else(|| MoveError::BadSite("diagram is not the bare circle".into()))?;
        let ids = self.alloc_edges(2);
        let (a, b) = (ids[0], ids[1]);
        let x = self.alloc_crossing();
        let tuple = if over { [b, b, a, a] } else { [a, a, b, b] };
        self.crossings.insert(x, tuple);
        self.colors.insert(a, col);
        self.colors.insert(b, col);
        self.circle_color = None;
        Ok(())
    }

    fn r1_remove(&mut self, crossing: u32) -> Result<(), MoveError> {
        let tuple = *self
            .crossings
            .get(&crossing)
            .ok_or_else(|| MoveError::BadSite(format!("no crossing {crossing}")))?;
        // the kink loop occupies two adjacent slots
        let mut loop_edge = None;
        for s in 0..4usize {
            if tuple[s] == tuple[(s + 1) % 4] {
                loop_edge = Some(tuple[s]);
            }
        }
        let Some(l) = loop_edge else {
            return Err(MoveError::Precondition(format!(
                "crossing {crossing} is not a kink"
            )));
        };
        // both other slots must be distinct from the loop; they reconnect
        let _ = l;
        self.remove_crossings_smoothing(&[crossing])
    }

    /// Push `moving`'s edge across the face shared by the two darts, over or
    /// under `target`'s edge. Returns the two new crossings `(u, v)` where
    /// `u` is adjacent to `target`'s crossing, plus the finger tip edge.
    pub(crate) fn r2_push(
        &mut self,
        moving: SDart,
        target: SDart,
        moving_over: bool,
    ) -> Result<(u32, u32, u32), MoveError> {
        let em = self.edge_at(moving);
        let et = self.edge_at(target);
        if em == et {
            return Err(MoveError::Precondition(
                "moving and target must be distinct edges".into(),
            ));
        }
        let faces = self.faces();
        let fm = faces.iter().position(|f| f.contains(&moving));
        let ft = faces.iter().position(|f| f.contains(&target));
        if fm.is_none() || fm != ft {
            return Err(MoveError::BadSite(
                "moving and target darts do not border a common face".into(),
            ));
        }
        let occ = self.occurrences();
        let m_far = self.mate(&occ, moving);
        let t_far = self.mate(&occ, target);
        let x = self.colors[&em];
        let y = self.colors[&et];
        let ids = self.alloc_edges(6);
        let (et1, et2, et3, em1, em2, em3) = (ids[0], ids[1], ids[2], ids[3], ids[4], ids[5]);
        let u = self.alloc_crossing();
        let v = self.alloc_crossing();
        // counterclockwise tuples; the finger arrives at the target's face
        // side and its tip bends toward the target's far end
        let (ut, vt) = if moving_over {
            ([et1, em1, et2, em2], [et2, em3, et3, em2])
        } else {
            ([em1, et2, em2, et1], [em3, et3, em2, et2])
        };
        self.crossings.insert(u, ut);
        self.crossings.insert(v, vt);
        self.crossings.get_mut(&target.0).unwrap()[target.1 as usize] = et1;
        self.crossings.get_mut(&t_far.0).unwrap()[t_far.1 as usize] = et3;
        self.crossings.get_mut(&moving.0).unwrap()[moving.1 as usize] = em1;
        self.crossings.get_mut(&m_far.0).unwrap()[m_far.1 as usize] = em3;
        self.colors.remove(&em);
        self.colors.remove(&et);
        let (mid_t, mid_m) = if moving_over {
            (self.reduce(2 * x as i64 - y as i64), x)
        } else {
            (y, self.reduce(2 * y as i64 - x as i64))
        };
        self.colors.insert(et1, y);
        self.colors.insert(et2, mid_t);
        self.colors.insert(et3, y);
        self.colors.insert(em1, x);
        self.colors.insert(em2, mid_m);
        self.colors.insert(em3, x);
        Ok((u, v, em2))
    }

    /// Remove the bigon face between crossings `c1`, `c2`.
    fn r2_pull(&mut self, c1: u32, c2: u32) -> Result<(), MoveError> {
        if c1 == c2 {
            return Err(MoveError::BadSite("bigon needs two distinct crossings".into()));
        }
        let faces = self.faces();
        let bigon = faces.iter().find(|f| {
            f.len() == 2 && {
                let cs = [f[0].0, f[1].0];
                cs.contains(&c1) && cs.contains(&c2)
            }
        });
        let Some(bigon) = bigon else {
            return Err(MoveError::BadSite(format!(
                "no bigon face between crossings {c1} and {c2}"
            )));
        };
        let (d1, d2) = (bigon[0], bigon[1]);
        // the two boundary edges occupy slots (s, s-1) at each crossing;
        // removable when one strand is over at both crossings
        let g1_over_at_d1 = d1.1 % 2 == 1;
        let g1_at_c2_slot = (d2.1 + 3) % 4;
        let g1_over_at_d2 = g1_at_c2_slot % 2 == 1;
        if g1_over_at_d1 != g1_over_at_d2 {
            return Err(MoveError::Precondition(
                "bigon is a clasp (strands alternate), not removable".into(),
            ));
        }
        self.remove_crossings_smoothing(&[d1.0, d2.0])
    }

    /// Delete crossings and reconnect the strands through them. Each maximal
    /// chain of edges through deleted crossings becomes a single new edge
    /// (or the bare circle if everything is consumed).
    pub(crate) fn remove_crossings_smoothing(&mut self, removed: &[u32]) -> Result<(), MoveError> {
        let occ = self.occurrences();
        let is_removed = |c: u32| removed.contains(&c);
        // passage partner inside a removed crossing: slot s <-> s+2
        let step = |d: SDart| -> SDart { (d.0, (d.1 + 2) % 4) };
        let mut interior: Vec<u32> = Vec::new();
        let mut new_edges: Vec<(SDart, SDart, u32)> = Vec::new(); // (end1, end2, color)
        let mut consumed: BTreeMap<u32, bool> = BTreeMap::new();
        for (&e, darts) in &occ {
            let at_removed = darts.iter().filter(|d| is_removed(d.0)).count();
            if at_removed == 2 {
                interior.push(e);
            }
        }
        // walk chains from surviving ends
        for (&e, darts) in &occ {
            if consumed.get(&e).copied().unwrap_or(false) {
                continue;
            }
            let surviving: Vec<SDart> = darts.iter().copied().filter(|d| !is_removed(d.0)).collect();
            if surviving.is_empty() {
                continue; // interior or closed-chain edge, handled below
            }
            if surviving.len() == 2 {
                continue; // untouched edge
            }
            // chain start
            consumed.insert(e, true);
            let start = surviving[0];
            let mut cur_edge = e;
            let mut cur_far = if darts[0] == start { darts[1] } else { darts[0] };
            let end_color = self.colors[&e];
            loop {
                if !is_removed(cur_far.0) {
                    // chain ends at a surviving crossing
                    let other_color = self.colors[&cur_edge];
                    if other_color != end_color {
                        return Err(MoveError::Color(format!(
                            "smoothing would merge arcs colored {end_color} and {other_color}"
                        )));
                    }
                    new_edges.push((start, cur_far, end_color));
                    break;
                }
                let next_dart = step(cur_far);
                let next_edge = self.edge_at(next_dart);
                consumed.insert(next_edge, true);
                let both = &occ[&next_edge];
                cur_far = if both[0] == next_dart { both[1] } else { both[0] };
                cur_edge = next_edge;
            }
        }
        // detect a full collapse (closed chain through removed crossings)
        let survivors_exist = self.crossings.keys().any(|&c| !is_removed(c));
        for c in removed {
            self.crossings.remove(c);
        }
        for e in &interior {
            self.colors.remove(e);
        }
        if !survivors_exist {
            // the whole diagram was consumed; it must have been an unknot
            let circle = self.colors.keys().next().copied();
            let col = circle.map(|e| self.colors[&e]).unwrap_or(0);
            if !self.colors.values().all(|&c| c == col) {
                return Err(MoveError::Color(
                    "collapse left inconsistent circle colors".into(),
                ));
            }
            self.colors.clear();
            self.circle_color = Some(col);
            return Ok(());
        }
        for (end1, end2, color) in new_edges {
            let id = self.alloc_edges(1)[0];
            // old edges at the surviving slots disappear
            let e1 = self.edge_at(end1);
            let e2 = self.edge_at(end2);
            self.colors.remove(&e1);
            self.colors.remove(&e2);
            self.crossings.get_mut(&end1.0).unwrap()[end1.1 as usize] = id;
            self.crossings.get_mut(&end2.0).unwrap()[end2.1 as usize] = id;
            self.colors.insert(id, color);
        }
        Ok(())
    }

    /// Slide the side starting at dart `side` of a triangular face across the
    /// opposite crossing. The side's strand must pass over both others or
    /// under both others at the triangle's corners.
    fn r3_slide(&mut self, side: SDart) -> Result<(), MoveError> {
        let faces = self.faces();
        let tri = faces
            .iter()
            .find(|f| f.len() == 3 && f.contains(&side))
            .cloned()
            .ok_or_else(|| {
                MoveError::BadSite("side dart is not on a triangular face".into())
            })?;
        let mut order = tri.clone();
        while order[0] != side {
            order.rotate_left(1);
        }
        let (d1, d2, d3) = (order[0], order[1], order[2]);
        let (c1, c2, c3) = (d1.0, d2.0, d3.0);
        if c1 == c2 || c2 == c3 || c1 == c3 {
            return Err(MoveError::Precondition(
                "triangle must touch three distinct crossings".into(),
            ));
        }
        let (s1, s2, s3) = (d1.1, d2.1, d3.1);
        // sliding strand occupies slots s1, s1+2 at c1 and s2-1, s2+1 at c2
        let w13 = s1 % 2 == 1; // sliding strand over strand 3 at c1
        let w12 = (s2 + 3) % 4 % 2 == 1; // over strand 2 at c2
        if w12 != w13 {
            return Err(MoveError::Precondition(
                "sliding side is neither over both nor under both".into(),
            ));
        }
        let slot = |c: u32, s: u8| -> u32 { self.crossings[&c][(s % 4) as usize] };
        let e1 = slot(c1, s1);
        let e2 = slot(c2, s2);
        let e3 = slot(c3, s3);
        let o1 = slot(c1, s1 + 2);
        let h3 = slot(c1, s1 + 1);
        let o2 = slot(c2, s2 + 1);
        let h2 = slot(c2, s2 + 2);
        let f2 = slot(c3, s3 + 1);
        let f3 = slot(c3, s3 + 2);
        // sanity: triangle edges close up
        if slot(c2, s2 + 3) != e1 || slot(c3, s3 + 3) != e2 || slot(c1, s1 + 3) != e3 {
            return Err(MoveError::BadSite("face walk is not a triangle".into()));
        }
        // rebuild c3 in place: the two merged outside edges take over the
        // old triangle-side slots, the old triangle edges move to the far
        // rays toward the new crossings
        {
            let t = self.crossings.get_mut(&c3).unwrap();
            t[(s3 % 4) as usize] = h3;
            t[((s3 + 1) % 4) as usize] = e2;
            t[((s3 + 2) % 4) as usize] = e3;
            t[((s3 + 3) % 4) as usize] = h2;
        }
        self.crossings.remove(&c1);
        self.crossings.remove(&c2);
        let c2n = self.alloc_crossing();
        let c1n = self.alloc_crossing();
        let c2n_tuple = if w12 {
            [f2, e1, e2, o1]
        } else {
            [o1, f2, e1, e2]
        };
        let c1n_tuple = if w13 {
            [e3, e1, f3, o2]
        } else {
            [e1, f3, o2, e3]
        };
        self.crossings.insert(c2n, c2n_tuple);
        self.crossings.insert(c1n, c1n_tuple);
        // recolor the three repositioned edges from the surrounding anchors
        let p = self.p.get() as i64;
        let col = |state: &ColoredState, e: u32| state.colors[&e] as i64;
        if w12 {
            // sliding strand stays over: its color never changes
            let x = col(self, e1);
            if col(self, o1) != x || col(self, o2) != x {
                return Err(MoveError::Color("over strand not a single arc".into()));
            }
            let e2_new = (2 * x - col(self, f2)).rem_euclid(p) as u32;
            let e3_new = (2 * x - col(self, f3)).rem_euclid(p) as u32;
            self.colors.insert(e2, e2_new);
            self.colors.insert(e3, e3_new);
        } else {
            // sliding strand passes under both: the walls keep their colors
            let e2_new = col(self, f2) as u32;
            let e3_new = col(self, f3) as u32;
            self.colors.insert(e2, e2_new);
            self.colors.insert(e3, e3_new);
            let e1_new = (2 * e2_new as i64 - col(self, o1)).rem_euclid(p) as u32;
            self.colors.insert(e1, e1_new);
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coloring::{coloring_space, determinant, enumerate_nontrivial};
    use crate::diagram::Diagram;
    use crate::modp::Prime;

    const TREFOIL: &str = "X(1,4,2,5);X(3,6,4,1);X(5,2,6,3)";

    fn trefoil_state() -> ColoredState {
        let d = Diagram::parse_pd(TREFOIL).unwrap();
        let p = Prime::new(3).unwrap();
        let cols = enumerate_nontrivial(&d, p, 1).unwrap();
        ColoredState::from_parts(&d, &cols[0]).unwrap()
    }

    #[test]
    fn r1_add_remove_roundtrip() {
        let mut st = trefoil_state();
        let before = st.clone();
        let hash0 = st.state_hash();
        for &over in &[false, true] {
            for &mirror in &[false, true] {
                st.apply(&Move::R1Add {
                    edge: 1,
                    over,
                    mirror,
                })
                .unwrap();
                assert_eq!(st.crossings.len(), 4);
                // the new crossing is trivial
                let kink = st.crossings.keys().max().copied().unwrap();
                let (a, c, b) = st.crossing_color(kink);
                assert_eq!((a, c), (b, b));
                assert_eq!(st.image(), before.image());
                st.apply(&Move::R1Remove { crossing: kink }).unwrap();
                assert_eq!(st.crossings.len(), 3);
                // ids differ after the roundtrip but structure is restored
                let (d_after, _) = st.to_parts();
                assert_eq!(d_after.crossing_count(), 3);
                st = before.clone();
                assert_eq!(st.state_hash(), hash0);
            }
        }
    }

    #[test]
    fn r1_circle_roundtrip() {
        let d = Diagram::unknot();
        let coloring = FoxColoring {
            p: 11,
            arcs: [(0u32, 4u32)].into_iter().collect(),
        };
        let mut st = ColoredState::from_parts(&d, &coloring).unwrap();
        st.apply(&Move::R1AddCircle { over: false }).unwrap();
        assert_eq!(st.crossings.len(), 1);
        assert_eq!(st.image(), vec![4]);
        let kink = *st.crossings.keys().next().unwrap();
        st.apply(&Move::R1Remove { crossing: kink }).unwrap();
        assert_eq!(st.crossings.len(), 0);
        assert_eq!(st.circle_color, Some(4));
    }

    use crate::coloring::FoxColoring;

    #[test]
    fn r2_push_pull_roundtrip_and_colors() {
        let mut st = trefoil_state();
        let rank0 = {
            let (d, _) = st.to_parts();
            coloring_space(&d, st.p).rank
        };
        let det0 = {
            let (d, _) = st.to_parts();
            determinant(&d)
        };
        // pick any two co-facial darts on distinct edges
        let faces = st.faces();
        let mut site = None;
        'outer: for f in &faces {
            for i in 0..f.len() {
                for j in 0..f.len() {
                    if i != j && st.edge_at(f[i]) != st.edge_at(f[j]) {
                        site = Some((f[i], f[j]));
                        break 'outer;
                    }
                }
            }
        }
        let (m, t) = site.unwrap();
        for &over in &[true, false] {
            let mut s2 = st.clone();
            let x = s2.color_at(m);
            let y = s2.color_at(t);
            s2.apply(&Move::R2Push {
                moving: m,
                target: t,
                moving_over: over,
            })
            .unwrap();
            assert_eq!(s2.crossings.len(), st.crossings.len() + 2);
            let (u, v) = {
                let mut ids: Vec<u32> = s2.crossings.keys().copied().collect();
                ids.sort_unstable();
                (ids[ids.len() - 2], ids[ids.len() - 1])
            };
            // new crossing colors follow the half rule
            let p = s2.p.get();
            let expect_mid = if over {
                (2 * x + p - y % p) % p
            } else {
                (2 * y + p - x % p) % p
            };
            for c in [u, v] {
                let (a, mid, b) = s2.crossing_color(c);
                assert_eq!((a + b) % p, 2 * mid % p);
                let trio = [a, mid, b];
                assert!(trio.contains(&expect_mid));
            }
            // rank and determinant are move invariants
            let (d2, _) = s2.to_parts();
            assert_eq!(coloring_space(&d2, s2.p).rank, rank0);
            assert_eq!(determinant(&d2), det0);
            // pull it back out
            s2.apply(&Move::R2Pull { c1: u, c2: v }).unwrap();
            let (d3, _) = s2.to_parts();
            assert_eq!(d3.crossing_count(), 3);
            assert_eq!(determinant(&d3), det0);
        }
        st.validate().unwrap();
    }

    #[test]
    fn two_crossing_unknot_pulls_to_circle() {
        // build a 2-crossing unknot by pushing the kink diagram's edges
        let d = Diagram::unknot();
        let coloring = FoxColoring {
            p: 5,
            arcs: [(0u32, 2u32)].into_iter().collect(),
        };
        let mut st = ColoredState::from_parts(&d, &coloring).unwrap();
        st.apply(&Move::R1AddCircle { over: true }).unwrap();
        let kink = *st.crossings.keys().next().unwrap();
        st.apply(&Move::R1Remove { crossing: kink }).unwrap();
        assert_eq!(st.circle_color, Some(2));
    }

    #[test]
    fn r3_preserves_rank_det_and_validity() {
        // build a state with a slidable triangle: push a strand over a
        // crossing's two edges to create one
        let mut st = trefoil_state();
        let (d0, _) = st.to_parts();
        let rank0 = coloring_space(&d0, st.p).rank;
        let det0 = determinant(&d0);
        // look for an existing triangle with a valid slide in the trefoil
        // after a push; search exhaustively for any applicable R3
        let mut tried = 0;
        let mut applied = false;
        let faces = st.faces();
        let push_sites: Vec<(SDart, SDart)> = faces
            .iter()
            .flat_map(|f| {
                let mut v = Vec::new();
                for &a in f {
                    for &b in f {
                        if a != b && st.edge_at(a) != st.edge_at(b) {
                            v.push((a, b));
                        }
                    }
                }
                v
            })
            .collect();
        'outer: for (m, t) in push_sites {
            for &over in &[true, false] {
                let mut s2 = st.clone();
                if s2
                    .apply(&Move::R2Push {
                        moving: m,
                        target: t,
                        moving_over: over,
                    })
                    .is_err()
                {
                    continue;
                }
                for f in s2.faces() {
                    if f.len() != 3 {
                        continue;
                    }
                    for &side in &f {
                        let mut s3 = s2.clone();
                        if s3.apply(&Move::R3 { side }).is_ok() {
                            tried += 1;
                            let (d3, _) = s3.to_parts();
                            assert_eq!(coloring_space(&d3, s3.p).rank, rank0);
                            assert_eq!(determinant(&d3), det0);
                            assert_eq!(d3.crossing_count(), 5);
                            applied = true;
                            if tried > 4 {
                                break 'outer;
                            }
                        }
                    }
                }
            }
        }
        assert!(applied, "no applicable R3 found");
        st.validate().unwrap();
    }
}
