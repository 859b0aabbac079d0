//! Fox p-coloring linear algebra.
//!
//! A coloring assigns a residue to every arc so that the two under-arcs and
//! the over-arc at each crossing satisfy `a + b = 2c (mod p)`. The solution
//! set is the kernel of the crossing-relation matrix; its rank decides
//! colorability, and the integer determinant of the reduced matrix serves as
//! an independent prediction of which primes color the knot.

use crate::diagram::Diagram;
use crate::modp::{AffineMap, Prime};
use crate::palette::{det_i64, PaletteGraph};
use serde::Serialize;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ColoringError {
    #[error("coloring violates the crossing relation at crossing {0}")]
    InvalidAtCrossing(usize),
    #[error("arc {0} has no assigned color")]
    MissingArc(u32),
    #[error("modulus mismatch: {0} vs {1}")]
    ModulusMismatch(u32, u32),
    #[error("diagram is not p-colorable (rank {0} < 2)")]
    NotColorable(usize),
}

/// A Fox coloring: arc representative -> color value.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FoxColoring {
    pub p: u32,
    pub arcs: BTreeMap<u32, u32>,
}

impl FoxColoring {
    pub fn new(
        diagram: &Diagram,
        p: Prime,
        arcs: BTreeMap<u32, u32>,
    ) -> Result<Self, ColoringError> {
        let c = FoxColoring { p: p.get(), arcs };
        c.validate(diagram, p)?;
        Ok(c)
    }

    pub fn validate(&self, diagram: &Diagram, p: Prime) -> Result<(), ColoringError> {
        for arc in diagram.arcs() {
            if !self.arcs.contains_key(&arc) {
                return Err(ColoringError::MissingArc(arc));
            }
        }
        for inc in diagram.crossing_incidence() {
            let a = self.arcs[&inc.under_arcs[0]];
            let b = self.arcs[&inc.under_arcs[1]];
            let c = self.arcs[&inc.over_arc];
            if (a + b) % p.get() != (2 * c) % p.get() {
                return Err(ColoringError::InvalidAtCrossing(inc.crossing));
            }
        }
        Ok(())
    }

    pub fn is_constant(&self) -> bool {
        let mut vals = self.arcs.values();
        match vals.next() {
            None => true,
            Some(v0) => vals.all(|v| v == v0),
        }
    }

    /// Compose with an affine map arcwise.
    pub fn recolor(&self, f: AffineMap) -> Result<FoxColoring, ColoringError> {
        if f.modulus().get() != self.p {
            return Err(ColoringError::ModulusMismatch(f.modulus().get(), self.p));
        }
        Ok(FoxColoring {
            p: self.p,
            arcs: self
                .arcs
                .iter()
                .map(|(&a, &v)| (a, f.apply_raw(v)))
                .collect(),
        })
    }

    pub fn image_set(&self) -> Vec<u32> {
        let mut im: Vec<u32> = self.arcs.values().copied().collect();
        im.sort_unstable();
        im.dedup();
        im
    }
}

/// Image data of a coloring: the color set and the multiset of crossing
/// colors `{a|c|b}` with `a <= b`.
#[derive(Debug, Clone, Serialize)]
pub struct ColorImage {
    pub image: Vec<u32>,
    pub crossing_colors: Vec<(u32, u32, u32)>,
}

pub fn image(coloring: &FoxColoring, diagram: &Diagram) -> Result<ColorImage, ColoringError> {
    let p = Prime::new(coloring.p).expect("stored modulus is prime");
    coloring.validate(diagram, p)?;
    let mut colors = Vec::new();
    for inc in diagram.crossing_incidence() {
        let mut a = coloring.arcs[&inc.under_arcs[0]];
        let mut b = coloring.arcs[&inc.under_arcs[1]];
        let c = coloring.arcs[&inc.over_arc];
        if a > b {
            std::mem::swap(&mut a, &mut b);
        }
        colors.push((a, c, b));
    }
    colors.sort_unstable();
    Ok(ColorImage {
        image: coloring.image_set(),
        crossing_colors: colors,
    })
}

/// Check the palette-side constraints a valid knot coloring must satisfy:
/// every nontrivial crossing color is an edge of `G(Im)` and `G(Im)` is
/// connected. Returns the offending fact as a string for reporting.
pub fn check_palette_constraints(
    coloring: &FoxColoring,
    diagram: &Diagram,
) -> Result<(), String> {
    let p = Prime::new(coloring.p).expect("stored modulus is prime");
    let im = image(coloring, diagram).map_err(|e| e.to_string())?;
    let g = PaletteGraph::build(&im.image, p).map_err(|e| e.to_string())?;
    for &(a, c, b) in &im.crossing_colors {
        if a == b && b == c {
            continue;
        }
        let found = g
            .edges()
            .iter()
            .any(|e| (e.a, e.label, e.b) == (a.min(b), c, a.max(b)));
        if !found {
            return Err(format!("crossing color {{{a}|{c}|{b}}} is not an edge of G(Im)"));
        }
    }
    if !g.is_connected() {
        return Err(format!("palette graph of image {:?} is disconnected", im.image));
    }
    Ok(())
}

/// Basis of the mod-p kernel of the crossing-relation matrix.
#[derive(Debug, Clone, Serialize)]
pub struct ColoringSpace {
    pub p: u32,
    pub arc_order: Vec<u32>,
    pub basis: Vec<Vec<u32>>,
    pub rank: usize,
}

impl ColoringSpace {
    pub fn coloring_from_coeffs(&self, coeffs: &[u32]) -> FoxColoring {
        assert_eq!(coeffs.len(), self.basis.len());
        let p = self.p as u64;
        let mut vals = vec![0u64; self.arc_order.len()];
        for (vec, &c) in self.basis.iter().zip(coeffs) {
            for (i, &x) in vec.iter().enumerate() {
                vals[i] = (vals[i] + c as u64 * x as u64) % p;
            }
        }
        FoxColoring {
            p: self.p,
            arcs: self
                .arc_order
                .iter()
                .zip(vals.iter())
                .map(|(&a, &v)| (a, v as u32))
                .collect(),
        }
    }
}

fn relation_matrix(diagram: &Diagram, modulus: i64) -> (Vec<u32>, Vec<Vec<i64>>) {
    let arcs = diagram.arcs();
    let idx: BTreeMap<u32, usize> = arcs.iter().enumerate().map(|(i, &a)| (a, i)).collect();
    let mut rows = Vec::new();
    for inc in diagram.crossing_incidence() {
        let mut row = vec![0i64; arcs.len()];
        row[idx[&inc.under_arcs[0]]] += 1;
        row[idx[&inc.under_arcs[1]]] += 1;
        row[idx[&inc.over_arc]] -= 2;
        if modulus > 0 {
            for x in row.iter_mut() {
                *x = x.rem_euclid(modulus);
            }
        }
        rows.push(row);
    }
    (arcs, rows)
}

/// Kernel of the relation matrix over `Z/p` by Gaussian elimination with a
/// fixed pivot order (lowest row, lowest column), so bases are reproducible.
pub fn coloring_space(diagram: &Diagram, p: Prime) -> ColoringSpace {
    if diagram.crossing_count() == 0 {
        return ColoringSpace {
            p: p.get(),
            arc_order: vec![0],
            basis: vec![vec![1]],
            rank: 1,
        };
    }
    let m = p.get() as i64;
    let (arcs, mut rows) = relation_matrix(diagram, m);
    let ncols = arcs.len();
    let inv = |a: i64| -> i64 {
        // Fermat inverse mod p
        let mut r = 1i64;
        let mut b = a.rem_euclid(m);
        let mut e = m - 2;
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % m;
            }
            b = b * b % m;
            e >>= 1;
        }
        r
    };
    let mut pivot_cols = Vec::new();
    let mut rank_rows = 0usize;
    for col in 0..ncols {
        let piv = (rank_rows..rows.len()).find(|&r| rows[r][col] % m != 0);
        let Some(piv) = piv else { continue };
        rows.swap(rank_rows, piv);
        let iv = inv(rows[rank_rows][col]);
        for x in rows[rank_rows].iter_mut() {
            *x = *x * iv % m;
        }
        for r in 0..rows.len() {
            if r != rank_rows && rows[r][col] != 0 {
                let f = rows[r][col];
                for cix in 0..ncols {
                    rows[r][cix] = (rows[r][cix] - f * rows[rank_rows][cix]).rem_euclid(m);
                }
            }
        }
        pivot_cols.push(col);
        rank_rows += 1;
        if rank_rows == rows.len() {
            break;
        }
    }
    let free_cols: Vec<usize> = (0..ncols).filter(|c| !pivot_cols.contains(c)).collect();
    let mut basis = Vec::new();
    for &fc in &free_cols {
        let mut v = vec![0i64; ncols];
        v[fc] = 1;
        for (ri, &pc) in pivot_cols.iter().enumerate() {
            v[pc] = (-rows[ri][fc]).rem_euclid(m);
        }
        basis.push(v.into_iter().map(|x| x as u32).collect::<Vec<u32>>());
    }
    ColoringSpace {
        p: p.get(),
        arc_order: arcs,
        rank: basis.len(),
        basis,
    }
}

pub fn is_colorable(diagram: &Diagram, p: Prime) -> bool {
    coloring_space(diagram, p).rank >= 2
}

/// Knot determinant: |det| of the relation matrix with the last row and
/// column deleted, over the integers. For prime p, the diagram is p-colorable
/// exactly when p divides this value.
pub fn determinant(diagram: &Diagram) -> u64 {
    if diagram.crossing_count() == 0 {
        return 1;
    }
    let (_, rows) = relation_matrix(diagram, 0);
    let n = rows.len();
    let reduced: Vec<Vec<i64>> = rows[..n - 1]
        .iter()
        .map(|r| r[..n - 1].to_vec())
        .collect();
    det_i64(reduced).unsigned_abs()
}

/// All nontrivial colorings as coefficient sweeps over a kernel basis whose
/// first vector is the all-ones coloring; capped at `limit`.
pub fn enumerate_nontrivial(
    diagram: &Diagram,
    p: Prime,
    limit: usize,
) -> Result<Vec<FoxColoring>, ColoringError> {
    let space = coloring_space(diagram, p);
    if space.rank < 2 {
        return Err(ColoringError::NotColorable(space.rank));
    }
    let space = normalize_ones_first(space);
    let pv = p.get();
    let mut out = Vec::new();
    // coefficients (mu, lambda_1, ..): skip lambda = 0 (constants)
    let rank = space.rank;
    let mut coeffs = vec![0u32; rank];
    'outer: loop {
        if coeffs[1..].iter().any(|&c| c != 0) {
            let col = space.coloring_from_coeffs(&coeffs);
            debug_assert!(!col.is_constant());
            out.push(col);
            if out.len() >= limit {
                break;
            }
        }
        // odometer
        for i in (0..rank).rev() {
            coeffs[i] += 1;
            if coeffs[i] < pv {
                continue 'outer;
            }
            coeffs[i] = 0;
        }
        break;
    }
    Ok(out)
}

/// Rearrange a kernel basis so the first vector is all-ones.
fn normalize_ones_first(space: ColoringSpace) -> ColoringSpace {
    let p = space.p as i64;
    let n = space.arc_order.len();
    // solve sum(c_i * basis_i) = ones by elimination over the basis columns
    let k = space.basis.len();
    let mut m: Vec<Vec<i64>> = (0..n)
        .map(|row| {
            let mut r: Vec<i64> = (0..k).map(|b| space.basis[b][row] as i64).collect();
            r.push(1);
            r
        })
        .collect();
    let inv = |a: i64| -> i64 {
        let mut r = 1i64;
        let mut b = a.rem_euclid(p);
        let mut e = p - 2;
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % p;
            }
            b = b * b % p;
            e >>= 1;
        }
        r
    };
    let mut pivots = Vec::new();
    let mut rr = 0usize;
    for col in 0..k {
        let piv = (rr..n).find(|&r| m[r][col] % p != 0);
        let Some(piv) = piv else { continue };
        m.swap(rr, piv);
        let iv = inv(m[rr][col]);
        for x in m[rr].iter_mut() {
            *x = *x * iv % p;
        }
        for r in 0..n {
            if r != rr && m[r][col] != 0 {
                let f = m[r][col];
                for c in 0..=k {
                    m[r][c] = (m[r][c] - f * m[rr][c]).rem_euclid(p);
                }
            }
        }
        pivots.push(col);
        rr += 1;
    }
    let mut coeff = vec![0u32; k];
    for (ri, &c) in pivots.iter().enumerate() {
        coeff[c] = m[ri][k].rem_euclid(p) as u32;
    }
    // first coefficient with nonzero value marks a basis vector we can swap out
    let lead = coeff
        .iter()
        .position(|&c| c != 0)
        .expect("all-ones lies in the kernel");
    let mut basis = space.basis.clone();
    let ones = vec![1u32; n];
    basis[lead] = ones;
    basis.swap(0, lead);
    ColoringSpace {
        p: space.p,
        arc_order: space.arc_order,
        rank: space.rank,
        basis,
    }
}

/// Find the recoloring that sends the image to the lexicographically least
/// set in its affine orbit and apply it.
pub fn normalize_coloring(coloring: &FoxColoring) -> FoxColoring {
    let p = Prime::new(coloring.p).expect("stored modulus is prime");
    let im = coloring.image_set();
    let mut best: Option<(Vec<u32>, AffineMap)> = None;
    for f in AffineMap::all(p) {
        let fs = f.image(&im);
        if best.as_ref().map_or(true, |(b, _)| fs < *b) {
            best = Some((fs, f));
        }
    }
    coloring.recolor(best.unwrap().1).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modp::half_raw;

    pub const TREFOIL: &str = "X(1,4,2,5);X(3,6,4,1);X(5,2,6,3)";
    pub const FIGURE8: &str = "X(4,2,5,1);X(8,6,1,5);X(6,3,7,4);X(2,7,3,8)";

    fn p(v: u32) -> Prime {
        Prime::new(v).unwrap()
    }

    #[test]
    fn trefoil_rank_and_det() {
        let d = Diagram::parse_pd(TREFOIL).unwrap();
        assert_eq!(determinant(&d), 3);
        assert_eq!(coloring_space(&d, p(3)).rank, 2);
        assert_eq!(coloring_space(&d, p(11)).rank, 1);
        assert!(is_colorable(&d, p(3)));
        assert!(!is_colorable(&d, p(11)));
    }

    #[test]
    fn figure8_rank_and_det() {
        let d = Diagram::parse_pd(FIGURE8).unwrap();
        assert_eq!(determinant(&d), 5);
        assert_eq!(coloring_space(&d, p(5)).rank, 2);
        assert!(is_colorable(&d, p(5)));
        assert!(!is_colorable(&d, p(3)));
    }

    #[test]
    fn unknot_rank() {
        let u = Diagram::unknot();
        assert_eq!(coloring_space(&u, p(11)).rank, 1);
        assert!(!is_colorable(&u, p(11)));
        assert_eq!(determinant(&u), 1);
        let kink = Diagram::parse_pd("X(1,1,2,2)").unwrap();
        assert_eq!(determinant(&kink), 1);
        assert_eq!(coloring_space(&kink, p(7)).rank, 1);
    }

    #[test]
    fn rank_matches_determinant_divisibility() {
        for pd in [TREFOIL, FIGURE8] {
            let d = Diagram::parse_pd(pd).unwrap();
            let det = determinant(&d);
            for pv in [3u32, 5, 7, 11, 13] {
                let colorable = is_colorable(&d, p(pv));
                assert_eq!(colorable, det % pv as u64 == 0, "pd={pd} p={pv}");
            }
        }
    }

    #[test]
    fn basis_vectors_are_colorings() {
        let d = Diagram::parse_pd(TREFOIL).unwrap();
        let space = coloring_space(&d, p(3));
        for v in &space.basis {
            let coloring = FoxColoring {
                p: 3,
                arcs: space
                    .arc_order
                    .iter()
                    .zip(v.iter())
                    .map(|(&a, &c)| (a, c))
                    .collect(),
            };
            coloring.validate(&d, p(3)).unwrap();
        }
        // all-ones is in the span
        let ones = normalize_ones_first(space);
        assert!(ones.basis[0].iter().all(|&x| x == 1));
    }

    #[test]
    fn trefoil_enumeration() {
        let d = Diagram::parse_pd(TREFOIL).unwrap();
        let all = enumerate_nontrivial(&d, p(3), 1000).unwrap();
        assert_eq!(all.len(), 6);
        for c in &all {
            c.validate(&d, p(3)).unwrap();
            assert!(!c.is_constant());
            check_palette_constraints(c, &d).unwrap();
        }
        assert!(matches!(
            enumerate_nontrivial(&Diagram::unknot(), p(3), 10),
            Err(ColoringError::NotColorable(1))
        ));
    }

    #[test]
    fn constant_coloring_image() {
        let d = Diagram::parse_pd(TREFOIL).unwrap();
        let arcs = d.arcs();
        let coloring = FoxColoring::new(
            &d,
            p(11),
            arcs.iter().map(|&a| (a, 4u32)).collect(),
        )
        .unwrap();
        let im = image(&coloring, &d).unwrap();
        assert_eq!(im.image, vec![4]);
        assert!(im.crossing_colors.iter().all(|&(a, c, b)| a == 4 && b == 4 && c == 4));
    }

    #[test]
    fn recolor_preserves_validity_and_image_size() {
        let d = Diagram::parse_pd(FIGURE8).unwrap();
        let cols = enumerate_nontrivial(&d, p(5), 5).unwrap();
        let pr = p(5);
        for c in cols {
            for f in AffineMap::all(pr) {
                let r = c.recolor(f).unwrap();
                r.validate(&d, pr).unwrap();
                assert_eq!(r.image_set().len(), c.image_set().len());
            }
            let id = AffineMap::identity(pr);
            assert_eq!(c.recolor(id).unwrap(), c);
        }
    }

    #[test]
    fn half_consistency_of_crossing_colors() {
        // at every crossing of a valid coloring the over color halves the sum
        let d = Diagram::parse_pd(FIGURE8).unwrap();
        let pr = p(5);
        for c in enumerate_nontrivial(&d, pr, 20).unwrap() {
            let im = image(&c, &d).unwrap();
            for &(a, mid, b) in &im.crossing_colors {
                assert_eq!(half_raw(pr, a, b), mid);
            }
        }
    }
}
