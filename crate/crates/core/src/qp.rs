//! The quiver with potential of a triangulated polygon and its cuts.
//!
//! `Q̃` extends `Q̄_T` by internal arrows (between the two boundary sides of
//! an ear) and external arrows (one per corner carrying a diagonal, from the
//! side after the corner to the side before it). Arrows of `Q̄_T` keep their
//! ids, so minimal cuts compare directly with discrete subsets.

use std::collections::BTreeSet;

use serde::Serialize;
use thiserror::Error;

use crate::geometry::{Corner, GeometryError, Label, Triangulation};
use crate::laurent::{LaurentError, LaurentPoly};
use crate::quiver::{quiver_of_triangulation, ArrowId, QuiverMode};

pub const CUT_LIMIT: usize = 128;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QpError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Laurent(#[from] LaurentError),
    #[error("{size} arrows exceed the cut search limit {limit}")]
    SizeLimit { size: usize, limit: usize },
    #[error("verification failed: {0}")]
    VerificationFailed(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum ArrowClass {
    /// An arrow of `Q̄_T`.
    Ice,
    Internal,
    External,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct QpArrow {
    pub id: ArrowId,
    pub source: Label,
    pub target: Label,
    pub class: ArrowClass,
    /// Remaining side of the triangle holding the arrow; `None` for external arrows.
    pub third_arc: Option<Label>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CycleKind {
    Triangle(usize),
    Big(Corner),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PotentialCycle {
    pub arrows: Vec<ArrowId>,
    pub sign: i8,
    pub kind: CycleKind,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuiverWithPotential {
    pub num_vars: usize,
    pub vertices: BTreeSet<Label>,
    pub frozen: BTreeSet<Label>,
    pub arrows: Vec<QpArrow>,
    pub cycles: Vec<PotentialCycle>,
    /// Number of diagonals.
    pub rank: usize,
}

/// A set of arrow ids meeting every potential cycle exactly once.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Cut(pub Vec<ArrowId>);

impl QuiverWithPotential {
    pub fn arrows_of(&self, class: ArrowClass) -> impl Iterator<Item = &QpArrow> {
        self.arrows.iter().filter(move |a| a.class == class)
    }

    pub fn triangle_cycles(&self) -> impl Iterator<Item = &PotentialCycle> {
        self.cycles.iter().filter(|c| c.sign > 0)
    }

    pub fn big_cycles(&self) -> impl Iterator<Item = &PotentialCycle> {
        self.cycles.iter().filter(|c| c.sign < 0)
    }

    pub fn is_cut(&self, set: &[ArrowId]) -> bool {
        let set: BTreeSet<ArrowId> = set.iter().copied().collect();
        self.cycles
            .iter()
            .all(|c| c.arrows.iter().filter(|a| set.contains(a)).count() == 1)
    }
}

pub fn build_qp(t: &Triangulation) -> QuiverWithPotential {
    let ice = quiver_of_triangulation(t, QuiverMode::Ice);
    let mut arrows: Vec<QpArrow> = Vec::new();
    let find = |arrows: &[QpArrow], s: Label, d: Label| {
        arrows
            .iter()
            .find(|a| a.source == s && a.target == d && a.class != ArrowClass::External)
            .map(|a| a.id)
    };
    // Ice arrows in id order, tagged with their triangle's third side.
    for a in ice.arrows() {
        let third = t
            .triangles()
            .iter()
            .find_map(|tri| {
                (0..3).find_map(|k| {
                    (tri.sides[k] == a.source && tri.sides[(k + 1) % 3] == a.target)
                        .then_some(tri.sides[(k + 2) % 3])
                })
            })
            .expect("arrow of a triangle");
        arrows.push(QpArrow {
            id: a.id,
            source: a.source,
            target: a.target,
            class: ArrowClass::Ice,
            third_arc: Some(third),
        });
    }
    for tri in t.triangles() {
        for k in 0..3 {
            let (s, d) = (tri.sides[k], tri.sides[(k + 1) % 3]);
            if !t.is_diagonal(s) && !t.is_diagonal(d) {
                arrows.push(QpArrow {
                    id: arrows.len(),
                    source: s,
                    target: d,
                    class: ArrowClass::Internal,
                    third_arc: Some(tri.sides[(k + 2) % 3]),
                });
            }
        }
    }
    let size = t.polygon_size();
    let boundary = t.boundary();
    let has_diagonal = |c: Corner| {
        t.diagonals().iter().any(|&d| {
            let (a, b) = t.arc_ends(d).expect("diagonal");
            a == c || b == c
        })
    };
    let corners: Vec<Corner> = (0..size).filter(|&c| has_diagonal(c)).collect();
    let mut external = Vec::new();
    for &c in &corners {
        let (after, before) = (boundary[c], boundary[(c + size - 1) % size]);
        external.push(arrows.len());
        arrows.push(QpArrow {
            id: arrows.len(),
            source: after,
            target: before,
            class: ArrowClass::External,
            third_arc: None,
        });
    }

    let mut cycles = Vec::new();
    for (i, tri) in t.triangles().iter().enumerate() {
        let ids = (0..3)
            .map(|k| find(&arrows, tri.sides[k], tri.sides[(k + 1) % 3]).expect("triangle arrow"))
            .collect();
        cycles.push(PotentialCycle {
            arrows: ids,
            sign: 1,
            kind: CycleKind::Triangle(i),
        });
    }
    for (&c, &e) in corners.iter().zip(&external) {
        let (after, before) = (boundary[c], boundary[(c + size - 1) % size]);
        let mut ids = vec![e];
        let mut at = before;
        while at != after {
            let (next, _) = t
                .triangles()
                .iter()
                .filter_map(|tri| tri.sides_at(c))
                .map(|(inc, out)| (out, inc))
                .find(|&(_, inc)| inc == at)
                .expect("fan around a corner");
            ids.push(find(&arrows, at, next).expect("fan arrow"));
            at = next;
        }
        cycles.push(PotentialCycle {
            arrows: ids,
            sign: -1,
            kind: CycleKind::Big(c),
        });
    }

    let vertices: BTreeSet<Label> = t.arc_labels().into_iter().collect();
    let frozen = vertices
        .iter()
        .copied()
        .filter(|&l| !t.is_diagonal(l))
        .collect();
    QuiverWithPotential {
        num_vars: t.num_vars(),
        vertices,
        frozen,
        arrows,
        cycles,
        rank: t.n(),
    }
}

/// All cuts, by choosing one arrow for each cycle not yet met and
/// excluding every arrow that shares a cycle with a chosen one.
pub fn enumerate_cuts(qp: &QuiverWithPotential) -> Result<Vec<Cut>, QpError> {
    let n = qp.arrows.len();
    if n > CUT_LIMIT {
        return Err(QpError::SizeLimit {
            size: n,
            limit: CUT_LIMIT,
        });
    }
    let masks: Vec<u128> = qp
        .cycles
        .iter()
        .map(|c| c.arrows.iter().fold(0u128, |m, &a| m | 1 << a))
        .collect();
    // Arrows sharing a cycle with `a`, `a` excluded.
    let mut blocks = vec![0u128; n];
    for m in &masks {
        for (a, b) in blocks.iter_mut().enumerate() {
            if m >> a & 1 == 1 {
                *b |= m & !(1u128 << a);
            }
        }
    }
    fn rec(
        k: usize,
        masks: &[u128],
        blocks: &[u128],
        chosen: u128,
        banned: u128,
        out: &mut Vec<u128>,
    ) {
        let Some(&m) = masks.get(k) else {
            out.push(chosen);
            return;
        };
        match (m & chosen).count_ones() {
            1 => rec(k + 1, masks, blocks, chosen, banned, out),
            0 => {
                let mut free = m & !banned;
                while free != 0 {
                    let a = free.trailing_zeros() as usize;
                    free &= free - 1;
                    rec(
                        k + 1,
                        masks,
                        blocks,
                        chosen | 1 << a,
                        banned | blocks[a],
                        out,
                    );
                }
            }
            _ => {}
        }
    }
    let mut found = Vec::new();
    rec(0, &masks, &blocks, 0, 0, &mut found);
    let mut cuts: Vec<Cut> = found
        .into_iter()
        .map(|m| Cut((0..n).filter(|&a| m >> a & 1 == 1).collect()))
        .collect();
    cuts.sort();
    cuts.dedup();
    Ok(cuts)
}

/// Cuts of the minimum size `rank + 1`, checked to avoid external and internal arrows.
pub fn minimal_cuts(qp: &QuiverWithPotential) -> Result<Vec<Cut>, QpError> {
    let cuts: Vec<Cut> = enumerate_cuts(qp)?
        .into_iter()
        .filter(|c| c.0.len() == qp.rank + 1)
        .collect();
    for c in &cuts {
        if c.0.iter().any(|&a| qp.arrows[a].class != ArrowClass::Ice) {
            return Err(QpError::VerificationFailed(format!(
                "minimal cut {:?} leaves the ice quiver",
                c.0
            )));
        }
    }
    Ok(cuts)
}

/// `Σ_C Π_{α ∈ C} x_{third side of α}` over the minimal cuts of the QP of `T^[i,j]`.
pub fn cut_formula(t: &Triangulation, i: usize, j: usize) -> Result<LaurentPoly, QpError> {
    let sub = t.subpolygon(i, j)?;
    let qp = build_qp(&sub);
    let mut sum = LaurentPoly::zero(t.num_vars());
    for c in minimal_cuts(&qp)? {
        let labels =
            c.0.iter()
                .map(|&a| qp.arrows[a].third_arc.expect("ice arrows lie in triangles"));
        sum = sum.add(&LaurentPoly::product_of_vars(t.num_vars(), labels)?)?;
    }
    Ok(sum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Orientation::{self, Forward as F};
    use crate::matchings::{enumerate_discrete_subsets, DiscreteMethod};

    fn arrow_pairs(qp: &QuiverWithPotential, ids: &[ArrowId]) -> BTreeSet<(Label, Label)> {
        ids.iter()
            .map(|&a| (qp.arrows[a].source, qp.arrows[a].target))
            .collect()
    }

    fn brute_force_cuts(qp: &QuiverWithPotential) -> Vec<Cut> {
        let n = qp.arrows.len();
        assert!(n <= 20);
        let mut out = Vec::new();
        for m in 0u32..1 << n {
            let set: Vec<ArrowId> = (0..n).filter(|&a| m >> a & 1 == 1).collect();
            if qp.is_cut(&set) {
                out.push(Cut(set));
            }
        }
        out.sort();
        out
    }

    fn pentagon() -> Triangulation {
        Triangulation::from_orientation(2, &[F]).unwrap()
    }

    #[test]
    fn pentagon_qp() {
        let qp = build_qp(&pentagon());
        assert_eq!(qp.arrows.len(), 12);
        assert_eq!(qp.arrows_of(ArrowClass::Internal).count(), 2);
        assert_eq!(qp.arrows_of(ArrowClass::External).count(), 3);
        let ext: BTreeSet<(Label, Label)> = qp
            .arrows_of(ArrowClass::External)
            .map(|a| (a.source, a.target))
            .collect();
        assert_eq!(ext, [(7, 3), (4, 5), (5, 6)].into_iter().collect());
        assert_eq!(qp.triangle_cycles().count(), 3);
        assert_eq!(qp.big_cycles().count(), 3);
        let big: BTreeSet<BTreeSet<(Label, Label)>> = qp
            .big_cycles()
            .map(|c| arrow_pairs(&qp, &c.arrows))
            .collect();
        let expected: BTreeSet<BTreeSet<(Label, Label)>> = [
            vec![(7, 3), (3, 1), (1, 2), (2, 7)],
            vec![(4, 5), (5, 1), (1, 4)],
            vec![(5, 6), (6, 2), (2, 5)],
        ]
        .into_iter()
        .map(|v| v.into_iter().collect())
        .collect();
        assert_eq!(big, expected);
    }

    #[test]
    fn pentagon_cuts() {
        let qp = build_qp(&pentagon());
        let all = enumerate_cuts(&qp).unwrap();
        assert_eq!(all.len(), 14);
        assert_eq!(all, brute_force_cuts(&qp));
        let minimal: BTreeSet<BTreeSet<(Label, Label)>> = minimal_cuts(&qp)
            .unwrap()
            .iter()
            .map(|c| arrow_pairs(&qp, &c.0))
            .collect();
        // a1 = 3->1, a2 = 1->4, b1 = 1->2, b2 = 2->5, b3 = 5->1, c1 = 2->7, c3 = 6->2
        let expected: BTreeSet<BTreeSet<(Label, Label)>> = [
            [(3, 1), (5, 1), (6, 2)],
            [(1, 4), (1, 2), (6, 2)],
            [(1, 4), (2, 5), (2, 7)],
        ]
        .into_iter()
        .map(|v| v.into_iter().collect())
        .collect();
        assert_eq!(minimal, expected);
    }

    #[test]
    fn fan_minimal_cut_weights() {
        let t = Triangulation::from_orientation(3, &[F, F]).unwrap();
        let qp = build_qp(&t);
        assert_eq!(qp.triangle_cycles().count(), 4);
        assert_eq!(qp.big_cycles().count(), 4);
        let cuts = minimal_cuts(&qp).unwrap();
        let weights: BTreeSet<BTreeSet<Label>> = cuts
            .iter()
            .map(|c| {
                c.0.iter()
                    .map(|&a| qp.arrows[a].third_arc.unwrap())
                    .collect()
            })
            .collect();
        let expected: BTreeSet<BTreeSet<Label>> =
            [[4, 1, 7, 9], [4, 6, 3, 9], [4, 1, 2, 8], [5, 2, 3, 9]]
                .into_iter()
                .map(|s| s.into_iter().collect())
                .collect();
        assert_eq!(weights, expected);
        assert_eq!(enumerate_cuts(&qp).unwrap(), brute_force_cuts(&qp));
    }

    #[test]
    fn cut_size_bounds_and_discrete_agreement() {
        for n in 1..=5 {
            for o in Orientation::all(n) {
                let t = Triangulation::from_orientation(n, &o).unwrap();
                let qp = build_qp(&t);
                assert_eq!(qp.triangle_cycles().count(), n + 1);
                assert_eq!(qp.big_cycles().count(), n + 1);
                for c in enumerate_cuts(&qp).unwrap() {
                    assert!(c.0.len() > n);
                    let external =
                        c.0.iter()
                            .any(|&a| qp.arrows[a].class == ArrowClass::External);
                    assert_eq!(c.0.len() == n + 1, !external);
                }
                let q = quiver_of_triangulation(&t, QuiverMode::Ice);
                let discrete = enumerate_discrete_subsets(&q, DiscreteMethod::Backtrack).unwrap();
                let cuts: Vec<Vec<ArrowId>> = minimal_cuts(&qp)
                    .unwrap()
                    .into_iter()
                    .map(|c| c.0)
                    .collect();
                assert_eq!(cuts, discrete.into_iter().map(|d| d.0).collect::<Vec<_>>());
            }
        }
    }

    #[test]
    fn a_set_with_two_arrows_of_one_triangle_is_no_cut() {
        let qp = build_qp(&pentagon());
        let tri = &qp.cycles[0];
        assert!(!qp.is_cut(&tri.arrows[..2]));
        for c in enumerate_cuts(&qp).unwrap() {
            assert!(qp.is_cut(&c.0));
        }
    }

    #[test]
    fn subpolygon_formula() {
        let t = Triangulation::from_orientation(3, &[F, F]).unwrap();
        let f = cut_formula(&t, 1, 2).unwrap();
        assert_eq!(f.to_string(), "x1*x4*x7 + x2*x3*x5 + x3*x4*x6");
        assert_eq!(cut_formula(&t, 3, 3).unwrap().len(), 2);
    }
}
