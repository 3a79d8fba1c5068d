//! Quivers of triangulations, ice quivers and their mutation.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;
use thiserror::Error;

use crate::geometry::{Angle, Corner, Label, Triangulation};

pub type ArrowId = usize;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QuiverError {
    #[error("vertex {vertex} is outside 1..={count}")]
    VertexOutOfRange { vertex: usize, count: usize },
    #[error("vertex {0} is frozen")]
    FrozenVertex(usize),
    #[error("arrow {0} -> {1} is a loop or joins two frozen vertices")]
    BadArrow(usize, usize),
    #[error("quiver was not built from this triangulation")]
    NotFromTriangulation,
    #[error("arrow at corner {corner} of triangle {triangle} has no marked vertex")]
    UnmarkedCorner { triangle: usize, corner: Corner },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Arrow {
    pub id: ArrowId,
    pub source: usize,
    pub target: usize,
}

/// A quiver on vertices `1..=num_vertices` with a frozen subset.
/// Arrow ids are positions in `arrows`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IceQuiver {
    num_vertices: usize,
    frozen: BTreeSet<usize>,
    arrows: Vec<Arrow>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QuiverMode {
    /// `Q_T`: arrows between diagonals only.
    DiagonalsOnly,
    /// `Q̄_T`: every arrow with at least one diagonal end.
    Ice,
}

impl IceQuiver {
    pub fn new(
        num_vertices: usize,
        frozen: impl IntoIterator<Item = usize>,
        arrows: &[(usize, usize)],
    ) -> Result<IceQuiver, QuiverError> {
        let frozen: BTreeSet<usize> = frozen.into_iter().collect();
        for &v in &frozen {
            if v == 0 || v > num_vertices {
                return Err(QuiverError::VertexOutOfRange {
                    vertex: v,
                    count: num_vertices,
                });
            }
        }
        let mut out = Vec::with_capacity(arrows.len());
        for (id, &(s, t)) in arrows.iter().enumerate() {
            for v in [s, t] {
                if v == 0 || v > num_vertices {
                    return Err(QuiverError::VertexOutOfRange {
                        vertex: v,
                        count: num_vertices,
                    });
                }
            }
            if s == t || (frozen.contains(&s) && frozen.contains(&t)) {
                return Err(QuiverError::BadArrow(s, t));
            }
            out.push(Arrow {
                id,
                source: s,
                target: t,
            });
        }
        Ok(IceQuiver {
            num_vertices,
            frozen,
            arrows: out,
        })
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    pub fn frozen(&self) -> &BTreeSet<usize> {
        &self.frozen
    }

    pub fn is_frozen(&self, v: usize) -> bool {
        self.frozen.contains(&v)
    }

    pub fn mutable_vertices(&self) -> Vec<usize> {
        (1..=self.num_vertices)
            .filter(|v| !self.frozen.contains(v))
            .collect()
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn arrow(&self, id: ArrowId) -> Arrow {
        self.arrows[id]
    }

    /// Arrows as sorted `(source, target)` pairs with repetition.
    pub fn arrow_multiset(&self) -> Vec<(usize, usize)> {
        let mut v: Vec<(usize, usize)> = self.arrows.iter().map(|a| (a.source, a.target)).collect();
        v.sort_unstable();
        v
    }

    /// Vertices that some arrow touches.
    pub fn support(&self) -> BTreeSet<usize> {
        self.arrows
            .iter()
            .flat_map(|a| [a.source, a.target])
            .collect()
    }

    fn check_mutable(&self, k: usize) -> Result<(), QuiverError> {
        if k == 0 || k > self.num_vertices {
            return Err(QuiverError::VertexOutOfRange {
                vertex: k,
                count: self.num_vertices,
            });
        }
        if self.frozen.contains(&k) {
            return Err(QuiverError::FrozenVertex(k));
        }
        Ok(())
    }

    /// Sources of arrows into `k` and targets of arrows out of `k`, with repetition.
    pub fn neighbors(&self, k: usize) -> (Vec<usize>, Vec<usize>) {
        let ins = self
            .arrows
            .iter()
            .filter(|a| a.target == k)
            .map(|a| a.source)
            .collect();
        let outs = self
            .arrows
            .iter()
            .filter(|a| a.source == k)
            .map(|a| a.target)
            .collect();
        (ins, outs)
    }
}

/// Builds `Q_T` or `Q̄_T`. Arrow ids follow the triangle chain, then the
/// clockwise side order inside each triangle.
pub fn quiver_of_triangulation(t: &Triangulation, mode: QuiverMode) -> IceQuiver {
    let diagonals: BTreeSet<Label> = t.diagonals().iter().copied().collect();
    let mut arrows = Vec::new();
    for tri in t.triangles() {
        for k in 0..3 {
            let (s, d) = (tri.sides[k], tri.sides[(k + 1) % 3]);
            let keep = match mode {
                QuiverMode::DiagonalsOnly => diagonals.contains(&s) && diagonals.contains(&d),
                QuiverMode::Ice => diagonals.contains(&s) || diagonals.contains(&d),
            };
            if keep {
                arrows.push(Arrow {
                    id: arrows.len(),
                    source: s,
                    target: d,
                });
            }
        }
    }
    let num_vertices = match mode {
        QuiverMode::DiagonalsOnly => *diagonals.iter().max().expect("at least one diagonal"),
        QuiverMode::Ice => t.num_vars(),
    };
    let frozen = (1..=num_vertices)
        .filter(|v| !diagonals.contains(v))
        .collect();
    IceQuiver {
        num_vertices,
        frozen,
        arrows,
    }
}

/// Quiver mutation at a mutable vertex `k`. Opposite arrows cancel pairwise;
/// arrows of the result are sorted by `(source, target)` and renumbered.
pub fn mutate_quiver(q: &IceQuiver, k: usize) -> Result<IceQuiver, QuiverError> {
    q.check_mutable(k)?;
    let mut count: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for a in &q.arrows {
        *count.entry((a.source, a.target)).or_default() += 1;
    }
    let (ins, outs) = q.neighbors(k);
    let mut next: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for (&(s, t), &c) in &count {
        let key = if s == k || t == k { (t, s) } else { (s, t) };
        *next.entry(key).or_default() += c;
    }
    for &i in &ins {
        for &j in &outs {
            *next.entry((i, j)).or_default() += 1;
        }
    }
    let mut arrows = Vec::new();
    for (&(s, t), &c) in &next {
        if s == t || (q.is_frozen(s) && q.is_frozen(t)) {
            continue;
        }
        let back = next.get(&(t, s)).copied().unwrap_or(0);
        for _ in 0..c.saturating_sub(back) {
            arrows.push(Arrow {
                id: arrows.len(),
                source: s,
                target: t,
            });
        }
    }
    Ok(IceQuiver {
        num_vertices: q.num_vertices,
        frozen: q.frozen.clone(),
        arrows,
    })
}

/// Per-arrow data of `Q̄_T`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ArrowInfo {
    pub id: ArrowId,
    /// Index `i` of the triangle `Δ_i` holding the arrow.
    pub triangle: usize,
    /// Polygon corner the arrow turns around.
    pub corner: Corner,
    /// The side of the triangle that is neither source nor target.
    pub third_arc: Label,
    /// Next arrow of the triangle's 3-cycle, when it lies in `Q̄`.
    pub plus: Option<ArrowId>,
    /// Previous arrow of the triangle's 3-cycle, when it lies in `Q̄`.
    pub minus: Option<ArrowId>,
    /// `ρ⁻¹` of the arrow.
    pub angle: Angle,
}

/// Arrow metadata indexed by arrow id; `q` must be `Q̄_T` as built by
/// [`quiver_of_triangulation`].
pub fn arrow_info(t: &Triangulation, q: &IceQuiver) -> Result<Vec<ArrowInfo>, QuiverError> {
    let rebuilt = quiver_of_triangulation(t, QuiverMode::Ice);
    if rebuilt != *q {
        return Err(QuiverError::NotFromTriangulation);
    }
    let mut out = Vec::with_capacity(q.arrows.len());
    let mut slot: BTreeMap<(usize, usize), ArrowId> = BTreeMap::new();
    let mut id = 0;
    for (i, tri) in t.triangles().iter().enumerate() {
        for k in 0..3 {
            let (s, d) = (tri.sides[k], tri.sides[(k + 1) % 3]);
            let arrow = q.arrows.get(id);
            if arrow.is_some_and(|a| a.source == s && a.target == d) {
                slot.insert((i, k), id);
                id += 1;
            }
        }
    }
    for (i, tri) in t.triangles().iter().enumerate() {
        for k in 0..3 {
            let Some(&id) = slot.get(&(i, k)) else {
                continue;
            };
            let corner = tri.corners[(k + 1) % 3];
            let vertex = t
                .marked_vertices()
                .iter()
                .position(|&v| v == corner)
                .ok_or(QuiverError::UnmarkedCorner {
                    triangle: i,
                    corner,
                })?;
            out.push(ArrowInfo {
                id,
                triangle: i,
                corner,
                third_arc: tri.sides[(k + 2) % 3],
                plus: slot.get(&(i, (k + 1) % 3)).copied(),
                minus: slot.get(&(i, (k + 2) % 3)).copied(),
                angle: Angle::new(i, vertex),
            });
        }
    }
    out.sort_by_key(|a| a.id);
    Ok(out)
}

/// The bijection `ρ : A(T) -> Q̄_1` as a map from angles to arrow ids.
pub fn rho(t: &Triangulation, q: &IceQuiver) -> Result<BTreeMap<Angle, ArrowId>, QuiverError> {
    Ok(arrow_info(t, q)?
        .into_iter()
        .map(|a| (a.angle, a.id))
        .collect())
}
