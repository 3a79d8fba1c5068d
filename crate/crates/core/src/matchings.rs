//! Perfect matchings of angles and maximal discrete arrow subsets.

use std::collections::BTreeSet;

use serde::Serialize;
use thiserror::Error;

use crate::geometry::{Angle, GeometryError, Triangulation};
use crate::laurent::{LaurentError, LaurentPoly};
use crate::quiver::{
    arrow_info, quiver_of_triangulation, rho, ArrowId, IceQuiver, QuiverError, QuiverMode,
};

/// Largest arrow count the brute-force subset scan accepts.
pub const BRUTE_FORCE_LIMIT: usize = 22;
/// Largest arrow or vertex count the bitmask searches accept.
pub const MASK_LIMIT: usize = 128;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatchingsError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Quiver(#[from] QuiverError),
    #[error(transparent)]
    Laurent(#[from] LaurentError),
    #[error("{size} exceeds the search limit {limit}")]
    SizeLimit { size: usize, limit: usize },
    #[error("verification failed: {0}")]
    VerificationFailed(String),
}

/// One angle per triangle and one per marked vertex, sorted by triangle.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct AngleMatching(pub Vec<Angle>);

/// A set of arrow ids, ascending.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct DiscreteSubset(pub Vec<ArrowId>);

impl DiscreteSubset {
    pub fn from_ids(ids: impl IntoIterator<Item = ArrowId>) -> Self {
        let set: BTreeSet<ArrowId> = ids.into_iter().collect();
        DiscreteSubset(set.into_iter().collect())
    }

    fn mask(&self) -> u128 {
        self.0.iter().fold(0, |m, &a| m | 1u128 << a)
    }
}

#[derive(Clone, Copy, Debug)]
pub enum DiscreteMethod<'a> {
    /// Scan every arrow subset; at most [`BRUTE_FORCE_LIMIT`] arrows.
    BruteForce,
    /// Maximal independent sets of the conflict graph by pivoted backtracking.
    Backtrack,
    /// Images of the angle matchings of the given triangulation under `ρ`.
    ViaRho(&'a Triangulation),
}

pub fn enumerate_angle_matchings(t: &Triangulation) -> Vec<AngleMatching> {
    let m = t.n();
    let mut by_triangle: Vec<Vec<Angle>> = vec![Vec::new(); m + 1];
    for &a in t.angles() {
        by_triangle[a.triangle].push(a);
    }
    fn rec(
        i: usize,
        by_triangle: &[Vec<Angle>],
        used: &mut Vec<bool>,
        cur: &mut Vec<Angle>,
        out: &mut Vec<AngleMatching>,
    ) {
        if i == by_triangle.len() {
            out.push(AngleMatching(cur.clone()));
            return;
        }
        for &a in &by_triangle[i] {
            if !used[a.vertex] {
                used[a.vertex] = true;
                cur.push(a);
                rec(i + 1, by_triangle, used, cur, out);
                cur.pop();
                used[a.vertex] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(
        0,
        &by_triangle,
        &mut vec![false; m + 1],
        &mut Vec::new(),
        &mut out,
    );
    out.sort();
    out
}

fn monomial_sum<I, J>(nvars: usize, families: I) -> Result<LaurentPoly, LaurentError>
where
    I: IntoIterator<Item = J>,
    J: IntoIterator<Item = usize>,
{
    families
        .into_iter()
        .try_fold(LaurentPoly::zero(nvars), |acc, labels| {
            acc.add(&LaurentPoly::product_of_vars(nvars, labels)?)
        })
}

/// `Σ_A Π_{a ∈ A} x_{opposite side of a}` over the matchings of `T^[i,j]`.
pub fn angle_formula(t: &Triangulation, i: usize, j: usize) -> Result<LaurentPoly, MatchingsError> {
    let sub = t.subpolygon(i, j)?;
    let weights = enumerate_angle_matchings(&sub)
        .into_iter()
        .map(|a| {
            a.0.iter()
                .map(|&x| sub.opposite_arc(x))
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(monomial_sum(t.num_vars(), weights)?)
}

/// Conflict masks of the discreteness relation.
struct Conflicts {
    arrows: usize,
    /// `adj[a]` holds every `b` such that `{a, b}` is not discrete.
    adj: Vec<u128>,
    /// Arrows that are not even discrete on their own.
    bad: u128,
}

impl Conflicts {
    fn new(q: &IceQuiver) -> Result<Conflicts, MatchingsError> {
        let arrows = q.arrows().len();
        let verts = q.num_vertices() + 1;
        for size in [arrows, verts] {
            if size > MASK_LIMIT {
                return Err(MatchingsError::SizeLimit {
                    size,
                    limit: MASK_LIMIT,
                });
            }
        }
        // Reflexive reachability in the subquiver on mutable vertices.
        let mut reach: Vec<u128> = (0..verts).map(|v| 1u128 << v).collect();
        loop {
            let mut changed = false;
            for a in q.arrows() {
                if q.is_frozen(a.source) || q.is_frozen(a.target) {
                    continue;
                }
                let grown = reach[a.source] | reach[a.target];
                if grown != reach[a.source] {
                    reach[a.source] = grown;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        let blocks = |x: usize, y: usize| {
            let (a, b) = (q.arrow(x), q.arrow(y));
            !q.is_frozen(a.target) && !q.is_frozen(b.source) && reach[a.target] >> b.source & 1 == 1
        };
        let mut adj = vec![0u128; arrows];
        let mut bad = 0u128;
        for (x, row) in adj.iter_mut().enumerate() {
            if blocks(x, x) {
                bad |= 1 << x;
            }
            for y in 0..arrows {
                if x != y && (blocks(x, y) || blocks(y, x)) {
                    *row |= 1 << y;
                }
            }
        }
        Ok(Conflicts { arrows, adj, bad })
    }

    fn full(&self) -> u128 {
        if self.arrows == 128 {
            u128::MAX
        } else {
            (1u128 << self.arrows) - 1
        }
    }

    fn is_discrete(&self, set: u128) -> bool {
        set & self.bad == 0 && ones(set).all(|a| self.adj[a] & set == 0)
    }

    fn is_maximal_discrete(&self, set: u128) -> bool {
        self.is_discrete(set)
            && ones(self.full() & !set).all(|a| self.bad >> a & 1 == 1 || self.adj[a] & set != 0)
    }
}

fn ones(mut m: u128) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let b = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(b)
        }
    })
}

fn to_subset(mask: u128) -> DiscreteSubset {
    DiscreteSubset(ones(mask).collect())
}

/// Whether no path of length `>= 0` in the mutable part runs from a target to a source.
pub fn is_discrete(q: &IceQuiver, d: &DiscreteSubset) -> Result<bool, MatchingsError> {
    Ok(Conflicts::new(q)?.is_discrete(d.mask()))
}

pub fn is_maximal_discrete(q: &IceQuiver, d: &DiscreteSubset) -> Result<bool, MatchingsError> {
    Ok(Conflicts::new(q)?.is_maximal_discrete(d.mask()))
}

fn bron_kerbosch(c: &Conflicts, r: u128, mut p: u128, mut x: u128, out: &mut Vec<u128>) {
    if p == 0 && x == 0 {
        out.push(r);
        return;
    }
    let compatible = |v: usize| c.full() & !c.adj[v] & !c.bad & !(1u128 << v);
    let pivot = ones(p | x)
        .max_by_key(|&u| (p & compatible(u)).count_ones())
        .expect("p or x is non-empty");
    for v in ones(p & !compatible(pivot)) {
        let nv = compatible(v);
        bron_kerbosch(c, r | 1 << v, p & nv, x & nv, out);
        p &= !(1u128 << v);
        x |= 1 << v;
    }
}

pub fn enumerate_discrete_subsets(
    q: &IceQuiver,
    method: DiscreteMethod<'_>,
) -> Result<Vec<DiscreteSubset>, MatchingsError> {
    let mut out: Vec<DiscreteSubset> = match method {
        DiscreteMethod::BruteForce => {
            let n = q.arrows().len();
            if n > BRUTE_FORCE_LIMIT {
                return Err(MatchingsError::SizeLimit {
                    size: n,
                    limit: BRUTE_FORCE_LIMIT,
                });
            }
            let c = Conflicts::new(q)?;
            (0..1u128 << n)
                .filter(|&s| c.is_maximal_discrete(s))
                .map(to_subset)
                .collect()
        }
        DiscreteMethod::Backtrack => {
            let c = Conflicts::new(q)?;
            let mut found = Vec::new();
            bron_kerbosch(&c, 0, c.full() & !c.bad, 0, &mut found);
            found.into_iter().map(to_subset).collect()
        }
        DiscreteMethod::ViaRho(t) => {
            let own = quiver_of_triangulation(t, QuiverMode::Ice);
            if own != *q {
                return Err(QuiverError::NotFromTriangulation.into());
            }
            enumerate_angle_matchings(t)
                .iter()
                .map(|a| rho_image(t, a))
                .collect::<Result<_, _>>()?
        }
    };
    out.sort();
    Ok(out)
}

/// `ρ(A)`, checked to be maximal discrete in `Q̄_T`.
pub fn rho_image(t: &Triangulation, a: &AngleMatching) -> Result<DiscreteSubset, MatchingsError> {
    let q = quiver_of_triangulation(t, QuiverMode::Ice);
    let map = rho(t, &q)?;
    let ids =
        a.0.iter()
            .map(|x| map.get(x).copied().ok_or(GeometryError::UnknownAngle(*x)))
            .collect::<Result<Vec<_>, _>>()?;
    let d = DiscreteSubset::from_ids(ids);
    if d.0.len() != a.0.len() || !is_maximal_discrete(&q, &d)? {
        return Err(MatchingsError::VerificationFailed(format!(
            "image {:?} of {:?} is not maximal discrete",
            d.0, a.0
        )));
    }
    Ok(d)
}

/// `Σ_D Π_{α ∈ D} x_{third side of α}` over the maximal discrete subsets of `Q̄^[i,j]`.
pub fn discrete_formula(
    t: &Triangulation,
    i: usize,
    j: usize,
) -> Result<LaurentPoly, MatchingsError> {
    let sub = t.subpolygon(i, j)?;
    let q = quiver_of_triangulation(&sub, QuiverMode::Ice);
    let info = arrow_info(&sub, &q)?;
    let families = enumerate_discrete_subsets(&q, DiscreteMethod::Backtrack)?;
    Ok(monomial_sum(
        t.num_vars(),
        families
            .iter()
            .map(|d| d.0.iter().map(|&a| info[a].third_arc).collect::<Vec<_>>()),
    )?)
}
