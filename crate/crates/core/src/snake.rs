//! Snake graphs obtained by unfolding a triangulation along its diagonals.
//!
//! Tile `k` is the quadrilateral `Δ_{k-1} ∪ Δ_k` around diagonal `k`. Tiles
//! `k` and `k+1` are glued along the third side of `Δ_k`. Vertices start as
//! `(tile, corner)` pairs and are fused along each glued edge.

use std::collections::{BTreeMap, BTreeSet};

use petgraph::unionfind::UnionFind;
use serde::Serialize;
use thiserror::Error;

use crate::geometry::{Angle, Corner, GeometryError, Label, Triangulation};
use crate::laurent::{LaurentError, LaurentPoly};

pub type EdgeId = usize;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SnakeError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Laurent(#[from] LaurentError),
    #[error("verification failed: {0}")]
    VerificationFailed(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum EdgeKind {
    BoundaryEdge,
    TileDiagonal,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SnakeEdge {
    pub id: EdgeId,
    pub ends: (usize, usize),
    pub label: Label,
    pub kind: EdgeKind,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Tile {
    /// Label of the tile's diagonal.
    pub diagonal: Label,
    pub diagonal_edge: EdgeId,
    pub boundary_edges: [EdgeId; 4],
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum TripleShape {
    Straight,
    Zigzag,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SnakeGraph {
    pub num_vars: usize,
    pub num_vertices: usize,
    pub edges: Vec<SnakeEdge>,
    pub tiles: Vec<Tile>,
    /// Shape of the tile triple centered at tile position `p`, for `p = 2..m-1`.
    pub triples: Vec<TripleShape>,
    #[serde(skip)]
    tile_corners: Vec<BTreeMap<Corner, usize>>,
}

/// A perfect matching of the boundary-edge graph, as ascending edge ids.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct EdgeMatching(pub Vec<EdgeId>);

impl SnakeGraph {
    /// Snake graph of the whole triangulation, one tile per diagonal.
    pub fn of_triangulation(t: &Triangulation) -> SnakeGraph {
        let m = t.n();
        let diag = |p: usize| t.diagonals()[p - 1];
        // Slots are (tile position, corner) pairs.
        let mut slots: Vec<(usize, Corner)> = Vec::new();
        let mut slot_of: BTreeMap<(usize, Corner), usize> = BTreeMap::new();
        for p in 1..=m {
            let corners: BTreeSet<Corner> = t
                .triangle(p - 1)
                .corners
                .iter()
                .chain(t.triangle(p).corners.iter())
                .copied()
                .collect();
            for c in corners {
                slot_of.insert((p, c), slots.len());
                slots.push((p, c));
            }
        }
        let mut uf = UnionFind::<usize>::new(slots.len());
        for p in 1..m {
            let shared = third_side(t, p);
            let (a, b) = t.arc_ends(shared).expect("side of a triangle");
            for c in [a, b] {
                uf.union(slot_of[&(p, c)], slot_of[&(p + 1, c)]);
            }
        }
        let mut vertex_of_root: BTreeMap<usize, usize> = BTreeMap::new();
        let mut vertex = vec![0; slots.len()];
        for (s, v) in vertex.iter_mut().enumerate() {
            let root = uf.find(s);
            let next = vertex_of_root.len();
            *v = *vertex_of_root.entry(root).or_insert(next);
        }
        let tile_corners: Vec<BTreeMap<Corner, usize>> = (1..=m)
            .map(|p| {
                slot_of
                    .range((p, 0)..(p + 1, 0))
                    .map(|(&(_, c), &s)| (c, vertex[s]))
                    .collect()
            })
            .collect();

        let mut edges: Vec<SnakeEdge> = Vec::new();
        let mut known: BTreeMap<((usize, usize), Label), EdgeId> = BTreeMap::new();
        let mut tiles = Vec::with_capacity(m);
        for p in 1..=m {
            let at = &tile_corners[p - 1];
            let mut add = |label: Label, kind: EdgeKind, edges: &mut Vec<SnakeEdge>| {
                let (a, b) = t.arc_ends(label).expect("arc of the triangulation");
                let ends = (at[&a].min(at[&b]), at[&a].max(at[&b]));
                if kind == EdgeKind::BoundaryEdge {
                    if let Some(&id) = known.get(&(ends, label)) {
                        return id;
                    }
                }
                let id = edges.len();
                edges.push(SnakeEdge {
                    id,
                    ends,
                    label,
                    kind,
                });
                if kind == EdgeKind::BoundaryEdge {
                    known.insert((ends, label), id);
                }
                id
            };
            let d = diag(p);
            let mut boundary = Vec::with_capacity(4);
            for tri in [t.triangle(p - 1), t.triangle(p)] {
                for &s in tri.sides.iter().filter(|&&s| s != d) {
                    boundary.push(add(s, EdgeKind::BoundaryEdge, &mut edges));
                }
            }
            let diagonal_edge = add(d, EdgeKind::TileDiagonal, &mut edges);
            tiles.push(Tile {
                diagonal: d,
                diagonal_edge,
                boundary_edges: boundary.try_into().expect("a tile has four sides"),
            });
        }
        let triples = (2..m)
            .map(|p| {
                if t.is_fan_at(p) {
                    TripleShape::Zigzag
                } else {
                    TripleShape::Straight
                }
            })
            .collect();
        SnakeGraph {
            num_vars: t.num_vars(),
            num_vertices: vertex_of_root.len(),
            edges,
            tiles,
            triples,
            tile_corners,
        }
    }

    pub fn boundary_edges(&self) -> impl Iterator<Item = &SnakeEdge> {
        self.edges
            .iter()
            .filter(|e| e.kind == EdgeKind::BoundaryEdge)
    }

    /// The edge shared by tile positions `p` and `p + 1` (1-based).
    pub fn shared_edge(&self, p: usize) -> Option<EdgeId> {
        let (a, b) = (self.tiles.get(p - 1)?, self.tiles.get(p)?);
        a.boundary_edges
            .iter()
            .copied()
            .find(|e| b.boundary_edges.contains(e))
    }

    /// Vertex of tile position `p` sitting at polygon corner `c`.
    pub fn vertex_at(&self, p: usize, c: Corner) -> Option<usize> {
        self.tile_corners.get(p - 1)?.get(&c).copied()
    }

    pub fn label_of(&self, e: EdgeId) -> Label {
        self.edges[e].label
    }
}

/// Side of `Δ_p` other than diagonals `p` and `p+1` (chain positions).
fn third_side(t: &Triangulation, p: usize) -> Label {
    let (a, b) = (t.diagonals()[p - 1], t.diagonals()[p]);
    *t.triangle(p)
        .sides
        .iter()
        .find(|&&s| s != a && s != b)
        .expect("a triangle has three sides")
}

/// Snake graph `Ḡ^[i,j]`; dropping the tile diagonals gives `G^[i,j]`.
pub fn build_snake_graph(t: &Triangulation, i: usize, j: usize) -> Result<SnakeGraph, SnakeError> {
    Ok(SnakeGraph::of_triangulation(&t.subpolygon(i, j)?))
}

pub fn enumerate_edge_matchings(g: &SnakeGraph) -> Vec<EdgeMatching> {
    let mut incident: Vec<Vec<(usize, EdgeId)>> = vec![Vec::new(); g.num_vertices];
    for e in g.boundary_edges() {
        incident[e.ends.0].push((e.ends.1, e.id));
        incident[e.ends.1].push((e.ends.0, e.id));
    }
    fn rec(
        incident: &[Vec<(usize, EdgeId)>],
        covered: &mut Vec<bool>,
        cur: &mut Vec<EdgeId>,
        out: &mut Vec<EdgeMatching>,
    ) {
        let Some(v) = covered.iter().position(|&c| !c) else {
            let mut m = cur.clone();
            m.sort_unstable();
            out.push(EdgeMatching(m));
            return;
        };
        covered[v] = true;
        for &(w, e) in &incident[v] {
            if !covered[w] {
                covered[w] = true;
                cur.push(e);
                rec(incident, covered, cur, out);
                cur.pop();
                covered[w] = false;
            }
        }
        covered[v] = false;
    }
    let mut out = Vec::new();
    rec(
        &incident,
        &mut vec![false; g.num_vertices],
        &mut Vec::new(),
        &mut out,
    );
    out.sort();
    out
}

/// `Σ_P Π_{e ∈ P} x_{label(e)}` over the perfect matchings of `G^[i,j]`.
pub fn ms_formula(t: &Triangulation, i: usize, j: usize) -> Result<LaurentPoly, SnakeError> {
    let g = build_snake_graph(t, i, j)?;
    let mut sum = LaurentPoly::zero(t.num_vars());
    for m in enumerate_edge_matchings(&g) {
        sum = sum.add(&LaurentPoly::product_of_vars(
            t.num_vars(),
            m.0.iter().map(|&e| g.label_of(e)),
        )?)?;
    }
    Ok(sum)
}

/// The angle-to-edge map `φ : A(T) -> G_1`. The angle `a_{ij}` goes to the
/// side of `Δ_i` opposite `v_j`, read in the first tile containing `Δ_i`
/// whose diagonal ends at `v_j`.
pub fn build_phi(t: &Triangulation) -> Result<BTreeMap<Angle, EdgeId>, SnakeError> {
    build_phi_on(t, &SnakeGraph::of_triangulation(t))
}

pub fn build_phi_on(
    t: &Triangulation,
    g: &SnakeGraph,
) -> Result<BTreeMap<Angle, EdgeId>, SnakeError> {
    let m = t.n();
    let mut phi = BTreeMap::new();
    for &a in t.angles() {
        let corner = t.corner_of(a)?;
        let opposite = t.opposite_arc(a)?;
        let (x, y) = t.arc_ends(opposite).expect("side of a triangle");
        let mut lifts = BTreeSet::new();
        for p in [a.triangle, a.triangle + 1] {
            if p == 0 || p > m {
                continue;
            }
            let (u, w) = t.arc_ends(t.diagonals()[p - 1]).expect("diagonal");
            if u != corner && w != corner {
                continue;
            }
            let ends = {
                let (vx, vy) = (g.vertex_at(p, x), g.vertex_at(p, y));
                match (vx, vy) {
                    (Some(vx), Some(vy)) => (vx.min(vy), vx.max(vy)),
                    _ => continue,
                }
            };
            if let Some(e) = g.tiles[p - 1]
                .boundary_edges
                .iter()
                .map(|&e| g.edges[e])
                .find(|e| e.label == opposite && e.ends == ends)
            {
                lifts.insert(e.id);
            }
        }
        let mut lifts = lifts.into_iter();
        match (lifts.next(), lifts.next()) {
            (Some(e), None) => {
                phi.insert(a, e);
            }
            _ => {
                return Err(SnakeError::VerificationFailed(format!(
                    "angle {a} does not lift to a single snake edge"
                )))
            }
        }
    }
    Ok(phi)
}
