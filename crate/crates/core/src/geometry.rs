//! Triangulated polygons whose quiver is an oriented path.
//!
//! Corners are numbered `0..N` clockwise. A triangle with corners `a < b < c`
//! is therefore traversed clockwise as `a -> b -> c`, and its sides in
//! clockwise order are `ab`, `bc`, `ca`.
//!
//! Every [`Triangulation`] carries the canonical chain labeling: triangles
//! `Δ_0..Δ_m` where `Δ_k` holds diagonals `k` and `k+1`, marked vertices
//! `v_0..v_m`, and the angle set `A(T)`. Arc labels are kept verbatim, so a
//! subpolygon still reads weights through the labels of the full polygon.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Label of an arc (diagonal or boundary side); doubles as a variable index.
pub type Label = usize;
/// Polygon corner index, clockwise from 0.
pub type Corner = usize;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeometryError {
    #[error("a triangulated polygon needs at least one diagonal")]
    NoDiagonals,
    #[error("orientation has length {got}, expected {expected}")]
    OrientationLength { expected: usize, got: usize },
    #[error("unknown orientation symbol {0:?} (use F or B)")]
    OrientationSymbol(char),
    #[error("polygon has {corners} corners, expected {expected}")]
    CornerCount { corners: usize, expected: usize },
    #[error("arc {0} does not join two non-adjacent corners of the polygon")]
    DegenerateDiagonal(Label),
    #[error("diagonals {0} and {1} cross")]
    CrossingDiagonals(Label, Label),
    #[error("only {got} non-crossing diagonals, a triangulation needs {expected}")]
    NotMaximal { expected: usize, got: usize },
    #[error("quiver is not an acyclic path: {0}")]
    NonAcyclicQuiver(String),
    #[error("bad labels: {0}")]
    BadLabels(String),
    #[error("boundary arcs do not form the polygon sides: {0}")]
    InvalidBoundary(String),
    #[error("interval [{i},{j}] is outside [1,{n}]")]
    IntervalOutOfRange { i: usize, j: usize, n: usize },
    #[error("angle a({},{}) is not in A(T)", .0.triangle, .0.vertex)]
    UnknownAngle(Angle),
    #[error("malformed triangulation document: {0}")]
    Schema(String),
}

/// Direction of the arrow between consecutive path vertices `k` and `k+1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Orientation {
    /// `k -> k+1`
    Forward,
    /// `k+1 -> k`
    Backward,
}

impl Orientation {
    pub fn parse_sequence(s: &str) -> Result<Vec<Orientation>, GeometryError> {
        s.chars()
            .filter(|c| !c.is_whitespace() && *c != ',')
            .map(|c| match c {
                'F' | 'f' => Ok(Orientation::Forward),
                'B' | 'b' => Ok(Orientation::Backward),
                other => Err(GeometryError::OrientationSymbol(other)),
            })
            .collect()
    }

    pub fn symbol(self) -> char {
        match self {
            Orientation::Forward => 'F',
            Orientation::Backward => 'B',
        }
    }

    /// All `2^(n-1)` orientations of the path with `n` vertices.
    pub fn all(n: usize) -> Vec<Vec<Orientation>> {
        let len = n.saturating_sub(1);
        (0..1usize << len)
            .map(|bits| {
                (0..len)
                    .map(|k| {
                        if bits >> (len - 1 - k) & 1 == 0 {
                            Orientation::Forward
                        } else {
                            Orientation::Backward
                        }
                    })
                    .collect()
            })
            .collect()
    }
}

pub fn orientation_string(o: &[Orientation]) -> String {
    o.iter().map(|x| x.symbol()).collect()
}

/// The angle `a_{ij}`: the corner of `Δ_i` at the marked vertex `v_j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Angle {
    pub triangle: usize,
    pub vertex: usize,
}

impl Angle {
    pub fn new(triangle: usize, vertex: usize) -> Self {
        Angle { triangle, vertex }
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "a{}{}", self.triangle, self.vertex)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Triangle {
    /// Ascending, hence clockwise.
    pub corners: [Corner; 3],
    /// `sides[k]` joins `corners[k]` and `corners[(k + 1) % 3]`.
    pub sides: [Label; 3],
}

impl Triangle {
    pub fn has_corner(&self, c: Corner) -> bool {
        self.corners.contains(&c)
    }

    pub fn has_side(&self, label: Label) -> bool {
        self.sides.contains(&label)
    }

    /// The side that does not touch corner `c`.
    pub fn side_opposite(&self, c: Corner) -> Option<Label> {
        let k = self.corners.iter().position(|&x| x == c)?;
        Some(self.sides[(k + 1) % 3])
    }

    /// The two sides meeting at corner `c`, as `(incoming, outgoing)` in the
    /// clockwise side cycle; the arrow at `c` runs from the first to the second.
    pub fn sides_at(&self, c: Corner) -> Option<(Label, Label)> {
        let k = self.corners.iter().position(|&x| x == c)?;
        Some((self.sides[(k + 2) % 3], self.sides[k]))
    }

    /// The side following `label` clockwise.
    pub fn next_side(&self, label: Label) -> Option<Label> {
        let k = self.sides.iter().position(|&s| s == label)?;
        Some(self.sides[(k + 1) % 3])
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Triangulation {
    num_vars: usize,
    corners: usize,
    /// Diagonal labels in chain order.
    diagonals: Vec<Label>,
    /// `boundary[c]` labels the side `{c, c+1 mod N}`.
    boundary: Vec<Label>,
    ends: BTreeMap<Label, (Corner, Corner)>,
    triangles: Vec<Triangle>,
    marked: Vec<Corner>,
    angles: Vec<Angle>,
}

fn chord(a: Corner, b: Corner) -> (Corner, Corner) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

fn crosses(p: (Corner, Corner), q: (Corner, Corner)) -> bool {
    let (a, b) = p;
    let (c, d) = q;
    (a < c && c < b && b < d) || (c < a && a < d && d < b)
}

impl Triangulation {
    /// Builds and canonically labels a triangulation.
    ///
    /// `diagonals` lists `(label, ends)` in chain order; `boundary[c]` is the
    /// label of the side `{c, c+1 mod corners}`. `num_vars` is the number of
    /// variables weights live in (for a full polygon, `2n + 3`).
    pub fn from_raw(
        num_vars: usize,
        corners: usize,
        diagonals: &[(Label, (Corner, Corner))],
        boundary: &[Label],
    ) -> Result<Triangulation, GeometryError> {
        if diagonals.is_empty() {
            return Err(GeometryError::NoDiagonals);
        }
        if boundary.len() != corners {
            return Err(GeometryError::InvalidBoundary(format!(
                "{} boundary labels for {} corners",
                boundary.len(),
                corners
            )));
        }
        let mut ends = BTreeMap::new();
        for (c, &label) in boundary.iter().enumerate() {
            if ends.insert(label, chord(c, (c + 1) % corners)).is_some() {
                return Err(GeometryError::BadLabels(format!(
                    "label {label} used twice"
                )));
            }
        }
        for &(label, (a, b)) in diagonals {
            let adjacent = (a + 1) % corners == b || (b + 1) % corners == a;
            if a == b || a >= corners || b >= corners || adjacent {
                return Err(GeometryError::DegenerateDiagonal(label));
            }
            if ends.insert(label, chord(a, b)).is_some() {
                return Err(GeometryError::BadLabels(format!(
                    "label {label} used twice"
                )));
            }
        }
        for (x, &(la, pa)) in diagonals.iter().enumerate() {
            for &(lb, pb) in &diagonals[x + 1..] {
                let (pa, pb) = (chord(pa.0, pa.1), chord(pb.0, pb.1));
                if pa == pb || crosses(pa, pb) {
                    return Err(GeometryError::CrossingDiagonals(la, lb));
                }
            }
        }
        if diagonals.len() + 3 != corners {
            return Err(GeometryError::NotMaximal {
                expected: corners.saturating_sub(3),
                got: diagonals.len(),
            });
        }
        if let Some(&l) = ends.keys().find(|&&l| l == 0 || l > num_vars) {
            return Err(GeometryError::BadLabels(format!(
                "label {l} outside 1..={num_vars}"
            )));
        }

        let by_chord: BTreeMap<(Corner, Corner), Label> =
            ends.iter().map(|(&l, &p)| (p, l)).collect();
        let mut all_triangles = Vec::new();
        for a in 0..corners {
            for b in a + 1..corners {
                let Some(&ab) = by_chord.get(&(a, b)) else {
                    continue;
                };
                for c in b + 1..corners {
                    if let (Some(&bc), Some(&ac)) = (by_chord.get(&(b, c)), by_chord.get(&(a, c))) {
                        all_triangles.push(Triangle {
                            corners: [a, b, c],
                            sides: [ab, bc, ac],
                        });
                    }
                }
            }
        }
        debug_assert_eq!(all_triangles.len(), corners - 2);

        let diag_labels: Vec<Label> = diagonals.iter().map(|d| d.0).collect();
        let diag_set: BTreeSet<Label> = diag_labels.iter().copied().collect();
        if let Some(t) = all_triangles
            .iter()
            .find(|t| t.sides.iter().all(|s| diag_set.contains(s)))
        {
            return Err(GeometryError::NonAcyclicQuiver(format!(
                "internal triangle with sides {:?}",
                t.sides
            )));
        }

        let m = diag_labels.len();
        let containing = |label: Label| -> Vec<usize> {
            (0..all_triangles.len())
                .filter(|&t| all_triangles[t].has_side(label))
                .collect()
        };
        let mut chain: Vec<usize> = Vec::with_capacity(m + 1);
        if m == 1 {
            // Both triangles hold the single diagonal; Δ_1 is the one carrying
            // the largest boundary label.
            let pair = containing(diag_labels[0]);
            let max_boundary = |t: usize| {
                all_triangles[t]
                    .sides
                    .iter()
                    .filter(|s| !diag_set.contains(s))
                    .max()
                    .copied()
            };
            let (d0, d1) = if max_boundary(pair[0]) > max_boundary(pair[1]) {
                (pair[1], pair[0])
            } else {
                (pair[0], pair[1])
            };
            chain.push(d0);
            chain.push(d1);
        } else {
            let mut middle = Vec::with_capacity(m - 1);
            for k in 0..m - 1 {
                let (dk, dk1) = (diag_labels[k], diag_labels[k + 1]);
                let t = (0..all_triangles.len())
                    .find(|&t| all_triangles[t].has_side(dk) && all_triangles[t].has_side(dk1))
                    .ok_or_else(|| {
                        GeometryError::NonAcyclicQuiver(format!(
                            "diagonals {dk} and {dk1} share no triangle"
                        ))
                    })?;
                middle.push(t);
            }
            let first = containing(diag_labels[0])
                .into_iter()
                .find(|&t| t != middle[0])
                .expect("a diagonal borders two triangles");
            let last = containing(diag_labels[m - 1])
                .into_iter()
                .find(|&t| t != middle[m - 2])
                .expect("a diagonal borders two triangles");
            chain.push(first);
            chain.extend(middle);
            chain.push(last);
        }
        let distinct: BTreeSet<usize> = chain.iter().copied().collect();
        if distinct.len() != m + 1 {
            return Err(GeometryError::NonAcyclicQuiver(
                "diagonal labels do not follow the triangle chain".into(),
            ));
        }
        let triangles: Vec<Triangle> = chain.iter().map(|&t| all_triangles[t].clone()).collect();

        let endpoints = |k: usize| ends[&diag_labels[k]];
        let shared = |k: usize| -> Corner {
            let (a, b) = endpoints(k);
            let (c, d) = endpoints(k + 1);
            if a == c || a == d {
                a
            } else {
                debug_assert!(b == c || b == d);
                b
            }
        };
        let other_end = |k: usize, c: Corner| -> Corner {
            let (a, b) = endpoints(k);
            if a == c {
                b
            } else {
                a
            }
        };
        let mut marked = Vec::with_capacity(m + 1);
        if m == 1 {
            // v_1 is where diagonal 1 ends when Δ_1 is walked clockwise.
            let t = &triangles[1];
            let k = t.sides.iter().position(|&s| s == diag_labels[0]).unwrap();
            let head = t.corners[(k + 1) % 3];
            marked.push(other_end(0, head));
            marked.push(head);
        } else {
            let v1 = shared(0);
            marked.push(other_end(0, v1));
            marked.push(v1);
            for k in 1..m {
                marked.push(other_end(k, shared(k - 1)));
            }
        }

        let mut angles = Vec::new();
        for (i, t) in triangles.iter().enumerate() {
            for (j, &v) in marked.iter().enumerate() {
                if t.has_corner(v) {
                    angles.push(Angle::new(i, j));
                }
            }
        }

        Ok(Triangulation {
            num_vars,
            corners,
            diagonals: diag_labels,
            boundary: boundary.to_vec(),
            ends,
            triangles,
            marked,
            angles,
        })
    }

    /// Glues `Δ_k` onto diagonal `k` for `k = 1..n`, placing diagonal `k+1`
    /// clockwise after `k` in `Δ_k` exactly when `orientation[k-1]` is
    /// [`Orientation::Forward`]. Boundary arcs are labeled `n+1, ..., 2n+3`
    /// counterclockwise, starting at the side of `Δ_0` away from `v_0`.
    pub fn from_orientation(
        n: usize,
        orientation: &[Orientation],
    ) -> Result<Triangulation, GeometryError> {
        if n == 0 {
            return Err(GeometryError::NoDiagonals);
        }
        if orientation.len() != n - 1 {
            return Err(GeometryError::OrientationLength {
                expected: n - 1,
                got: orientation.len(),
            });
        }
        // Abstract vertex ids; Δ_0 = (0, 1, 2) clockwise with diagonal 1 = {1, 2}.
        let mut cycle: Vec<usize> = vec![0, 1, 2];
        let mut diag_ends: Vec<(usize, usize)> = vec![(1, 2)];
        for k in 0..n {
            let (u, w) = diag_ends[k];
            let r = cycle.len();
            let pos = cycle.iter().position(|&x| x == u).unwrap();
            debug_assert_eq!(cycle[(pos + 1) % cycle.len()], w);
            cycle.insert(pos + 1, r);
            if k + 1 < n {
                diag_ends.push(match orientation[k] {
                    Orientation::Forward => (u, r),
                    Orientation::Backward => (r, w),
                });
            }
        }
        let corners = n + 3;
        let corner_of: BTreeMap<usize, Corner> =
            cycle.iter().enumerate().map(|(c, &v)| (v, c)).collect();
        let diagonals: Vec<(Label, (Corner, Corner))> = diag_ends
            .iter()
            .enumerate()
            .map(|(k, &(u, w))| (k + 1, chord(corner_of[&u], corner_of[&w])))
            .collect();
        let boundary: Vec<Label> = (0..corners)
            .map(|c| if c == 0 { n + 1 } else { 2 * n + 4 - c })
            .collect();
        Triangulation::from_raw(2 * n + 3, corners, &diagonals, &boundary)
    }

    /// Parses the JSON document form, either explicit chords or an orientation.
    pub fn from_json(doc: &serde_json::Value) -> Result<Triangulation, GeometryError> {
        let doc: TriangulationDoc = serde_json::from_value(doc.clone())
            .map_err(|e| GeometryError::Schema(e.to_string()))?;
        doc.build()
    }

    pub fn from_json_str(s: &str) -> Result<Triangulation, GeometryError> {
        let v: serde_json::Value =
            serde_json::from_str(s).map_err(|e| GeometryError::Schema(e.to_string()))?;
        Triangulation::from_json(&v)
    }

    /// Explicit-chord document; parsing it back yields an equal triangulation.
    pub fn to_doc(&self) -> TriangulationDoc {
        let arc = |l: Label| ArcDoc {
            label: l,
            ends: [self.ends[&l].0, self.ends[&l].1],
        };
        let mut boundary: Vec<ArcDoc> = self.boundary.iter().map(|&l| arc(l)).collect();
        boundary.sort_by_key(|a| a.label);
        TriangulationDoc {
            n: self.n(),
            corners: Some(self.corners),
            diagonals: Some(self.diagonals.iter().map(|&l| arc(l)).collect()),
            boundary: Some(boundary),
            orientation: None,
        }
    }

    /// The subpolygon `T^[i,j]` spanned by `Δ_{i-1}..Δ_j`, with diagonals at
    /// chain positions `i..=j` (1-based). Arc labels are kept unchanged.
    pub fn subpolygon(&self, i: usize, j: usize) -> Result<Triangulation, GeometryError> {
        let m = self.n();
        if i == 0 || i > j || j > m {
            return Err(GeometryError::IntervalOutOfRange { i, j, n: m });
        }
        let tris = &self.triangles[i - 1..=j];
        let kept: BTreeSet<Corner> = tris.iter().flat_map(|t| t.corners).collect();
        let kept: Vec<Corner> = kept.into_iter().collect();
        let index: BTreeMap<Corner, Corner> =
            kept.iter().enumerate().map(|(k, &c)| (c, k)).collect();
        let label_of: BTreeMap<(Corner, Corner), Label> =
            self.ends.iter().map(|(&l, &p)| (p, l)).collect();
        let size = kept.len();
        let boundary: Vec<Label> = (0..size)
            .map(|k| label_of[&chord(kept[k], kept[(k + 1) % size])])
            .collect();
        let diagonals: Vec<(Label, (Corner, Corner))> = self.diagonals[i - 1..j]
            .iter()
            .map(|&l| {
                let (a, b) = self.ends[&l];
                (l, chord(index[&a], index[&b]))
            })
            .collect();
        Triangulation::from_raw(self.num_vars, size, &diagonals, &boundary)
    }

    /// Number of diagonals.
    pub fn n(&self) -> usize {
        self.diagonals.len()
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn polygon_size(&self) -> usize {
        self.corners
    }

    /// Diagonal labels in chain order.
    pub fn diagonals(&self) -> &[Label] {
        &self.diagonals
    }

    /// Boundary labels, `boundary()[c]` being the side `{c, c+1}`.
    pub fn boundary(&self) -> &[Label] {
        &self.boundary
    }

    /// All arc labels (diagonals and boundary), ascending.
    pub fn arc_labels(&self) -> Vec<Label> {
        self.ends.keys().copied().collect()
    }

    pub fn is_diagonal(&self, label: Label) -> bool {
        self.diagonals.contains(&label)
    }

    pub fn arc_ends(&self, label: Label) -> Option<(Corner, Corner)> {
        self.ends.get(&label).copied()
    }

    pub fn triangles(&self) -> &[Triangle] {
        &self.triangles
    }

    pub fn triangle(&self, i: usize) -> &Triangle {
        &self.triangles[i]
    }

    pub fn marked_vertices(&self) -> &[Corner] {
        &self.marked
    }

    /// `A(T)`, sorted by triangle then vertex.
    pub fn angles(&self) -> &[Angle] {
        &self.angles
    }

    pub fn corner_of(&self, a: Angle) -> Result<Corner, GeometryError> {
        if self.angles.binary_search(&a).is_err() {
            return Err(GeometryError::UnknownAngle(a));
        }
        Ok(self.marked[a.vertex])
    }

    /// Side of `Δ_i` opposite the corner `v_j`.
    pub fn opposite_arc(&self, a: Angle) -> Result<Label, GeometryError> {
        let c = self.corner_of(a)?;
        Ok(self.triangles[a.triangle]
            .side_opposite(c)
            .expect("angle corner lies on its triangle"))
    }

    /// Orientation of the path quiver read off the triangle chain.
    pub fn orientation(&self) -> Vec<Orientation> {
        (1..self.n())
            .map(|k| {
                let t = &self.triangles[k];
                if t.next_side(self.diagonals[k - 1]) == Some(self.diagonals[k]) {
                    Orientation::Forward
                } else {
                    Orientation::Backward
                }
            })
            .collect()
    }

    /// Whether diagonals at chain positions `k-1, k, k+1` share a corner.
    pub fn is_fan_at(&self, k: usize) -> bool {
        if k < 2 || k + 1 > self.n() {
            return false;
        }
        let corners = |pos: usize| {
            let (a, b) = self.ends[&self.diagonals[pos - 1]];
            [a, b]
        };
        let (p, q, r) = (corners(k - 1), corners(k), corners(k + 1));
        p.iter().any(|c| q.contains(c) && r.contains(c))
    }
}

/// One arc in the JSON input schema.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArcDoc {
    pub label: Label,
    pub ends: [Corner; 2],
}

/// JSON input schema: explicit chords, or `{"n": 3, "orientation": "FF"}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TriangulationDoc {
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub corners: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diagonals: Option<Vec<ArcDoc>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub boundary: Option<Vec<ArcDoc>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orientation: Option<String>,
}

impl TriangulationDoc {
    pub fn build(&self) -> Result<Triangulation, GeometryError> {
        let n = self.n;
        if n == 0 {
            return Err(GeometryError::NoDiagonals);
        }
        if let Some(o) = &self.orientation {
            if self.diagonals.is_some() || self.boundary.is_some() {
                return Err(GeometryError::Schema(
                    "give either an orientation or explicit arcs, not both".into(),
                ));
            }
            return Triangulation::from_orientation(n, &Orientation::parse_sequence(o)?);
        }
        let (Some(diagonals), Some(boundary)) = (&self.diagonals, &self.boundary) else {
            return Err(GeometryError::Schema(
                "expected diagonals and boundary, or an orientation".into(),
            ));
        };
        let corners = self.corners.unwrap_or(n + 3);
        if corners != n + 3 {
            return Err(GeometryError::CornerCount {
                corners,
                expected: n + 3,
            });
        }
        for d in diagonals {
            let [a, b] = d.ends;
            let adjacent = (a + 1) % corners == b || (b + 1) % corners == a;
            if a == b || a >= corners || b >= corners || adjacent {
                return Err(GeometryError::DegenerateDiagonal(d.label));
            }
        }
        for (x, da) in diagonals.iter().enumerate() {
            for db in &diagonals[x + 1..] {
                let (pa, pb) = (chord(da.ends[0], da.ends[1]), chord(db.ends[0], db.ends[1]));
                if pa == pb || crosses(pa, pb) {
                    return Err(GeometryError::CrossingDiagonals(da.label, db.label));
                }
            }
        }
        if diagonals.len() < n {
            return Err(GeometryError::NotMaximal {
                expected: n,
                got: diagonals.len(),
            });
        }
        let diag_labels: BTreeSet<Label> = diagonals.iter().map(|d| d.label).collect();
        if diagonals.len() != n || diag_labels != (1..=n).collect() {
            return Err(GeometryError::BadLabels(format!(
                "diagonal labels {:?} are not exactly 1..={n}",
                diagonals.iter().map(|d| d.label).collect::<Vec<_>>()
            )));
        }
        let boundary_labels: BTreeSet<Label> = boundary.iter().map(|b| b.label).collect();
        if boundary.len() != n + 3 || boundary_labels != (n + 1..=2 * n + 3).collect() {
            return Err(GeometryError::BadLabels(format!(
                "boundary labels {:?} are not exactly {}..={}",
                boundary.iter().map(|b| b.label).collect::<Vec<_>>(),
                n + 1,
                2 * n + 3
            )));
        }
        let mut side_labels: Vec<Option<Label>> = vec![None; corners];
        for b in boundary {
            let [a, c] = b.ends;
            let start = if a < corners && (a + 1) % corners == c {
                a
            } else if c < corners && (c + 1) % corners == a {
                c
            } else {
                return Err(GeometryError::InvalidBoundary(format!(
                    "arc {} with ends {:?} is not a polygon side",
                    b.label, b.ends
                )));
            };
            if side_labels[start].replace(b.label).is_some() {
                return Err(GeometryError::InvalidBoundary(format!(
                    "side {{{a},{c}}} labeled twice"
                )));
            }
        }
        let boundary: Vec<Label> = side_labels.into_iter().map(Option::unwrap).collect();
        let mut sorted: Vec<&ArcDoc> = diagonals.iter().collect();
        sorted.sort_by_key(|d| d.label);
        let diagonals: Vec<(Label, (Corner, Corner))> = sorted
            .iter()
            .map(|d| (d.label, chord(d.ends[0], d.ends[1])))
            .collect();
        Triangulation::from_raw(2 * n + 3, corners, &diagonals, &boundary)
    }
}

/// Every triangulation of a convex polygon with `corners` corners, each as a
/// sorted list of chords. Enumerated by choosing the apex over side `{0, N-1}`.
pub fn all_triangulations(corners: usize) -> Vec<Vec<(Corner, Corner)>> {
    fn rec(lo: Corner, hi: Corner) -> Vec<Vec<(Corner, Corner)>> {
        if hi - lo < 2 {
            return vec![Vec::new()];
        }
        let mut out = Vec::new();
        for apex in lo + 1..hi {
            for left in rec(lo, apex) {
                for right in rec(apex, hi) {
                    let mut chords = left.clone();
                    chords.extend(right.iter().copied());
                    if apex - lo > 1 {
                        chords.push((lo, apex));
                    }
                    if hi - apex > 1 {
                        chords.push((apex, hi));
                    }
                    out.push(chords);
                }
            }
        }
        out
    }
    if corners < 3 {
        return Vec::new();
    }
    rec(0, corners - 1)
        .into_iter()
        .map(|mut c| {
            c.sort();
            c
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use Orientation::{Backward as B, Forward as F};

    fn explicit_hexagon() -> Triangulation {
        Triangulation::from_json_str(
            r#"{"n":3,"corners":6,
                "diagonals":[{"label":1,"ends":[1,5]},{"label":2,"ends":[1,4]},{"label":3,"ends":[1,3]}],
                "boundary":[{"label":4,"ends":[0,1]},{"label":9,"ends":[1,2]},{"label":8,"ends":[2,3]},
                            {"label":7,"ends":[3,4]},{"label":6,"ends":[4,5]},{"label":5,"ends":[5,0]}]}"#,
        )
        .unwrap()
    }

    fn angles(list: &[(usize, usize)]) -> Vec<Angle> {
        list.iter().map(|&(i, j)| Angle::new(i, j)).collect()
    }

    #[test]
    fn fan_from_orientation_matches_hexagon_figure() {
        let t = Triangulation::from_orientation(3, &[F, F]).unwrap();
        assert_eq!(t, explicit_hexagon());
        assert_eq!(t.boundary(), &[4, 9, 8, 7, 6, 5]);
        assert_eq!(t.arc_ends(1), Some((1, 5)));
        assert_eq!(t.arc_ends(3), Some((1, 3)));
        assert_eq!(t.marked_vertices(), &[5, 1, 4, 3]);
        assert_eq!(
            t.angles(),
            angles(&[
                (0, 0),
                (0, 1),
                (1, 0),
                (1, 1),
                (1, 2),
                (2, 1),
                (2, 2),
                (2, 3),
                (3, 1),
                (3, 3)
            ])
        );
    }

    #[test]
    fn square() {
        let t = Triangulation::from_orientation(1, &[]).unwrap();
        assert_eq!(t.polygon_size(), 4);
        assert_eq!(t.diagonals(), &[1]);
        let mut b = t.boundary().to_vec();
        b.sort();
        assert_eq!(b, vec![2, 3, 4, 5]);
        assert_eq!(t.triangles().len(), 2);
        let (a, c) = t.arc_ends(1).unwrap();
        let mut v = t.marked_vertices().to_vec();
        v.sort();
        assert_eq!(v, vec![a, c]);
        assert_eq!(t.angles(), angles(&[(0, 0), (0, 1), (1, 0), (1, 1)]));
        // Δ_1 carries the two largest boundary labels.
        let mut s: Vec<Label> = t
            .triangle(1)
            .sides
            .iter()
            .copied()
            .filter(|&l| l != 1)
            .collect();
        s.sort();
        assert_eq!(s, vec![4, 5]);
    }

    #[test]
    fn pentagon_angles() {
        let t = Triangulation::from_orientation(2, &[F]).unwrap();
        assert_eq!(
            t.angles(),
            angles(&[(0, 0), (0, 1), (1, 0), (1, 1), (1, 2), (2, 1), (2, 2)])
        );
        assert_eq!(t.orientation(), vec![F]);
    }

    #[test]
    fn octagon_labeling_figure() {
        // 1 -> 2 -> 3 <- 4 <- 5
        let t = Triangulation::from_orientation(5, &[F, F, B, B]).unwrap();
        let chords: Vec<_> = (1..=5).map(|l| t.arc_ends(l).unwrap()).collect();
        assert_eq!(chords, vec![(1, 7), (1, 6), (1, 5), (2, 5), (3, 5)]);
        assert_eq!(t.marked_vertices(), &[7, 1, 6, 5, 2, 3]);
        // The figure places a21 and a31 at v_1.
        assert_eq!(
            t.angles(),
            angles(&[
                (0, 0),
                (0, 1),
                (1, 0),
                (1, 1),
                (1, 2),
                (2, 1),
                (2, 2),
                (2, 3),
                (3, 1),
                (3, 3),
                (3, 4),
                (4, 3),
                (4, 4),
                (4, 5),
                (5, 3),
                (5, 5)
            ])
        );
    }

    #[test]
    fn rejects_bad_inputs() {
        assert_eq!(
            Triangulation::from_orientation(0, &[]),
            Err(GeometryError::NoDiagonals)
        );
        assert!(matches!(
            Triangulation::from_orientation(3, &[F]),
            Err(GeometryError::OrientationLength {
                expected: 2,
                got: 1
            })
        ));
        let internal = r#"{"n":3,"corners":6,
            "diagonals":[{"label":1,"ends":[0,2]},{"label":2,"ends":[2,4]},{"label":3,"ends":[4,0]}],
            "boundary":[{"label":4,"ends":[0,1]},{"label":5,"ends":[1,2]},{"label":6,"ends":[2,3]},
                        {"label":7,"ends":[3,4]},{"label":8,"ends":[4,5]},{"label":9,"ends":[5,0]}]}"#;
        assert!(matches!(
            Triangulation::from_json_str(internal),
            Err(GeometryError::NonAcyclicQuiver(_))
        ));
        let square_label_two = r#"{"n":1,"corners":4,
            "diagonals":[{"label":2,"ends":[0,2]}],
            "boundary":[{"label":3,"ends":[0,1]},{"label":4,"ends":[1,2]},{"label":5,"ends":[2,3]},
                        {"label":1,"ends":[3,0]}]}"#;
        assert!(matches!(
            Triangulation::from_json_str(square_label_two),
            Err(GeometryError::BadLabels(_))
        ));
        let crossing = r#"{"n":1,"corners":4,
            "diagonals":[{"label":1,"ends":[0,2]},{"label":2,"ends":[1,3]}],
            "boundary":[{"label":3,"ends":[0,1]},{"label":4,"ends":[1,2]},{"label":5,"ends":[2,3]},
                        {"label":6,"ends":[3,0]}]}"#;
        assert!(matches!(
            Triangulation::from_json_str(crossing),
            Err(GeometryError::CrossingDiagonals(1, 2))
        ));
        let sparse = r#"{"n":2,"corners":5,
            "diagonals":[{"label":1,"ends":[0,2]}],
            "boundary":[{"label":3,"ends":[0,1]},{"label":4,"ends":[1,2]},{"label":5,"ends":[2,3]},
                        {"label":6,"ends":[3,4]},{"label":7,"ends":[4,0]}]}"#;
        assert!(matches!(
            Triangulation::from_json_str(sparse),
            Err(GeometryError::NotMaximal {
                expected: 2,
                got: 1
            })
        ));
        // Mislabeled chain: diagonals 1 and 2 do not share a triangle.
        let mislabeled = r#"{"n":3,"corners":6,
            "diagonals":[{"label":1,"ends":[1,5]},{"label":3,"ends":[1,4]},{"label":2,"ends":[1,3]}],
            "boundary":[{"label":4,"ends":[0,1]},{"label":9,"ends":[1,2]},{"label":8,"ends":[2,3]},
                        {"label":7,"ends":[3,4]},{"label":6,"ends":[4,5]},{"label":5,"ends":[5,0]}]}"#;
        assert!(matches!(
            Triangulation::from_json_str(mislabeled),
            Err(GeometryError::NonAcyclicQuiver(_))
        ));
        assert!(matches!(
            Triangulation::from_json_str("{\"n\":2}"),
            Err(GeometryError::Schema(_))
        ));
    }

    #[test]
    fn subpolygons_of_hexagon() {
        let t = explicit_hexagon();
        let s = t.subpolygon(1, 2).unwrap();
        assert_eq!(s.polygon_size(), 5);
        assert_eq!(s.diagonals(), &[1, 2]);
        let b: BTreeSet<Label> = s.boundary().iter().copied().collect();
        assert_eq!(b, [3, 4, 5, 6, 7].into_iter().collect());
        assert_eq!(s.triangles()[0].sides, t.triangles()[0].sides);
        assert_eq!(s.num_vars(), 9);

        let sq = t.subpolygon(2, 2).unwrap();
        let b: BTreeSet<Label> = sq.boundary().iter().copied().collect();
        assert_eq!(b, [1, 3, 6, 7].into_iter().collect());

        assert_eq!(t.subpolygon(1, 3).unwrap(), t);
        assert!(matches!(
            t.subpolygon(2, 4),
            Err(GeometryError::IntervalOutOfRange { .. })
        ));
        assert!(t.subpolygon(0, 1).is_err());
        assert!(t.subpolygon(3, 2).is_err());
    }

    #[test]
    fn opposite_arcs() {
        let t = explicit_hexagon();
        assert_eq!(t.opposite_arc(Angle::new(0, 0)), Ok(4));
        assert_eq!(t.opposite_arc(Angle::new(1, 0)), Ok(2));
        assert_eq!(t.opposite_arc(Angle::new(3, 3)), Ok(9));
        assert_eq!(t.opposite_arc(Angle::new(3, 1)), Ok(8));
        assert_eq!(
            t.opposite_arc(Angle::new(0, 3)),
            Err(GeometryError::UnknownAngle(Angle::new(0, 3)))
        );
        let sq = Triangulation::from_orientation(1, &[]).unwrap();
        let v0 = sq.marked_vertices()[0];
        let opp = sq.opposite_arc(Angle::new(0, 0)).unwrap();
        assert!(!sq.is_diagonal(opp));
        let (a, b) = sq.arc_ends(opp).unwrap();
        assert!(a != v0 && b != v0);
    }

    #[test]
    fn triangulation_counts_are_catalan() {
        let counts: Vec<usize> = (3..=9).map(|k| all_triangulations(k).len()).collect();
        assert_eq!(counts, vec![1, 2, 5, 14, 42, 132, 429]);
    }

    #[test]
    fn json_round_trip() {
        for o in Orientation::all(4) {
            let t = Triangulation::from_orientation(4, &o).unwrap();
            let doc = serde_json::to_value(t.to_doc()).unwrap();
            assert_eq!(Triangulation::from_json(&doc).unwrap(), t);
        }
    }

    #[test]
    fn orientation_parsing() {
        assert_eq!(Orientation::parse_sequence("FB").unwrap(), vec![F, B]);
        assert_eq!(
            Orientation::parse_sequence("FX"),
            Err(GeometryError::OrientationSymbol('X'))
        );
        assert_eq!(Orientation::all(3).len(), 4);
        assert_eq!(Orientation::all(1), vec![Vec::<Orientation>::new()]);
    }

    #[test]
    fn fan_metadata() {
        let fan = Triangulation::from_orientation(3, &[F, F]).unwrap();
        assert!(fan.is_fan_at(2));
        let zig = Triangulation::from_orientation(3, &[F, B]).unwrap();
        assert!(!zig.is_fan_at(2));
    }
}
