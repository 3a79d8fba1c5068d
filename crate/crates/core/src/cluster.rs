//! Seeds, mutation and the exchange graph.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use thiserror::Error;

use crate::laurent::{LaurentError, LaurentPoly};
use crate::quiver::{mutate_quiver, IceQuiver, QuiverError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ClusterError {
    #[error(transparent)]
    Laurent(#[from] LaurentError),
    #[error(transparent)]
    Quiver(#[from] QuiverError),
    #[error("exchange graph not closed after {limit} seeds")]
    LimitExceeded { limit: usize },
    #[error("malformed denominator: {0}")]
    MalformedDenominator(String),
    #[error("mutable vertices must be exactly 1..=n, found {0:?}")]
    MutableNotInitial(Vec<usize>),
}

#[derive(Clone, Debug)]
pub struct Seed {
    /// `variables[v - 1]` sits at vertex `v`.
    variables: Vec<LaurentPoly>,
    quiver: IceQuiver,
}

/// Quivers compare as arrow multisets; arrow ids are not part of a seed.
impl PartialEq for Seed {
    fn eq(&self, other: &Seed) -> bool {
        self.variables == other.variables
            && self.quiver.frozen() == other.quiver.frozen()
            && self.quiver.arrow_multiset() == other.quiver.arrow_multiset()
    }
}

impl Eq for Seed {}

/// Seed key invariant under relabeling mutable vertices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum End {
    Var(usize),
    Frozen(usize),
}

type SeedKey = (Vec<LaurentPoly>, Vec<(End, End)>);

impl Seed {
    pub fn variables(&self) -> &[LaurentPoly] {
        &self.variables
    }

    pub fn variable(&self, v: usize) -> &LaurentPoly {
        &self.variables[v - 1]
    }

    pub fn quiver(&self) -> &IceQuiver {
        &self.quiver
    }

    /// The cluster: variables at mutable vertices.
    pub fn cluster(&self) -> Vec<&LaurentPoly> {
        self.quiver
            .mutable_vertices()
            .into_iter()
            .map(|v| &self.variables[v - 1])
            .collect()
    }

    fn key(&self) -> SeedKey {
        let mutable = self.quiver.mutable_vertices();
        let mut cluster: Vec<LaurentPoly> = mutable
            .iter()
            .map(|&v| self.variables[v - 1].clone())
            .collect();
        cluster.sort();
        let end = |v: usize| {
            if self.quiver.is_frozen(v) {
                End::Frozen(v)
            } else {
                let x = &self.variables[v - 1];
                End::Var(
                    cluster
                        .binary_search(x)
                        .expect("variable is in its cluster"),
                )
            }
        };
        let mut arrows: Vec<(End, End)> = self
            .quiver
            .arrows()
            .iter()
            .map(|a| (end(a.source), end(a.target)))
            .collect();
        arrows.sort();
        (cluster, arrows)
    }
}

pub fn initial_seed(q: &IceQuiver) -> Seed {
    let m = q.num_vertices();
    Seed {
        variables: (1..=m)
            .map(|i| LaurentPoly::var(m, i).expect("index in range"))
            .collect(),
        quiver: q.clone(),
    }
}

/// `μ_k`: mutates the quiver and replaces `x_k` by the exchange quotient.
pub fn mutate(s: &Seed, k: usize) -> Result<Seed, ClusterError> {
    let quiver = mutate_quiver(&s.quiver, k)?;
    let m = s.quiver.num_vertices();
    let (ins, outs) = s.quiver.neighbors(k);
    let product = |vs: &[usize]| -> Result<LaurentPoly, LaurentError> {
        vs.iter()
            .try_fold(LaurentPoly::one(m), |acc, &v| acc.mul(&s.variables[v - 1]))
    };
    let numerator = product(&ins)?.add(&product(&outs)?)?;
    let fresh = numerator.divide_exact(&s.variables[k - 1])?;
    let mut variables = s.variables.clone();
    variables[k - 1] = fresh;
    Ok(Seed { variables, quiver })
}

pub fn catalan(k: usize) -> u128 {
    let mut c: u128 = 1;
    for i in 0..k as u128 {
        c = c * 2 * (2 * i + 1) / (i + 2);
    }
    c
}

/// Default exploration bound `10 · C_{n+1}` for `n` mutable vertices.
pub fn default_seed_limit(q: &IceQuiver) -> usize {
    let n = q.mutable_vertices().len();
    usize::try_from(catalan(n + 1).saturating_mul(10)).unwrap_or(usize::MAX)
}

#[derive(Clone, Debug)]
pub struct ExchangeGraph {
    /// Distinct seeds in discovery order; the initial seed comes first.
    pub seeds: Vec<Seed>,
    /// `(from, k, to)` for every mutation explored.
    pub edges: Vec<(usize, usize, usize)>,
    /// Every cluster variable seen, initial ones included.
    pub variables: BTreeSet<LaurentPoly>,
}

/// Breadth-first closure of the initial seed under all mutations.
pub fn exchange_graph(q: &IceQuiver, max_seeds: usize) -> Result<ExchangeGraph, ClusterError> {
    let start = initial_seed(q);
    let mutable = q.mutable_vertices();
    let mut index: HashMap<SeedKey, usize> = HashMap::new();
    index.insert(start.key(), 0);
    let mut seeds = vec![start];
    let mut edges = Vec::new();
    let mut queue = VecDeque::from([0usize]);
    while let Some(at) = queue.pop_front() {
        for &k in &mutable {
            let next = mutate(&seeds[at], k)?;
            let key = next.key();
            let to = match index.get(&key) {
                Some(&to) => to,
                None => {
                    if seeds.len() >= max_seeds {
                        return Err(ClusterError::LimitExceeded { limit: max_seeds });
                    }
                    let to = seeds.len();
                    index.insert(key, to);
                    seeds.push(next);
                    queue.push_back(to);
                    to
                }
            };
            edges.push((at, k, to));
        }
    }
    let variables = seeds
        .iter()
        .flat_map(|s| s.cluster().into_iter().cloned())
        .collect();
    Ok(ExchangeGraph {
        seeds,
        edges,
        variables,
    })
}

/// Numerators `f^[i,j]` keyed by interval, read off the exchange graph.
#[derive(Clone, Debug)]
pub struct ClusterVariableTable {
    pub n: usize,
    pub entries: BTreeMap<(usize, usize), LaurentPoly>,
    pub variables: BTreeSet<LaurentPoly>,
    pub seed_count: usize,
}

impl ClusterVariableTable {
    pub fn get(&self, i: usize, j: usize) -> Option<&LaurentPoly> {
        self.entries.get(&(i, j))
    }

    /// Cluster variables other than `x_1..x_n`.
    pub fn non_initial(&self) -> usize {
        self.variables.len() - self.n
    }
}

pub fn numerator_table(
    q: &IceQuiver,
    max_seeds: Option<usize>,
) -> Result<ClusterVariableTable, ClusterError> {
    let mutable = q.mutable_vertices();
    let n = mutable.len();
    if mutable != (1..=n).collect::<Vec<_>>() {
        return Err(ClusterError::MutableNotInitial(mutable));
    }
    let graph = exchange_graph(q, max_seeds.unwrap_or_else(|| default_seed_limit(q)))?;
    table_from_graph(q, &graph)
}

/// Numerator table of an exchange graph already explored from `q`.
pub fn table_from_graph(
    q: &IceQuiver,
    graph: &ExchangeGraph,
) -> Result<ClusterVariableTable, ClusterError> {
    let mutable = q.mutable_vertices();
    let n = mutable.len();
    if mutable != (1..=n).collect::<Vec<_>>() {
        return Err(ClusterError::MutableNotInitial(mutable));
    }
    let m = q.num_vertices();
    let initial: BTreeSet<LaurentPoly> = (1..=n)
        .map(|i| LaurentPoly::var(m, i).expect("index in range"))
        .collect();
    let mut entries = BTreeMap::new();
    for x in graph.variables.iter().filter(|x| !initial.contains(x)) {
        let (f, d) = x.strip_monomial()?;
        let support: Vec<usize> = (0..m).filter(|&k| d[k] != 0).map(|k| k + 1).collect();
        let interval = match (support.first(), support.last()) {
            (Some(&i), Some(&j))
                if j <= n
                    && support.len() == j - i + 1
                    && support.iter().all(|&k| d[k - 1] == 1) =>
            {
                (i, j)
            }
            _ => {
                return Err(ClusterError::MalformedDenominator(format!(
                    "{x} has denominator exponents {d:?}"
                )))
            }
        };
        let divisible = (1..=n).any(|k| f.terms().all(|(mono, _)| mono.exponents()[k - 1] > 0));
        if divisible {
            return Err(ClusterError::MalformedDenominator(format!(
                "numerator {f} of {x} is divisible by an initial variable"
            )));
        }
        if entries.insert(interval, f).is_some() {
            return Err(ClusterError::MalformedDenominator(format!(
                "interval {interval:?} occurs twice"
            )));
        }
    }
    let missing: Vec<(usize, usize)> = (1..=n)
        .flat_map(|i| (i..=n).map(move |j| (i, j)))
        .filter(|iv| !entries.contains_key(iv))
        .collect();
    if !missing.is_empty() {
        return Err(ClusterError::MalformedDenominator(format!(
            "no cluster variable for intervals {missing:?}"
        )));
    }
    Ok(ClusterVariableTable {
        n,
        entries,
        variables: graph.variables.clone(),
        seed_count: graph.seeds.len(),
    })
}
