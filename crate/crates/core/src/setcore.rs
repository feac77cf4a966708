//! Canonical k-sets, hypergraphs and degree bookkeeping.
//!
//! Everything downstream (counting, sampling, structure analysis) works on
//! these types. Vertices are 1-based integers in `[1..n]`; a [`KSet`] is
//! always stored as a strictly increasing vertex list, which is the canonical
//! comparison/serialization form. Fixed-width bitmasks are derived on demand
//! for fast intersection tests when `n <= 128`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SetError {
    #[error("vertex {0} out of range [1..{1}]")]
    OutOfRange(u32, u32),
    #[error("duplicate vertex {0}")]
    DuplicateVertex(u32),
    #[error("ground sets differ: {0} vs {1}")]
    MismatchedGroundSet(u32, u32),
    #[error("edge already present in hypergraph")]
    DuplicateEdge,
    #[error("requested k={k} exceeds ground set n={n}")]
    KTooLarge { k: u32, n: u32 },
}

/// A k-subset of `[1..n]`, stored as a strictly increasing vertex list.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct KSet {
    vertices: Vec<u32>,
    n: u32,
}

impl KSet {
    /// Builds a k-set from the given vertices. Sorts its input; rejects
    /// duplicates and out-of-range entries.
    pub fn new(vertices: impl Into<Vec<u32>>, n: u32) -> Result<Self, SetError> {
        let mut vs: Vec<u32> = vertices.into();
        vs.sort_unstable();
        for w in vs.windows(2) {
            if w[0] == w[1] {
                return Err(SetError::DuplicateVertex(w[0]));
            }
        }
        for &v in &vs {
            if v < 1 || v > n {
                return Err(SetError::OutOfRange(v, n));
            }
        }
        Ok(KSet { vertices: vs, n })
    }

    pub fn vertices(&self) -> &[u32] {
        &self.vertices
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn k(&self) -> u32 {
        self.vertices.len() as u32
    }

    pub fn contains(&self, v: u32) -> bool {
        self.vertices.binary_search(&v).is_ok()
    }

    /// Bitmask over vertices 1..=n, bit `v-1` set. Only valid for `n <= 128`.
    pub fn mask128(&self) -> u128 {
        debug_assert!(self.n <= 128);
        self.vertices.iter().fold(0u128, |m, &v| m | 1u128 << (v - 1))
    }

    pub fn intersects(&self, other: &KSet) -> Result<bool, SetError> {
        if self.n != other.n {
            return Err(SetError::MismatchedGroundSet(self.n, other.n));
        }
        Ok(intersects_sorted(&self.vertices, &other.vertices))
    }

    pub fn is_disjoint(&self, other: &KSet) -> bool {
        !intersects_sorted(&self.vertices, &other.vertices)
    }

    pub fn is_subset_of(&self, other: &KSet) -> bool {
        self.vertices.iter().all(|v| other.contains(*v))
    }
}

/// Merge-walk intersection test on two sorted slices.
pub fn intersects_sorted(a: &[u32], b: &[u32]) -> bool {
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => return true,
        }
    }
    false
}

/// Canonical text form: comma-separated sorted vertices.
impl fmt::Display for KSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for v in &self.vertices {
            if !first {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
            first = false;
        }
        Ok(())
    }
}

/// Parses the canonical comma-separated form. The ground-set size is not part
/// of the text form, so the parser takes it separately via [`KSet::parse`].
impl KSet {
    pub fn parse(s: &str, n: u32) -> Result<Self, SetError> {
        let vs: Result<Vec<u32>, _> = s
            .split(',')
            .map(|t| u32::from_str(t.trim()).map_err(|_| SetError::OutOfRange(0, n)))
            .collect();
        KSet::new(vs?, n)
    }
}

/// An ordered sequence of accepted edges, all with the same `(n, k)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hypergraph {
    n: u32,
    k: u32,
    edges: Vec<KSet>,
}

impl Hypergraph {
    pub fn new(n: u32, k: u32) -> Self {
        Hypergraph { n, k, edges: Vec::new() }
    }

    pub fn from_edges(n: u32, k: u32, edges: Vec<KSet>) -> Result<Self, SetError> {
        let mut h = Hypergraph::new(n, k);
        for e in edges {
            h.push(e)?;
        }
        Ok(h)
    }

    pub fn push(&mut self, edge: KSet) -> Result<(), SetError> {
        if edge.n() != self.n {
            return Err(SetError::MismatchedGroundSet(edge.n(), self.n));
        }
        if edge.k() != self.k {
            return Err(SetError::KTooLarge { k: edge.k(), n: self.k });
        }
        if self.edges.contains(&edge) {
            return Err(SetError::DuplicateEdge);
        }
        self.edges.push(edge);
        Ok(())
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn r(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[KSet] {
        &self.edges
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// True iff every two edges share a vertex.
    pub fn is_intersecting(&self) -> bool {
        for (i, a) in self.edges.iter().enumerate() {
            for b in &self.edges[i + 1..] {
                if a.is_disjoint(b) {
                    return false;
                }
            }
        }
        true
    }

    /// One edge per line, canonical k-set form.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for e in &self.edges {
            s.push_str(&e.to_string());
            s.push('\n');
        }
        s
    }

    pub fn from_text(text: &str, n: u32, k: u32) -> Result<Self, SetError> {
        let mut h = Hypergraph::new(n, k);
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            h.push(KSet::parse(line, n)?)?;
        }
        Ok(h)
    }
}

/// Per-vertex edge counts for a hypergraph, with the derived vertex classes:
/// `V` (degree >= 1), `U` (degree exactly 1) and `W` (degree >= 2).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeIndex {
    n: u32,
    degree: Vec<u32>, // index v-1
    maxdeg: u32,
    edge_count: usize,
}

impl DegreeIndex {
    pub fn empty(n: u32) -> Self {
        DegreeIndex { n, degree: vec![0; n as usize], maxdeg: 0, edge_count: 0 }
    }

    pub fn from_hypergraph(h: &Hypergraph) -> Self {
        let mut idx = DegreeIndex::empty(h.n());
        for e in h.edges() {
            idx.add_edge(e);
        }
        idx
    }

    /// Incremental update for one appended edge.
    pub fn add_edge(&mut self, edge: &KSet) {
        for &v in edge.vertices() {
            let d = &mut self.degree[(v - 1) as usize];
            *d += 1;
            if *d > self.maxdeg {
                self.maxdeg = *d;
            }
        }
        self.edge_count += 1;
    }

    pub fn degree(&self, v: u32) -> u32 {
        self.degree[(v - 1) as usize]
    }

    pub fn maxdeg(&self) -> u32 {
        self.maxdeg
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// Vertices of degree at least one, ascending.
    pub fn support(&self) -> Vec<u32> {
        self.class(|d| d >= 1)
    }

    /// Vertices of degree exactly one, ascending.
    pub fn deg_one(&self) -> Vec<u32> {
        self.class(|d| d == 1)
    }

    /// Vertices of degree at least two, ascending.
    pub fn deg_two_plus(&self) -> Vec<u32> {
        self.class(|d| d >= 2)
    }

    /// Vertices of degree exactly two, ascending.
    pub fn deg_exactly_two(&self) -> Vec<u32> {
        self.class(|d| d == 2)
    }

    fn class(&self, pred: impl Fn(u32) -> bool) -> Vec<u32> {
        (1..=self.n).filter(|&v| pred(self.degree[(v - 1) as usize])).collect()
    }
}

/// Exact nonnegative count of unbounded magnitude, with a log-space view.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct BigCount(BigUint);

impl BigCount {
    pub fn zero() -> Self {
        BigCount(BigUint::zero())
    }

    pub fn one() -> Self {
        BigCount(BigUint::one())
    }

    pub fn value(&self) -> &BigUint {
        &self.0
    }

    pub fn into_value(self) -> BigUint {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn to_f64_lossy(&self) -> f64 {
        big_to_f64(&self.0)
    }

    /// Natural log of the exact value; `-inf` for zero. Accurate to ~1e-15
    /// relative regardless of magnitude.
    pub fn ln(&self) -> f64 {
        if self.0.is_zero() {
            return f64::NEG_INFINITY;
        }
        let bits = self.0.bits();
        if bits <= 1023 {
            return self.0.to_f64().expect("fits f64").ln();
        }
        // ln(x) = ln(top 64 bits) + shift * ln 2
        let shift = bits - 64;
        let top: BigUint = &self.0 >> shift;
        top.to_f64().expect("64-bit mantissa") .ln() + shift as f64 * std::f64::consts::LN_2
    }
}

impl From<u64> for BigCount {
    fn from(v: u64) -> Self {
        BigCount(BigUint::from(v))
    }
}

impl From<BigUint> for BigCount {
    fn from(v: BigUint) -> Self {
        BigCount(v)
    }
}

impl fmt::Display for BigCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

fn big_to_f64(v: &BigUint) -> f64 {
    v.to_f64().unwrap_or(f64::INFINITY)
}

/// Exact binomial coefficient; 0 when k > n. Total on nonnegative inputs.
pub fn binom(n: u64, k: u64) -> BigCount {
    if k > n {
        return BigCount::zero();
    }
    let k = k.min(n - k);
    let mut res = BigUint::one();
    for i in 0..k {
        res = res * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    BigCount(res)
}

/// log of binom(n, k) via the log-gamma function; used for asymptotic-formula
/// evaluation where n can reach 1e6.
pub fn ln_binom(n: f64, k: f64) -> f64 {
    if k < 0.0 || k > n {
        return f64::NEG_INFINITY;
    }
    use statrs::function::gamma::ln_gamma;
    ln_gamma(n + 1.0) - ln_gamma(k + 1.0) - ln_gamma(n - k + 1.0)
}
