//! Exact and asymptotic counting: open-edge counts by inclusion-exclusion,
//! extension-profile bounds, independent degree-two set counts, and the
//! stable-family density formula.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::setcore::{binom, intersects_sorted, BigCount, Hypergraph};

/// Hard cap on inclusion-exclusion index sets: 2^25 terms.
pub const MAX_IE_EDGES: usize = 25;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CountError {
    #[error("inclusion-exclusion over {0} edges exceeds the cap of {MAX_IE_EDGES}")]
    TooManyEdges(usize),
    #[error("infeasible query: {0}")]
    InfeasibleQuery(String),
    #[error("S contains a vertex of degree < 2")]
    SNotDegreeTwoPlus,
    #[error("m={m} out of range for r={r} (need 0 <= 2m <= r)")]
    MOutOfRange { r: u64, m: u64 },
    #[error("stable family is empty")]
    EmptyStableFamily,
    #[error("invalid process parameters: {0}")]
    InvalidParams(String),
}

/// Process scale `k = c * n^(1/3)`; `c` is derived from `(n, k)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProcessParams {
    n: u32,
    k: u32,
}

impl ProcessParams {
    pub fn new(n: u32, k: u32) -> Result<Self, CountError> {
        if k < 1 || 2 * k > n {
            return Err(CountError::InvalidParams(format!("need 1 <= k <= n/2, got n={n} k={k}")));
        }
        Ok(ProcessParams { n, k })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    /// c with k = c * n^(1/3).
    pub fn c(&self) -> f64 {
        self.k as f64 / (self.n as f64).cbrt()
    }
}

/// Count query: k-sets containing `forced_in`, avoiding `forced_out`, and
/// meeting every edge of `h`.
#[derive(Debug, Clone)]
pub struct OpenCountQuery<'a> {
    pub h: &'a Hypergraph,
    pub forced_in: Vec<u32>,
    pub forced_out: Vec<u32>,
}

impl<'a> OpenCountQuery<'a> {
    pub fn new(
        h: &'a Hypergraph,
        mut forced_in: Vec<u32>,
        mut forced_out: Vec<u32>,
    ) -> Result<Self, CountError> {
        forced_in.sort_unstable();
        forced_in.dedup();
        forced_out.sort_unstable();
        forced_out.dedup();
        if forced_in.len() > h.k() as usize {
            return Err(CountError::InfeasibleQuery(format!(
                "|forced_in|={} exceeds k={}",
                forced_in.len(),
                h.k()
            )));
        }
        if intersects_sorted(&forced_in, &forced_out) {
            return Err(CountError::InfeasibleQuery("forced_in meets forced_out".into()));
        }
        for &v in forced_in.iter().chain(forced_out.iter()) {
            if v < 1 || v > h.n() {
                return Err(CountError::InfeasibleQuery(format!("vertex {v} outside [1..{}]", h.n())));
            }
        }
        Ok(OpenCountQuery { h, forced_in, forced_out })
    }

    pub fn unconstrained(h: &'a Hypergraph) -> Self {
        OpenCountQuery { h, forced_in: Vec::new(), forced_out: Vec::new() }
    }
}

/// Exact number of k-subsets satisfying the query, by inclusion-exclusion
/// over the edges not already met by `forced_in`.
pub fn count_open(q: &OpenCountQuery) -> Result<BigCount, CountError> {
    let mut counter = OpenCounter::new(q.h.n(), q.h.k());
    counter.count(q)
}

/// Reusable inclusion-exclusion engine for a fixed `(n, k)`. Caches the
/// binomial tables keyed by `|forced_in|`, which the sequential sampler hits
/// hundreds of times per step.
pub struct OpenCounter {
    n: u32,
    k: u32,
    // tables[fi_len][u] = binom(n - fi_len - u, k - fi_len)
    tables: Vec<Vec<BigUint>>,
}

impl OpenCounter {
    pub fn new(n: u32, k: u32) -> Self {
        OpenCounter { n, k, tables: vec![Vec::new(); k as usize + 1] }
    }

    pub fn count(&mut self, q: &OpenCountQuery) -> Result<BigCount, CountError> {
        if q.h.r() > MAX_IE_EDGES {
            return Err(CountError::TooManyEdges(q.h.r()));
        }
        debug_assert_eq!(q.h.n(), self.n);
        debug_assert_eq!(q.h.k(), self.k);

        // Edges met by forced_in are satisfied outright; drop them from the
        // index set. Then drop any edge whose remainder is a superset of
        // another's (meeting the smaller one implies meeting it).
        let mut reduced: Vec<&[u32]> = q
            .h
            .edges()
            .iter()
            .map(|e| e.vertices())
            .filter(|vs| !intersects_sorted(vs, &q.forced_in))
            .collect();
        reduced.sort_by_key(|vs| vs.len());
        let mut kept: Vec<&[u32]> = Vec::with_capacity(reduced.len());
        'outer: for vs in reduced {
            for small in &kept {
                if small.iter().all(|v| vs.binary_search(v).is_ok()) {
                    continue 'outer;
                }
            }
            kept.push(vs);
        }

        let fi_len = q.forced_in.len();
        // Compact the involved vertices so union sizes can be tracked with a
        // small counter array during the subset walk.
        let mut involved: Vec<u32> = q.forced_out.clone();
        for vs in &kept {
            involved.extend_from_slice(vs);
        }
        involved.sort_unstable();
        involved.dedup();
        let compact = |v: u32| involved.binary_search(&v).unwrap();

        let max_u = involved.len();
        self.ensure_table(fi_len, max_u);

        let mut cnt = vec![0u32; involved.len()];
        let mut base_union = 0usize;
        for &v in &q.forced_out {
            let c = &mut cnt[compact(v)];
            if *c == 0 {
                base_union += 1;
            }
            *c += 1;
        }

        let edges_compact: Vec<Vec<usize>> =
            kept.iter().map(|vs| vs.iter().map(|&v| compact(v)).collect()).collect();

        let mut pos = BigUint::zero();
        let mut neg = BigUint::zero();
        self.ie_walk(&edges_compact, 0, false, base_union, &mut cnt, fi_len, &mut pos, &mut neg);
        debug_assert!(pos >= neg);
        Ok(BigCount::from(pos - neg))
    }

    #[allow(clippy::too_many_arguments)]
    fn ie_walk(
        &self,
        edges: &[Vec<usize>],
        idx: usize,
        odd: bool,
        union: usize,
        cnt: &mut [u32],
        fi_len: usize,
        pos: &mut BigUint,
        neg: &mut BigUint,
    ) {
        if idx == edges.len() {
            let term = &self.tables[fi_len][union];
            if odd {
                *neg += term;
            } else {
                *pos += term;
            }
            return;
        }
        // skip edge idx
        self.ie_walk(edges, idx + 1, odd, union, cnt, fi_len, pos, neg);
        // include edge idx
        let mut union = union;
        for &v in &edges[idx] {
            if cnt[v] == 0 {
                union += 1;
            }
            cnt[v] += 1;
        }
        self.ie_walk(edges, idx + 1, !odd, union, cnt, fi_len, pos, neg);
        for &v in &edges[idx] {
            cnt[v] -= 1;
        }
    }

    fn ensure_table(&mut self, fi_len: usize, max_u: usize) {
        let j = self.k as usize - fi_len;
        let m_top = self.n as usize - fi_len;
        let len = max_u.min(m_top) + 1;
        let table = &mut self.tables[fi_len];
        if table.len() >= len {
            return;
        }
        if table.is_empty() {
            table.push(binom(m_top as u64, j as u64).into_value());
        }
        // binom(m-1, j) = binom(m, j) * (m - j) / m
        while table.len() < len {
            let u = table.len();
            let m = (m_top - u + 1) as u64;
            let prev = &table[u - 1];
            let next = if m <= j as u64 { BigUint::zero() } else { prev * (m - j as u64) / m };
            table.push(next);
        }
    }
}

/// The lower/upper extension-count bounds for a degree->=2 set `S`:
/// `(k - r^2)^(r-e) * binom(n - k*r, k - (r-e) - |S|)` and
/// `k^(r-e) * binom(n, k - (r-e) - |S|)`.
pub fn nu_bounds(h: &Hypergraph, s: &[u32]) -> Result<(BigCount, BigCount), CountError> {
    let idx = crate::setcore::DegreeIndex::from_hypergraph(h);
    for &v in s {
        if idx.degree(v) < 2 {
            return Err(CountError::SNotDegreeTwoPlus);
        }
    }
    let r = h.r() as u64;
    let k = h.k() as u64;
    let n = h.n() as u64;
    let e_s = h.edges().iter().filter(|e| s.iter().any(|&v| e.contains(v))).count() as u64;
    let rem = r - e_s;
    let want = k as i64 - rem as i64 - s.len() as i64;
    if want < 0 {
        return Ok((BigCount::zero(), BigCount::zero()));
    }
    let want = want as u64;

    let low_base = k.saturating_sub(r * r);
    let low_choose = if n >= k * r { binom(n - k * r, want) } else { BigCount::zero() };
    let lower = BigCount::from(pow_u64(low_base, rem) * low_choose.value());
    let upper = BigCount::from(pow_u64(k, rem) * binom(n, want).value());
    Ok((lower, upper))
}

fn pow_u64(base: u64, exp: u64) -> BigUint {
    num_traits::Pow::pow(BigUint::from(base), exp)
}

/// The limit ratio nu(S)/binom(n,k): `c^(3(r - e_S + |S|)) / k^(r - e_S + 2|S|)`.
pub fn nu_asymptotic(params: &ProcessParams, s_size: u64, e_s: u64, r: u64) -> f64 {
    debug_assert!(e_s <= r);
    let c = params.c();
    let k = params.k() as f64;
    let rem = (r - e_s) as f64;
    let s = s_size as f64;
    ((3.0 * (rem + s)) * c.ln() - (rem + 2.0 * s) * k.ln()).exp()
}

/// Number of independent degree-two vertex sets of size m in a simple
/// max-degree-two intersecting hypergraph with r edges:
/// `r! / ((r - 2m)! m! 2^m)`.
pub fn indep_deg2_count(r: u64, m: u64) -> Result<BigCount, CountError> {
    if 2 * m > r {
        return Err(CountError::MOutOfRange { r, m });
    }
    let mut num = BigUint::one();
    for i in 0..2 * m {
        num *= BigUint::from(r - i);
    }
    let mut den = BigUint::one();
    for i in 1..=m {
        den *= BigUint::from(i);
    }
    den <<= m as usize;
    Ok(BigCount::from(num / den))
}

/// Limit density `|I_k| / binom(n,k)`: sum over the stable family of
/// `c^(3(r0 - 1 - |S|)) / k^(r0 - 1)`.
pub fn family_size_asymptotic(
    params: &ProcessParams,
    r0: u32,
    stable_family: &[Vec<u32>],
) -> Result<f64, CountError> {
    if stable_family.is_empty() {
        return Err(CountError::EmptyStableFamily);
    }
    let c = params.c();
    let k = params.k() as f64;
    let mut total = 0.0;
    for s in stable_family {
        if 2 * s.len() as u32 > r0.saturating_sub(1) {
            return Err(CountError::InvalidParams(format!(
                "|S|={} too large for r0={r0}",
                s.len()
            )));
        }
        let exp = 3.0 * (r0 as f64 - 1.0 - s.len() as f64) * c.ln() - (r0 as f64 - 1.0) * k.ln();
        total += exp.exp();
    }
    Ok(total)
}
