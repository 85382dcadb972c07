//! Elementary and complete homogeneous symmetric polynomials, evaluated at
//! points of a finite field.
//!
//! Nothing here expands a multivariate polynomial. `e_i` comes from the
//! product `∏ (X + t)`, and `h_i` from the recurrence
//! `h_k = e_1 h_{k-1} - e_2 h_{k-2} + … + (-1)^(k-1) e_k`, which holds for
//! every `k ≥ 1` once `e_j = 0` for `j > n`.

use std::collections::HashMap;

use serde::Serialize;

use crate::combin::{binomial, Combinations};
use crate::error::{Error, Result};
use crate::field::{Field, FieldElem};
use crate::poly::Poly;

/// Largest number of subsets an exhaustive injectivity sweep may visit.
pub const SUBSET_GUARD: u128 = 1_000_000;

/// A list of field points. With `distinct` set the points form a set, an
/// element of `F^[n]`.
#[derive(Clone, Debug)]
pub struct PointSet {
    field: Field,
    points: Vec<u64>,
    distinct: bool,
}

impl PointSet {
    pub fn new(field: &Field, points: &[FieldElem], distinct: bool) -> Result<Self> {
        let raw = points.iter().map(|&p| field.check(p)).collect::<Result<Vec<_>>>()?;
        Self::from_raw(field, raw, distinct)
    }

    /// Pairwise-distinct points.
    pub fn set(field: &Field, points: &[FieldElem]) -> Result<Self> {
        Self::new(field, points, true)
    }

    pub fn from_raw(field: &Field, points: Vec<u64>, distinct: bool) -> Result<Self> {
        if let Some(&bad) = points.iter().find(|&&v| v >= field.order()) {
            return Err(Error::NotAnElement { value: bad, q: field.order() });
        }
        if distinct && has_repeats(&points) {
            return Err(Error::RepeatedPoints);
        }
        Ok(PointSet { field: field.clone(), points, distinct })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn is_distinct(&self) -> bool {
        self.distinct
    }

    pub fn raw(&self) -> &[u64] {
        &self.points
    }

    pub fn elems(&self) -> Vec<FieldElem> {
        self.points.iter().map(|&v| self.field.wrap(v)).collect()
    }

    pub fn contains_raw(&self, v: u64) -> bool {
        self.points.contains(&v)
    }

    /// The set with one more point; fails if the point is already present.
    pub fn with_point(&self, c: u64) -> Result<PointSet> {
        let mut points = self.points.clone();
        points.push(c);
        Self::from_raw(&self.field, points, true)
    }

    /// Points sorted ascending; the canonical form of a set.
    pub fn sorted(&self) -> Vec<u64> {
        let mut v = self.points.clone();
        v.sort_unstable();
        v
    }
}

fn has_repeats(points: &[u64]) -> bool {
    let mut v = points.to_vec();
    v.sort_unstable();
    v.windows(2).any(|w| w[0] == w[1])
}

/// `[e_0, e_1, …, e_n]` at the given points.
pub(crate) fn elementary_all(field: &Field, points: &[u64]) -> Vec<u64> {
    let mut e = vec![0u64; points.len() + 1];
    e[0] = 1;
    for (count, &t) in points.iter().enumerate() {
        for j in (1..=count + 1).rev() {
            e[j] = field.raw_add(e[j], field.raw_mul(t, e[j - 1]));
        }
    }
    e
}

/// `[h_0, …, h_max]` at the given points via the elementary recurrence.
pub(crate) fn complete_all(field: &Field, points: &[u64], max: usize) -> Vec<u64> {
    let e = elementary_all(field, points);
    let mut h = vec![0u64; max + 1];
    h[0] = 1;
    for k in 1..=max {
        let mut acc = 0;
        for j in 1..=k.min(points.len()) {
            let term = field.raw_mul(e[j], h[k - j]);
            acc = if j % 2 == 1 { field.raw_add(acc, term) } else { field.raw_sub(acc, term) };
        }
        h[k] = acc;
    }
    h
}

/// `s_{n,i}` at the points, `n = |pts|`.
pub fn elementary_sym(i: usize, pts: &PointSet) -> Result<FieldElem> {
    if i > pts.len() {
        return Err(Error::IndexOutOfRange { index: i, max: pts.len() });
    }
    Ok(pts.field.wrap(elementary_all(&pts.field, &pts.points)[i]))
}

/// `S_{n,i}` at the points, `n = |pts|`.
pub fn complete_sym(i: usize, pts: &PointSet) -> FieldElem {
    pts.field.wrap(complete_all(&pts.field, &pts.points, i)[i])
}

/// Recovers `[e_0, …, e_k]` from `[h_0, …, h_k]`: the complete symmetric
/// polynomials generate the same ring as the elementary ones.
pub fn elementary_from_complete(field: &Field, h: &[u64]) -> Vec<u64> {
    let mut e = vec![0u64; h.len()];
    if h.is_empty() {
        return e;
    }
    e[0] = 1;
    for k in 1..h.len() {
        // Σ_{j=0}^{k} (-1)^j e_j h_{k-j} = 0, solved for e_k.
        let mut acc = 0;
        for j in 0..k {
            let term = field.raw_mul(e[j], h[k - j]);
            acc = if j % 2 == 0 { field.raw_add(acc, term) } else { field.raw_sub(acc, term) };
        }
        e[k] = if k % 2 == 0 { field.raw_neg(acc) } else { acc };
    }
    e
}

/// `S(a, X) = Σ_{i=0}^{n-1} S_{n-1,i}(a) X^{n-1-i}` for `|a| = n - 1`.
/// Evaluating it at `x` gives `S_{n,n-1}(a, x)`.
pub fn s_poly(a: &PointSet) -> Result<Poly> {
    if a.is_empty() {
        return Err(Error::PointCount { expected: 1, found: 0 });
    }
    let d = a.len();
    let h = complete_all(&a.field, &a.points, d);
    let coeffs: Vec<u64> = (0..=d).map(|j| h[d - j]).collect();
    Ok(Poly::from_raw(&a.field, coeffs))
}

/// `S = S_{n,n-1}` evaluated at all `n` points.
pub(crate) fn s_value(field: &Field, points: &[u64]) -> u64 {
    let n = points.len();
    if n == 0 {
        return 0;
    }
    complete_all(field, points, n - 1)[n - 1]
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SimCheck {
    pub injective: bool,
    /// Number of `(n-1)`-subsets visited.
    pub subsets: u64,
    /// Two distinct subsets with the same `S(a, X)`, if any.
    pub collision: Option<(Vec<u64>, Vec<u64>)>,
}

/// Maps every `(n-1)`-subset `a` of the field to `S(a, X)` and reports
/// whether the map is injective.
pub fn sim_injectivity(field: &Field, n: usize) -> Result<SimCheck> {
    if n < 2 {
        return Err(Error::hypothesis("arity n must be at least 2"));
    }
    let q = field.order();
    let size = n - 1;
    let count = binomial(q, size as u64);
    if count > SUBSET_GUARD {
        return Err(Error::budget(format!("C({q}, {size}) = {count} subsets exceeds the guard of {SUBSET_GUARD}")));
    }
    let mut seen: HashMap<Vec<u64>, Vec<u64>> = HashMap::with_capacity(count as usize);
    let mut subsets = 0u64;
    for idx in Combinations::new(q as usize, size) {
        let a: Vec<u64> = idx.iter().map(|&i| i as u64).collect();
        let h = complete_all(field, &a, size);
        subsets += 1;
        if let Some(prev) = seen.insert(h, a.clone()) {
            return Ok(SimCheck { injective: false, subsets, collision: Some((prev, a)) });
        }
    }
    Ok(SimCheck { injective: true, subsets, collision: None })
}
