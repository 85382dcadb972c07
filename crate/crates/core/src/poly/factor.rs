//! Squarefree decomposition, distinct-degree and equal-degree splitting.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{Poly, Reducer};
use crate::error::{Error, Result};
use crate::field::{Field, FieldElem};

/// `unit · ∏ factor^multiplicity`, factors monic, irreducible and pairwise distinct.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub unit: FieldElem,
    pub factors: Vec<(Poly, usize)>,
    field: Field,
}

impl Factorization {
    /// Multiplies the factorization back out.
    pub fn expand(&self) -> Poly {
        let mut acc = Poly::constant(&self.field, self.unit.value());
        for (g, e) in &self.factors {
            for _ in 0..*e {
                acc = acc.mul_unchecked(g);
            }
        }
        acc
    }

    pub fn is_irreducible(&self) -> bool {
        self.factors.len() == 1 && self.factors[0].1 == 1
    }
}

/// Sorted multiset of irreducible-factor degrees, each factor repeated by its
/// multiplicity. For squarefree input this is a Frobenius cycle type.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DegreePattern(pub Vec<usize>);

impl DegreePattern {
    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }

    /// Parity of a permutation with this cycle type: even iff the number of
    /// even-length cycles is even.
    pub fn is_even(&self) -> bool {
        self.0.iter().filter(|&&d| d % 2 == 0).count() % 2 == 0
    }

    pub fn has_fixed_point(&self) -> bool {
        self.0.contains(&1)
    }
}

impl std::fmt::Display for DegreePattern {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|d| d.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

impl Poly {
    /// Pairwise-coprime squarefree parts with their multiplicities, sorted by
    /// multiplicity. Parts are monic; the leading coefficient is dropped.
    pub fn squarefree_decomposition(&self) -> Result<Vec<(Poly, usize)>> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let mut merged: BTreeMap<usize, Poly> = BTreeMap::new();
        for (part, e) in squarefree_rec(&self.monic()) {
            merged.entry(e).and_modify(|acc| *acc = acc.mul_unchecked(&part)).or_insert(part);
        }
        Ok(merged.into_iter().map(|(e, g)| (g, e)).collect())
    }

    /// Number of distinct roots in the field: `deg gcd(f, X^q - X)`.
    pub fn count_roots(&self) -> Result<usize> {
        match self.degree() {
            None => Err(Error::ZeroPolynomial),
            Some(0) => Ok(0),
            Some(_) => {
                let h = self.xq_mod()?.sub_unchecked(&Poly::x(self.field()));
                Ok(self.gcd_unchecked(&h).degree().unwrap_or(0))
            }
        }
    }

    pub fn has_root(&self) -> Result<bool> {
        Ok(self.count_roots()? > 0)
    }

    /// Full factorization. Equal-degree splitting draws from a ChaCha stream
    /// seeded with `seed`, so the result is a pure function of `(self, seed)`.
    pub fn factor(&self, seed: u64) -> Result<Factorization> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let unit = self.leading_coeff();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut factors = Vec::new();
        for (part, e) in self.squarefree_decomposition()? {
            for (block, d) in distinct_degree(&part) {
                for g in equal_degree(&block, d, &mut rng) {
                    factors.push((g, e));
                }
            }
        }
        factors.sort_by(|(a, ea), (b, eb)| (a.degree(), a.raw_coeffs(), ea).cmp(&(b.degree(), b.raw_coeffs(), eb)));
        Ok(Factorization { unit, factors, field: self.field().clone() })
    }

    /// Factor degrees with multiplicity; no randomness involved.
    pub fn degree_pattern(&self) -> Result<DegreePattern> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let mut degrees = Vec::new();
        for (part, e) in self.squarefree_decomposition()? {
            for (block, d) in distinct_degree(&part) {
                let count = block.degree().unwrap_or(0) / d;
                degrees.extend(std::iter::repeat_n(d, count * e));
            }
        }
        degrees.sort_unstable();
        Ok(DegreePattern(degrees))
    }

    /// Whether `gcd(f, f') = 1`, i.e. no repeated roots over the algebraic closure.
    pub fn is_squarefree(&self) -> bool {
        match self.degree() {
            None => false,
            Some(0) => true,
            Some(_) => {
                let d = self.derivative();
                !d.is_zero() && self.gcd_unchecked(&d).is_one()
            }
        }
    }

    /// Distinct roots lying in the field, ascending. Uses equal-degree
    /// splitting on `gcd(f, X^q - X)`.
    pub fn roots(&self, seed: u64) -> Result<Vec<FieldElem>> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        if self.degree() == Some(0) {
            return Ok(Vec::new());
        }
        let h = self.xq_mod()?.sub_unchecked(&Poly::x(self.field()));
        let linear = self.gcd_unchecked(&h);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut out: Vec<u64> =
            equal_degree(&linear, 1, &mut rng).into_iter().map(|g| self.field().raw_neg(g.raw_coeff(0))).collect();
        out.sort_unstable();
        Ok(out.into_iter().map(|r| self.field().wrap(r)).collect())
    }
}

/// Squarefree factorization over a finite field (monic input).
fn squarefree_rec(f: &Poly) -> Vec<(Poly, usize)> {
    let field = f.field().clone();
    let p = field.characteristic() as usize;
    let mut out = Vec::new();
    if f.degree().unwrap_or(0) == 0 {
        return out;
    }
    let d = f.derivative();
    let mut c = f.gcd_unchecked(&d);
    let mut w = f.div_exact(&c);
    let mut i = 1;
    while !w.is_one() {
        let y = w.gcd_unchecked(&c);
        let z = w.div_exact(&y);
        if z.degree().unwrap_or(0) > 0 {
            out.push((z, i));
        }
        i += 1;
        w = y;
        c = c.div_exact(&w);
    }
    if !c.is_one() {
        let root = pth_root(&c);
        for (g, e) in squarefree_rec(&root) {
            out.push((g, e * p));
        }
    }
    out
}

/// For `c(X) = Σ a_{ip} X^{ip}`, returns `Σ a_{ip}^{1/p} X^i`.
fn pth_root(c: &Poly) -> Poly {
    let field = c.field();
    let p = field.characteristic() as usize;
    let coeffs = c.raw_coeffs().iter().step_by(p).map(|&a| field.raw_pth_root(a)).collect();
    Poly::from_raw(field, coeffs)
}

/// Splits a monic squarefree polynomial into blocks `(product of all
/// irreducible factors of degree d, d)`.
pub(crate) fn distinct_degree(f: &Poly) -> Vec<(Poly, usize)> {
    let field = f.field().clone();
    let q = field.cardinality();
    let x = Poly::x(&field);
    let mut out = Vec::new();
    let mut rest = f.clone();
    let mut h = x.clone();
    let mut d = 0;
    while let Some(deg) = rest.degree() {
        if deg < 2 * (d + 1) {
            if deg > 0 {
                out.push((rest, deg));
            }
            break;
        }
        d += 1;
        let red = Reducer::new(&rest);
        h = red.pow(h.raw_coeffs(), &q);
        let g = rest.gcd_unchecked(&h.sub_unchecked(&x));
        if !g.is_one() {
            rest = rest.div_exact(&g);
            h = Reducer::new(&rest).reduce(h.raw_coeffs().to_vec());
            out.push((g, d));
        }
    }
    out
}

/// Cantor-Zassenhaus splitting of a product of distinct irreducibles of degree `d`.
/// Characteristic 2 uses the absolute trace map instead of the quadratic character.
pub(crate) fn equal_degree(f: &Poly, d: usize, rng: &mut ChaCha8Rng) -> Vec<Poly> {
    let n = f.degree().unwrap_or(0);
    if n == 0 {
        return Vec::new();
    }
    if n == d {
        return vec![f.monic()];
    }
    let field = f.field().clone();
    let q = field.order();
    let even = field.characteristic() == 2;
    let exponent = (BigUint::from(q).pow(d as u32) - 1u32) / 2u32;
    let trace_steps = field.degree() as usize * d;
    let red = Reducer::new(f);
    loop {
        let a: Vec<u64> = (0..n).map(|_| rng.gen_range(0..q)).collect();
        let a = Poly::from_raw(&field, a);
        if a.degree().unwrap_or(0) == 0 {
            continue;
        }
        let b = if even {
            let mut term = a.clone();
            let mut acc = a.clone();
            for _ in 1..trace_steps {
                term = red.mul(&term, &term);
                acc = acc.add_unchecked(&term);
            }
            acc
        } else {
            red.pow(a.raw_coeffs(), &exponent).sub_unchecked(&Poly::one(&field))
        };
        let g = f.gcd_unchecked(&b);
        let gd = g.degree().unwrap_or(0);
        if gd > 0 && gd < n {
            let mut left = equal_degree(&g, d, rng);
            left.extend(equal_degree(&f.div_exact(&g), d, rng));
            return left;
        }
    }
}
