//! Dense univariate polynomials over a [`FieldCtx`](crate::field::FieldCtx).

mod factor;
mod resultant;

use std::fmt;

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::field::{Field, FieldElem};

pub use factor::{DegreePattern, Factorization};

/// Coefficients are stored low degree first with trailing zeros stripped, as
/// raw field encodings.
#[derive(Clone)]
pub struct Poly {
    field: Field,
    coeffs: Vec<u64>,
}

impl Poly {
    pub fn from_raw(field: &Field, mut coeffs: Vec<u64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Poly { field: field.clone(), coeffs }
    }

    pub fn from_elems(field: &Field, coeffs: &[FieldElem]) -> Result<Self> {
        let raw = coeffs.iter().map(|&c| field.check(c)).collect::<Result<Vec<_>>>()?;
        Ok(Self::from_raw(field, raw))
    }

    /// Integer coefficients mapped into the prime subfield.
    pub fn from_ints(field: &Field, coeffs: &[i64]) -> Self {
        Self::from_raw(field, coeffs.iter().map(|&c| field.raw_from_int(c)).collect())
    }

    pub fn zero(field: &Field) -> Self {
        Poly { field: field.clone(), coeffs: Vec::new() }
    }

    pub fn one(field: &Field) -> Self {
        Self::constant(field, 1)
    }

    pub fn x(field: &Field) -> Self {
        Self::monomial(field, 1, 1)
    }

    pub fn constant(field: &Field, c: u64) -> Self {
        Self::from_raw(field, vec![c])
    }

    pub fn monomial(field: &Field, c: u64, degree: usize) -> Self {
        let mut coeffs = vec![0; degree + 1];
        coeffs[degree] = c;
        Self::from_raw(field, coeffs)
    }

    /// `∏ (X - r)` over the given raw roots.
    pub fn from_roots(field: &Field, roots: &[u64]) -> Self {
        roots
            .iter()
            .fold(Self::one(field), |acc, &r| acc.mul_unchecked(&Self::from_raw(field, vec![field.raw_neg(r), 1])))
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn raw_coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn coeffs(&self) -> Vec<FieldElem> {
        self.coeffs.iter().map(|&c| self.field.wrap(c)).collect()
    }

    pub fn coeff(&self, i: usize) -> FieldElem {
        self.field.wrap(self.raw_coeff(i))
    }

    pub(crate) fn raw_coeff(&self, i: usize) -> u64 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    pub(crate) fn lead_raw(&self) -> u64 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn leading_coeff(&self) -> FieldElem {
        self.field.wrap(self.lead_raw())
    }

    fn same_field(&self, other: &Poly) -> Result<()> {
        if self.field.same_field(&other.field) {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    pub fn add(&self, other: &Poly) -> Result<Poly> {
        self.same_field(other)?;
        Ok(self.add_unchecked(other))
    }

    pub fn sub(&self, other: &Poly) -> Result<Poly> {
        self.same_field(other)?;
        Ok(self.sub_unchecked(other))
    }

    pub fn mul(&self, other: &Poly) -> Result<Poly> {
        self.same_field(other)?;
        Ok(self.mul_unchecked(other))
    }

    /// Quotient and remainder; `deg(remainder) < deg(divisor)`.
    pub fn divmod(&self, divisor: &Poly) -> Result<(Poly, Poly)> {
        self.same_field(divisor)?;
        if divisor.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.divmod_unchecked(divisor))
    }

    pub fn rem(&self, divisor: &Poly) -> Result<Poly> {
        self.same_field(divisor)?;
        if divisor.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Reducer::new(divisor).reduce(self.coeffs.clone()))
    }

    pub(crate) fn add_unchecked(&self, other: &Poly) -> Poly {
        let f = &self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| f.raw_add(self.raw_coeff(i), other.raw_coeff(i))).collect();
        Poly::from_raw(f, coeffs)
    }

    pub(crate) fn sub_unchecked(&self, other: &Poly) -> Poly {
        let f = &self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| f.raw_sub(self.raw_coeff(i), other.raw_coeff(i))).collect();
        Poly::from_raw(f, coeffs)
    }

    pub fn neg(&self) -> Poly {
        let coeffs = self.coeffs.iter().map(|&c| self.field.raw_neg(c)).collect();
        Poly::from_raw(&self.field, coeffs)
    }

    pub(crate) fn scale_raw(&self, c: u64) -> Poly {
        let coeffs = self.coeffs.iter().map(|&a| self.field.raw_mul(a, c)).collect();
        Poly::from_raw(&self.field, coeffs)
    }

    pub(crate) fn mul_unchecked(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero(&self.field);
        }
        Poly::from_raw(&self.field, mul_coeffs(&self.field, &self.coeffs, &other.coeffs))
    }

    pub(crate) fn divmod_unchecked(&self, divisor: &Poly) -> (Poly, Poly) {
        let f = &self.field;
        let db = divisor.coeffs.len() - 1;
        if self.coeffs.len() <= db {
            return (Poly::zero(f), self.clone());
        }
        let inv_lead = f.raw_inv(divisor.lead_raw());
        let terms = divisor.lower_terms();
        let mut r = self.coeffs.clone();
        let mut quot = vec![0u64; r.len() - db];
        for top in (db..r.len()).rev() {
            let c = f.raw_mul(r[top], inv_lead);
            quot[top - db] = c;
            if c == 0 {
                continue;
            }
            let base = top - db;
            for &(j, bj) in &terms {
                r[base + j] = f.raw_sub(r[base + j], f.raw_mul(c, bj));
            }
            r[top] = 0;
        }
        r.truncate(db);
        (Poly::from_raw(f, quot), Poly::from_raw(f, r))
    }

    /// Nonzero terms strictly below the leading one.
    fn lower_terms(&self) -> Vec<(usize, u64)> {
        let d = self.coeffs.len() - 1;
        self.coeffs[..d].iter().enumerate().filter(|(_, &c)| c != 0).map(|(j, &c)| (j, c)).collect()
    }

    /// Exact division; the caller guarantees `divisor | self`.
    pub(crate) fn div_exact(&self, divisor: &Poly) -> Poly {
        let (q, r) = self.divmod_unchecked(divisor);
        debug_assert!(r.is_zero(), "inexact division");
        q
    }

    /// Scales to leading coefficient 1. The zero polynomial is returned unchanged.
    pub fn monic(&self) -> Poly {
        if self.is_zero() || self.lead_raw() == 1 {
            return self.clone();
        }
        self.scale_raw(self.field.raw_inv(self.lead_raw()))
    }

    pub fn derivative(&self) -> Poly {
        let f = &self.field;
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| f.raw_mul(c, f.raw_from_int((i as u64 % f.characteristic()) as i64)))
            .collect();
        Poly::from_raw(f, coeffs)
    }

    pub(crate) fn eval_raw(&self, x: u64) -> u64 {
        let f = &self.field;
        self.coeffs.iter().rev().fold(0, |acc, &c| f.raw_add(f.raw_mul(acc, x), c))
    }

    pub fn eval(&self, x: FieldElem) -> Result<FieldElem> {
        let x = self.field.check(x)?;
        Ok(self.field.wrap(self.eval_raw(x)))
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Poly) -> Result<Poly> {
        self.same_field(other)?;
        if self.is_zero() && other.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        Ok(self.gcd_unchecked(other))
    }

    pub(crate) fn gcd_unchecked(&self, other: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = Reducer::new(&b).reduce(a.coeffs);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `self^e mod modulus` by left-to-right square-and-multiply.
    pub fn pow_mod(&self, e: &BigUint, modulus: &Poly) -> Result<Poly> {
        self.same_field(modulus)?;
        if modulus.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let red = Reducer::new(modulus);
        Ok(red.pow(&self.coeffs, e))
    }

    /// `X^q mod self` where `q` is the field order.
    pub fn xq_mod(&self) -> Result<Poly> {
        match self.degree() {
            None => Err(Error::ZeroPolynomial),
            Some(0) => Err(Error::DegreeTooSmall { found: 0, required: 1 }),
            Some(_) => Ok(Reducer::new(self).pow(&[0, 1], &self.field.cardinality())),
        }
    }
}

/// Reduction modulo a fixed polynomial, with the divisor's sparsity and
/// leading inverse cached across calls.
pub(crate) struct Reducer {
    field: Field,
    degree: usize,
    inv_lead: u64,
    terms: Vec<(usize, u64)>,
}

impl Reducer {
    pub(crate) fn new(m: &Poly) -> Self {
        Reducer {
            field: m.field.clone(),
            degree: m.coeffs.len() - 1,
            inv_lead: m.field.raw_inv(m.lead_raw()),
            terms: m.lower_terms(),
        }
    }

    pub(crate) fn reduce(&self, mut r: Vec<u64>) -> Poly {
        let f = &self.field;
        let d = self.degree;
        while r.last() == Some(&0) {
            r.pop();
        }
        if r.len() > d {
            for top in (d..r.len()).rev() {
                let c = f.raw_mul(r[top], self.inv_lead);
                if c == 0 {
                    continue;
                }
                let base = top - d;
                for &(j, mj) in &self.terms {
                    r[base + j] = f.raw_sub(r[base + j], f.raw_mul(c, mj));
                }
                r[top] = 0;
            }
            r.truncate(d);
        }
        Poly::from_raw(f, r)
    }

    pub(crate) fn mul(&self, a: &Poly, b: &Poly) -> Poly {
        if a.is_zero() || b.is_zero() {
            return Poly::zero(&self.field);
        }
        self.reduce(mul_coeffs(&self.field, &a.coeffs, &b.coeffs))
    }

    pub(crate) fn pow(&self, base: &[u64], e: &BigUint) -> Poly {
        let base = self.reduce(base.to_vec());
        let mut acc = self.reduce(vec![1]);
        for i in (0..e.bits()).rev() {
            acc = self.mul(&acc, &acc);
            if e.bit(i) {
                acc = self.mul(&acc, &base);
            }
        }
        acc
    }
}

/// Schoolbook product. Prime fields below 2^32 accumulate exactly in `u128`
/// and reduce once per output coefficient.
fn mul_coeffs(f: &Field, a: &[u64], b: &[u64]) -> Vec<u64> {
    let n = a.len() + b.len() - 1;
    if f.is_prime_field() && f.characteristic() < (1 << 32) {
        let p = f.characteristic() as u128;
        let mut acc = vec![0u128; n];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            let x = x as u128;
            for (slot, &y) in acc[i..i + b.len()].iter_mut().zip(b) {
                *slot += x * y as u128;
            }
        }
        return acc.into_iter().map(|s| (s % p) as u64).collect();
    }
    let mut out = vec![0u64; n];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = f.raw_add(out[i + j], f.raw_mul(x, y));
        }
    }
    out
}

impl PartialEq for Poly {
    fn eq(&self, other: &Self) -> bool {
        self.field.same_field(&other.field) && self.coeffs == other.coeffs
    }
}

impl Eq for Poly {}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly[F_{}]({})", self.field.label(), self)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match (i, c) {
                (0, _) => write!(f, "{c}")?,
                (1, 1) => write!(f, "X")?,
                (1, _) => write!(f, "{c}*X")?,
                (_, 1) => write!(f, "X^{i}")?,
                _ => write!(f, "{c}*X^{i}")?,
            }
        }
        Ok(())
    }
}
