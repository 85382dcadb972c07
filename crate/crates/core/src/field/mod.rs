//! Finite fields `F_{p^k}`.
//!
//! Elements are encoded as integers in `[0, q)`: the base-`p` digits of the
//! encoding are the coefficients of the element's residue modulo the defining
//! polynomial, lowest degree first. For `k = 1` the encoding is the residue
//! itself. Integer order on encodings is the canonical element order used by
//! witness search and sweeps.
//!
//! Two layers are exposed. The `raw_*` methods work on bare encodings and do
//! no validation; polynomial kernels use them. The [`FieldElem`] methods carry
//! a field tag and reject operands from another field.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::arith::{self, mul_mod};
use crate::error::{Error, Result};
use crate::poly::Poly;

/// Shared handle to a field context.
pub type Field = Arc<FieldCtx>;

const MAX_PRIME: u64 = (1 << 61) - 1;
const TABLE_LIMIT: u64 = 1 << 18;

pub struct FieldCtx {
    p: u64,
    k: u32,
    q: u64,
    /// Monic defining polynomial, low degree first, length `k + 1`. Empty when `k = 1`.
    modulus: Vec<u64>,
    tag: u64,
    tables: Option<LogTables>,
}

struct LogTables {
    /// `exp[i] = g^i` for `i < 2(q-1)`, doubled so products of logs need no reduction.
    exp: Vec<u32>,
    /// `log[x]` for nonzero `x`; `log[0]` unused.
    log: Vec<u32>,
}

/// A field element bound to the field it came from.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct FieldElem {
    tag: u64,
    value: u64,
}

impl FieldElem {
    /// The integer encoding of this element.
    pub fn value(self) -> u64 {
        self.value
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// Serializable description of a field: enough to rebuild the same context.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldSpec {
    pub p: u64,
    pub k: u32,
    /// Defining polynomial coefficients, low degree first; `None` for prime fields.
    pub modulus: Option<Vec<u64>>,
}

impl FieldCtx {
    /// Builds `F_{p^k}`. Without an explicit modulus, the lexicographically
    /// smallest monic irreducible of degree `k` is used (coefficients compared
    /// from the constant term upward).
    pub fn new(p: u64, k: u32, modulus: Option<&[u64]>) -> Result<Field> {
        if !arith::is_prime(p) {
            return Err(Error::CompositeCharacteristic(p));
        }
        if p > MAX_PRIME {
            return Err(Error::CharacteristicTooLarge(p));
        }
        if k == 0 {
            return Err(Error::ZeroDegree);
        }
        let q = p.checked_pow(k).ok_or(Error::FieldTooLarge { p, k })?;
        if k == 1 {
            if let Some(m) = modulus {
                // X + c is the only shape allowed; it carries no information.
                if m.len() != 2 || m[1] != 1 || m[0] >= p {
                    return Err(Error::ModulusShape { p, expected: 1 });
                }
            }
            return Ok(Arc::new(Self::assemble(p, 1, q, Vec::new())));
        }
        let modulus = match modulus {
            Some(m) => {
                if m.len() != k as usize + 1 || m[k as usize] != 1 || m.iter().any(|&c| c >= p) {
                    return Err(Error::ModulusShape { p, expected: k });
                }
                if !is_irreducible_over_prime(p, m)? {
                    return Err(Error::ReducibleModulus(p));
                }
                m.to_vec()
            }
            None => smallest_irreducible(p, k)?,
        };
        Ok(Arc::new(Self::assemble(p, k, q, modulus)))
    }

    /// Prime field `F_p`.
    pub fn prime(p: u64) -> Result<Field> {
        Self::new(p, 1, None)
    }

    pub fn from_spec(spec: &FieldSpec) -> Result<Field> {
        Self::new(spec.p, spec.k, spec.modulus.as_deref())
    }

    fn assemble(p: u64, k: u32, q: u64, modulus: Vec<u64>) -> Self {
        let mut tag = arith::mix64(p ^ ((k as u64) << 56));
        for &c in &modulus {
            tag = arith::mix64(tag ^ c);
        }
        let mut ctx = FieldCtx { p, k, q, modulus, tag, tables: None };
        if k > 1 && q <= TABLE_LIMIT {
            ctx.tables = Some(ctx.build_tables());
        }
        ctx
    }

    fn build_tables(&self) -> LogTables {
        let order = self.q - 1;
        let divisors = arith::prime_divisors(order);
        let generator = (2..self.q).find(|&g| divisors.iter().all(|&r| self.slow_pow(g, order / r) != 1)).unwrap_or(1);
        let mut exp = Vec::with_capacity(2 * order as usize);
        let mut log = vec![0u32; self.q as usize];
        let mut x = 1u64;
        for i in 0..order {
            exp.push(x as u32);
            log[x as usize] = i as u32;
            x = self.slow_mul(x, generator);
        }
        exp.extend_from_within(..);
        LogTables { exp, log }
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.k
    }

    /// Field order `q = p^k`.
    pub fn order(&self) -> u64 {
        self.q
    }

    pub fn cardinality(&self) -> BigUint {
        BigUint::from(self.q)
    }

    /// Defining polynomial, low degree first; empty for prime fields.
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn spec(&self) -> FieldSpec {
        FieldSpec { p: self.p, k: self.k, modulus: (self.k > 1).then(|| self.modulus.clone()) }
    }

    /// `p` or `p^k`, as accepted by the command-line field grammar.
    pub fn label(&self) -> String {
        if self.k == 1 {
            self.p.to_string()
        } else {
            format!("{}^{}", self.p, self.k)
        }
    }

    pub fn is_prime_field(&self) -> bool {
        self.k == 1
    }

    pub fn same_field(&self, other: &FieldCtx) -> bool {
        self.tag == other.tag && self.p == other.p && self.k == other.k && self.modulus == other.modulus
    }

    // ---- tagged elements ------------------------------------------------

    pub fn elem(&self, value: u64) -> Result<FieldElem> {
        if value >= self.q {
            return Err(Error::NotAnElement { value, q: self.q });
        }
        Ok(self.wrap(value))
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> FieldElem {
        self.wrap(self.raw_from_int(n))
    }

    pub fn zero(&self) -> FieldElem {
        self.wrap(0)
    }

    pub fn one(&self) -> FieldElem {
        self.wrap(1)
    }

    #[inline]
    pub(crate) fn wrap(&self, value: u64) -> FieldElem {
        FieldElem { tag: self.tag, value }
    }

    /// Unwraps an element after checking it belongs to this field.
    pub fn check(&self, a: FieldElem) -> Result<u64> {
        if a.tag != self.tag {
            return Err(Error::FieldMismatch);
        }
        Ok(a.value)
    }

    pub fn add(&self, a: FieldElem, b: FieldElem) -> Result<FieldElem> {
        Ok(self.wrap(self.raw_add(self.check(a)?, self.check(b)?)))
    }

    pub fn sub(&self, a: FieldElem, b: FieldElem) -> Result<FieldElem> {
        Ok(self.wrap(self.raw_sub(self.check(a)?, self.check(b)?)))
    }

    pub fn neg(&self, a: FieldElem) -> Result<FieldElem> {
        Ok(self.wrap(self.raw_neg(self.check(a)?)))
    }

    pub fn mul(&self, a: FieldElem, b: FieldElem) -> Result<FieldElem> {
        Ok(self.wrap(self.raw_mul(self.check(a)?, self.check(b)?)))
    }

    pub fn inv(&self, a: FieldElem) -> Result<FieldElem> {
        let a = self.check(a)?;
        if a == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(self.wrap(self.raw_inv(a)))
    }

    pub fn div(&self, a: FieldElem, b: FieldElem) -> Result<FieldElem> {
        let a = self.check(a)?;
        let b = self.check(b)?;
        if b == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(self.wrap(self.raw_mul(a, self.raw_inv(b))))
    }

    /// `a^e` for an arbitrary-size exponent.
    pub fn pow(&self, a: FieldElem, e: &BigUint) -> Result<FieldElem> {
        Ok(self.wrap(self.raw_pow_big(self.check(a)?, e)))
    }

    /// `a^(p^i)`. With `i = k - 1` this is the inverse of the `p`-th power map.
    pub fn frobenius(&self, a: FieldElem, i: u32) -> Result<FieldElem> {
        Ok(self.wrap(self.raw_frobenius(self.check(a)?, i)))
    }

    /// Euler criterion: `a^((q-1)/2) ∈ {0, 1}`.
    pub fn is_square(&self, a: FieldElem) -> Result<bool> {
        let a = self.check(a)?;
        self.raw_is_square(a)
    }

    /// All elements in canonical order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElem> + '_ {
        (0..self.q).map(move |v| self.wrap(v))
    }

    // ---- raw kernel -------------------------------------------------------

    #[inline]
    pub fn raw_from_int(&self, n: i64) -> u64 {
        let p = self.p as i128;
        (((n as i128) % p + p) % p) as u64
    }

    #[inline]
    pub fn raw_add(&self, a: u64, b: u64) -> u64 {
        if self.k == 1 {
            let s = a + b;
            if s >= self.p {
                s - self.p
            } else {
                s
            }
        } else if self.p == 2 {
            a ^ b
        } else {
            self.digitwise(a, b, |x, y, p| {
                let s = x + y;
                if s >= p {
                    s - p
                } else {
                    s
                }
            })
        }
    }

    #[inline]
    pub fn raw_neg(&self, a: u64) -> u64 {
        if self.k == 1 {
            if a == 0 {
                0
            } else {
                self.p - a
            }
        } else if self.p == 2 {
            a
        } else {
            self.digitwise(a, 0, |x, _, p| if x == 0 { 0 } else { p - x })
        }
    }

    #[inline]
    pub fn raw_sub(&self, a: u64, b: u64) -> u64 {
        if self.k == 1 {
            if a >= b {
                a - b
            } else {
                a + self.p - b
            }
        } else if self.p == 2 {
            a ^ b
        } else {
            self.digitwise(a, b, |x, y, p| if x >= y { x - y } else { x + p - y })
        }
    }

    #[inline]
    pub fn raw_mul(&self, a: u64, b: u64) -> u64 {
        if self.k == 1 {
            return mul_mod(a, b, self.p);
        }
        if a == 0 || b == 0 {
            return 0;
        }
        match &self.tables {
            Some(t) => t.exp[(t.log[a as usize] + t.log[b as usize]) as usize] as u64,
            None => self.slow_mul(a, b),
        }
    }

    /// Inverse of a nonzero element. Returns 0 for 0.
    pub fn raw_inv(&self, a: u64) -> u64 {
        if a == 0 {
            return 0;
        }
        if self.k == 1 {
            return inv_mod(a, self.p);
        }
        match &self.tables {
            Some(t) => {
                let l = t.log[a as usize] as u64;
                t.exp[((self.q - 1 - l) % (self.q - 1)) as usize] as u64
            }
            None => self.slow_pow(a, self.q - 2),
        }
    }

    pub fn raw_pow(&self, a: u64, mut e: u64) -> u64 {
        let mut base = a;
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.raw_mul(acc, base);
            }
            base = self.raw_mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn raw_pow_big(&self, a: u64, e: &BigUint) -> u64 {
        let mut acc = 1;
        for i in (0..e.bits()).rev() {
            acc = self.raw_mul(acc, acc);
            if e.bit(i) {
                acc = self.raw_mul(acc, a);
            }
        }
        acc
    }

    pub fn raw_frobenius(&self, a: u64, i: u32) -> u64 {
        if self.k == 1 {
            return a;
        }
        (0..i % self.k).fold(a, |x, _| self.raw_pow(x, self.p))
    }

    /// Inverse of `x ↦ x^p`.
    pub fn raw_pth_root(&self, a: u64) -> u64 {
        self.raw_frobenius(a, self.k - 1)
    }

    pub fn raw_is_square(&self, a: u64) -> Result<bool> {
        if self.p == 2 {
            return Err(Error::CharacteristicTwo);
        }
        Ok(a == 0 || self.raw_pow(a, (self.q - 1) / 2) == 1)
    }

    // ---- extension-field internals -----------------------------------------

    #[inline]
    fn digitwise(&self, mut a: u64, mut b: u64, op: impl Fn(u64, u64, u64) -> u64) -> u64 {
        let p = self.p;
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.k {
            out += op(a % p, b % p, p) * place;
            a /= p;
            b /= p;
            place *= p;
        }
        out
    }

    pub(crate) fn digits(&self, mut a: u64) -> Vec<u64> {
        (0..self.k)
            .map(|_| {
                let d = a % self.p;
                a /= self.p;
                d
            })
            .collect()
    }

    pub(crate) fn undigits(&self, digits: &[u64]) -> u64 {
        digits.iter().rev().fold(0, |acc, &d| acc * self.p + d)
    }

    fn slow_mul(&self, a: u64, b: u64) -> u64 {
        let p = self.p;
        let k = self.k as usize;
        let da = self.digits(a);
        let db = self.digits(b);
        let mut prod = vec![0u64; 2 * k - 1];
        for (i, &x) in da.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + mul_mod(x, y, p)) % p;
            }
        }
        for top in (k..prod.len()).rev() {
            let c = prod[top];
            if c == 0 {
                continue;
            }
            for (j, &m) in self.modulus[..k].iter().enumerate() {
                let idx = top - k + j;
                prod[idx] = (prod[idx] + p - mul_mod(c, m, p)) % p;
            }
            prod[top] = 0;
        }
        self.undigits(&prod[..k])
    }

    fn slow_pow(&self, a: u64, mut e: u64) -> u64 {
        let mut base = a;
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.slow_mul(acc, base);
            }
            base = self.slow_mul(base, base);
            e >>= 1;
        }
        acc
    }
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldCtx").field("p", &self.p).field("k", &self.k).field("modulus", &self.modulus).finish()
    }
}

impl PartialEq for FieldCtx {
    fn eq(&self, other: &Self) -> bool {
        self.same_field(other)
    }
}

impl Eq for FieldCtx {}

fn inv_mod(a: u64, p: u64) -> u64 {
    let (mut r0, mut r1) = (p as i128, a as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    t0.rem_euclid(p as i128) as u64
}

/// Ben-Or test over `F_p`: no factor of degree `≤ k/2`.
fn is_irreducible_over_prime(p: u64, monic: &[u64]) -> Result<bool> {
    let fp = FieldCtx::prime(p)?;
    let f = Poly::from_raw(&fp, monic.to_vec());
    let k = f.degree().unwrap_or(0);
    if k == 0 {
        return Ok(false);
    }
    if monic[0] == 0 {
        return Ok(k == 1);
    }
    let x = Poly::x(&fp);
    let mut power = x.clone();
    for _ in 0..k / 2 {
        power = power.pow_mod(&BigUint::from(p), &f)?;
        let g = f.gcd(&power.sub(&x)?)?;
        if g.degree() != Some(0) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn smallest_irreducible(p: u64, k: u32) -> Result<Vec<u64>> {
    let count = p.checked_pow(k).ok_or(Error::FieldTooLarge { p, k })?;
    // Enumerate (c0, ..., c_{k-1}) lexicographically with c0 most significant.
    for index in 0..count {
        let mut coeffs = vec![0u64; k as usize + 1];
        let mut rest = index;
        for slot in (0..k as usize).rev() {
            coeffs[slot] = rest % p;
            rest /= p;
        }
        coeffs[k as usize] = 1;
        if coeffs[0] == 0 {
            continue;
        }
        if is_irreducible_over_prime(p, &coeffs)? {
            return Ok(coeffs);
        }
    }
    Err(Error::hypothesis(format!("no irreducible of degree {k} over F_{p}")))
}

#[cfg(test)]
mod tests;
