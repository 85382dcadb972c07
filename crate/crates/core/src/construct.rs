//! Defining polynomial families.
//!
//! Three families are supported:
//!
//! * `charp`: `g = u·T^m − T^t + u` with `u = ∏ (z − β_i)^{p_i}` and
//!   `z = S(x_1, …, x_n)`, where the `p_i` are primes `≡ ±1 (mod 8)`,
//!   `t = ∏ p_i`, and `m = t + q` with `q = p` (odd `p`) or `q = 8` (`p = 2`).
//! * `surrogate`: same shape with `u = z` and a small `t`, so that `m` stays
//!   small enough for statistics. It keeps the alternating-group hypotheses
//!   but drops the prime-product layer that separates the splitting fields.
//! * `char0`: `f(T, y) = (m−1)y²T^m − m·y²T^{m−1} + y² + (m−1)` with
//!   `m = 4(n−1)!`, reduced modulo the field characteristic, at `y = z`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::arith::is_prime;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::poly::Poly;
use crate::symfun::{s_value, PointSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyKind {
    Char0,
    Charp,
    Surrogate,
}

impl std::fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            FamilyKind::Char0 => "char0",
            FamilyKind::Charp => "charp",
            FamilyKind::Surrogate => "surrogate",
        })
    }
}

/// Everything needed to build `g`. Serialized field order is part of the
/// command-line contract.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstructionParams {
    pub family: FamilyKind,
    /// Hypergraph arity.
    pub n: usize,
    /// Characteristic the family is built for; 0 for `char0`.
    pub p: u64,
    /// Number of auxiliary primes (0 unless `charp`).
    pub k: usize,
    pub primes: Vec<u64>,
    /// Marker points in the prime subfield, as residues.
    pub betas: Vec<u64>,
    /// Exponent of the middle term; absent for `char0`.
    pub t: Option<u64>,
    /// Ramification exponent paired with `t` (`p`, or a power of 2); absent for `char0`.
    pub q: Option<u64>,
    /// Degree of `g` in `T`.
    pub m: u64,
    /// Defining polynomial of the working field, when one was fixed at construction.
    pub modulus: Option<Vec<u64>>,
}

/// Polynomial with unbounded integer coefficients in `T` and `y`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntPoly {
    /// `(deg_T, deg_y) -> coefficient`, zero terms omitted.
    pub terms: BTreeMap<(u64, u32), BigInt>,
}

impl IntPoly {
    /// Value at `T = 1` as a polynomial in `y`, low degree first.
    pub fn at_t_one(&self) -> Vec<BigInt> {
        let top = self.terms.keys().map(|&(_, d)| d).max().unwrap_or(0) as usize;
        let mut out = vec![BigInt::from(0); top + 1];
        for (&(_, d), c) in &self.terms {
            out[d as usize] += c;
        }
        while out.len() > 1 && out.last() == Some(&BigInt::from(0)) {
            out.pop();
        }
        out
    }
}

/// Whether the prime residue of `x` modulo 8 is 1 or 7.
fn pm_one_mod_8(x: u64) -> bool {
    matches!(x % 8, 1 | 7)
}

/// The `k` smallest primes greater than `n − 1`, different from `p` and
/// `≡ ±1 (mod 8)`. While their sum is divisible by `p`, the largest is
/// replaced by the next qualifying prime.
pub fn select_primes(n: usize, p: u64, k: usize) -> Result<Vec<u64>> {
    if n < 2 {
        return Err(Error::hypothesis("arity n must be at least 2"));
    }
    if !is_prime(p) {
        return Err(Error::CompositeCharacteristic(p));
    }
    if k < n {
        return Err(Error::hypothesis(format!(
            "the number of primes k must exceed n - 1 (k = {k}, n - 1 = {})",
            n - 1
        )));
    }
    if p == 2 && k.is_multiple_of(2) {
        return Err(Error::hypothesis(format!(
            "in characteristic 2 the sum of k odd primes must be odd, so k must be odd (k = {k})"
        )));
    }
    let qualifies = |c: u64| c > (n as u64 - 1) && c != p && pm_one_mod_8(c) && is_prime(c);
    let next_after = |c: u64| (c + 1..).find(|&x| qualifies(x)).expect("primes ≡ ±1 mod 8 are unbounded");
    let mut primes = Vec::with_capacity(k);
    let mut c = n as u64 - 1;
    while primes.len() < k {
        c = next_after(c);
        primes.push(c);
    }
    while primes.iter().map(|&x| (x % p) as u128).sum::<u128>() % p as u128 == 0 {
        let last = primes.pop().expect("k > 0");
        primes.push(next_after(last));
    }
    Ok(primes)
}

/// Faithful positive-characteristic parameters.
pub fn charp_params(n: usize, p: u64, k: usize, betas: &[u64]) -> Result<ConstructionParams> {
    if !is_prime(p) {
        return Err(Error::CompositeCharacteristic(p));
    }
    if n < 2 {
        return Err(Error::hypothesis("arity n must be at least 2"));
    }
    if (n as u64 - 1).is_multiple_of(p) {
        return Err(Error::hypothesis(format!(
            "the characteristic must not divide n - 1 (p = {p}, n - 1 = {}); build at a larger arity and fix coordinates",
            n - 1
        )));
    }
    if k as u64 > p {
        return Err(Error::hypothesis(format!(
            "k distinct betas need a prime subfield with at least k elements (k = {k}, p = {p})"
        )));
    }
    let primes = select_primes(n, p, k)?;
    let t = primes
        .iter()
        .try_fold(1u64, |acc, &x| acc.checked_mul(x))
        .ok_or_else(|| Error::budget("product of the selected primes overflows 64 bits"))?;
    let q = if p == 2 { 8 } else { p };
    let params = ConstructionParams {
        family: FamilyKind::Charp,
        n,
        p,
        k,
        primes,
        betas: betas.to_vec(),
        t: Some(t),
        q: Some(q),
        m: t + q,
        modulus: None,
    };
    params.validate()?;
    Ok(params)
}

/// Small-degree family `u·T^m − T^t + u` with `u = S(points)`.
/// Odd `p` forces `q = p` (`l = 1`); `p = 2` takes `q = 2^l`.
pub fn surrogate_params(n: usize, p: u64, t: u64, l: u32) -> Result<ConstructionParams> {
    if !is_prime(p) {
        return Err(Error::CompositeCharacteristic(p));
    }
    let q = if p == 2 {
        2u64.checked_pow(l).ok_or_else(|| Error::hypothesis("q = 2^l overflows"))?
    } else {
        if l != 1 {
            return Err(Error::hypothesis(format!("odd characteristic forces q = p, so l must be 1 (got l = {l})")));
        }
        p
    };
    let params = ConstructionParams {
        family: FamilyKind::Surrogate,
        n,
        p,
        k: 0,
        primes: Vec::new(),
        betas: Vec::new(),
        t: Some(t),
        q: Some(q),
        m: t.checked_add(q).ok_or_else(|| Error::hypothesis("m = t + q overflows"))?,
        modulus: None,
    };
    params.validate()?;
    Ok(params)
}

/// `m = 4(n−1)!`, with `m = 8` for `n = 2` so the alternating group is simple.
pub fn char0_degree(n: usize) -> Result<u64> {
    if n < 2 {
        return Err(Error::hypothesis("arity n must be at least 2"));
    }
    if n == 2 {
        return Ok(8);
    }
    (1..n as u64)
        .try_fold(4u64, |acc, i| acc.checked_mul(i))
        .ok_or_else(|| Error::budget(format!("4({}-1)! overflows 64 bits", n)))
}

pub fn char0_params(n: usize, m_override: Option<u64>) -> Result<ConstructionParams> {
    let m = match m_override {
        Some(m) => m,
        None => char0_degree(n)?,
    };
    let params = ConstructionParams {
        family: FamilyKind::Char0,
        n,
        p: 0,
        k: 0,
        primes: Vec::new(),
        betas: Vec::new(),
        t: None,
        q: None,
        m,
        modulus: None,
    };
    params.validate()?;
    Ok(params)
}

/// `(m−1)y²T^m − m·y²T^{m−1} + y² + (m−1)` over the integers.
pub fn char0_family(n: usize) -> Result<IntPoly> {
    Ok(char0_int_poly(char0_degree(n)?))
}

pub fn char0_int_poly(m: u64) -> IntPoly {
    let mi = BigInt::from(m);
    let mut terms = BTreeMap::new();
    terms.insert((m, 2), &mi - 1);
    terms.insert((m - 1, 2), -mi.clone());
    terms.insert((0, 2), BigInt::from(1));
    terms.insert((0, 0), &mi - 1);
    IntPoly { terms }
}

impl ConstructionParams {
    /// Checks every invariant of the family; construction functions call this.
    pub fn validate(&self) -> Result<()> {
        let n = self.n;
        if n < 2 {
            return Err(Error::hypothesis("arity n must be at least 2"));
        }
        match self.family {
            FamilyKind::Char0 => {
                if self.p != 0 || self.k != 0 || !self.primes.is_empty() || !self.betas.is_empty() {
                    return Err(Error::hypothesis("char0 parameters carry no characteristic, primes or betas"));
                }
                if self.t.is_some() || self.q.is_some() {
                    return Err(Error::hypothesis("char0 parameters carry no t or q"));
                }
                if self.m < 8 || !self.m.is_multiple_of(4) {
                    return Err(Error::hypothesis(format!(
                        "m must be a multiple of 4 with m >= 8 so that Alt(m) is simple (got m = {})",
                        self.m
                    )));
                }
            }
            FamilyKind::Surrogate => {
                let (t, q) = self.t_q()?;
                let p = self.p;
                if !is_prime(p) {
                    return Err(Error::CompositeCharacteristic(p));
                }
                if self.k != 0 || !self.primes.is_empty() || !self.betas.is_empty() {
                    return Err(Error::hypothesis("surrogate parameters carry no primes or betas"));
                }
                if t == 0 || t % p == 0 {
                    return Err(Error::hypothesis(format!(
                        "t must not be divisible by the characteristic (t = {t}, p = {p})"
                    )));
                }
                if p > 2 && q != p {
                    return Err(Error::hypothesis(format!("odd characteristic requires q = p (got q = {q})")));
                }
                if p == 2 {
                    if !q.is_power_of_two() {
                        return Err(Error::hypothesis(format!("q must be a power of 2 (got {q})")));
                    }
                    if !(t > q && q > 2) {
                        return Err(Error::hypothesis(format!(
                            "characteristic 2 requires t > q > 2 (t = {t}, q = {q})"
                        )));
                    }
                    if !pm_one_mod_8(t + q) {
                        return Err(Error::hypothesis(format!(
                            "characteristic 2 requires t + q ≡ ±1 (mod 8) (t + q = {})",
                            t + q
                        )));
                    }
                }
                if self.m != t + q {
                    return Err(Error::hypothesis(format!("m must equal t + q (m = {}, t + q = {})", self.m, t + q)));
                }
            }
            FamilyKind::Charp => {
                let (t, q) = self.t_q()?;
                let p = self.p;
                if !is_prime(p) {
                    return Err(Error::CompositeCharacteristic(p));
                }
                if (n as u64 - 1).is_multiple_of(p) {
                    return Err(Error::hypothesis(format!(
                        "the characteristic must not divide n - 1 (p = {p}, n - 1 = {})",
                        n - 1
                    )));
                }
                if self.k < n {
                    return Err(Error::hypothesis(format!(
                        "the number of primes k must exceed n - 1 (k = {}, n - 1 = {})",
                        self.k,
                        n - 1
                    )));
                }
                if self.primes.len() != self.k {
                    return Err(Error::hypothesis(format!("expected {} primes, got {}", self.k, self.primes.len())));
                }
                let mut sorted = self.primes.clone();
                sorted.sort_unstable();
                sorted.dedup();
                if sorted.len() != self.k {
                    return Err(Error::hypothesis("the primes must be distinct"));
                }
                for &pi in &self.primes {
                    if !is_prime(pi) || pi < n as u64 || pi == p || !pm_one_mod_8(pi) {
                        return Err(Error::hypothesis(format!(
                            "each p_i must be a prime greater than n - 1, different from the characteristic, and ≡ ±1 (mod 8) (offending p_i = {pi})"
                        )));
                    }
                }
                if self.primes.iter().map(|&x| x as u128).sum::<u128>() % p as u128 == 0 {
                    return Err(Error::hypothesis("the sum of the primes must not be divisible by the characteristic"));
                }
                if self.k as u64 > p {
                    return Err(Error::hypothesis(format!(
                        "k distinct betas need a prime subfield with at least k elements (k = {}, p = {p})",
                        self.k
                    )));
                }
                if self.betas.len() != self.k {
                    return Err(Error::hypothesis(format!("expected {} betas, got {}", self.k, self.betas.len())));
                }
                if self.betas.iter().any(|&b| b >= p) {
                    return Err(Error::hypothesis(format!("betas must be residues in [0, {p})")));
                }
                let mut b = self.betas.clone();
                b.sort_unstable();
                b.dedup();
                if b.len() != self.k {
                    return Err(Error::hypothesis("the betas must be distinct"));
                }
                let product = self.primes.iter().try_fold(1u64, |acc, &x| acc.checked_mul(x));
                if product != Some(t) {
                    return Err(Error::hypothesis("t must equal the product of the primes"));
                }
                if !pm_one_mod_8(t) {
                    return Err(Error::hypothesis(format!("t must be ≡ ±1 (mod 8) (t = {t})")));
                }
                let expected_q = if p == 2 { 8 } else { p };
                if q != expected_q {
                    return Err(Error::hypothesis(format!("q must be {expected_q} in characteristic {p} (got {q})")));
                }
                if self.m != t + q {
                    return Err(Error::hypothesis(format!("m must equal t + q (m = {}, t + q = {})", self.m, t + q)));
                }
            }
        }
        Ok(())
    }

    fn t_q(&self) -> Result<(u64, u64)> {
        match (self.t, self.q) {
            (Some(t), Some(q)) => Ok((t, q)),
            _ => Err(Error::hypothesis(format!("{} parameters need both t and q", self.family))),
        }
    }

    pub fn is_surrogate(&self) -> bool {
        self.family == FamilyKind::Surrogate
    }

    /// Records the defining polynomial of the working field.
    pub fn with_field(mut self, field: &Field) -> Self {
        self.modulus = (!field.is_prime_field()).then(|| field.modulus().to_vec());
        self
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let params: ConstructionParams = serde_json::from_str(s)?;
        params.validate()?;
        Ok(params)
    }
}

/// Whether a family may be evaluated over a field of another characteristic.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum CharPolicy {
    /// The field characteristic must equal `params.p` (`char0`: must not divide `m(m−1)`).
    #[default]
    Matching,
    /// Any characteristic in which the polynomial is well defined. Used for
    /// timing the faithful parameters over a large prime field.
    Any,
}

/// Polynomial in `T` whose coefficients are polynomials in a parameter `y`.
#[derive(Clone, Debug)]
pub struct Pencil {
    field: Field,
    /// `coeffs[i]` is the coefficient of `T^i`.
    coeffs: Vec<Poly>,
}

impl Pencil {
    pub fn new(field: &Field, coeffs: Vec<Poly>) -> Result<Self> {
        if coeffs.iter().any(|c| !c.field().same_field(field)) {
            return Err(Error::FieldMismatch);
        }
        let mut coeffs = coeffs;
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Ok(Pencil { field: field.clone(), coeffs })
    }

    /// `T^(t+q) − y·T^t + 1`.
    pub fn abhyankar(field: &Field, t: u64, q: u64) -> Self {
        let m = (t + q) as usize;
        let mut coeffs = vec![Poly::zero(field); m + 1];
        coeffs[0] = Poly::one(field);
        coeffs[t as usize] = Poly::from_ints(field, &[0, -1]);
        coeffs[m] = Poly::one(field);
        Pencil { field: field.clone(), coeffs }
    }

    /// `y·T^(t+q) − T^t + y`, the shape `g` takes with `y = u`.
    pub fn inverted_abhyankar(field: &Field, t: u64, q: u64) -> Self {
        let m = (t + q) as usize;
        let mut coeffs = vec![Poly::zero(field); m + 1];
        coeffs[0] = Poly::x(field);
        coeffs[t as usize] = Poly::from_ints(field, &[-1]);
        coeffs[m] = Poly::x(field);
        Pencil { field: field.clone(), coeffs }
    }

    /// Reduction of an integer polynomial modulo the field characteristic.
    pub fn from_int_poly(field: &Field, f: &IntPoly) -> Self {
        let p = BigInt::from(field.characteristic());
        let top = f.terms.keys().map(|&(t, _)| t).max().unwrap_or(0) as usize;
        let mut raw: Vec<Vec<u64>> = vec![Vec::new(); top + 1];
        for (&(t, d), c) in &f.terms {
            let r: BigInt = ((c % &p) + &p) % &p;
            let r = u64::try_from(r).expect("residue below p");
            let slot = &mut raw[t as usize];
            if slot.len() <= d as usize {
                slot.resize(d as usize + 1, 0);
            }
            slot[d as usize] = field.raw_add(slot[d as usize], r);
        }
        let coeffs = raw.into_iter().map(|c| Poly::from_raw(field, c)).collect();
        Pencil::new(field, coeffs).expect("same field")
    }

    /// The family for a parameter set, in the variable `y` that `g` substitutes.
    pub fn for_params(params: &ConstructionParams, field: &Field) -> Result<Self> {
        match params.family {
            FamilyKind::Char0 => {
                check_char0_reduction(params.m, field.characteristic())?;
                Ok(Pencil::from_int_poly(field, &char0_int_poly(params.m)))
            }
            FamilyKind::Charp | FamilyKind::Surrogate => {
                let (t, q) = params.t_q()?;
                Ok(Pencil::inverted_abhyankar(field, t, q))
            }
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn t_degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn y_degree(&self) -> usize {
        self.coeffs.iter().filter_map(|c| c.degree()).max().unwrap_or(0)
    }

    /// True when no coefficient involves `y`.
    pub fn is_constant_in_y(&self) -> bool {
        self.coeffs.iter().all(|c| c.degree().unwrap_or(0) == 0)
    }

    pub fn specialize_raw(&self, y: u64) -> Poly {
        let coeffs = self.coeffs.iter().map(|c| c.eval_raw(y)).collect();
        Poly::from_raw(&self.field, coeffs)
    }
}

fn check_char0_reduction(m: u64, p: u64) -> Result<()> {
    if m.is_multiple_of(p) {
        return Err(Error::hypothesis(format!("degenerate reduction: characteristic {p} divides m = {m}")));
    }
    if (m - 1).is_multiple_of(p) {
        return Err(Error::hypothesis(format!("degenerate reduction: characteristic {p} divides m - 1 = {}", m - 1)));
    }
    Ok(())
}

/// Builds `g(T, x_1, …, x_n)` for concrete points over a field.
#[derive(Clone, Debug)]
pub struct GBuilder {
    params: ConstructionParams,
    field: Field,
    betas: Vec<u64>,
    pencil: Option<Pencil>,
}

impl GBuilder {
    pub fn new(params: &ConstructionParams, field: &Field) -> Result<Self> {
        Self::with_policy(params, field, CharPolicy::Matching)
    }

    pub fn with_policy(params: &ConstructionParams, field: &Field, policy: CharPolicy) -> Result<Self> {
        params.validate()?;
        let p = field.characteristic();
        match params.family {
            FamilyKind::Char0 => check_char0_reduction(params.m, p)?,
            FamilyKind::Charp | FamilyKind::Surrogate => {
                if policy == CharPolicy::Matching && p != params.p {
                    return Err(Error::hypothesis(format!(
                        "parameters are built for characteristic {} but the field has characteristic {p}",
                        params.p
                    )));
                }
            }
        }
        let betas: Vec<u64> = params.betas.iter().map(|&b| field.raw_from_int(b as i64)).collect();
        let mut distinct = betas.clone();
        distinct.sort_unstable();
        distinct.dedup();
        if distinct.len() != betas.len() {
            return Err(Error::hypothesis("the betas are not distinct in this field"));
        }
        let pencil = match params.family {
            FamilyKind::Char0 => Some(Pencil::for_params(params, field)?),
            _ => None,
        };
        Ok(GBuilder { params: params.clone(), field: field.clone(), betas, pencil })
    }

    pub fn params(&self) -> &ConstructionParams {
        &self.params
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    fn check_points(&self, pts: &PointSet) -> Result<()> {
        if !pts.field().same_field(&self.field) {
            return Err(Error::FieldMismatch);
        }
        if pts.len() != self.params.n {
            return Err(Error::PointCount { expected: self.params.n, found: pts.len() });
        }
        if !pts.is_distinct() {
            let sorted = pts.sorted();
            if sorted.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::RepeatedPoints);
            }
        }
        Ok(())
    }

    /// `z = S(points)`.
    pub fn z(&self, pts: &PointSet) -> Result<u64> {
        self.check_points(pts)?;
        Ok(s_value(&self.field, pts.raw()))
    }

    /// `u = ∏ (z − β_i)^{p_i}` (`charp`) or `u = z` (`surrogate`).
    pub fn u(&self, pts: &PointSet) -> Result<u64> {
        let z = self.z(pts)?;
        self.u_from_z(z)
    }

    pub(crate) fn u_from_z(&self, z: u64) -> Result<u64> {
        let f = &self.field;
        match self.params.family {
            FamilyKind::Surrogate => Ok(z),
            FamilyKind::Charp => Ok(self
                .betas
                .iter()
                .zip(&self.params.primes)
                .fold(1, |acc, (&b, &pi)| f.raw_mul(acc, f.raw_pow(f.raw_sub(z, b), pi)))),
            FamilyKind::Char0 => Err(Error::hypothesis("u is only defined for the charp and surrogate families")),
        }
    }

    /// `g` specialized at the points, as a polynomial in `T`.
    pub fn g(&self, pts: &PointSet) -> Result<Poly> {
        let z = self.z(pts)?;
        self.g_from_z(z)
    }

    /// `g` as a function of `z = S(points)`.
    pub(crate) fn g_from_z(&self, z: u64) -> Result<Poly> {
        match &self.pencil {
            Some(pencil) => Ok(pencil.specialize_raw(z)),
            None => {
                let u = self.u_from_z(z)?;
                Ok(self.g_from_u(u))
            }
        }
    }

    pub(crate) fn g_from_u(&self, u: u64) -> Poly {
        let (t, q) = self.params.t_q().expect("validated");
        let m = (t + q) as usize;
        let mut coeffs = vec![0u64; m + 1];
        coeffs[0] = u;
        coeffs[t as usize] = self.field.raw_neg(1);
        coeffs[m] = self.field.raw_add(coeffs[m], u);
        Poly::from_raw(&self.field, coeffs)
    }

    /// Whether `u = 0`, which makes `g = −T^t` and forces the root 0.
    pub fn is_degenerate(&self, pts: &PointSet) -> Result<bool> {
        match self.params.family {
            FamilyKind::Char0 => Ok(false),
            _ => Ok(self.u(pts)? == 0),
        }
    }
}

pub fn build_u(params: &ConstructionParams, field: &Field, pts: &PointSet) -> Result<u64> {
    GBuilder::new(params, field)?.u(pts)
}

pub fn build_g(params: &ConstructionParams, field: &Field, pts: &PointSet) -> Result<Poly> {
    GBuilder::new(params, field)?.g(pts)
}

#[cfg(test)]
mod tests {
    use num_bigint::BigUint;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::field::FieldCtx;

    /// Primes in ascending order by trial division, filtered as the
    /// selection rule requires.
    fn sieve_candidates(n: usize, p: u64, limit: u64) -> Vec<u64> {
        (2..limit)
            .filter(|&c| (2..c).take_while(|d| d * d <= c).all(|d| c % d != 0))
            .filter(|&c| c > n as u64 - 1 && c != p && (c % 8 == 1 || c % 8 == 7))
            .collect()
    }

    #[test]
    fn prime_selection_examples() {
        assert_eq!(sieve_candidates(3, 5, 50)[..3], [7, 17, 23]);
        assert_eq!(select_primes(3, 5, 3).unwrap(), vec![7, 17, 23]);
        assert_eq!(47 % 5, 2);
        assert_eq!(sieve_candidates(3, 7, 50)[..3], [17, 23, 31]);
        assert_eq!(select_primes(3, 7, 3).unwrap(), vec![17, 23, 31]);
        assert_eq!(71 % 7, 1);
        let err = select_primes(3, 5, 2).unwrap_err();
        assert!(err.to_string().contains("k must exceed n - 1"), "{err}");
    }

    #[test]
    fn prime_selection_repairs_sum() {
        // For p = 3, k = 3, n = 3: 7 + 17 + 23 = 47 ≢ 0 (mod 3). Search for a
        // characteristic that does hit 0 and check the repair rule.
        for p in [3u64, 11, 13, 47, 53] {
            let primes = select_primes(3, p, 3).unwrap();
            let sum: u64 = primes.iter().sum();
            assert_ne!(sum % p, 0);
            let candidates = sieve_candidates(3, p, 200);
            assert_eq!(primes[..2], candidates[..2]);
            let initial: u64 = candidates[..3].iter().sum();
            if !initial.is_multiple_of(p) {
                assert_eq!(primes, candidates[..3]);
            } else {
                // The largest was replaced by a later candidate.
                assert!(primes[2] > candidates[2]);
            }
        }
        // 7 + 17 + 23 = 47: characteristic 47 is excluded from the primes and forces a repair.
        let primes = select_primes(3, 47, 3).unwrap();
        assert_eq!(primes, vec![7, 17, 31]);
    }

    #[test]
    fn charp_faithful_parameters() {
        let params = charp_params(3, 5, 3, &[1, 2, 3]).unwrap();
        assert_eq!(params.primes, vec![7, 17, 23]);
        assert_eq!(params.t, Some(2737));
        assert_eq!(params.q, Some(5));
        assert_eq!(params.m, 2742);
        assert_eq!(2737 % 8, 1);
        assert!(charp_params(3, 2, 3, &[1, 2, 3]).is_err());
        let err = charp_params(4, 3, 4, &[0, 1, 2, 3]).unwrap_err();
        assert!(err.to_string().contains("must not divide n - 1"), "{err}");
        assert!(charp_params(3, 5, 3, &[1, 1, 2]).is_err());
        assert!(charp_params(3, 5, 3, &[1, 2]).is_err());
        let err = charp_params(3, 2, 3, &[0, 1, 1]).unwrap_err();
        assert!(err.to_string().contains("must not divide n - 1") || err.to_string().contains("at least k"), "{err}");
        let err = charp_params(2, 2, 3, &[0, 1, 1]).unwrap_err();
        assert!(err.to_string().contains("at least k elements"), "{err}");
        let err = select_primes(2, 2, 2).unwrap_err();
        assert!(err.to_string().contains("k must be odd"), "{err}");
    }

    #[test]
    fn surrogate_examples() {
        let s = surrogate_params(3, 3, 2, 1).unwrap();
        assert_eq!((s.t, s.q, s.m), (Some(2), Some(3), 5));
        assert!(surrogate_params(3, 3, 3, 1).is_err());
        let s = surrogate_params(3, 2, 9, 3).unwrap();
        assert_eq!(s.m, 17);
        assert_eq!(17 % 8, 1);
        assert_eq!(surrogate_params(3, 2, 5, 2).unwrap().m, 9);
        assert!(surrogate_params(3, 2, 5, 1).is_err());
        assert!(surrogate_params(3, 2, 7, 2).is_err());
        assert!(surrogate_params(3, 5, 2, 2).is_err());
    }

    #[test]
    fn char0_family_shape() {
        let f = char0_family(3).unwrap();
        assert_eq!(f.terms.len(), 4);
        assert_eq!(f.terms[&(8, 2)], BigInt::from(7));
        assert_eq!(f.terms[&(7, 2)], BigInt::from(-8));
        assert_eq!(f.terms[&(0, 2)], BigInt::from(1));
        assert_eq!(f.terms[&(0, 0)], BigInt::from(7));
        assert_eq!(char0_family(2).unwrap(), char0_int_poly(8));
        // f(1, y) = (m−1)y² − m y² + y² + (m−1) = m − 1.
        for n in 2..7 {
            let m = char0_degree(n).unwrap();
            assert_eq!(char0_family(n).unwrap().at_t_one(), vec![BigInt::from(m - 1)]);
        }
        assert_eq!(char0_degree(4).unwrap(), 24);
    }

    #[test]
    fn char0_reduction_degeneracy() {
        let params = char0_params(3, None).unwrap();
        let f7 = FieldCtx::prime(7).unwrap();
        let err = GBuilder::new(&params, &f7).unwrap_err();
        assert!(err.to_string().contains("divides m - 1"), "{err}");
        let f2 = FieldCtx::prime(2).unwrap();
        assert!(GBuilder::new(&params, &f2).is_err());
        let f = FieldCtx::prime(10007).unwrap();
        let pencil = Pencil::for_params(&params, &f).unwrap();
        // Evaluator at T = 1 returns m − 1 for every y.
        for y in [0u64, 1, 5, 10006] {
            assert_eq!(pencil.specialize_raw(y).eval_raw(1), 7);
        }
        assert!(char0_params(3, Some(6)).is_err());
    }

    #[test]
    fn u_and_g_degenerate_cases() {
        let f = FieldCtx::new(3, 5, None).unwrap();
        let s = surrogate_params(3, 3, 2, 1).unwrap();
        let b = GBuilder::new(&s, &f).unwrap();
        // Find points with S(points) = 0.
        let zero_pts = crate::combin::Combinations::new(f.order() as usize, 3)
            .map(|c| PointSet::from_raw(&f, c.iter().map(|&x| x as u64).collect(), true).unwrap())
            .find(|p| b.z(p).unwrap() == 0)
            .expect("S vanishes somewhere");
        assert_eq!(b.u(&zero_pts).unwrap(), 0);
        assert_eq!(b.g(&zero_pts).unwrap(), Poly::monomial(&f, f.raw_neg(1), 2));
        assert!(b.is_degenerate(&zero_pts).unwrap());
        assert_eq!(b.g_from_u(1), Poly::from_ints(&f, &[1, 0, -1, 0, 0, 1]));

        let cp = charp_params(3, 5, 3, &[1, 2, 3]).unwrap();
        let f5 = FieldCtx::new(5, 2, None).unwrap();
        let b = GBuilder::new(&cp, &f5).unwrap();
        let hit = crate::combin::Combinations::new(f5.order() as usize, 3)
            .map(|c| PointSet::from_raw(&f5, c.iter().map(|&x| x as u64).collect(), true).unwrap())
            .find(|p| b.z(p).unwrap() == 1)
            .expect("S takes the value beta_1");
        assert_eq!(b.u(&hit).unwrap(), 0);
    }

    #[test]
    fn faithful_u_against_big_exponent_oracle() {
        let cp = charp_params(3, 5, 3, &[1, 2, 3]).unwrap();
        let f = FieldCtx::prime(10007).unwrap();
        let b = GBuilder::with_policy(&cp, &f, CharPolicy::Any).unwrap();
        let pts = PointSet::from_raw(&f, vec![0, 1, 2], true).unwrap();
        // S_{3,2}(0,1,2) = 0 + 1 + 4 + 0 + 0 + 2 = 7.
        let z = f.from_int(7);
        let mut oracle = f.one();
        for (&beta, &pi) in cp.betas.iter().zip(&cp.primes) {
            let factor = f.sub(z, f.from_int(beta as i64)).unwrap();
            oracle = f.mul(oracle, f.pow(factor, &BigUint::from(pi)).unwrap()).unwrap();
        }
        assert_eq!(b.u(&pts).unwrap(), oracle.value());
        assert!(GBuilder::new(&cp, &f).is_err(), "characteristic mismatch under the default policy");
    }

    #[test]
    fn g_is_symmetric_in_the_points() {
        let f = FieldCtx::new(3, 6, None).unwrap();
        let s = surrogate_params(4, 3, 2, 1).unwrap();
        let cp = charp_params(3, 3, 3, &[0, 1, 2]).unwrap();
        let c0 = char0_params(3, None).unwrap();
        let f101 = FieldCtx::prime(101).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(40);
        for (params, field) in [(&s, &f), (&cp, &f), (&c0, &f101)] {
            let b = GBuilder::new(params, field).unwrap();
            for _ in 0..100 {
                let mut pts: Vec<u64> = Vec::new();
                while pts.len() < params.n {
                    let c = rng.gen_range(0..field.order());
                    if !pts.contains(&c) {
                        pts.push(c);
                    }
                }
                let g0 = b.g(&PointSet::from_raw(field, pts.clone(), true).unwrap()).unwrap();
                pts.reverse();
                pts.swap(0, params.n - 1 - rng.gen_range(0..params.n - 1));
                let g1 = b.g(&PointSet::from_raw(field, pts, true).unwrap()).unwrap();
                assert_eq!(g0, g1);
            }
        }
    }

    #[test]
    fn point_checks() {
        let f = FieldCtx::new(3, 2, None).unwrap();
        let s = surrogate_params(3, 3, 2, 1).unwrap();
        let b = GBuilder::new(&s, &f).unwrap();
        assert!(matches!(b.g(&PointSet::from_raw(&f, vec![0, 1], true).unwrap()), Err(Error::PointCount { .. })));
        assert!(matches!(b.g(&PointSet::from_raw(&f, vec![0, 1, 1], false).unwrap()), Err(Error::RepeatedPoints)));
    }

    #[test]
    fn params_json_has_exact_fields() {
        let params = charp_params(3, 5, 3, &[1, 2, 3]).unwrap();
        let v: serde_json::Value = serde_json::from_str(&params.to_json().unwrap()).unwrap();
        let keys: Vec<&str> = v.as_object().unwrap().keys().map(|k| k.as_str()).collect();
        let mut expected = vec!["family", "n", "p", "k", "primes", "betas", "t", "q", "m", "modulus"];
        expected.sort_unstable();
        let mut keys_sorted = keys.clone();
        keys_sorted.sort_unstable();
        assert_eq!(keys_sorted, expected);
        assert_eq!(v["family"], "charp");
        assert_eq!(ConstructionParams::from_json(&params.to_json().unwrap()).unwrap(), params);
        let tampered = params.to_json().unwrap().replace("2742", "2743");
        assert!(ConstructionParams::from_json(&tampered).is_err());
    }
}
