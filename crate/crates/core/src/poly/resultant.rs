//! Resultants and discriminants by Euclidean remainder sequences.

use super::{Poly, Reducer};
use crate::error::{Error, Result};
use crate::field::FieldElem;

impl Poly {
    /// `Res(self, other)` with respect to the actual degrees of both inputs,
    /// `lc(a)^deg(b) · ∏_{a(α)=0} b(α)`. Zero if either input is zero.
    pub fn resultant(&self, other: &Poly) -> Result<FieldElem> {
        if !self.field().same_field(other.field()) {
            return Err(Error::FieldMismatch);
        }
        Ok(self.field().wrap(resultant_raw(self, other)))
    }

    /// `(-1)^(d(d-1)/2) · Res(f, f') / lc(f)`, with `f'` taken at formal degree `d - 1`.
    pub fn discriminant(&self) -> Result<FieldElem> {
        let d = match self.degree() {
            None => return Err(Error::ZeroPolynomial),
            Some(d) if d < 2 => return Err(Error::DegreeTooSmall { found: d, required: 2 }),
            Some(d) => d,
        };
        let field = self.field();
        let deriv = self.derivative();
        let lead = self.lead_raw();
        let disc = match deriv.degree() {
            None => 0,
            Some(dd) => {
                // Res at formal degree d-1 picks up lc(f)^(d-1-dd).
                let res = resultant_raw(self, &deriv);
                let scaled = field.raw_mul(res, field.raw_pow(lead, (d - 1 - dd) as u64));
                let value = field.raw_mul(scaled, field.raw_inv(lead));
                if (d * (d - 1) / 2) % 2 == 1 {
                    field.raw_neg(value)
                } else {
                    value
                }
            }
        };
        Ok(field.wrap(disc))
    }
}

fn resultant_raw(a: &Poly, b: &Poly) -> u64 {
    let field = a.field().clone();
    if a.is_zero() || b.is_zero() {
        return 0;
    }
    let mut a = a.clone();
    let mut b = b.clone();
    let mut acc = 1u64;
    loop {
        let m = a.degree().unwrap_or(0);
        let n = b.degree().unwrap_or(0);
        if n == 0 {
            return field.raw_mul(acc, field.raw_pow(b.lead_raw(), m as u64));
        }
        let r = Reducer::new(&b).reduce(a.raw_coeffs().to_vec());
        let Some(dr) = r.degree() else {
            return 0;
        };
        // Res(a, b) = (-1)^(mn) Res(b, a) and Res(b, a) = lc(b)^(m - deg r) Res(b, r).
        if (m * n) % 2 == 1 {
            acc = field.raw_neg(acc);
        }
        acc = field.raw_mul(acc, field.raw_pow(b.lead_raw(), (m - dr) as u64));
        a = b;
        b = r;
    }
}
