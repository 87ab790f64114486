//! Dense univariate polynomials over any supported field: ring arithmetic,
//! division, gcd with Bezout cofactors, evaluation, and modular powers.
//!
//! Coefficients are stored low-degree-first with a nonzero leading
//! coefficient; the zero polynomial is the empty vector and its degree is
//! reported as `None`.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::field::{Field, FieldElement};

#[derive(Clone, PartialEq, Eq)]
pub struct Polynomial {
    field: Field,
    coeffs: Vec<FieldElement>,
}

/// Binary polynomial operation selector for the dispatch entry point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolyOp {
    Add,
    Sub,
    Mul,
    DivMod,
}

/// Result of [`poly_arith`].
#[derive(Clone, Debug)]
pub enum PolyArith {
    Single(Polynomial),
    DivMod { quotient: Polynomial, remainder: Polynomial },
}

/// Checked ring-arithmetic dispatch.
pub fn poly_arith(f: &Polynomial, g: &Polynomial, op: PolyOp) -> Result<PolyArith> {
    if f.field != g.field {
        return Err(Error::FieldMismatch(
            f.field.to_string(),
            g.field.to_string(),
        ));
    }
    Ok(match op {
        PolyOp::Add => PolyArith::Single(f + g),
        PolyOp::Sub => PolyArith::Single(f - g),
        PolyOp::Mul => PolyArith::Single(f * g),
        PolyOp::DivMod => {
            let (quotient, remainder) = f.divmod(g)?;
            PolyArith::DivMod { quotient, remainder }
        }
    })
}

impl Polynomial {
    pub fn zero(field: &Field) -> Polynomial {
        Polynomial {
            field: field.clone(),
            coeffs: Vec::new(),
        }
    }

    pub fn one(field: &Field) -> Polynomial {
        Polynomial::constant(field.one())
    }

    /// The monomial `x`.
    pub fn x(field: &Field) -> Polynomial {
        Polynomial::from_coeffs(field, vec![field.zero(), field.one()])
    }

    pub fn constant(c: FieldElement) -> Polynomial {
        let field = c.field().clone();
        Polynomial::from_coeffs(&field, vec![c])
    }

    /// `c * x^k`.
    pub fn monomial(field: &Field, c: FieldElement, k: usize) -> Polynomial {
        let mut coeffs = vec![field.zero(); k + 1];
        coeffs[k] = c;
        Polynomial::from_coeffs(field, coeffs)
    }

    /// Build from low-degree-first coefficients, trimming leading zeros.
    pub fn from_coeffs(field: &Field, mut coeffs: Vec<FieldElement>) -> Polynomial {
        for c in &coeffs {
            assert_eq!(c.field(), field, "coefficient from a different field");
        }
        while coeffs.last().is_some_and(FieldElement::is_zero) {
            coeffs.pop();
        }
        Polynomial {
            field: field.clone(),
            coeffs,
        }
    }

    /// Build from signed integers, low-degree-first.
    pub fn from_ints(field: &Field, ints: &[i64]) -> Polynomial {
        Polynomial::from_coeffs(field, ints.iter().map(|&v| field.int(v)).collect())
    }

    /// Build from residues (used by extension-field validation).
    pub(crate) fn from_residues(field: &Field, residues: &[u64]) -> Polynomial {
        Polynomial::from_coeffs(
            field,
            residues
                .iter()
                .map(|&r| field.residue(r).expect("prime field"))
                .collect(),
        )
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    /// Coefficient of `x^i` (zero beyond the degree).
    pub fn coeff(&self, i: usize) -> FieldElement {
        self.coeffs.get(i).cloned().unwrap_or_else(|| self.field.zero())
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(FieldElement::is_one)
    }

    pub fn leading_coeff(&self) -> Option<&FieldElement> {
        self.coeffs.last()
    }

    /// Scale to leading coefficient one (zero stays zero).
    pub fn monic(&self) -> Polynomial {
        match self.leading_coeff() {
            None => self.clone(),
            Some(lc) if lc.is_one() => self.clone(),
            Some(lc) => self.scale(&lc.inv().expect("leading coefficient is nonzero")),
        }
    }

    pub fn scale(&self, s: &FieldElement) -> Polynomial {
        Polynomial::from_coeffs(&self.field, self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn eval(&self, at: &FieldElement) -> FieldElement {
        let mut acc = self.field.zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * at) + c;
        }
        acc
    }

    pub fn derivative(&self) -> Polynomial {
        if self.coeffs.len() <= 1 {
            return Polynomial::zero(&self.field);
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| {
                let mut acc = self.field.zero();
                // i * c by repeated doubling on the integer i
                let mut base = c.clone();
                let mut k = i as u64;
                while k > 0 {
                    if k & 1 == 1 {
                        acc = &acc + &base;
                    }
                    base = &base + &base;
                    k >>= 1;
                }
                acc
            })
            .collect();
        Polynomial::from_coeffs(&self.field, coeffs)
    }

    /// Quotient and remainder with `self = q*g + r`, `deg r < deg g`.
    pub fn divmod(&self, g: &Polynomial) -> Result<(Polynomial, Polynomial)> {
        if self.field != g.field {
            return Err(Error::FieldMismatch(
                self.field.to_string(),
                g.field.to_string(),
            ));
        }
        if g.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let dg = g.coeffs.len() - 1;
        let lead_inv = g.leading_coeff().unwrap().inv()?;
        let mut rem = self.coeffs.clone();
        if rem.len() < g.coeffs.len() {
            return Ok((Polynomial::zero(&self.field), self.clone()));
        }
        let mut quo = vec![self.field.zero(); rem.len() - dg];
        while rem.len() >= g.coeffs.len() {
            let shift = rem.len() - g.coeffs.len();
            let c = rem.last().unwrap() * &lead_inv;
            for (i, gc) in g.coeffs.iter().enumerate() {
                let t = &c * gc;
                rem[shift + i] = &rem[shift + i] - &t;
            }
            quo[shift] = c;
            while rem.last().is_some_and(FieldElement::is_zero) {
                rem.pop();
            }
        }
        Ok((
            Polynomial::from_coeffs(&self.field, quo),
            Polynomial::from_coeffs(&self.field, rem),
        ))
    }

    pub fn rem(&self, g: &Polynomial) -> Result<Polynomial> {
        Ok(self.divmod(g)?.1)
    }

    /// Exact division; errors with `DivisionByZero` on zero divisor and
    /// panics if the division leaves a remainder (caller guarantees
    /// divisibility).
    pub fn div_exact(&self, g: &Polynomial) -> Result<Polynomial> {
        let (q, r) = self.divmod(g)?;
        assert!(r.is_zero(), "div_exact with a nonzero remainder");
        Ok(q)
    }

    pub fn divides(&self, other: &Polynomial) -> bool {
        !self.is_zero() && other.divmod(self).map(|(_, r)| r.is_zero()).unwrap_or(false)
    }

    /// Monic gcd; `gcd(f, 0) = monic(f)` and `gcd(0, 0) = 0`.
    pub fn gcd(&self, g: &Polynomial) -> Polynomial {
        let mut a = self.clone();
        let mut b = g.clone();
        while !b.is_zero() {
            let r = a.rem(&b).expect("b is nonzero");
            a = std::mem::replace(&mut b, r);
        }
        a.monic()
    }

    /// Extended gcd: returns `(d, u, v)` with `d` monic, `u*f + v*g = d`,
    /// and cofactors reduced to minimal degree.
    pub fn extended_gcd(&self, g: &Polynomial) -> Result<(Polynomial, Polynomial, Polynomial)> {
        if self.field != g.field {
            return Err(Error::FieldMismatch(
                self.field.to_string(),
                g.field.to_string(),
            ));
        }
        if self.is_zero() && g.is_zero() {
            return Err(Error::BothZero);
        }
        let mut r0 = self.clone();
        let mut r1 = g.clone();
        let mut u0 = Polynomial::one(&self.field);
        let mut u1 = Polynomial::zero(&self.field);
        let mut v0 = Polynomial::zero(&self.field);
        let mut v1 = Polynomial::one(&self.field);
        while !r1.is_zero() {
            let (q, r) = r0.divmod(&r1)?;
            let nu = &u0 - &(&q * &u1);
            let nv = &v0 - &(&q * &v1);
            r0 = std::mem::replace(&mut r1, r);
            u0 = std::mem::replace(&mut u1, nu);
            v0 = std::mem::replace(&mut v1, nv);
        }
        // normalize to a monic gcd
        let lc_inv = r0.leading_coeff().unwrap().inv()?;
        let d = r0.scale(&lc_inv);
        let mut u = u0.scale(&lc_inv);
        let mut v = v0.scale(&lc_inv);
        // reduce the cofactors to minimal degree
        if !g.is_zero() {
            let gd = g.div_exact(&d)?;
            if gd.degree() > Some(0) {
                u = u.rem(&gd)?;
                v = (&d - &(&u * self)).div_exact(g)?;
            } else if !self.is_zero() && gd.is_one() {
                // d == monic(g): take u = 0, v = lc(g)^{-1}
                u = Polynomial::zero(&self.field);
                v = Polynomial::constant(g.leading_coeff().unwrap().inv()?);
            }
        }
        debug_assert_eq!(&(&u * self) + &(&v * g), d);
        Ok((d, u, v))
    }

    pub fn lcm(&self, g: &Polynomial) -> Polynomial {
        if self.is_zero() || g.is_zero() {
            return Polynomial::zero(&self.field);
        }
        let d = self.gcd(g);
        (&self.div_exact(&d).unwrap() * g).monic()
    }

    /// `self^e mod m` by square-and-multiply.
    pub fn powmod(&self, e: u64, m: &Polynomial) -> Result<Polynomial> {
        self.powmod_big(&BigUint::from(e), m)
    }

    pub fn powmod_big(&self, e: &BigUint, m: &Polynomial) -> Result<Polynomial> {
        if m.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let mut acc = Polynomial::one(&self.field).rem(m)?;
        let mut base = self.rem(m)?;
        for i in 0..e.bits() {
            if e.bit(i) {
                acc = (&acc * &base).rem(m)?;
            }
            if i + 1 < e.bits() {
                base = (&base * &base).rem(m)?;
            }
        }
        Ok(acc)
    }

    /// Order on polynomials over one field: degree first, then coefficient
    /// sequences compared from the highest degree down.
    pub fn canon_cmp(&self, other: &Polynomial) -> Ordering {
        assert_eq!(self.field, other.field, "canon_cmp across fields");
        match self.coeffs.len().cmp(&other.coeffs.len()) {
            Ordering::Equal => {}
            ord => return ord,
        }
        for (a, b) in self.coeffs.iter().rev().zip(other.coeffs.iter().rev()) {
            match a.canon_cmp(b) {
                Ordering::Equal => {}
                ord => return ord,
            }
        }
        Ordering::Equal
    }

    /// JSON array of canonical coefficient encodings, low-degree-first.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(self.coeffs.iter().map(FieldElement::to_json).collect())
    }

    pub fn from_json(field: &Field, v: &serde_json::Value) -> Result<Polynomial> {
        let arr = v.as_array().ok_or_else(|| {
            Error::InvalidDocument(format!("polynomial must be an array, got {v}"))
        })?;
        let coeffs = arr
            .iter()
            .map(|c| field.parse_element(c))
            .collect::<Result<Vec<_>>>()?;
        Ok(Polynomial::from_coeffs(field, coeffs))
    }
}

impl std::ops::Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.field, rhs.field, "field mismatch in poly add");
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|i| &self.coeff(i) + &rhs.coeff(i)).collect();
        Polynomial::from_coeffs(&self.field, coeffs)
    }
}

impl std::ops::Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.field, rhs.field, "field mismatch in poly sub");
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|i| &self.coeff(i) - &rhs.coeff(i)).collect();
        Polynomial::from_coeffs(&self.field, coeffs)
    }
}

impl std::ops::Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.field, rhs.field, "field mismatch in poly mul");
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero(&self.field);
        }
        let mut coeffs = vec![self.field.zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] = &coeffs[i + j] + &(a * b);
            }
        }
        Polynomial::from_coeffs(&self.field, coeffs)
    }
}

impl std::ops::Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial::from_coeffs(&self.field, self.coeffs.iter().map(|c| -c).collect())
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let cs = c.to_string();
            let (neg, mag) = match cs.strip_prefix('-') {
                Some(rest) => (true, rest.to_string()),
                None => (false, cs),
            };
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let body = match i {
                0 => mag,
                _ => {
                    let x = if i == 1 { "x".to_string() } else { format!("x^{i}") };
                    if c.is_one() {
                        x
                    } else if mag == "1" {
                        // magnitude one with a sign already emitted
                        x
                    } else {
                        format!("{mag}{x}")
                    }
                }
            };
            write!(f, "{body}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} over {}", self.field)
    }
}
