//! Exact field arithmetic: prime fields `F_p`, extension fields
//! `F_p[y]/(g(y))`, and arbitrary-precision rationals.
//!
//! Elements are immutable values that carry a cheap handle to their field
//! descriptor; all operations are pure and exact. Prime moduli are capped
//! below `2^31` so products fit in 64-bit intermediates, and finite field
//! sizes are capped the same way.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Upper bound (exclusive) on prime moduli and finite field sizes.
pub const MAX_FIELD_SIZE: u64 = 1 << 31;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FieldKind {
    /// `F_p` for a prime `p < 2^31`.
    Prime { p: u64 },
    /// `F_p[y]/(g(y))` for a monic irreducible `g`; coefficients are stored
    /// low-degree-first, so `modulus.len() == m + 1` for degree `m`.
    Extension { p: u64, modulus: Vec<u64> },
    /// The rational numbers with arbitrary-precision integers.
    Rational,
}

/// Shared, immutable field descriptor.
#[derive(Clone)]
pub struct Field(Arc<FieldKind>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || *self.0 == *other.0
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &*self.0 {
            FieldKind::Prime { p } => write!(f, "F_{p}"),
            FieldKind::Extension { p, modulus } => {
                write!(f, "F_{p}[y]/({})", pv_to_string(modulus))
            }
            FieldKind::Rational => write!(f, "Q"),
        }
    }
}

/// Primality by trial division; moduli are below `2^31` so this is cheap.
pub fn is_prime_trial(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

impl Field {
    /// The prime field `F_p`.
    pub fn prime(p: u64) -> Result<Field> {
        if p >= MAX_FIELD_SIZE {
            return Err(Error::UnsupportedField(format!(
                "prime modulus {p} is not below 2^31"
            )));
        }
        if !is_prime_trial(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Field(Arc::new(FieldKind::Prime { p })))
    }

    /// The extension field `F_p[y]/(modulus)`. The modulus is given
    /// low-degree-first, must be monic of degree >= 1, and must be
    /// irreducible over `F_p`.
    pub fn extension(p: u64, modulus: Vec<u64>) -> Result<Field> {
        let base = Field::prime(p)?;
        let mut modulus = modulus;
        for c in modulus.iter_mut() {
            *c %= p;
        }
        if modulus.len() < 2 {
            return Err(Error::UnsupportedField(
                "extension modulus must have degree >= 1".into(),
            ));
        }
        if *modulus.last().unwrap() != 1 {
            return Err(Error::UnsupportedField(
                "extension modulus must be monic (leading coefficient 1 mod p)".into(),
            ));
        }
        let m = (modulus.len() - 1) as u32;
        match p.checked_pow(m) {
            Some(q) if q < MAX_FIELD_SIZE => {}
            _ => {
                return Err(Error::ExtensionTooLarge(format!(
                    "field size {p}^{m} is not below 2^31"
                )))
            }
        }
        let modpoly = crate::poly::Polynomial::from_residues(&base, &modulus);
        if m > 1 && !crate::factor::is_irreducible(&modpoly)? {
            return Err(Error::NotIrreducible);
        }
        Ok(Field(Arc::new(FieldKind::Extension { p, modulus })))
    }

    /// The field of rational numbers.
    pub fn rational() -> Field {
        Field(Arc::new(FieldKind::Rational))
    }

    pub fn kind(&self) -> &FieldKind {
        &self.0
    }

    /// Characteristic: `p` for finite fields, 0 for the rationals.
    pub fn characteristic(&self) -> u64 {
        match &*self.0 {
            FieldKind::Prime { p } | FieldKind::Extension { p, .. } => *p,
            FieldKind::Rational => 0,
        }
    }

    /// Number of elements for finite fields.
    pub fn order(&self) -> Option<u64> {
        match &*self.0 {
            FieldKind::Prime { p } => Some(*p),
            FieldKind::Extension { p, modulus } => {
                Some(p.pow((modulus.len() - 1) as u32))
            }
            FieldKind::Rational => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.order().is_some()
    }

    pub fn is_rational(&self) -> bool {
        matches!(&*self.0, FieldKind::Rational)
    }

    /// Degree over the prime field (1 for `F_p` and for the rationals).
    pub fn extension_degree(&self) -> usize {
        match &*self.0 {
            FieldKind::Extension { modulus, .. } => modulus.len() - 1,
            _ => 1,
        }
    }

    pub fn zero(&self) -> FieldElement {
        match &*self.0 {
            FieldKind::Prime { .. } => self.elem(Repr::Prime(0)),
            FieldKind::Extension { modulus, .. } => {
                self.elem(Repr::Ext(vec![0; modulus.len() - 1]))
            }
            FieldKind::Rational => self.elem(Repr::Rat(BigRational::zero())),
        }
    }

    pub fn one(&self) -> FieldElement {
        self.int(1)
    }

    /// Embed a signed integer.
    pub fn int(&self, v: i64) -> FieldElement {
        match &*self.0 {
            FieldKind::Prime { p } => self.elem(Repr::Prime(v.rem_euclid(*p as i64) as u64)),
            FieldKind::Extension { p, modulus } => {
                let mut coeffs = vec![0; modulus.len() - 1];
                coeffs[0] = v.rem_euclid(*p as i64) as u64;
                self.elem(Repr::Ext(coeffs))
            }
            FieldKind::Rational => self.elem(Repr::Rat(BigRational::from_integer(v.into()))),
        }
    }

    /// Exact fraction `n/d` over the rationals.
    pub fn ratio(&self, n: i64, d: i64) -> Result<FieldElement> {
        if !self.is_rational() {
            return Err(Error::UnsupportedField(format!(
                "{self} has no fraction constructor"
            )));
        }
        if d == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(self.elem(Repr::Rat(BigRational::new(n.into(), d.into()))))
    }

    pub fn from_big_rational(&self, r: BigRational) -> Result<FieldElement> {
        if !self.is_rational() {
            return Err(Error::UnsupportedField(format!(
                "{self} cannot hold a rational value"
            )));
        }
        Ok(self.elem(Repr::Rat(r)))
    }

    /// Element from a residue (prime fields only).
    pub fn residue(&self, r: u64) -> Result<FieldElement> {
        match &*self.0 {
            FieldKind::Prime { p } => Ok(self.elem(Repr::Prime(r % p))),
            _ => Err(Error::UnsupportedField(format!(
                "{self} elements are not single residues"
            ))),
        }
    }

    /// Element from a coefficient vector, low-degree-first (extension fields).
    /// Vectors longer than the extension degree are reduced by the modulus.
    pub fn ext_from_coeffs(&self, coeffs: &[u64]) -> Result<FieldElement> {
        match &*self.0 {
            FieldKind::Extension { p, modulus } => {
                let mut v: Vec<u64> = coeffs.iter().map(|c| c % p).collect();
                pv_trim(&mut v);
                if v.len() >= modulus.len() {
                    v = pv_rem(&v, modulus, *p);
                }
                v.resize(modulus.len() - 1, 0);
                Ok(self.elem(Repr::Ext(v)))
            }
            _ => Err(Error::UnsupportedField(format!(
                "{self} has no coefficient-vector elements"
            ))),
        }
    }

    /// The class of `y` in an extension field.
    pub fn ext_generator(&self) -> Result<FieldElement> {
        self.ext_from_coeffs(&[0, 1])
    }

    /// The `idx`-th element in canonical enumeration order (finite fields).
    /// Prime fields enumerate residues; extensions enumerate coefficient
    /// vectors as base-`p` digits of the index, low digit = low degree.
    pub fn element_from_index(&self, idx: u64) -> Result<FieldElement> {
        let q = self
            .order()
            .ok_or(Error::RationalFieldUnsupported)?;
        assert!(idx < q, "element index out of range");
        match &*self.0 {
            FieldKind::Prime { .. } => Ok(self.elem(Repr::Prime(idx))),
            FieldKind::Extension { p, modulus } => {
                let m = modulus.len() - 1;
                let mut coeffs = vec![0u64; m];
                let mut rest = idx;
                for c in coeffs.iter_mut() {
                    *c = rest % p;
                    rest /= p;
                }
                Ok(self.elem(Repr::Ext(coeffs)))
            }
            FieldKind::Rational => unreachable!(),
        }
    }

    /// Inverse of [`Field::element_from_index`].
    pub fn index_of_element(&self, e: &FieldElement) -> Result<u64> {
        self.check_same(&e.field)?;
        match (&*self.0, &e.repr) {
            (FieldKind::Prime { .. }, Repr::Prime(r)) => Ok(*r),
            (FieldKind::Extension { p, .. }, Repr::Ext(coeffs)) => {
                let mut idx = 0u64;
                for &c in coeffs.iter().rev() {
                    idx = idx * p + c;
                }
                Ok(idx)
            }
            _ => Err(Error::RationalFieldUnsupported),
        }
    }

    fn elem(&self, repr: Repr) -> FieldElement {
        FieldElement {
            field: self.clone(),
            repr,
        }
    }

    fn check_same(&self, other: &Field) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::FieldMismatch(self.to_string(), other.to_string()))
        }
    }

    /// JSON descriptor, e.g. `{"kind":"prime","p":5}`.
    pub fn to_json(&self) -> serde_json::Value {
        match &*self.0 {
            FieldKind::Prime { p } => serde_json::json!({"kind": "prime", "p": p}),
            FieldKind::Extension { p, modulus } => {
                serde_json::json!({"kind": "extension", "p": p, "modulus": modulus})
            }
            FieldKind::Rational => serde_json::json!({"kind": "rational"}),
        }
    }

    /// Parse a JSON descriptor.
    pub fn from_json(v: &serde_json::Value) -> Result<Field> {
        let obj = v
            .as_object()
            .ok_or_else(|| Error::InvalidDocument("field descriptor must be an object".into()))?;
        let kind = obj
            .get("kind")
            .and_then(|k| k.as_str())
            .ok_or_else(|| Error::InvalidDocument("field.kind must be a string".into()))?;
        let get_p = || -> Result<u64> {
            obj.get("p")
                .and_then(|p| p.as_u64())
                .ok_or_else(|| Error::InvalidDocument("field.p must be a positive integer".into()))
        };
        match kind {
            "prime" => Field::prime(get_p()?),
            "extension" => {
                let modulus = obj
                    .get("modulus")
                    .and_then(|m| m.as_array())
                    .ok_or_else(|| {
                        Error::InvalidDocument("field.modulus must be an array".into())
                    })?
                    .iter()
                    .map(|c| {
                        c.as_u64().ok_or_else(|| {
                            Error::InvalidDocument(
                                "field.modulus entries must be nonnegative integers".into(),
                            )
                        })
                    })
                    .collect::<Result<Vec<u64>>>()?;
                Field::extension(get_p()?, modulus)
            }
            "rational" => Ok(Field::rational()),
            other => Err(Error::UnsupportedField(format!("unknown kind {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Repr {
    Prime(u64),
    Ext(Vec<u64>),
    Rat(BigRational),
}

/// An exact element of a [`Field`].
#[derive(Clone, PartialEq, Eq)]
pub struct FieldElement {
    field: Field,
    repr: Repr,
}

/// Binary field operation selector for the dispatch entry point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinaryOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Checked arithmetic dispatch; verifies the operands share a field and
/// rejects division by zero.
pub fn field_arith(a: &FieldElement, b: &FieldElement, op: BinaryOp) -> Result<FieldElement> {
    a.field.check_same(&b.field)?;
    match op {
        BinaryOp::Add => Ok(a + b),
        BinaryOp::Sub => Ok(a - b),
        BinaryOp::Mul => Ok(a * b),
        BinaryOp::Div => a.checked_div(b),
    }
}

impl FieldElement {
    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn is_zero(&self) -> bool {
        match &self.repr {
            Repr::Prime(r) => *r == 0,
            Repr::Ext(c) => c.iter().all(|&x| x == 0),
            Repr::Rat(r) => r.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        *self == self.field.one()
    }

    /// Multiplicative inverse; errors on zero.
    pub fn inv(&self) -> Result<FieldElement> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let repr = match (&*self.field.0, &self.repr) {
            (FieldKind::Prime { p }, Repr::Prime(r)) => Repr::Prime(pow_mod_u64(*r, p - 2, *p)),
            (FieldKind::Extension { p, modulus }, Repr::Ext(c)) => {
                let mut a = c.clone();
                pv_trim(&mut a);
                let (g, u, _) = pv_extgcd(&a, modulus, *p);
                // modulus irreducible and a != 0, so g is a nonzero constant
                debug_assert_eq!(g.len(), 1);
                let ginv = pow_mod_u64(g[0], p - 2, *p);
                let mut inv = pv_scale(&u, ginv, *p);
                inv = pv_rem(&inv, modulus, *p);
                inv.resize(modulus.len() - 1, 0);
                Repr::Ext(inv)
            }
            (FieldKind::Rational, Repr::Rat(r)) => Repr::Rat(r.recip()),
            _ => unreachable!("repr matches field kind"),
        };
        Ok(self.field.elem(repr))
    }

    pub fn checked_div(&self, rhs: &FieldElement) -> Result<FieldElement> {
        Ok(self * &rhs.inv()?)
    }

    /// Power with nonnegative exponent by square-and-multiply.
    pub fn pow(&self, mut e: u64) -> FieldElement {
        let mut acc = self.field.one();
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Exact square root, if one exists in the field. The returned
    /// representative is the one with the smaller canonical encoding
    /// (smaller enumeration index; positive rational).
    ///
    /// Over odd finite fields this uses exhaustive search for orders up to
    /// 1000 and Tonelli–Shanks beyond; in characteristic two every element
    /// has the unique root `a^(2^(m-1))`; over the rationals the root exists
    /// exactly when numerator and denominator are perfect squares.
    pub fn sqrt(&self) -> Option<FieldElement> {
        if self.is_zero() {
            return Some(self.clone());
        }
        match &*self.field.0 {
            FieldKind::Rational => {
                let Repr::Rat(r) = &self.repr else { unreachable!() };
                if r.is_negative() {
                    return None;
                }
                let num = r.numer().magnitude();
                let den = r.denom().magnitude();
                let sn = exact_sqrt_biguint(num)?;
                let sd = exact_sqrt_biguint(den)?;
                let root = BigRational::new(BigInt::from(sn), BigInt::from(sd));
                Some(self.field.elem(Repr::Rat(root)))
            }
            _ => {
                let q = self.field.order().unwrap();
                let p = self.field.characteristic();
                if p == 2 {
                    // Frobenius is an automorphism: squaring permutes the
                    // field, and a^(2^(m-1)) squares to a^(2^m) = a.
                    let m = self.field.extension_degree();
                    let mut r = self.clone();
                    for _ in 0..m.saturating_sub(1) {
                        r = &r * &r;
                    }
                    debug_assert_eq!(&(&r * &r), self);
                    return Some(r);
                }
                // Euler criterion.
                if !self.pow((q - 1) / 2).is_one() {
                    return None;
                }
                let root = if q <= 1000 {
                    let mut found = None;
                    for idx in 0..q {
                        let r = self.field.element_from_index(idx).unwrap();
                        if &(&r * &r) == self {
                            found = Some(r);
                            break;
                        }
                    }
                    found.expect("Euler criterion guarantees a root")
                } else {
                    self.tonelli_shanks(q)
                };
                let neg = -&root;
                if root.canon_cmp(&neg) == Ordering::Greater {
                    Some(neg)
                } else {
                    Some(root)
                }
            }
        }
    }

    fn tonelli_shanks(&self, q: u64) -> FieldElement {
        let mut t = q - 1;
        let mut s = 0u32;
        while t.is_multiple_of(2) {
            t /= 2;
            s += 1;
        }
        // First non-residue in canonical enumeration order.
        let z = (1..q)
            .map(|i| self.field.element_from_index(i).unwrap())
            .find(|z| !z.pow((q - 1) / 2).is_one())
            .expect("odd q > 1 has a non-residue");
        let mut m = s;
        let mut c = z.pow(t);
        let mut u = self.pow(t);
        let mut r = self.pow(t.div_ceil(2));
        while !u.is_one() {
            let mut i = 0u32;
            let mut probe = u.clone();
            while !probe.is_one() {
                probe = &probe * &probe;
                i += 1;
            }
            let mut b = c.clone();
            for _ in 0..(m - i - 1) {
                b = &b * &b;
            }
            m = i;
            c = &b * &b;
            u = &u * &c;
            r = &r * &b;
        }
        debug_assert_eq!(&(&r * &r), self);
        r
    }

    /// Total order on elements of one field: residue order for prime
    /// fields, enumeration-index order for extensions, numeric order for
    /// rationals. Panics if the fields differ.
    pub fn canon_cmp(&self, other: &FieldElement) -> Ordering {
        assert_eq!(
            self.field, other.field,
            "canon_cmp across distinct fields"
        );
        match (&self.repr, &other.repr) {
            (Repr::Prime(a), Repr::Prime(b)) => a.cmp(b),
            (Repr::Ext(a), Repr::Ext(b)) => a.iter().rev().cmp(b.iter().rev()),
            (Repr::Rat(a), Repr::Rat(b)) => a.cmp(b),
            _ => unreachable!(),
        }
    }

    /// Canonical JSON encoding: residue number (prime), coefficient array
    /// low-degree-first (extension), `"n"` or `"n/d"` string (rational).
    pub fn to_json(&self) -> serde_json::Value {
        match &self.repr {
            Repr::Prime(r) => serde_json::json!(r),
            Repr::Ext(c) => serde_json::json!(c),
            Repr::Rat(_) => serde_json::Value::String(self.to_string()),
        }
    }

    /// Rational value accessor (used by the integer-factorization path).
    pub(crate) fn as_rational(&self) -> Option<&BigRational> {
        match &self.repr {
            Repr::Rat(r) => Some(r),
            _ => None,
        }
    }

    /// Residue accessor for prime-field elements.
    pub(crate) fn as_residue(&self) -> Option<u64> {
        match &self.repr {
            Repr::Prime(r) => Some(*r),
            _ => None,
        }
    }
}

impl Field {
    /// Parse one element from its canonical JSON encoding. Accepts signed
    /// integers for prime and rational fields, `"n"`/`"n/d"` strings for
    /// rationals, and coefficient arrays for extensions.
    pub fn parse_element(&self, v: &serde_json::Value) -> Result<FieldElement> {
        match &*self.0 {
            FieldKind::Prime { p } => {
                if let Some(n) = v.as_i64() {
                    return Ok(self.int(n));
                }
                if let Some(n) = v.as_u64() {
                    return Ok(self.elem(Repr::Prime(n % p)));
                }
                Err(Error::InvalidElement(format!(
                    "expected an integer residue for {self}, got {v}"
                )))
            }
            FieldKind::Extension { .. } => {
                let arr = v.as_array().ok_or_else(|| {
                    Error::InvalidElement(format!(
                        "expected a coefficient array for {self}, got {v}"
                    ))
                })?;
                let coeffs = arr
                    .iter()
                    .map(|c| {
                        c.as_u64().ok_or_else(|| {
                            Error::InvalidElement(format!(
                                "extension coefficients must be nonnegative integers, got {c}"
                            ))
                        })
                    })
                    .collect::<Result<Vec<u64>>>()?;
                self.ext_from_coeffs(&coeffs)
            }
            FieldKind::Rational => {
                if let Some(n) = v.as_i64() {
                    return Ok(self.int(n));
                }
                let s = v.as_str().ok_or_else(|| {
                    Error::InvalidElement(format!(
                        "expected an integer or \"n/d\" string for {self}, got {v}"
                    ))
                })?;
                parse_rational_str(s)
                    .map(|r| self.elem(Repr::Rat(r)))
                    .ok_or_else(|| {
                        Error::InvalidElement(format!("cannot parse rational from {s:?}"))
                    })
            }
        }
    }
}

fn parse_rational_str(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let num: BigInt = n.trim().parse().ok()?;
            let den: BigInt = d.trim().parse().ok()?;
            if den.is_zero() {
                return None;
            }
            Some(BigRational::new(num, den))
        }
        None => {
            let num: BigInt = s.parse().ok()?;
            Some(BigRational::from_integer(num))
        }
    }
}

fn exact_sqrt_biguint(n: &BigUint) -> Option<BigUint> {
    let r = n.sqrt();
    if &(&r * &r) == n {
        Some(r)
    } else {
        None
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.repr {
            Repr::Prime(r) => write!(f, "{r}"),
            Repr::Ext(c) => {
                write!(f, "[")?;
                for (i, x) in c.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{x}")?;
                }
                write!(f, "]")
            }
            Repr::Rat(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
        }
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} in {}", self.field)
    }
}

impl std::ops::Add for &FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: &FieldElement) -> FieldElement {
        assert_eq!(
            self.field, rhs.field,
            "field mismatch: {} vs {}",
            self.field, rhs.field
        );
        let repr = match (&*self.field.0, &self.repr, &rhs.repr) {
            (FieldKind::Prime { p }, Repr::Prime(a), Repr::Prime(b)) => {
                Repr::Prime(add_mod_u64(*a, *b, *p))
            }
            (FieldKind::Extension { p, .. }, Repr::Ext(a), Repr::Ext(b)) => Repr::Ext(
                a.iter()
                    .zip(b)
                    .map(|(&x, &y)| add_mod_u64(x, y, *p))
                    .collect(),
            ),
            (FieldKind::Rational, Repr::Rat(a), Repr::Rat(b)) => Repr::Rat(a + b),
            _ => unreachable!("repr matches field kind"),
        };
        self.field.elem(repr)
    }
}

impl std::ops::Sub for &FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: &FieldElement) -> FieldElement {
        assert_eq!(
            self.field, rhs.field,
            "field mismatch: {} vs {}",
            self.field, rhs.field
        );
        let repr = match (&*self.field.0, &self.repr, &rhs.repr) {
            (FieldKind::Prime { p }, Repr::Prime(a), Repr::Prime(b)) => {
                Repr::Prime(sub_mod_u64(*a, *b, *p))
            }
            (FieldKind::Extension { p, .. }, Repr::Ext(a), Repr::Ext(b)) => Repr::Ext(
                a.iter()
                    .zip(b)
                    .map(|(&x, &y)| sub_mod_u64(x, y, *p))
                    .collect(),
            ),
            (FieldKind::Rational, Repr::Rat(a), Repr::Rat(b)) => Repr::Rat(a - b),
            _ => unreachable!("repr matches field kind"),
        };
        self.field.elem(repr)
    }
}

impl std::ops::Mul for &FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: &FieldElement) -> FieldElement {
        assert_eq!(
            self.field, rhs.field,
            "field mismatch: {} vs {}",
            self.field, rhs.field
        );
        let repr = match (&*self.field.0, &self.repr, &rhs.repr) {
            (FieldKind::Prime { p }, Repr::Prime(a), Repr::Prime(b)) => {
                Repr::Prime(((*a as u128 * *b as u128) % *p as u128) as u64)
            }
            (FieldKind::Extension { p, modulus }, Repr::Ext(a), Repr::Ext(b)) => {
                let prod = pv_mul(a, b, *p);
                let mut red = pv_rem(&prod, modulus, *p);
                red.resize(modulus.len() - 1, 0);
                Repr::Ext(red)
            }
            (FieldKind::Rational, Repr::Rat(a), Repr::Rat(b)) => Repr::Rat(a * b),
            _ => unreachable!("repr matches field kind"),
        };
        self.field.elem(repr)
    }
}

impl std::ops::Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        &self.field.zero() - self
    }
}

fn add_mod_u64(a: u64, b: u64, p: u64) -> u64 {
    let s = a + b;
    if s >= p {
        s - p
    } else {
        s
    }
}

fn sub_mod_u64(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + p - b
    }
}

fn pow_mod_u64(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = ((acc as u128 * base as u128) % p as u128) as u64;
        }
        base = ((base as u128 * base as u128) % p as u128) as u64;
        exp >>= 1;
    }
    acc
}

// ---------------------------------------------------------------------------
// Coefficient-vector arithmetic over F_p, used for the extension-field
// representation. Vectors are low-degree-first and trimmed.
// ---------------------------------------------------------------------------

fn pv_trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn pv_to_string(v: &[u64]) -> String {
    let terms: Vec<String> = v
        .iter()
        .enumerate()
        .rev()
        .filter(|(_, &c)| c != 0)
        .map(|(i, &c)| match i {
            0 => format!("{c}"),
            1 if c == 1 => "y".into(),
            1 => format!("{c}y"),
            _ if c == 1 => format!("y^{i}"),
            _ => format!("{c}y^{i}"),
        })
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join("+")
    }
}

fn pv_scale(a: &[u64], s: u64, p: u64) -> Vec<u64> {
    let mut out: Vec<u64> = a
        .iter()
        .map(|&x| ((x as u128 * s as u128) % p as u128) as u64)
        .collect();
    pv_trim(&mut out);
    out
}

fn pv_mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u128; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x as u128 * y as u128) % p as u128;
        }
    }
    let mut out: Vec<u64> = out.into_iter().map(|x| x as u64).collect();
    pv_trim(&mut out);
    out
}

/// Remainder of `a` modulo a monic `m`.
fn pv_rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    debug_assert_eq!(*m.last().unwrap(), 1, "pv_rem needs a monic modulus");
    let mut r: Vec<u64> = a.to_vec();
    pv_trim(&mut r);
    let dm = m.len() - 1;
    while r.len() > dm {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - dm;
        if lead != 0 {
            for (i, &mc) in m.iter().enumerate() {
                let t = (lead as u128 * mc as u128) % p as u128;
                r[shift + i] = sub_mod_u64(r[shift + i], t as u64, p);
            }
        }
        r.pop();
        pv_trim(&mut r);
    }
    r
}

/// Extended gcd of coefficient vectors; returns `(g, u, v)` with
/// `u*a + v*b = g` (g not normalized to monic).
fn pv_extgcd(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>, Vec<u64>) {
    let mut r0 = a.to_vec();
    let mut r1 = b.to_vec();
    pv_trim(&mut r0);
    pv_trim(&mut r1);
    let mut u0 = vec![1u64];
    let mut u1: Vec<u64> = vec![];
    let mut v0: Vec<u64> = vec![];
    let mut v1 = vec![1u64];
    while !r1.is_empty() {
        let (q, r) = pv_divmod(&r0, &r1, p);
        let nu = pv_sub(&u0, &pv_mul(&q, &u1, p), p);
        let nv = pv_sub(&v0, &pv_mul(&q, &v1, p), p);
        r0 = std::mem::replace(&mut r1, r);
        u0 = std::mem::replace(&mut u1, nu);
        v0 = std::mem::replace(&mut v1, nv);
    }
    (r0, u0, v0)
}

fn pv_sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let n = a.len().max(b.len());
    let mut out = vec![0u64; n];
    for (i, o) in out.iter_mut().enumerate() {
        let x = a.get(i).copied().unwrap_or(0);
        let y = b.get(i).copied().unwrap_or(0);
        *o = sub_mod_u64(x, y, p);
    }
    pv_trim(&mut out);
    out
}

fn pv_divmod(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    assert!(!b.is_empty(), "pv_divmod by zero");
    let mut r = a.to_vec();
    pv_trim(&mut r);
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let lead_inv = pow_mod_u64(*b.last().unwrap(), p - 2, p);
    let mut q = vec![0u64; r.len() - b.len() + 1];
    while r.len() >= b.len() {
        let shift = r.len() - b.len();
        let c = ((*r.last().unwrap() as u128 * lead_inv as u128) % p as u128) as u64;
        q[shift] = c;
        for (i, &bc) in b.iter().enumerate() {
            let t = ((c as u128 * bc as u128) % p as u128) as u64;
            r[shift + i] = sub_mod_u64(r[shift + i], t, p);
        }
        pv_trim(&mut r);
    }
    pv_trim(&mut q);
    (q, r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prng::Prng;

    fn f(p: u64) -> Field {
        Field::prime(p).unwrap()
    }

    fn f4() -> Field {
        Field::extension(2, vec![1, 1, 1]).unwrap()
    }

    fn f9() -> Field {
        Field::extension(3, vec![1, 0, 1]).unwrap()
    }

    #[test]
    fn division_in_f5() {
        let k = f(5);
        let r = field_arith(&k.int(1), &k.int(2), BinaryOp::Div).unwrap();
        assert_eq!(r, k.int(3)); // 2 * 3 = 6 = 1 mod 5
    }

    #[test]
    fn rational_addition_reduces() {
        let q = Field::rational();
        let a = q.ratio(1, 3).unwrap();
        let b = q.ratio(1, 6).unwrap();
        let s = field_arith(&a, &b, BinaryOp::Add).unwrap();
        assert_eq!(s, q.ratio(1, 2).unwrap());
        assert_eq!(s.to_string(), "1/2");
    }

    #[test]
    fn f4_generator_squares_to_y_plus_one() {
        let k = f4();
        let y = k.ext_generator().unwrap();
        let y2 = &y * &y;
        assert_eq!(y2, k.ext_from_coeffs(&[1, 1]).unwrap()); // y^2 = y + 1
    }

    #[test]
    fn field_mismatch_is_reported() {
        let a = f(5).int(1);
        let b = f(7).int(1);
        assert!(matches!(
            field_arith(&a, &b, BinaryOp::Add),
            Err(Error::FieldMismatch(..))
        ));
    }

    #[test]
    fn division_by_zero_is_reported() {
        let k = f(5);
        assert_eq!(
            field_arith(&k.int(1), &k.zero(), BinaryOp::Div),
            Err(Error::DivisionByZero)
        );
    }

    #[test]
    fn construction_rejects_bad_descriptors() {
        assert_eq!(Field::prime(4).unwrap_err(), Error::NotPrime(4));
        assert!(matches!(Field::prime(1), Err(Error::NotPrime(1))));
        // y^2 + 1 is reducible over F_2: (y+1)^2
        assert_eq!(
            Field::extension(2, vec![1, 0, 1]).unwrap_err(),
            Error::NotIrreducible
        );
        // leading coefficient vanishes mod 2
        assert!(matches!(
            Field::extension(2, vec![1, 1, 2]),
            Err(Error::UnsupportedField(_))
        ));
        // non-monic over F_5
        assert!(matches!(
            Field::extension(5, vec![1, 1, 3]),
            Err(Error::UnsupportedField(_))
        ));
        assert!(matches!(
            Field::extension(3, vec![1; 25]),
            Err(Error::ExtensionTooLarge(_))
        ));
    }

    #[test]
    fn sqrt_examples() {
        assert_eq!(f(13).int(4).sqrt(), Some(f(13).int(2)));
        // exhaustive oracle over F_3: squares are {0, 1, 1}
        let mut squares = std::collections::BTreeSet::new();
        for a in 0..3 {
            squares.insert((a * a) % 3);
        }
        assert!(!squares.contains(&2));
        assert_eq!(f(3).int(2).sqrt(), None);
        let q = Field::rational();
        assert_eq!(q.ratio(9, 4).unwrap().sqrt(), Some(q.ratio(3, 2).unwrap()));
        assert_eq!(q.ratio(2, 1).unwrap().sqrt(), None);
        assert_eq!(q.ratio(-4, 1).unwrap().sqrt(), None);
        assert_eq!(f(5).zero().sqrt(), Some(f(5).zero()));
    }

    #[test]
    fn sqrt_squares_back_everywhere() {
        for k in [f(5), f(13), f4(), f9()] {
            let q = k.order().unwrap();
            for idx in 0..q {
                let r = k.element_from_index(idx).unwrap();
                let sq = &r * &r;
                let s = sq.sqrt().expect("square of an element has a root");
                assert_eq!(&s * &s, sq);
            }
        }
    }

    #[test]
    fn sqrt_tonelli_shanks_large_prime() {
        let k = f(1_000_003);
        let mut rng = Prng::new(9);
        for _ in 0..200 {
            let a = k.residue(rng.below(1_000_003)).unwrap();
            let sq = &a * &a;
            let r = sq.sqrt().unwrap();
            assert_eq!(&r * &r, sq);
            // canonical representative is the smaller of r and -r
            assert!(r.canon_cmp(&-&r) != Ordering::Greater);
        }
    }

    #[test]
    fn char_two_extension_sqrt_total() {
        let k = f4();
        for idx in 0..4 {
            let a = k.element_from_index(idx).unwrap();
            let r = a.sqrt().unwrap();
            assert_eq!(&r * &r, a);
        }
    }

    #[test]
    fn fermat_identity_small_primes() {
        for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71,
            73, 79, 83, 89, 97]
        {
            let k = f(p);
            for a in 0..p {
                let e = k.residue(a).unwrap();
                assert_eq!(e.pow(p), e, "a^p != a for a = {a}, p = {p}");
            }
        }
    }

    #[test]
    fn axioms_hold_on_random_triples() {
        let fields = [f(5), f(13), f4(), f9()];
        let mut rng = Prng::new(2024);
        for k in &fields {
            let q = k.order().unwrap();
            for _ in 0..10_000 {
                let a = k.element_from_index(rng.below(q)).unwrap();
                let b = k.element_from_index(rng.below(q)).unwrap();
                let c = k.element_from_index(rng.below(q)).unwrap();
                assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
                assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
                assert_eq!(&a + &b, &b + &a);
                assert_eq!(&a * &b, &b * &a);
                assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
                if !a.is_zero() {
                    assert!((&a * &a.inv().unwrap()).is_one());
                }
            }
        }
        // rational triples with small fractions
        let q = Field::rational();
        for _ in 0..10_000 {
            let mut draw = || {
                q.ratio(rng.range_i64(-9, 9), rng.range_i64(1, 9)).unwrap()
            };
            let (a, b, c) = (draw(), draw(), draw());
            assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            if !a.is_zero() {
                assert!((&a * &a.inv().unwrap()).is_one());
            }
        }
    }

    #[test]
    fn element_index_roundtrip() {
        for k in [f(7), f4(), f9()] {
            let q = k.order().unwrap();
            for idx in 0..q {
                let e = k.element_from_index(idx).unwrap();
                assert_eq!(k.index_of_element(&e).unwrap(), idx);
            }
        }
    }

    #[test]
    fn json_encoding_roundtrip() {
        let k = f9();
        let e = k.ext_from_coeffs(&[2, 1]).unwrap();
        assert_eq!(e.to_json(), serde_json::json!([2, 1]));
        assert_eq!(k.parse_element(&e.to_json()).unwrap(), e);

        let q = Field::rational();
        let r = q.ratio(-3, 2).unwrap();
        assert_eq!(r.to_json(), serde_json::json!("-3/2"));
        assert_eq!(q.parse_element(&r.to_json()).unwrap(), r);
        assert_eq!(q.parse_element(&serde_json::json!(7)).unwrap(), q.int(7));

        let p5 = f(5);
        assert_eq!(p5.parse_element(&serde_json::json!(-1)).unwrap(), p5.int(4));

        let desc = Field::from_json(&k.to_json()).unwrap();
        assert_eq!(desc, k);
    }

    #[test]
    fn canonical_order_matches_enumeration() {
        for k in [f(7), f9()] {
            let q = k.order().unwrap();
            for i in 0..q - 1 {
                let a = k.element_from_index(i).unwrap();
                let b = k.element_from_index(i + 1).unwrap();
                assert_eq!(a.canon_cmp(&b), Ordering::Less);
            }
        }
    }
}
