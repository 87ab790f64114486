//! Polynomial factorization and multiplicative orders.
//!
//! Finite fields use squarefree decomposition, distinct-degree splitting,
//! and seeded equal-degree splitting. The rationals clear denominators and
//! factor the primitive integer polynomial by reduction modulo a good
//! prime, Hensel lifting, and exhaustive subset recombination, guarded at
//! degree 16.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::field::{Field, FieldElement};
use crate::intnum;
use crate::poly::Polynomial;
use crate::prng::Prng;

/// Degree cap for factorization over the rationals.
pub const RATIONAL_DEGREE_CAP: usize = 16;

/// A complete factorization `unit * prod factor^multiplicity`, with monic
/// irreducible factors sorted by (degree, coefficient order).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub unit: FieldElement,
    pub factors: Vec<(Polynomial, u32)>,
}

impl Factorization {
    /// Multiply the factorization back out.
    pub fn product(&self) -> Polynomial {
        let _field = self.unit.field().clone();
        let mut acc = Polynomial::constant(self.unit.clone());
        for (g, e) in &self.factors {
            for _ in 0..*e {
                acc = &acc * g;
            }
        }
        acc
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "unit": self.unit.to_json(),
            "factors": self
                .factors
                .iter()
                .map(|(g, e)| {
                    serde_json::json!({"poly": g.to_json(), "multiplicity": e})
                })
                .collect::<Vec<_>>(),
        })
    }
}

fn sort_factor_list(factors: &mut [(Polynomial, u32)]) {
    factors.sort_by(|(a, _), (b, _)| a.canon_cmp(b));
}

/// Squarefree decomposition of a nonzero polynomial (taken monic): returns
/// pairwise-coprime squarefree parts with multiplicities whose product
/// reproduces the monic input. Sorted by (multiplicity, factor order).
pub fn squarefree_decomposition(f: &Polynomial) -> Result<Vec<(Polynomial, u32)>> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let f = f.monic();
    let mut parts = if f.field().characteristic() == 0 {
        yun(&f)
    } else {
        squarefree_char_p(&f)
    };
    parts.sort_by(|(a, ea), (b, eb)| ea.cmp(eb).then_with(|| a.canon_cmp(b)));
    debug_assert_eq!(
        parts
            .iter()
            .fold(Polynomial::one(f.field()), |acc, (g, e)| {
                let mut acc = acc;
                for _ in 0..*e {
                    acc = &acc * g;
                }
                acc
            }),
        f
    );
    Ok(parts)
}

fn yun(f: &Polynomial) -> Vec<(Polynomial, u32)> {
    let mut out = Vec::new();
    if f.degree() <= Some(0) {
        return out;
    }
    let df = f.derivative();
    let a0 = f.gcd(&df);
    let mut b = f.div_exact(&a0).unwrap();
    let mut c = df.div_exact(&a0).unwrap();
    let mut d = &c - &b.derivative();
    let mut i = 1u32;
    while b.degree() > Some(0) {
        let a = b.gcd(&d);
        if a.degree() > Some(0) {
            out.push((a.clone(), i));
        }
        b = b.div_exact(&a).unwrap();
        c = d.div_exact(&a).unwrap();
        d = &c - &b.derivative();
        i += 1;
    }
    out
}

fn squarefree_char_p(f: &Polynomial) -> Vec<(Polynomial, u32)> {
    let p = f.field().characteristic() as u32;
    let mut out = Vec::new();
    if f.degree() <= Some(0) {
        return out;
    }
    let df = f.derivative();
    if df.is_zero() {
        for (g, e) in squarefree_char_p(&pth_root(f)) {
            out.push((g, e * p));
        }
        return out;
    }
    let mut c = f.gcd(&df);
    let mut w = f.div_exact(&c).unwrap();
    let mut i = 1u32;
    while !w.is_one() {
        let y = w.gcd(&c);
        let z = w.div_exact(&y).unwrap();
        if z.degree() > Some(0) {
            out.push((z, i));
        }
        i += 1;
        w = y;
        c = c.div_exact(&w).unwrap();
    }
    if !c.is_one() {
        for (g, e) in squarefree_char_p(&pth_root(&c)) {
            out.push((g, e * p));
        }
    }
    out
}

/// p-th root of a polynomial all of whose exponents are multiples of p.
fn pth_root(f: &Polynomial) -> Polynomial {
    let field = f.field();
    let p = field.characteristic() as usize;
    let m = field.extension_degree();
    let deg = f.degree().expect("nonzero");
    debug_assert_eq!(deg % p, 0);
    let coeffs = (0..=deg / p)
        .map(|i| {
            let c = f.coeff(i * p);
            // coefficient p-th root: identity on F_p, Frobenius inverse
            // a^(p^(m-1)) on extensions
            if m == 1 {
                c
            } else {
                c.pow(field.characteristic().pow(m as u32 - 1))
            }
        })
        .collect();
    Polynomial::from_coeffs(field, coeffs)
}

/// Factor a nonzero polynomial into monic irreducibles. The seed drives
/// equal-degree splitting (finite fields) and is echoed through the
/// rational path for reproducibility; the returned factor list is canonical
/// regardless of the seed.
pub fn factor(f: &Polynomial, seed: u64) -> Result<Factorization> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let field = f.field().clone();
    let unit = f.leading_coeff().unwrap().clone();
    let monic = f.monic();
    if monic.degree() == Some(0) || monic.is_one() {
        return Ok(Factorization {
            unit,
            factors: Vec::new(),
        });
    }
    if field.is_rational() && monic.degree() > Some(RATIONAL_DEGREE_CAP) {
        return Err(Error::DegreeTooLarge(format!(
            "rational factorization is capped at degree {RATIONAL_DEGREE_CAP}, got {}",
            monic.degree().unwrap()
        )));
    }
    let mut rng = Prng::new(seed);
    let mut factors: Vec<(Polynomial, u32)> = Vec::new();
    for (part, mult) in squarefree_decomposition(&monic)? {
        let irreducibles = if field.is_rational() {
            factor_squarefree_rational(&part, seed)?
        } else {
            factor_squarefree_finite(&part, &mut rng)?
        };
        for g in irreducibles {
            factors.push((g, mult));
        }
    }
    sort_factor_list(&mut factors);
    let result = Factorization { unit, factors };
    debug_assert_eq!(result.product(), *f);
    Ok(result)
}

fn factor_squarefree_finite(f: &Polynomial, rng: &mut Prng) -> Result<Vec<Polynomial>> {
    let mut out = Vec::new();
    for (product, d) in distinct_degree(f)? {
        equal_degree(&product, d, rng, &mut out)?;
    }
    Ok(out)
}

/// Distinct-degree splitting of a monic squarefree polynomial: returns
/// (product of all irreducible factors of degree d, d) pairs.
fn distinct_degree(f: &Polynomial) -> Result<Vec<(Polynomial, usize)>> {
    let field = f.field();
    let q = field.order().ok_or(Error::RationalFieldUnsupported)?;
    let x = Polynomial::x(field);
    let mut v = f.clone();
    let mut h = x.rem(&v)?;
    let mut out = Vec::new();
    let mut d = 0usize;
    while v.degree() > Some(0) {
        d += 1;
        if 2 * d > v.degree().unwrap() {
            // what remains is a single irreducible factor
            let deg = v.degree().unwrap();
            out.push((v, deg));
            break;
        }
        h = h.powmod(q, &v)?;
        let g = v.gcd(&(&h - &x));
        if !g.is_one() {
            out.push((g.clone(), d));
            v = v.div_exact(&g)?;
            h = h.rem(&v)?;
        }
    }
    Ok(out)
}

/// Cantor–Zassenhaus equal-degree splitting: `h` is a product of distinct
/// monic irreducibles, all of degree `d`.
fn equal_degree(
    h: &Polynomial,
    d: usize,
    rng: &mut Prng,
    out: &mut Vec<Polynomial>,
) -> Result<()> {
    let deg = h.degree().expect("nonzero");
    if deg == d {
        out.push(h.clone());
        return Ok(());
    }
    let field = h.field();
    let q = field.order().unwrap();
    let split = loop {
        let r = random_poly_below(field, deg, rng);
        if r.degree() < Some(1) {
            continue;
        }
        let g = h.gcd(&r);
        if g.degree() > Some(0) && g.degree() < h.degree() {
            break g;
        }
        let s = if q % 2 == 1 {
            // r^((q^d - 1)/2) mod h is +-1 on each irreducible component
            let e = (BigUint::from(q).pow(d as u32) - 1u32) / 2u32;
            let pow = r.powmod_big(&e, h)?;
            &pow - &Polynomial::one(field)
        } else {
            // characteristic 2: absolute trace map splits components
            let m = field.extension_degree();
            let bits = d * m;
            let mut acc = r.rem(h)?;
            let mut term = r.rem(h)?;
            for _ in 1..bits {
                term = (&term * &term).rem(h)?;
                acc = &acc + &term;
            }
            acc
        };
        let g = h.gcd(&s);
        if g.degree() > Some(0) && g.degree() < h.degree() {
            break g;
        }
    };
    let rest = h.div_exact(&split)?;
    equal_degree(&split, d, rng, out)?;
    equal_degree(&rest, d, rng, out)
}

fn random_poly_below(field: &Field, deg_bound: usize, rng: &mut Prng) -> Polynomial {
    let q = field.order().unwrap();
    let coeffs = (0..deg_bound)
        .map(|_| field.element_from_index(rng.below(q)).unwrap())
        .collect();
    Polynomial::from_coeffs(field, coeffs)
}

/// Deterministic irreducibility test.
///
/// Over `F_q` a monic `g` of degree `d > 1` is irreducible iff it is
/// squarefree and `gcd(g, x^(q^i) - x) = 1` for every `i <= d/2`. Over the
/// rationals the factorization engine is re-run on the candidate.
pub fn is_irreducible(f: &Polynomial) -> Result<bool> {
    let Some(d) = f.degree() else {
        return Ok(false);
    };
    if d == 0 {
        return Ok(false);
    }
    if d == 1 {
        return Ok(true);
    }
    let field = f.field();
    if field.is_rational() {
        let fac = factor(f, 0)?;
        return Ok(fac.factors.len() == 1 && fac.factors[0].1 == 1);
    }
    let g = f.monic();
    let dg = g.derivative();
    if dg.is_zero() || !g.gcd(&dg).is_one() {
        return Ok(false);
    }
    let q = field.order().unwrap();
    let x = Polynomial::x(field);
    let mut h = x.clone();
    for _ in 1..=d / 2 {
        h = h.powmod(q, &g)?;
        if !g.gcd(&(&h - &x)).is_one() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Multiplicative order of `x` modulo `f` over a finite field: the least
/// `T >= 1` with `x^T = 1 (mod f)`. Requires `f(0) != 0`.
pub fn order_of_x_mod(f: &Polynomial) -> Result<u64> {
    let field = f.field();
    if field.is_rational() {
        return Err(Error::RationalFieldUnsupported);
    }
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let f = f.monic();
    if f.degree() == Some(0) {
        return Ok(1);
    }
    if f.coeff(0).is_zero() {
        return Err(Error::NotPeriodic(
            "x is a zero divisor modulo a polynomial with f(0) = 0".into(),
        ));
    }
    let p = field.characteristic();
    let mut t = 1u64;
    for (g, e) in factor(&f, 0)?.factors {
        let ord_g = order_of_x_mod_irreducible(&g)?;
        let mut ord = ord_g;
        if e > 1 {
            // multiplicity e needs the smallest power of p at least e
            let mut pk = 1u64;
            while pk < e as u64 {
                pk = pk.checked_mul(p).ok_or_else(|| {
                    Error::DegreeTooLarge("order exceeds the 64-bit cap".into())
                })?;
            }
            ord = ord.checked_mul(pk).ok_or_else(|| {
                Error::DegreeTooLarge("order exceeds the 64-bit cap".into())
            })?;
        }
        t = intnum::lcm_checked(t, ord)?;
    }
    debug_assert!(Polynomial::x(field).powmod(t, &f)?.is_one());
    Ok(t)
}

fn order_of_x_mod_irreducible(g: &Polynomial) -> Result<u64> {
    let field = g.field();
    let q = field.order().unwrap();
    let d = g.degree().unwrap() as u32;
    let mut qd: u128 = 1;
    for _ in 0..d {
        qd *= q as u128;
        if qd >= 1u128 << 63 {
            return Err(Error::DegreeTooLarge(format!(
                "q^d = {q}^{d} reaches the 2^63 order-factorization cap"
            )));
        }
    }
    let x = Polynomial::x(field);
    let mut t = (qd - 1) as u64;
    if t == 0 {
        return Ok(1);
    }
    for &l in intnum::factor_u64(t).keys() {
        while t.is_multiple_of(l) && x.powmod(t / l, g)?.is_one() {
            t /= l;
        }
    }
    Ok(t)
}

/// The `n`-th cyclotomic polynomial over the rationals.
pub fn cyclotomic(n: u64) -> Polynomial {
    let q = Field::rational();
    let divs = intnum::divisors_sorted(n);
    let mut table: BTreeMap<u64, Polynomial> = BTreeMap::new();
    for &d in &divs {
        // x^d - 1 divided by all lower cyclotomics at divisors of d
        let mut num = {
            let mut coeffs = vec![q.int(-1)];
            coeffs.extend(std::iter::repeat_with(|| q.zero()).take(d as usize - 1));
            coeffs.push(q.one());
            Polynomial::from_coeffs(&q, coeffs)
        };
        for &e in &divs {
            if e < d && d % e == 0 {
                num = num.div_exact(&table[&e]).expect("cyclotomic divisibility");
            }
        }
        table.insert(d, num);
    }
    table.remove(&n).expect("n divides n")
}

// ---------------------------------------------------------------------------
// Rational path: Zassenhaus with quadratic Hensel lifting. Integer
// polynomials are Vec<BigInt>, low-degree-first, trimmed.
// ---------------------------------------------------------------------------

/// Factor a monic squarefree rational polynomial into monic irreducibles.
fn factor_squarefree_rational(f: &Polynomial, seed: u64) -> Result<Vec<Polynomial>> {
    let field = f.field();
    debug_assert!(f.is_monic());
    let deg = f.degree().unwrap();
    if deg == 1 {
        return Ok(vec![f.clone()]);
    }
    // clear denominators: L = lcm of coefficient denominators
    let mut l = BigInt::one();
    for c in f.coeffs() {
        let r = c.as_rational().expect("rational field");
        l = l.lcm(r.denom());
    }
    // monicize: G(y) = L^(deg-1) * F(y/L) where F = L*f has leading coeff L
    let g: Vec<BigInt> = (0..=deg)
        .map(|i| {
            let ci = f.coeff(i);
            let r = ci.as_rational().unwrap();
            // coefficient of y^i in G is f_i * L^(deg - i)
            let scaled = r * BigRational::from_integer(l.pow((deg - i) as u32));
            debug_assert!(scaled.is_integer());
            scaled.to_integer()
        })
        .collect();
    debug_assert!(g.last().unwrap().is_one());
    let int_factors = factor_monic_squarefree_integer(&g, seed)?;
    // map back: h(x) = monic(H(L x))
    let out = int_factors
        .iter()
        .map(|h| {
            let dh = h.len() - 1;
            let coeffs: Vec<FieldElement> = h
                .iter()
                .enumerate()
                .map(|(i, c)| {
                    // coefficient of x^i in monic(H(Lx)) is c * L^i / L^dh
                    let val = BigRational::new(c * l.pow(i as u32), l.pow(dh as u32));
                    field.from_big_rational(val).unwrap()
                })
                .collect();
            Polynomial::from_coeffs(field, coeffs)
        })
        .collect::<Vec<_>>();
    debug_assert_eq!(
        out.iter().fold(Polynomial::one(field), |acc, h| &acc * h),
        *f
    );
    Ok(out)
}

/// Factor a monic squarefree integer polynomial into monic integer
/// irreducibles (Zassenhaus).
fn factor_monic_squarefree_integer(g: &[BigInt], seed: u64) -> Result<Vec<Vec<BigInt>>> {
    let deg = g.len() - 1;
    if deg == 1 {
        return Ok(vec![g.to_vec()]);
    }
    // pick a prime keeping g squarefree mod p
    let (p, modular) = {
        let mut chosen = None;
        let mut p = 2u64;
        while chosen.is_none() {
            p = next_prime(p);
            let field = Field::prime(p).unwrap();
            let gp = int_to_mod_poly(g, &field);
            if gp.degree() != Some(deg) {
                continue; // leading coefficient vanished (cannot happen: monic)
            }
            let dgp = gp.derivative();
            if dgp.is_zero() || !gp.gcd(&dgp).is_one() {
                continue;
            }
            let fac = factor(&gp, seed)?;
            debug_assert!(fac.factors.iter().all(|(_, e)| *e == 1));
            chosen = Some((p, fac.factors.into_iter().map(|(f, _)| f).collect::<Vec<_>>()));
        }
        chosen.unwrap()
    };
    if modular.len() == 1 {
        return Ok(vec![g.to_vec()]);
    }
    // lift target: p^a > 2 * Mignotte bound
    let bound = mignotte_bound(g);
    let target = {
        let two_b = &bound * 2u32 + 1u32;
        let mut m = BigInt::from(p);
        while m.magnitude() <= &two_b {
            m = &m * p;
        }
        m
    };
    let lifted = hensel_lift_tree(g, &modular, p, &target);
    // recombination over subsets of lifted factors
    let mut pool = lifted;
    let mut remaining = g.to_vec();
    let mut out: Vec<Vec<BigInt>> = Vec::new();
    let mut size = 1usize;
    'outer: while 2 * size <= pool.len() {
        let mut combo: Vec<usize> = (0..size).collect();
        loop {
            let cand = centered_product(&pool, &combo, &target);
            if int_poly_divides(&remaining, &cand) {
                remaining = int_poly_div_exact(&remaining, &cand);
                let mut keep = Vec::new();
                for (i, f) in pool.drain(..).enumerate() {
                    if !combo.contains(&i) {
                        keep.push(f);
                    }
                }
                pool = keep;
                out.push(cand);
                continue 'outer;
            }
            if !next_combination(&mut combo, pool.len()) {
                break;
            }
        }
        size += 1;
    }
    if remaining.len() > 1 {
        out.push(remaining);
    }
    Ok(out)
}

fn next_prime(after: u64) -> u64 {
    let mut n = after + 1;
    loop {
        if intnum::is_prime_u64(n) {
            return n;
        }
        n += 1;
    }
}

fn int_to_mod_poly(g: &[BigInt], field: &Field) -> Polynomial {
    let p = BigInt::from(field.characteristic());
    let coeffs = g
        .iter()
        .map(|c| {
            let r = c.mod_floor(&p);
            field.residue(r.to_u64().unwrap()).unwrap()
        })
        .collect();
    Polynomial::from_coeffs(field, coeffs)
}

/// Landau–Mignotte coefficient bound for factors of a monic integer
/// polynomial: binom(n-1, floor((n-1)/2)) * ceil(||g||_2).
fn mignotte_bound(g: &[BigInt]) -> BigUint {
    let n = g.len() - 1;
    let norm_sq: BigUint = g
        .iter()
        .map(|c| c.magnitude() * c.magnitude())
        .sum::<BigUint>();
    let norm = norm_sq.sqrt() + 1u32;
    let k = (n - 1) / 2;
    let mut binom = BigUint::one();
    for i in 0..k {
        binom = binom * ((n - 1 - i) as u64) / ((i + 1) as u64);
    }
    binom * norm
}

/// Multifactor Hensel lifting by a balanced tree of two-factor lifts.
/// All polynomials are monic; returns the factors mod `target`, centered.
fn hensel_lift_tree(
    f: &[BigInt],
    modular: &[Polynomial],
    p: u64,
    target: &BigInt,
) -> Vec<Vec<BigInt>> {
    if modular.len() == 1 {
        return vec![center_coeffs(f, target)];
    }
    let field = modular[0].field().clone();
    let half = modular.len() / 2;
    let (left, right) = modular.split_at(half);
    let g0 = left
        .iter()
        .fold(Polynomial::one(&field), |acc, m| &acc * m);
    let h0 = right
        .iter()
        .fold(Polynomial::one(&field), |acc, m| &acc * m);
    let (d, s0, t0) = g0.extended_gcd(&h0).expect("modular factors coprime");
    debug_assert!(d.is_one());
    let (g, h) = hensel_lift_pair(
        f,
        &mod_poly_to_int(&g0),
        &mod_poly_to_int(&h0),
        &mod_poly_to_int(&s0),
        &mod_poly_to_int(&t0),
        p,
        target,
    );
    let mut out = hensel_lift_tree(&g, left, p, target);
    out.extend(hensel_lift_tree(&h, right, p, target));
    out
}

fn mod_poly_to_int(f: &Polynomial) -> Vec<BigInt> {
    f.coeffs()
        .iter()
        .map(|c| BigInt::from(c.as_residue().expect("prime field")))
        .collect()
}

/// Quadratic two-factor Hensel step chain: lifts `f = g*h (mod p)` with
/// Bezout pair `s*g + t*h = 1 (mod p)` until the modulus reaches `target`.
fn hensel_lift_pair(
    f: &[BigInt],
    g: &[BigInt],
    h: &[BigInt],
    s: &[BigInt],
    t: &[BigInt],
    p: u64,
    target: &BigInt,
) -> (Vec<BigInt>, Vec<BigInt>) {
    let mut m = BigInt::from(p);
    let mut g = g.to_vec();
    let mut h = h.to_vec();
    let mut s = s.to_vec();
    let mut t = t.to_vec();
    while &m < target {
        let m2 = &m * &m;
        // e = f - g*h  (mod m^2)
        let e = zp_mod(&zp_sub(f, &zp_mul(&g, &h)), &m2);
        // (q, r) = divmod(s*e, h); g' = g + t*e + q*g; h' = h + r
        let se = zp_mod(&zp_mul(&s, &e), &m2);
        let (q, r) = zp_divmod_monic(&se, &h, &m2);
        let gn = zp_mod(&zp_add(&zp_add(&g, &zp_mul(&t, &e)), &zp_mul(&q, &g)), &m2);
        let hn = zp_mod(&zp_add(&h, &r), &m2);
        // lift the Bezout pair: b = s*g' + t*h' - 1 (mod m^2)
        let mut b = zp_add(&zp_mul(&s, &gn), &zp_mul(&t, &hn));
        if b.is_empty() {
            b = vec![BigInt::from(-1)];
        } else {
            b[0] -= 1;
        }
        let b = zp_mod(&zp_trimmed(b), &m2);
        let sb = zp_mod(&zp_mul(&s, &b), &m2);
        let (c, d) = zp_divmod_monic(&sb, &hn, &m2);
        let sn = zp_mod(&zp_sub(&s, &d), &m2);
        let tn = zp_mod(&zp_sub(&zp_sub(&t, &zp_mul(&t, &b)), &zp_mul(&c, &gn)), &m2);
        g = gn;
        h = hn;
        s = sn;
        t = tn;
        m = m2;
        debug_assert!(g.last().unwrap().is_one(), "lifted factor stays monic");
        debug_assert!(h.last().unwrap().is_one(), "lifted factor stays monic");
    }
    (center_coeffs(&zp_mod(&g, &m), target), center_coeffs(&zp_mod(&h, &m), target))
}

// -- integer coefficient-vector helpers (low-degree-first, trimmed) --------

fn zp_trimmed(mut v: Vec<BigInt>) -> Vec<BigInt> {
    while v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
    v
}

fn zp_add(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let n = a.len().max(b.len());
    zp_trimmed(
        (0..n)
            .map(|i| {
                a.get(i).cloned().unwrap_or_default() + b.get(i).cloned().unwrap_or_default()
            })
            .collect(),
    )
}

fn zp_sub(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let n = a.len().max(b.len());
    zp_trimmed(
        (0..n)
            .map(|i| {
                a.get(i).cloned().unwrap_or_default() - b.get(i).cloned().unwrap_or_default()
            })
            .collect(),
    )
}

fn zp_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    zp_trimmed(out)
}

fn zp_mod(a: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    zp_trimmed(a.iter().map(|c| c.mod_floor(m)).collect())
}

/// Division by a monic divisor with all coefficients reduced mod `m`.
fn zp_divmod_monic(a: &[BigInt], b: &[BigInt], m: &BigInt) -> (Vec<BigInt>, Vec<BigInt>) {
    debug_assert!(b.last().unwrap().is_one());
    let mut r = a.to_vec();
    if r.len() < b.len() {
        return (Vec::new(), zp_trimmed(r));
    }
    let mut q = vec![BigInt::zero(); r.len() - b.len() + 1];
    while r.len() >= b.len() {
        let shift = r.len() - b.len();
        let c = r.last().unwrap().clone();
        for (i, bc) in b.iter().enumerate() {
            let v = (&r[shift + i] - &c * bc).mod_floor(m);
            r[shift + i] = v;
        }
        q[shift] = c;
        r = zp_trimmed(r);
    }
    (zp_trimmed(q), r)
}

fn center_coeffs(a: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    let half = m / 2;
    zp_trimmed(
        a.iter()
            .map(|c| {
                let r = c.mod_floor(m);
                if r > half {
                    r - m
                } else {
                    r
                }
            })
            .collect(),
    )
}

fn centered_product(pool: &[Vec<BigInt>], combo: &[usize], m: &BigInt) -> Vec<BigInt> {
    let mut acc = vec![BigInt::one()];
    for &i in combo {
        acc = zp_mod(&zp_mul(&acc, &pool[i]), m);
    }
    center_coeffs(&acc, m)
}

fn int_poly_divides(a: &[BigInt], b: &[BigInt]) -> bool {
    // b monic; plain integer long division
    if b.len() > a.len() {
        return false;
    }
    let mut r = a.to_vec();
    while r.len() >= b.len() {
        let shift = r.len() - b.len();
        let c = r.last().unwrap().clone();
        for (i, bc) in b.iter().enumerate() {
            let v = &r[shift + i] - &c * bc;
            r[shift + i] = v;
        }
        r = zp_trimmed(r);
    }
    r.is_empty()
}

fn int_poly_div_exact(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut r = a.to_vec();
    let mut q = vec![BigInt::zero(); r.len() - b.len() + 1];
    while r.len() >= b.len() {
        let shift = r.len() - b.len();
        let c = r.last().unwrap().clone();
        for (i, bc) in b.iter().enumerate() {
            let v = &r[shift + i] - &c * bc;
            r[shift + i] = v;
        }
        q[shift] = c;
        r = zp_trimmed(r);
    }
    debug_assert!(r.is_empty());
    zp_trimmed(q)
}

fn next_combination(combo: &mut [usize], n: usize) -> bool {
    let k = combo.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if combo[i] < n - (k - i) {
            combo[i] += 1;
            for j in i + 1..k {
                combo[j] = combo[j - 1] + 1;
            }
            return true;
        }
    }
    false
}
