//! Invariant decompositions of the state space: primary components with
//! explicit commuting projectors built from the Bezout identity of the
//! coprime factor powers, generalized eigenspaces when the minimal
//! polynomial splits, deterministic splitting-field lifts, and planar
//! rotation-form blocks for simple irreducible quadratic factors.

use crate::error::{Error, Result};
use crate::factor::{self, Factorization};
use crate::field::{Field, FieldElement, MAX_FIELD_SIZE};
use crate::matrix::Matrix;
use crate::poly::Polynomial;

/// One primary component `V_i = ker(p_i(A)^(e_i))` with its projector.
#[derive(Debug, Clone)]
pub struct PrimaryComponent {
    pub factor: Polynomial,
    pub multiplicity: u32,
    pub basis: Vec<Vec<FieldElement>>,
    pub projector: Matrix,
}

impl PrimaryComponent {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "factor": self.factor.to_json(),
            "multiplicity": self.multiplicity,
            "dimension": self.basis.len(),
            "basis": self
                .basis
                .iter()
                .map(|v| serde_json::Value::Array(v.iter().map(FieldElement::to_json).collect()))
                .collect::<Vec<_>>(),
            "projector": self.projector.to_json(),
        })
    }
}

/// Splits the state space along the distinct irreducible factors of the
/// minimal polynomial. The projectors come from the Bezout identity
/// `sum_i q_i * (m_A / p_i^(e_i)) = 1`, so they commute, are idempotent,
/// sum to the identity, and annihilate each other pairwise.
pub fn primary_decomposition(a: &Matrix, seed: u64) -> Result<Vec<PrimaryComponent>> {
    let m = a.minimal_polynomial()?;
    let fac = factor::factor(&m, seed)?;
    let mut components = Vec::with_capacity(fac.factors.len());
    for (p, e) in &fac.factors {
        let mut power = Polynomial::one(a.field());
        for _ in 0..*e {
            power = &power * p;
        }
        let complement = m.div_exact(&power)?;
        // Bezout: alpha * complement + beta * power = 1
        let (d, alpha, _beta) = complement.extended_gcd(&power)?;
        assert!(d.is_one(), "factor powers are pairwise coprime");
        let idempotent = (&alpha * &complement).rem(&m)?;
        let projector = a.poly_eval(&idempotent)?;
        let basis = a.poly_eval(&power)?.kernel_basis();
        components.push(PrimaryComponent {
            factor: p.clone(),
            multiplicity: *e,
            basis,
            projector,
        });
    }
    let total: usize = components.iter().map(PrimaryComponent::dimension).sum();
    assert_eq!(total, a.rows(), "primary component dimensions must sum to n");
    Ok(components)
}

/// Primary components labeled by eigenvalues, when every irreducible
/// factor of the minimal polynomial is linear.
#[derive(Debug, Clone)]
pub enum Eigenspaces {
    Split(Vec<(FieldElement, Vec<Vec<FieldElement>>)>),
    /// The minimal polynomial does not split; carries the non-linear
    /// factors that obstruct it.
    NotSplit(Vec<Polynomial>),
}

pub fn generalized_eigenspaces(a: &Matrix, seed: u64) -> Result<Eigenspaces> {
    let components = primary_decomposition(a, seed)?;
    let nonlinear: Vec<Polynomial> = components
        .iter()
        .filter(|c| c.factor.degree() != Some(1))
        .map(|c| c.factor.clone())
        .collect();
    if !nonlinear.is_empty() {
        return Ok(Eigenspaces::NotSplit(nonlinear));
    }
    Ok(Eigenspaces::Split(
        components
            .into_iter()
            .map(|c| {
                // monic linear x + c0 has the root -c0
                let lambda = -&c.factor.coeff(0);
                (lambda, c.basis)
            })
            .collect(),
    ))
}

/// Smallest extension of a prime field over which the minimal polynomial
/// splits into linear factors: `F_(p^m)` for `m` the lcm of the degrees of
/// the irreducible factors, with the deterministically least irreducible
/// modulus of degree `m`. Entries embed as constants.
pub fn splitting_field_lift(a: &Matrix, seed: u64) -> Result<(Field, Matrix)> {
    let field = a.field().clone();
    let p = match field.kind() {
        crate::field::FieldKind::Prime { p } => *p,
        _ => {
            return Err(Error::UnsupportedField(
                "splitting-field lift starts from a prime field".into(),
            ))
        }
    };
    let m_a = a.minimal_polynomial()?;
    let fac = factor::factor(&m_a, seed)?;
    let mut m = 1u64;
    for (g, _) in &fac.factors {
        m = intnum_lcm(m, g.degree().unwrap() as u64);
    }
    if m == 1 {
        return Ok((field, a.clone()));
    }
    match p.checked_pow(m as u32) {
        Some(q) if q < MAX_FIELD_SIZE => {}
        _ => {
            return Err(Error::ExtensionTooLarge(format!(
                "splitting field F_{p}^{m} is not below 2^31"
            )))
        }
    }
    let modulus = least_irreducible_modulus(p, m as usize)?;
    let ext = Field::extension(p, modulus)?;
    let lifted = Matrix::from_fn(&ext, a.rows(), a.cols(), |i, j| {
        let r = a.get(i, j).as_residue().expect("prime field entries");
        ext.ext_from_coeffs(&[r]).unwrap()
    });
    Ok((ext, lifted))
}

fn intnum_lcm(a: u64, b: u64) -> u64 {
    crate::intnum::lcm_checked(a, b).expect("factor degrees are tiny")
}

/// Least monic irreducible of the given degree, scanning coefficient
/// tuples in enumeration-index order (highest-degree coefficient most
/// significant).
fn least_irreducible_modulus(p: u64, degree: usize) -> Result<Vec<u64>> {
    let base = Field::prime(p)?;
    let total = p.pow(degree as u32);
    for idx in 0..total {
        let mut coeffs = Vec::with_capacity(degree + 1);
        let mut rest = idx;
        for _ in 0..degree {
            coeffs.push(rest % p);
            rest /= p;
        }
        coeffs.push(1);
        let candidate = Polynomial::from_residues(&base, &coeffs);
        if factor::is_irreducible(&candidate)? {
            return Ok(coeffs);
        }
    }
    unreachable!("irreducibles of every degree exist over F_p")
}

/// Two-dimensional invariant block for a simple irreducible quadratic
/// factor: rotation form `[[a, b], [-b, a]]` when `b = sqrt(c0 - a^2)`
/// exists in the field, companion form on `(v, Av)` otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlockForm {
    Rotation,
    Companion,
}

#[derive(Debug, Clone)]
pub struct PlanarBlock {
    pub factor: Polynomial,
    /// Half-trace of the factor.
    pub a: FieldElement,
    /// Rotation coefficient with `a^2 + b^2 = c0`; absent in companion form.
    pub b: Option<FieldElement>,
    pub form: BlockForm,
    pub basis_u: Vec<FieldElement>,
    pub basis_w: Vec<FieldElement>,
}

impl PlanarBlock {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "factor": self.factor.to_json(),
            "a": self.a.to_json(),
            "b": self.b.as_ref().map(FieldElement::to_json).unwrap_or(serde_json::Value::Null),
            "form": match self.form {
                BlockForm::Rotation => "rotation",
                BlockForm::Companion => "companion",
            },
            "basis": [
                self.basis_u.iter().map(FieldElement::to_json).collect::<Vec<_>>(),
                self.basis_w.iter().map(FieldElement::to_json).collect::<Vec<_>>(),
            ],
        })
    }
}

/// Planar blocks for the multiplicity-one irreducible quadratic factors of
/// the minimal polynomial. Higher-multiplicity quadratic factors stay with
/// the primary decomposition and produce no block here. Rejects
/// characteristic two, where the half-trace division is undefined.
pub fn planar_blocks(a: &Matrix, seed: u64) -> Result<Vec<PlanarBlock>> {
    let field = a.field().clone();
    if field.characteristic() == 2 {
        return Err(Error::CharacteristicTwo);
    }
    let m = a.minimal_polynomial()?;
    let fac: Factorization = factor::factor(&m, seed)?;
    let two_inv = field.int(2).inv()?;
    let mut blocks = Vec::new();
    for (p, e) in &fac.factors {
        if p.degree() != Some(2) || *e != 1 {
            continue;
        }
        // p = x^2 - c1 x + c0
        let c1 = -&p.coeff(1);
        let c0 = p.coeff(0);
        let half = &c1 * &two_inv;
        let b_squared = &c0 - &(&half * &half);
        let v = cyclic_vector_for_factor(a, &m, p)?;
        let av = a.matvec(&v);
        match b_squared.sqrt() {
            Some(b) => {
                assert!(!b.is_zero(), "irreducible quadratic has a nonzero rotation part");
                let b_inv = b.inv()?;
                // w = (a*v - Av) / b makes Au = au - bw hold by construction
                let w: Vec<FieldElement> = v
                    .iter()
                    .zip(&av)
                    .map(|(vi, avi)| &(&(&half * vi) - avi) * &b_inv)
                    .collect();
                // verify the stated relations exactly
                let aw = a.matvec(&w);
                for i in 0..v.len() {
                    let lhs = &av[i];
                    let rhs = &(&half * &v[i]) - &(&b * &w[i]);
                    assert_eq!(lhs, &rhs, "Au = au - bw failed");
                    let lhs2 = &aw[i];
                    let rhs2 = &(&b * &v[i]) + &(&half * &w[i]);
                    assert_eq!(lhs2, &rhs2, "Aw = bu + aw failed");
                }
                blocks.push(PlanarBlock {
                    factor: p.clone(),
                    a: half.clone(),
                    b: Some(b),
                    form: BlockForm::Rotation,
                    basis_u: v,
                    basis_w: w,
                });
            }
            None => {
                blocks.push(PlanarBlock {
                    factor: p.clone(),
                    a: half.clone(),
                    b: None,
                    form: BlockForm::Companion,
                    basis_u: v,
                    basis_w: av,
                });
            }
        }
    }
    Ok(blocks)
}

/// First standard basis vector not annihilated by the complementary factor
/// product, projected into the component: the columns of
/// `(m_A / p)(A)` are scanned in order.
fn cyclic_vector_for_factor(
    a: &Matrix,
    m: &Polynomial,
    p: &Polynomial,
) -> Result<Vec<FieldElement>> {
    let complement = m.div_exact(p)?;
    let image = a.poly_eval(&complement)?;
    for j in 0..image.cols() {
        let col = image.column(j);
        if col.iter().any(|c| !c.is_zero()) {
            return Ok(col);
        }
    }
    unreachable!("the complementary product cannot annihilate the whole space")
}
