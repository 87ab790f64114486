//! Time representations: a time group acting on `k^n` through powers of a
//! generator matrix, with the homomorphism law, trajectory evolution, the
//! polynomial-algebra action, the `k[x]/(x^T - 1)` module action, and the
//! quotient from integer time to cyclic time.

use std::fmt;

use crate::dynamics;
use crate::error::{Error, Result};
use crate::factor;
use crate::field::{Field, FieldElement};
use crate::intnum;
use crate::matrix::Matrix;
use crate::poly::Polynomial;
use crate::prng::Prng;

/// Default number of sampled pairs for homomorphism checks.
pub const DEFAULT_HOM_TRIALS: u32 = 256;

/// Sampling range for time arguments in homomorphism checks: `|t| <= 2^16`.
pub const HOM_SAMPLE_BOUND: i64 = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TimeGroup {
    /// The integers; requires an invertible generator.
    Integers,
    /// The additive semigroup of nonnegative integers; the generator may be
    /// singular.
    Naturals,
    /// Integers modulo `T`; requires `generator^T = I`.
    CyclicMod(u64),
}

impl TimeGroup {
    pub fn to_json(&self) -> serde_json::Value {
        match self {
            TimeGroup::Integers => serde_json::json!({"kind": "integers"}),
            TimeGroup::Naturals => serde_json::json!({"kind": "naturals"}),
            TimeGroup::CyclicMod(t) => serde_json::json!({"kind": "cyclic", "T": t}),
        }
    }

    pub fn from_json(v: &serde_json::Value) -> Result<TimeGroup> {
        let obj = v
            .as_object()
            .ok_or_else(|| Error::InvalidDocument("group must be an object".into()))?;
        let kind = obj
            .get("kind")
            .and_then(|k| k.as_str())
            .ok_or_else(|| Error::InvalidDocument("group.kind must be a string".into()))?;
        match kind {
            "integers" => Ok(TimeGroup::Integers),
            "naturals" => Ok(TimeGroup::Naturals),
            "cyclic" => {
                let t = obj.get("T").and_then(|t| t.as_u64()).ok_or_else(|| {
                    Error::InvalidDocument("cyclic group needs a positive integer T".into())
                })?;
                if t == 0 {
                    return Err(Error::UnsupportedGroup("cyclic modulus must be >= 1".into()));
                }
                Ok(TimeGroup::CyclicMod(t))
            }
            other => Err(Error::UnsupportedGroup(format!(
                "kind {other:?} (supported: integers, naturals, cyclic)"
            ))),
        }
    }
}

impl fmt::Display for TimeGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TimeGroup::Integers => write!(f, "Z"),
            TimeGroup::Naturals => write!(f, "N"),
            TimeGroup::CyclicMod(t) => write!(f, "Z/{t}Z"),
        }
    }
}

/// A representation of a time group on `k^n`, generated by the transition
/// matrix `A = rho(1)`. Immutable once constructed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Representation {
    group: TimeGroup,
    field: Field,
    dim: usize,
    generator: Matrix,
}

/// Outcome of a sampled homomorphism check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomReport {
    pub trials: u32,
    pub pass: bool,
    /// First failing `(t1, t2)` pair, if any.
    pub counterexample: Option<(i64, i64)>,
}

impl Representation {
    /// Validates the group/generator compatibility: integer time needs an
    /// invertible generator, cyclic time additionally needs `A^T = I`.
    pub fn new(group: TimeGroup, generator: Matrix) -> Result<Representation> {
        if !generator.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "generator is {}x{}",
                generator.rows(),
                generator.cols()
            )));
        }
        let field = generator.field().clone();
        let dim = generator.rows();
        match group {
            TimeGroup::Integers => {
                generator.inverse()?;
            }
            TimeGroup::CyclicMod(t) => {
                if t == 0 {
                    return Err(Error::UnsupportedGroup("cyclic modulus must be >= 1".into()));
                }
                if !generator.pow_checked(t)?.is_identity() {
                    return Err(Error::NotPeriodic(format!(
                        "generator^{t} is not the identity"
                    )));
                }
            }
            TimeGroup::Naturals => {}
        }
        Ok(Representation {
            group,
            field,
            dim,
            generator,
        })
    }

    pub fn group(&self) -> TimeGroup {
        self.group
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generator(&self) -> &Matrix {
        &self.generator
    }

    /// Reduce a time argument to a nonnegative exponent, enforcing the
    /// group's admissibility rules.
    fn exponent(&self, t: i64) -> Result<Exponent> {
        match self.group {
            TimeGroup::Naturals => {
                if t < 0 {
                    Err(Error::NegativeTimeForSemigroup)
                } else {
                    Ok(Exponent::Forward(t as u64))
                }
            }
            TimeGroup::Integers => {
                if t >= 0 {
                    Ok(Exponent::Forward(t as u64))
                } else {
                    Ok(Exponent::Backward(t.unsigned_abs()))
                }
            }
            TimeGroup::CyclicMod(tm) => {
                let m = tm as i128;
                let red = ((t as i128 % m) + m) % m;
                Ok(Exponent::Forward(red as u64))
            }
        }
    }

    /// `rho(t) = A^t` by binary exponentiation.
    pub fn rho(&self, t: i64) -> Result<Matrix> {
        match self.exponent(t)? {
            Exponent::Forward(e) => self.generator.pow_checked(e),
            Exponent::Backward(e) => self.generator.inverse()?.pow_checked(e),
        }
    }

    /// `x_t = rho(t) x_0`.
    pub fn evolve(&self, x0: &[FieldElement], t: i64) -> Result<Vec<FieldElement>> {
        if x0.len() != self.dim {
            return Err(Error::DimensionMismatch(format!(
                "state of length {} against dimension {}",
                x0.len(),
                self.dim
            )));
        }
        // apply the matrix power to the vector without materializing rho(t)
        // beyond one matrix (binary exponentiation on the matrix, then one
        // product); at desk scale the matrix power dominates anyway
        Ok(self.rho(t)?.matvec(x0))
    }

    /// Samples `(t1, t2)` pairs and checks `rho(t1 + t2) = rho(t1) rho(t2)`
    /// and `rho(0) = I`. Failures are reported, not raised, so corrupted
    /// upstream state can be flagged.
    pub fn check_homomorphism(&self, trials: u32, seed: u64) -> HomReport {
        check_homomorphism_with(self.group, trials, seed, |t| {
            self.rho(t).expect("sampled times are admissible")
        })
    }

    /// `f(A) v` by Horner's scheme on vectors: deg(f) matrix-vector
    /// products, no matrix powers materialized.
    pub fn poly_action(&self, f: &Polynomial, v: &[FieldElement]) -> Result<Vec<FieldElement>> {
        if f.field() != &self.field {
            return Err(Error::FieldMismatch(
                self.field.to_string(),
                f.field().to_string(),
            ));
        }
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} against dimension {}",
                v.len(),
                self.dim
            )));
        }
        Ok(self.generator.poly_apply(f, v))
    }

    /// Action of `k[x]/(x^T - 1)` on the state space: reduces `f` modulo
    /// `x^T - 1` by folding exponents, then applies the polynomial action.
    /// Requires cyclic time.
    pub fn module_action(&self, f: &Polynomial, v: &[FieldElement]) -> Result<Vec<FieldElement>> {
        let TimeGroup::CyclicMod(t) = self.group else {
            return Err(Error::WrongTimeGroup(format!(
                "module action needs cyclic time, got {}",
                self.group
            )));
        };
        let reduced = if f.degree().map(|d| (d as u64) < t).unwrap_or(true) {
            f.clone()
        } else {
            let t = t as usize;
            let mut coeffs = vec![self.field.zero(); t];
            for (i, c) in f.coeffs().iter().enumerate() {
                let slot = i % t;
                coeffs[slot] = &coeffs[slot] + c;
            }
            Polynomial::from_coeffs(&self.field, coeffs)
        };
        self.poly_action(&reduced, v)
    }

    /// Quotient a faithful integer-time representation to cyclic time at
    /// the minimal period `T` with `A^T = I`.
    ///
    /// Finite fields delegate to the order computation; over the rationals
    /// finite order is decided by matching the minimal polynomial against
    /// cyclotomic polynomials up to the 'phi(N) <= n' bound.
    pub fn induce_quotient(&self) -> Result<Representation> {
        if self.group != TimeGroup::Integers {
            return Err(Error::WrongTimeGroup(format!(
                "quotient induction starts from integer time, got {}",
                self.group
            )));
        }
        let t = if self.field.is_finite() {
            dynamics::order_of_matrix(&self.generator)?
        } else {
            self.rational_order()?
        };
        let quotient = Representation::new(TimeGroup::CyclicMod(t), self.generator.clone())?;
        // commuting-diagram spot check on sampled times
        let mut rng = Prng::new(0x5eed);
        for _ in 0..16 {
            let s = rng.range_i64(-HOM_SAMPLE_BOUND, HOM_SAMPLE_BOUND);
            assert_eq!(
                self.rho(s)?,
                quotient.rho(s)?,
                "quotient disagrees with the integer representation at t = {s}"
            );
        }
        Ok(quotient)
    }

    /// Minimal finite order of a rational matrix. The minimal polynomial
    /// must be squarefree with every irreducible factor cyclotomic of index
    /// N with phi(N) <= n; otherwise the order is infinite.
    fn rational_order(&self) -> Result<u64> {
        let n = self.dim as u64;
        let m = self.generator.minimal_polynomial()?;
        if !m.gcd(&m.derivative()).is_one() {
            return Err(Error::InfiniteOrder);
        }
        let bound = 2 * n * n;
        let mut residual = m;
        let mut order = 1u64;
        for idx in 1..=bound {
            if residual.is_one() {
                break;
            }
            if intnum::euler_phi(idx) > n {
                continue;
            }
            let phi = factor::cyclotomic(idx);
            if phi.divides(&residual) {
                residual = residual.div_exact(&phi)?;
                order = intnum::lcm_checked(order, idx)?;
            }
        }
        if !residual.is_one() {
            return Err(Error::InfiniteOrder);
        }
        debug_assert!(self.generator.pow_checked(order)?.is_identity());
        Ok(order)
    }

    /// Annihilator of a state vector: the monic generator of the ideal of
    /// polynomials `f` with `f(A)v = 0`. The zero vector yields 1.
    pub fn annihilator(&self, v: &[FieldElement]) -> Result<Polynomial> {
        self.generator.krylov_annihilator(v)
    }
}

enum Exponent {
    Forward(u64),
    Backward(u64),
}

/// Homomorphism check over an arbitrary `rho` provider, so tests can feed
/// a corrupted table as a negative control.
pub(crate) fn check_homomorphism_with(
    group: TimeGroup,
    trials: u32,
    seed: u64,
    rho: impl Fn(i64) -> Matrix,
) -> HomReport {
    let identity_ok = {
        let r0 = rho(0);
        r0.is_identity()
    };
    if !identity_ok {
        return HomReport {
            trials,
            pass: false,
            counterexample: Some((0, 0)),
        };
    }
    let mut rng = Prng::new(seed);
    let lo = match group {
        TimeGroup::Naturals => 0,
        _ => -HOM_SAMPLE_BOUND,
    };
    for _ in 0..trials {
        let t1 = rng.range_i64(lo, HOM_SAMPLE_BOUND);
        let t2 = rng.range_i64(lo, HOM_SAMPLE_BOUND);
        let combined = rho(t1 + t2);
        let split = &rho(t1) * &rho(t2);
        if combined != split {
            return HomReport {
                trials,
                pass: false,
                counterexample: Some((t1, t2)),
            };
        }
    }
    HomReport {
        trials,
        pass: true,
        counterexample: None,
    }
}

/// Build the representation defined by a module over `k[x]/(x^T - 1)`:
/// the action of `x` is the generator, and `action^T = I` must hold.
pub fn from_module_action(t: u64, action: Matrix) -> Result<Representation> {
    if t == 0 {
        return Err(Error::UnsupportedGroup("cyclic modulus must be >= 1".into()));
    }
    if !action.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "action matrix is {}x{}",
            action.rows(),
            action.cols()
        )));
    }
    if !action.pow_checked(t)?.is_identity() {
        return Err(Error::NotPeriodic(format!(
            "action^{t} != I, so x^T v = v fails"
        )));
    }
    Representation::new(TimeGroup::CyclicMod(t), action)
}
